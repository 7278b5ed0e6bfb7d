"""scikit-learn style wrappers.

``fit`` takes an algebra (an AlgebraSpec, a parsed dict or a file path)
instead of a data matrix; ``transform`` acts on rows of coordinate vectors.
The wrappers only cache results of the functional API.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .gns import FormSpec, gns_construct, verify_homomorphism
from .modular import modular_data, standardness
from .validation import check_coordinates, check_spec, check_tolerances

__all__ = ["GNSTransformer", "ModularConjugation", "ModularFlow"]


class _SpecEstimator(TransformerMixin, BaseEstimator):
    def _tol(self):
        return check_tolerances(self.tol_eq, self.tol_rank, self.tol_pd)

    def _fit_spec(self, spec):
        tol = self._tol()
        self.spec_ = check_spec(spec, tol)
        self.n_features_in_ = self.spec_.dim
        return tol

    def _coords(self, X):
        check_is_fitted(self, "spec_")
        return check_coordinates(X, self.n_features_in_)


class ModularFlow(_SpecEstimator):
    """Apply ``Delta^alpha`` to coordinate vectors.

    Parameters
    ----------
    alpha : complex
        Power of the modular operator; ``alpha = i t`` gives the modular
        automorphism group.
    """

    def __init__(self, alpha=1j, tol_eq=None, tol_rank=None, tol_pd=None):
        self.alpha = alpha
        self.tol_eq = tol_eq
        self.tol_rank = tol_rank
        self.tol_pd = tol_pd

    def fit(self, spec, y=None):
        tol = self._fit_spec(spec)
        md = modular_data(self.spec_, tol)
        self.modular_data_ = md
        self.spectrum_ = md.spectrum()
        self.power_ = md.power(complex(self.alpha), tol)
        self.standard_ = standardness(self.spec_, md, tol).standard
        return self

    def transform(self, X):
        X = self._coords(X)
        return X @ self.power_.T

    def inverse_transform(self, X):
        X = self._coords(X)
        return np.linalg.solve(self.power_, X.T).T


class ModularConjugation(_SpecEstimator):
    """Apply the modular conjugation ``J`` (antilinear) to coordinate vectors."""

    def __init__(self, tol_eq=None, tol_rank=None, tol_pd=None):
        self.tol_eq = tol_eq
        self.tol_rank = tol_rank
        self.tol_pd = tol_pd

    def fit(self, spec, y=None):
        tol = self._fit_spec(spec)
        self.J_ = modular_data(self.spec_, tol).J
        return self

    def transform(self, X):
        X = self._coords(X)
        return X.conj() @ self.J_.matrix.T

    inverse_transform = transform


class GNSTransformer(_SpecEstimator):
    """Map coordinates into the GNS quotient of a positive form.

    ``form=None`` uses the inner product of the algebra itself.
    """

    def __init__(self, form=None, tol_eq=None, tol_rank=None, tol_pd=None):
        self.form = form
        self.tol_eq = tol_eq
        self.tol_rank = tol_rank
        self.tol_pd = tol_pd

    def fit(self, spec, y=None):
        tol = self._fit_spec(spec)
        if self.form is None:
            form = FormSpec(self.spec_.gram)
        elif isinstance(self.form, FormSpec):
            form = self.form
        else:
            form = FormSpec(np.asarray(self.form))
        res = gns_construct(self.spec_, form, tol=tol)
        self.result_ = res
        self.phi_map_ = res.phi_map
        self.quotient_spec_ = res.quotient_spec
        self.null_dim_ = res.null_dim
        self.faithful_ = res.faithful
        self.standard_ = res.standard
        self.homomorphism_ = verify_homomorphism(res.phi_map, self.spec_, res.quotient_spec, tol)
        return self

    def transform(self, X):
        X = self._coords(X)
        return X @ self.phi_map_.T

    def inverse_transform(self, Q):
        """Lift back to the orthogonal complement of the null space."""
        check_is_fitted(self, "phi_map_")
        Q = check_coordinates(Q, self.phi_map_.shape[0])
        return Q @ self.result_.lift.T
