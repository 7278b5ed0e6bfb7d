"""Input coercion shared by the estimator layer.

sklearn's ``check_array`` refuses complex input, so coordinate arrays are
validated here.
"""

from __future__ import annotations

from os import PathLike

import numpy as np

from ._tolerances import DEFAULT_TOL, Tolerances
from .algebra import AlgebraSpec, validate_spec
from .io import SpecValidationError, algebra_from_dict, parse_algebra

__all__ = ["check_coordinates", "check_spec", "check_tolerances"]


def check_spec(spec, tol: Tolerances = DEFAULT_TOL, validate: bool = True) -> AlgebraSpec:
    """Accept an AlgebraSpec, a parsed-file dict or a path to an algebra file."""
    if isinstance(spec, AlgebraSpec):
        if validate:
            bad = validate_spec(spec, tol)
            if bad:
                raise SpecValidationError(
                    "invalid algebra: " + ", ".join(c.name for c in bad), bad)
        return spec
    if isinstance(spec, dict):
        return algebra_from_dict(spec, tol, validate)
    if isinstance(spec, (str, PathLike)):
        return parse_algebra(spec, tol, validate)
    raise TypeError(f"expected an AlgebraSpec, dict or path, got {type(spec).__name__}")


def check_coordinates(X, dim: int, allow_1d: bool = True) -> np.ndarray:
    """Rows of coordinate vectors as a 2-D complex array of width ``dim``."""
    X = np.asarray(X)
    if X.dtype == object or not (np.issubdtype(X.dtype, np.number) or X.dtype == bool):
        raise TypeError(f"coordinates must be numeric, got dtype {X.dtype}")
    X = X.astype(complex)
    if X.ndim == 1 and allow_1d:
        X = X[None, :]
    if X.ndim != 2:
        raise ValueError(f"expected a 2-D array of coordinates, got shape {X.shape}")
    if X.shape[1] != dim:
        raise ValueError(f"X has {X.shape[1]} columns, the algebra has dimension {dim}")
    if not np.all(np.isfinite(X)):
        raise ValueError("coordinates contain NaN or infinity")
    return X


def check_tolerances(tol_eq=None, tol_rank=None, tol_pd=None) -> Tolerances:
    vals = {"eq": tol_eq, "rank": tol_rank, "pd": tol_pd}
    out = DEFAULT_TOL.as_dict()
    for k, v in vals.items():
        if v is None:
            continue
        v = float(v)
        if not np.isfinite(v) or v <= 0:
            raise ValueError(f"tol_{k} must be a positive number, got {v}")
        out[k] = v
    return Tolerances(**out)
