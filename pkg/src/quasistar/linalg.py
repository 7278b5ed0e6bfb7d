"""Dense complex linear algebra against a non-Euclidean inner product.

Coordinates live in ``C^n`` with the inner product ``(a|b) = b^H G a``
(linear in the first slot). Antilinear operators are stored by the matrix
``M`` of the action ``v -> M conj(v)``.
"""

from __future__ import annotations

import numpy as np

from ._tolerances import DEFAULT_TOL, Tolerances

__all__ = [
    "AntilinearMap",
    "GramFrame",
    "SingularOperatorError",
    "antilinear_adjoint",
    "antilinear_opnorm",
    "check_gram",
    "gram_opnorm",
    "hermitianize",
    "inner",
    "matrix_power",
    "nullspace",
    "polar_antilinear",
]


class SingularOperatorError(ValueError):
    """An operator that must be invertible (or positive definite) is not."""


def hermitianize(A: np.ndarray) -> np.ndarray:
    return (A + A.conj().T) / 2


def _as_complex(A) -> np.ndarray:
    return np.asarray(A, dtype=complex)


class AntilinearMap:
    """Conjugate-linear operator ``v -> M conj(v)``.

    Composition follows the ``@`` operator: antilinear @ antilinear is a
    plain (linear) ndarray, antilinear @ linear and linear @ antilinear
    stay antilinear.
    """

    __array_ufunc__ = None  # make ndarray @ AntilinearMap defer to __rmatmul__

    def __init__(self, matrix):
        M = np.array(matrix, dtype=complex)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError(f"antilinear map needs a square matrix, got shape {M.shape}")
        M.setflags(write=False)
        self.matrix = M

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __call__(self, v) -> np.ndarray:
        return self.matrix @ np.conj(_as_complex(v))

    def __matmul__(self, other):
        if isinstance(other, AntilinearMap):
            return self.matrix @ other.matrix.conj()
        return AntilinearMap(self.matrix @ np.conj(_as_complex(other)))

    def __rmatmul__(self, other):
        return AntilinearMap(_as_complex(other) @ self.matrix)

    def __sub__(self, other: AntilinearMap) -> AntilinearMap:
        return AntilinearMap(self.matrix - other.matrix)

    def __repr__(self) -> str:
        return f"AntilinearMap(dim={self.dim})"

    def is_involutive(self, tol: float = DEFAULT_TOL.eq) -> bool:
        sq = self @ self
        return np.linalg.norm(sq - np.eye(self.dim)) <= tol * max(1.0, np.linalg.norm(sq))


def check_gram(G, tol: Tolerances = DEFAULT_TOL) -> list[tuple[str, float]]:
    """Return ``(name, residual)`` for each Gram-matrix invariant that fails."""
    G = _as_complex(G)
    problems = []
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        return [("gram.shape", float("inf"))]
    if not np.all(np.isfinite(G)):
        return [("gram.finite", float("inf"))]
    if G.shape[0] == 0:
        return []
    scale = max(np.abs(G).max(), np.finfo(float).tiny)
    herm = float(np.abs(G - G.conj().T).max() / scale)
    if herm > tol.herm:
        problems.append(("gram.hermitian", herm))
        return problems
    w = np.linalg.eigvalsh(hermitianize(G))
    if w[0] <= 0:
        problems.append(("gram.positive-definite", float(-w[0] / scale)))
    return problems


class GramFrame:
    """Change of basis ``w = G^{1/2} v`` that turns ``G`` into the identity.

    All contracts are stated in the original frame; the orthonormal frame
    is only used internally for conditioning.
    """

    def __init__(self, G):
        G = hermitianize(_as_complex(G))
        self.G = G
        n = G.shape[0]
        if n == 0:
            self.W = self.W_inv = np.zeros((0, 0), dtype=complex)
            return
        g, U = np.linalg.eigh(G)
        if g[0] <= 0:
            raise SingularOperatorError("Gram matrix is not positive definite")
        self.W = (U * np.sqrt(g)) @ U.conj().T
        self.W_inv = (U / np.sqrt(g)) @ U.conj().T

    def linear_in(self, X: np.ndarray) -> np.ndarray:
        return self.W @ X @ self.W_inv

    def linear_out(self, X: np.ndarray) -> np.ndarray:
        return self.W_inv @ X @ self.W

    def anti_in(self, M: np.ndarray) -> np.ndarray:
        return self.W @ M @ self.W_inv.conj()

    def anti_out(self, M: np.ndarray) -> np.ndarray:
        return self.W_inv @ M @ self.W.conj()


def inner(a, b, G) -> complex:
    """``(a|b) = b^H G a``."""
    a, b, G = _as_complex(a), _as_complex(b), _as_complex(G)
    if a.shape != b.shape or G.shape != (a.shape[0], a.shape[0]):
        raise ValueError(f"dimension mismatch: a{a.shape}, b{b.shape}, G{G.shape}")
    return complex(b.conj() @ G @ a)


def antilinear_adjoint(T: AntilinearMap, G) -> AntilinearMap:
    """Adjoint defined by ``(T a | b) = (T* b | a)``; matrix ``G^-1 M^T conj(G)``."""
    G = _as_complex(G)
    if G.shape != T.matrix.shape:
        raise ValueError("dimension mismatch between map and Gram matrix")
    return AntilinearMap(np.linalg.solve(G, T.matrix.T @ G.conj()))


def gram_opnorm(L, G, G_target=None) -> float:
    """Operator norm of ``L`` from ``(C^n, G)`` into ``(C^m, G_target)``.

    ``G_target`` defaults to ``G`` (square case).
    """
    L = _as_complex(L)
    G = _as_complex(G)
    Gt = G if G_target is None else _as_complex(G_target)
    if L.ndim != 2 or L.shape != (Gt.shape[0], G.shape[0]):
        raise ValueError(f"dimension mismatch: L{L.shape}, G{G.shape}, target{Gt.shape}")
    if L.size == 0:
        return 0.0
    src, dst = GramFrame(G), GramFrame(Gt)
    return float(np.linalg.norm(dst.W @ L @ src.W_inv, 2))


def antilinear_opnorm(T: AntilinearMap, G) -> float:
    if T.dim == 0:
        return 0.0
    frame = GramFrame(G)
    return float(np.linalg.norm(frame.anti_in(T.matrix), 2))


def nullspace(M, tol_rank: float = DEFAULT_TOL.rank) -> list[np.ndarray]:
    """Orthonormal basis of ``{v : M v = 0}``; rank cut at ``tol_rank * sigma_max``."""
    M = _as_complex(M)
    if M.ndim != 2:
        raise ValueError("nullspace needs a matrix")
    n = M.shape[1]
    if n == 0:
        return []
    if M.shape[0] == 0:
        return list(np.eye(n, dtype=complex))
    _, s, Vh = np.linalg.svd(M)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > tol_rank * smax)) if smax > 0 else 0
    return [Vh[k].conj() for k in range(rank, n)]


def _positive_spectrum(Dt: np.ndarray, tol_pd: float):
    w, V = np.linalg.eigh(hermitianize(Dt))
    if w.size and w[0] <= tol_pd * max(w[-1], 0.0):
        raise SingularOperatorError(
            f"operator is not positive definite (smallest eigenvalue {w[0]:.3e})"
        )
    return w, V


def matrix_power(Delta, alpha: complex, G, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``Delta^alpha`` for a G-self-adjoint positive definite ``Delta``.

    Uses the principal logarithm of the (strictly positive) eigenvalues.
    """
    Delta = _as_complex(Delta)
    if Delta.shape[0] == 0:
        return Delta.copy()
    frame = GramFrame(G)
    Dt = frame.linear_in(Delta)
    scale = max(np.abs(Dt).max(), np.finfo(float).tiny)
    if np.abs(Dt - Dt.conj().T).max() > tol.eq * scale:
        raise ValueError("Delta is not self-adjoint with respect to G")
    w, V = _positive_spectrum(Dt, tol.pd)
    powered = np.exp(complex(alpha) * np.log(w))
    return frame.linear_out((V * powered) @ V.conj().T)


def polar_antilinear(S: AntilinearMap, G, tol: Tolerances = DEFAULT_TOL):
    """Polar decomposition ``S = J Delta^{1/2}`` of an invertible antilinear map.

    Returns ``(J, Delta)`` with ``Delta = S* S`` linear, G-self-adjoint and
    positive definite, and ``J`` antilinear and G-isometric.
    """
    frame = GramFrame(G)
    Mt = frame.anti_in(S.matrix)
    # adjoint in the orthonormal frame is the plain transpose
    Dt = hermitianize(Mt.T @ Mt.conj())
    w, V = _positive_spectrum(Dt, tol.pd)
    inv_sqrt = (V / np.sqrt(w)) @ V.conj().T
    Jt = Mt @ inv_sqrt.conj()
    return AntilinearMap(frame.anti_out(Jt)), frame.linear_out(Dt)
