"""HCQ*-algebras: certification, the induced strict CQ*-structure, and
generators of standard examples."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._tolerances import DEFAULT_TOL, Tolerances
from .algebra import (
    AlgebraSpec,
    NormReport,
    check_banach_conditions,
    left_mult,
    norm,
    sample_vectors,
    sharp_norm,
)
from .diagnostics import CheckList
from .linalg import AntilinearMap, polar_antilinear
from .modular import generated_algebra

__all__ = [
    "HcqReport",
    "NotCyclicError",
    "NotHCQError",
    "NotSeparatingError",
    "check_hcq",
    "gen_commutative",
    "gen_from_cyclic_vector",
    "gen_matrix_state",
    "hcq_to_strict",
]


class NotHCQError(ValueError):
    """Raised when an operation needs an HCQ*-algebra and the check failed."""


class NotCyclicError(ValueError):
    pass


class NotSeparatingError(ValueError):
    pass


@dataclass
class HcqReport:
    is_hcq: bool
    is_strict_cq: bool
    sharp_adjoint_residual: float
    norm_domination_margin: float
    checks: CheckList = field(default_factory=CheckList)
    witness: np.ndarray | None = None


def check_hcq(spec: AlgebraSpec, tol: Tolerances = DEFAULT_TOL,
              n_random: int = 64, seed: int = 0) -> HcqReport:
    """``L_x^* = L_{x^#}`` on the basis and ``||x|| <= ||L_x||`` on samples."""
    n = spec.dim
    G = spec.gram
    basis = spec.basis()
    adj = 0.0
    for b in basis:
        L = left_mult(spec, b)
        Lstar = np.linalg.solve(G, L.conj().T @ G)
        Ls = left_mult(spec, spec.sharp(b))
        scale = max(np.abs(L).max(), np.abs(Ls).max(), 1.0)
        adj = max(adj, float(np.abs(Lstar - Ls).max() / scale))

    samples = [b for b in basis]
    if n:
        samples.append(basis.sum(axis=0))
        samples.extend(sample_vectors(n, n_random, seed))
    margin = np.inf
    witness = None
    for x in samples:
        nx = norm(spec, x)
        if nx == 0:
            continue
        x = x / nx
        m = sharp_norm(spec, x) - 1.0
        if m < margin:
            margin, witness = m, x
    margin = float(margin) if np.isfinite(margin) else 0.0

    checks = CheckList()
    checks.add("hcq.sharp-adjoint", adj <= tol.eq, adj, "L_x^* = L_{x^#}")
    dom_ok = margin >= -tol.ineq
    checks.add("hcq.norm-domination", dom_ok, max(-margin, 0.0), "||x|| <= ||L_x||")
    is_hcq = checks.ok
    strict = is_hcq and check_banach_conditions(spec, tol, n_random, seed).ok
    return HcqReport(is_hcq=is_hcq, is_strict_cq=strict, sharp_adjoint_residual=adj,
                     norm_domination_margin=margin, checks=checks,
                     witness=None if dom_ok else witness)


def hcq_to_strict(spec: AlgebraSpec, tol: Tolerances = DEFAULT_TOL,
                  n_random: int = 64, seed: int = 0) -> NormReport:
    """The strict CQ*-structure ``||x||_# = ||L_x||`` of an HCQ*-algebra."""
    hcq = check_hcq(spec, tol, n_random, seed)
    if not hcq.is_hcq:
        failed = ", ".join(c.name for c in hcq.checks.failed)
        raise NotHCQError(f"not an HCQ*-algebra ({failed}); no strict CQ*-structure derived")
    report = check_banach_conditions(spec, tol, n_random, seed)
    report.notes.append("C*-norm taken as ||x||_# = ||L_x|| (L is a faithful *-representation)")
    return report


def _parse_positive(values, name: str) -> np.ndarray:
    out = []
    for v in values:
        out.append(float(Fraction(v)) if isinstance(v, str) else float(v))
    arr = np.array(out, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty list")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise ValueError(f"{name} entries must be positive, got {arr.tolist()}")
    return arr


def _transpose_perm(n: int) -> np.ndarray:
    P = np.zeros((n * n, n * n))
    for i in range(n):
        for j in range(n):
            P[i * n + j, j * n + i] = 1.0
    return P


def gen_matrix_state(n: int, rho: Sequence) -> AlgebraSpec:
    """``M_n`` in the GNS picture of the faithful state ``tr(rho .)``.

    Coordinates are the matrix units ``e_ij`` in row-major order; sharp is
    the adjoint, the inner product is ``(x|y) = tr(rho y^H x)`` and star is
    ``x -> rho^{1/2} x^H rho^{-1/2}``, which is the modular conjugation, so
    the result is standard.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    n = int(n)
    r = _parse_positive(rho, "rho")
    if r.size != n:
        raise ValueError(f"rho needs {n} entries, got {r.size}")
    if abs(r.sum() - 1.0) > 1e-12:
        raise ValueError(f"rho must sum to 1, got {float(r.sum())!r}")
    d = n * n
    c = np.zeros((d, d, d))
    for i in range(n):
        for j in range(n):
            for l in range(n):
                c[i * n + j, j * n + l, i * n + l] = 1.0
    P = _transpose_perm(n)
    star = np.zeros((d, d))
    gram = np.zeros(d)
    for i in range(n):
        for j in range(n):
            star[i * n + j, j * n + i] = np.sqrt(r[i] / r[j])
            gram[i * n + j] = r[j]
    unit = np.eye(n).ravel()
    return AlgebraSpec(structure=c, star=star, sharp=P, gram=np.diag(gram), unit=unit)


def gen_commutative(weights: Sequence, twist: Sequence[int] | str | None = None) -> AlgebraSpec:
    """Pointwise algebra ``C^k`` with Gram ``diag(weights)``.

    ``sharp`` is complex conjugation and ``star`` is ``twist o conj`` for an
    involutive, weight-preserving permutation ``twist`` (``"swap"`` is
    shorthand for exchanging the first two coordinates).
    """
    w = _parse_positive(weights, "weights")
    k = w.size
    if w.sum() > 1.0 + 1e-12:
        raise ValueError(f"weights must sum to at most 1 (||x|| <= ||L_x||), got {float(w.sum())!r}")
    if twist is None or twist == "none":
        perm = np.arange(k)
    elif twist == "swap":
        if k < 2:
            raise ValueError("swap twist needs at least two coordinates")
        perm = np.arange(k)
        perm[[0, 1]] = [1, 0]
    else:
        perm = np.asarray(list(twist), dtype=int)
        if sorted(perm.tolist()) != list(range(k)):
            raise ValueError(f"twist must be a permutation of 0..{k - 1}, got {perm.tolist()}")
    if np.any(perm[perm] != np.arange(k)):
        raise ValueError("twist must be involutive")
    if np.any(np.abs(w[perm] - w) > 1e-15 * w.max()):
        raise ValueError("twist must preserve the weights, otherwise star is not isometric")
    c = np.zeros((k, k, k))
    for i in range(k):
        c[i, i, i] = 1.0
    P = np.eye(k)[perm]
    return AlgebraSpec(structure=c, star=P, sharp=np.eye(k), gram=np.diag(w), unit=np.ones(k))


def gen_from_cyclic_vector(generators: Sequence, omega, tol: Tolerances = DEFAULT_TOL) -> AlgebraSpec:
    """Standard HCQ*-algebra ``M omega`` from a von Neumann algebra ``M`` with
    cyclic and separating vector ``omega``.

    ``M`` is the unital *-algebra generated by ``generators`` on ``C^N`` with
    the Euclidean inner product. Coordinates are taken against a
    Hilbert-Schmidt orthonormal basis ``X_k`` of ``M`` via ``x = X omega``.
    """
    omega = np.asarray(omega, dtype=complex)
    N = omega.shape[0]
    gens = [np.asarray(g, dtype=complex) for g in generators]
    if any(g.shape != (N, N) for g in gens):
        raise ValueError(f"generators must be {N} x {N}")
    if np.linalg.norm(omega) > 1.0 + tol.eq:
        raise ValueError("omega must have norm <= 1 so that ||x|| <= ||L_x||")
    M = generated_algebra(gens, None, unital=True, tol=tol)
    m = M.dim
    Xi = np.array([X @ omega for X in M.basis]).T  # N x m
    s = np.linalg.svd(Xi, compute_uv=False)
    rank = int(np.sum(s > tol.rank * s[0])) if s.size and s[0] > 0 else 0
    if rank < m:
        extra = " and not cyclic" if rank < N else ""
        raise NotSeparatingError(
            f"omega is not separating{extra}: X omega spans {rank} dimensions for dim M = {m}"
        )
    if rank < N:
        raise NotCyclicError(f"omega is not cyclic: M omega spans {rank} of {N} dimensions")

    Q = np.array([X.ravel() for X in M.basis])  # orthonormal rows

    def coords(Y):
        return Q.conj() @ np.asarray(Y).ravel()

    c = np.zeros((m, m, m), dtype=complex)
    for i, A in enumerate(M.basis):
        for j, B in enumerate(M.basis):
            c[i, j] = coords(A @ B)
    sharp = np.array([coords(X.conj().T) for X in M.basis]).T
    gram = Xi.conj().T @ Xi
    gram = (gram + gram.conj().T) / 2
    unit = coords(np.eye(N))
    J, _ = polar_antilinear(AntilinearMap(sharp), gram, tol)
    return AlgebraSpec(structure=c, star=J, sharp=sharp, gram=gram, unit=unit)
