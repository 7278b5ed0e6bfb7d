"""Finite-dimensional quasi *-algebras with two involutions and two norms.

At finite dimension the completion of the algebra is the coordinate space
itself, so a spec describes both the dense *-algebra and its Hilbert or
Banach completion.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._tolerances import DEFAULT_TOL, Tolerances
from .diagnostics import Check, CheckList
from .linalg import AntilinearMap, check_gram, gram_opnorm

__all__ = [
    "AlgebraSpec",
    "FlatReport",
    "InconsistentSpecError",
    "NormReport",
    "check_banach_conditions",
    "flat_structure",
    "left_mult",
    "multiply",
    "norm",
    "right_mult",
    "sample_vectors",
    "sharp_norm",
    "spec_distance",
    "transport",
    "validate_spec",
]

_TINY = np.finfo(float).tiny


class InconsistentSpecError(ValueError):
    """The star and sharp data do not combine into a consistent structure."""


def _frozen(a, dtype=complex) -> np.ndarray:
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class AlgebraSpec:
    """Structure constants ``b_i b_j = sum_k c[i, j, k] b_k`` plus the two
    involutions, the Gram matrix of the Hilbertian norm and an optional unit.
    """

    structure: np.ndarray
    star: AntilinearMap
    sharp: AntilinearMap
    gram: np.ndarray
    unit: np.ndarray | None = None

    def __post_init__(self):
        c = _frozen(self.structure)
        n = c.shape[0] if c.ndim == 3 else -1
        if c.ndim != 3 or c.shape != (n, n, n):
            raise ValueError(f"structure must be an n x n x n tensor, got {c.shape}")
        star = self.star if isinstance(self.star, AntilinearMap) else AntilinearMap(self.star)
        sharp = self.sharp if isinstance(self.sharp, AntilinearMap) else AntilinearMap(self.sharp)
        gram = _frozen(self.gram)
        for name, shape in (("star", star.matrix.shape), ("sharp", sharp.matrix.shape),
                            ("gram", gram.shape)):
            if shape != (n, n):
                raise ValueError(f"{name} must be {n} x {n}, got {shape}")
        object.__setattr__(self, "structure", c)
        object.__setattr__(self, "star", star)
        object.__setattr__(self, "sharp", sharp)
        object.__setattr__(self, "gram", gram)
        if self.unit is not None:
            u = _frozen(self.unit)
            if u.shape != (n,):
                raise ValueError(f"unit must have length {n}, got shape {u.shape}")
            object.__setattr__(self, "unit", u)

    @property
    def dim(self) -> int:
        return self.structure.shape[0]

    def basis(self) -> np.ndarray:
        return np.eye(self.dim, dtype=complex)

    def replace(self, **changes) -> AlgebraSpec:
        fields = dict(structure=self.structure, star=self.star, sharp=self.sharp,
                      gram=self.gram, unit=self.unit)
        fields.update(changes)
        return AlgebraSpec(**fields)


def _vec(spec: AlgebraSpec, x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.shape != (spec.dim,):
        raise ValueError(f"expected a coordinate vector of length {spec.dim}, got {x.shape}")
    return x


def multiply(spec: AlgebraSpec, x, y) -> np.ndarray:
    return np.einsum("i,j,ijk->k", _vec(spec, x), _vec(spec, y), spec.structure)


def left_mult(spec: AlgebraSpec, x) -> np.ndarray:
    """Matrix of ``L_x : y -> x y``."""
    return np.einsum("i,ijk->kj", _vec(spec, x), spec.structure)


def right_mult(spec: AlgebraSpec, x) -> np.ndarray:
    """Matrix of ``R_x : y -> y x``."""
    return np.einsum("i,jik->kj", _vec(spec, x), spec.structure)


def transport(spec: AlgebraSpec, T) -> AlgebraSpec:
    """The same algebra in new coordinates ``x' = T x`` (``T`` invertible)."""
    T = np.asarray(T, dtype=complex)
    Ti = np.linalg.inv(T)
    c = np.einsum("ip,jq,ijk,sk->pqs", Ti, Ti, spec.structure, T)
    unit = T @ spec.unit if spec.unit is not None else None
    return AlgebraSpec(
        structure=c,
        star=T @ spec.star.matrix @ Ti.conj(),
        sharp=T @ spec.sharp.matrix @ Ti.conj(),
        gram=Ti.conj().T @ spec.gram @ Ti,
        unit=unit,
    )


def spec_distance(a: AlgebraSpec, b: AlgebraSpec) -> float:
    """Largest entrywise difference of the defining arrays (inf on shape mismatch)."""
    if a.dim != b.dim:
        return float("inf")
    pairs = [(a.structure, b.structure), (a.star.matrix, b.star.matrix),
             (a.sharp.matrix, b.sharp.matrix), (a.gram, b.gram)]
    return max((float(np.abs(x - y).max(initial=0.0)) for x, y in pairs), default=0.0)


def norm(spec: AlgebraSpec, x) -> float:
    x = _vec(spec, x)
    return float(np.sqrt(max((x.conj() @ spec.gram @ x).real, 0.0)))


def sharp_norm(spec: AlgebraSpec, x) -> float:
    """The C*-norm ``||x||_# = ||L_x||`` of a strict CQ*-algebra."""
    return gram_opnorm(left_mult(spec, x), spec.gram)


def sample_vectors(n: int, count: int, seed: int = 0) -> np.ndarray:
    """Deterministic complex Gaussian samples, one per row."""
    rng = np.random.default_rng(seed)
    return rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))


def _rel(diff: float, scale: float) -> float:
    return float(diff / max(scale, _TINY)) if diff > 0 else 0.0


def _antimultiplicative_residual(spec: AlgebraSpec, T: AntilinearMap) -> float:
    c = spec.structure
    M = T.matrix
    # T(b_i b_j) against T(b_j) T(b_i), all basis pairs at once
    lhs = np.einsum("kl,ijl->ijk", M, c.conj())
    rhs = np.einsum("aj,bi,abk->ijk", M, M, c)
    return _rel(np.abs(lhs - rhs).max(initial=0.0),
                max(np.abs(lhs).max(initial=0.0), np.abs(rhs).max(initial=0.0), 1.0))


def _involution_residual(T: AntilinearMap) -> float:
    sq = T @ T
    return _rel(np.abs(sq - np.eye(T.dim)).max(initial=0.0), 1.0)


def validate_spec(spec: AlgebraSpec, tol: Tolerances = DEFAULT_TOL) -> list[Check]:
    """Certify every AlgebraSpec invariant; returns only the violations."""
    out = CheckList()
    n = spec.dim
    for arr, name in ((spec.structure, "structure"), (spec.star.matrix, "star"),
                      (spec.sharp.matrix, "sharp"), (spec.gram, "gram")):
        if not np.all(np.isfinite(arr)):
            out.add(f"{name}.finite", False, float("inf"))
    if out.checks:
        return out.failed
    for name, res in check_gram(spec.gram, tol):
        out.add(name, False, res)
    if out.checks:
        return out.failed
    if n == 0:
        return []

    c = spec.structure
    lhs = np.einsum("ijk,klm->ijlm", c, c)
    rhs = np.einsum("jlk,ikm->ijlm", c, c)
    scale = max(np.abs(lhs).max(), np.abs(rhs).max(), 1.0)
    res = _rel(np.abs(lhs - rhs).max(), scale)
    out.add("associativity", res <= tol.eq, res)

    for name, T in (("star", spec.star), ("sharp", spec.sharp)):
        res = _involution_residual(T)
        out.add(f"{name}.involutive", res <= tol.eq, res)
        res = _antimultiplicative_residual(spec, T)
        out.add(f"{name}.antimultiplicative", res <= tol.eq, res)

    # ||M conj(v)||_G = ||v||_G for all v  <=>  M^H G M = conj(G)
    M = spec.star.matrix
    G = spec.gram
    res = _rel(np.abs(M.conj().T @ G @ M - G.conj()).max(), np.abs(G).max())
    out.add("star.isometric", res <= tol.eq, res)

    if spec.unit is not None:
        L = left_mult(spec, spec.unit)
        R = right_mult(spec, spec.unit)
        res = max(np.abs(L - np.eye(n)).max(), np.abs(R - np.eye(n)).max())
        out.add("unit.identity", res <= tol.eq, res)
    return out.failed


@dataclass
class NormReport:
    """Per-basis norms and the residuals of the Banach-type conditions."""

    norms: np.ndarray
    sharp_norms: np.ndarray
    checks: CheckList = field(default_factory=CheckList)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.checks.ok


def check_banach_conditions(
    spec: AlgebraSpec,
    tol: Tolerances = DEFAULT_TOL,
    n_random: int = 64,
    seed: int = 0,
) -> NormReport:
    """Evaluate (a.1)-(a.3) with ``||x||_# = ||L_x||``; (a.4) is automatic.

    (a.1) and (a.2) are tested on basis and random vectors, (a.3) on all
    basis pairs plus random pairs.
    """
    n = spec.dim
    basis = spec.basis()
    samples = np.vstack([basis, sample_vectors(n, n_random, seed)]) if n else basis
    partners = np.vstack([basis, sample_vectors(n, n_random, seed + 1)]) if n else basis

    norms = np.array([norm(spec, b) for b in basis])
    snorms = np.array([sharp_norm(spec, b) for b in basis])
    report = NormReport(norms=norms, sharp_norms=snorms)

    a1 = a2 = a3 = 0.0
    for x in samples:
        sx = sharp_norm(spec, x)
        xsx = multiply(spec, spec.sharp(x), x)
        a1 = max(a1, _rel(abs(sharp_norm(spec, xsx) - sx**2), sx**2))
        nx = norm(spec, x)
        a2 = max(a2, _rel(nx - sx, max(nx, sx)))
    pairs = [(x, y) for x in basis for y in basis]
    pairs += list(zip(samples[n:], partners[n:]))
    for x, y in pairs:
        bound = sharp_norm(spec, x) * norm(spec, y)
        a3 = max(a3, _rel(norm(spec, multiply(spec, x, y)) - bound,
                          max(bound, norm(spec, x) * norm(spec, y))))

    report.checks.add("(a.1)", a1 <= 10 * tol.eq, a1, "||x^# x||_# = ||x||_#^2")
    report.checks.add("(a.2)", a2 <= tol.ineq, a2, "||x|| <= ||x||_#")
    report.checks.add("(a.3)", a3 <= tol.ineq, a3, "||xy|| <= ||x||_# ||y||")
    report.checks.add("(a.4)", True, 0.0,
                      "automatic at finite dimension: the identity map is closed")
    report.notes.append("the completion of A in || || coincides with A at finite dimension")
    return report


@dataclass
class FlatReport:
    checks: CheckList = field(default_factory=CheckList)

    @property
    def ok(self) -> bool:
        return self.checks.ok


def flat_structure(spec: AlgebraSpec, tol: Tolerances = DEFAULT_TOL):
    """Build the involution ``(x*)^flat = x^{#*}`` and certify the
    commuting left/right structure ``R_{z*} = J L_z J``.

    Returns ``(flat, FlatReport)``. Raises :class:`InconsistentSpecError`
    when ``flat`` is not an antimultiplicative involution.
    """
    n = spec.dim
    star, sharp = spec.star, spec.sharp
    flat = star @ sharp @ star
    report = FlatReport()

    inv = _involution_residual(flat)
    anti = _antimultiplicative_residual(spec, flat)
    if inv > tol.eq or anti > tol.eq:
        raise InconsistentSpecError(
            f"flat involution inconsistent (involutive {inv:.2e}, antimultiplicative {anti:.2e})"
        )
    report.checks.add("flat.involutive", True, inv)
    report.checks.add("flat.antimultiplicative", True, anti)

    G = spec.gram
    basis = spec.basis()
    Ls = [left_mult(spec, b) for b in basis]
    Rs = [right_mult(spec, b) for b in basis]

    # ||z*||_flat realised as ||R_{z*}||, compared with ||z||_#
    res = 0.0
    for b, L in zip(basis, Ls):
        flat_norm = gram_opnorm(right_mult(spec, star(b)), G)
        sn = gram_opnorm(L, G)
        res = max(res, _rel(abs(flat_norm - sn), max(sn, 1.0)))
    report.checks.add("flat.norm", res <= tol.eq, res, "||x*||_flat = ||x||_#")

    res = 0.0
    for L in Ls:
        for R in Rs:
            res = max(res, np.abs(L @ R - R @ L).max(initial=0.0))
    report.checks.add("flat.LR-commute", res <= tol.eq, res, "L_x R_y = R_y L_x")

    res = 0.0
    Mj = star.matrix
    for b, L in zip(basis, Ls):
        lhs = right_mult(spec, star(b))
        rhs = Mj @ L.conj() @ Mj.conj()
        res = max(res, _rel(np.abs(lhs - rhs).max(initial=0.0), max(np.abs(L).max(initial=0.0), 1.0)))
    report.checks.add("flat.R=JLJ", res <= tol.eq, res, "R_{z*} = J L_z J")
    if n:
        # C*-identity for the flat norm in the right regular representation
        res = 0.0
        for b in basis:
            y = star(b)
            ny = gram_opnorm(right_mult(spec, y), G)
            yy = multiply(spec, flat(y), y)
            res = max(res, _rel(abs(gram_opnorm(right_mult(spec, yy), G) - ny**2), max(ny**2, 1.0)))
        report.checks.add("flat.c-star", res <= 10 * tol.eq, res,
                          "||y^flat y||_flat = ||y||_flat^2 (holds for HCQ* data)", required=False)
    return flat, report

