"""Left Hilbert algebra structure and Tomita-Takesaki modular data."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._tolerances import DEFAULT_TOL, Tolerances
from .algebra import AlgebraSpec, left_mult, multiply, norm, right_mult, sample_vectors
from .diagnostics import CheckList
from .linalg import (
    AntilinearMap,
    GramFrame,
    antilinear_adjoint,
    antilinear_opnorm,
    matrix_power,
    nullspace,
    polar_antilinear,
)

__all__ = [
    "ExtensionReport",
    "FlowReport",
    "InternalConsistencyError",
    "ModularData",
    "RemarkProbe",
    "Standardness",
    "TomitaReport",
    "VNAlgebra",
    "check_left_hilbert",
    "commutant",
    "extension_check",
    "generated_algebra",
    "modular_data",
    "quasi_unit",
    "remark_probe",
    "span_residual",
    "standardness",
    "tomita_check",
    "tomita_flow",
    "unit_residuals",
]

_TINY = np.finfo(float).tiny


class InternalConsistencyError(RuntimeError):
    """Two criteria that must agree mathematically disagreed numerically."""


def check_left_hilbert(spec: AlgebraSpec, tol: Tolerances = DEFAULT_TOL) -> CheckList:
    n = spec.dim
    c = spec.structure
    G = spec.gram
    out = CheckList()
    out.add("left-hilbert.(i)", True, 0.0,
            "automatic at finite dimension: every left multiplication is bounded")

    # (b_i b_j | b_k) against (b_j | b_i^# b_k) on all basis triples
    lhs = np.einsum("km,ijm->ijk", G, c)
    P = np.einsum("ai,akm->ikm", spec.sharp.matrix, c)
    rhs = np.einsum("ikm,mj->ijk", P.conj(), G)
    scale = max(np.abs(lhs).max(initial=0.0), np.abs(rhs).max(initial=0.0), _TINY)
    res = float(np.abs(lhs - rhs).max(initial=0.0) / scale) if n else 0.0
    out.add("left-hilbert.(ii)", res <= tol.eq, res, "(xy|z) = (y|x^# z)")

    products = c.reshape(n * n, n)
    rank = n - len(nullspace(products, tol.rank)) if n else 0
    if not np.abs(products).max(initial=0.0):
        rank = 0
    out.add("left-hilbert.(iii)", rank == n, float(n - rank),
            f"products span dimension {rank} of {n}")
    out.add("left-hilbert.(iv)", True, 0.0,
            "automatic at finite dimension: every linear map is closable")
    return out


@dataclass(frozen=True, eq=False)
class ModularData:
    """``S = J Delta^{1/2}`` together with the certification residuals."""

    S: AntilinearMap
    J: AntilinearMap
    Delta: np.ndarray
    gram: np.ndarray
    residuals: dict = field(default_factory=dict)

    def power(self, alpha: complex, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
        return matrix_power(self.Delta, alpha, self.gram, tol)

    def spectrum(self) -> np.ndarray:
        """Eigenvalues of Delta, descending."""
        frame = GramFrame(self.gram)
        w = np.linalg.eigvalsh(frame.linear_in(self.Delta))
        return w[::-1]

    def ok(self, tol: Tolerances = DEFAULT_TOL) -> bool:
        return all(v <= tol.eq for v in self.residuals.values())


def _anti_res(A: AntilinearMap, B: AntilinearMap, G) -> float:
    scale = max(antilinear_opnorm(A, G), antilinear_opnorm(B, G), 1.0)
    return antilinear_opnorm(A - B, G) / scale


def _lin_res(A, B, G) -> float:
    frame = GramFrame(G)
    At, Bt = frame.linear_in(A), frame.linear_in(B)
    if At.size == 0:
        return 0.0
    scale = max(np.linalg.norm(At, 2), np.linalg.norm(Bt, 2), 1.0)
    return float(np.linalg.norm(At - Bt, 2) / scale)


def modular_data(spec: AlgebraSpec, tol: Tolerances = DEFAULT_TOL) -> ModularData:
    """Polar decomposition of the involution ``S = #``.

    Raises :class:`~quasistar.linalg.SingularOperatorError` for a singular
    sharp map.
    """
    G = spec.gram
    S = spec.sharp
    J, Delta = polar_antilinear(S, G, tol)
    n = spec.dim
    I = np.eye(n)
    half = matrix_power(Delta, 0.5, G, tol)
    mhalf = matrix_power(Delta, -0.5, G, tol)
    Sstar = antilinear_adjoint(S, G)
    res = {
        "S=J.D^1/2": _anti_res(S, J @ half, G),
        "S=D^-1/2.J": _anti_res(S, mhalf @ J, G),
        "S*=J.D^-1/2": _anti_res(Sstar, J @ mhalf, G),
        "S*=D^1/2.J": _anti_res(Sstar, half @ J, G),
        "J^2=I": _lin_res(J @ J, I, G),
        "J.isometric": _lin_res(J.matrix.conj().T @ G @ J.matrix, G.conj(), np.eye(n)) if n else 0.0,
        "J.D.J=D^-1": _lin_res(J @ Delta @ J, matrix_power(Delta, -1, G, tol), G),
        "D.self-adjoint": _lin_res(Delta, np.linalg.solve(G, Delta.conj().T @ G), G) if n else 0.0,
    }
    return ModularData(S=S, J=J, Delta=Delta, gram=np.array(G), residuals=res)


@dataclass(frozen=True, eq=False)
class VNAlgebra:
    generators: tuple
    basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)


def _orth_vecs(mats: Sequence[np.ndarray], tol_rank: float) -> np.ndarray:
    """Orthonormal (Frobenius) basis of span(mats) as rows of vec'd matrices."""
    if not len(mats):
        return np.zeros((0, 0), dtype=complex)
    V = np.array([np.asarray(m, dtype=complex).ravel() for m in mats])
    _, s, Vh = np.linalg.svd(V, full_matrices=False)
    if not s.size or s[0] == 0:
        return np.zeros((0, V.shape[1]), dtype=complex)
    r = int(np.sum(s > tol_rank * s[0]))
    return Vh[:r]


def span_residual(A: Sequence[np.ndarray], B: Sequence[np.ndarray],
                  tol_rank: float = DEFAULT_TOL.rank) -> float:
    """Largest relative distance of an element of ``A`` from ``span(B)``."""
    if not len(A):
        return 0.0
    Q = _orth_vecs(B, tol_rank)
    worst = 0.0
    for a in A:
        v = np.asarray(a, dtype=complex).ravel()
        nv = np.linalg.norm(v)
        if nv == 0:
            continue
        proj = Q.conj() @ v if Q.size else np.zeros(0)
        rest = v - (Q.T @ proj if Q.size else 0)
        worst = max(worst, float(np.linalg.norm(rest) / nv))
    return worst


def _g_adjoint(X: np.ndarray, G: np.ndarray) -> np.ndarray:
    return np.linalg.solve(G, X.conj().T @ G)


def generated_algebra(generators: Sequence[np.ndarray], G=None, unital: bool = True,
                      tol: Tolerances = DEFAULT_TOL) -> VNAlgebra:
    """Linear basis of the *-algebra generated by ``generators``.

    The adjoint is taken with respect to ``G`` (Euclidean when omitted).
    """
    gens = [np.asarray(g, dtype=complex) for g in generators]
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].shape[0]
    G = np.eye(n) if G is None else np.asarray(G, dtype=complex)
    pool = list(gens) + [_g_adjoint(g, G) for g in gens]
    if unital:
        pool.append(np.eye(n, dtype=complex))
    basis: list[np.ndarray] = []
    Q = np.zeros((0, n * n), dtype=complex)

    def absorb(X):
        nonlocal Q
        v = X.ravel()
        nv = np.linalg.norm(v)
        if nv == 0:
            return False
        rest = v - Q.T @ (Q.conj() @ v) if Q.size else v
        if np.linalg.norm(rest) <= 1e-8 * nv:
            return False
        rest = rest / np.linalg.norm(rest)
        Q = np.vstack([Q, rest[None, :]])
        basis.append(X)
        return True

    for X in pool:
        absorb(X)
    grown = True
    while grown and len(basis) < n * n:
        grown = False
        current = list(basis)
        for A in current:
            for B in current:
                if absorb(A @ B):
                    grown = True
    # return an orthonormal basis of the span for conditioning
    Q = _orth_vecs(basis, tol.rank)
    return VNAlgebra(generators=tuple(gens), basis=tuple(q.reshape(n, n) for q in Q))


def commutant(algebra: VNAlgebra | Sequence[np.ndarray], G,
              tol: Tolerances = DEFAULT_TOL) -> VNAlgebra:
    """``{X : X A = A X and X A^* = A^* X}`` for every generator ``A``.

    Adjoints are G-adjoints; the commutant of a *-closed set is itself a
    *-algebra, so the returned basis spans a von Neumann algebra.
    """
    gens = algebra.generators if isinstance(algebra, VNAlgebra) else tuple(algebra)
    G = np.asarray(G, dtype=complex)
    n = G.shape[0]
    frame = GramFrame(G)
    I = np.eye(n)
    blocks = []
    for A in gens:
        At = frame.linear_in(np.asarray(A, dtype=complex))
        for B in (At, At.conj().T):
            # row-major vec: vec(X B) = (I kron B^T) vec X, vec(B X) = (B kron I) vec X
            blocks.append(np.kron(I, B.T) - np.kron(B, I))
    system = np.vstack(blocks) if blocks else np.zeros((0, n * n))
    vecs = nullspace(system, tol.rank)
    basis = tuple(frame.linear_out(v.reshape(n, n)) for v in vecs)
    return VNAlgebra(generators=basis, basis=basis)


def _left_algebra(spec: AlgebraSpec, tol: Tolerances) -> VNAlgebra:
    Ls = [left_mult(spec, b) for b in spec.basis()]
    return generated_algebra(Ls, spec.gram, unital=True, tol=tol)


@dataclass
class TomitaReport:
    dim_L: int
    dim_commutant: int
    dim_double_commutant: int
    checks: CheckList = field(default_factory=CheckList)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.checks.ok


def _j_conjugate(J: AntilinearMap, X: np.ndarray) -> np.ndarray:
    """Linear map ``J X J``: matrix ``M_J conj(X) conj(M_J)``."""
    return J @ X @ J


def tomita_check(spec: AlgebraSpec, md: ModularData | None = None,
                 ts: Sequence[float] = (0.5, 1.0, 2.0),
                 tol: Tolerances = DEFAULT_TOL) -> TomitaReport:
    """``J L'' J = L'`` and ``Delta^{it} L'' Delta^{-it} = L''``."""
    md = modular_data(spec, tol) if md is None else md
    G = spec.gram
    L = _left_algebra(spec, tol)
    Lp = commutant(L, G, tol)
    Lpp = commutant(Lp, G, tol)
    rep = TomitaReport(dim_L=L.dim, dim_commutant=Lp.dim, dim_double_commutant=Lpp.dim)

    conj = [_j_conjugate(md.J, X) for X in Lpp.basis]
    res = max(span_residual(conj, Lp.basis, tol.rank), span_residual(Lp.basis, conj, tol.rank))
    rep.checks.add("tomita.J-conjugation", res <= tol.eq and Lp.dim == Lpp.dim, res,
                   f"J L'' J = L' (dim L' = {Lp.dim}, dim L'' = {Lpp.dim})")
    res = max(span_residual(L.basis, Lpp.basis, tol.rank), span_residual(Lpp.basis, L.basis, tol.rank))
    rep.checks.add("tomita.bicommutant", res <= tol.eq, res, "L'' = span of left multiplications",
                   required=False)
    for t in ts:
        U = md.power(1j * t, tol)
        Ui = md.power(-1j * t, tol)
        moved = [U @ X @ Ui for X in Lpp.basis]
        res = span_residual(moved, Lpp.basis, tol.rank)
        rep.checks.add(f"tomita.flow(t={t:g})", res <= 10 * tol.eq, res,
                       "Delta^{it} L'' Delta^{-it} = L''")
    return rep


@dataclass
class Standardness:
    standard: bool
    criterion_i: bool
    criterion_ii: bool
    star_vs_J: float
    min_eigenvalue: float
    hermitian_defect: float
    witness: np.ndarray | None = None
    witness_value: complex | None = None


def standardness_form(spec: AlgebraSpec) -> np.ndarray:
    """Coefficient matrix ``C`` with ``(x^#|x*) = y^H C y`` at ``y = conj(x)``."""
    return spec.star.matrix.conj().T @ spec.gram @ spec.sharp.matrix


def _normalize_witness(y: np.ndarray) -> np.ndarray:
    mags = np.abs(y)
    k = int(np.argmax(mags >= mags.max() * (1 - 1e-9)))
    return y / y[k]


def standardness(spec: AlgebraSpec, md: ModularData | None = None,
                 tol: Tolerances = DEFAULT_TOL) -> Standardness:
    """Evaluate both standardness criteria: ``* = J_A`` and ``(x^#|x*) >= 0``.

    Raises :class:`InternalConsistencyError` if they disagree.
    """
    md = modular_data(spec, tol) if md is None else md
    G = spec.gram
    d_i = _anti_res(spec.star, md.J, G)
    crit_i = d_i <= tol.eq

    C = standardness_form(spec)
    scale = max(np.linalg.norm(C, 2), _TINY) if C.size else 1.0
    herm_defect = float(np.linalg.norm(C - C.conj().T, 2) / scale) if C.size else 0.0
    w, V = np.linalg.eigh((C + C.conj().T) / 2) if C.size else (np.zeros(0), None)
    min_eig = float(w[0] / scale) if w.size else 0.0
    crit_ii = herm_defect <= tol.eq and min_eig >= -tol.eq

    witness = value = None
    if not crit_ii and w.size:
        if min_eig < -tol.eq:
            y = V[:, 0]
        else:
            # non-Hermitian form: pick a vector where (x^#|x*) is not real
            K = (C - C.conj().T) / 2j
            wk, Vk = np.linalg.eigh(K)
            y = Vk[:, int(np.argmax(np.abs(wk)))]
        x = np.conj(_normalize_witness(y))
        witness = x
        value = complex(np.conj(spec.star(x)) @ G @ spec.sharp(x))

    if crit_i != crit_ii:
        raise InternalConsistencyError(
            f"standardness criteria disagree: J = J_A is {crit_i} (residual {d_i:.3e}), "
            f"(x^#|x*) >= 0 is {crit_ii} (min eigenvalue {min_eig:.3e})"
        )
    return Standardness(standard=crit_i, criterion_i=crit_i, criterion_ii=crit_ii,
                        star_vs_J=d_i, min_eigenvalue=min_eig, hermitian_defect=herm_defect,
                        witness=witness, witness_value=value)


@dataclass
class RemarkProbe:
    commutant_R_equals_double_L: bool
    J_commutes_with_JA: bool
    J_equals_JA: bool
    residuals: dict


def remark_probe(spec: AlgebraSpec, md: ModularData | None = None,
                 tol: Tolerances = DEFAULT_TOL) -> RemarkProbe:
    """Exploratory: is ``R' = L''``, does ``J J_A = J_A J``, is ``J = J_A``?"""
    md = modular_data(spec, tol) if md is None else md
    G = spec.gram
    Rs = [right_mult(spec, b) for b in spec.basis()]
    Rp = commutant(generated_algebra(Rs, G, unital=True, tol=tol), G, tol)
    Lpp = commutant(commutant(_left_algebra(spec, tol), G, tol), G, tol)
    span_res = max(span_residual(Rp.basis, Lpp.basis, tol.rank),
                   span_residual(Lpp.basis, Rp.basis, tol.rank))
    same = span_res <= tol.eq and Rp.dim == Lpp.dim
    comm = _lin_res(spec.star @ md.J, md.J @ spec.star, G)
    eq = _anti_res(spec.star, md.J, G)
    return RemarkProbe(
        commutant_R_equals_double_L=bool(same),
        J_commutes_with_JA=bool(comm <= tol.eq),
        J_equals_JA=bool(eq <= tol.eq),
        residuals={"R'=L''": span_res, "J.J_A=J_A.J": comm, "J=J_A": eq},
    )


def quasi_unit(spec: AlgebraSpec, tol: Tolerances = DEFAULT_TOL) -> np.ndarray | None:
    """Element ``u`` with ``u x = x u = x`` for every basis ``x``, or ``None``."""
    n = spec.dim
    if n == 0:
        return None
    basis = spec.basis()
    A = np.vstack([left_mult(spec, b) for b in basis] + [right_mult(spec, b) for b in basis])
    rhs = np.concatenate([basis.ravel(), basis.ravel()])
    u, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    res = np.linalg.norm(A @ u - rhs) / np.linalg.norm(rhs)
    if res > tol.eq:
        return None
    return u


def unit_residuals(spec: AlgebraSpec, u) -> dict:
    """``max ||L_x u - x||``, ``max ||R_x u - x||`` over the basis and ``||S u - u||``."""
    u = np.asarray(u, dtype=complex)
    basis = spec.basis()
    left = max(norm(spec, left_mult(spec, b) @ u - b) for b in basis)
    right = max(norm(spec, right_mult(spec, b) @ u - b) for b in basis)
    su = norm(spec, spec.sharp(u) - u)
    return {"L_x u = x": left, "R_x u = x": right, "S u = u": su}


@dataclass
class FlowReport:
    checks: CheckList = field(default_factory=CheckList)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.checks.ok


def _mult_residual(spec: AlgebraSpec, D: np.ndarray, pairs) -> float:
    worst = 0.0
    for a, x in pairs:
        lhs = D @ multiply(spec, a, x)
        rhs = multiply(spec, D @ a, D @ x)
        scale = max(np.linalg.norm(lhs), np.linalg.norm(rhs), 1.0)
        worst = max(worst, float(np.linalg.norm(lhs - rhs) / scale))
    return worst


def tomita_flow(spec: AlgebraSpec, alphas: Sequence[complex], md: ModularData | None = None,
                tol: Tolerances = DEFAULT_TOL, n_random: int = 8, seed: int = 0) -> FlowReport:
    """Flow identities for the complex powers of Delta.

    For every alpha: ``(Delta^a x)^# = Delta^{-conj(a)} x^#``. For purely
    imaginary alpha additionally the *-automorphism identities.
    """
    md = modular_data(spec, tol) if md is None else md
    G = spec.gram
    rep = FlowReport()
    rep.notes.append("the maximal Tomita algebra is the whole space at finite dimension")
    basis = list(spec.basis())
    pairs = [(a, x) for a in basis for x in basis]
    rnd = sample_vectors(spec.dim, 2 * n_random, seed) if spec.dim else np.zeros((0, 0))
    pairs += list(zip(rnd[:n_random], rnd[n_random:]))
    for alpha in alphas:
        alpha = complex(alpha)
        D = md.power(alpha, tol)
        Dm = md.power(-alpha.conjugate(), tol)
        label = f"{alpha.real:g}{alpha.imag:+g}i"
        res = _anti_res(spec.sharp @ D, Dm @ spec.sharp, G)
        rep.checks.add(f"flow.sharp(alpha={label})", res <= 10 * tol.eq, res,
                       "(Delta^a x)^# = Delta^{-conj a} x^#")
        if alpha.real == 0:
            res = _anti_res(spec.star @ D, D @ spec.star, G)
            rep.checks.add(f"flow.star(alpha={label})", res <= 10 * tol.eq, res,
                           "(Delta^{it} a)* = Delta^{it} a*")
            res = _mult_residual(spec, D, pairs)
            rep.checks.add(f"flow.left-mult(alpha={label})", res <= 10 * tol.eq, res,
                           "Delta^{it}(ax) = (Delta^{it} a)(Delta^{it} x)")
            res = _mult_residual(spec, D, [(x, a) for a, x in pairs])
            rep.checks.add(f"flow.right-mult(alpha={label})", res <= 10 * tol.eq, res,
                           "Delta^{it}(xa) = (Delta^{it} x)(Delta^{it} a)")
    return rep


@dataclass
class ExtensionReport:
    dim_A: int
    dim_B: int
    checks: CheckList = field(default_factory=CheckList)

    @property
    def is_subalgebra(self) -> bool:
        return self.checks.ok

    @property
    def is_extension(self) -> bool:
        """Dense (here: onto) *-subalgebra with ``S_A = S_B``."""
        return self.checks.ok and self.dim_A == self.dim_B


def extension_check(specA: AlgebraSpec, specB: AlgebraSpec, embed,
                    tol: Tolerances = DEFAULT_TOL) -> ExtensionReport:
    """Is ``A`` an extension of ``B`` along ``embed`` (B-coords -> A-coords)?"""
    E = np.asarray(embed, dtype=complex)
    nA, nB = specA.dim, specB.dim
    if nB > nA:
        raise ValueError(f"B has dimension {nB} > dim A = {nA}")
    if E.shape != (nA, nB):
        raise ValueError(f"embedding must be {nA} x {nB}, got {E.shape}")
    rep = ExtensionReport(dim_A=nA, dim_B=nB)
    scale = max(np.abs(E).max(initial=0.0), 1.0)

    s = np.linalg.svd(E, compute_uv=False) if E.size else np.zeros(0)
    rank = int(np.sum(s > tol.rank * s[0])) if s.size and s[0] > 0 else 0
    rep.checks.add("extension.injective", rank == nB, float(nB - rank))

    res = 0.0
    for i in range(nB):
        for j in range(nB):
            lhs = E @ specB.structure[i, j]
            rhs = multiply(specA, E[:, i], E[:, j])
            res = max(res, float(np.abs(lhs - rhs).max(initial=0.0)) / scale**2)
    rep.checks.add("extension.multiplicative", res <= tol.eq, res)

    # E T_B = T_A conj(E) for antilinear T
    res = float(np.abs(E @ specB.star.matrix - specA.star.matrix @ E.conj()).max(initial=0.0)) / scale
    rep.checks.add("extension.star", res <= tol.eq, res)
    res = float(np.abs(E.conj().T @ specA.gram @ E - specB.gram).max(initial=0.0))
    res /= max(np.abs(specB.gram).max(initial=0.0), _TINY)
    rep.checks.add("extension.isometric", res <= tol.eq, res)
    res = float(np.abs(E @ specB.sharp.matrix - specA.sharp.matrix @ E.conj()).max(initial=0.0)) / scale
    rep.checks.add("extension.S-compatible", res <= tol.eq, res,
                   "S_A restricted to the image equals the pushforward of S_B")
    rep.checks.add("extension.dense", nA == nB, float(nA - nB),
                   "dense means onto at finite dimension" if nA == nB
                   else f"proper subalgebra of dimension {nB} in {nA}", required=False)
    return rep
