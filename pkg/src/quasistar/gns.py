"""Positive sesquilinear forms, the GNS quotient, and *-homomorphisms
between strict CQ*-algebras."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._tolerances import DEFAULT_TOL, Tolerances
from .algebra import AlgebraSpec, left_mult, multiply, right_mult, sharp_norm
from .diagnostics import CheckList
from .hcq import HcqReport, check_hcq
from .linalg import AntilinearMap, GramFrame, gram_opnorm, hermitianize
from .modular import quasi_unit

__all__ = [
    "DescentError",
    "FormSpec",
    "GnsResult",
    "HomomorphismReport",
    "NoQuasiUnitError",
    "check_form",
    "gns_construct",
    "pullback_form",
    "standard_form_matrix",
    "verify_homomorphism",
]

_TINY = np.finfo(float).tiny


class DescentError(ValueError):
    """An involution or the product does not pass to the quotient by N_phi."""


class NoQuasiUnitError(ValueError):
    """The construction needs a strict CQ*-algebra with a quasi-unit."""


@dataclass(frozen=True, eq=False)
class FormSpec:
    """Positive sesquilinear form ``phi(a, b) = b^H F a``."""

    F: np.ndarray

    def __post_init__(self):
        F = np.array(self.F, dtype=complex)
        if F.ndim != 2 or F.shape[0] != F.shape[1]:
            raise ValueError(f"form matrix must be square, got {F.shape}")
        F.setflags(write=False)
        object.__setattr__(self, "F", F)

    @property
    def dim(self) -> int:
        return self.F.shape[0]

    def __call__(self, a, b) -> complex:
        return complex(np.asarray(b, dtype=complex).conj() @ self.F @ np.asarray(a, dtype=complex))

    def violations(self, tol: Tolerances = DEFAULT_TOL) -> list[tuple[str, float]]:
        F = self.F
        if not np.all(np.isfinite(F)):
            return [("form.finite", float("inf"))]
        if F.size == 0:
            return []
        scale = max(np.abs(F).max(), _TINY)
        herm = float(np.abs(F - F.conj().T).max() / scale)
        if herm > tol.herm:
            return [("form.hermitian", herm)]
        w = np.linalg.eigvalsh(hermitianize(F))
        if w[0] < -tol.pd * max(w[-1], 0.0) - (0.0 if w[-1] > 0 else tol.pd):
            return [("form.positive", float(-w[0] / scale))]
        return []


def _require_valid(form: FormSpec, spec: AlgebraSpec, tol: Tolerances) -> None:
    if form.dim != spec.dim:
        raise ValueError(f"form has dimension {form.dim}, algebra has {spec.dim}")
    bad = form.violations(tol)
    if bad:
        name, res = bad[0]
        raise ValueError(f"form violates {name} (residual {res:.3e})")


def standard_form_matrix(spec: AlgebraSpec, form: FormSpec) -> np.ndarray:
    """Coefficient matrix ``C`` with ``phi(x*, x^#) = y^H C y`` at ``y = conj(x)``."""
    return spec.sharp.matrix.conj().T @ form.F @ spec.star.matrix


def check_form(spec: AlgebraSpec, form: FormSpec, u=None,
               tol: Tolerances = DEFAULT_TOL) -> CheckList:
    """Certify the four conditions of the GNS embedding theorem for ``form``.

    (ii)_1 and (ii)_3 are exact sesquilinear identities checked on all basis
    pairs; (ii)_2 is the operator-norm bound ``||G^-1/2 F G^-1/2|| <= 1``;
    (ii)_4 is a PSD test of the quadratic form ``x -> phi(x*, x^#)``. The
    last one decides standardness and is informational.
    """
    _require_valid(form, spec, tol)
    if u is None:
        u = spec.unit if spec.unit is not None else quasi_unit(spec, tol)
    if u is None:
        raise NoQuasiUnitError("no quasi-unit: the theorem needs a strict CQ*-algebra with quasi-unit u")
    u = np.asarray(u, dtype=complex)
    n = spec.dim
    F = form.F
    out = CheckList()
    fscale = max(np.abs(F).max(initial=0.0), _TINY)

    # phi(b_i, b_j) = F[j, i]
    res1 = res3 = 0.0
    Ms, Mj = spec.sharp.matrix, spec.star.matrix
    for i in range(n):
        xs = Ms[:, i]
        for j in range(n):
            lhs = F[j, i]
            prod = multiply(spec, xs, np.eye(n)[j])
            rhs1 = prod.conj() @ F @ u
            res1 = max(res1, abs(lhs - rhs1))
            # phi(y*, x*) with x = b_i, y = b_j
            rhs3 = Mj[:, i].conj() @ F @ Mj[:, j]
            res3 = max(res3, abs(lhs - rhs3))
    uscale = max(fscale * max(np.abs(u).max(initial=0.0), 1.0), _TINY)
    res1 = float(res1 / uscale)
    res3 = float(res3 / fscale)
    out.add("(ii)_1", res1 <= tol.eq, res1, "phi(x,y) = phi(u, x^# y)")

    if n:
        frame = GramFrame(spec.gram)
        bound = float(np.linalg.norm(frame.W_inv @ F @ frame.W_inv, 2))
    else:
        bound = 0.0
    out.add("(ii)_2", bound <= 1.0 + tol.ineq, max(bound - 1.0, 0.0),
            f"|phi(x,y)| <= ||x|| ||y|| (||G^-1/2 F G^-1/2|| = {bound:.12g})")
    out.add("(ii)_3", res3 <= tol.eq, res3, "phi(x,y) = phi(y*, x*)")

    C = standard_form_matrix(spec, form)
    if C.size:
        cscale = max(np.linalg.norm(C, 2), 1.0)
        herm = float(np.linalg.norm(C - C.conj().T, 2) / cscale)
        w = np.linalg.eigvalsh(hermitianize(C))
        neg = float(max(-w[0], 0.0) / cscale)
    else:
        herm = neg = 0.0
    ok4 = herm <= tol.eq and neg <= tol.eq
    out.add("(ii)_4", ok4, max(herm, neg), "phi(x*, x^#) >= 0 (decides standardness)",
            required=False)
    return out


@dataclass
class GnsResult:
    null_dim: int
    quotient_spec: AlgebraSpec
    phi_map: np.ndarray
    lift: np.ndarray
    faithful: bool
    contractive_margin: float
    standard: bool
    quotient_hcq: HcqReport | None
    residuals: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return self.phi_map.shape[0]


def gns_construct(spec: AlgebraSpec, form: FormSpec, u=None,
                  tol: Tolerances = DEFAULT_TOL) -> GnsResult:
    """Quotient ``A / N_phi`` with the inherited product and involutions.

    Quotient coordinates are taken against the range eigenvectors ``v_k`` of
    ``F``, so ``Phi = V_r^H`` and the quotient Gram matrix is
    ``diag(lambda_k)``.
    """
    if u is None:
        u = spec.unit if spec.unit is not None else quasi_unit(spec, tol)
    conds = check_form(spec, form, u, tol)
    for name in ("(ii)_1", "(ii)_3"):
        if not conds[name].passed:
            raise DescentError(f"{name} fails (residual {conds[name].residual:.3e}); "
                               "the involutions do not descend to the quotient")
    n = spec.dim
    F = hermitianize(form.F)
    if n:
        w, V = np.linalg.eigh(F)
        wmax = max(w[-1], 0.0)
        keep = w > tol.rank * wmax if wmax > 0 else np.zeros(n, dtype=bool)
    else:
        w, V, keep = np.zeros(0), np.zeros((0, 0), complex), np.zeros(0, dtype=bool)
    Vr = V[:, keep][:, ::-1]
    # fix the phase of each eigenvector: first largest entry real positive
    for k in range(Vr.shape[1]):
        p = Vr[np.argmax(np.abs(Vr[:, k]) > np.abs(Vr[:, k]).max() * (1 - 1e-9)), k]
        Vr[:, k] *= abs(p) / p
    lam = w[keep][::-1]
    Vn = V[:, ~keep]
    r = Vr.shape[1]
    Phi = Vr.conj().T
    Psi = Vr

    # N_phi must be a two-sided ideal stable under both involutions
    res = {}
    fscale = max(np.abs(F).max(initial=0.0), _TINY)
    ideal = star_res = sharp_res = 0.0
    for v in Vn.T:
        for b in spec.basis():
            ideal = max(ideal, np.abs(F @ (left_mult(spec, b) @ v)).max(),
                        np.abs(F @ (right_mult(spec, b) @ v)).max())
        star_res = max(star_res, np.abs(F @ spec.star(v)).max())
        sharp_res = max(sharp_res, np.abs(F @ spec.sharp(v)).max())
    res["N.ideal"] = float(ideal / fscale)
    res["N.star-stable"] = float(star_res / fscale)
    res["N.sharp-stable"] = float(sharp_res / fscale)
    for key in ("N.ideal", "N.star-stable", "N.sharp-stable"):
        if res[key] > 10 * max(tol.eq, tol.rank):
            raise DescentError(f"{key} residual {res[key]:.3e}: structure does not pass to A/N_phi")

    c = np.einsum("ip,jq,ijk,sk->pqs", Psi, Psi, spec.structure, Phi) if r else np.zeros((0, 0, 0))
    star_q = Phi @ spec.star.matrix @ Psi.conj()
    sharp_q = Phi @ spec.sharp.matrix @ Psi.conj()
    gram_q = np.diag(lam).astype(complex)
    unit_q = Phi @ np.asarray(u, dtype=complex)
    quotient = AlgebraSpec(structure=c, star=AntilinearMap(star_q), sharp=AntilinearMap(sharp_q),
                           gram=gram_q, unit=unit_q)

    # left-ideal bound ||lambda(x) lambda(y)||^2 <= ||x||_#^2 ||lambda(y)||^2
    bound_res = 0.0
    for b in spec.basis():
        Lq = Phi @ left_mult(spec, b) @ Psi
        if r:
            ratio = gram_opnorm(Lq, gram_q) - sharp_norm(spec, b)
            bound_res = max(bound_res, ratio / max(sharp_norm(spec, b), 1.0))
    res["boundedness"] = float(max(bound_res, 0.0))

    if n:
        frame = GramFrame(spec.gram)
        phi_norm = float(np.sqrt(max(np.linalg.norm(frame.W_inv @ F @ frame.W_inv, 2), 0.0)))
    else:
        phi_norm = 0.0
    hcq = check_hcq(quotient, tol) if r else None
    standard = conds["(ii)_4"].passed
    result = GnsResult(
        null_dim=n - r,
        quotient_spec=quotient,
        phi_map=Phi,
        lift=Psi,
        faithful=r == n,
        contractive_margin=1.0 - phi_norm,
        standard=standard,
        quotient_hcq=hcq,
        residuals=res,
    )
    result.notes.append("the quotient is finite-dimensional, hence already complete")
    if r == 0:
        result.notes.append("phi = 0: the quotient is the zero space")
    return result


def pullback_form(phi_map, target: AlgebraSpec) -> FormSpec:
    """``phi(a, b) = (Phi a | Phi b)`` in the target inner product."""
    P = np.asarray(phi_map, dtype=complex)
    return FormSpec(P.conj().T @ target.gram @ P)


@dataclass
class HomomorphismReport:
    checks: CheckList = field(default_factory=CheckList)
    injective: bool = False
    surjective: bool = False
    isometric: bool = False
    contractive_norm: float = 0.0

    @property
    def is_homomorphism(self) -> bool:
        return self.checks.ok

    @property
    def classification(self) -> str:
        if not self.is_homomorphism:
            return "not a *-homomorphism"
        if self.injective and self.surjective:
            return "isometric *-isomorphism" if self.isometric else "*-isomorphism onto"
        if self.injective:
            return "injective *-homomorphism (*-isomorphism into)"
        return "*-homomorphism"


def verify_homomorphism(phi_map, source: AlgebraSpec, target: AlgebraSpec,
                        tol: Tolerances = DEFAULT_TOL) -> HomomorphismReport:
    P = np.asarray(phi_map, dtype=complex)
    ns, nt = source.dim, target.dim
    if P.shape != (nt, ns):
        raise ValueError(f"phi_map must be {nt} x {ns}, got {P.shape}")
    rep = HomomorphismReport()
    scale = max(np.abs(P).max(initial=0.0), 1.0)

    res = float(np.abs(P @ source.star.matrix - target.star.matrix @ P.conj()).max(initial=0.0))
    rep.checks.add("hom.star", res / scale <= tol.eq, res / scale, "Phi(a)* = Phi(a*)")
    res = 0.0
    for i in range(ns):
        for j in range(ns):
            lhs = P @ source.structure[i, j]
            rhs = multiply(target, P[:, i], P[:, j])
            res = max(res, float(np.abs(lhs - rhs).max(initial=0.0)))
    rep.checks.add("hom.multiplicative", res / scale**2 <= tol.eq, res / scale**2,
                   "Phi(ax) = Phi(a) Phi(x)")
    res = float(np.abs(P @ source.sharp.matrix - target.sharp.matrix @ P.conj()).max(initial=0.0))
    rep.checks.add("hom.sharp", res / scale <= tol.eq, res / scale,
                   "restriction to the C*-algebra is a #-homomorphism")

    cn = gram_opnorm(P, source.gram, target.gram) if P.size else 0.0
    rep.contractive_norm = cn
    rep.checks.add("hom.contractive", cn <= 1.0 + tol.ineq, max(cn - 1.0, 0.0),
                   f"||Phi(a)||_1 <= ||a|| (norm {cn:.12g})")

    s = np.linalg.svd(P, compute_uv=False) if P.size else np.zeros(0)
    rank = int(np.sum(s > tol.rank * s[0])) if s.size and s[0] > 0 else 0
    rep.injective = rank == ns
    rep.surjective = rank == nt
    if rep.injective and rep.surjective and ns:
        iso = np.abs(P.conj().T @ target.gram @ P - source.gram).max()
        rep.isometric = bool(iso <= tol.eq * max(np.abs(source.gram).max(), _TINY))
    elif ns == nt == 0:
        rep.isometric = True

    if rep.injective and ns:
        res = 0.0
        for b in source.basis():
            a = gram_opnorm(left_mult(target, P @ b), target.gram)
            s_ = sharp_norm(source, b)
            res = max(res, abs(a - s_) / max(s_, 1.0))
        rep.checks.add("hom.faithful-norm", res <= 10 * tol.eq, res,
                       "||L_{Phi(x)}|| = ||x||_# for an injective Phi")
    return rep
