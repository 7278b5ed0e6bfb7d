"""Command-line certifier: ``quasistar {check,modular,gns,gen,sweep}``.

Exit codes: 0 when every required check passes, 1 when a mathematical
check fails, 2 for unreadable or invalid input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from ._tolerances import DEFAULT_TOL, Tolerances
from ._version import __version__
from .algebra import check_banach_conditions, flat_structure
from .diagnostics import Check
from .gns import DescentError, NoQuasiUnitError, check_form, gns_construct, verify_homomorphism
from .hcq import (NotCyclicError, NotSeparatingError, check_hcq, gen_commutative,
                  gen_from_cyclic_vector, gen_matrix_state, hcq_to_strict)
from .io import (SpecParseError, SpecValidationError, decode_array, dump_algebra,
                 file_digest, parse_algebra, parse_form)
from .linalg import SingularOperatorError
from .modular import (InternalConsistencyError, check_left_hilbert, modular_data,
                      quasi_unit, remark_probe, standardness, tomita_check, tomita_flow,
                      unit_residuals)
from .report import Report
from .validation import check_tolerances

log = logging.getLogger("quasistar")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

QUASI_UNIT_HYPOTHESIS = "strict CQ*-algebra with quasi-unit u"


class InputError(Exception):
    pass


def _tolerances(args) -> Tolerances:
    try:
        return check_tolerances(args.tol_eq, args.tol_rank, args.tol_pd)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _load_algebra(path, tol, report: Report):
    spec = parse_algebra(path, tol)
    report.add_input(path, file_digest(path))
    return spec


def _check_one(path, tol: Tolerances) -> Report:
    report = Report("check", tol.as_dict())
    spec = _load_algebra(path, tol, report)
    report.checks.append(_passed("spec.valid", "validate_spec: every invariant holds"))
    banach = check_banach_conditions(spec, tol)
    report.add_checks(banach.checks)
    report.add_checks(check_left_hilbert(spec, tol))
    hcq = check_hcq(spec, tol)
    report.add_checks(hcq.checks)
    report.results.update({
        "dim": spec.dim,
        "norms": banach.norms,
        "sharp_norms": banach.sharp_norms,
        "is_hcq": hcq.is_hcq,
        "is_strict_cq": hcq.is_strict_cq,
        "norm_domination_margin": hcq.norm_domination_margin,
    })
    if hcq.witness is not None:
        report.witnesses["norm-domination"] = hcq.witness
    if hcq.is_hcq:
        report.notes.extend(hcq_to_strict(spec, tol).notes)
    else:
        report.notes.append("not an HCQ*-algebra: no strict CQ*-structure derived")
    return report


def _passed(name, note):
    return Check(name, True, 0.0, note)


def cmd_check(args, tol) -> list[Report]:
    paths = args.paths
    if args.jobs > 1 and len(paths) > 1:
        # library calls are pure; map preserves input order
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(_check_one, p, tol) for p in paths]
            return [f.result() for f in futures]
    return [_check_one(p, tol) for p in paths]


def _parse_floats(text: str) -> list[float]:
    return [float(Fraction(t)) for t in text.split(",") if t.strip()]


def _parse_complex(text: str) -> list[complex]:
    out = []
    for t in text.split(","):
        t = t.strip().replace("i", "j")
        if t:
            out.append(complex(t))
    return out


def cmd_modular(args, tol) -> list[Report]:
    report = Report("modular", tol.as_dict())
    spec = _load_algebra(args.path, tol, report)
    lh = check_left_hilbert(spec, tol)
    report.add_checks(lh)
    if not lh.ok:
        report.notes.append("left Hilbert axioms fail: modular theory not computed")
        return [report]
    md = modular_data(spec, tol)
    for key, res in md.residuals.items():
        report.checks.append(_check(f"modular.{key}", res, tol.eq))
    ts = _parse_floats(args.t)
    alphas = _parse_complex(args.alpha) + [1j * t for t in ts]
    tom = tomita_check(spec, md, ts, tol)
    report.add_checks(tom.checks)
    std = standardness(spec, md, tol)
    report.add_checks([_check("standard", std.star_vs_J, tol.eq, required=False,
                              note="star = J_A; equivalently (x^#|x*) >= 0")])
    if std.witness is not None:
        report.witnesses["standardness"] = {"x": std.witness, "value": std.witness_value}
    probe = remark_probe(spec, md, tol)
    _, flat = flat_structure(spec, tol)
    report.add_checks(flat.checks)
    flow = tomita_flow(spec, alphas, md, tol)
    report.add_checks(flow.checks)
    report.notes.extend(flow.notes)

    u = spec.unit if spec.unit is not None else quasi_unit(spec, tol)
    if u is None:
        report.notes.append("no quasi-unit")
    else:
        for key, res in unit_residuals(spec, u).items():
            report.checks.append(_check(f"quasi-unit.{key}", res, tol.eq))
    report.results.update({
        "dim": spec.dim,
        "delta_spectrum": md.spectrum(),
        "J": md.J.matrix,
        "standard": std.standard,
        "standardness_min_eigenvalue": std.min_eigenvalue,
        "dim_L": tom.dim_L,
        "dim_commutant": tom.dim_commutant,
        "dim_double_commutant": tom.dim_double_commutant,
        "remark_probe": {
            "commutant_R_equals_double_L": probe.commutant_R_equals_double_L,
            "J_commutes_with_JA": probe.J_commutes_with_JA,
            "J_equals_JA": probe.J_equals_JA,
            "residuals": probe.residuals,
        },
        "quasi_unit": u,
    })
    report.notes.extend(tom.notes)
    return [report]


def _check(name, residual, threshold, required=True, note=""):
    return Check(name, bool(residual <= threshold), float(residual), note, required)


def cmd_gns(args, tol) -> list[Report]:
    report = Report("gns", tol.as_dict())
    spec = _load_algebra(args.algebra, tol, report)
    form = parse_form(args.form, tol)
    report.add_input(args.form, file_digest(args.form))
    if form.dim != spec.dim:
        raise InputError(f"form has dimension {form.dim}, algebra has {spec.dim}")
    u = spec.unit if spec.unit is not None else quasi_unit(spec, tol)
    if u is None:
        report.checks.append(_check("quasi-unit", 1.0, 0.0,
                                    note=f"hypothesis not met: {QUASI_UNIT_HYPOTHESIS}"))
        report.notes.append(f"no quasi-unit found; the construction needs a {QUASI_UNIT_HYPOTHESIS}")
        return [report]
    conds = check_form(spec, form, u, tol)
    report.add_checks(conds)
    try:
        res = gns_construct(spec, form, u, tol)
    except DescentError as exc:
        report.notes.append(str(exc))
        return [report]
    for key, val in res.residuals.items():
        report.checks.append(_check(f"gns.{key}", val, 10 * max(tol.eq, tol.rank)))
    if res.quotient_hcq is not None:
        report.add_checks(res.quotient_hcq.checks, prefix="quotient.")
    hom = verify_homomorphism(res.phi_map, spec, res.quotient_spec, tol)
    report.add_checks(hom.checks)
    q_std = standardness(res.quotient_spec, tol=tol).standard if res.dim else True
    report.checks.append(_check("gns.standard-agreement", float(q_std != res.standard), 0.0,
                                note="(ii)_4 verdict matches standardness of the quotient"))
    report.results.update({
        "dim": spec.dim,
        "quotient_dim": res.dim,
        "null_dim": res.null_dim,
        "faithful": res.faithful,
        "standard": res.standard,
        "contractive_margin": res.contractive_margin,
        "classification": hom.classification,
        "phi_map": res.phi_map,
    })
    report.notes.extend(res.notes)
    if args.quotient_out:
        dump_algebra(res.quotient_spec, args.quotient_out)
        report.notes.append(f"quotient written to {args.quotient_out}")
    return [report]


def cmd_gen(args, tol):
    if args.kind == "matrix-state":
        if args.n is None or args.rho is None:
            raise InputError("matrix-state needs --n and --rho")
        spec = gen_matrix_state(args.n, args.rho.split(","))
    elif args.kind == "commutative":
        if args.weights is None:
            raise InputError("commutative needs --weights")
        twist = args.twist
        if twist not in (None, "none", "swap"):
            twist = [int(t) for t in twist.split(",")]
        spec = gen_commutative(args.weights.split(","), twist)
    else:
        if args.input is None:
            raise InputError("from-cyclic-vector needs --input JSON with 'generators' and 'omega'")
        try:
            with open(args.input) as fh:
                data = json.load(fh)
            gens = [decode_array(g, 2, "generator") for g in data["generators"]]
            omega = decode_array(data["omega"], 1, "omega")
        except (OSError, KeyError, TypeError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read generator input {args.input}: {exc}") from exc
        spec = gen_from_cyclic_vector(gens, omega, tol)
    return spec


def cmd_sweep(args, tol) -> list[Report]:
    report = Report("sweep", tol.as_dict())
    if args.points < 1 or not (0 < args.ratio_min <= args.ratio_max):
        raise InputError("need --points >= 1 and 0 < --ratio-min <= --ratio-max")
    ratios = np.geomspace(args.ratio_min, args.ratio_max, args.points)
    rows = []
    for k, q in enumerate(ratios):
        rho = q ** np.arange(args.n)
        rho = rho / rho.sum()
        rho[-1] = 1.0 - rho[:-1].sum()
        spec = gen_matrix_state(args.n, rho)
        md = modular_data(spec, tol)
        std = standardness(spec, md, tol)
        worst = max(md.residuals.values())
        report.checks.append(_check(f"sweep[{k}].modular", worst, tol.eq,
                                    note=f"ratio {q:.6g}"))
        rows.append({"ratio": float(q), "rho": rho, "standard": std.standard,
                     "delta_spectrum": md.spectrum(), "max_residual": worst})
    report.results["points"] = rows
    report.results["n"] = args.n
    return [report]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-eq", type=float, default=DEFAULT_TOL.eq)
    common.add_argument("--tol-rank", type=float, default=DEFAULT_TOL.rank)
    common.add_argument("--tol-pd", type=float, default=DEFAULT_TOL.pd)
    common.add_argument("--output", choices=("json", "text"), default="text")
    common.add_argument("--out", metavar="FILE", help="write output here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="quasistar", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"quasistar {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="certify algebra files")
    c.add_argument("paths", nargs="+")
    c.add_argument("--jobs", type=int, default=1)

    m = sub.add_parser("modular", parents=[common], help="modular theory of one algebra")
    m.add_argument("path")
    m.add_argument("--t", default="0.5,1,2", help="comma-separated t for Delta^{it}")
    m.add_argument("--alpha", default="0.5,1+1i", help="comma-separated complex powers")

    g = sub.add_parser("gns", parents=[common], help="GNS quotient for a positive form")
    g.add_argument("algebra")
    g.add_argument("form")
    g.add_argument("--quotient-out", metavar="FILE")

    gen = sub.add_parser("gen", parents=[common], help="write a generated algebra file")
    gen.add_argument("kind", choices=("matrix-state", "commutative", "from-cyclic-vector"))
    gen.add_argument("--n", type=int)
    gen.add_argument("--rho", help="e.g. 2/3,1/3")
    gen.add_argument("--weights", help="e.g. 1/2,1/2")
    gen.add_argument("--twist", help="none, swap, or a permutation such as 1,0,2")
    gen.add_argument("--input", help="JSON with 'generators' and 'omega'")

    s = sub.add_parser("sweep", parents=[common], help="standardness over a grid of states")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--ratio-min", type=float, default=0.1)
    s.add_argument("--ratio-max", type=float, default=1.0)
    s.add_argument("--points", type=int, default=7)
    return p


def _emit(text: str, args) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _render(reports: list[Report], fmt: str) -> str:
    if fmt == "text":
        return "".join(r.to_text() for r in reports)
    if len(reports) == 1:
        return reports[0].to_json()
    return json.dumps([r.as_dict() for r in reports], indent=2, sort_keys=True) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        tol = _tolerances(args)
        if args.command == "gen":
            spec = cmd_gen(args, tol)
            _emit(dump_algebra(spec), args)
            return EXIT_OK
        handler = {"check": cmd_check, "modular": cmd_modular, "gns": cmd_gns,
                   "sweep": cmd_sweep}[args.command]
        reports = handler(args, tol)
    except SpecValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SpecParseError, InputError, NotCyclicError, NotSeparatingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NoQuasiUnitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (SingularOperatorError, InternalConsistencyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(_render(reports, args.output), args)
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
