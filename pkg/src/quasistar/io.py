"""JSON file formats for algebras and forms.

Complex scalars are two-element arrays ``[re, im]``; plain JSON numbers are
accepted as real scalars on input. Floats go through ``repr`` so a
write/read cycle reproduces every array bit for bit.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from ._tolerances import DEFAULT_TOL, Tolerances
from .algebra import AlgebraSpec, validate_spec
from .diagnostics import Check
from .gns import FormSpec

__all__ = [
    "ALGEBRA_FORMAT",
    "FORM_FORMAT",
    "SpecParseError",
    "SpecValidationError",
    "algebra_from_dict",
    "decode_array",
    "algebra_to_dict",
    "dump_algebra",
    "dump_form",
    "file_digest",
    "form_from_dict",
    "form_to_dict",
    "parse_algebra",
    "parse_form",
]

ALGEBRA_FORMAT = "quasistar-algebra/1"
FORM_FORMAT = "quasistar-form/1"


class SpecParseError(ValueError):
    """Malformed file: bad JSON, missing keys, wrong shapes."""


class SpecValidationError(ValueError):
    """Well-formed file whose content violates an invariant."""

    def __init__(self, message: str, checks=()):
        super().__init__(message)
        self.checks = list(checks)

    @property
    def names(self) -> list[str]:
        return [c.name for c in self.checks]


def _encode(a) -> list:
    a = np.asarray(a, dtype=complex)
    if a.ndim == 0:
        z = complex(a)
        return [float(z.real), float(z.imag)]
    return [_encode(x) for x in a]


def _is_scalar(v) -> bool:
    if isinstance(v, bool):
        return False
    if isinstance(v, (int, float)):
        return True
    return (isinstance(v, list) and len(v) == 2
            and all(isinstance(p, (int, float)) and not isinstance(p, bool) for p in v))


def decode_array(v, depth: int, what: str) -> np.ndarray:
    """Nested list of depth ``depth`` with scalar leaves -> complex array."""

    def walk(x, d):
        if d == 0:
            if not _is_scalar(x):
                raise SpecParseError(f"{what}: expected a number or [re, im], got {x!r}")
            try:
                if isinstance(x, list):
                    return complex(float(x[0]), float(x[1]))
                return complex(float(x), 0.0)
            except OverflowError as exc:
                raise SpecParseError(f"{what}: number out of range") from exc
        if not isinstance(x, list):
            raise SpecParseError(f"{what}: expected a nested array of depth {depth}")
        return [walk(e, d - 1) for e in x]

    data = walk(v, depth)
    try:
        arr = np.array(data, dtype=complex)
    except ValueError as exc:
        raise SpecParseError(f"{what}: ragged array") from exc
    if arr.ndim != depth and not (arr.size == 0 and depth > 1):
        raise SpecParseError(f"{what}: ragged array")
    return arr


def algebra_to_dict(spec: AlgebraSpec, **meta) -> dict:
    d = {
        "format": ALGEBRA_FORMAT,
        "dim": spec.dim,
        "structure": _encode(spec.structure),
        "star": _encode(spec.star.matrix),
        "sharp": _encode(spec.sharp.matrix),
        "gram": _encode(spec.gram),
    }
    if spec.unit is not None:
        d["unit"] = _encode(spec.unit)
    d.update({k: v for k, v in meta.items() if v is not None})
    return d


def algebra_from_dict(d, tol: Tolerances = DEFAULT_TOL, validate: bool = True) -> AlgebraSpec:
    if not isinstance(d, dict):
        raise SpecParseError("algebra file must hold a JSON object")
    missing = [k for k in ("dim", "structure", "star", "sharp", "gram") if k not in d]
    if missing:
        raise SpecParseError(f"missing keys: {', '.join(missing)}")
    fmt = d.get("format", ALGEBRA_FORMAT)
    if fmt != ALGEBRA_FORMAT:
        raise SpecParseError(f"unsupported format {fmt!r}")
    n = d["dim"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise SpecParseError(f"dim must be a non-negative integer, got {n!r}")
    structure = decode_array(d["structure"], 3, "structure")
    mats = {k: decode_array(d[k], 2, k) for k in ("star", "sharp", "gram")}
    if n == 0:
        mats = {k: v.reshape(0, 0) for k, v in mats.items()}
        structure = np.zeros((0, 0, 0), complex)
    unit = decode_array(d["unit"], 1, "unit") if d.get("unit") is not None else None
    if structure.shape != (n, n, n):
        raise SpecParseError(f"structure must be {n} x {n} x {n}, got {structure.shape}")
    try:
        spec = AlgebraSpec(structure=structure, unit=unit, **mats)
    except ValueError as exc:
        raise SpecParseError(str(exc)) from exc
    if validate:
        bad = validate_spec(spec, tol)
        if bad:
            names = ", ".join(f"{c.name} (residual {c.residual:.3e})" for c in bad)
            raise SpecValidationError(f"invalid algebra: {names}", bad)
    return spec


def form_to_dict(form: FormSpec, **meta) -> dict:
    d = {"format": FORM_FORMAT, "matrix": _encode(form.F)}
    d.update({k: v for k, v in meta.items() if v is not None})
    return d


def form_from_dict(d, tol: Tolerances = DEFAULT_TOL) -> FormSpec:
    if not isinstance(d, dict) or "matrix" not in d:
        raise SpecParseError("form file must hold an object with a 'matrix' key")
    fmt = d.get("format", FORM_FORMAT)
    if fmt != FORM_FORMAT:
        raise SpecParseError(f"unsupported format {fmt!r}")
    F = decode_array(d["matrix"], 2, "matrix")
    if F.size == 0:
        F = F.reshape(0, 0)
    try:
        form = FormSpec(F)
    except ValueError as exc:
        raise SpecParseError(str(exc)) from exc
    bad = form.violations(tol)
    if bad:
        checks = [Check(name, False, res) for name, res in bad]
        raise SpecValidationError(f"invalid form: {bad[0][0]} (residual {bad[0][1]:.3e})", checks)
    return form


def _dumps(d: dict) -> str:
    return json.dumps(d, indent=1, allow_nan=True) + "\n"


def _load(path) -> dict:
    try:
        text = Path(path).read_text()
    except (OSError, UnicodeDecodeError) as exc:
        raise SpecParseError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"{path}: invalid JSON ({exc})") from exc


def dump_algebra(spec: AlgebraSpec, path=None, **meta) -> str:
    text = _dumps(algebra_to_dict(spec, **meta))
    if path is not None:
        Path(path).write_text(text)
    return text


def dump_form(form: FormSpec, path=None, **meta) -> str:
    text = _dumps(form_to_dict(form, **meta))
    if path is not None:
        Path(path).write_text(text)
    return text


def parse_algebra(path, tol: Tolerances = DEFAULT_TOL, validate: bool = True) -> AlgebraSpec:
    return algebra_from_dict(_load(path), tol, validate)


def parse_form(path, tol: Tolerances = DEFAULT_TOL) -> FormSpec:
    return form_from_dict(_load(path), tol)


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
