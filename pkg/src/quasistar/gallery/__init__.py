"""Shipped example algebras, forms and deliberately broken counterexamples.

The JSON files under ``data/`` are generated by :func:`regenerate`; the
test-suite checks that the shipped copies agree with a fresh build.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable

import numpy as np

from ..algebra import AlgebraSpec
from ..gns import FormSpec
from ..hcq import gen_commutative, gen_from_cyclic_vector, gen_matrix_state
from ..io import dump_algebra, dump_form, parse_algebra, parse_form

__all__ = [
    "COUNTEREXAMPLES",
    "EXAMPLES",
    "FORMS",
    "GalleryEntry",
    "FormEntry",
    "algebra_path",
    "build",
    "build_form",
    "form_path",
    "load",
    "load_form",
    "names",
    "regenerate",
]


@dataclass(frozen=True)
class GalleryEntry:
    name: str
    builder: Callable[[], AlgebraSpec]
    description: str
    standard: bool = True
    expected_failures: tuple[str, ...] = field(default=())

    @property
    def is_counterexample(self) -> bool:
        return bool(self.expected_failures)


@dataclass(frozen=True)
class FormEntry:
    name: str
    algebra: str
    builder: Callable[[], FormSpec]
    description: str


def _cyclic_diag() -> AlgebraSpec:
    return gen_from_cyclic_vector([np.diag([1.0, 2.0, 3.0])], [0.6, 0.48, 0.64])


def _cyclic_m2() -> AlgebraSpec:
    # M_2 (x) 1 on C^2 (x) C^2 with omega = vec(rho^{1/2}), rho = diag(2/3, 1/3)
    e12 = np.array([[0.0, 1.0], [0.0, 0.0]])
    e11 = np.diag([1.0, 0.0])
    omega = np.zeros(4)
    omega[0] = np.sqrt(2 / 3)
    omega[3] = np.sqrt(1 / 3)
    return gen_from_cyclic_vector([np.kron(e12, np.eye(2)), np.kron(e11, np.eye(2))], omega)


def _gram_inflated() -> AlgebraSpec:
    spec = gen_matrix_state(2, ["2/3", "1/3"])
    return spec.replace(gram=100 * spec.gram)


def _c2_identity_gram() -> AlgebraSpec:
    # pointwise C^2 with the Euclidean norm: ||x|| can exceed max |x_i|
    c = np.zeros((2, 2, 2))
    c[0, 0, 0] = c[1, 1, 1] = 1.0
    return AlgebraSpec(structure=c, star=np.eye(2), sharp=np.eye(2), gram=np.eye(2),
                       unit=np.ones(2))


def _zero_product() -> AlgebraSpec:
    return AlgebraSpec(structure=np.zeros((2, 2, 2)), star=np.eye(2), sharp=np.eye(2),
                       gram=np.eye(2))


_ENTRIES = [
    GalleryEntry("C", lambda: gen_matrix_state(1, [1]), "the algebra C"),
    GalleryEntry("tracial-M2", lambda: gen_matrix_state(2, ["1/2", "1/2"]),
                 "M_2 with the normalized trace"),
    GalleryEntry("tracial-M3", lambda: gen_matrix_state(3, ["1/3", "1/3", "1/3"]),
                 "M_3 with the normalized trace"),
    GalleryEntry("matrix-state-2", lambda: gen_matrix_state(2, ["2/3", "1/3"]),
                 "M_2 with the faithful state rho = diag(2/3, 1/3)"),
    GalleryEntry("matrix-state-3", lambda: gen_matrix_state(3, ["1/2", "1/3", "1/6"]),
                 "M_3 with the faithful state rho = diag(1/2, 1/3, 1/6)"),
    GalleryEntry("commutative-C2", lambda: gen_commutative(["1/2", "1/2"]),
                 "pointwise C^2 with weights (1/2, 1/2)"),
    GalleryEntry("commutative-C3", lambda: gen_commutative(["1/2", "1/4", "1/4"]),
                 "pointwise C^3 with weights (1/2, 1/4, 1/4)"),
    GalleryEntry("swap-C2", lambda: gen_commutative(["1/2", "1/2"], twist="swap"),
                 "C^2 whose star swaps the coordinates; HCQ* but not standard",
                 standard=False),
    GalleryEntry("cyclic-diag", _cyclic_diag,
                 "diagonal algebra on C^3 with cyclic vector (0.6, 0.48, 0.64)"),
    GalleryEntry("cyclic-M2", _cyclic_m2,
                 "M_2 acting on C^2 (x) C^2 with cyclic vector vec(rho^{1/2})"),
]

_COUNTER = [
    GalleryEntry("counterexample-gram-inflated", _gram_inflated,
                 "matrix-state-2 with the Gram matrix scaled by 100; ||x|| > ||x||_#",
                 expected_failures=("(a.2)", "hcq.norm-domination")),
    GalleryEntry("counterexample-C2-identity-gram", _c2_identity_gram,
                 "pointwise C^2 with identity Gram; norm domination fails at (1, 1)",
                 expected_failures=("(a.2)", "hcq.norm-domination")),
    GalleryEntry("counterexample-zero-product", _zero_product,
                 "two-dimensional algebra with identically zero product",
                 standard=True,
                 expected_failures=("(a.2)", "left-hilbert.(iii)", "hcq.norm-domination")),
]

EXAMPLES = {e.name: e for e in _ENTRIES}
COUNTEREXAMPLES = {e.name: e for e in _COUNTER}

FORMS = {
    "tracial-M2-identity": FormEntry(
        "tracial-M2-identity", "tracial-M2",
        lambda: FormSpec(EXAMPLES["tracial-M2"].builder().gram),
        "the inner product of tracial M_2 as a form"),
    "C2-rank-one": FormEntry(
        "C2-rank-one", "commutative-C2",
        lambda: FormSpec(np.diag([0.5, 0.0])),
        "phi(a, b) = a_1 conj(b_1) / 2 on commutative-C2"),
}


def names(counterexamples: bool = False) -> list[str]:
    out = list(EXAMPLES)
    if counterexamples:
        out += list(COUNTEREXAMPLES)
    return out


def _entry(name: str) -> GalleryEntry:
    if name in EXAMPLES:
        return EXAMPLES[name]
    if name in COUNTEREXAMPLES:
        return COUNTEREXAMPLES[name]
    raise KeyError(f"unknown gallery entry {name!r}")


def _data_dir():
    return resources.files(__name__).joinpath("data")


def algebra_path(name: str) -> Path:
    _entry(name)
    return Path(str(_data_dir().joinpath(f"{name}.json")))


def form_path(name: str) -> Path:
    if name not in FORMS:
        raise KeyError(f"unknown gallery form {name!r}")
    return Path(str(_data_dir().joinpath(f"form-{name}.json")))


def build(name: str) -> AlgebraSpec:
    """Fresh build from the generator, bypassing the shipped file."""
    return _entry(name).builder()


def build_form(name: str) -> FormSpec:
    return FORMS[name].builder()


def load(name: str) -> AlgebraSpec:
    """Shipped spec. Counterexamples are loaded without validation
    (they are valid specs, only the norm checks fail)."""
    return parse_algebra(algebra_path(name))


def load_form(name: str) -> FormSpec:
    return parse_form(form_path(name))


def regenerate(directory=None) -> list[Path]:
    """Write every gallery file into ``directory`` (default: the package data)."""
    directory = Path(str(_data_dir())) if directory is None else Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for e in list(EXAMPLES.values()) + list(COUNTEREXAMPLES.values()):
        meta = {"name": e.name, "description": e.description}
        if e.expected_failures:
            meta["expected_failures"] = list(e.expected_failures)
        p = directory / f"{e.name}.json"
        dump_algebra(e.builder(), p, **meta)
        written.append(p)
    for f in FORMS.values():
        p = directory / f"form-{f.name}.json"
        dump_form(f.builder(), p, name=f.name, algebra=f.algebra, description=f.description)
        written.append(p)
    return written
