from __future__ import annotations

from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared by every check.

    ``eq`` bounds operator-identity residuals relative to operand norms,
    ``herm`` the Hermitian defect of Gram and form matrices, ``pd`` the
    smallest admissible eigenvalue relative to the largest, ``rank`` the
    relative singular-value cutoff for rank and nullspace decisions, and
    ``ineq`` the additive slack (relative to operand scale) for norm
    inequalities.
    """

    eq: float = 1e-9
    herm: float = 1e-10
    pd: float = 1e-12
    rank: float = 1e-10
    ineq: float = 1e-9

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULT_TOL = Tolerances()
