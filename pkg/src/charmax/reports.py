"""Report records emitted by inequality-check operations."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class BoundReport:
    """LHS / RHS-main-term comparison for one inequality instance.

    ``ratio`` is lhs / rhs_main unless the operation documents otherwise.
    ``defect`` carries an absolute difference when the check is an identity.
    ``slack`` surfaces the knobs an asymptotic statement leaves implicit.
    """

    lhs: float
    rhs_main: float
    ratio: float
    defect: float | None = None
    slack: dict[str, float] | None = None
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class HalaszReport:
    """Two-sided record for a logarithmic-mean bound check."""

    lhs: float
    rhs_main: float
    rhs_tail: float
    ratio: float
    params: dict = field(default_factory=dict)
