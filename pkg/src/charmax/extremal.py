"""Root-of-unity maximizers and extremal character construction.

For a character psi of even order k and a target odd order g, picking at
each prime the g-th root of unity closest in direction to psi(p) minimises
the pretentious distance to psi.  The class averages of those maxima have
an exact closed form in terms of the oscillation function F_n, whose
logarithmic integrals carry the main terms.  A desk-scale search produces
actual characters matching prescribed root values at small primes.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.integrate import quad

from .dirichlet import DirichletCharacter, build_group, count_primitive_with_order
from .errors import CapacityError, DomainError, RegimeWarning
from .pretentious import CMFunction, distance_sq, distance_sq_lower_bound, saving_constant
from .primes import factorize, primes_up_to
from .reports import BoundReport

__all__ = [
    "RootChoice",
    "RootAverage",
    "IntegralResult",
    "PrescribedTargets",
    "ExtremalProfile",
    "root_maximizer",
    "root_average",
    "oscillation",
    "oscillation_log_integral",
    "weighted_prime_sum",
    "search_prescribed",
    "prescribed_count_shape",
    "extremal_profile",
]

_TIE_TOL = 1e-12
# exhaustive prescribed-value search is exponential in the target count
_MAX_TARGETS = 8


@dataclass(frozen=True)
class RootChoice:
    root: complex
    angle: Fraction | None  # None encodes the zero candidate
    value: float


def _as_angle(theta) -> float:
    return float(theta)


def root_maximizer(g: int, theta) -> RootChoice:
    """Maximize Re(z e(-theta)) over z in the g-th roots of unity and 0.

    Ties break to the smallest root angle, with z = 0 last.
    """
    if g < 3 or g % 2 == 0:
        raise DomainError("order must be an odd integer >= 3")
    th = _as_angle(theta)
    best_angle: Fraction | None = None
    best = -2.0
    for j in range(g):
        val = math.cos(2.0 * math.pi * (j / g - th))
        if val > best + _TIE_TOL:
            best = val
            best_angle = Fraction(j, g)
    if 0.0 > best + _TIE_TOL:
        return RootChoice(0.0 + 0.0j, None, 0.0)
    angle = best_angle
    root = complex(math.cos(2.0 * math.pi * angle), math.sin(2.0 * math.pi * angle))
    return RootChoice(root, angle, best)


@dataclass(frozen=True)
class RootAverage:
    brute: float
    closed: float


def root_average(g: int, k: int, theta) -> RootAverage:
    """Average over twist classes of the maximal aligned real part.

    brute enumerates (1/k) sum_l max_z Re(z e(-(theta - l/k))); closed is
    sin(pi/g) / (k* tan(pi/(g k*))) F_{g k*}(-g k* theta) with k* = k/gcd(k,g).
    """
    if k < 2 or k % 2 == 1:
        raise DomainError("k must be even and >= 2")
    th = _as_angle(theta)
    brute = sum(root_maximizer(g, th - ell / k).value for ell in range(k)) / k
    k_star = k // math.gcd(k, g)
    n = g * k_star
    closed = math.sin(math.pi / g) / (k_star * math.tan(math.pi / n)) * oscillation(n, -n * th)
    return RootAverage(brute, closed)


def oscillation(n: int, u) -> float:
    """F_n(u) = cos(2 pi {u} / n) + tan(pi / n) sin(2 pi {u} / n), 1-periodic."""
    if n < 3:
        raise DomainError("need n >= 3")
    frac = float(u) % 1.0
    w = 2.0 * math.pi * frac / n
    return math.cos(w) + math.tan(math.pi / n) * math.sin(w)


@dataclass(frozen=True)
class IntegralResult:
    value: float
    main_term: float
    defect: float
    quad_error: float


def oscillation_log_integral(n: int, a: float, b: float) -> IntegralResult:
    """integral of F_n({u}) du / u over [a, b], against its logarithmic main term.

    Panels split at the integer breakpoints of {u}; the main term is
    (n/pi) tan(pi/n) log(b/a) above 1, log(b/a) below 1, and the hybrid
    (n/pi) tan(pi/n) log b - log a when the range straddles 1.
    """
    if n < 3:
        raise DomainError("need n >= 3")
    if a <= 0:
        raise DomainError("need a > 0")
    if b < a:
        raise DomainError("need b >= a")
    mean = (n / math.pi) * math.tan(math.pi / n)
    if b == a:
        return IntegralResult(0.0, 0.0, 0.0, 0.0)
    tpi = math.tan(math.pi / n)
    two_pi_over_n = 2.0 * math.pi / n

    def integrand(u: float) -> float:
        w = two_pi_over_n * (u % 1.0)
        return (math.cos(w) + tpi * math.sin(w)) / u

    knots = [a] + [float(j) for j in range(math.floor(a) + 1, math.ceil(b))] + [b]
    total = 0.0
    err = 0.0
    for lo, hi in zip(knots[:-1], knots[1:]):
        if hi <= lo:
            continue
        val, estimate = quad(integrand, lo, hi, epsabs=1e-12, limit=200)
        total += val
        err += estimate
    if a >= 1.0:
        main = mean * math.log(b / a)
    elif b <= 1.0:
        main = math.log(b / a)
    else:
        main = mean * math.log(b) - math.log(a)
    return IntegralResult(total, main, total - main, err)


def _class_indices(psi: DirichletCharacter, ps: np.ndarray) -> tuple[np.ndarray, int]:
    """Class label l with psi(p) = e(l/k) per prime; -1 where psi(p) = 0."""
    k = psi.order
    vals = psi._period[ps % psi.group.modulus]
    labels = np.where(
        np.abs(vals) < 0.5,
        -1,
        np.rint(np.angle(vals) * k / (2.0 * math.pi)).astype(np.int64) % k,
    )
    return labels, k


def weighted_prime_sum(psi: DirichletCharacter, g: int, y: float):
    """Per-class maximal alignment weighted by prime reciprocal sums.

    LHS enumerates sum over classes of max-value times sum_{p <= y in class} 1/p;
    the main term is (1 - delta_g) (pi/(g k*)) / tan(pi/(g k*)) log log y.
    The LHS - RHS defect carries the bound's slack terms.
    """
    if psi.parity != -1:
        raise DomainError("psi must be odd")
    if not psi.is_primitive:
        raise DomainError("psi must be primitive")
    if g < 3 or g % 2 == 0:
        raise DomainError("g must be odd and >= 3")
    m = psi.group.modulus
    if m > math.log(y) ** (4 / 7):
        warnings.warn(
            f"conductor {m} exceeds (log y)^(4/7); outside the stated regime",
            RegimeWarning,
            stacklevel=2,
        )
    ps = primes_up_to(y)
    labels, k = _class_indices(psi, ps)
    recip = 1.0 / ps.astype(float)
    choices = [root_maximizer(g, Fraction(ell, k)) for ell in range(k)]
    class_sums = np.array([recip[labels == ell].sum() for ell in range(k)])
    lhs = float(sum(c.value * s for c, s in zip(choices, class_sums)))
    k_star = k // math.gcd(k, g)
    u = math.pi / (g * k_star)
    delta = saving_constant(g)
    rhs = (1.0 - delta) * (u / math.tan(u)) * math.log(math.log(y))
    return BoundReport(
        lhs=lhs,
        rhs_main=rhs,
        ratio=lhs / rhs,
        defect=lhs - rhs,
        params={"m": m, "k": k, "g": g, "y": y, "class_sums": class_sums.tolist()},
    )


@dataclass(frozen=True)
class PrescribedTargets:
    """Required character values at small primes: angle of a g-th root, or None for 0."""

    g: int
    targets: dict[int, Fraction | None]
    y: int

    def __post_init__(self) -> None:
        if self.g < 3 or self.g % 2 == 0:
            raise DomainError("g must be odd and >= 3")
        for p, angle in self.targets.items():
            if p < 2 or factorize(p) != ((p, 1),):
                raise DomainError(f"target key {p} is not prime")
            if self.g % p == 0:
                raise DomainError(f"target prime {p} divides the order {self.g}")
            if p > self.y:
                raise DomainError(f"target prime {p} exceeds the cutoff {self.y}")
            if angle is not None and self.g % (angle % 1).denominator != 0:
                raise DomainError(f"target at {p} is not a {self.g}-th root of unity")

    @classmethod
    def from_angles(cls, g: int, targets: dict[int, Fraction | None]) -> "PrescribedTargets":
        normalized = {p: (None if ang is None else ang % 1) for p, ang in targets.items()}
        y = max(normalized, default=2)
        return cls(g, normalized, y)


def search_prescribed(
    targets: PrescribedTargets,
    q_max: int,
    *,
    stop_after: int | None = None,
) -> tuple[DirichletCharacter, ...]:
    """All primitive characters of order g and conductor <= q_max hitting the targets.

    Deterministic conductor-then-index order.  The search is exhaustive, so
    the target count is capped.
    """
    if len(targets.targets) > _MAX_TARGETS:
        raise CapacityError(f"more than {_MAX_TARGETS} prescribed primes")
    if q_max > 10**6:
        raise CapacityError("conductor cap beyond search capacity")
    g = targets.g
    root_primes = [p for p, ang in targets.targets.items() if ang is not None]
    zero_primes = [p for p, ang in targets.targets.items() if ang is None]
    found: list[DirichletCharacter] = []
    for q in range(3, q_max + 1):
        if any(q % p == 0 for p in root_primes):
            continue
        if any(q % p != 0 for p in zero_primes):
            continue
        if count_primitive_with_order(q, g) == 0:
            continue
        group = build_group(q)
        for chi in group.characters(order_equals=g, primitive_only=True):
            if all(chi.angle(p) == ang for p, ang in targets.targets.items() if ang is not None):
                found.append(chi)
                if stop_after is not None and len(found) >= stop_after:
                    return tuple(found)
    return tuple(found)


def prescribed_count_shape(g: int, y: float, q_max: int) -> float:
    """Heuristic match-count shape N^{3/4} / (g^{2 pi(y) + 2} log^2 N), N = q_max.

    Reported next to actual search counts; never asserted, since the
    regime where it is meaningful exceeds desk scale.
    """
    n = float(q_max)
    if n <= 1:
        raise DomainError("need q_max > 1")
    return n**0.75 / (g ** (2 * len(primes_up_to(y)) + 2) * math.log(n) ** 2)


@dataclass(frozen=True)
class ExtremalProfile:
    choices: tuple[RootChoice, ...]
    witness: DirichletCharacter | None
    achieved: float | None
    main_term: float
    defect: float | None
    examined: int


def extremal_profile(
    psi: DirichletCharacter,
    g: int,
    y: float,
    *,
    prescribe_up_to: int = 19,
    q_max: int = 60000,
    pool: int = 25,
) -> ExtremalProfile:
    """Construct a character of order g pretending to psi, and score it.

    Per twist class the best g-th root is prescribed at the primes up to
    prescribe_up_to (skipping p | g m); among up to `pool` matching
    characters the smallest achieved squared distance to psi at y is
    reported against the closed-form main term.
    """
    if psi.parity != -1:
        raise DomainError("psi must be odd")
    if not psi.is_primitive:
        raise DomainError("psi must be primitive")
    m = psi.group.modulus
    k = psi.order
    choices = tuple(root_maximizer(g, Fraction(ell, k)) for ell in range(k))
    wanted: dict[int, Fraction | None] = {}
    for p in primes_up_to(prescribe_up_to):
        p = int(p)
        if g % p == 0 or m % p == 0:
            continue
        angle = psi.angle(p)
        ell = int((angle * k) % k)
        wanted[p] = choices[ell].angle
    targets = PrescribedTargets.from_angles(g, wanted)
    witnesses = search_prescribed(targets, q_max, stop_after=pool)
    main = distance_sq_lower_bound(g, k, y).value
    best: DirichletCharacter | None = None
    best_d: float | None = None
    psi_f = CMFunction.from_character(psi, int(y))
    for chi in witnesses:
        d = distance_sq(CMFunction.from_character(chi, int(y)), psi_f, y).value
        if best_d is None or d < best_d - 1e-15:
            best, best_d = chi, d
    defect = None if best_d is None else best_d - main
    return ExtremalProfile(choices, best, best_d, main, defect, len(witnesses))
