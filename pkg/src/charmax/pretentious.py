"""Pretentious distance between completely multiplicative functions.

A function is represented by its values on the primes up to a working
bound; the squared distance between f and g up to y is the sum over
p <= y of (1 - Re f(p) conj(g(p))) / p.  Twisting by p^{-it} and
minimising over a window of t values gives the twisted minimum, the
quantity the lower-bound machinery in this package targets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError
from .primes import factorize, primes_up_to

__all__ = [
    "CMFunction",
    "DistanceResult",
    "TwistMinimum",
    "TwistBoundParams",
    "UpperBoundMain",
    "distance_sq",
    "min_twisted_distance",
    "saving_constant",
    "twist_min_lower_bound",
    "distance_sq_lower_bound",
]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
# grid points per vectorized profile chunk; bounds the phase matrix size
_CHUNK = 128


@dataclass(frozen=True)
class CMFunction:
    """Completely multiplicative function pinned down by prime values up to `bound`.

    `prime_list` and `prime_vals` are aligned read-only arrays; every value
    must lie in the closed unit disc.
    """

    prime_list: np.ndarray
    prime_vals: np.ndarray
    bound: int

    def __post_init__(self) -> None:
        if self.prime_list.shape != self.prime_vals.shape:
            raise DomainError("prime_list and prime_vals must be aligned")
        if self.prime_list.size and self.prime_list[-1] > self.bound:
            raise DomainError("prime_list exceeds the declared bound")
        mags = np.abs(self.prime_vals)
        if mags.size and mags.max() > 1.0 + 1e-12:
            raise DomainError("prime values must lie in the closed unit disc")

    @classmethod
    def from_character(cls, chi, bound: int) -> "CMFunction":
        ps = primes_up_to(bound)
        vals = chi._period[ps % chi.group.modulus]
        return cls._build(ps, vals, bound)

    @classmethod
    def constant(cls, value: complex, bound: int) -> "CMFunction":
        ps = primes_up_to(bound)
        return cls._build(ps, np.full(ps.shape, value, dtype=complex), bound)

    @classmethod
    def from_prime_values(cls, assign: Callable[[int], complex], bound: int) -> "CMFunction":
        ps = primes_up_to(bound)
        vals = np.array([assign(int(p)) for p in ps], dtype=complex)
        return cls._build(ps, vals, bound)

    @classmethod
    def _build(cls, ps: np.ndarray, vals: np.ndarray, bound: int) -> "CMFunction":
        ps = np.array(ps, dtype=np.int64)
        vals = np.array(vals, dtype=complex)
        ps.setflags(write=False)
        vals.setflags(write=False)
        return cls(ps, vals, int(bound))

    def value_at_prime(self, p: int) -> complex:
        idx = int(np.searchsorted(self.prime_list, p))
        if idx >= self.prime_list.size or self.prime_list[idx] != p:
            raise DomainError(f"{p} is not a stored prime (bound {self.bound})")
        return complex(self.prime_vals[idx])

    def __call__(self, n: int) -> complex:
        """Evaluate at a positive integer via complete multiplicativity."""
        if n < 1:
            raise DomainError("defined on positive integers")
        out = 1.0 + 0.0j
        for p, a in factorize(n):
            if p > self.bound:
                raise DomainError(f"prime factor {p} exceeds the bound {self.bound}")
            out *= self.value_at_prime(p) ** a
        return out

    def restrict(self, y: float) -> tuple[np.ndarray, np.ndarray]:
        if y > self.bound:
            raise DomainError(f"requested y={y} above the stored bound {self.bound}")
        cut = int(np.searchsorted(self.prime_list, y, side="right"))
        return self.prime_list[:cut], self.prime_vals[:cut]

    def twist(self, t: float) -> "CMFunction":
        """Pointwise multiply by p^{-it}."""
        phase = np.exp(-1j * t * np.log(self.prime_list.astype(float)))
        return CMFunction._build(self.prime_list, self.prime_vals * phase, self.bound)


@dataclass(frozen=True)
class DistanceResult:
    value: float
    y: float
    per_prime: np.ndarray | None = None


@dataclass(frozen=True)
class TwistMinimum:
    """Twisted-minimum record.

    grid_value is the pure nested-grid minimum (monotone in the window by
    construction); value additionally applies golden-section refinement and
    never exceeds grid_value.  grid_error_bound covers the gap to the true
    minimum via the Lipschitz bound 2 log y on the profile derivative.
    """

    value: float
    argmin: float
    grid_value: float
    grid_argmin: float
    window: float
    y: float
    grid_points: int
    grid_error_bound: float
    resolution: float


def _aligned(f: CMFunction, g: CMFunction, y: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    pf, vf = f.restrict(y)
    pg, vg = g.restrict(y)
    if pf.shape != pg.shape or (pf.size and not np.array_equal(pf, pg)):
        raise DomainError("functions are pinned on different prime lists")
    return pf, vf, vg


def distance_sq(f: CMFunction, g: CMFunction, y: float, *, keep_per_prime: bool = False) -> DistanceResult:
    """Squared pretentious distance sum_{p <= y} (1 - Re f(p) conj(g(p))) / p."""
    if y < 2:
        raise DomainError("need y >= 2")
    ps, vf, vg = _aligned(f, g, y)
    terms = (1.0 - (vf * np.conj(vg)).real) / ps.astype(float)
    # clip roundoff dust outside the exact range [0, 2/p]
    terms = np.clip(terms, 0.0, 2.0 / ps.astype(float))
    value = float(terms.sum())
    return DistanceResult(value, y, terms if keep_per_prime else None)


class _TwistProfile:
    """Squared distance from f(n) n^{-it} to g, as a function of t."""

    def __init__(self, f: CMFunction, g: CMFunction, y: float) -> None:
        ps, vf, vg = _aligned(f, g, y)
        w = 1.0 / ps.astype(float)
        self.total = float(w.sum())
        self.coeff = w * vf * np.conj(vg)
        self.logs = np.log(ps.astype(float))

    def at(self, t: float) -> float:
        re = (self.coeff * np.exp(-1j * t * self.logs)).real
        return self.total - float(re.sum())

    def batch(self, ts: np.ndarray) -> np.ndarray:
        out = np.empty(ts.size)
        for lo in range(0, ts.size, _CHUNK):
            block = ts[lo : lo + _CHUNK]
            phases = np.exp(np.outer(block, -1j * self.logs))
            out[lo : lo + block.size] = self.total - (phases @ self.coeff).real
        return out


def _golden_section(fun: Callable[[float], float], lo: float, hi: float, tol: float) -> tuple[float, float]:
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = fun(c), fun(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = fun(d)
    x = 0.5 * (a + b)
    return x, fun(x)


def min_twisted_distance(
    f: CMFunction,
    y: float,
    window: float,
    *,
    against: CMFunction | None = None,
    resolution: float = 0.01,
    refine: bool = True,
) -> TwistMinimum:
    """Minimum over |t| <= window of the squared distance from f(n) n^{-it} to g.

    The window is scanned at spacing resolution / log y on a grid of integer
    multiples of the spacing, so enlarging the window only adds points and
    the grid stage is monotone in `window`.  Golden-section refinement then
    polishes the best few separated grid basins; ties go to the smallest t.
    """
    if window < 0:
        raise DomainError("window must be nonnegative")
    if resolution <= 0:
        raise DomainError("resolution must be positive")
    if y < 2:
        raise DomainError("need y >= 2")
    g = against if against is not None else CMFunction.constant(1.0, f.bound)
    profile = _TwistProfile(f, g, y)
    step = resolution / math.log(y)
    m = int(math.floor(window / step))
    ts = step * np.arange(-m, m + 1)
    vals = profile.batch(ts)
    order = np.argsort(vals, kind="stable")
    grid_t = float(ts[order[0]])
    grid_v = float(vals[order[0]])
    best_t, best_v = grid_t, grid_v
    if refine and ts.size > 1:
        picked: list[float] = []
        for idx in order:
            t = float(ts[idx])
            if any(abs(t - s) <= 2 * step for s in picked):
                continue
            picked.append(t)
            if len(picked) == 3:
                break
        for t in picked:
            lo = max(-window, t - step)
            hi = min(window, t + step)
            if hi <= lo:
                continue
            x, v = _golden_section(profile.at, lo, hi, 1e-6)
            if v < best_v - 1e-15 or (abs(v - best_v) <= 1e-15 and x < best_t):
                best_t, best_v = x, v
    if best_v > grid_v:
        best_t, best_v = grid_t, grid_v
    return TwistMinimum(
        value=best_v,
        argmin=best_t,
        grid_value=grid_v,
        grid_argmin=grid_t,
        window=window,
        y=y,
        grid_points=int(ts.size),
        grid_error_bound=2.0 * resolution,
        resolution=resolution,
    )


def saving_constant(g: int) -> float:
    """1 - (g/pi) sin(pi/g), the distance saving forced by order-g values."""
    if g < 3 or g % 2 == 0:
        raise DomainError("order must be an odd integer >= 3")
    return 1.0 - (g / math.pi) * math.sin(math.pi / g)


@dataclass(frozen=True)
class TwistBoundParams:
    """Inputs for the twisted-minimum lower bound.

    y: cutoff; T: twist window; alpha: the exponent tying T = (log y)^{-alpha};
    g: odd order of the character values; k: order of the twisting root;
    k_star: k / gcd(k, g); modulus: conductor entering the log m penalty;
    beta: exceptional-modulus flag (caller supplied); epsilon: Siegel slack.
    """

    y: float
    T: float
    alpha: float
    g: int
    k: int
    k_star: int
    modulus: int
    beta: int = 0
    epsilon: float = 0.0

    def __post_init__(self) -> None:
        if self.g < 3 or self.g % 2 == 0:
            raise DomainError("g must be odd and >= 3")
        if self.k < 1:
            raise DomainError("k must be positive")
        if self.k_star * math.gcd(self.k, self.g) != self.k:
            raise DomainError("k_star must equal k / gcd(k, g)")
        if self.T <= 0:
            raise DomainError("T must be positive")
        if self.beta not in (0, 1):
            raise DomainError("beta must be 0 or 1")
        if self.modulus < 1:
            raise DomainError("modulus must be positive")


def twist_min_lower_bound(params: TwistBoundParams) -> float:
    """Main term of the twisted-minimum lower bound for an order-g character.

    (delta_g + alpha pi^2 (1 - delta_g) / (4 (g k*)^2)) log log y − beta epsilon log m.
    The O(log log m) slack is excluded here and surfaced by callers as a
    separate report field.
    """
    if math.log(params.y) <= 1.0:
        raise DomainError("need log log y > 0")
    delta = saving_constant(params.g)
    gk = params.g * params.k_star
    lead = delta + params.alpha * math.pi**2 * (1.0 - delta) / (4.0 * gk * gk)
    penalty = params.beta * params.epsilon * math.log(params.modulus)
    return lead * math.log(math.log(params.y)) - penalty


@dataclass(frozen=True)
class UpperBoundMain:
    """Main term of the distance lower bound against a fixed twisting root.

    value uses the exact coefficient 1 - (1 - delta_g) u / tan u at
    u = pi / (g k*); strengthened uses the quadratic majorant
    u / tan u <= 1 - u^2 / 4 (valid for u <= pi/6), giving the cleaner
    coefficient delta_g + pi^2 (1 - delta_g) / (4 (g k*)^2).
    """

    value: float
    strengthened: float
    coefficient: float
    strengthened_coefficient: float


def distance_sq_lower_bound(g: int, k: int, y: float) -> UpperBoundMain:
    if g < 3 or g % 2 == 0:
        raise DomainError("g must be odd and >= 3")
    if k < 2 or k % 2 == 1:
        raise DomainError("k must be even and >= 2")
    if math.log(y) <= 1.0:
        raise DomainError("need log log y > 0")
    delta = saving_constant(g)
    k_star = k // math.gcd(k, g)
    gk = g * k_star
    if gk < 6:
        raise DomainError("need g k* >= 6")
    u = math.pi / gk
    coeff = 1.0 - (1.0 - delta) * u / math.tan(u)
    coeff2 = delta + math.pi**2 * (1.0 - delta) / (4.0 * gk * gk)
    loglog = math.log(math.log(y))
    return UpperBoundMain(coeff * loglog, coeff2 * loglog, coeff, coeff2)
