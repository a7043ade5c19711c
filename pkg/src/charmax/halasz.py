"""Halasz-type mean value machinery for friable-supported log means.

The central objects: the friable logarithmic mean sum_{n <= x, y-friable}
f(n)/n, the truncated Euler product F(s) attached to f, the band-maximum
energy of |F(1+s)/s|^2 over unit-height strips, and bound checks comparing
the mean against (log y) exp(-M(f; y, T)) + 1/T where M is the twisted
minimum distance from f to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .pretentious import CMFunction, min_twisted_distance
from .primes import friable_mask, primes_up_to
from .reports import BoundReport, HalaszReport

__all__ = [
    "BandEnergy",
    "EnergyIntegral",
    "friable_log_mean",
    "euler_product",
    "band_energy",
    "band_energy_integral",
    "halasz_bound_check",
    "euler_max_check",
    "unimodular_corpus",
]

# point-block size for the grid Euler-product evaluator
_POINT_CHUNK = 4096
_PRIME_CHUNK = 512


def friable_log_mean(f: CMFunction, x: float, y: float) -> complex:
    """sum of f(n)/n over y-friable n <= x, accumulated with compensated sums."""
    if x < 1:
        raise DomainError("need x >= 1")
    if y < 2:
        raise DomainError("need y >= 2")
    limit = int(math.floor(x))
    ps, vs = f.restrict(min(x, y))
    vals = np.ones(limit + 1, dtype=complex)
    for p, fp in zip(ps, vs):
        p = int(p)
        pk = p
        while pk <= limit:
            vals[pk::pk] *= fp
            pk *= p
    mask = friable_mask(limit, y)
    idx = np.nonzero(mask)[0]
    terms = vals[idx] / idx
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def _log_euler_grid(ps: np.ndarray, vs: np.ndarray, s_points: np.ndarray) -> np.ndarray:
    """log F(1 + s) at each point, with F the Euler product over the stored primes."""
    logs = np.log(ps.astype(float))
    out = np.zeros(s_points.size, dtype=complex)
    for lo in range(0, s_points.size, _POINT_CHUNK):
        sp = -(1.0 + s_points[lo : lo + _POINT_CHUNK])
        acc = np.zeros(sp.size, dtype=complex)
        for plo in range(0, logs.size, _PRIME_CHUNK):
            block = np.exp(np.outer(sp, logs[plo : plo + _PRIME_CHUNK]))
            block *= vs[plo : plo + _PRIME_CHUNK]
            acc -= np.log(1.0 - block).sum(axis=1)
        out[lo : lo + sp.size] = acc
    return out


def euler_product(f: CMFunction, s: complex, prime_bound: float | None = None) -> complex:
    """F(1 + s) = prod_{p <= P} (1 - f(p) p^{-(1+s)})^{-1}, needing Re(s) > 0."""
    s = complex(s)
    if s.real <= 0:
        raise DomainError("need Re(s) > 0")
    bound = f.bound if prime_bound is None else prime_bound
    ps, vs = f.restrict(bound)
    if ps.size == 0:
        return 1.0 + 0.0j
    return complex(np.exp(_log_euler_grid(ps, vs, np.array([s]))[0]))


@dataclass(frozen=True)
class BandEnergy:
    """Sum over bands of the grid maximum of |F(1+s)/s|^2, plus the tail bound."""

    value: float
    tail: float
    band_count: int
    params: dict


def band_energy(
    f: CMFunction,
    alpha: float,
    T: float,
    *,
    band_count: int | None = None,
    grid: float = 0.05,
    prime_bound: float | None = None,
) -> BandEnergy:
    """Band-maximum energy of |F(1+s)/s|^2 over alpha <= sigma <= 1, |t - kT| <= T/2.

    Each band |k| <= K contributes the maximum over a rectangle grid whose
    endpoints include the sigma = alpha edge and the band corners.  The tail
    field bounds the contribution of the discarded bands |k| > K.
    """
    if not 0 < alpha <= 1:
        raise DomainError("need 0 < alpha <= 1")
    if not 0 < T <= 1:
        raise DomainError("need 0 < T <= 1")
    if grid <= 0:
        raise DomainError("grid must be positive")
    K = int(math.ceil(10.0 / T)) if band_count is None else band_count
    if K < 1:
        raise DomainError("need at least one band")
    bound = f.bound if prime_bound is None else prime_bound
    ps, vs = f.restrict(bound)
    if alpha == 1.0:
        sigmas = np.array([1.0])
    else:
        sigmas = np.linspace(alpha, 1.0, max(2, int(math.ceil((1.0 - alpha) / grid)) + 1))
    nt = max(3, 2 * int(math.ceil(T / (2.0 * grid))) + 1)
    offsets = np.linspace(-T / 2.0, T / 2.0, nt)
    centers = T * np.arange(-K, K + 1)
    ts = (centers[:, None] + offsets[None, :]).ravel()
    s_pts = (sigmas[None, :] + 1j * ts[:, None]).ravel()
    log_f = _log_euler_grid(ps, vs, s_pts)
    ratio_sq = np.exp(2.0 * log_f.real) / np.abs(s_pts) ** 2
    per_band = ratio_sq.reshape(centers.size, nt * sigmas.size).max(axis=1)
    value = float(per_band.sum())
    tail = (1.0 + 1.0 / alpha) ** 2 * (2.0 / (T * alpha)) * (
        math.pi / 2.0 - math.atan(T * (K - 0.5) / alpha)
    )
    return BandEnergy(
        value=value,
        tail=tail,
        band_count=K,
        params={"alpha": alpha, "T": T, "grid": grid, "prime_bound": bound},
    )


@dataclass(frozen=True)
class EnergyIntegral:
    """Log-spaced quadrature of the band energy in alpha, for reporting."""

    value: float
    alphas: tuple[float, ...]
    energies: tuple[float, ...]


def band_energy_integral(
    f: CMFunction,
    T: float,
    x: float,
    *,
    nodes: int = 8,
    grid: float = 0.05,
    prime_bound: float | None = None,
) -> EnergyIntegral:
    """integral of H_T(alpha) d(log alpha) from 1/log x to 1, trapezoidal."""
    if x <= math.e:
        raise DomainError("need log x > 1")
    if nodes < 2:
        raise DomainError("need at least two nodes")
    alphas = np.geomspace(1.0 / math.log(x), 1.0, nodes)
    energies = [
        band_energy(f, float(a), T, grid=grid, prime_bound=prime_bound).value for a in alphas
    ]
    logs = np.log(alphas)
    value = float(
        sum(
            0.5 * (energies[i] + energies[i + 1]) * (logs[i + 1] - logs[i])
            for i in range(nodes - 1)
        )
    )
    return EnergyIntegral(value, tuple(float(a) for a in alphas), tuple(energies))


def halasz_bound_check(
    f: CMFunction,
    x: float,
    y: float,
    T: float,
    *,
    resolution: float = 0.01,
) -> HalaszReport:
    """Friable log mean against (log y) exp(-M(f; y, T)) + 1/T."""
    if not 0 < T <= 1:
        raise DomainError("need 0 < T <= 1")
    lhs = abs(friable_log_mean(f, x, y))
    m = min_twisted_distance(f, y, T, resolution=resolution)
    rhs_main = math.log(y) * math.exp(-m.value)
    rhs_tail = 1.0 / T
    return HalaszReport(
        lhs=lhs,
        rhs_main=rhs_main,
        rhs_tail=rhs_tail,
        ratio=lhs / (rhs_main + rhs_tail),
        params={"x": x, "y": y, "T": T, "resolution": resolution, "argmin": m.argmin},
    )


def euler_max_check(
    f: CMFunction,
    alpha: float,
    T: float,
    *,
    prime_bound: float | None = None,
    t_step: float = 0.005,
    resolution: float = 0.01,
    counterexample_mode: bool = False,
) -> BoundReport:
    """max_{|t| <= T} |F(1 + alpha + it)| against (log y) exp(-M(f; y, T)).

    The comparison needs T >= alpha; passing counterexample_mode evaluates
    outside that range, where the inequality is known to fail.
    """
    if not 0 < alpha <= 1:
        raise DomainError("need 0 < alpha <= 1")
    if T <= 0:
        raise DomainError("need T > 0")
    if T < alpha and not counterexample_mode:
        raise DomainError("T < alpha is outside the bound's hypotheses")
    bound = f.bound if prime_bound is None else prime_bound
    ps, vs = f.restrict(bound)
    n = 2 * int(math.ceil(T / t_step)) + 1
    ts = np.linspace(-T, T, n)
    log_f = _log_euler_grid(ps, vs, alpha + 1j * ts)
    mags = np.exp(log_f.real)
    at = int(np.argmax(mags))
    lhs = float(mags[at])
    m = min_twisted_distance(f, bound, T, resolution=resolution)
    rhs = math.log(bound) * math.exp(-m.value)
    return BoundReport(
        lhs=lhs,
        rhs_main=rhs,
        ratio=lhs / rhs,
        params={
            "alpha": alpha,
            "T": T,
            "prime_bound": bound,
            "argmax_t": float(ts[at]),
            "min_distance": m.value,
            "counterexample_mode": counterexample_mode,
        },
    )


def unimodular_corpus(count: int, bound: int, seed: int) -> tuple[CMFunction, ...]:
    """Deterministic pseudo-random unimodular test functions."""
    if count < 1:
        raise DomainError("need count >= 1")
    rng = np.random.default_rng(seed)
    ps = primes_up_to(bound)
    out = []
    for _ in range(count):
        vals = np.exp(2j * math.pi * rng.random(ps.size))
        out.append(CMFunction._build(ps, vals, bound))
    return tuple(out)
