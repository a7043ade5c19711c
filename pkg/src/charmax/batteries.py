"""Named invariant batteries behind the CLI.

Each battery wraps one module's invariants: hard assertions plus
frozen-ratio regressions against the stored baselines.  Batteries collect
failures instead of raising, so a run always reports every broken case.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

import numpy as np

from .charsum import arc_identity_check, gauss_sum
from .dirichlet import build_group
from .errors import BaselineError
from .extremal import (
    extremal_profile,
    oscillation,
    oscillation_log_integral,
    root_average,
    root_maximizer,
    weighted_prime_sum,
)
from .halasz import (
    band_energy,
    euler_max_check,
    friable_log_mean,
    halasz_bound_check,
    unimodular_corpus,
)
from .errors import ConfigError
from .lvalues import (
    euler_l1,
    max_sum_lvalue_check,
    mertens_constant,
    mertens_constant_oracle,
    mertens_constants_all,
    mertens_kernel,
    partial_l1,
)
from .pretentious import (
    CMFunction,
    distance_sq,
    distance_sq_lower_bound,
    min_twisted_distance,
    saving_constant,
)
from .primes import primes_up_to

__all__ = ["BatteryResult", "BATTERY_NAMES", "run_battery", "load_baseline"]

_ZETA_3_HALVES = 2.6123753486854883

# deterministic seeds for the stochastic batteries
_HALASZ_SEED = 20260817
_MINDIST_SEED = 20260818


@dataclass(frozen=True)
class BatteryResult:
    name: str
    passed: bool
    cases: int
    failures: tuple[str, ...]
    details: dict


def load_baseline(name: str, path: str | None = None) -> dict:
    """Stored pilot constants; BaselineError on anything missing or malformed."""
    try:
        if path is not None:
            with open(path, "r", encoding="utf-8") as fh:
                blob = fh.read()
        else:
            blob = resources.files("charmax").joinpath("baselines", f"{name}.json").read_text()
    except OSError as exc:
        raise BaselineError(f"baseline {name}: unreadable ({exc})") from exc
    try:
        data = json.loads(blob)
    except json.JSONDecodeError as exc:
        raise BaselineError(f"baseline {name}: corrupt JSON ({exc})") from exc
    if not isinstance(data, dict) or "_provenance" not in data:
        raise BaselineError(f"baseline {name}: missing provenance block")
    return data


def _require(data: dict, name: str, key: str) -> float:
    if key not in data or not isinstance(data[key], (int, float)):
        raise BaselineError(f"baseline {name}: missing numeric key {key!r}")
    return float(data[key])


def battery_gauss(*, q_max: int = 300) -> BatteryResult:
    failures: list[str] = []
    cases = 1
    if abs(gauss_sum(build_group(1).principal) - 1) > 1e-12:
        failures.append("tau(principal mod 1) != 1")
    worst = 0.0
    for q in range(3, q_max + 1):
        if q % 4 == 2:
            continue
        for chi in build_group(q).characters(primitive_only=True):
            cases += 1
            defect = abs(abs(gauss_sum(chi)) ** 2 - q)
            worst = max(worst, defect / q)
            if defect >= 1e-6 * q:
                failures.append(f"|tau|^2 off by {defect:.3e} at q={q} chi={chi.exponents}")
    return BatteryResult("gauss", not failures, cases, tuple(failures), {"max_rel_defect": worst})


def battery_lemma_max(
    *, orders: tuple[int, ...] = (3, 5, 7, 9), k_max: int = 24, theta_count: int = 97
) -> BatteryResult:
    failures: list[str] = []
    cases = 0
    worst = 0.0
    anchor = root_average(3, 2, Fraction(0)).brute
    if abs(anchor - 0.75) > 1e-12:
        failures.append(f"anchor g=3,k=2,theta=0 gave {anchor!r}, want 3/4")
    for g in orders:
        for k in range(2, k_max + 1, 2):
            for j in range(theta_count):
                theta = Fraction(j, theta_count)
                rec = root_average(g, k, theta)
                gap = abs(rec.brute - rec.closed)
                worst = max(worst, gap)
                cases += 1
                if gap > 1e-10:
                    failures.append(f"brute/closed gap {gap:.3e} at g={g} k={k} theta={theta}")
    return BatteryResult(
        "lemma-max", not failures, cases, tuple(failures), {"max_gap": worst}
    )


def battery_fn_integral(
    *,
    n_min: int = 3,
    n_max: int = 60,
    ranges: tuple[tuple[float, float], ...] = ((1, 10), (1, 10**3), (10**-2, 1), (10**-2, 10**2)),
) -> BatteryResult:
    failures: list[str] = []
    cases = 0
    worst = 0.0
    for n in range(n_min, n_max + 1):
        zero = oscillation_log_integral(n, 2.0, 2.0)
        cases += 1
        if zero.value != 0.0 or zero.main_term != 0.0:
            failures.append(f"empty range not exactly zero at n={n}")
        for a, b in ranges:
            res = oscillation_log_integral(n, a, b)
            cases += 1
            worst = max(worst, abs(res.defect))
            if abs(res.defect) > 4.0:
                failures.append(f"defect {res.defect:.3f} at n={n} range=({a},{b})")
            if res.quad_error >= 1e-8:
                failures.append(f"quadrature error {res.quad_error:.2e} at n={n} ({a},{b})")
    return BatteryResult(
        "fn-integral", not failures, cases, tuple(failures), {"max_defect": worst}
    )


def _grso_grid(count: int) -> list[tuple]:
    """Deterministic (chi, b, r) grid with gcd(r, q) = 1 and b a unit mod r."""
    out: list[tuple] = []
    r_cycle = (3, 4, 5, 7, 9, 11, 12)
    i = 0
    for q in (5, 7, 9, 11, 13, 16):
        for chi in build_group(q).characters(primitive_only=True):
            r = next(r for r in r_cycle[i % len(r_cycle) :] + r_cycle if math.gcd(r, q) == 1)
            b = next(b for b in range(1 + i % r, 2 * r) if math.gcd(b, r) == 1)
            out.append((chi, b % r or 1, r))
            i += 1
            if len(out) == count:
                return out
    return out


def battery_grso_identity(*, n_max: int = 10**5, count: int = 20) -> BatteryResult:
    failures: list[str] = []
    worst = 0.0
    grid = _grso_grid(count)
    for chi, b, r in grid:
        rep = arc_identity_check(chi, b, r, n_max)
        worst = max(worst, rep.defect / r)
        if rep.defect > 1e-8 * r:
            failures.append(
                f"identity defect {rep.defect:.3e} at q={chi.modulus} b={b} r={r}"
            )
    return BatteryResult(
        "grso-identity", not failures, len(grid), tuple(failures), {"max_defect_over_r": worst}
    )


def battery_mertens(
    *,
    moduli: tuple[int, ...] = (3, 4, 5),
    cutoff: int = 10**6,
    shape_m_max: int = 100,
    shape_cutoff: int = 10**5,
    baseline_path: str | None = None,
) -> BatteryResult:
    base = load_baseline("mertens_shape", baseline_path)
    shape_c = _require(base, "mertens_shape", "constant")
    failures: list[str] = []
    cases = 0
    worst = 0.0
    for m in moduli:
        total = 0.0
        for a in range(1, m + 1):
            if math.gcd(a, m) != 1:
                continue
            cases += 1
            est = mertens_constant(m, a, cutoff)
            ora = mertens_constant_oracle(m, a)
            gap = abs(est - ora)
            worst = max(worst, gap)
            total += est
            if gap > 5e-3:
                failures.append(f"C_{m}({a}) off oracle by {gap:.2e}")
        phi = build_group(m).phi
        want = -(np.euler_gamma + math.log(phi / m))
        if abs(total - want) > 1e-9:
            failures.append(f"sum rule broken at m={m}: {total!r} vs {want!r}")
        cases += 1
    for chi, p in ((build_group(5).characters(), 11),):
        for c in chi:
            cases += 1
            if c(p) == 1 and mertens_kernel(c, p) != 0:
                failures.append(f"kernel not exactly zero at chi(p)=1, m=5 p={p}")
    shape_worst = 0.0
    for m in range(3, shape_m_max + 1):
        cases += 1
        total = sum(abs(c) for c in mertens_constants_all(m, shape_cutoff).values())
        score = total / (1.0 + math.log(math.log(m)))
        shape_worst = max(shape_worst, score)
        if score > 1.2 * shape_c:
            failures.append(f"average shape {score:.4f} beyond 1.2x baseline at m={m}")
    return BatteryResult(
        "mertens",
        not failures,
        cases,
        tuple(failures),
        {"max_oracle_gap": worst, "shape_score": shape_worst, "shape_baseline": shape_c},
    )


def battery_halasz(
    *,
    count: int = 12,
    bound: int = 10**5,
    seed: int = _HALASZ_SEED,
    t_values: tuple[float, ...] = (0.01, 0.1, 1.0),
    baseline_path: str | None = None,
) -> BatteryResult:
    base = load_baseline("halasz", baseline_path)
    max_ratio = _require(base, "halasz", "max_ratio")
    failures: list[str] = []
    cases = 0
    # exact harmonic sum: friable mean of 1 at x = y = 10
    h10 = friable_log_mean(CMFunction.constant(1.0, 10), 10, 10)
    cases += 1
    if abs(h10 - 7381 / 2520) > 1e-12:
        failures.append(f"harmonic anchor off: {h10!r}")
    ceiling = friable_log_mean(CMFunction.constant(1.0, bound), bound, bound).real
    seen = 0.0
    for tag, s in (("frozen", seed), ("fresh", seed + 1)):
        for i, f in enumerate(unimodular_corpus(count, bound, s)):
            cases += 1
            if abs(friable_log_mean(f, bound, bound)) > ceiling + 1e-9:
                failures.append(f"trivial domination broken ({tag} corpus item {i})")
            for T in t_values:
                rep = halasz_bound_check(f, bound, bound, T)
                cases += 1
                if tag == "frozen":
                    seen = max(seen, rep.ratio)
                if rep.ratio > 1.2 * max_ratio:
                    failures.append(
                        f"ratio {rep.ratio:.4f} beyond 1.2x baseline ({tag} item {i}, T={T})"
                    )
    low = band_energy(CMFunction.constant(0.0, 10**3), 0.5, 1.0, band_count=10)
    high = band_energy(CMFunction.constant(0.0, 10**3), 0.5, 1.0, band_count=20)
    cases += 1
    if high.value > low.value + low.tail + 1e-12:
        failures.append("tail bound fails to dominate the doubled-K mass")
    counter = euler_max_check(
        CMFunction.constant(-1.0, 10**6),
        0.5,
        1.0 / math.log(10**6),
        counterexample_mode=True,
    )
    cases += 1
    if counter.lhs < 1.0 / _ZETA_3_HALVES - 1e-3:
        failures.append(f"counterexample LHS {counter.lhs:.6f} below 1/zeta(3/2) - 1e-3")
    return BatteryResult(
        "halasz",
        not failures,
        cases,
        tuple(failures),
        {"max_ratio_seen": seen, "max_ratio_baseline": max_ratio, "counter_lhs": counter.lhs},
    )


def battery_mindist(
    *, seed: int = _MINDIST_SEED, triples: int = 200, bound: int = 2000
) -> BatteryResult:
    failures: list[str] = []
    cases = 0
    pool = unimodular_corpus(24, bound, seed)
    rng = np.random.default_rng(seed + 1)
    y = float(bound)
    dist = {}

    def d(i: int, j: int) -> float:
        key = (min(i, j), max(i, j))
        if key not in dist:
            dist[key] = math.sqrt(distance_sq(pool[key[0]], pool[key[1]], y).value)
        return dist[key]

    for _ in range(triples):
        i, j, k = (int(v) for v in rng.integers(0, len(pool), 3))
        cases += 1
        if d(i, k) > d(i, j) + d(j, k) + 1e-9:
            failures.append(f"triangle broken at indices ({i},{j},{k})")
    f = pool[0]
    ladder = [min_twisted_distance(f, y, T) for T in (0.1, 0.2, 0.4, 0.8)]
    cases += 1
    if any(a.grid_value < b.grid_value - 1e-15 for a, b in zip(ladder, ladder[1:])):
        failures.append("grid minimum not monotone in the window")
    plain = distance_sq(f, CMFunction.constant(1.0, bound), y).value
    cases += 1
    if any(m.value > plain + 1e-12 for m in ladder):
        failures.append("twisted minimum exceeds the untwisted distance")
    cases += 1
    if any(m.value > m.grid_value + 1e-15 for m in ladder):
        failures.append("refined minimum exceeds the grid minimum")
    ps = primes_up_to(y)
    lip = float((np.log(ps) / ps).sum())
    cases += 1
    if lip > 2.0 * math.log(y):
        failures.append("prime log-weight sum exceeds 2 log y")
    one = CMFunction.constant(1.0, bound)
    base_v = distance_sq(f, one, y).value
    for t in (0.5 / math.log(y), 1.0 / math.log(y)):
        shifted = distance_sq(f.twist(t), one, y).value
        cases += 1
        gap = abs(shifted - base_v)
        if gap > t * lip + 1e-12:
            failures.append(f"small-twist stability broken at t={t:.4f} (gap {gap:.4e})")
    deltas = [saving_constant(g) for g in range(3, 23, 2)]
    cases += 1
    if abs(deltas[0] - 0.173007) > 1e-6 or abs(deltas[1] - 0.064511) > 1e-6:
        failures.append("saving constant anchors off")
    cases += 1
    if any(a <= b for a, b in zip(deltas, deltas[1:])):
        failures.append("saving constant not strictly decreasing")
    return BatteryResult("mindist", not failures, cases, tuple(failures), {"pool": len(pool)})


def battery_upper(*, y: float = 10**5, profile_y: float = 10**3) -> BatteryResult:
    failures: list[str] = []
    cases = 0
    half = root_maximizer(3, Fraction(1, 2))
    cases += 1
    if abs(half.value - 0.5) > 1e-12 or half.angle != Fraction(1, 3):
        failures.append(f"maximizer anchor theta=1/2 gave {half}")
    quarter = root_maximizer(3, Fraction(1, 4))
    cases += 1
    if abs(quarter.value - math.sqrt(3) / 2) > 1e-12:
        failures.append(f"maximizer anchor theta=1/4 gave {quarter}")
    cases += 1
    if abs(oscillation(3, 0.75) - math.sqrt(3)) > 1e-12:
        failures.append("oscillation anchor F_3(3/4) != sqrt(3)")
    bound = distance_sq_lower_bound(3, 2, y)
    cases += 1
    if abs(bound.coefficient - 0.25) > 1e-12:
        failures.append(f"coefficient anchor gave {bound.coefficient!r}, want 1/4")
    for g in (3, 5, 7, 9):
        for k in range(2, 25, 2):
            if g * (k // math.gcd(k, g)) < 6:
                continue
            rec = distance_sq_lower_bound(g, k, y)
            cases += 1
            if rec.coefficient < rec.strengthened_coefficient - 1e-12:
                failures.append(f"strengthened form not weaker at g={g} k={k}")
    psi = next(build_group(3).characters(primitive_only=True))
    report = weighted_prime_sum(psi, 3, y)
    cases += 1
    if abs(report.defect) > 1.0:
        failures.append(f"weighted prime sum defect {report.defect:.3f} beyond slack 1.0")
    prof = extremal_profile(psi, 3, profile_y)
    cases += 1
    if prof.achieved is None:
        failures.append("no witness found for the profile search")
    elif abs(prof.defect) > 1.5:
        failures.append(f"profile defect {prof.defect:.3f} beyond 1.5")
    return BatteryResult(
        "upper",
        not failures,
        cases,
        tuple(failures),
        {
            "weighted_defect": report.defect,
            "profile_achieved": prof.achieved,
            "profile_main": prof.main_term,
            "profile_examined": prof.examined,
        },
    )


def battery_pvapp(
    *,
    scope_max: int = 500,
    cutoff: int = 10**6,
    n_max: int = 10**6,
    sweep_q_max: int = 10**4,
    sweep_cutoff: int = 10**5,
    baseline_path: str | None = None,
) -> BatteryResult:
    base = load_baseline("charsum_l1", baseline_path)
    floor = _require(base, "charsum_l1", "min_ratio")
    failures: list[str] = []
    cases = 0
    worst_gap = 0.0
    for q in range(3, scope_max + 1):
        for chi in build_group(q).characters():
            if chi.is_principal:
                continue
            cases += 1
            gap = abs(partial_l1(chi, n_max) - euler_l1(chi, cutoff))
            worst_gap = max(worst_gap, gap)
            if gap > 0.05:
                failures.append(f"L1 truncations differ by {gap:.4f} at q={q}")
    trivial = build_group(1).principal
    anchor = max_sum_lvalue_check(
        next(build_group(3).characters(primitive_only=True)), trivial, cutoff
    )
    cases += 1
    if abs(anchor.ratio - 2.61) > 0.01:
        failures.append(f"mod-3 functional anchor ratio {anchor.ratio:.4f}, want ~2.61")
    min_ratio = math.inf
    for q in range(3, sweep_q_max + 1):
        if q % 4 == 2:
            continue
        for chi in build_group(q).characters(order_equals=2, parity=-1, primitive_only=True):
            cases += 1
            rep = max_sum_lvalue_check(chi, trivial, sweep_cutoff)
            if rep.ratio < min_ratio:
                min_ratio = rep.ratio
            if rep.ratio < 0.8 * floor:
                failures.append(f"functional ratio {rep.ratio:.4f} under 0.8x floor at q={q}")
    return BatteryResult(
        "pvapp",
        not failures,
        cases,
        tuple(failures),
        {"max_l1_gap": worst_gap, "min_ratio": min_ratio, "min_ratio_baseline": floor},
    )


BATTERIES = {
    "gauss": battery_gauss,
    "lemma-max": battery_lemma_max,
    "fn-integral": battery_fn_integral,
    "grso-identity": battery_grso_identity,
    "mertens": battery_mertens,
    "halasz": battery_halasz,
    "mindist": battery_mindist,
    "upper": battery_upper,
    "pvapp": battery_pvapp,
}
BATTERY_NAMES = tuple(BATTERIES)


def run_battery(name: str, **overrides) -> BatteryResult:
    if name not in BATTERIES:
        raise ConfigError(f"unknown battery {name!r}; choose from {', '.join(BATTERY_NAMES)}")
    return BATTERIES[name](**overrides)
