"""Pretentious distance, twisted minima, and their lower-bound main terms."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charmax import (
    CMFunction,
    DomainError,
    TwistBoundParams,
    build_group,
    distance_sq,
    distance_sq_lower_bound,
    min_twisted_distance,
    saving_constant,
    twist_min_lower_bound,
)
from charmax.halasz import unimodular_corpus

BOUND = 3000
ONE = CMFunction.constant(1.0, BOUND)


def char_fn(q, **filters):
    chi = next(build_group(q).characters(primitive_only=True, **filters))
    return CMFunction.from_character(chi, BOUND)


def test_distance_hand_computed_mod_3():
    # p=2: chi=-1 gives 2/2; p=3: chi=0 gives 1/3; p=5: chi=-1 gives 2/5;
    # p=7: chi=+1 gives 0
    f = char_fn(3)
    d = distance_sq(f, ONE, 10)
    assert abs(d.value - (1 + 1 / 3 + 2 / 5)) < 1e-14


def test_distance_to_self_is_zero_for_unimodular():
    f = ONE.twist(0.37)
    assert abs(distance_sq(f, f, 2000).value) < 1e-12
    assert distance_sq(ONE, ONE, 2000).value == 0.0


def test_distance_to_self_counts_ramified_primes():
    # chi mod 5 vanishes at p = 5, so the p = 5 term is (1 - 0)/5
    f = char_fn(5)
    assert abs(distance_sq(f, f, 2000).value - 0.2) < 1e-15


def test_distance_is_symmetric():
    f, g = char_fn(3), char_fn(4)
    assert abs(distance_sq(f, g, 1000).value - distance_sq(g, f, 1000).value) < 1e-15


def test_distance_per_prime_terms_sum():
    f = char_fn(7)
    d = distance_sq(f, ONE, 500, keep_per_prime=True)
    assert d.per_prime is not None
    assert abs(d.per_prime.sum() - d.value) < 1e-12


def test_distance_monotone_in_cutoff():
    f = char_fn(3)
    values = [distance_sq(f, ONE, y).value for y in (10, 100, 1000)]
    assert values[0] <= values[1] <= values[2]


def test_twist_multiplies_by_prime_power_phase():
    g = ONE.twist(1.0)
    want = cmath.exp(-1j * math.log(2))  # 2^{-i}
    assert abs(g.value_at_prime(2) - want) < 1e-14
    assert abs(want - (0.7692389013639721 - 0.6389612763136348j)) < 1e-12


def test_triangle_inequality_on_corpus():
    pool = unimodular_corpus(9, 500, seed=7)
    dist = {}

    def d(i, j):
        if (i, j) not in dist:
            dist[i, j] = math.sqrt(distance_sq(pool[i], pool[j], 500).value)
        return dist[i, j]

    for i in range(9):
        for j in range(i + 1, 9):
            for k in range(j + 1, 9):
                assert d(i, k) <= d(i, j) + d(j, k) + 1e-9


def test_min_twist_at_zero_window_is_plain_distance():
    f = char_fn(3)
    m = min_twisted_distance(f, 1000, 0.0)
    assert abs(m.value - distance_sq(f, ONE, 1000).value) < 1e-12
    assert m.argmin == 0.0


def test_min_twist_never_exceeds_plain_distance():
    for q in (3, 5, 7):
        f = char_fn(q)
        m = min_twisted_distance(f, 1000, 1.0)
        assert m.value <= distance_sq(f, ONE, 1000).value + 1e-12


def test_min_twist_grid_value_monotone_in_window():
    f = char_fn(5)
    prev = math.inf
    for window in (0.1, 0.2, 0.4, 0.8):
        m = min_twisted_distance(f, 1000, window, refine=False)
        assert m.grid_value <= prev + 1e-15
        prev = m.grid_value


def test_min_twist_refinement_only_improves():
    f = char_fn(7)
    m = min_twisted_distance(f, 1000, 0.5)
    assert m.value <= m.grid_value + 1e-15
    assert abs(m.argmin) <= 0.5


def test_min_twist_finds_planted_twist():
    # f = n^{0.3i} on primes; the minimizing twist should sit near t = 0.3
    f = ONE.twist(-0.3)
    m = min_twisted_distance(f, 2000, 0.5, resolution=0.005)
    assert abs(m.argmin - 0.3) < 0.01
    assert m.value < 0.01


def test_small_twist_stability():
    f = char_fn(3)
    y = 1000.0
    ps, _ = f.restrict(y)
    lip = float(np.sum(np.log(ps) / ps))
    assert lip <= 2 * math.log(y)
    base = distance_sq(f, ONE, y).value
    for t in (0.5 / math.log(y), 1.0 / math.log(y)):
        shifted = distance_sq(f.twist(t), ONE, y).value
        assert abs(shifted - base) <= t * lip + 1e-12


def test_saving_constant_anchors():
    assert abs(saving_constant(3) - (1 - 3 * math.sqrt(3) / (2 * math.pi))) < 1e-15
    assert abs(saving_constant(3) - 0.173007) < 1e-6
    assert abs(saving_constant(5) - 0.064511) < 1e-6


def test_saving_constant_strictly_decreasing():
    values = [saving_constant(g) for g in range(3, 23, 2)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert all(0 < v < 1 for v in values)


def test_saving_constant_rejects_even_order():
    with pytest.raises(DomainError):
        saving_constant(4)


def test_lower_bound_coefficient_is_quarter_at_minimal_orders():
    ub = distance_sq_lower_bound(3, 2, 1000.0)
    # delta + pi^2 (1 - delta) / (4 * 36) with delta = 1 - (3/pi) sin(pi/3)
    # collapses to exactly 1/4
    assert abs(ub.strengthened_coefficient - 0.25) > 0  # strengthened differs
    assert abs(ub.coefficient - 0.25) < 1e-12


def test_lower_bound_strengthened_never_exceeds_exact():
    for g in (3, 5, 7, 9):
        for k in range(2, 26, 2):
            if g * (k // math.gcd(k, g)) < 6:
                continue
            ub = distance_sq_lower_bound(g, k, 10**5)
            assert ub.strengthened_coefficient <= ub.coefficient + 1e-15
            assert ub.strengthened <= ub.value + 1e-12


def test_lower_bound_scales_with_loglog():
    a = distance_sq_lower_bound(3, 2, 10**3)
    b = distance_sq_lower_bound(3, 2, 10**6)
    assert b.value > a.value
    ratio = b.value / a.value
    assert abs(ratio - math.log(math.log(10**6)) / math.log(math.log(10**3))) < 1e-12


def test_twist_bound_hand_anchor():
    params = TwistBoundParams(
        y=math.exp(math.exp(4.0)), T=0.5, alpha=7 / 11, g=3, k=2, k_star=2, modulus=1
    )
    delta = saving_constant(3)
    hand = (delta + (7 / 11) * math.pi**2 * (1 - delta) / 144) * 4
    assert abs(twist_min_lower_bound(params) - hand) < 1e-12


def test_twist_bound_exceptional_penalty():
    base = TwistBoundParams(
        y=10**6, T=0.5, alpha=0.5, g=3, k=2, k_star=2, modulus=997, beta=0
    )
    hit = TwistBoundParams(
        y=10**6, T=0.5, alpha=0.5, g=3, k=2, k_star=2, modulus=997, beta=1, epsilon=0.1
    )
    gap = twist_min_lower_bound(base) - twist_min_lower_bound(hit)
    assert abs(gap - 0.1 * math.log(997)) < 1e-12


def test_twist_bound_validates_k_star():
    with pytest.raises(DomainError):
        TwistBoundParams(y=100, T=0.5, alpha=0.5, g=3, k=6, k_star=3, modulus=1)


@given(t=st.floats(-0.5, 0.5), y=st.sampled_from([50.0, 200.0, 900.0]))
@settings(max_examples=40, deadline=None)
def test_twisted_distance_continuity(t, y):
    f = char_fn(3)
    base = distance_sq(f, ONE, y).value
    moved = distance_sq(f.twist(t), ONE, y).value
    ps, _ = f.restrict(y)
    lip = float(np.sum(np.log(ps) / ps))
    assert abs(moved - base) <= abs(t) * lip + 1e-9


def test_cm_function_rejects_values_outside_disc():
    with pytest.raises(DomainError):
        CMFunction.constant(1.5, 100)


def test_cm_function_evaluates_multiplicatively():
    f = char_fn(7)
    chi = next(build_group(7).characters(primitive_only=True))
    for n in (4, 6, 10, 36):
        want = 1.0
        m = n
        for p in (2, 3, 5):
            while m % p == 0:
                want *= chi(p)
                m //= p
        assert abs(f(n) - want) < 1e-12
