"""Truncated L-values and Mertens constants for arithmetic progressions.

L(1, chi) is approximated by its Euler product over p <= X, evaluated in
log space.  The progression constants C_m(a) in

    sum_{p <= x, p = a mod m} -log(1 - 1/p) = (log log x) / phi(m) + C_m(a) + o(1)

come out of an orthogonality expansion over the nonprincipal characters
mod m, with each character contributing log(K(1, chi) / L(1, chi)) where
K(s, chi) = prod_p (1 - p^{-s})^{-chi(p)}.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .dirichlet import DirichletCharacter, build_group, multiply
from .errors import DomainError, RegimeWarning
from .primes import primes_up_to
from .reports import BoundReport

__all__ = [
    "MertensProgression",
    "euler_l1",
    "partial_l1",
    "mertens_kernel",
    "log_k_over_l",
    "truncation_tail_bound",
    "mertens_constant",
    "mertens_constants_all",
    "mertens_progression",
    "mertens_constant_oracle",
    "max_sum_lvalue_check",
]


def _prime_values(chi: DirichletCharacter, limit: int) -> tuple[np.ndarray, np.ndarray]:
    ps = primes_up_to(limit)
    vals = chi._period[ps % chi.group.modulus]
    return ps, np.asarray(vals, dtype=complex)


@lru_cache(maxsize=32)
def _euler_log_table(modulus: int, cutoff: int) -> np.ndarray:
    """Residue table R with log prod_{p <= cutoff} (1 - chi(p)/p)^{-1} = sum_s chi(s) R[s].

    Expanding the log into sum_k chi(p)^k / (k p^k) and noting chi(p)^k =
    chi(p^k mod q) turns the product into a character-independent residue
    aggregate, shared by every character of the modulus.  The k-th layer is
    truncated where p^k exceeds 10^15; the discarded tail is below 1e-11.
    """
    ps = primes_up_to(cutoff)
    table = np.zeros(modulus, dtype=float)
    pw = ps % modulus
    terms = 1.0 / ps
    k = 1
    while ps.size:
        table += np.bincount(pw, weights=terms / k, minlength=modulus)
        k += 1
        m = int(np.searchsorted(ps, 10.0 ** (15.0 / k), side="right"))
        ps = ps[:m]
        pw = (pw[:m] * ps) % modulus
        terms = terms[:m] / ps
    table.setflags(write=False)
    return table


def euler_l1(chi: DirichletCharacter, cutoff: int) -> complex:
    """Truncated Euler product for L(1, chi) over primes p <= cutoff."""
    if chi.is_principal:
        raise DomainError("the principal character has a divergent product at s=1")
    if cutoff < 2:
        raise DomainError("need cutoff >= 2")
    table = _euler_log_table(chi.group.modulus, cutoff)
    return complex(np.exp(np.dot(chi._period, table)))


@lru_cache(maxsize=32)
def _residue_harmonics(modulus: int, n_max: int) -> np.ndarray:
    n = np.arange(1, n_max + 1, dtype=np.int64)
    h = np.bincount(n % modulus, weights=1.0 / n, minlength=modulus)
    h.setflags(write=False)
    return h


def partial_l1(chi: DirichletCharacter, n_max: int) -> complex:
    """Partial sum sum_{n <= n_max} chi(n) / n, grouped by residue class."""
    if n_max < 1:
        raise DomainError("need n_max >= 1")
    h = _residue_harmonics(chi.group.modulus, n_max)
    return complex(np.dot(chi._period, h))


def mertens_kernel(chi: DirichletCharacter, p: int) -> complex:
    """k(p) = p (1 - (1 - chi(p)/p) (1 - 1/p)^{-chi(p)}).

    Vanishes when chi(p) is 0 or 1 and equals 1/p at chi(p) = -1; termwise,
    log(1 - k(p)/p) = log(1 - chi(p)/p) - chi(p) log(1 - 1/p).
    """
    v = chi(p)
    if v == 1:  # exact vanishing, not left to exp/log roundoff
        return 0j
    return complex(p * (1.0 - (1.0 - v / p) * np.exp(-v * math.log1p(-1.0 / p))))


def log_k_over_l(chi: DirichletCharacter, cutoff: int) -> complex:
    """log of K(1, chi) / L(1, chi) truncated at cutoff.

    K(1, chi) = sum_n k(n)/n for the completely multiplicative extension of
    the kernel, so log K = -sum_p log(1 - k(p)/p); the quotient telescopes
    termwise to sum_p chi(p) log(1 - 1/p).
    """
    if cutoff < 2:
        raise DomainError("need cutoff >= 2")
    ps, vals = _prime_values(chi, cutoff)
    logs = np.log1p(-1.0 / ps)
    kernel = ps * (1.0 - (1.0 - vals / ps) * np.exp(-vals * logs))
    # principal branch: |k(p)/p| < 1/2 for p >= 3; the p=2 factor needs a check
    if ps.size and ps[0] == 2 and (1.0 - kernel[0] / 2.0).real <= 0:
        raise ArithmeticError("p=2 kernel factor crosses the branch cut")
    log_k = -np.log(1.0 - kernel / ps)
    log_l = -np.log(1.0 - vals / ps)
    return complex((log_k - log_l).sum())


def truncation_tail_bound(cutoff: int) -> float:
    """Bound on the discarded log K tail: 4 sum_{p > cutoff} 1/p^2 < 4/cutoff."""
    if cutoff < 2:
        raise DomainError("need cutoff >= 2")
    return 4.0 / cutoff


def mertens_constant(modulus: int, residue: int, cutoff: int = 10**6) -> float:
    """C_m(a): the constant term of the Mertens sum over p = a mod m."""
    if modulus < 1:
        raise DomainError("modulus must be positive")
    if cutoff < 10**3:
        raise DomainError("need cutoff >= 10^3")
    if math.gcd(residue, modulus) != 1:
        raise DomainError("residue must be coprime to the modulus")
    group = build_group(modulus)
    phi = group.phi
    acc = 0.0 + 0.0j
    for chi in group.characters():
        if chi.is_principal:
            continue
        acc += np.conj(chi(residue)) * log_k_over_l(chi, cutoff)
    value = acc / phi - (np.euler_gamma + math.log(phi / modulus)) / phi
    if abs(value.imag) > 1e-6:
        raise ArithmeticError(f"imaginary residue {value.imag!r} in a real constant")
    return float(value.real)


def mertens_constants_all(modulus: int, cutoff: int = 10**6) -> dict[int, float]:
    """C_m(a) for every reduced residue a, sharing the per-character log sums."""
    if modulus < 1:
        raise DomainError("modulus must be positive")
    if cutoff < 10**3:
        raise DomainError("need cutoff >= 10^3")
    group = build_group(modulus)
    phi = group.phi
    logs = [
        (chi, log_k_over_l(chi, cutoff))
        for chi in group.characters()
        if not chi.is_principal
    ]
    shift = (np.euler_gamma + math.log(phi / modulus)) / phi
    out: dict[int, float] = {}
    for a in range(1, modulus + 1):
        if math.gcd(a, modulus) != 1:
            continue
        acc = sum(np.conj(chi(a)) * v for chi, v in logs)
        value = acc / phi - shift
        if abs(complex(value).imag) > 1e-6:
            raise ArithmeticError(f"imaginary residue {value!r} in a real constant")
        out[a] = float(complex(value).real)
    return out


@dataclass(frozen=True)
class MertensProgression:
    """Mertens sum over a reduced residue class, with its expected main term."""

    modulus: int
    residue: int
    x: int
    value: float
    main_term: float
    constant_estimate: float


def mertens_progression(x: int, modulus: int, residue: int) -> MertensProgression:
    """sum_{p <= x, p = a mod m} -log(1 - 1/p) by direct prime enumeration.

    constant_estimate = value - main_term approaches -C_m(a) as x grows.
    """
    if x < 3:
        raise DomainError("need x >= 3")
    if math.gcd(residue, modulus) != 1:
        raise DomainError("residue must be coprime to the modulus")
    if modulus > math.log(x):
        warnings.warn(
            f"modulus {modulus} exceeds log x = {math.log(x):.2f}; outside the asymptotic regime",
            RegimeWarning,
            stacklevel=2,
        )
    ps = primes_up_to(x)
    sel = ps[ps % modulus == residue % modulus]
    value = float(-np.log1p(-1.0 / sel).sum())
    main = math.log(math.log(x)) / build_group(modulus).phi
    return MertensProgression(modulus, residue, x, value, main, value - main)


def _envelope(x: float) -> float:
    return math.log(math.log(x)) ** 3.2 / math.log(x) ** 0.6


def mertens_constant_oracle(
    modulus: int,
    residue: int,
    *,
    x_small: int = 10**6,
    x_large: int = 10**7,
    extrapolate: bool = True,
) -> float:
    """Empirical C_m(a) from two cutoffs of the raw progression sum.

    c(x) = log log x / phi(m) - (progression sum up to x) tends to C_m(a);
    the two-point form removes the leading decay along the error envelope
    (log log x)^{16/5} / (log x)^{3/5}.
    """
    if x_small >= x_large:
        raise DomainError("need x_small < x_large")
    c_small = -mertens_progression(x_small, modulus, residue).constant_estimate
    c_large = -mertens_progression(x_large, modulus, residue).constant_estimate
    if not extrapolate:
        return c_large
    e_small, e_large = _envelope(x_small), _envelope(x_large)
    return (c_large * e_small - c_small * e_large) / (e_small - e_large)


def max_sum_lvalue_check(
    chi: DirichletCharacter,
    psi: DirichletCharacter,
    cutoff: int,
    *,
    lvalue: str = "euler",
) -> BoundReport:
    """Compare the maximal character sum of chi against an L-value lower bound.

    For primitive chi mod q and primitive psi mod m of opposite parity,

        max_t |sum_{n <= t} chi(n)| + sqrt(q) >= c sqrt(q m) / phi(m) |L(1, chi conj(psi))|

    is reported as lhs / rhs_main; tested families stay above ratio 1.
    """
    from .charsum import max_char_sum

    if not (chi.is_primitive and psi.is_primitive):
        raise DomainError("both characters must be primitive")
    if chi.is_principal:
        raise DomainError("chi must be nonprincipal")
    if chi.parity * psi.parity != -1:
        raise DomainError("characters must have opposite parity")
    if lvalue not in ("euler", "partial"):
        raise DomainError(f"unknown lvalue mode {lvalue!r}")
    q = chi.group.modulus
    m = psi.group.modulus
    if m > q / math.log(q) ** 2:
        raise DomainError("need m <= q / (log q)^2")
    product = multiply(chi, psi.conjugate())
    lval = euler_l1(product, cutoff) if lvalue == "euler" else partial_l1(product, cutoff)
    lhs = max_char_sum(chi).value + math.sqrt(q)
    rhs = math.sqrt(q * m) / build_group(m).phi * abs(lval)
    return BoundReport(
        lhs=lhs,
        rhs_main=rhs,
        ratio=lhs / rhs,
        params={"q": q, "m": m, "cutoff": cutoff, "lvalue": lvalue, "l_abs": abs(lval)},
    )
