"""Character-sum kernels: maximal partial sums, Gauss sums, Fourier expansions,
twisted logarithmic sums, and rational approximation of twist frequencies.

Phases e(nb/r) are computed from exactly reduced integer residues, so phase
drift never accumulates along long sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .dirichlet import DirichletCharacter, build_group
from .errors import DomainError
from .primes import divisors, friable_mask
from .reports import BoundReport

# Frozen defect scale for the Fourier-expansion error 1 + q log q / N,
# calibrated on the pilot grid of primitive conductors up to 200 at N = q^2.
POLYA_DEFECT_C = 5.0


@dataclass(frozen=True)
class MaxSumResult:
    """Maximal absolute partial sum of a character, with its argmax."""

    value: float
    argmax_t: int
    partial_trace: np.ndarray | None = None


def max_char_sum(chi: DirichletCharacter, keep_trace: bool = False) -> MaxSumResult:
    """max over t <= q of |sum_{n <= t} chi(n)| for a non-principal character.

    Single streaming pass over one period; ties resolve to the smallest t.
    """
    if chi.is_principal:
        raise DomainError("max_char_sum is for non-principal characters")
    q = chi.modulus
    sums = np.cumsum(chi.values(q))
    mags = np.abs(sums)
    idx = int(np.argmax(mags))
    return MaxSumResult(float(mags[idx]), idx + 1, sums if keep_trace else None)


@lru_cache(maxsize=4096)
def gauss_sum(chi: DirichletCharacter) -> complex:
    """sum_{n=1}^{q} chi(n) e(n/q); defined for any character mod q."""
    q = chi.modulus
    n = np.arange(1, q + 1, dtype=np.int64)
    return complex(np.sum(chi.values(q) * np.exp((2j * np.pi / q) * n)))


def polya_expansion(chi: DirichletCharacter, t: int, n_terms: int) -> complex:
    """Truncated Fourier-series approximation to the partial sum at t.

    Evaluates (tau(chi)/2 pi i) * sum over 1 <= |n| <= n_terms of
    conj(chi)(n)/n * (1 - e(-nt/q)) for a primitive non-principal chi.
    """
    if not chi.is_primitive or chi.is_principal:
        raise DomainError("polya_expansion expects a primitive non-principal character")
    q = chi.modulus
    if not 1 <= t <= q:
        raise DomainError(f"t must lie in [1, {q}], got {t}")
    if n_terms < 1:
        raise DomainError("truncation length must be at least 1")
    n = np.arange(1, n_terms + 1, dtype=np.int64)
    bar_vals = np.conj(chi.values(n_terms))
    phase = np.exp((-2j * np.pi / q) * (n % q * (t % q) % q))
    w = chi.parity  # conj(chi)(-1) = chi(-1)
    inner = np.sum(bar_vals / n * ((1.0 - phase) - w * (1.0 - np.conj(phase))))
    return complex(gauss_sum(chi) / (2j * np.pi) * inner)


def polya_defect_max(chi: DirichletCharacter, n_terms: int) -> tuple[float, int]:
    """max over t in [1, q] of |direct partial sum - polya_expansion|, with argmax.

    Shares the residue-harmonic weights across all t and evaluates every shift
    through length-q discrete Fourier transforms.
    """
    if not chi.is_primitive or chi.is_principal:
        raise DomainError("polya_defect_max expects a primitive non-principal character")
    q = chi.modulus
    n = np.arange(1, n_terms + 1, dtype=np.int64)
    weights = np.bincount(n % q, weights=1.0 / n, minlength=q)
    c = np.conj(chi._period) * weights
    s1 = c.sum()
    minus = np.fft.fft(c)  # index t: sum_a c_a e(-at/q)
    plus = np.fft.ifft(c) * q  # index t: sum_a c_a e(+at/q)
    w = chi.parity
    expansion = gauss_sum(chi) / (2j * np.pi) * ((s1 - minus) - w * (s1 - plus))
    direct = np.cumsum(chi.values(q))
    defect = np.abs(direct - np.roll(expansion, -1))  # record t maps to index t-1
    idx = int(np.argmax(defect))
    return float(defect[idx]), idx + 1


def _phases(n: np.ndarray, theta: float | Fraction) -> np.ndarray:
    """e(n theta); exact residue reduction when theta is rational."""
    if isinstance(theta, Fraction):
        den = theta.denominator
        num = theta.numerator % den
        return np.exp((2j * np.pi / den) * (n % den * num % den))
    return np.exp(2j * np.pi * ((n * float(theta)) % 1.0))


def twisted_log_sum(
    chi: DirichletCharacter,
    theta: float | Fraction,
    x: float,
    friable_bound: float | None = None,
) -> complex:
    """sum over 1 <= |n| <= x of chi(n) e(n theta) / n.

    Terms are paired as +-n, so parity cancellation (even chi at theta = 0)
    is exact.  An optional friable bound keeps only n whose prime factors
    are all <= friable_bound.
    """
    n_max = int(math.floor(x))
    if n_max < 1:
        raise DomainError(f"summation length must be >= 1, got {x}")
    n = np.arange(1, n_max + 1, dtype=np.int64)
    vals = chi.values(n_max)
    phase = _phases(n, theta)
    bracket = phase - chi.parity * np.conj(phase)
    terms = vals * bracket / n
    if friable_bound is not None:
        terms = terms[friable_mask(n_max, friable_bound)[1:]]
    return complex(terms.sum())


@dataclass(frozen=True)
class ArcApprox:
    """Rational approximation b/r to a twist frequency, Dirichlet style."""

    alpha: float
    b: int
    r: int
    cutoff: int  # denominators searched up to this R
    major_threshold: int  # arc is major when r <= this M
    effective_length: float  # min(q, |r alpha - b|^{-1})
    arc_class: str

    @property
    def is_major(self) -> bool:
        return self.arc_class == "major"


def dirichlet_arc(alpha: float, cutoff: int, major_threshold: int, q: int) -> ArcApprox:
    """Canonical convergent b/r with r <= cutoff and |alpha - b/r| <= 1/(r cutoff).

    Uses the classical construction: the last continued-fraction convergent
    whose denominator stays within the cutoff.  That choice is deterministic
    and always meets the approximation bound.
    """
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"alpha must lie in [0, 1], got {alpha}")
    if major_threshold > cutoff or cutoff < 1 or major_threshold < 1:
        raise DomainError("need 1 <= major_threshold <= cutoff")
    exact = Fraction(alpha)
    p0, q0 = 1, 0
    p1, q1 = math.floor(exact), 1
    a = exact - math.floor(exact)
    while a != 0:
        a = 1 / a
        n = math.floor(a)
        a -= n
        p2, q2 = n * p1 + p0, n * q1 + q0
        if q2 > cutoff:
            break
        p0, q0, p1, q1 = p1, q1, p2, q2
    b, r = p1, q1
    if abs(exact * r - b) * cutoff > 1:  # unreachable by Dirichlet's theorem
        raise ArithmeticError("convergent misses the approximation bound")
    err = abs(exact - Fraction(b, r))
    length = float(q) if err == 0 else min(float(q), float(1 / (r * err)))
    return ArcApprox(
        alpha=float(alpha),
        b=b,
        r=r,
        cutoff=cutoff,
        major_threshold=major_threshold,
        effective_length=length,
        arc_class="major" if r <= major_threshold else "minor",
    )


def arc_identity_check(
    chi: DirichletCharacter,
    b: int,
    r: int,
    n_max: int,
    friable_bound: float | None = None,
) -> BoundReport:
    """Check the divisor/character factorization of a twisted friable sum.

    LHS is the paired sum of chi(n) e(nb/r)/n over 1 <= |n| <= n_max (friable
    part only when a bound is given).  RHS resolves the additive twist into
    multiplicative characters modulo r/d for each friable divisor d of r.
    The report's defect is |LHS - RHS|.
    """
    q = chi.modulus
    if math.gcd(r, q) != 1:
        raise DomainError("twist denominator must be coprime to the conductor")
    if r < 1 or math.gcd(b, r) != 1 or b == 0:
        raise DomainError("need b nonzero and coprime to r")
    y = friable_bound if friable_bound is not None else float(n_max)
    lhs = twisted_log_sum(chi, Fraction(b, r), n_max, friable_bound=y)

    w = chi.parity
    rhs = 0j
    mask_full = friable_mask(n_max, y)
    inv_n = 1.0 / np.arange(1, n_max + 1)
    for d in divisors(r):
        if not mask_full[d]:
            continue
        c = r // d
        group_c = build_group(c)
        m = n_max // d
        if m < 1:
            continue
        vals = chi.values(m)
        keep = mask_full[1 : m + 1]
        phi_c = group_c.phi
        for psi in group_c.characters():
            factor = 1 - w * psi.parity
            if factor == 0:
                continue
            tau = gauss_sum(psi)
            psi_bar_b = np.conj(complex(psi(b)))
            inner = np.sum(np.where(keep, vals * np.conj(psi.values(m)) * inv_n[:m], 0.0))
            rhs += complex(chi(d)) / d / phi_c * factor * tau * psi_bar_b * inner
    defect = abs(lhs - rhs)
    return BoundReport(
        lhs=abs(lhs),
        rhs_main=abs(rhs),
        ratio=defect / r,
        defect=defect,
        params={
            "q": q,
            "b": b,
            "r": r,
            "n_max": n_max,
            "friable_bound": y,
            "lhs_complex": lhs,
            "rhs_complex": rhs,
        },
    )
