"""Dirichlet characters modulo q via discrete logarithms on cyclic factors.

The unit group mod q is split into cyclic factors, one per odd prime power,
plus the <-1> x <5> pair at 2^a for a >= 3.  A character is an integer
exponent vector over those factors.  Character values are exact rational
angles (fractions of a full turn) and become complex numbers only at the API
boundary, so multiplicativity and orthogonality checks can be exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product as _cartesian

import numpy as np

from .errors import CapacityError, DomainError
from .primes import divisors, factorize

# build_group refuses moduli past this; sweeps stay at desk scale
SWEEP_LIMIT = 10_000_000

_BLOCK = 2048
_TWO_PI = 2.0 * math.pi


def _primitive_root(prime_power: int, p: int) -> int:
    """Smallest primitive root modulo an odd prime power (or modulo 4)."""
    phi = prime_power // p * (p - 1)
    radicals = [r for r, _ in factorize(phi)]
    for g in range(2, prime_power):
        if g % p == 0:
            continue
        if all(pow(g, phi // r, prime_power) != 1 for r in radicals):
            return g
    raise ArithmeticError(f"no primitive root mod {prime_power}")


def _dlog_table(modulus: int, generator: int, order: int) -> np.ndarray:
    """dlog[u] = k with generator^k = u mod modulus, -1 off the orbit."""
    table = np.full(modulus, -1, dtype=np.int64)
    block = min(order, _BLOCK)
    powers = np.empty(block, dtype=np.int64)
    x = 1
    for j in range(block):
        powers[j] = x
        x = x * generator % modulus
    step = pow(generator, block, modulus)
    k0 = 0
    vals = powers
    while True:
        n = min(block, order - k0)
        table[vals[:n]] = np.arange(k0, k0 + n, dtype=np.int64)
        k0 += n
        if k0 >= order:
            break
        vals = vals * step % modulus
    table.flags.writeable = False
    return table


def _two_power_tables(modulus: int) -> tuple[np.ndarray, np.ndarray]:
    """Joint exponent tables for units mod 2^a (a >= 3): u = (-1)^s 5^k."""
    order5 = modulus // 4
    sign_table = np.full(modulus, -1, dtype=np.int64)
    five_table = np.full(modulus, -1, dtype=np.int64)
    block = min(order5, _BLOCK)
    powers = np.empty(block, dtype=np.int64)
    x = 1
    for j in range(block):
        powers[j] = x
        x = x * 5 % modulus
    step = pow(5, block, modulus)
    k0 = 0
    vals = powers
    while True:
        n = min(block, order5 - k0)
        ks = np.arange(k0, k0 + n, dtype=np.int64)
        v = vals[:n]
        sign_table[v] = 0
        five_table[v] = ks
        w = modulus - v
        sign_table[w] = 1
        five_table[w] = ks
        k0 += n
        if k0 >= order5:
            break
        vals = vals * step % modulus
    sign_table.flags.writeable = False
    five_table.flags.writeable = False
    return sign_table, five_table


@dataclass(frozen=True, eq=False)
class CyclicFactor:
    """One cyclic factor of the unit group, with its discrete-log table."""

    prime: int
    prime_power: int
    generator: int
    order: int
    dlog: np.ndarray

    def __repr__(self) -> str:  # pragma: no cover
        return f"CyclicFactor({self.prime_power}, gen={self.generator}, order={self.order})"


def _local_conductor(p: int, order: int, exponent: int) -> int:
    """Conductor of the local character with the given exponent, odd p or p^a <= 4."""
    if exponent == 0:
        return 1
    d = order // math.gcd(order, exponent)
    pc, phi_c = p, p - 1
    while phi_c % d:
        pc *= p
        phi_c *= p
    return pc


def _two_local_conductor(prime_power: int, e_sign: int, e_five: int) -> int:
    """Conductor of the local character mod 2^a, a >= 3."""
    if e_five == 0:
        return 4 if e_sign else 1
    v = (e_five & -e_five).bit_length() - 1
    return prime_power >> v


@lru_cache(maxsize=None)
def group_shape(q: int) -> tuple[tuple[int, int, int], ...]:
    """(prime, prime_power, factor order) triples for mod q, without tables.

    Cheap enough to call for every modulus in a sweep; primitivity and order
    filters only need this skeleton.
    """
    if q < 1:
        raise DomainError(f"modulus must be a positive integer, got {q!r}")
    shape: list[tuple[int, int, int]] = []
    for p, a in factorize(q):
        pa = p**a
        if p == 2:
            if a == 1:
                shape.append((2, 2, 1))
            elif a == 2:
                shape.append((2, 4, 2))
            else:
                shape.append((2, pa, 2))
                shape.append((2, pa, pa // 4))
        else:
            shape.append((p, pa, pa // p * (p - 1)))
    return tuple(shape)


def _conductor_from_exponents(shape: tuple[tuple[int, int, int], ...], exponents: tuple[int, ...]) -> int:
    cond = 1
    i = 0
    while i < len(shape):
        p, pa, order = shape[i]
        if p == 2 and pa >= 8:
            cond *= _two_local_conductor(pa, exponents[i], exponents[i + 1])
            i += 2
        else:
            cond *= _local_conductor(p, order, exponents[i])
            i += 1
    return cond


def count_primitive_with_order(q: int, g: int) -> int:
    """Number of primitive characters mod q of order exactly g, from the shape alone."""
    if g < 1:
        raise DomainError(f"order must be positive, got {g}")
    shape = group_shape(q)
    ranges = []
    for _, _, order in shape:
        step = order // math.gcd(order, g)
        ranges.append(range(0, order, step))
    count = 0
    for exps in _cartesian(*ranges):
        o = 1
        for (_, _, order), e in zip(shape, exps):
            o = math.lcm(o, order // math.gcd(order, e))
        if o != g:
            continue
        if _conductor_from_exponents(shape, exps) == q:
            count += 1
    return count


@dataclass(frozen=True, eq=False)
class DirichletGroup:
    """Character group data for one modulus."""

    modulus: int
    factors: tuple[CyclicFactor, ...]
    phi: int

    def __repr__(self) -> str:  # pragma: no cover
        return f"DirichletGroup(mod {self.modulus}, phi={self.phi})"

    @cached_property
    def exponent(self) -> int:
        """lcm of the factor orders."""
        out = 1
        for f in self.factors:
            out = math.lcm(out, f.order)
        return out

    @cached_property
    def shape(self) -> tuple[tuple[int, int, int], ...]:
        return tuple((f.prime, f.prime_power, f.order) for f in self.factors)

    def dlogs(self, n: int) -> tuple[int, ...] | None:
        """Per-factor discrete logs of n, or None when gcd(n, q) > 1."""
        out = []
        for fac in self.factors:
            d = int(fac.dlog[n % fac.prime_power])
            if d < 0:
                return None
            out.append(d)
        return tuple(out)

    def character(self, exponents) -> "DirichletCharacter":
        exponents = tuple(exponents)
        if len(exponents) != len(self.factors):
            raise DomainError("exponent vector length does not match the factor count")
        exps = tuple(int(e) % f.order for e, f in zip(exponents, self.factors))
        return DirichletCharacter(self, exps)

    @property
    def principal(self) -> "DirichletCharacter":
        return self.character((0,) * len(self.factors))

    def characters(
        self,
        *,
        order_equals: int | None = None,
        order_divides: int | None = None,
        parity: int | None = None,
        primitive_only: bool = False,
    ):
        """Enumerate characters in lexicographic exponent order, with filters.

        The order filters restrict per-factor exponents structurally, so
        enumerating the order-g slice of a large group never touches the
        full character list.
        """
        if order_equals is not None and order_divides is not None:
            raise DomainError("pass at most one of order_equals / order_divides")
        bound = order_equals if order_equals is not None else order_divides
        ranges = []
        for fac in self.factors:
            if bound is None:
                ranges.append(range(fac.order))
            else:
                step = fac.order // math.gcd(fac.order, bound)
                ranges.append(range(0, fac.order, step))
        for exps in _cartesian(*ranges):
            chi = DirichletCharacter(self, exps)
            if order_equals is not None and chi.order != order_equals:
                continue
            if parity is not None and chi.parity != parity:
                continue
            if primitive_only and not chi.is_primitive:
                continue
            yield chi


@lru_cache(maxsize=64)
def build_group(q: int) -> DirichletGroup:
    """Factor the unit group mod q and build its discrete-log tables."""
    if not isinstance(q, (int, np.integer)) or isinstance(q, bool) or q < 1:
        raise DomainError(f"modulus must be a positive integer, got {q!r}")
    q = int(q)
    if q > SWEEP_LIMIT:
        raise CapacityError(f"modulus {q} exceeds the supported limit {SWEEP_LIMIT}")
    factors: list[CyclicFactor] = []
    for p, a in factorize(q):
        pa = p**a
        if p == 2:
            if a == 1:
                factors.append(CyclicFactor(2, 2, 1, 1, _dlog_table(2, 1, 1)))
            elif a == 2:
                factors.append(CyclicFactor(2, 4, 3, 2, _dlog_table(4, 3, 2)))
            else:
                sign_table, five_table = _two_power_tables(pa)
                factors.append(CyclicFactor(2, pa, pa - 1, 2, sign_table))
                factors.append(CyclicFactor(2, pa, 5, pa // 4, five_table))
        else:
            g = _primitive_root(pa, p)
            order = pa // p * (p - 1)
            factors.append(CyclicFactor(p, pa, g, order, _dlog_table(pa, g, order)))
    phi = math.prod(f.order for f in factors)
    return DirichletGroup(q, tuple(factors), phi)


@dataclass(frozen=True, eq=False)
class DirichletCharacter:
    """A character as an exponent vector over its group's cyclic factors."""

    group: DirichletGroup
    exponents: tuple[int, ...]

    def __post_init__(self):
        facs = self.group.factors
        if len(self.exponents) != len(facs):
            raise DomainError("exponent vector length does not match the factor count")
        for e, f in zip(self.exponents, facs):
            if not 0 <= e < max(f.order, 1):
                raise DomainError(f"exponent {e} out of range for factor order {f.order}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, DirichletCharacter):
            return NotImplemented
        return self.modulus == other.modulus and self.exponents == other.exponents

    def __hash__(self) -> int:
        return hash((self.modulus, self.exponents))

    def __repr__(self) -> str:  # pragma: no cover
        return f"DirichletCharacter(mod {self.modulus}, exps={self.exponents})"

    @property
    def modulus(self) -> int:
        return self.group.modulus

    def angle(self, n: int) -> Fraction | None:
        """chi(n) as an exact fraction of a full turn, or None when chi(n) = 0."""
        dl = self.group.dlogs(n)
        if dl is None:
            return None
        total = Fraction(0)
        for e, d, f in zip(self.exponents, dl, self.group.factors):
            total += Fraction(e * d, f.order)
        return total % 1

    def __call__(self, n: int) -> complex:
        a = self.angle(n)
        if a is None:
            return 0j
        if a == 0:
            return 1 + 0j
        if 2 * a == 1:
            return -1 + 0j
        x = _TWO_PI * float(a)
        return complex(math.cos(x), math.sin(x))

    @cached_property
    def _period(self) -> np.ndarray:
        """chi(n) for n = 0..q-1 as a read-only complex array."""
        q = self.modulus
        n = np.arange(q, dtype=np.int64)
        L = self.group.exponent
        num = np.zeros(q, dtype=np.int64)
        unit = np.ones(q, dtype=bool)
        for e, fac in zip(self.exponents, self.group.factors):
            d = fac.dlog[n % fac.prime_power]
            unit &= d >= 0
            num += e * np.where(d < 0, 0, d) % fac.order * (L // fac.order)
        vals = np.exp((2j * np.pi / L) * (num % L))
        vals[~unit] = 0.0
        vals.flags.writeable = False
        return vals

    def values(self, n_max: int) -> np.ndarray:
        """chi(1..n_max) as a complex array."""
        q = self.modulus
        idx = np.arange(1, n_max + 1, dtype=np.int64) % q
        return self._period[idx]

    @cached_property
    def order(self) -> int:
        o = 1
        for e, f in zip(self.exponents, self.group.factors):
            o = math.lcm(o, f.order // math.gcd(f.order, e))
        return o

    @cached_property
    def parity(self) -> int:
        """chi(-1), as +1 or -1."""
        if self.modulus <= 2:
            return 1
        return 1 if self.angle(self.modulus - 1) == 0 else -1

    @cached_property
    def conductor(self) -> int:
        return _conductor_from_exponents(self.group.shape, self.exponents)

    @property
    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    @property
    def is_principal(self) -> bool:
        return all(e == 0 for e in self.exponents)

    def conjugate(self) -> "DirichletCharacter":
        return self.group.character(tuple(-e for e in self.exponents))

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        if not isinstance(other, DirichletCharacter):
            return NotImplemented
        if other.modulus != self.modulus:
            raise DomainError("moduli differ; use multiply() to lift to the lcm")
        return self.group.character(tuple(a + b for a, b in zip(self.exponents, other.exponents)))


@dataclass(frozen=True)
class CharacterInvariants:
    conductor: int
    order: int
    parity: int
    primitive: bool


def character_invariants(chi: DirichletCharacter) -> CharacterInvariants:
    """Conductor, order, parity and primitivity in one record."""
    return CharacterInvariants(chi.conductor, chi.order, chi.parity, chi.is_primitive)


def enumerate_characters(group: DirichletGroup, **filters):
    """Module-level alias for DirichletGroup.characters."""
    return group.characters(**filters)


def _unit_lift(fac: CyclicFactor, q: int) -> int:
    """Residue mod q equal to fac.generator on its prime power and 1 elsewhere."""
    m1 = fac.prime_power
    m2 = q // m1
    if m2 == 1:
        return fac.generator % q
    inv = pow(m1, -1, m2)
    x = fac.generator + m1 * ((1 - fac.generator) * inv % m2)
    return x % q


def lift_character(chi: DirichletCharacter, q: int) -> DirichletCharacter:
    """The character mod q agreeing with chi on units, for chi's modulus dividing q."""
    f = chi.modulus
    if q % f:
        raise DomainError(f"{f} does not divide {q}")
    if q == f:
        return chi
    target = build_group(q)
    exps = []
    for fac in target.factors:
        res = _unit_lift(fac, q)
        a = chi.angle(res)
        if a is None:  # unreachable: res is a unit mod q, hence mod f
            raise ArithmeticError("lift residue is not a unit")
        e = a * fac.order
        if e.denominator != 1:
            raise ArithmeticError("character value is not an order-th root of unity")
        exps.append(int(e) % fac.order)
    return target.character(tuple(exps))


def induce(chi: DirichletCharacter, q: int) -> DirichletCharacter:
    """Induce a primitive character to a multiple q of its conductor."""
    if not chi.is_primitive:
        raise DomainError("induce() expects a primitive character")
    return lift_character(chi, q)


def primitive_inducer(chi: DirichletCharacter) -> DirichletCharacter:
    """The primitive character of modulus chi.conductor inducing chi."""
    f = chi.conductor
    if f == chi.modulus:
        return chi
    q = chi.modulus
    base = build_group(f)
    exps = []
    for fac in base.factors:
        n = _unit_lift(fac, f)
        while math.gcd(n, q) != 1:
            n += f
        a = chi.angle(n)
        e = a * fac.order
        if e.denominator != 1:
            raise ArithmeticError("character value is not an order-th root of unity")
        exps.append(int(e) % fac.order)
    return base.character(tuple(exps))


def multiply(chi: DirichletCharacter, psi: DirichletCharacter) -> DirichletCharacter:
    """Product character modulo lcm of the two moduli."""
    m = math.lcm(chi.modulus, psi.modulus)
    a = lift_character(chi, m)
    b = lift_character(psi, m)
    return a * b


@dataclass(frozen=True)
class InducedSearchResult:
    count: int
    witnesses: tuple[DirichletCharacter, ...]


def count_induced_solutions(xi: DirichletCharacter, psi: DirichletCharacter) -> InducedSearchResult:
    """Count primitive chi with chi*psi induced by xi.

    The search runs over all conductors ell with lcm(ell, m) = q, where q and
    m are the conductors of xi and psi; both inputs must be primitive.
    """
    if not xi.is_primitive or not psi.is_primitive:
        raise DomainError("count_induced_solutions expects primitive characters")
    q, m = xi.modulus, psi.modulus
    if q > 100_000:
        raise CapacityError(f"search space for modulus {q} is beyond desk scale")
    witnesses: list[DirichletCharacter] = []
    for ell in divisors(q):
        if math.lcm(ell, m) != q:
            continue
        for chi in build_group(ell).characters(primitive_only=True):
            # chi*psi already lives mod lcm(ell, m) = q, so it is induced by
            # xi exactly when it is primitive and equal to xi
            prod = multiply(chi, psi)
            if prod.is_primitive and prod == xi:
                witnesses.append(chi)
    return InducedSearchResult(len(witnesses), tuple(witnesses))
