"""Finite commutative rings Z_{n_1} x ... x Z_{n_k} and their ideals.

Elements are plain tuples of residues.  Ideals are stored by their
divisor tuple ``(d_1, ..., d_k)`` with ``d_i | n_i``, which denotes
``d_1 Z_{n_1} x ... x d_k Z_{n_k}``; ``d_i == n_i`` encodes a zero
component and all-ones is the unit ideal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import gcd, lcm, prod
from typing import Callable, Iterator

from .errors import ZariskiError

RingElem = tuple[int, ...]

_LIFT_ITERATION_CAP = 64


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def prime_factors(n: int) -> list[int]:
    """Distinct prime divisors of ``n`` in increasing order."""
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def big_omega(n: int) -> int:
    """Number of prime factors of ``n`` counted with multiplicity."""
    count = 0
    for p in prime_factors(n):
        while n % p == 0:
            n //= p
            count += 1
    return count


@dataclass(frozen=True, order=True)
class Ring:
    moduli: tuple[int, ...]

    def __post_init__(self):
        moduli = tuple(int(n) for n in self.moduli)
        if not moduli:
            raise ZariskiError("a ring needs at least one factor")
        if any(n < 2 for n in moduli):
            raise ZariskiError(f"every modulus must be >= 2, got {moduli}")
        object.__setattr__(self, "moduli", moduli)

    @property
    def k(self) -> int:
        return len(self.moduli)

    @property
    def size(self) -> int:
        return prod(self.moduli)

    @property
    def zero(self) -> RingElem:
        return (0,) * self.k

    @property
    def one(self) -> RingElem:
        return (1,) * self.k

    def elements(self) -> Iterator[RingElem]:
        return itertools.product(*(range(n) for n in self.moduli))

    def element(self, value) -> RingElem:
        """Coerce an int (k == 1) or a sequence into a reduced residue tuple."""
        if isinstance(value, int):
            if self.k != 1:
                raise ZariskiError("integer ring literals only allowed for k == 1")
            value = (value,)
        value = tuple(value)
        if len(value) != self.k:
            raise ZariskiError(f"element {value} has wrong arity for {self}")
        return tuple(a % n for a, n in zip(value, self.moduli))

    def add(self, a: RingElem, b: RingElem) -> RingElem:
        return tuple((x + y) % n for x, y, n in zip(a, b, self.moduli))

    def sub(self, a: RingElem, b: RingElem) -> RingElem:
        return tuple((x - y) % n for x, y, n in zip(a, b, self.moduli))

    def mul(self, a: RingElem, b: RingElem) -> RingElem:
        return tuple((x * y) % n for x, y, n in zip(a, b, self.moduli))

    def power(self, a: RingElem, e: int) -> RingElem:
        return tuple(pow(x, e, n) for x, n in zip(a, self.moduli))

    def is_nilpotent(self, a: RingElem) -> bool:
        return all(pow(x, n, n) == 0 for x, n in zip(a, self.moduli))

    def ideal(self, divs) -> Ideal:
        return Ideal(self, tuple(divs))

    def principal(self, a: RingElem) -> Ideal:
        """The ideal aR."""
        return Ideal(self, tuple(gcd(x, n) for x, n in zip(a, self.moduli)))

    @property
    def unit_ideal(self) -> Ideal:
        return Ideal(self, (1,) * self.k)

    @property
    def zero_ideal(self) -> Ideal:
        return Ideal(self, self.moduli)

    def describe(self) -> str:
        return " x ".join(f"Z_{n}" for n in self.moduli)

    def __str__(self):
        return self.describe()


@dataclass(frozen=True)
class Ideal:
    ring: Ring
    divisors: tuple[int, ...]

    def __post_init__(self):
        divs = tuple(int(d) for d in self.divisors)
        if len(divs) != self.ring.k:
            raise ZariskiError(f"divisor tuple {divs} has wrong arity for {self.ring}")
        for d, n in zip(divs, self.ring.moduli):
            if d < 1 or n % d:
                raise ZariskiError(f"{d} does not divide {n}")
        object.__setattr__(self, "divisors", divs)

    def __contains__(self, a: RingElem) -> bool:
        return all(x % d == 0 for x, d in zip(a, self.divisors))

    def __le__(self, other: Ideal) -> bool:
        return all(e % d == 0 for d, e in zip(other.divisors, self.divisors))

    def __lt__(self, other: Ideal) -> bool:
        return self <= other and self != other

    def __ge__(self, other: Ideal) -> bool:
        return other <= self

    def __gt__(self, other: Ideal) -> bool:
        return other < self

    def __mul__(self, other: Ideal) -> Ideal:
        return Ideal(self.ring, tuple(
            gcd(d * e, n) for d, e, n in zip(self.divisors, other.divisors, self.ring.moduli)))

    def __add__(self, other: Ideal) -> Ideal:
        return Ideal(self.ring, tuple(gcd(d, e) for d, e in zip(self.divisors, other.divisors)))

    def __and__(self, other: Ideal) -> Ideal:
        return Ideal(self.ring, tuple(lcm(d, e) for d, e in zip(self.divisors, other.divisors)))

    def __pow__(self, e: int) -> Ideal:
        out = self.ring.unit_ideal
        for _ in range(e):
            out = out * self
        return out

    @property
    def is_unit(self) -> bool:
        return all(d == 1 for d in self.divisors)

    @property
    def is_zero(self) -> bool:
        return self.divisors == self.ring.moduli

    @property
    def is_prime(self) -> bool:
        # A proper ideal is prime iff exactly one component is pZ_n (p prime) and the rest are units.
        non_unit = [(d, n) for d, n in zip(self.divisors, self.ring.moduli) if d != 1]
        if len(non_unit) != 1:
            return False
        d, _ = non_unit[0]
        return prime_factors(d) == [d]

    @property
    def is_nil(self) -> bool:
        return self <= nilradical(self.ring)

    @property
    def generator(self) -> RingElem:
        return self.divisors

    def elements(self) -> Iterator[RingElem]:
        return itertools.product(*(range(0, n, d) for d, n in zip(self.divisors, self.ring.moduli)))

    @property
    def size(self) -> int:
        return prod(n // d for d, n in zip(self.divisors, self.ring.moduli))

    def describe(self) -> str:
        if self.ring.k == 1:
            return f"({self.divisors[0]})"
        return "(" + ", ".join(str(d) for d in self.divisors) + ")"

    def __str__(self):
        return self.describe()

    def sort_key(self):
        return self.divisors


def all_ideals(R: Ring) -> list[Ideal]:
    return [Ideal(R, d) for d in itertools.product(*(divisors(n) for n in R.moduli))]


def idempotents(R: Ring) -> list[RingElem]:
    per_factor = [[x for x in range(n) if (x * x) % n == x] for n in R.moduli]
    return sorted(itertools.product(*per_factor))


def nilradical(R: Ring) -> Ideal:
    return Ideal(R, tuple(prod(prime_factors(n)) for n in R.moduli))


def prime_ideals(R: Ring) -> list[Ideal]:
    out = []
    for i, n in enumerate(R.moduli):
        for p in prime_factors(n):
            divs = [1] * R.k
            divs[i] = p
            out.append(Ideal(R, tuple(divs)))
    return sorted(out, key=Ideal.sort_key)


def minimal_primes(R: Ring) -> list[Ideal]:
    # Zero-dimensional: every prime is maximal and minimal.
    return prime_ideals(R)


def lift_idempotent(R: Ring, u: RingElem, I: Ideal) -> RingElem:
    """Lift an idempotent of R/I to an idempotent of R inside uR.

    Iterates ``e <- 3e^2 - 2e^3`` from ``u``; every step keeps ``e`` in
    ``uR`` and congruent to ``u`` modulo ``I``.
    """
    u = R.element(u)
    if not I.is_nil:
        raise ZariskiError(f"ideal {I} is not nil")
    if R.sub(R.mul(u, u), u) not in I:
        raise ZariskiError(f"{u} is not idempotent modulo {I}")
    e = u
    for _ in range(_LIFT_ITERATION_CAP):
        e2 = R.mul(e, e)
        nxt = R.sub(R.mul((3,) * R.k, e2), R.mul((2,) * R.k, R.mul(e2, e)))
        if nxt == e:
            break
        e = nxt
    else:
        raise RuntimeError("idempotent lifting did not converge; precondition violated")
    assert R.mul(e, e) == e and e in R.principal(u) and R.sub(e, u) in I
    return e


@dataclass(frozen=True)
class RingQuotient:
    """R/I.  ``ring`` is None exactly when I is the unit ideal (zero ring)."""

    source: Ring
    ideal: Ideal
    kept: tuple[int, ...]

    @cached_property
    def ring(self) -> Ring | None:
        if not self.kept:
            return None
        return Ring(tuple(self.ideal.divisors[i] for i in self.kept))

    @property
    def is_zero_ring(self) -> bool:
        return not self.kept

    def project(self, a: RingElem) -> RingElem:
        return tuple(a[i] % self.ideal.divisors[i] for i in self.kept)

    def project_ideal(self, J: Ideal) -> Ideal:
        """Image (J + I)/I as an ideal of the quotient ring."""
        if self.ring is None:
            raise ZariskiError("the zero ring has no proper ideals")
        s = J + self.ideal
        return Ideal(self.ring, tuple(s.divisors[i] for i in self.kept))

    @property
    def projection(self) -> Callable[[RingElem], RingElem]:
        return self.project


def quotient_ring(R: Ring, I: Ideal) -> RingQuotient:
    kept = tuple(i for i, d in enumerate(I.divisors) if d != 1)
    return RingQuotient(R, I, kept)
