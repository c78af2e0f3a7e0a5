"""Exact arithmetic over a finite set of primes.

An S-unit is a rational of the form ``sign * prod(p**e)`` with the primes taken
from a fixed :class:`PrimeSet` and integer (possibly negative) exponents. An
S-integer is an S-unit with all exponents nonnegative. Everything here is
exact; values are Python ints or :class:`fractions.Fraction`.
"""

from __future__ import annotations

import heapq
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator


class PrimeSetMismatch(ValueError):
    pass


def is_prime(n: int) -> bool:
    """Deterministic trial division; fine for the small primes S is built from."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class PrimeSet:
    primes: tuple[int, ...]

    def __post_init__(self):
        primes = tuple(int(p) for p in self.primes)
        object.__setattr__(self, "primes", primes)
        if not primes:
            raise ValueError("prime set must be nonempty")
        for p in primes:
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
        if any(a >= b for a, b in zip(primes, primes[1:])):
            raise ValueError(f"primes must be strictly increasing: {primes}")

    @classmethod
    def parse(cls, text: str) -> PrimeSet:
        """Parse ``"2,3,5"``. Input order is kept and validated, not sorted."""
        try:
            primes = tuple(int(tok) for tok in text.replace(" ", "").split(","))
        except ValueError:
            raise ValueError(f"cannot parse prime set {text!r}") from None
        return cls(primes)

    def __len__(self):
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes)

    def __str__(self):
        return ",".join(map(str, self.primes))


@dataclass(frozen=True, order=True)
class SUnit:
    """``sign * prod(p_i ** exponents[i])`` over ``primes``."""

    sign: int
    exponents: tuple[int, ...]
    primes: PrimeSet = field(compare=False)

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")
        exps = tuple(int(e) for e in self.exponents)
        object.__setattr__(self, "exponents", exps)
        if len(exps) != len(self.primes):
            raise ValueError("exponent vector length does not match prime set")

    # order=True compares (sign, exponents) only; primes must still agree for equality
    def __eq__(self, other):
        if not isinstance(other, SUnit):
            return NotImplemented
        return (self.sign, self.exponents, self.primes) == (other.sign, other.exponents, other.primes)

    def __hash__(self):
        return hash((self.sign, self.exponents, self.primes.primes))

    @classmethod
    def one(cls, primes: PrimeSet) -> SUnit:
        return cls(1, (0,) * len(primes), primes)

    @property
    def value(self) -> Fraction:
        return value_of(self)

    @property
    def is_integral(self) -> bool:
        return all(e >= 0 for e in self.exponents)

    @property
    def height(self) -> int:
        """Sup-norm of the exponent vector."""
        return max((abs(e) for e in self.exponents), default=0)

    def __mul__(self, other):
        if not isinstance(other, SUnit):
            return NotImplemented
        return mul(self, other)

    def __neg__(self):
        return SUnit(-self.sign, self.exponents, self.primes)

    def __str__(self):
        return format_sunit(self)


@dataclass(frozen=True)
class SInteger:
    """A nonzero integer all of whose prime factors lie in the prime set."""

    unit: SUnit
    value: int = field(init=False, compare=False)

    def __post_init__(self):
        if not self.unit.is_integral:
            raise ValueError(f"{self.unit} has a negative exponent")
        v = self.unit.sign
        for p, e in zip(self.unit.primes, self.unit.exponents):
            v *= p**e
        object.__setattr__(self, "value", v)

    @property
    def primes(self) -> PrimeSet:
        return self.unit.primes

    def __int__(self):
        return self.value

    def __str__(self):
        return str(self.value)


def _check_same(a: SUnit, b: SUnit) -> None:
    if a.primes != b.primes:
        raise PrimeSetMismatch(f"prime sets differ: {{{a.primes}}} vs {{{b.primes}}}")


def value_of(u: SUnit) -> Fraction:
    num = den = 1
    for p, e in zip(u.primes, u.exponents):
        if e >= 0:
            num *= p**e
        else:
            den *= p ** (-e)
    return Fraction(u.sign * num, den)


def mul(a: SUnit, b: SUnit) -> SUnit:
    _check_same(a, b)
    return SUnit(a.sign * b.sign, tuple(x + y for x, y in zip(a.exponents, b.exponents)), a.primes)


def inverse(a: SUnit) -> SUnit:
    return SUnit(a.sign, tuple(-e for e in a.exponents), a.primes)


def _strip(n: int, s: PrimeSet) -> tuple[int, tuple[int, ...]]:
    """Divide the primes of ``s`` out of ``n > 0``; return the cofactor and exponents."""
    exps = []
    for p in s:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        exps.append(e)
    return n, tuple(exps)


def factor_over_s(n: int, s: PrimeSet) -> SInteger | None:
    """The S-integer representation of ``n``, or ``None`` when ``n`` has a prime factor outside ``s``."""
    n = int(n)
    if n == 0:
        raise ValueError("zero is not an S-integer")
    rest, exps = _strip(abs(n), s)
    if rest != 1:
        return None
    return SInteger(SUnit(1 if n > 0 else -1, exps, s))


def sunit_of(x: Fraction | int, s: PrimeSet) -> SUnit | None:
    """The S-unit equal to the rational ``x``, or ``None`` when ``x`` is not an S-unit."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("zero is not an S-unit")
    num_rest, num_exps = _strip(abs(x.numerator), s)
    den_rest, den_exps = _strip(x.denominator, s)
    if num_rest != 1 or den_rest != 1:
        return None
    return SUnit(1 if x > 0 else -1, tuple(a - b for a, b in zip(num_exps, den_exps)), s)


def format_sunit(u: SUnit) -> str:
    parts = []
    for p, e in zip(u.primes, u.exponents):
        if e == 1:
            parts.append(str(p))
        elif e != 0:
            parts.append(f"{p}^{e}")
    body = " * ".join(parts) if parts else "1"
    return ("-" if u.sign < 0 else "") + body


_FACTOR_RE = re.compile(r"^(\d+)(?:\^(-?\d+))?$")


def parse_sunit(text: str, s: PrimeSet) -> SUnit:
    """Inverse of :func:`format_sunit`. Also accepts ``p^1`` and repeated primes."""
    t = text.strip()
    sign = 1
    if t.startswith("-"):
        sign, t = -1, t[1:].strip()
    exps = [0] * len(s)
    if t == "1":
        return SUnit(sign, exps, s)
    for tok in t.split("*"):
        m = _FACTOR_RE.match(tok.strip())
        if not m:
            raise ValueError(f"cannot parse S-unit factor {tok!r} in {text!r}")
        p, e = int(m.group(1)), int(m.group(2) or 1)
        if p not in s.primes:
            raise ValueError(f"{p} is not in the prime set {{{s}}}")
        exps[s.primes.index(p)] += e
    return SUnit(sign, exps, s)


def enumerate_s_integers(
    s: PrimeSet, count: int | None = None, bound: int | None = None
) -> Iterator[SInteger]:
    """Positive S-integers in increasing order, starting at 1.

    Stops after ``count`` values or once values exceed ``bound`` (whichever
    comes first); with neither given the stream is infinite.

    Each heap entry only spawns multiples by primes at or after its largest
    prime, so every S-integer is generated exactly once.
    """
    if count is not None and count <= 0:
        raise ValueError("count must be positive")
    if bound is not None and bound <= 0:
        raise ValueError("bound must be positive")
    primes = s.primes
    heap = [(1, (0,) * len(primes), 0)]
    emitted = 0
    while heap:
        v, exps, lo = heapq.heappop(heap)
        if bound is not None and v > bound:
            return
        yield SInteger(SUnit(1, exps, s))
        emitted += 1
        if count is not None and emitted >= count:
            return
        for j in range(lo, len(primes)):
            nxt = list(exps)
            nxt[j] += 1
            heapq.heappush(heap, (v * primes[j], tuple(nxt), j))


def ilog(x: int, b: int) -> int:
    """Largest ``e`` with ``b**e <= x`` for ``x >= 1``."""
    e = max(0, int((x.bit_length() - 1) / math.log2(b)) - 1)
    pw = b**e
    while pw > x:
        pw //= b
        e -= 1
    while pw * b <= x:
        pw *= b
        e += 1
    return e


def count_s_integers(bound: int, s: PrimeSet) -> int:
    """Number of positive S-integers ``<= bound``, counted without enumerating them."""

    def rec(x: int, i: int) -> int:
        p = s.primes[i]
        if i == len(s) - 1:
            return ilog(x, p) + 1
        total = 0
        while x >= 1:
            total += rec(x, i + 1)
            x //= p
        return total

    return rec(bound, 0) if bound >= 1 else 0
