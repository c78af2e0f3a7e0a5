"""Linear S-unit equations ``c_1 x_1 + ... + c_k x_k = M``.

Solutions are searched exhaustively on a grid of bounded exponent vectors
(the height bound caps ``max |e|`` over all coordinates). The grid is walked
for the first ``k - 1`` coordinates and the last one is recovered by exact
division, so each step costs one dictionary probe.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .sinteger import PrimeSet, SUnit, format_sunit, parse_sunit, sunit_of, value_of

S_UNITS = "s-units"
S_INTEGERS = "s-integers"
DOMAINS = (S_UNITS, S_INTEGERS)

DEFAULT_SEARCH_CEILING = 10**12


class SearchBudgetExceeded(RuntimeError):
    """The exponent grid is larger than the configured ceiling."""


class NotASolution(ValueError):
    pass


class DecompositionError(RuntimeError):
    """decompose produced a residual that is not non-degenerate (a bug, never expected)."""


@dataclass(frozen=True)
class UnitEquation:
    coefficients: tuple[int, ...]
    rhs: int
    primes: PrimeSet

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coefficients)
        object.__setattr__(self, "coefficients", coeffs)
        if not coeffs:
            raise ValueError("need at least one coefficient")
        if 0 in coeffs:
            raise ValueError("coefficients must be nonzero")
        if self.rhs == 0:
            raise ValueError("right-hand side must be nonzero")

    @property
    def k(self) -> int:
        return len(self.coefficients)

    def restrict(self, indices: Sequence[int]) -> UnitEquation:
        """Sub-equation on the given 0-based indices, same right-hand side."""
        return UnitEquation(tuple(self.coefficients[i] for i in indices), self.rhs, self.primes)

    def lhs(self, values: Iterable[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.coefficients, values)), Fraction(0))

    def __str__(self):
        return f"{','.join(map(str, self.coefficients))} = {self.rhs} over {self.primes}"

    @classmethod
    def parse(cls, text: str) -> UnitEquation:
        """Parse ``"c1,c2,...,ck = M over p1,p2,..."``."""
        m = re.fullmatch(r"\s*([-+\d,\s]+?)\s*=\s*([-+]?\d+)\s+over\s+([\d,\s]+?)\s*", text)
        if not m:
            raise ValueError(f"cannot parse equation {text!r}")
        coeffs = tuple(int(tok) for tok in m.group(1).replace(" ", "").split(","))
        return cls(coeffs, int(m.group(2)), PrimeSet.parse(m.group(3)))


@dataclass(frozen=True)
class Solution:
    coords: tuple[SUnit, ...]
    # filled in by solve_bounded; not part of identity
    degenerate: bool | None = field(default=None, compare=False)

    @property
    def values(self) -> tuple[Fraction, ...]:
        return tuple(value_of(x) for x in self.coords)

    def restrict(self, indices: Sequence[int]) -> Solution:
        return Solution(tuple(self.coords[i] for i in indices))

    def texts(self) -> tuple[str, ...]:
        return tuple(format_sunit(x) for x in self.coords)

    def __str__(self):
        return "(" + ", ".join(self.texts()) + ")"


def parse_solution(text: str, primes: PrimeSet) -> Solution:
    """Comma-separated coordinates, each a rational literal (``-3``, ``1/2``) or canonical S-unit text."""
    coords = []
    for tok in text.split(","):
        tok = tok.strip()
        if re.fullmatch(r"[-+]?\d+(/\d+)?", tok):
            u = sunit_of(Fraction(tok), primes)
            if u is None:
                raise ValueError(f"{tok} is not an S-unit over {{{primes}}}")
        else:
            u = parse_sunit(tok, primes)
        coords.append(u)
    return Solution(tuple(coords))


def solution_sort_key(sol: Solution) -> tuple[str, ...]:
    return sol.texts()


def check_solution(eq: UnitEquation, sol: Solution) -> None:
    if len(sol.coords) != eq.k:
        raise NotASolution(f"expected {eq.k} coordinates, got {len(sol.coords)}")
    if any(x.primes != eq.primes for x in sol.coords):
        raise NotASolution("solution coordinates use a different prime set")
    if eq.lhs(sol.values) != eq.rhs:
        raise NotASolution(f"{sol} does not satisfy {eq}")


def _subset_sums(terms: Sequence[Fraction]) -> list[Fraction]:
    """All 2**k subset sums, indexed by bitmask."""
    sums = [Fraction(0)] * (1 << len(terms))
    for mask in range(1, len(sums)):
        low = mask & -mask
        sums[mask] = sums[mask ^ low] + terms[low.bit_length() - 1]
    return sums


def is_nondegenerate(eq: UnitEquation, sol: Solution) -> bool:
    """True iff no nonempty subset of the terms ``c_i x_i`` sums to zero."""
    check_solution(eq, sol)
    terms = [c * v for c, v in zip(eq.coefficients, sol.values)]
    return all(s != 0 for s in _subset_sums(terms)[1:])


@dataclass(frozen=True)
class Decomposition:
    zero_set: tuple[int, ...]  # J, 0-based
    active_set: tuple[int, ...]  # I, 0-based
    residual: Solution

    def __str__(self):
        one = lambda idx: "{" + ",".join(str(i + 1) for i in idx) + "}"
        return f"J={one(self.zero_set)} I={one(self.active_set)} residual={self.residual}"


def decompose(eq: UnitEquation, sol: Solution) -> Decomposition:
    """Split off a largest zero-sum index set; the rest is a non-degenerate solution.

    Among zero-sum sets of maximum size the lexicographically smallest
    (as sorted index tuples) is taken.
    """
    check_solution(eq, sol)
    k = eq.k
    terms = [c * v for c, v in zip(eq.coefficients, sol.values)]
    sums = _subset_sums(terms)
    zero = ()
    # the full index set sums to M != 0, so J has at most k - 1 elements
    for size in range(k - 1, 0, -1):
        for combo in itertools.combinations(range(k), size):
            if sums[sum(1 << i for i in combo)] == 0:
                zero = combo
                break
        if zero:
            break
    active = tuple(i for i in range(k) if i not in zero)
    sub_eq = eq.restrict(active)
    residual = sol.restrict(active)
    if not is_nondegenerate(sub_eq, residual):
        raise DecompositionError(f"residual {residual} of {sol} is degenerate")
    return Decomposition(zero, active, residual)


def search_space_size(eq: UnitEquation, exp_bound: int) -> int:
    return (2 * exp_bound + 1) ** (len(eq.primes) * eq.k)


def bounded_units(primes: PrimeSet, exp_bound: int, domain: str = S_UNITS) -> list[SUnit]:
    """Every S-unit (both signs) with exponents in ``[-E, E]`` or ``[0, E]``."""
    if domain not in DOMAINS:
        raise ValueError(f"unknown domain {domain!r}")
    lo = -exp_bound if domain == S_UNITS else 0
    rng = range(lo, exp_bound + 1)
    return [
        SUnit(sign, exps, primes)
        for exps in itertools.product(rng, repeat=len(primes))
        for sign in (1, -1)
    ]


def solve_bounded(
    eq: UnitEquation,
    exp_bound: int,
    domain: str = S_UNITS,
    ceiling: int = DEFAULT_SEARCH_CEILING,
) -> list[Solution]:
    """All solutions whose coordinates have every exponent within the bound.

    Each returned :class:`Solution` carries its ``degenerate`` flag. The list
    is sorted by the coordinates' canonical text forms.
    """
    if exp_bound < 0:
        raise ValueError("exponent bound must be nonnegative")
    size = search_space_size(eq, exp_bound)
    if size > ceiling:
        raise SearchBudgetExceeded(
            f"search space (2E+1)^(|S|k) = {size} exceeds ceiling {ceiling}"
        )
    units = bounded_units(eq.primes, exp_bound, domain)
    # scale every value by a common denominator so the search runs on ints
    scale = math.prod(p**exp_bound for p in eq.primes) if domain == S_UNITS else 1
    scaled = []
    for u in units:
        v = value_of(u) * scale
        assert v.denominator == 1
        scaled.append(int(v))
    lookup = dict(zip(scaled, units))

    *head, last = eq.coefficients
    target = eq.rhs * scale
    found = []

    def walk(depth: int, partial: int, chosen: list[SUnit]):
        if depth == len(head):
            rest = target - partial
            if rest == 0 or rest % last:
                return
            x = lookup.get(rest // last)
            if x is not None:
                found.append(Solution(tuple(chosen) + (x,)))
            return
        c = head[depth]
        for u, v in zip(units, scaled):
            chosen.append(u)
            walk(depth + 1, partial + c * v, chosen)
            chosen.pop()

    walk(0, 0, [])
    out = []
    for sol in found:
        assert eq.lhs(sol.values) == eq.rhs
        out.append(Solution(sol.coords, degenerate=not is_nondegenerate(eq, sol)))
    out.sort(key=solution_sort_key)
    return out


def nondegenerate_solutions(
    eq: UnitEquation, exp_bound: int, domain: str = S_UNITS, ceiling: int = DEFAULT_SEARCH_CEILING
) -> list[Solution]:
    return [s for s in solve_bounded(eq, exp_bound, domain, ceiling) if not s.degenerate]


@dataclass(frozen=True)
class WitnessSets:
    sets: tuple[frozenset[SUnit], ...]
    height_bound: int
    domain: str = S_UNITS

    def covers(self, sol: Solution) -> bool:
        """Some coordinate of ``sol`` lies in its witness set."""
        return any(x in v for x, v in zip(sol.coords, self.sets))


def witness_sets(
    eq: UnitEquation,
    exp_bound: int,
    domain: str = S_UNITS,
    ceiling: int = DEFAULT_SEARCH_CEILING,
) -> WitnessSets:
    """Per-coordinate sets collecting non-degenerate solution coordinates of every sub-equation.

    For each nonempty index set I and each i in I, the i-th coordinates of
    the non-degenerate solutions of ``sum_{j in I} c_j x_j = M`` (within the
    height bound) go into set i.
    """
    k = eq.k
    sets = [set() for _ in range(k)]
    for size in range(1, k + 1):
        for idx in itertools.combinations(range(k), size):
            for sol in nondegenerate_solutions(eq.restrict(idx), exp_bound, domain, ceiling):
                for pos, i in enumerate(idx):
                    sets[i].add(sol.coords[pos])
    return WitnessSets(tuple(frozenset(s) for s in sets), exp_bound, domain)
