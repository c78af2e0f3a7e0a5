"""Integer sequences and the finite side of the T-sequence criterion.

A sequence ``s_1, s_2, ...`` is a T-sequence iff for every coefficient vector
``c`` and every nonzero ``M`` some tail index ``m`` exists past which no
strictly increasing index tuple ``m < m_1 < ... < m_k`` gives
``sum c_i s_{m_i} = M``. Nothing finite can decide that; the functions here
search a bounded horizon for violating tuples and report what they saw.
Indices are 1-based throughout.
"""

from __future__ import annotations

import bisect
import itertools
import math
import re
import sys
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .sinteger import PrimeSet, count_s_integers, enumerate_s_integers, factor_over_s

DEFAULT_NODE_BUDGET = 10**8
DEFAULT_GEOM_HORIZON = 60

EVIDENCE_CAVEAT = (
    "EVIDENCE ONLY: a finite tail within the horizon is bounded evidence, not a proof "
    "of T-sequence-hood; a missing tail (violations persisting to the end of the horizon) "
    "falsifies only that (c, M) cell within the horizon. Repeated indices are not searched; "
    "they are covered by other (c, M) cells only in the unbounded criterion."
)


class NodeBudgetExceeded(RuntimeError):
    def __init__(self, report: ViolationReport):
        super().__init__(f"node budget exhausted after {report.nodes} nodes; report is partial")
        self.report = report


# ---------------------------------------------------------------------------
# sequence providers


@dataclass(frozen=True)
class GeometricCombo:
    """``s_n = d_1 a_1^n + ... + d_j a_j^n``."""

    d: tuple[int, ...]
    a: tuple[int, ...]

    def __post_init__(self):
        if len(self.d) != len(self.a) or not self.d:
            raise ValueError("need matching, nonempty d and a")

    @property
    def meets_growth_hypothesis(self) -> bool:
        """Every base avoids 0 and +-1 (the sufficient condition for T-sequence-hood)."""
        return all(x not in (0, 1, -1) for x in self.a)

    def __str__(self):
        return "geom " + " + ".join(f"{d}*{a}^n" for d, a in zip(self.d, self.a))


@dataclass(frozen=True)
class UniversalS:
    primes: PrimeSet

    def __str__(self):
        return f"universal {self.primes}"


@dataclass(frozen=True)
class Primes:
    def __str__(self):
        return "primes"


@dataclass(frozen=True)
class Explicit:
    terms: tuple[int, ...]
    source: str = field(default="explicit", compare=False)

    def __str__(self):
        return f"file:{self.source}" if self.source != "explicit" else "explicit"


SequenceSpec = GeometricCombo | UniversalS | Primes | Explicit


def parse_sequence_spec(text: str) -> SequenceSpec:
    """``geom 1*2^n + 1*3^n``, ``universal 2,3``, ``primes``, ``file:<path>`` (``file:-`` is stdin)."""
    t = text.strip()
    if t == "primes":
        return Primes()
    if t.startswith("universal"):
        return UniversalS(PrimeSet.parse(t[len("universal"):].strip()))
    if t.startswith("file:"):
        path = t[len("file:"):]
        raw = sys.stdin.read() if path == "-" else Path(path).read_text()
        terms = tuple(int(line) for line in raw.split() if line.strip())
        return Explicit(terms, source=path)
    if t.startswith("geom"):
        d, a = [], []
        for term in t[len("geom"):].split("+"):
            m = re.fullmatch(r"\s*\(?\s*(-?\d+)\s*\*\s*\(?\s*(-?\d+)\s*\)?\s*\^\s*n\s*\)?\s*", term)
            if not m:
                raise ValueError(f"cannot parse geometric term {term!r}")
            d.append(int(m.group(1)))
            a.append(int(m.group(2)))
        return GeometricCombo(tuple(d), tuple(a))
    raise ValueError(f"unknown sequence spec {text!r}")


def _nth_prime_upper(n: int) -> int:
    if n < 6:
        return 13
    ln = math.log(n)
    return int(n * (ln + math.log(ln))) + 3


def segmented_primes(limit: int, segment: int = 1 << 16):
    """Primes ``<= limit`` by a segmented sieve of Eratosthenes."""
    if limit < 2:
        return
    root = math.isqrt(limit)
    base = bytearray([1]) * (root + 1)
    base[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(root) + 1):
        if base[i]:
            base[i * i :: i] = bytearray(len(range(i * i, root + 1, i)))
    small = [i for i in range(2, root + 1) if base[i]]
    yield from small
    lo = root + 1
    while lo <= limit:
        hi = min(lo + segment - 1, limit)
        seg = bytearray([1]) * (hi - lo + 1)
        for p in small:
            start = max(p * p, (lo + p - 1) // p * p)
            if start > hi:
                continue
            seg[start - lo :: p] = bytearray(len(range(start, hi + 1, p)))
        yield from itertools.compress(range(lo, hi + 1), seg)
        lo = hi + 1


def first_primes(n: int) -> list[int]:
    return list(itertools.islice(segmented_primes(_nth_prime_upper(n)), n))


def universal_terms(primes: PrimeSet, n: int) -> list[int]:
    """``s_i = (-1)^i a_{ceil(i/2)}``: -1, 1, -a_2, a_2, ... over the positive S-integers a_j."""
    a = [x.value for x in enumerate_s_integers(primes, count=(n + 1) // 2)]
    return [(-1) ** i * a[(i + 1) // 2 - 1] for i in range(1, n + 1)]


def generate(spec: SequenceSpec, n: int) -> list[int]:
    """The first ``n`` terms ``s_1..s_n``."""
    if n < 1:
        raise ValueError("need n >= 1")
    if isinstance(spec, GeometricCombo):
        powers = list(spec.a)
        out = []
        for _ in range(n):
            out.append(sum(d * p for d, p in zip(spec.d, powers)))
            powers = [p * a for p, a in zip(powers, spec.a)]
        return out
    if isinstance(spec, UniversalS):
        return universal_terms(spec.primes, n)
    if isinstance(spec, Primes):
        return first_primes(n)
    if isinstance(spec, Explicit):
        if n > len(spec.terms):
            raise ValueError(f"explicit sequence has only {len(spec.terms)} terms, asked for {n}")
        return list(spec.terms[:n])
    raise TypeError(f"not a sequence spec: {spec!r}")


# ---------------------------------------------------------------------------
# violation search


@dataclass(frozen=True)
class CriterionQuery:
    c: tuple[int, ...]
    M: int
    horizon: int
    tail: int = 0

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(int(x) for x in self.c))
        if not self.c:
            raise ValueError("need at least one coefficient")
        if 0 in self.c:
            raise ValueError("coefficients must be nonzero")
        if self.M == 0:
            raise ValueError("M must be nonzero")
        if not 0 <= self.tail < self.horizon:
            raise ValueError(f"need 0 <= tail < horizon, got tail={self.tail} horizon={self.horizon}")


@dataclass(frozen=True)
class ViolationReport:
    query: CriterionQuery
    hits: tuple[tuple[int, ...], ...]
    exhausted: bool
    nodes: int = 0


class _Window:
    """Terms with indices ``tail+1..horizon`` plus the tables the search prunes with."""

    def __init__(self, terms: Sequence[int], tail: int, horizon: int):
        if len(terms) < horizon:
            raise ValueError(f"need {horizon} terms, got {len(terms)}")
        self.tail, self.horizon = tail, horizon
        self.terms = terms
        by_value = defaultdict(list)
        for i in range(tail + 1, horizon + 1):
            by_value[terms[i - 1]].append(i)
        self.values = sorted(by_value)
        self.by_value = by_value
        # suffix sign (+1/-1 if constant from i on, else 0) and suffix min |s|
        n = horizon + 2
        self.sign = [0] * n
        self.minabs = [0] * n
        sign, lo = None, None
        for i in range(horizon, tail, -1):
            v = terms[i - 1]
            sv = (v > 0) - (v < 0)
            sign = sv if sign is None or sign == sv else 0
            lo = abs(v) if lo is None else min(lo, abs(v))
            self.sign[i], self.minabs[i] = sign, lo

    def last(self, coeff: int, partial: int, lo: int, hi: int, after: int):
        """Indices ``j > after`` with ``lo <= partial + coeff * s_j <= hi``."""
        a, b = lo - partial, hi - partial
        if coeff > 0:
            vlo, vhi = -((-a) // coeff), b // coeff
        else:
            vlo, vhi = -((-b) // coeff), a // coeff
        start = bisect.bisect_left(self.values, vlo)
        stop = bisect.bisect_right(self.values, vhi)
        for v in self.values[start:stop]:
            idx = self.by_value[v]
            for j in idx[bisect.bisect_right(idx, after):]:
                yield j, partial + coeff * v


def _search(terms, c, lo, hi, tail, horizon, budget):
    """DFS over ``tail < m_1 < ... < m_k <= horizon`` for sums in ``[lo, hi]``.

    Returns ``(hits, exhausted, nodes)`` with hits as ``(indices, sum)`` pairs.
    The first ``k - 1`` indices are enumerated; the last is found by value
    lookup. A level is cut off once the remaining terms all share a sign and
    are too large in magnitude to land in ``[lo, hi]``.
    """
    w = _Window(terms, tail, horizon)
    k = len(c)
    hits = []
    nodes = 0
    # |sum of remaining coefficients| when they all share a sign, else None
    rest_abs = []
    for d in range(k):
        rem = c[d:]
        same = all(x > 0 for x in rem) or all(x < 0 for x in rem)
        rest_abs.append((sum(abs(x) for x in rem), 1 if rem[0] > 0 else -1) if same else None)

    def walk(depth, after, partial, chosen):
        nonlocal nodes
        if depth == k - 1:
            for j, total in w.last(c[depth], partial, lo, hi, after):
                hits.append((tuple(chosen) + (j,), total))
            return True
        for j in range(after + 1, horizon - (k - 1 - depth) + 1):
            ra = rest_abs[depth]
            if ra is not None and w.sign[j]:
                mag = ra[0] * w.minabs[j]
                if ra[1] * w.sign[j] > 0:
                    if partial + mag > hi:
                        break
                elif partial - mag < lo:
                    break
            if nodes >= budget:
                return False
            nodes += 1
            chosen.append(j)
            ok = walk(depth + 1, j, partial + c[depth] * terms[j - 1], chosen)
            chosen.pop()
            if not ok:
                return False
        return True

    exhausted = walk(0, tail, 0, [])
    hits.sort()
    return hits, exhausted, nodes


def find_violations(
    terms: Sequence[int], q: CriterionQuery, budget: int = DEFAULT_NODE_BUDGET
) -> ViolationReport:
    """All index tuples ``tail < m_1 < ... < m_k <= horizon`` with ``sum c_i s_{m_i} = M``.

    ``terms[0]`` is ``s_1``. If the node budget runs out the report comes back
    with ``exhausted=False`` and whatever hits were found so far.
    """
    hits, exhausted, nodes = _search(terms, q.c, q.M, q.M, q.tail, q.horizon, budget)
    return ViolationReport(q, tuple(idx for idx, _ in hits), exhausted, nodes)


def _tail_from_hits(first_indices, k: int, horizon: int, useful_fraction: float) -> int | None:
    """Tail index given the first index of every violating tuple found from tail 0."""
    m = max(first_indices, default=0)
    if m > useful_fraction * horizon or m > horizon - k:
        return None
    return m


def estimate_tail_index(
    terms: Sequence[int],
    c: Sequence[int],
    M: int,
    horizon: int,
    budget: int = DEFAULT_NODE_BUDGET,
    useful_fraction: float = 0.5,
) -> int | None:
    """Smallest tail ``m`` with no violations in ``(m, horizon]``, or ``None``.

    Violations for tail ``m`` are exactly the tuples with ``m_1 > m``, so the
    answer is the largest ``m_1`` over all violations found from tail 0.
    ``None`` means violations reach past ``useful_fraction * horizon`` and
    the window leaves too little room to call the tail clean. Either way the
    result is evidence, not proof.

    Raises :class:`NodeBudgetExceeded` when the search is cut off.
    """
    q = CriterionQuery(tuple(c), M, horizon, 0)
    report = find_violations(terms, q, budget)
    if not report.exhausted:
        raise NodeBudgetExceeded(report)
    return _tail_from_hits((h[0] for h in report.hits), len(q.c), horizon, useful_fraction)


@dataclass(frozen=True)
class SweepCell:
    c: tuple[int, ...]
    M: int
    tail: int | None
    exhausted: bool
    hits: int

    @property
    def status(self) -> str:
        if not self.exhausted:
            return "budget-exceeded"
        return "finite-tail" if self.tail is not None else "no-tail-found"


@dataclass(frozen=True)
class SweepReport:
    cells: tuple[SweepCell, ...]
    horizon: int
    caveat: str = EVIDENCE_CAVEAT

    @property
    def all_finite(self) -> bool:
        return all(cell.status == "finite-tail" for cell in self.cells)

    def absent(self) -> list[SweepCell]:
        return [cell for cell in self.cells if cell.status == "no-tail-found"]


def coefficient_vectors(k_max: int, c_bound: int):
    """Every ordered vector of nonzero coefficients with ``|c_i| <= c_bound`` and length ``<= k_max``.

    Index-ordered sums are not symmetric in ``c``, so permutations are
    distinct queries; each vector is produced once.
    """
    vals = [v for v in range(-c_bound, c_bound + 1) if v]
    for k in range(1, k_max + 1):
        yield from itertools.product(vals, repeat=k)


def criterion_sweep(
    terms: Sequence[int],
    k_max: int,
    c_bound: int,
    m_bound: int,
    horizon: int,
    budget: int = DEFAULT_NODE_BUDGET,
    useful_fraction: float = 0.5,
) -> SweepReport:
    """Tail estimates for every ``(c, M)`` with ``0 < |M| <= m_bound``.

    All ``M`` for one ``c`` come out of a single range search; a budget
    cutoff marks every cell of that ``c`` as not exhausted.
    """
    if min(k_max, c_bound, m_bound, horizon) < 1:
        raise ValueError("all bounds must be >= 1")
    cells = []
    for c in coefficient_vectors(k_max, c_bound):
        if len(c) > horizon:
            continue
        hits, exhausted, _ = _search(terms, c, -m_bound, m_bound, 0, horizon, budget)
        firsts = defaultdict(list)
        for idx, total in hits:
            firsts[total].append(idx[0])
        for M in range(-m_bound, m_bound + 1):
            if M == 0:
                continue
            tail = _tail_from_hits(firsts[M], len(c), horizon, useful_fraction) if exhausted else None
            cells.append(SweepCell(c, M, tail, exhausted, len(firsts[M])))
    return SweepReport(tuple(cells), horizon)


# ---------------------------------------------------------------------------
# universal S-integer sequence


def universal_index(value: int, primes: PrimeSet) -> int:
    """Position of the nonzero S-integer ``value`` in the universal sequence (1-based)."""
    if value == 0:
        raise ValueError("zero does not occur in the universal sequence")
    if factor_over_s(value, primes) is None:
        raise ValueError(f"{value} is not an S-integer over {{{primes}}}")
    rank = count_s_integers(abs(value), primes)
    return 2 * rank if value > 0 else 2 * rank - 1


def tail_embedding(d_terms: Sequence[int], primes: PrimeSet, m: int) -> int | None:
    """Smallest ``k`` (1-based) with every ``d_n``, ``n >= k``, at universal index ``>= m``.

    ``None`` if even the last listed term sits before index ``m``.
    """
    if m < 1:
        raise ValueError("tail index m must be >= 1")
    idx = [universal_index(int(d), primes) for d in d_terms]
    k = None
    for n in range(len(idx), 0, -1):
        if idx[n - 1] < m:
            break
        k = n
    return k
