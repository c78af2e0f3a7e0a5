import itertools
import random
from fractions import Fraction

import pytest

from oracles import is_nondegenerate_bruteforce, nested_loop_solutions
from sunitseq.sinteger import PrimeSet, SUnit, sunit_of, value_of
from sunitseq.unit_equation import (
    S_INTEGERS,
    S_UNITS,
    DecompositionError,
    NotASolution,
    SearchBudgetExceeded,
    Solution,
    UnitEquation,
    decompose,
    is_nondegenerate,
    nondegenerate_solutions,
    parse_solution,
    solve_bounded,
    witness_sets,
)

S23 = PrimeSet((2, 3))


def eq(text):
    return UnitEquation.parse(text)


def sol(text, e):
    return parse_solution(text, e.primes)


def as_values(sols):
    return {tuple(s.values) for s in sols}


def as_keys(sols):
    return {tuple((x.sign, x.exponents) for x in s.coords) for s in sols}


class TestEquation:
    def test_parse_and_str(self):
        e = eq("1, -2,3 = -5 over 2,3")
        assert e.coefficients == (1, -2, 3) and e.rhs == -5 and e.primes == S23
        assert UnitEquation.parse(str(e)) == e

    @pytest.mark.parametrize("bad", ["1,0=1 over 2", "1=0 over 2", "=1 over 2", "1,1=1 over 4", "1,1=1"])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            eq(bad)

    def test_parse_solution_forms(self):
        e = eq("1,1=1 over 2,3")
        assert sol("2^-1 * 3, -1/2", e).values == (Fraction(3, 2), Fraction(-1, 2))
        with pytest.raises(ValueError):
            sol("5,1", e)


class TestNondegenerate:
    def test_paper_family_is_degenerate(self):
        e = eq("1,1,1=1 over 2,3")
        assert not is_nondegenerate(e, sol("4,-4,1", e))

    def test_pair(self):
        e = eq("1,1=1 over 2,3")
        assert is_nondegenerate_bruteforce([3, -2])
        assert is_nondegenerate(e, sol("3,-2", e))

    def test_single(self):
        e = eq("2=4 over 2")
        assert is_nondegenerate(e, sol("2", e))

    def test_rejects_non_solution(self):
        e = eq("1,1=1 over 2,3")
        with pytest.raises(NotASolution):
            is_nondegenerate(e, sol("3,2", e))
        with pytest.raises(NotASolution):
            is_nondegenerate(e, sol("2", e))

    def test_against_bruteforce(self):
        rng = random.Random(7)
        e = eq("1,1,1,1,1=1 over 2,3")
        for s in solve_bounded(eq("1,1,1,1=1 over 2,3"), 1, S_INTEGERS)[:200]:
            # pad to five coordinates with a random x and re-balance via the fourth
            x = SUnit(rng.choice((1, -1)), (rng.randint(0, 2), rng.randint(0, 2)), S23)
            candidate = Solution(s.coords + (x,))
            if e.lhs(candidate.values) != e.rhs:
                continue
            assert is_nondegenerate(e, candidate) == is_nondegenerate_bruteforce(candidate.values)
        for s in solve_bounded(eq("1,1,1=1 over 2,3"), 3, S_INTEGERS):
            assert (not s.degenerate) == is_nondegenerate_bruteforce(s.values)


class TestSolve:
    def test_two_term_s_integers(self):
        got = nondegenerate_solutions(eq("1,1=1 over 2,3"), 12, S_INTEGERS)
        want = {(2, -1), (3, -2), (4, -3), (9, -8), (-1, 2), (-2, 3), (-3, 4), (-8, 9)}
        assert as_values(got) == want
        oracle = nested_loop_solutions((1, 1), 1, (2, 3), 12, integral=True)
        assert as_keys(got) == oracle

    def test_single_term(self):
        got = solve_bounded(eq("2=4 over 2"), 3)
        assert [s.values for s in got] == [(2,)]
        assert got[0].degenerate is False

    @pytest.mark.parametrize("domain", [S_UNITS, S_INTEGERS])
    def test_degenerate_family_present(self, domain):
        e = eq("1,1,1=1 over 2,3")
        got = solve_bounded(e, 4, domain)
        one = SUnit.one(S23)
        fam = {s.coords for s in got if s.coords[2] == one and s.coords[0] == -s.coords[1]}
        lo = -4 if domain == S_UNITS else 0
        expected = {
            (SUnit(sg, ex, S23), SUnit(-sg, ex, S23), one)
            for ex in itertools.product(range(lo, 5), repeat=2)
            for sg in (1, -1)
        }
        assert fam == expected
        assert all(s.degenerate for s in got if s.coords in fam)

    def test_three_term_count_against_oracle(self):
        got = solve_bounded(eq("1,1,1=1 over 2,3"), 4, S_INTEGERS)
        # 318 from the nested-loop oracle
        assert len(got) == 318
        assert as_keys(got) == nested_loop_solutions((1, 1, 1), 1, (2, 3), 4, integral=True)

    @pytest.mark.parametrize(
        "text, E, domain",
        [
            ("3,-2=1 over 2,3", 5, S_UNITS),
            ("1,1=2 over 2,3", 6, S_UNITS),
            ("5=-10 over 2,5", 4, S_UNITS),
            ("1,-1,2=3 over 2,3", 3, S_UNITS),
            ("2,3,-5=7 over 2,3", 4, S_INTEGERS),
            ("1,1,1=6 over 2,3,5", 2, S_UNITS),
            ("1,1,1,1=1 over 2,3", 2, S_INTEGERS),
            ("4=1 over 2", 0, S_UNITS),
        ],
    )
    def test_oracle_equivalence(self, text, E, domain):
        e = eq(text)
        got = solve_bounded(e, E, domain)
        oracle = nested_loop_solutions(e.coefficients, e.rhs, e.primes.primes, E, domain == S_INTEGERS)
        assert as_keys(got) == oracle
        assert len(got) == len(oracle)

    def test_sorted_and_verified(self):
        e = eq("1,-1,1=1 over 2,3")
        got = solve_bounded(e, 3)
        assert [s.texts() for s in got] == sorted(s.texts() for s in got)
        assert all(e.lhs(s.values) == 1 for s in got)

    def test_s_units_beyond_integers(self):
        got = as_values(nondegenerate_solutions(eq("1,1=1 over 2,3"), 2))
        assert (Fraction(1, 2), Fraction(1, 2)) in got
        assert (Fraction(3, 2), Fraction(-1, 2)) in got

    def test_monotone_in_bound(self):
        e = eq("1,1=1 over 2,3")
        prev = set()
        for E in range(0, 7):
            cur = as_keys(nondegenerate_solutions(e, E))
            assert prev <= cur
            prev = cur

    def test_budget_guard(self):
        with pytest.raises(SearchBudgetExceeded):
            solve_bounded(eq("1,1,1=1 over 2,3,5,7"), 40)
        with pytest.raises(SearchBudgetExceeded):
            solve_bounded(eq("1,1=1 over 2,3"), 3, ceiling=(7**4) - 1)
        solve_bounded(eq("1,1=1 over 2,3"), 3, ceiling=7**4)

    def test_bad_args(self):
        with pytest.raises(ValueError):
            solve_bounded(eq("1=1 over 2"), -1)
        with pytest.raises(ValueError):
            solve_bounded(eq("1=1 over 2"), 1, domain="rationals")


class TestDecompose:
    def test_paper_family(self):
        e = eq("1,1,1=1 over 2,3")
        d = decompose(e, sol("4,-4,1", e))
        assert (d.zero_set, d.active_set) == ((0, 1), (2,))
        assert d.residual.values == (1,)

    def test_nondegenerate_input(self):
        e = eq("1,1=1 over 2,3")
        d = decompose(e, sol("9,-8", e))
        assert d.zero_set == () and d.active_set == (0, 1)

    def test_four_terms(self):
        e = eq("1,1,1,1=1 over 2,3")
        d = decompose(e, sol("2,-2,3,-2", e))
        assert (d.zero_set, d.active_set) == ((0, 1), (2, 3))
        assert d.residual.values == (3, -2)

    def test_tie_break_lexicographic(self):
        e = eq("1,1,1,1=1 over 2,3")
        # {1,2} and {2,3} both vanish; no 3-subset does
        d = decompose(e, sol("2,-2,2,-1", e))
        assert d.zero_set == (0, 1)

    def test_prefers_larger_zero_set(self):
        e = eq("1,1,1,1,1=1 over 2,3")
        # {1,2} vanishes; {1,3,4}, {2,3,5}, {2,4,5} are larger and {1,3,4} is first
        d = decompose(e, sol("2,-2,-1,-1,3", e))
        assert d.zero_set == (0, 2, 3)
        assert is_nondegenerate(e.restrict(d.active_set), d.residual)

    def test_rejects_non_solution(self):
        e = eq("1,1,1=1 over 2,3")
        with pytest.raises(NotASolution):
            decompose(e, sol("4,-4,2", e))

    def test_distinct_error_type(self):
        assert not issubclass(DecompositionError, ValueError)

    def test_soundness_on_bounded_solutions(self):
        e = eq("1,-1,1,2=2 over 2,3")
        for s in solve_bounded(e, 1, S_INTEGERS):
            d = decompose(e, s)
            assert sum(e.coefficients[j] * value_of(s.coords[j]) for j in d.zero_set) == 0
            assert e.restrict(d.active_set).lhs(d.residual.values) == e.rhs
            assert is_nondegenerate(e.restrict(d.active_set), d.residual)
            assert (d.zero_set == ()) == (not s.degenerate)


class TestWitness:
    def test_two_term(self):
        ws = witness_sets(eq("1,1=1 over 2,3"), 12, S_INTEGERS)
        v1 = {value_of(x) for x in ws.sets[0]}
        assert {2, 3, 4, 9, -1, -2, -3, -8, 1} <= v1
        assert ws.height_bound == 12

    def test_single(self):
        ws = witness_sets(eq("2=4 over 2"), 3)
        assert {value_of(x) for x in ws.sets[0]} == {2}

    @pytest.mark.parametrize("domain", [S_UNITS, S_INTEGERS])
    def test_covers_degenerate_family(self, domain):
        e = eq("1,1,1=1 over 2,3")
        ws = witness_sets(e, 4, domain)
        assert SUnit.one(S23) in ws.sets[2]
        for s in solve_bounded(e, 4, domain):
            assert ws.covers(s)

    def test_sets_are_built_from_subequations(self):
        e = eq("1,2=3 over 2,3")
        ws = witness_sets(e, 3)
        expect0 = {x.coords[0] for x in nondegenerate_solutions(e, 3)}
        expect0 |= {x.coords[0] for x in nondegenerate_solutions(e.restrict((0,)), 3)}
        expect1 = {x.coords[1] for x in nondegenerate_solutions(e, 3)}
        expect1 |= {x.coords[0] for x in nondegenerate_solutions(e.restrict((1,)), 3)}
        assert ws.sets == (frozenset(expect0), frozenset(expect1))
        assert sunit_of(Fraction(3, 2), S23) in ws.sets[1]
