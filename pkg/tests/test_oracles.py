"""Predicates, the comparator expression, composition, and DIMACS parsing."""

import itertools
import math

import numpy as np
import pytest

from conftest import make_layout
from lqc.circuit import Circuit, execute
from lqc.errors import FormatError
from lqc.gates import Gate, GateKind, apply
from lqc.oracles import (
    CnfFormula,
    Graph,
    Predicate,
    build_F,
    build_gz_expression,
    cnf_predicate,
    constant_predicate,
    count_satisfying,
    g_z,
    independent_set_predicate,
    is_independent_set,
    k_is_predicate,
    less_than_predicate,
    oracle_gate,
    parse_dimacs_cnf,
    parse_dimacs_graph,
)
from lqc.state import LorentzState

TRIANGLE = Graph.from_edges(3, [(0, 1), (0, 2), (1, 2)])
PATH3 = Graph.from_edges(3, [(0, 1), (1, 2)])


class TestGraph:
    def test_self_loop_rejected(self):
        with pytest.raises(ValueError, match="self-loop"):
            Graph.from_edges(3, [(1, 1)])

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError, match="outside"):
            Graph.from_edges(2, [(0, 2)])

    def test_duplicate_edges_normalized(self):
        g = Graph.from_edges(3, [(0, 1), (1, 0)])
        assert g.m == 1


class TestIndependentSet:
    def test_triangle_cases(self):
        assert is_independent_set(TRIANGLE, "100")
        assert not is_independent_set(TRIANGLE, "110")

    def test_path_graph_against_enumeration(self):
        # Brute-force oracle: check every subset against the edge rule.
        for bits in itertools.product("01", repeat=3):
            x = "".join(bits)
            expected = not any(
                x[u] == "1" and x[v] == "1" for u, v in PATH3.edges
            )
            assert is_independent_set(PATH3, x) == expected
        assert is_independent_set(PATH3, "101")

    def test_width_mismatch(self):
        with pytest.raises(ValueError, match="width"):
            is_independent_set(PATH3, "10")


class TestKIs:
    def test_k_zero_only_empty_set(self):
        pred = k_is_predicate(TRIANGLE, 0)
        assert count_satisfying(pred) == 1
        assert pred("000")

    def test_k_one_on_edgeless(self):
        g = Graph.from_edges(4, [])
        pred = k_is_predicate(g, 1)
        assert count_satisfying(pred) == 4

    def test_path_graph_k2(self):
        pred = k_is_predicate(PATH3, 2)
        sats = [x for x in range(8) if pred(x)]
        assert sats == [0b101]

    def test_k_out_of_range(self):
        with pytest.raises(ValueError):
            k_is_predicate(PATH3, 4)


class TestComparator:
    def test_appendix_style_example(self):
        # z = 10101001 over 8 variables: terms x1; x2,x3; x2,x4,x5;
        # x2,x4,x6,x7,x8 (all negated).
        expr = build_gz_expression(0b10101001, 8)
        assert expr.terms == ((1,), (2, 3), (2, 4, 5), (2, 4, 6, 7, 8))
        assert expr.to_string() == (
            "~x1 | (~x2 & ~x3) | (~x2 & ~x4 & ~x5) | (~x2 & ~x4 & ~x6 & ~x7 & ~x8)"
        )

    def test_z_zero_constant_false(self):
        expr = build_gz_expression(0, 4)
        assert expr.constant is False
        assert not g_z(0, "0000")

    def test_z_full_constant_true(self):
        expr = build_gz_expression(16, 4)
        assert expr.constant is True

    def test_exhaustive_equivalence_and_size(self):
        # Expression evaluation == integer comparison for all n <= 8.
        # The literal count stays below n^2 (it ties n^2 only at n = 1).
        for n in range(1, 9):
            for z in range(0, (1 << n) + 1):
                expr = build_gz_expression(z, n)
                if expr.constant is None:
                    bound = n * n if n > 1 else n * n + 1
                    assert expr.size() < bound
                pred = less_than_predicate(z, n)
                for x in range(1 << n):
                    bits = format(x, f"0{n}b")
                    expected = x < z
                    assert expr.evaluate(bits) == expected
                    assert pred(x) == expected
                    assert g_z(z, bits) == expected


class TestBuildF:
    def test_switch_arithmetic_constants(self):
        f = constant_predicate(3, False)
        g = constant_predicate(3, True)
        assert count_satisfying(build_F(f, g)) == 8

    def test_switch_branch_isolation(self):
        # x0 = 1 evaluates the first predicate only.
        f = less_than_predicate(3, 3)
        g = constant_predicate(3, True)
        combined = build_F(f, g)
        for x in range(8):
            assert combined((1 << 3) | x) == f(x)
            assert combined(x) == g(x)

    def test_count_additivity_random(self, rng):
        for _ in range(25):
            n = int(rng.integers(1, 7))
            ta = rng.random(1 << n) < 0.5
            tb = rng.random(1 << n) < 0.5
            a = Predicate(n, lambda t=ta: t, "a")
            b = Predicate(n, lambda t=tb: t, "b")
            assert count_satisfying(build_F(a, b)) == count_satisfying(
                a
            ) + count_satisfying(b)

    def test_width_mismatch(self):
        with pytest.raises(ValueError, match="width"):
            build_F(constant_predicate(2, True), constant_predicate(3, True))


class TestOracleGate:
    def test_constant_false_is_identity(self, rng):
        layout = make_layout("qqq")
        gate = oracle_gate(constant_predicate(2, False), (0, 1), 2)
        amps = rng.normal(size=8) + 1j * rng.normal(size=8)
        state = LorentzState(layout, amps.copy())
        apply(state, gate)
        assert np.array_equal(state.amps, amps)

    def test_marks_satisfying_states(self):
        # Uniform superposition + oracle: satisfying strings carry the
        # oracle bit.
        g = PATH3
        layout = make_layout("qqqq")
        gates = [Gate(GateKind.HADAMARD_Q, (w,)) for w in range(3)]
        gates.append(oracle_gate(independent_set_predicate(g), (0, 1, 2), 3))
        final = execute(Circuit(layout, tuple(gates)))
        for x in range(8):
            bits = format(x, "03b")
            sat = is_independent_set(g, bits)
            assert abs(final.amps[(x << 1) | 1]) > 0 if sat else abs(
                final.amps[x << 1]
            ) > 0

    def test_preserves_euclidean_norm(self, rng):
        layout = make_layout("qqq")
        gate = oracle_gate(less_than_predicate(2, 2), (0, 1), 2)
        amps = rng.normal(size=8) + 1j * rng.normal(size=8)
        state = LorentzState(layout, amps.copy())
        apply(state, gate)
        assert np.linalg.norm(state.amps) == pytest.approx(
            np.linalg.norm(amps), rel=1e-15
        )

    def test_wire_kind_violation(self):
        layout = make_layout("qqh")
        gate = oracle_gate(constant_predicate(1, True), (0,), 2)
        with pytest.raises(ValueError, match="qubit"):
            Circuit(layout, (gate,))


class TestCounting:
    def test_triangle_independent_sets(self):
        assert count_satisfying(independent_set_predicate(TRIANGLE)) == 4

    def test_tautology(self):
        assert count_satisfying(constant_predicate(3, True)) == 8

    def test_two_variable_clause(self):
        f = CnfFormula(2, ((1, 2),))
        assert count_satisfying(cnf_predicate(f)) == 3

    def test_cnf_evaluation_truth_table(self):
        f = CnfFormula(3, ((1, -2), (2, 3)))
        pred = cnf_predicate(f)
        for x in range(8):
            bits = format(x, "03b")
            x1, x2, x3 = (c == "1" for c in bits)
            expected = (x1 or not x2) and (x2 or x3)
            assert pred(x) == expected == f.evaluate(x)

    def test_width_cap(self):
        with pytest.raises(ValueError, match="cap"):
            count_satisfying(constant_predicate(25, True))


class TestDimacsGraph:
    GOOD = "c a comment\np edge 3 2\ne 1 2\ne 2 3\n"

    def test_parse_valid(self):
        g = parse_dimacs_graph(self.GOOD)
        assert g.n == 3 and g.edges == frozenset({(0, 1), (1, 2)})

    def test_header_errors_carry_line_numbers(self):
        with pytest.raises(FormatError, match="line 2"):
            parse_dimacs_graph("c x\np edge three 2\ne 1 2\n")
        with pytest.raises(FormatError, match="line 1"):
            parse_dimacs_graph("e 1 2\n")
        with pytest.raises(FormatError, match="missing"):
            parse_dimacs_graph("c nothing here\n")

    def test_edge_errors(self):
        with pytest.raises(FormatError, match="line 3"):
            parse_dimacs_graph("c\np edge 2 1\ne 1 5\n")
        with pytest.raises(FormatError, match="self-loop"):
            parse_dimacs_graph("p edge 2 1\ne 1 1\n")

    def test_count_mismatch(self):
        with pytest.raises(FormatError, match="declares"):
            parse_dimacs_graph("p edge 3 5\ne 1 2\n")


class TestDimacsCnf:
    GOOD = "c test\np cnf 3 2\n1 -2 0\n2 3 0\n"

    def test_parse_valid(self):
        f = parse_dimacs_cnf(self.GOOD)
        assert f.n_vars == 3
        assert f.clauses == ((1, -2), (2, 3))

    def test_multiline_clause(self):
        f = parse_dimacs_cnf("p cnf 3 1\n1 2\n3 0\n")
        assert f.clauses == ((1, 2, 3),)

    def test_header_errors(self):
        with pytest.raises(FormatError, match="line 1"):
            parse_dimacs_cnf("p cnf x 2\n1 0\n")
        with pytest.raises(FormatError, match="line 1"):
            parse_dimacs_cnf("1 2 0\n")

    def test_literal_out_of_range(self):
        with pytest.raises(FormatError, match="line 2"):
            parse_dimacs_cnf("p cnf 2 1\n1 7 0\n")

    def test_unterminated_clause(self):
        with pytest.raises(FormatError, match="unterminated"):
            parse_dimacs_cnf("p cnf 2 1\n1 2\n")

    def test_empty_clause(self):
        with pytest.raises(FormatError, match="empty clause"):
            parse_dimacs_cnf("p cnf 2 1\n0\n")
