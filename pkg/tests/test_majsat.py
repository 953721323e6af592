"""Majority-SAT protocol: closed forms, circuit statistics, decisions."""

import math

import numpy as np
import pytest

from lqc import algorithms as alg
from lqc.circuit import MeasurementBasis, MeasurementDirective, exact_outcome_probabilities
from lqc.oracles import CnfFormula, Graph, cnf_predicate, count_satisfying
from lqc.state import LorentzState, Wire, WireKind, WireLayout

SQRT2 = math.sqrt(2.0)


def random_cnf(rng, n) -> CnfFormula:
    n_clauses = int(rng.integers(1, 2 * n + 1))
    clauses = []
    for _ in range(n_clauses):
        width = int(rng.integers(1, min(n, 3) + 1))
        variables = rng.choice(np.arange(1, n + 1), size=width, replace=False)
        clauses.append(tuple(int(v) if rng.random() < 0.5 else -int(v) for v in variables))
    return CnfFormula(n, tuple(clauses))


def aux_state_pminus(s: int, n: int, eta: float) -> float:
    """Independent route: build the auxiliary state explicitly and measure."""
    layout = WireLayout((Wire("aux", WireKind.QUBIT),))
    state = LorentzState(layout, [float(s), eta * ((1 << n) - 2 * s) / SQRT2])
    probs = exact_outcome_probabilities(
        state, MeasurementDirective((0,), MeasurementBasis.X_BASIS)
    )
    return probs[(-1,)]


class TestPminusClosedForm:
    def test_balanced_count_is_half(self):
        for n in (2, 4, 6):
            assert alg.majsat_exact_pminus(1 << (n - 1), n, 3.7) == pytest.approx(0.5)

    def test_majority_always_above_half(self):
        for n in (3, 5):
            for s in range((1 << (n - 1)) + 1, (1 << n) + 1):
                for i in range(-n, n + 1):
                    assert alg.majsat_exact_pminus(s, n, 2.0**i) > 0.5

    def test_minority_never_above_half(self):
        for n in (3, 5):
            for s in range(0, (1 << (n - 1)) + 1):
                for i in range(-n, n + 1):
                    assert alg.majsat_exact_pminus(s, n, 2.0**i) <= 0.5

    def test_matches_measurement_machinery(self):
        for n in range(1, 7):
            for s in range(0, (1 << n) + 1):
                for eta in (0.25, 1.0, 4.0):
                    closed = alg.majsat_exact_pminus(s, n, eta)
                    measured = aux_state_pminus(s, n, eta)
                    assert measured == pytest.approx(closed, abs=1e-9)


class TestMeasurementBudget:
    def test_stated_example(self):
        # delta_p = sqrt(2)/4 makes 4 delta_p^2 = 1/2; epsilon = 1/8 gives 6.
        assert alg.npp_bound(math.sqrt(2) / 4, 1 / 8) == 6

    def test_epsilon_one_gives_zero(self):
        assert alg.npp_bound(0.3, 1.0) == 0

    def test_monotone_in_epsilon(self):
        bounds = [alg.npp_bound(0.25, eps) for eps in (0.5, 0.1, 0.01, 1e-6)]
        assert bounds == sorted(bounds)

    def test_domain_checks(self):
        with pytest.raises(ValueError):
            alg.npp_bound(0.0, 0.5)
        with pytest.raises(ValueError):
            alg.npp_bound(0.6, 0.5)
        with pytest.raises(ValueError):
            alg.npp_bound(0.25, 0.0)


class TestEtaWindow:
    def test_all_satisfying_endpoints(self):
        # s = 2^n at delta_p = sqrt(2)/4: window is exactly (2-sqrt2, 2+sqrt2).
        lo, hi = alg.eta_window(math.sqrt(2) / 4, 1 << 5, 5)
        assert lo == pytest.approx(2 - SQRT2, rel=1e-12)
        assert hi == pytest.approx(2 + SQRT2, rel=1e-12)

    def test_window_guarantees_margin(self):
        delta_p = math.sqrt(2) / 4
        for n in range(1, 11):
            for s in range((1 << (n - 1)) + 1, (1 << n) + 1):
                lo, hi = alg.eta_window(delta_p, s, n)
                grid = [2.0**i for i in range(-n, n + 1)]
                inside = [eta for eta in grid if lo <= eta <= hi]
                assert inside, (n, s)  # the grid always meets the window
                for eta in inside:
                    assert alg.majsat_exact_pminus(s, n, eta) >= 0.5 + delta_p - 1e-12

    def test_window_shrinks_to_point(self):
        widths = [
            hi - lo
            for lo, hi in (
                alg.eta_window(dp, 1 << 4, 4) for dp in (0.49, 0.4999, 0.499999)
            )
        ]
        assert widths == sorted(widths, reverse=True)
        assert widths[-1] < 1e-2

    def test_undefined_below_majority(self):
        with pytest.raises(ValueError, match="undefined"):
            alg.eta_window(0.3, 8, 4)


class TestCircuitStatistics:
    def test_oracle_coefficients_after_isolation(self, rng):
        # The read-out blocks are proportional to (s, (N-2s)/sqrt(2)).
        for n in (2, 3, 4):
            f = random_cnf(rng, n)
            s = count_satisfying(cnf_predicate(f))
            r = alg.default_repetitions(n, alg.CHI_CV)
            u, v = alg.majsat_readout_blocks(f, r, r)
            target = np.array([float(s), ((1 << n) - 2 * s) / SQRT2])
            got = np.array([u, v])
            if np.linalg.norm(target) == 0:
                continue
            cos = np.dot(got, target) / (
                np.linalg.norm(got) * np.linalg.norm(target)
            )
            assert abs(cos) == pytest.approx(1.0, abs=1e-9)

    def test_full_run_matches_closed_forms(self, rng):
        for n in (2, 3):
            f = random_cnf(rng, n)
            s = count_satisfying(cnf_predicate(f))
            r = alg.default_repetitions(n, alg.CHI_CV)
            for i in (-n, 0, n):
                eta = 2.0**i
                run = alg.run_majsat_eta(f, eta, r, r)
                assert run.p_minus_branch == pytest.approx(
                    alg.majsat_exact_pminus(s, n, eta), abs=1e-9
                )
                # The unconditional protocol statistic is close but not
                # exact: the unisolated work branches contribute.
                assert run.p_minus_protocol == pytest.approx(
                    run.p_minus_branch, abs=1e-2
                )

    def test_reference_factor_simulations(self):
        chi = alg.CHI_CV
        for n, r in ((2, 2), (3, 4), (4, 3)):
            assert alg.collapse_reference_probability(n, r, chi) == pytest.approx(
                alg.collapse_factor(n, r, chi), rel=1e-12
            )
        for s, n, eta in ((3, 2, 0.5), (5, 3, 1.0), (11, 4, 8.0)):
            rp = alg.default_repetitions(n, chi)
            prob, aux = alg.branch_reference_probability(s, n, eta, rp, chi)
            assert prob == pytest.approx(
                alg.branch_factor(s, n, eta, rp, chi), rel=1e-12
            )
            # The branch auxiliary state reproduces the closed-form minus
            # probability.
            pm = (aux[0] - aux[1]) ** 2 / 2.0
            assert pm == pytest.approx(alg.majsat_exact_pminus(s, n, eta), abs=1e-12)


class TestDecision:
    def test_tautology_accepted(self):
        verdict = alg.majsat_decide(CnfFormula(4, ((1, -1),)))
        assert verdict.accepted and verdict.s_true == 16

    def test_unsatisfiable_rejected(self):
        verdict = alg.majsat_decide(CnfFormula(3, ((1,), (-1,))))
        assert not verdict.accepted and verdict.s_true == 0

    def test_exact_half_rejected(self):
        # Single positive literal: s = 2^(n-1), strictly-greater test fails.
        verdict = alg.majsat_decide(CnfFormula(3, ((1,),)))
        assert not verdict.accepted and verdict.s_true == 4

    def test_acceptance_invariant(self, rng):
        for _ in range(6):
            f = random_cnf(rng, 4)
            verdict = alg.majsat_decide(f)
            assert verdict.accepted == any(
                v == 4 for v in verdict.per_eta.values()
            )
            assert verdict.accepted == (verdict.s_true > 8)

    def test_montecarlo_mode_on_clear_instances(self):
        cfg = alg.MajsatConfig(mode="montecarlo", seed=11)
        assert alg.majsat_decide(CnfFormula(4, ((1, -1),)), cfg).accepted
        assert not alg.majsat_decide(CnfFormula(4, ((1,), (-1,))), cfg).accepted

    def test_montecarlo_deterministic_given_seed(self):
        f = CnfFormula(3, ((1, 2), (-2, 3)))
        cfg = alg.MajsatConfig(mode="montecarlo", seed=5)
        v1 = alg.majsat_decide(f, cfg)
        v2 = alg.majsat_decide(f, cfg)
        assert v1.per_eta == v2.per_eta and v1.accepted == v2.accepted

    def test_config_validation(self):
        with pytest.raises(ValueError):
            alg.MajsatConfig(delta_p=0.9)
        with pytest.raises(ValueError):
            alg.MajsatConfig(c=1.0)
        with pytest.raises(ValueError):
            alg.MajsatConfig(mode="guess")


class TestKIsCounting:
    PATH3 = Graph.from_edges(3, [(0, 1), (1, 2)])

    def test_path_graph_counts(self):
        counts = [alg.sharp_k_is(self.PATH3, k) for k in range(4)]
        assert counts == [1, 3, 1, 0]

    def test_max_k(self):
        k_star, counts = alg.max_k_is(self.PATH3)
        assert (k_star, counts) == (1, [1, 3, 1, 0])

    def test_anchor_counts(self, rng):
        for _ in range(4):
            n = int(rng.integers(2, 5))
            pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
            keep = [p for p in pairs if rng.random() < 0.4]
            g = Graph.from_edges(n, keep)
            assert alg.sharp_k_is(g, 0) == 1
            assert alg.sharp_k_is(g, 1) == n

    def test_tie_break_smallest_k(self):
        # Single vertex: counts (1, 1) tie; smallest k wins.
        g = Graph.from_edges(1, [])
        k_star, counts = alg.max_k_is(g)
        assert counts == [1, 1]
        assert k_star == 0
