"""Algorithm suite built on hyperbolic amplitude amplification.

The common engine is the Q operation: one layer of controlled hyperbolic
rotations per work qubit, all targeting a shared hybit.  A basis state
with m set work bits has its observable amplitude multiplied by
cosh(m*r*chi) after r repetitions, which lets a circuit sort basis states
by population count with unbounded contrast.  On top of Q this module
implements:

* maximum independent set search with its closed-form success probability,
* the majority-SAT decision protocol (auxiliary-qubit x-basis statistics
  over a geometric eta grid), with closed-form companions for the
  auxiliary state, its minus-outcome probability, the measurement budget,
  and the eta window that guarantees a detection margin,
* exact k-vertex independent-set counting by binary descent on a
  comparator threshold, and the arg-max over k,
* postselection (forcing the marked branch of a superposition) and the
  relative "largest population count wins" selection.

Closed-form probabilities are evaluated in the log domain where the
hyperbolic factors overflow doubles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .circuit import (
    Circuit,
    MeasurementBasis,
    MeasurementDirective,
    execute,
    exact_outcome_probabilities,
    make_rng,
    outcome_chain_probabilities,
)
from .errors import PostselectionFailedError
from .gates import CHI_CCV, CHI_CV, Gate, GateKind
from .oracles import (
    CnfFormula,
    Graph,
    Predicate,
    build_F,
    cnf_predicate,
    count_satisfying,
    independent_set_predicate,
    k_is_predicate,
    less_than_predicate,
    oracle_gate,
)
from .state import LorentzState, Wire, WireKind, WireLayout, WireRole

#: Largest detection margin the eta-grid guarantee covers.
DELTA_P_MAX = math.sqrt(2.0) / 4.0

LN2 = math.log(2.0)


def default_repetitions(n_bits: int, chi: float) -> int:
    """Repetition count for amplification over 2**n_bits states.

    ceil(ln(N)/chi) plus a margin of 2, which suppresses sub-leading
    amplitudes to at most exp(-4*chi) of the leading one.
    """
    return math.ceil(n_bits * LN2 / chi) + 2


def _log_cosh(a: float) -> float:
    a = abs(a)
    return a + math.log1p(math.exp(-2.0 * a)) - LN2


def _logsumexp(terms: list[float]) -> float:
    m = max(terms)
    return m + math.log(sum(math.exp(t - m) for t in terms))


# ---------------------------------------------------------------------------
# layouts and the Q operation


def mis_layout(n: int) -> WireLayout:
    """n work qubits, oracle qubit, hybit (in index order, work is MSB)."""
    wires = [Wire(f"x{i + 1}", WireKind.QUBIT, WireRole.WORK) for i in range(n)]
    wires.append(Wire("oracle", WireKind.QUBIT, WireRole.ORACLE))
    wires.append(Wire("hybit", WireKind.HYBIT, WireRole.PLAIN))
    return WireLayout(wires)


def majsat_layout(n: int) -> WireLayout:
    wires = [Wire(f"x{i + 1}", WireKind.QUBIT, WireRole.WORK) for i in range(n)]
    wires.append(Wire("oracle", WireKind.QUBIT, WireRole.ORACLE))
    wires.append(Wire("hybit", WireKind.HYBIT, WireRole.PLAIN))
    wires.append(Wire("aux", WireKind.QUBIT, WireRole.AUXILIARY))
    return WireLayout(wires)


def postselect_layout(n: int) -> WireLayout:
    """Oracle qubit first, then n work qubits, then the hybit."""
    wires = [Wire("oracle", WireKind.QUBIT, WireRole.ORACLE)]
    wires += [Wire(f"x{i + 1}", WireKind.QUBIT, WireRole.WORK) for i in range(n)]
    wires.append(Wire("hybit", WireKind.HYBIT, WireRole.PLAIN))
    return WireLayout(wires)


def q_operation(
    work_wires: tuple[int, ...],
    hybit_wire: int,
    r: int,
    chi: float,
    oracle_wire: int | None = None,
) -> list[Gate]:
    """r repetitions of one controlled rotation per work qubit.

    With ``oracle_wire`` set, each rotation is doubly controlled on
    (oracle, work qubit); without it each degenerates to a singly
    controlled rotation.  On a basis state with m set work bits (and the
    oracle set, when used) the observable hybit amplitude gains a factor
    cosh(m*r*chi).
    """
    out = []
    for _ in range(r):
        for w in work_wires:
            if oracle_wire is None:
                out.append(Gate(GateKind.CV, (w, hybit_wire), chi=chi))
            else:
                out.append(Gate(GateKind.CCV, (oracle_wire, w, hybit_wire), chi=chi))
    return out


# ---------------------------------------------------------------------------
# independent-set census (brute-force companion)


@dataclass(frozen=True)
class IsCensus:
    """Exhaustive independent-set counts of a graph."""

    n: int
    n_states: int
    n_is: int
    n_mis: int
    m_size: int
    counts: tuple[int, ...]  # counts[k] = number of k-vertex independent sets
    mis_strings: tuple[str, ...]


def is_census(g: Graph) -> IsCensus:
    table = independent_set_predicate(g).truth_table()
    idx = np.arange(1 << g.n, dtype=np.int64)
    pop = np.bitwise_count(idx)
    counts = np.bincount(pop[table], minlength=g.n + 1)
    m_size = int(np.max(pop[table]))
    mis_values = idx[table & (pop == m_size)]
    mis_strings = tuple(format(int(v), f"0{g.n}b") for v in mis_values)
    return IsCensus(
        n=g.n,
        n_states=1 << g.n,
        n_is=int(np.count_nonzero(table)),
        n_mis=int(counts[m_size]),
        m_size=m_size,
        counts=tuple(int(c) for c in counts),
        mis_strings=mis_strings,
    )


# ---------------------------------------------------------------------------
# maximum independent set


def mis_circuit(g: Graph, r: int, chi: float = CHI_CCV) -> Circuit:
    """Uniform superposition, marking oracle, Q^r, then measurement."""
    n = g.n
    layout = mis_layout(n)
    work = tuple(range(n))
    oracle, hybit = n, n + 1
    gates = [Gate(GateKind.HADAMARD_Q, (w,)) for w in work]
    gates.append(oracle_gate(independent_set_predicate(g), work, oracle))
    gates += q_operation(work, hybit, r, chi, oracle_wire=oracle)
    directives = (
        MeasurementDirective((oracle, hybit)),
        MeasurementDirective(work),
    )
    return Circuit(layout, tuple(gates), directives)


def mis_closed_form_probability(census: IsCensus, r: int, chi: float) -> float:
    """Probability that the measured work register shows a maximum IS.

    Log-domain evaluation of
    n_mis * cosh^2(M r chi) / (N - n_is + sum_k counts[k] cosh^2(k r chi)).
    """
    terms = []
    if census.n_states > census.n_is:
        terms.append(math.log(census.n_states - census.n_is))
    for k, ck in enumerate(census.counts):
        if ck:
            terms.append(math.log(ck) + 2.0 * _log_cosh(k * r * chi))
    log_z = _logsumexp(terms)
    return math.exp(
        math.log(census.n_mis) + 2.0 * _log_cosh(census.m_size * r * chi) - log_z
    )


@dataclass
class MisReport:
    n: int
    m_edges: int
    r: int
    chi: float
    most_probable: str
    probability_simulated: float
    probability_closed_form: float
    n_is: int
    n_mis: int
    m_size: int
    counts: tuple[int, ...]
    work_distribution: dict[str, float]
    mis_strings: tuple[str, ...]
    observable_weight: float
    log_scale: float


def run_mis(g: Graph, r: int | None = None, chi: float = CHI_CCV) -> MisReport:
    """Simulate the search circuit and pair it with the closed form."""
    census = is_census(g)
    if r is None:
        r = default_repetitions(g.n, chi)
    final = execute(mis_circuit(g, r, chi))
    dist = final.observable_distribution()
    # Qubit outcome strings are work bits followed by the oracle bit;
    # marginalize the oracle.
    work_dist: dict[str, float] = {}
    for key, p in dist.entries.items():
        work_dist[key[:-1]] = work_dist.get(key[:-1], 0.0) + p
    p_sim = sum(work_dist.get(s, 0.0) for s in census.mis_strings)
    best = max(sorted(work_dist), key=lambda s: work_dist[s])
    return MisReport(
        n=g.n,
        m_edges=g.m,
        r=r,
        chi=chi,
        most_probable=best,
        probability_simulated=p_sim,
        probability_closed_form=mis_closed_form_probability(census, r, chi),
        n_is=census.n_is,
        n_mis=census.n_mis,
        m_size=census.m_size,
        counts=census.counts,
        work_distribution=work_dist,
        mis_strings=census.mis_strings,
        observable_weight=dist.observable_weight,
        log_scale=dist.log_scale,
    )


def mis_subset_decision(report: MisReport, subset: str, rel_tol: float = 1e-6) -> bool:
    """Accept iff ``subset`` is among the top-probability outcomes.

    Co-maximal outcomes (multiple maximum independent sets) are accepted
    when their probability is within ``rel_tol`` of the maximum.
    """
    if len(subset) != report.n:
        raise ValueError(f"subset width {len(subset)} != {report.n}")
    top = max(report.work_distribution.values())
    return report.work_distribution.get(subset, 0.0) >= (1.0 - rel_tol) * top


# ---------------------------------------------------------------------------
# majority-SAT closed forms


def majsat_exact_pminus(s: int, n: int, eta: float) -> float:
    """Probability of x-basis outcome -1 on the auxiliary state.

    The auxiliary state carries the satisfying count s as
    s|0> + eta*sqrt(1/2)*(2^n - 2s)|1> (unnormalized); the minus-outcome
    probability exceeds 1/2 exactly when s > 2^(n-1).
    """
    if not 0 <= s <= (1 << n):
        raise ValueError(f"s={s} outside 0..2^{n}")
    if eta <= 0:
        raise ValueError("eta must be positive")
    d = 2.0 * s - float(1 << n)
    return 0.5 + math.sqrt(2.0) * eta * s * d / (2.0 * s * s + eta * eta * d * d)


def npp_bound(delta_p: float, epsilon: float) -> int:
    """Smallest measurement count per set meeting the failure budget.

    N >= 2*log(epsilon)/log(1 - 4*delta_p^2); both logs are negative.
    """
    if not 0.0 < delta_p < 0.5:
        raise ValueError("delta_p must lie in (0, 1/2)")
    if not 0.0 < epsilon <= 1.0:
        raise ValueError("epsilon must lie in (0, 1]")
    if epsilon == 1.0:
        return 0
    bound = 2.0 * math.log(epsilon) / math.log(1.0 - 4.0 * delta_p * delta_p)
    return math.ceil(bound - 1e-12)


def eta_window(delta_p: float, s: int, n: int) -> tuple[float, float]:
    """Interval of eta over which the minus-outcome margin is >= delta_p.

    Defined only for majority instances (s > 2^(n-1)); the window scales
    as s/(2s - 2^n) and its endpoint ratio depends on delta_p alone.
    """
    if not 0.0 < delta_p < 0.5:
        raise ValueError("delta_p must lie in (0, 1/2)")
    if s <= (1 << (n - 1)):
        raise ValueError("window undefined: s <= 2^(n-1)")
    d = 2.0 * s - float(1 << n)
    root = math.sqrt(1.0 - 4.0 * delta_p * delta_p)
    lo = (1.0 - root) * s / (math.sqrt(2.0) * delta_p * d)
    hi = (1.0 + root) * s / (math.sqrt(2.0) * delta_p * d)
    return lo, hi


def collapse_factor(n: int, r: int, chi: float) -> float:
    """Work-register collapse probability of the reference amplification model.

    One marked basis state holding two set bits is amplified against
    2^n - 1 unit-weight competitors: cosh^2(2 r chi) / (2^n - 1 + cosh^2).
    """
    c2 = 2.0 * _log_cosh(2.0 * r * chi)
    terms = [c2]
    if n >= 1:
        terms.append(math.log((1 << n) - 1))
    return math.exp(c2 - _logsumexp(terms))


def branch_factor(s: int, n: int, eta: float, r_prime: int, chi: float) -> float:
    """Oracle-branch selection probability after the controlled-H mixing.

    Exact conditional probability of finding (oracle=1, hybit=0) when the
    oracle qubit holds (2^n - s, s) coefficients, the auxiliary qubit is
    alpha|0> + beta|1> with eta = beta/alpha, and the marked branch is
    amplified by cosh(r' chi).
    """
    big_n = float(1 << n)
    yes = s * s + eta * eta * (big_n - 2.0 * s) ** 2 / 2.0
    no = (big_n - s) ** 2 + eta * eta * big_n * big_n / 2.0
    log_yes = 2.0 * _log_cosh(r_prime * chi) + math.log(yes)
    return math.exp(log_yes - _logsumexp([log_yes, math.log(no)]))


def appendix_branch_probability(
    s: int, n: int, eta: float, r: int, r_prime: int, chi: float
) -> float:
    """Closed-form probability of landing in the read-out branch.

    Product of the work-register collapse factor and the oracle-branch
    selection factor.
    """
    return collapse_factor(n, r, chi) * branch_factor(s, n, eta, r_prime, chi)


def collapse_reference_probability(n: int, r: int, chi: float) -> float:
    """Simulate the model the collapse factor describes.

    Uniform superposition over 2^n work states, a single marked state
    with two set bits, Q^r with the oracle control: the probability of
    reading the marked state is exactly cosh^2(2 r chi) over
    2^n - 1 + cosh^2(2 r chi).
    """
    if n < 2:
        raise ValueError("model needs a two-bit marked state")
    layout = mis_layout(n)
    work, oracle, hybit = tuple(range(n)), n, n + 1
    marked = 3  # any value with two set bits
    pred = Predicate(
        n,
        lambda: np.arange(1 << n, dtype=np.int64) == marked,
        "single-marked",
    )
    gates = [Gate(GateKind.HADAMARD_Q, (w,)) for w in work]
    gates.append(oracle_gate(pred, work, oracle))
    gates += q_operation(work, hybit, r, chi, oracle_wire=oracle)
    final = execute(Circuit(layout, tuple(gates)))
    dist = final.observable_distribution()
    target = format(marked, f"0{n}b")
    return sum(p for key, p in dist.entries.items() if key[:-1] == target)


def branch_reference_probability(
    s: int, n: int, eta: float, r_prime: int, chi: float
) -> tuple[float, tuple[float, float]]:
    """Simulate the idealized oracle/hybit/auxiliary read-out stage.

    Starting from the collapsed state -- oracle qubit holding the
    (2^n - s, s) coefficients, hybit |0), auxiliary (|0> + eta|1>)/norm --
    apply the controlled Hadamard and r' controlled rotations, then
    return P(oracle=1, hybit observable) together with the normalized
    auxiliary amplitudes on that branch.
    """
    layout = WireLayout(
        (
            Wire("oracle", WireKind.QUBIT, WireRole.ORACLE),
            Wire("hybit", WireKind.HYBIT),
            Wire("aux", WireKind.QUBIT, WireRole.AUXILIARY),
        )
    )
    big_n = 1 << n
    norm_o = math.hypot(big_n - s, s)
    norm_a = math.hypot(1.0, eta)
    a_s, b_s = (big_n - s) / norm_o, s / norm_o
    alpha, beta = 1.0 / norm_a, eta / norm_a
    amps = np.zeros(layout.dim, dtype=np.complex128)
    amps[0b000] = a_s * alpha
    amps[0b001] = a_s * beta
    amps[0b100] = b_s * alpha
    amps[0b101] = b_s * beta
    state = LorentzState(layout, amps)
    gates = [Gate(GateKind.CONTROLLED_H, (2, 0))]
    gates += [Gate(GateKind.CV, (0, 1), chi=chi) for _ in range(r_prime)]
    final = execute(Circuit(layout, tuple(gates)), state)
    probs = exact_outcome_probabilities(final, MeasurementDirective((0, 1)))
    c0, c1 = final.amps[0b100].real, final.amps[0b101].real
    norm = math.hypot(c0, c1)
    aux = (c0 / norm, c1 / norm) if norm > 0 else (math.nan, math.nan)
    return probs[(1, 0)], aux


# ---------------------------------------------------------------------------
# majority-SAT circuit and evaluation


def as_predicate(f: "CnfFormula | Predicate") -> Predicate:
    return cnf_predicate(f) if isinstance(f, CnfFormula) else f


def majsat_circuit(
    p: "CnfFormula | Predicate",
    eta: float,
    r: int,
    r_prime: int,
    chi: float = CHI_CV,
) -> Circuit:
    """Decision circuit; pair with :func:`majsat_initial_state`.

    Work register in uniform superposition, marking oracle, a Hadamard
    plus bit-flip layer (so the all-ones work state aggregates the
    satisfying count on the oracle qubit), Q^r without the oracle
    control, a controlled Hadamard from the auxiliary qubit onto the
    oracle qubit, and r' controlled rotations from the oracle onto the
    hybit.  Measurements: (oracle, hybit), then the auxiliary qubit along
    x.
    """
    pred = as_predicate(p)
    n = pred.n
    layout = majsat_layout(n)
    work = tuple(range(n))
    oracle, hybit, aux = n, n + 1, n + 2
    gates = [Gate(GateKind.HADAMARD_Q, (w,)) for w in work]
    gates.append(oracle_gate(pred, work, oracle))
    gates += [Gate(GateKind.HADAMARD_Q, (w,)) for w in work]
    gates += [Gate(GateKind.SIGMA_X, (w,)) for w in work]
    gates += q_operation(work, hybit, r, chi, oracle_wire=None)
    gates.append(Gate(GateKind.CONTROLLED_H, (aux, oracle)))
    gates += [Gate(GateKind.CV, (oracle, hybit), chi=chi) for _ in range(r_prime)]
    directives = (
        MeasurementDirective((oracle, hybit)),
        MeasurementDirective((aux,), MeasurementBasis.X_BASIS),
    )
    return Circuit(layout, tuple(gates), directives)


def majsat_initial_state(layout: WireLayout, eta: float) -> LorentzState:
    """All wires at zero except the auxiliary qubit in (|0> + eta|1>)/norm."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    norm = math.sqrt(1.0 + eta * eta)
    state = LorentzState.zeros_state(layout)
    state.amps[0] = 1.0 / norm
    state.amps[1] = eta / norm  # auxiliary wire is the least significant bit
    return state


@dataclass
class MajsatEtaRun:
    """Exact quantities of one full-circuit evaluation at a fixed eta."""

    eta: float
    p_minus_branch: float  # aux minus-probability on the read-out branch
    p_minus_protocol: float  # unconditional aux minus-probability
    branch_probability: float  # P(work all-ones, oracle=1, hybit observable)
    aux_pair: tuple[float, float]  # read-out branch amplitudes (aux=0, aux=1)


def _readout_indices(layout: WireLayout) -> tuple[int, int]:
    """Indices of (work all-ones, oracle=1, hybit=0, aux=0/1)."""
    n = layout.n_wires - 3
    base = ((((1 << n) - 1) << 1 | 1) << 1) << 1  # work ones, oracle 1, hybit 0
    return base, base + 1


def run_majsat_eta(
    p: "CnfFormula | Predicate",
    eta: float,
    r: int,
    r_prime: int,
    chi: float = CHI_CV,
) -> MajsatEtaRun:
    """Simulate the full circuit once and extract exact statistics."""
    pred = as_predicate(p)
    circuit = majsat_circuit(pred, eta, r, r_prime, chi)
    final = execute(circuit, majsat_initial_state(circuit.layout, eta))
    i0, i1 = _readout_indices(circuit.layout)
    c0, c1 = complex(final.amps[i0]), complex(final.amps[i1])
    branch_w = abs(c0) ** 2 + abs(c1) ** 2
    total_obs = final.observable_weight()
    p_minus_branch = (
        abs(c0 - c1) ** 2 / (2.0 * branch_w) if branch_w > 0.0 else math.nan
    )
    # Unconditional protocol statistics: measure (oracle, hybit) then aux.
    chain = outcome_chain_probabilities(circuit, majsat_initial_state(circuit.layout, eta))
    p_minus_protocol = sum(v for k, v in chain.items() if k.endswith("-"))
    return MajsatEtaRun(
        eta=eta,
        p_minus_branch=p_minus_branch,
        p_minus_protocol=p_minus_protocol,
        branch_probability=branch_w / total_obs,
        aux_pair=(c0.real, c1.real),
    )


def majsat_readout_blocks(
    p: "CnfFormula | Predicate", r: int, r_prime: int, chi: float = CHI_CV
) -> tuple[float, float]:
    """Per-block read-out amplitudes (u, v) from a single reference run.

    No gate mixes the auxiliary-qubit blocks (the auxiliary only ever
    controls), so the read-out amplitudes for an arbitrary auxiliary
    superposition alpha|0> + beta|1> are (alpha*u, beta*v).  One
    simulation at eta = 1 therefore determines the exact branch
    statistics of the whole eta grid.
    """
    run = run_majsat_eta(p, 1.0, r, r_prime, chi)
    return run.aux_pair


def pminus_from_blocks(blocks: tuple[float, float], eta: float) -> float:
    u, v = blocks
    c0, c1 = u, eta * v
    return abs(c0 - c1) ** 2 / (2.0 * (c0 * c0 + c1 * c1))


def binomial_majority_probability(n_trials: int, p: float) -> float:
    """P[successes strictly exceed failures] for Binomial(n_trials, p)."""
    if n_trials == 0:
        return 0.0
    q = 1.0 - p
    total = 0.0
    for k in range(n_trials // 2 + 1, n_trials + 1):
        total += math.comb(n_trials, k) * p**k * q ** (n_trials - k)
    return total


# ---------------------------------------------------------------------------
# majority-SAT decision protocol


@dataclass
class MajsatConfig:
    """Protocol parameters; unset repetition counts fall back to defaults."""

    delta_p: float = DELTA_P_MAX
    c: float = 2.0
    chi: float = CHI_CV
    r: int | None = None
    r_prime: int | None = None
    n_pp: int | None = None
    seed: int = 0
    mode: str = "exact"  # "exact" (binomial law) or "montecarlo" (sampled)
    record_s_true: bool = True

    def __post_init__(self):
        if not 0.0 < self.delta_p <= DELTA_P_MAX + 1e-15:
            raise ValueError(f"delta_p must lie in (0, sqrt(2)/4], got {self.delta_p}")
        if self.c <= 1.0:
            raise ValueError("c must exceed 1")
        if self.mode not in ("exact", "montecarlo"):
            raise ValueError(f"unknown mode {self.mode!r}")

    def resolved(self, n: int) -> dict:
        r = self.r if self.r is not None else default_repetitions(n, self.chi)
        r_prime = (
            self.r_prime
            if self.r_prime is not None
            else default_repetitions(n, self.chi)
        )
        if self.n_pp is not None:
            n_pp = self.n_pp
        else:
            n_pp = npp_bound(self.delta_p, self.c ** (-n))
            n_pp += n_pp % 2  # even count: ties count against "success"
            n_pp = max(n_pp, 2)
        return {
            "n": n,
            "delta_p": self.delta_p,
            "c": self.c,
            "epsilon": self.c ** (-n),
            "chi": self.chi,
            "r": r,
            "r_prime": r_prime,
            "n_pp": n_pp,
            "seed": self.seed,
            "mode": self.mode,
            "eta_exponents": list(range(-n, n + 1)),
        }


@dataclass
class MajsatVerdict:
    accepted: bool
    per_eta: dict[int, int]  # eta exponent i (eta = 2^i) -> successes out of n
    config: dict
    s_true: int | None = None
    description: str = ""


def majsat_decide(p: "CnfFormula | Predicate", cfg: MajsatConfig | None = None) -> MajsatVerdict:
    """Decide whether a strict majority of assignments satisfies ``p``.

    For each eta = 2^i on the grid, n sets of n_pp auxiliary-qubit x-basis
    measurements are evaluated; a set succeeds when -1 outcomes
    outnumber +1 outcomes, and the instance is accepted when some eta
    succeeds in all n sets.  Exact mode replaces sampling with the
    binomial law: a set succeeds iff its success probability exceeds 1/2,
    making the verdict deterministic.  Monte Carlo mode samples each
    measurement from its own seeded substream.
    """
    cfg = cfg or MajsatConfig()
    pred = as_predicate(p)
    n = pred.n
    if n < 1:
        raise ValueError("need at least one variable")
    conf = cfg.resolved(n)
    r, r_prime, n_pp = conf["r"], conf["r_prime"], conf["n_pp"]
    per_eta: dict[int, int] = {}

    if cfg.mode == "exact":
        blocks = majsat_readout_blocks(pred, r, r_prime, cfg.chi)
        for i in conf["eta_exponents"]:
            p_minus = pminus_from_blocks(blocks, 2.0**i)
            q = binomial_majority_probability(n_pp, p_minus)
            per_eta[i] = n if q > 0.5 else 0
    else:
        for stream, i in enumerate(conf["eta_exponents"]):
            run = run_majsat_eta(pred, 2.0**i, r, r_prime, cfg.chi)
            successes = 0
            for set_index in range(n):
                rng = make_rng(cfg.seed, stream=stream * n + set_index + 1)
                minus = int(np.sum(rng.random(n_pp) < run.p_minus_protocol))
                if minus > n_pp - minus:
                    successes += 1
            per_eta[i] = successes

    s_true = None
    if cfg.record_s_true:
        s_true = count_satisfying(pred)
    return MajsatVerdict(
        accepted=any(v == n for v in per_eta.values()),
        per_eta=per_eta,
        config=conf,
        s_true=s_true,
        description=pred.description,
    )


# ---------------------------------------------------------------------------
# k-vertex independent-set counting


def sharp_k_is(g: Graph, k: int, cfg: MajsatConfig | None = None) -> int:
    """Count independent sets of exactly k vertices via majority decisions.

    Binary descent on the comparator threshold z (most significant bit
    first): each query asks whether z + count >= 2^n by deciding the
    majority question for the switched formula over n+1 variables with
    the comparator at z+1, keeping the strict-majority boundary intact.
    The minimal satisfying threshold gives count = 2^n - z_min.
    """
    cfg = cfg or MajsatConfig(record_s_true=False)
    n = g.n
    fk = k_is_predicate(g, k)

    def at_least(z: int) -> bool:
        switched = build_F(fk, less_than_predicate(z + 1, n))
        return majsat_decide(switched, cfg).accepted

    prefix = 0
    for bit in reversed(range(n)):
        candidate = prefix | (1 << bit)
        if not at_least(candidate):
            prefix = candidate
    z_min = prefix + 1
    return (1 << n) - z_min


def max_k_is(g: Graph, cfg: MajsatConfig | None = None) -> tuple[int, list[int]]:
    """arg-max over k of the k-vertex independent-set counts (ties: smallest k)."""
    counts = [sharp_k_is(g, k, cfg) for k in range(g.n + 1)]
    best = max(counts)
    return counts.index(best), counts


# ---------------------------------------------------------------------------
# postselection


def build_superposition(layout: WireLayout, coeffs: dict[str, complex]) -> LorentzState:
    """State with the given amplitudes on full-wire bitstrings (unnormalized)."""
    state = LorentzState(layout, np.zeros(layout.dim, dtype=np.complex128))
    for bits, amp in coeffs.items():
        state.amps[layout.index_of_bits(bits)] = amp
    return state


@dataclass
class PostselectResult:
    state: LorentzState
    success_probability: float
    r: int
    chi: float


def postselect_target(state: LorentzState, p: Predicate) -> LorentzState:
    """Ideal outcome: marked work components only, oracle set, renormalized."""
    layout = state.layout
    oracle = layout.wires_of_role(WireRole.ORACLE)[0]
    work = layout.wires_of_role(WireRole.WORK)
    table = p.truth_table()
    target = state.copy()
    idx = np.arange(layout.dim, dtype=np.int64)
    value = np.zeros(layout.dim, dtype=np.int64)
    for j, w in enumerate(work):
        value |= ((idx >> layout.bit_position(w)) & 1) << (len(work) - 1 - j)
    keep = table[value] & (((idx >> layout.bit_position(oracle)) & 1) == 0)
    target.amps[~keep] = 0.0
    obit = 1 << layout.bit_position(oracle)
    flipped = np.zeros_like(target.amps)
    flipped[idx[keep] + obit] = target.amps[keep]
    norm = math.sqrt(float(np.sum(np.abs(flipped) ** 2)))
    if norm == 0.0:
        raise PostselectionFailedError("postselection failed: empty branch")
    return LorentzState(layout, flipped / norm)


def postselect(
    state: LorentzState,
    p: Predicate,
    r: int | None = None,
    chi: float = CHI_CV,
) -> PostselectResult:
    """Force the marked branch: mark, amplify, measure oracle and hybit.

    Returns the oracle=1 branch (deterministically selected) together
    with the exact probability of observing it; the branch is empty iff
    no component satisfies the predicate, which raises
    :class:`PostselectionFailedError`.
    """
    layout = state.layout
    oracle = layout.wires_of_role(WireRole.ORACLE)[0]
    work = layout.wires_of_role(WireRole.WORK)
    hybit = layout.hybit_wires()[0]
    if len(work) != p.n:
        raise ValueError(f"{len(work)} work wires for width-{p.n} predicate")
    if r is None:
        r = math.ceil(len(work) * LN2 / chi)
    current = state.copy()
    from .gates import apply  # local import to keep module load light

    apply(current, oracle_gate(p, work, oracle))
    for _ in range(r):
        apply(current, Gate(GateKind.CV, (oracle, hybit), chi=chi))
        if current.max_magnitude() > 1e100:
            current.rescale()
    directive = MeasurementDirective((oracle, hybit))
    probs = exact_outcome_probabilities(current, directive)
    p_yes = probs.get((1, 0), 0.0)
    if p_yes <= 0.0:
        raise PostselectionFailedError("postselection failed: empty branch")
    from .circuit import _project_wire_outcome  # deterministic branch selection

    post = current.copy()
    _project_wire_outcome(post, directive, oracle, 1)
    _project_wire_outcome(post, directive, hybit, 0)
    post.rescale()
    return PostselectResult(post, p_yes, r, chi)


@dataclass
class SuperPostselectReport:
    terms: tuple[str, ...]
    r: int
    chi: float
    coefficients: dict[str, float]  # observable magnitude per term, max-normalized
    winners: tuple[str, ...]  # maximum population count terms
    dominance_ratio: float  # winner coefficient / best non-winner (inf if none)
    tie: bool
    state: LorentzState


def super_postselect_demo(
    terms: tuple[str, ...] | list[str], r: int, chi: float = CHI_CCV
) -> SuperPostselectReport:
    """Relative selection: amplify a superposition and keep the largest count.

    Builds an equal-amplitude superposition of the given work bitstrings
    (oracle set, hybit observable), applies Q^r, and reports the
    observable coefficient of every term.  The surviving component is the
    term with the most set bits; ties survive together with equal weight.
    """
    terms = tuple(terms)
    if not terms:
        raise ValueError("need at least one term")
    n = len(terms[0])
    if any(len(t) != n for t in terms):
        raise ValueError("terms must share one width")
    layout = mis_layout(n)
    coeffs = {t + "1" + "0": 1.0 for t in terms}
    state = build_superposition(layout, coeffs)
    circuit = Circuit(
        layout,
        tuple(q_operation(tuple(range(n)), n + 1, r, chi, oracle_wire=n)),
    )
    final = execute(circuit, state)
    mags: dict[str, float] = {}
    for t in terms:
        mags[t] = abs(final.amps[layout.index_of_bits(t + "1" + "0")])
    top = max(mags.values())
    coefficients = {t: m / top for t, m in mags.items()}
    best_pop = max(t.count("1") for t in terms)
    winners = tuple(t for t in terms if t.count("1") == best_pop)
    others = [coefficients[t] for t in terms if t not in winners]
    ratio = math.inf if not others else 1.0 / max(others)
    return SuperPostselectReport(
        terms=terms,
        r=r,
        chi=chi,
        coefficients=coefficients,
        winners=winners,
        dominance_ratio=ratio,
        tie=len(winners) > 1,
        state=final,
    )
