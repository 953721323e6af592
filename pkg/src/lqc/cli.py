"""Command-line surface.

Subcommands: run, mis, majsat, maxkis, pathsum, postselect,
superpostselect.  Every report is JSON (CSV only for sampled histogram
tables), embeds the exact configuration used -- including the seed and
all rotation/repetition defaults -- and is byte-identical across
repeated invocations with the same inputs and flags.

Exit codes: 0 success, 1 algorithmic failure signal (empty postselection
branch, fully unobservable state, no dominant path-sum solution),
2 input error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import algorithms as alg
from . import pathsum as ps
from .circuit import execute, make_rng, outcome_chain_probabilities, sample
from .errors import (
    FormatError,
    LqcError,
    NoDominantSolutionError,
    PostselectionFailedError,
    UnobservableStateError,
)
from .gates import CHI_CCV, CHI_CV
from .oracles import Predicate, parse_dimacs_cnf, parse_dimacs_graph
from .serialize import circuit_from_json

_ALGORITHMIC_FAILURES = (
    PostselectionFailedError,
    UnobservableStateError,
    NoDominantSolutionError,
)


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}")


def _emit(report: dict, args) -> None:
    if args.format == "csv":
        hist = report.get("histogram")
        if hist is None:
            raise FormatError("csv format is only available for histogram output")
        lines = ["outcome,count"]
        lines += [f"{k},{v}" for k, v in sorted(hist.items())]
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _common_config(args, **extra) -> dict:
    cfg = {"seed": args.seed, "format": args.format}
    cfg.update(extra)
    return cfg


# ---------------------------------------------------------------------------
# subcommands


def _cmd_run(args) -> dict:
    circuit = circuit_from_json(_read_text(args.circuit), Path(args.circuit).parent)
    final = execute(circuit)
    dist = final.observable_distribution()
    report = {
        "command": "run",
        "config": _common_config(args, input=args.circuit, shots=args.shots),
        "distribution": dist.entries,
        "observable_weight": dist.observable_weight,
        "log_scale": dist.log_scale,
    }
    if circuit.directives:
        chain = outcome_chain_probabilities(circuit)
        report["outcome_chain"] = chain
        marginals = []
        for i, d in enumerate(circuit.directives):
            acc: dict[str, float] = {}
            for key, p in chain.items():
                part = key.split(";")[i]
                acc[part] = acc.get(part, 0.0) + p
            marginals.append(
                {"wires": list(d.wires), "basis": d.basis.value, "probabilities": acc}
            )
        report["measurements"] = marginals
        if args.shots:
            report["histogram"] = sample(circuit, args.shots, args.seed)
    return report


def _cmd_mis(args) -> dict:
    graph = parse_dimacs_graph(_read_text(args.graph))
    chi = args.chi if args.chi is not None else CHI_CCV
    report_obj = alg.run_mis(graph, r=args.r, chi=chi)
    report = {
        "command": "mis",
        "config": _common_config(
            args, input=args.graph, r=report_obj.r, chi=report_obj.chi
        ),
        "n": report_obj.n,
        "edges": report_obj.m_edges,
        "most_probable": report_obj.most_probable,
        "probability_simulated": report_obj.probability_simulated,
        "probability_closed_form": report_obj.probability_closed_form,
        "closed_form_abs_diff": abs(
            report_obj.probability_simulated - report_obj.probability_closed_form
        ),
        "n_is": report_obj.n_is,
        "n_mis": report_obj.n_mis,
        "mis_size": report_obj.m_size,
        "counts_by_size": list(report_obj.counts),
        "mis_strings": sorted(report_obj.mis_strings),
        "observable_weight": report_obj.observable_weight,
        "log_scale": report_obj.log_scale,
    }
    if args.subset is not None:
        report["subset"] = args.subset
        report["subset_accepted"] = alg.mis_subset_decision(report_obj, args.subset)
    return report


def _majsat_config(args, mode_default="exact") -> alg.MajsatConfig:
    return alg.MajsatConfig(
        delta_p=args.delta_p,
        c=args.c,
        chi=args.chi if args.chi is not None else CHI_CV,
        r=args.r,
        r_prime=args.r_prime,
        seed=args.seed,
        mode=args.mode or mode_default,
    )


def _cmd_majsat(args) -> dict:
    formula = parse_dimacs_cnf(_read_text(args.formula))
    verdict = alg.majsat_decide(formula, _majsat_config(args))
    report = {
        "command": "majsat",
        "config": _common_config(args, input=args.formula, **verdict.config),
        "accepted": verdict.accepted,
        "per_eta_successes": {f"2^{i}": v for i, v in verdict.per_eta.items()},
        "s_true": verdict.s_true,
    }
    if verdict.s_true is not None:
        n = formula.n_vars
        grid_diffs = []
        blocks = alg.majsat_readout_blocks(
            formula, verdict.config["r"], verdict.config["r_prime"], verdict.config["chi"]
        )
        for i in verdict.per_eta:
            eta = 2.0**i
            grid_diffs.append(
                abs(
                    alg.pminus_from_blocks(blocks, eta)
                    - alg.majsat_exact_pminus(verdict.s_true, n, eta)
                )
            )
        report["cross_checks"] = {
            "majority_true": verdict.s_true > (1 << (n - 1)),
            "p_minus_max_abs_diff": max(grid_diffs),
        }
    return report


def _cmd_maxkis(args) -> dict:
    graph = parse_dimacs_graph(_read_text(args.graph))
    cfg = _majsat_config(args)
    cfg.record_s_true = False
    k_star, counts = alg.max_k_is(graph, cfg)
    census = alg.is_census(graph)
    return {
        "command": "maxkis",
        "config": _common_config(args, input=args.graph, **cfg.resolved(graph.n + 1)),
        "counts": counts,
        "max_k": k_star,
        "brute_force_counts": list(census.counts),
        "counts_match_brute_force": counts == list(census.counts),
    }


def _cmd_pathsum(args) -> dict:
    circuit = circuit_from_json(_read_text(args.circuit), Path(args.circuit).parent)
    layout = circuit.layout
    x = int(args.input, 2) if args.input else 0
    psc = ps.pathsum_view(circuit)
    final = execute(circuit)
    scale = math.exp(2.0 * final.log_scale)
    n_q = len(layout.qubit_wires())
    table = {}
    max_diff = 0.0
    for y in range(1 << n_q):
        w_path = ps.path_amplitude(psc, x, y)
        y_index = ps._output_index(layout, y)
        w_sim = abs(final.amps[y_index]) ** 2 * scale
        table[format(y, f"0{n_q}b")] = {"path_sum": w_path, "simulator": w_sim}
        max_diff = max(max_diff, abs(w_path - w_sim))
    try:
        dominant = ps.branching_search(psc, x)
    except NoDominantSolutionError as exc:
        dominant = None
    report = {
        "command": "pathsum",
        "config": _common_config(args, input=args.circuit, basis_input=args.input or "0" * layout.n_wires),
        "weights": table,
        "max_abs_diff": max_diff,
        "dominant_output": dominant,
    }
    return report


def _cmd_postselect(args) -> dict:
    n = args.n
    yes = tuple(s.strip() for s in args.yes.split(",") if s.strip())
    if not yes or any(len(s) != n or set(s) - {"0", "1"} for s in yes):
        raise FormatError(f"--yes must list {n}-bit strings")
    yes_set = {int(s, 2) for s in yes}
    chi = args.chi if args.chi is not None else CHI_CV
    layout = alg.postselect_layout(n)
    rng = make_rng(args.seed)
    amps = np.zeros(layout.dim, dtype=np.complex128)
    for x in range(1 << n):
        c = rng.normal() + 1j * rng.normal()
        if x in yes_set:
            c *= args.ratio
        amps[x << 1] = c  # oracle 0 (MSB), hybit 0 (LSB)
    state = alg.build_superposition(layout, {})
    state.amps = amps / np.linalg.norm(amps)
    pred = Predicate(n, lambda: np.isin(np.arange(1 << n), sorted(yes_set)), "yes-list")
    result = alg.postselect(state, pred, r=args.r, chi=chi)
    target = alg.postselect_target(state, pred)
    overlap = np.vdot(target.amps, result.state.amps)
    norm = np.linalg.norm(result.state.amps) * np.linalg.norm(target.amps)
    fidelity = abs(overlap) ** 2 / norm**2
    return {
        "command": "postselect",
        "config": _common_config(
            args, n=n, yes=sorted(yes), ratio=args.ratio, r=result.r, chi=result.chi
        ),
        "success_probability": result.success_probability,
        "fidelity_to_target": float(fidelity),
    }


def _cmd_superpostselect(args) -> dict:
    terms = tuple(s.strip() for s in args.terms.split(",") if s.strip())
    chi = args.chi if args.chi is not None else CHI_CCV
    r = args.r if args.r is not None else 4
    report = alg.super_postselect_demo(terms, r, chi)
    return {
        "command": "superpostselect",
        "config": _common_config(args, terms=list(terms), r=r, chi=chi),
        "coefficients": report.coefficients,
        "winners": list(report.winners),
        "dominance_ratio": report.dominance_ratio,
        "tie": report.tie,
    }


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lqc", description="Lorentz quantum computer simulator"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0, help="64-bit RNG seed")
        p.add_argument("--shots", type=int, default=0, help="sampled shots")
        p.add_argument("--mode", choices=["exact", "montecarlo"], default=None)
        p.add_argument("--r", type=int, default=None, help="amplification repetitions")
        p.add_argument("--r-prime", type=int, default=None, dest="r_prime")
        p.add_argument("--chi", type=float, default=None, help="rotation angle")
        p.add_argument("--delta-p", type=float, default=alg.DELTA_P_MAX, dest="delta_p")
        p.add_argument("--c", type=float, default=2.0, help="failure budget base")
        p.add_argument("--subset", type=str, default=None, help="decision subset")
        p.add_argument("--out", type=str, default=None, help="output path")
        p.add_argument("--format", choices=["json", "csv"], default="json")

    p_run = sub.add_parser("run", help="execute a circuit JSON file")
    p_run.add_argument("circuit")
    common(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_mis = sub.add_parser("mis", help="maximum independent set search")
    p_mis.add_argument("graph", help="DIMACS edge file")
    common(p_mis)
    p_mis.set_defaults(func=_cmd_mis)

    p_maj = sub.add_parser("majsat", help="majority-SAT decision")
    p_maj.add_argument("formula", help="DIMACS CNF file")
    common(p_maj)
    p_maj.set_defaults(func=_cmd_majsat)

    p_max = sub.add_parser("maxkis", help="k-vertex independent-set counting")
    p_max.add_argument("graph", help="DIMACS edge file")
    common(p_max)
    p_max.set_defaults(func=_cmd_maxkis)

    p_path = sub.add_parser("pathsum", help="path-sum cross-check of a circuit")
    p_path.add_argument("circuit")
    p_path.add_argument("--input", type=str, default=None, help="basis input bits")
    common(p_path)
    p_path.set_defaults(func=_cmd_pathsum)

    p_post = sub.add_parser("postselect", help="postselection demo")
    p_post.add_argument("--n", type=int, required=True, help="work qubits")
    p_post.add_argument("--yes", type=str, required=True, help="marked bitstrings")
    p_post.add_argument("--ratio", type=float, default=1.0, help="yes/no amplitude scale")
    common(p_post)
    p_post.set_defaults(func=_cmd_postselect)

    p_super = sub.add_parser("superpostselect", help="relative selection demo")
    p_super.add_argument("--terms", type=str, required=True, help="work bitstrings")
    common(p_super)
    p_super.set_defaults(func=_cmd_superpostselect)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.func(args)
        _emit(report, args)
    except _ALGORITHMIC_FAILURES as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except (FormatError, ValueError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
