"""Command-line front end.

Every subcommand emits one JSON envelope (command, inputs, seed, results,
wall_time_s). CSV is available for histograms and gap curves, and text mode
prints a readable summary (for ``shor``, the table of x^k mod N).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from importlib import resources
from pathlib import Path

import numpy as np

from . import algorithms, mbqc, qec, sampling, shor
from . import statevec as sv
from . import optimize as opt
from .clifford import PauliString
from .errors import AlgorithmFailure, CapExceededError

EXIT_OK, EXIT_VALIDATION, EXIT_CAP, EXIT_FAILURE = 0, 2, 3, 4


# ---------------------------------------------------------------------------
# circuit files


def parse_circuit(text: str, num_qubits: int | None = None) -> sv.Circuit:
    """Parse ``GATE target [target ...] [param ...]`` lines; ``#`` starts a comment.

    The register size defaults to one more than the largest target.
    """
    parsed = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, *args = line.split()
        name = name.upper()
        if name not in sv.GATES:
            raise ValueError(f"line {lineno}: unknown gate {name!r}")
        arity, nparams, _ = sv.GATES[name]
        if len(args) != arity + nparams:
            raise ValueError(
                f"line {lineno}: {name} takes {arity} target(s) and {nparams} parameter(s), got {len(args)} value(s)"
            )
        try:
            targets = [int(a) for a in args[:arity]]
        except ValueError:
            raise ValueError(f"line {lineno}: targets must be integers") from None
        try:
            params = [float(a) for a in args[arity:]]
        except ValueError:
            raise ValueError(f"line {lineno}: malformed parameter in {args[arity:]}") from None
        if any(t < 0 for t in targets):
            raise ValueError(f"line {lineno}: negative qubit index")
        parsed.append((lineno, name, targets, params))
    n = num_qubits if num_qubits is not None else 1 + max((max(t) for _, _, t, _ in parsed), default=0)
    circuit = sv.Circuit(n)
    for lineno, name, targets, params in parsed:
        try:
            circuit.add(name, targets, *params)
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return circuit


def serialize_circuit(circuit: sv.Circuit) -> str:
    lines = []
    for op in circuit.ops:
        lines.append(" ".join([op.name, *map(str, op.targets), *map(repr, op.params)]))
    return "\n".join(lines) + "\n"


def read_edge_list(text: str) -> list[tuple[int, int, float]]:
    """``u v [w]`` per line with arbitrary integer labels, relabelled to 0..n-1 in sorted order."""
    raw = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ValueError(f"line {lineno}: expected 'u v [w]'")
        try:
            raw.append((int(parts[0]), int(parts[1]), float(parts[2]) if len(parts) == 3 else 1.0))
        except ValueError:
            raise ValueError(f"line {lineno}: malformed edge") from None
    if not raw:
        raise ValueError("the graph file has no edges")
    labels = sorted({u for u, _, _ in raw} | {v for _, v, _ in raw})
    index = {lab: i for i, lab in enumerate(labels)}
    return [(index[u], index[v], w) for u, v, w in raw]


def _data_text(name: str) -> str:
    return resources.files("qdesk").joinpath("data").joinpath(name).read_text()


def _file_or_default(path: str | None, default: str) -> str:
    return _data_text(default) if path is None else Path(path).read_text()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    return obj


# ---------------------------------------------------------------------------
# subcommands; each returns (results, csv rows or None, text lines or None)


def _histogram_rows(counts: dict) -> list[list]:
    return [["outcome", "count"]] + [[k, v] for k, v in sorted(counts.items())]


def cmd_run(args, rng):
    circuit = parse_circuit(Path(args.circuit).read_text(), args.qubits)
    state = sv.run_circuit(circuit)
    counts = sv.sample_counts(state, args.shots, rng)
    probs = state.probabilities()
    nz = {format(int(i), f"0{circuit.num_qubits}b"): float(probs[i]) for i in np.flatnonzero(probs > 1e-15)}
    results = {"num_qubits": circuit.num_qubits, "num_ops": len(circuit), "counts": counts, "probabilities": nz}
    return results, _histogram_rows(counts), None


def cmd_grover(args, rng):
    n = args.n
    N = 2**n
    marked = int(rng.integers(N)) if args.marked is None else int(args.marked, 2)
    if not 0 <= marked < N:
        raise ValueError("marked item out of range")
    oracle = algorithms.BooleanOracle.marked(n, marked)
    k = algorithms.grover_iterations(N, 1) if args.iterations is None else args.iterations
    state = algorithms.grover_state(n, oracle, k)
    counts = sv.sample_counts(state, args.shots, rng)
    results = {
        "marked": format(marked, f"0{n}b"),
        "iterations": k,
        "success_probability": float(state.probabilities()[marked]),
        "closed_form": algorithms.grover_success_closed_form(N, 1, k),
        "counts": counts,
    }
    return results, _histogram_rows(counts), None


def cmd_shor(args, rng):
    res = shor.factor(args.n, rng, args.max_attempts, t=args.t)
    transcript = [{k: v for k, v in entry.items()} for entry in res.transcript]
    results = {"factors": list(res.factors), "attempts": res.attempts, "transcript": transcript}
    text = [f"N = {args.n}", f"factors: {res.factors[0]} x {res.factors[1]}", f"attempts: {res.attempts}"]
    coprime = [e["x"] for e in res.transcript if e["x"] is not None and math.gcd(e["x"], args.n) == 1]
    if coprime:
        x = coprime[-1]
        count = shor.classical_order(x, args.n) + 1
        text.append(f"x = {x}")
        text.append(" k | x^k mod N")
        text += [f"{k:2d} | {m}" for k, m in enumerate(shor.power_table(x, args.n, count))]
    for entry in res.transcript:
        text.append("branch: " + ", ".join(f"{k}={v}" for k, v in entry.items()))
    return results, None, text


def cmd_qec(args, rng):
    code = qec.get_code(args.code)
    model = qec.PauliErrorModel(args.p, args.model)
    est = qec.logical_error_rate(code, model, args.trials, rng)
    patterns = int(np.count_nonzero(model.letter_probs)) ** code.n
    exact = qec.exact_logical_error_rate(code, model) if patterns <= 4096 else None
    results = {
        "code": code.name,
        "model": args.model,
        "p": args.p,
        "trials": args.trials,
        "failures": est.failures,
        "rate": est.rate,
        "stderr": est.stderr,
        "exact_rate": exact,
    }
    return results, None, None


def _problem(args) -> opt.IsingProblem:
    return opt.encode_maxcut(read_edge_list(_file_or_default(args.problem_file, "demo_graph.txt")))


def _optimizer(args) -> opt.OptimizerConfig:
    return opt.OptimizerConfig(restarts=args.restarts)


def cmd_qaoa(args, rng):
    problem = _problem(args)
    res = opt.qaoa_optimize(problem, args.p_depth, _optimizer(args), rng, shots=args.shots)
    results = {
        "num_vertices": problem.n,
        "depth": args.p_depth,
        "gammas": list(res.params.gammas),
        "betas": list(res.params.betas),
        "expectation": res.expectation,
        "best_bitstring": res.best_bitstring,
        "best_value": res.best_value,
        "optimum": res.optimum,
        "approximation_ratio": res.approximation_ratio,
        "success_probability": res.success_probability,
        "converged": res.converged,
    }
    return results, None, None


def cmd_anneal(args, rng):
    problem = _problem(args)
    state, p_success = opt.anneal_evolve(problem, opt.AnnealSchedule(args.tau, args.steps))
    counts = sv.sample_counts(state, args.shots, rng)
    results = {
        "num_spins": problem.n,
        "tau": args.tau,
        "steps": args.steps,
        "success_probability": p_success,
        "t99": opt.time_to_solution(p_success, args.tau) if p_success > 0 else None,
        "counts": counts,
    }
    return results, _histogram_rows(counts), None


def cmd_vqe(args, rng):
    terms = opt.parse_hamiltonian(_file_or_default(args.hamiltonian_file, "demo_hamiltonian.txt"))
    prob = opt.VqeProblem(tuple(terms), args.depth)
    res = opt.vqe_optimize(prob, opt.OptimizerConfig(restarts=args.restarts, init_high=2 * np.pi), rng)
    exact = float(np.linalg.eigvalsh(opt.hamiltonian_matrix(terms))[0]) if prob.n <= 10 else None
    results = {
        "num_qubits": prob.n,
        "depth": args.depth,
        "num_params": prob.num_params,
        "energy": res.energy,
        "exact_ground_energy": exact,
        "params": res.params,
        "converged": res.converged,
    }
    return results, None, None


def _random_state(n: int, rng) -> sv.QState:
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return sv.QState.from_amplitudes(v, normalize=True)


def cmd_mbqc_demo(args, rng):
    psi = _random_state(1, rng)
    out, rec = mbqc.mbqc_single_qubit(psi, args.alpha, args.beta, args.gamma, rng)
    target = mbqc.single_qubit_target(args.alpha, args.beta, args.gamma) @ psi.amplitudes
    chain_fid = sv.fidelity(mbqc.apply_corrections(out, rec).amplitudes, target)
    psi2 = _random_state(2, rng)
    out2, rec2 = mbqc.mbqc_cnot(psi2, rng)
    cnot_fid = sv.fidelity(mbqc.apply_corrections(out2, rec2).amplitudes, sv.CNOT.matrix @ psi2.amplitudes)
    results = {
        "chain": {"outcomes": list(rec.outcomes), "byproduct_x": list(rec.x), "byproduct_z": list(rec.z),
                  "measurement_angles": list(rec.angles), "corrected_fidelity": chain_fid},
        "cnot": {"outcomes": list(rec2.outcomes), "byproduct_x": list(rec2.x), "byproduct_z": list(rec2.z),
                 "output_nodes": list(rec2.output_nodes), "corrected_fidelity": cnot_fid},
    }
    return results, None, None


def cmd_sample(args, rng):
    if args.model == "iqp":
        circuit = sampling.iqp_random(args.n, args.gateset, args.depth, rng)
        bits, dist = sampling.iqp_sample(circuit, args.shots, rng)
        counts: dict = {}
        for b in bits:
            counts[b] = counts.get(b, 0) + 1
        results = {
            "model": "iqp",
            "n": args.n,
            "gateset": args.gateset,
            "gates": [[name, list(t), power] for name, t, power in circuit.diagonal_ops],
            "distribution_sum": float(dist.sum()),
            "counts": counts,
        }
    else:
        u = sampling.random_interferometer(args.modes, rng)
        dist = sampling.boson_distribution(u, args.photons)
        configs = list(dist)
        p = np.array([dist[c] for c in configs])
        draws = rng.multinomial(args.shots, p / p.sum())
        counts = {",".join(map(str, c)): int(k) for c, k in zip(configs, draws) if k}
        results = {
            "model": "boson",
            "modes": args.modes,
            "photons": args.photons,
            "distribution": {",".join(map(str, c)): v for c, v in dist.items()},
            "distribution_sum": float(p.sum()),
            "counts": counts,
        }
    return results, _histogram_rows(counts), None


def cmd_gap_scan(args, rng):
    if args.example == "diagonal":
        h0, h1 = np.diag([1.0, -1.0]), np.diag([-1.0, -0.5])
    elif args.example == "transverse":
        h0, h1 = opt.transverse_field(1), [(-1.0, PauliString.from_label("Z"))]
    else:
        problem = _problem(args)
        h0, h1 = opt.transverse_field(problem.n), opt.ising_terms(problem)
    scan = opt.gap_scan(h0, h1, args.resolution)
    results = {"min_gap": scan.min_gap, "s_at_min": scan.s_min, "s": scan.s, "gap": scan.gaps}
    rows = [["s", "gap"]] + [[float(s), float(g)] for s, g in zip(scan.s, scan.gaps)]
    return results, rows, None


COMMANDS = {
    "run": cmd_run,
    "grover": cmd_grover,
    "shor": cmd_shor,
    "qec": cmd_qec,
    "qaoa": cmd_qaoa,
    "anneal": cmd_anneal,
    "vqe": cmd_vqe,
    "mbqc-demo": cmd_mbqc_demo,
    "sample": cmd_sample,
    "gap-scan": cmd_gap_scan,
}


# ---------------------------------------------------------------------------
# argument parsing


def _probability(text: str) -> float:
    v = float(text)
    if not 0 <= v <= 1:
        raise argparse.ArgumentTypeError("must lie in [0, 1]")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed (echoed in the output)")
    common.add_argument("--shots", type=_positive, default=1000)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--no-timing", action="store_true", help="omit wall time for byte-identical reruns")

    parser = argparse.ArgumentParser(prog="qdesk", description="Desk-scale quantum algorithm experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", parents=[common], help="simulate a circuit file and sample it")
    p.add_argument("circuit")
    p.add_argument("--qubits", type=_positive, default=None)

    p = sub.add_parser("grover", parents=[common], help="single-item Grover search")
    p.add_argument("--n", type=_positive, default=3)
    p.add_argument("--marked", default=None, help="marked bitstring (random if omitted)")
    p.add_argument("--iterations", type=int, default=None)

    p = sub.add_parser("shor", parents=[common], help="factor a small composite")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, default=None, help="counting qubits (default 2L+1)")
    p.add_argument("--max-attempts", type=_positive, default=10)

    p = sub.add_parser("qec", parents=[common], help="Monte-Carlo logical error rate")
    p.add_argument("--code", choices=sorted(qec.CODES), default="bitflip")
    p.add_argument("--p", type=_probability, required=True)
    p.add_argument("--trials", type=_positive, default=10000)
    p.add_argument("--model", choices=("bitflip", "phaseflip", "depolarizing"), default="bitflip")

    for name, helptext in (("qaoa", "QAOA on a Max-Cut instance"), ("anneal", "Trotterized anneal of a Max-Cut instance")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--problem-file", default=None, help="edge list 'u v [w]' (default: bundled demo graph)")
    sub.choices["qaoa"].add_argument("--p-depth", type=_positive, default=1)
    sub.choices["qaoa"].add_argument("--restarts", type=_positive, default=20)
    sub.choices["anneal"].add_argument("--tau", type=float, default=10.0)
    sub.choices["anneal"].add_argument("--steps", type=_positive, default=100)

    p = sub.add_parser("vqe", parents=[common], help="VQE ground-state search")
    p.add_argument("--hamiltonian-file", default=None, help="lines 'coefficient LABEL'")
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--restarts", type=_positive, default=20)

    p = sub.add_parser("mbqc-demo", parents=[common], help="adaptive chain and CNOT gadget on random inputs")
    p.add_argument("--alpha", type=float, default=0.3)
    p.add_argument("--beta", type=float, default=0.7)
    p.add_argument("--gamma", type=float, default=1.1)

    p = sub.add_parser("sample", parents=[common], help="IQP or boson-sampling distributions")
    p.add_argument("model", choices=("iqp", "boson"))
    p.add_argument("--n", type=_positive, default=4)
    p.add_argument("--gateset", type=int, choices=(1, 2), default=1)
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--modes", type=_positive, default=3)
    p.add_argument("--photons", type=_positive, default=2)

    p = sub.add_parser("gap-scan", parents=[common], help="spectral gap along the anneal")
    p.add_argument("--example", choices=("diagonal", "transverse"), default=None)
    p.add_argument("--problem-file", default=None)
    p.add_argument("--resolution", type=float, default=1e-2)
    return parser


_CSV_COMMANDS = {"run", "grover", "anneal", "sample", "gap-scan"}


def _inputs(args) -> dict:
    skip = {"command", "seed", "format", "no_timing"}
    return {k: v for k, v in vars(args).items() if k not in skip}


def _emit(doc: dict, fmt: str, rows, text, out) -> None:
    if fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerows(rows)
    elif fmt == "text":
        if text is None:
            text = [f"{k}: {json.dumps(_jsonable(v))}" for k, v in doc["results"].items()]
        out.write("\n".join(text) + "\n")
    else:
        out.write(json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n")


def run_experiment(args) -> tuple[int, dict, list | None, list | None]:
    """Dispatch a parsed command; returns (exit code, document, csv rows, text lines)."""
    rng = np.random.default_rng(args.seed)
    doc = {"command": args.command, "inputs": _inputs(args), "seed": args.seed}
    start = time.perf_counter()
    try:
        if args.format == "csv" and args.command not in _CSV_COMMANDS:
            raise ValueError(f"csv output is only available for {sorted(_CSV_COMMANDS)}")
        results, rows, text = COMMANDS[args.command](args, rng)
        code = EXIT_OK
        doc["results"] = results
    except CapExceededError as exc:
        code, rows, text = EXIT_CAP, None, None
        doc["error"] = {"type": "cap_exceeded", "message": str(exc)}
    except AlgorithmFailure as exc:
        code, rows, text = EXIT_FAILURE, None, None
        doc["error"] = {"type": "algorithm_failure", "message": str(exc)}
    except (ValueError, OSError) as exc:
        code, rows, text = EXIT_VALIDATION, None, None
        doc["error"] = {"type": "validation", "message": str(exc)}
    if not args.no_timing:
        doc["wall_time_s"] = time.perf_counter() - start
    return code, doc, rows, text


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    code, doc, rows, text = run_experiment(args)
    fmt = args.format if code == EXIT_OK else "json"
    _emit(doc, fmt, rows, text, out)
    return code


def run_to_string(argv) -> tuple[int, str]:
    buf = io.StringIO()
    code = main(argv, buf)
    return code, buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
