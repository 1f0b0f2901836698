"""``catsim`` command line: sweeps, teleportation and generation runs, validation.

Exit codes: 0 success or statistical agreement, 1 statistical disagreement or
failed validation, 2 usage error, 3 numerical guard tripped.

Sweep CSV columns (first column is always ``alpha2``):

* ``gen_prob``: ``P<src><tgt>_Q<Q>_M<M>`` with ``src``/``tgt`` in ``p``/``m``,
  e.g. ``Pmm_Q3_M6`` for a minus target prepared from a minus source.
* ``mean_photon``: ``nbar_plus_M<M>``, ``nbar_minus_M<M>``.
* ``concurrence``: ``C_plus_M<M>_K<K>``, ``C_minus_M<M>_K<K>``.
* ``teleport_prob``: ``Pi_<sym|asym>_<sign>_N<N>_L<L>``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from collections import Counter
from typing import Sequence

from . import __version__
from .analytics import concurrence_analytic, mean_photon_per_mode
from .cat_algebra import channel_state, dumps_state, fidelity, make_input_cat
from .errors import MemoryBudgetExceeded, TailMassExceeded, ZeroNormError
from .generation import (
    generation_probability_analytic,
    ladder_generate,
    reduce_by_parity,
    smallest_q,
    tree_generate_pow2,
)
from .measurement import trial_rng
from .teleportation import NetworkConfig, monte_carlo_success, success_probability_analytic
from .validation import run_suite

EXIT_OK, EXIT_DISAGREE, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
SIGMA_TOL = 4.0
SIGNS = ("plus", "minus")
QUANTITIES = ("gen_prob", "mean_photon", "concurrence", "teleport_prob")


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in str(text).split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _signs(choice: str) -> tuple[str, ...]:
    return SIGNS if choice == "both" else (choice,)


def _add_alpha(p: argparse.ArgumentParser, default: float | None = 1.0) -> None:
    p.add_argument("--alpha2", type=float, default=default, help="|alpha|^2 (real alpha)")
    p.add_argument("--alpha-re", type=float, default=None)
    p.add_argument("--alpha-im", type=float, default=None)


def _alpha(args) -> complex:
    if args.alpha_re is not None or args.alpha_im is not None:
        return complex(args.alpha_re or 0.0, args.alpha_im or 0.0)
    if args.alpha2 is None or args.alpha2 < 0:
        raise UsageError("--alpha2 must be non-negative")
    return complex(math.sqrt(args.alpha2))


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("CATSIM_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"CATSIM_SEED must be an integer, got {env!r}")


def _write(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _dump_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _complex_pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


# --- sweep -------------------------------------------------------------------


def sweep_grid(start: float, stop: float, step: float) -> list[float]:
    if step <= 0:
        raise UsageError("--step must be positive")
    if start < 0 or stop < start:
        raise UsageError("need 0 <= start <= stop")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(n)]


def sweep_columns(args) -> list[tuple[str, object]]:
    """``(header, f(alpha))`` pairs for the requested quantity."""
    cols: list[tuple[str, object]] = []
    short = {"plus": "p", "minus": "m"}
    if args.quantity == "gen_prob":
        for M in args.M:
            if not 2 <= M < 2**args.Q:
                raise UsageError(f"gen_prob needs 2 <= M < 2**Q, got M={M}")
            for src, tgt in (("plus", "minus"), ("minus", "minus"), ("plus", "plus"), ("minus", "plus")):
                cols.append((
                    f"P{short[src]}{short[tgt]}_Q{args.Q}_M{M}",
                    lambda a, M=M, s=src, t=tgt: generation_probability_analytic(args.Q, M, s, t, a),
                ))
    elif args.quantity == "mean_photon":
        for M in args.M:
            for s in _signs(args.sign):
                cols.append((f"nbar_{s}_M{M}", lambda a, M=M, s=s: mean_photon_per_mode(M, s, a)))
    elif args.quantity == "concurrence":
        for M in args.M:
            ks = args.K if args.K else list(range(1, M // 2 + 1))
            for K in ks:
                if not 1 <= K < M:
                    raise UsageError(f"need 1 <= K < M, got K={K}, M={M}")
                for s in _signs(args.sign):
                    cols.append((f"C_{s}_M{M}_K{K}", lambda a, M=M, K=K, s=s: concurrence_analytic(M, K, s, a)))
    elif args.quantity == "teleport_prob":
        nets = {"symmetric": (True,), "asymmetric": (False,), "both": (True, False)}[args.network]
        for N in args.N:
            for L in args.L:
                for sym in nets:
                    for s in _signs(args.sign):
                        tag = "sym" if sym else "asym"

                        def f(a, N=N, L=L, sym=sym, s=s):
                            return success_probability_analytic(NetworkConfig(N, L, sym, s, a))

                        cols.append((f"Pi_{tag}_{s}_N{N}_L{L}", f))
    return cols


def cmd_sweep(args) -> int:
    grid = sweep_grid(args.start, args.stop, args.step)
    try:
        cols = sweep_columns(args)
    except ValueError as exc:
        raise UsageError(str(exc))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["alpha2"] + [h for h, _ in cols])
    for x in grid:
        a = math.sqrt(x)
        w.writerow([f"{x:.12g}"] + [f"{f(a):.12g}" for _, f in cols])
    _write(buf.getvalue(), args.output)
    return EXIT_OK


# --- teleport ----------------------------------------------------------------


def _record_dict(rec) -> dict:
    mode = list(rec.mode) if isinstance(rec.mode, tuple) else rec.mode
    return {"mode": mode, "kind": rec.kind, "outcome": rec.outcome, "probability": rec.probability}


def _trial_dict(t) -> dict:
    return {
        "case_tag": t.case_tag,
        "parity_sum_odd": bool(t.parity_sum_odd),
        "success": bool(t.success),
        "correction_applied": bool(t.correction_applied),
        "output_fidelity": float(t.output_fidelity),
        "records": [_record_dict(r) for r in t.records],
    }


def cmd_teleport(args) -> int:
    alpha = _alpha(args)
    if alpha == 0:
        raise UsageError("teleportation needs alpha != 0")
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    try:
        config = NetworkConfig(
            args.N, args.L, not args.asymmetric, args.sign, alpha, args.sender, args.receiver
        )
    except ValueError as exc:
        raise UsageError(str(exc))
    x, y = complex(args.x_re, args.x_im), complex(args.y_re, args.y_im)
    if x == 0 and y == 0:
        raise UsageError("x and y cannot both vanish")
    seed = _seed(args)
    analytic = success_probability_analytic(config)
    mc = monte_carlo_success(config, x, y, args.trials, seed, keep=args.samples)
    deviation = abs(mc.estimate - analytic)
    agree = deviation <= max(SIGMA_TOL * mc.std_error, 1e-12)
    report = {
        "config": {
            "N": config.N,
            "L": config.L,
            "symmetric": config.symmetric,
            "channel_sign": config.channel_sign,
            "alpha": _complex_pair(config.alpha),
            "sender": config.sender,
            "receiver": config.receiver,
            "x": _complex_pair(x),
            "y": _complex_pair(y),
        },
        "seed": seed,
        "trials": mc.trials,
        "analytic": analytic,
        "estimate": mc.estimate,
        "std_error": mc.std_error,
        "z_score": deviation / mc.std_error if mc.std_error > 0 else 0.0,
        "agree": bool(agree),
        "case_counts": mc.case_counts,
        "samples": [_trial_dict(t) for t in mc.samples],
    }
    _write(_dump_json(report), args.output)
    return EXIT_OK if agree else EXIT_DISAGREE


# --- generate ----------------------------------------------------------------


def cmd_generate(args) -> int:
    alpha = _alpha(args)
    if alpha == 0:
        raise UsageError("generation needs alpha != 0")
    M = args.M
    if M < 2:
        raise UsageError("--M must be at least 2")
    target = args.sign
    source = args.source or target
    pow2 = M & (M - 1) == 0
    scheme = args.scheme
    if scheme == "auto":
        scheme = "tree" if pow2 else "tree+parity"
    elif scheme == "tree" and not pow2:
        scheme = "tree+parity"
    if scheme == "ladder" and args.source and args.source != target:
        raise UsageError("the ladder scheme produces the target sign directly; drop --source")

    report: dict = {"scheme": scheme, "M": M, "target_sign": target, "alpha": _complex_pair(alpha)}
    exit_code = EXIT_OK
    if scheme in ("ladder", "tree"):
        if scheme == "ladder":
            state = ladder_generate(M, alpha, target)
        else:
            state = tree_generate_pow2(M.bit_length() - 1, alpha, target)
            report["Q"] = M.bit_length() - 1
        report["fidelity"] = fidelity(state, channel_state(M, target, alpha))
        report["measurements"] = 0
    else:
        Q = smallest_q(M)
        seed = _seed(args)
        if args.trials < 1:
            raise UsageError("--trials must be >= 1")
        counts: Counter = Counter()
        hits = 0
        first = hit_state = None
        fidelities = {}
        for i in range(args.trials):
            out = reduce_by_parity(M, source, alpha, trial_rng(seed, i), target)
            counts[out.parity_records[0].outcome] += 1
            hits += out.target_hit
            if out.produced_sign not in fidelities:
                fidelities[out.produced_sign] = fidelity(out.state, channel_state(M, out.produced_sign, alpha))
            first = first or out
            if out.target_hit and hit_state is None:
                hit_state = out
        # dump a target-sign state when any trial produced one
        dumped = hit_state or first
        state = dumped.state
        analytic = generation_probability_analytic(Q, M, source, target, alpha)
        freq = hits / args.trials
        se = math.sqrt(max(freq * (1 - freq), 0.0) / args.trials)
        agree = abs(freq - analytic) <= max(SIGMA_TOL * se, 1e-12)
        report.update({
            "Q": Q,
            "source_sign": source,
            "measured_modes": list(range(M + 1, 2**Q + 1)),
            "seed": seed,
            "trials": args.trials,
            "parity_counts": dict(sorted(counts.items())),
            "target_frequency": freq,
            "std_error": se,
            "analytic": analytic,
            "agree": bool(agree),
            "fidelity_by_sign": dict(sorted(fidelities.items())),
            "dumped_sign": dumped.produced_sign,
        })
        exit_code = EXIT_OK if agree else EXIT_DISAGREE
    if args.dump_state:
        _write(dumps_state(state) + "\n", args.dump_state)
    _write(_dump_json(report), args.output)
    return exit_code


# --- validate ----------------------------------------------------------------


def cmd_validate(args) -> int:
    checks = run_suite(args.suite, args.tolerance)
    report = {
        "suite": args.suite,
        "passed": all(c.passed for c in checks),
        "checks": [c.as_dict() for c in checks],
    }
    _write(_dump_json(report), args.output)
    return EXIT_OK if report["passed"] else EXIT_DISAGREE


# --- dump-state --------------------------------------------------------------


def cmd_dump_state(args) -> int:
    alpha = _alpha(args)
    if args.kind == "channel":
        state = channel_state(args.M, args.sign, alpha)
    elif args.kind == "ladder":
        state = ladder_generate(args.M, alpha, args.sign)
    elif args.kind == "tree":
        if args.M & (args.M - 1):
            raise UsageError("tree states need M to be a power of two")
        state = tree_generate_pow2(args.M.bit_length() - 1, alpha, args.sign)
    else:
        state = make_input_cat(complex(args.x_re, args.x_im), complex(args.y_re, args.y_im), alpha, args.L)
    _write(dumps_state(state) + "\n", args.output)
    return EXIT_OK


# --- parser ------------------------------------------------------------------


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(prog="catsim", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", help="JSON file whose keys mirror the subcommand's flags")
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {}

    p = sub.add_parser("sweep", help="closed-form curves as CSV")
    p.add_argument("--quantity", choices=QUANTITIES, required=True)
    p.add_argument("--start", type=float, default=0.0)
    p.add_argument("--stop", type=float, default=5.0)
    p.add_argument("--step", type=float, default=0.1)
    p.add_argument("--Q", type=int, default=3)
    p.add_argument("--M", type=_int_list, default=[5, 6, 7])
    p.add_argument("--K", type=_int_list, default=[])
    p.add_argument("--N", type=_int_list, default=[2, 4, 6])
    p.add_argument("--L", type=_int_list, default=[1])
    p.add_argument("--sign", choices=SIGNS + ("both",), default="both")
    p.add_argument("--network", choices=("symmetric", "asymmetric", "both"), default="symmetric")
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(func=cmd_sweep)
    subs["sweep"] = p

    p = sub.add_parser("teleport", help="Monte Carlo teleportation vs closed form")
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--L", type=int, default=1)
    p.add_argument("--asymmetric", action="store_true")
    p.add_argument("--sign", choices=SIGNS, default="minus")
    _add_alpha(p)
    p.add_argument("--sender", type=int, default=1)
    p.add_argument("--receiver", type=int, default=None)
    p.add_argument("--x-re", type=float, default=1.0)
    p.add_argument("--x-im", type=float, default=0.0)
    p.add_argument("--y-re", type=float, default=1.0)
    p.add_argument("--y-im", type=float, default=0.0)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--samples", type=int, default=3, help="number of TrialResults to include")
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(func=cmd_teleport)
    subs["teleport"] = p

    p = sub.add_parser("generate", help="ladder / tree generation report")
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--scheme", choices=("auto", "ladder", "tree"), default="auto")
    p.add_argument("--sign", choices=SIGNS, default="minus", help="target sign")
    p.add_argument("--source", choices=SIGNS, default=None, help="source sign for the parity reduction")
    _add_alpha(p)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--dump-state", default=None, help="write the produced state as JSON")
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(func=cmd_generate)
    subs["generate"] = p

    p = sub.add_parser("validate", help="oracle, identity and limit checks")
    p.add_argument("--suite", choices=("oracle", "identities", "limits", "all"), default="all")
    p.add_argument("--tolerance", type=float, default=None, help="override every check's tolerance")
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(func=cmd_validate)
    subs["validate"] = p

    p = sub.add_parser("dump-state", help="write a state as JSON")
    p.add_argument("--kind", choices=("channel", "ladder", "tree", "input"), default="channel")
    p.add_argument("--M", type=int, default=2)
    p.add_argument("--L", type=int, default=1)
    p.add_argument("--sign", choices=SIGNS, default="minus")
    _add_alpha(p)
    p.add_argument("--x-re", type=float, default=1.0)
    p.add_argument("--x-im", type=float, default=0.0)
    p.add_argument("--y-re", type=float, default=1.0)
    p.add_argument("--y-im", type=float, default=0.0)
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(func=cmd_dump_state)
    subs["dump-state"] = p
    return parser, subs


def _apply_config(parser, subs, argv, args):
    try:
        with open(args.config) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {args.config}: {exc}")
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    sub = subs[args.command]
    known = {a.dest for a in sub._actions}
    defaults = {}
    for key, value in cfg.items():
        dest = key.lstrip("-").replace("-", "_")
        if dest not in known or dest == "help":
            raise UsageError(f"unknown config key {key!r} for {args.command}")
        if dest in ("M", "N", "K", "L") and args.command == "sweep" and not isinstance(value, list):
            value = [value]
        defaults[dest] = value
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subs = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        if args.config:
            args = _apply_config(parser, subs, argv, args)
        return args.func(args)
    except UsageError as exc:
        print(f"catsim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TailMassExceeded, ZeroNormError, MemoryBudgetExceeded, FloatingPointError) as exc:
        print(f"catsim: numerical guard: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
