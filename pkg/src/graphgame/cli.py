"""Command-line interface.

Commands: validate, classify, value, simulate, gyni.  Each prints a plain
``key: value`` report (see report_schema.txt).  Exit codes:

    0  success (classify reports Unknown softly)
    2  spec fails validation
    3  spec or strategy file cannot be parsed
    4  a solver budget was exceeded
    5  strategy file missing or incompatible with the game
    6  command requires the other payoff mode

``--threads`` (or the GRAPHGAME_THREADS environment variable) controls
optimizer parallelism; output is identical for any thread count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import classification, io
from .classical import (
    DEFAULT_STRATEGY_BUDGET,
    StrategySpaceError,
    classical_value,
    gyni_classical_bound,
    check_injective,
    target_classical_value,
)
from .model import ConsistencyPayoff, GraphGameError, TargetPayoff, validate_game
from .quantum import (
    DEFAULT_PAIR_BUDGET,
    OptimizeOptions,
    PairBudgetError,
    optimize_quantum,
    target_quantum_probe,
)
from .runner import SessionConfig, StrategyMismatchError, run_session


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("GRAPHGAME_THREADS")
    return int(env) if env else 1


def _emit(pairs) -> None:
    sys.stdout.write(io.render_report(pairs))


def _load_spec(path, pairs) -> object | None:
    try:
        return io.parse_game_file(path)
    except FileNotFoundError:
        pairs.append(("status", "error"))
        pairs.append(("error", f"no such file: {path}"))
        return None
    except io.GameSpecError as exc:
        pairs.append(("status", "error"))
        loc = f" (line {exc.line}, column {exc.column})" if exc.line else ""
        pairs.append(("error", f"parse error{loc}: {exc}"))
        return None


def cmd_validate(args) -> int:
    pairs = [("command", "validate"), ("spec", str(args.spec))]
    game = _load_spec(args.spec, pairs)
    if game is None:
        _emit(pairs)
        return 3
    violations = validate_game(game)
    pairs.append(("game_digest", io.game_digest(game)))
    if violations:
        pairs.append(("status", "invalid"))
        pairs.append(("violations", str(len(violations))))
        for k, v in enumerate(violations):
            pairs.append((f"violation.{k}", f"[{v.code}] {v.message}"))
        _emit(pairs)
        return 2
    pairs.append(("status", "ok"))
    pairs.append(("violations", "0"))
    _emit(pairs)
    return 0


def cmd_classify(args) -> int:
    pairs = [("command", "classify"), ("spec", str(args.spec))]
    game = _load_spec(args.spec, pairs)
    if game is None:
        _emit(pairs)
        return 3
    if not isinstance(game.payoff, ConsistencyPayoff):
        pairs.append(("status", "error"))
        pairs.append(("error", "classify requires a consistency-mode game"))
        _emit(pairs)
        return 6
    pairs.append(("game_digest", io.game_digest(game)))
    t0 = time.perf_counter()
    result = classification.classify(game, semantics=args.semantics, budget=args.budget)
    pairs.append(("semantics", args.semantics))
    for i in sorted(result.indices.indices):
        idx = result.indices.indices[i]
        pairs.append((f"index.{i}", str(idx) if idx is not None else "none"))
    pairs.append(("verdict", result.verdict))
    used = result.classical_value_used
    pairs.append(("omega_c_used", io.fmt_float(used) if used is not None else "unavailable"))
    pairs.append(("timing.classify_ms", io.fmt_float((time.perf_counter() - t0) * 1e3)))
    _emit(pairs)
    return 0


def cmd_value(args) -> int:
    pairs = [("command", "value"), ("spec", str(args.spec))]
    game = _load_spec(args.spec, pairs)
    if game is None:
        _emit(pairs)
        return 3
    if not isinstance(game.payoff, ConsistencyPayoff):
        pairs.append(("status", "error"))
        pairs.append(("error", "value requires a consistency-mode game (see the gyni command)"))
        _emit(pairs)
        return 6
    pairs.append(("game_digest", io.game_digest(game)))
    want_classical = args.classical or not args.quantum
    omega_c = None
    witness = None
    if want_classical:
        t0 = time.perf_counter()
        try:
            omega_c, witness = classical_value(game, budget=args.budget)
        except StrategySpaceError as exc:
            pairs.append(("status", "error"))
            pairs.append(("error", str(exc)))
            pairs.append(("space_size", str(exc.space_size)))
            pairs.append(("budget", str(exc.budget)))
            _emit(pairs)
            return 4
        pairs.append(("omega_c", io.fmt_float(omega_c)))
        pairs.append(("omega_c_witness", json.dumps(json.loads(io.serialize_strategy(witness)), sort_keys=True)))
        pairs.append(("timing.classical_ms", io.fmt_float((time.perf_counter() - t0) * 1e3)))
    omega_q = None
    if args.quantum:
        t0 = time.perf_counter()
        opts = OptimizeOptions(
            restarts=args.restarts,
            tolerance=args.tolerance,
            seed=args.seed,
            grid_size=args.grid_size,
            pair_budget=args.pair_budget,
            allow_multiway=True,
            threads=_threads(args),
        )
        try:
            result = optimize_quantum(game, opts)
        except PairBudgetError as exc:
            pairs.append(("status", "error"))
            pairs.append(("error", str(exc)))
            pairs.append(("space_size", str(exc.pairs)))
            pairs.append(("budget", str(exc.budget)))
            _emit(pairs)
            return 4
        omega_q = result.value
        pairs.append(("omega_q_lower", io.fmt_float(result.value)))
        pairs.append(("restarts_used", str(result.restarts_used)))
        pairs.append(("converged", "true" if result.converged else "false"))
        pairs.append(
            ("omega_q_strategy", json.dumps(json.loads(io.serialize_strategy(result.strategy)), sort_keys=True))
        )
        pairs.append(("timing.quantum_ms", io.fmt_float((time.perf_counter() - t0) * 1e3)))
    t0 = time.perf_counter()
    verdictobj = classification.classify(game, omega_c=omega_c, budget=args.budget)
    pairs.append(("verdict", verdictobj.verdict))
    pairs.append(("timing.classify_ms", io.fmt_float((time.perf_counter() - t0) * 1e3)))
    if omega_c is not None and omega_q is not None:
        pairs.append(("advantage_observed", "true" if omega_q > omega_c else "false"))
    _emit(pairs)
    return 0


def cmd_simulate(args) -> int:
    pairs = [("command", "simulate"), ("spec", str(args.spec))]
    game = _load_spec(args.spec, pairs)
    if game is None:
        _emit(pairs)
        return 3
    pairs.append(("game_digest", io.game_digest(game)))
    try:
        strategy = io.parse_strategy_file(args.strategy)
    except FileNotFoundError:
        pairs.append(("status", "error"))
        pairs.append(("error", f"no such strategy file: {args.strategy}"))
        _emit(pairs)
        return 5
    except io.StrategyFileError as exc:
        pairs.append(("status", "error"))
        pairs.append(("error", f"bad strategy file: {exc}"))
        _emit(pairs)
        return 5
    config = SessionConfig(rounds=args.rounds, seed=args.seed, strategy=strategy)
    try:
        stats = run_session(game, config)
    except (StrategyMismatchError, GraphGameError) as exc:
        pairs.append(("status", "error"))
        pairs.append(("error", str(exc)))
        _emit(pairs)
        return 5
    pairs.append(("rounds", str(stats.rounds)))
    pairs.append(("wins", str(stats.wins)))
    pairs.append(("estimate", io.fmt_float(stats.estimate)))
    pairs.append(("stderr", io.fmt_float(stats.stderr)))
    for key, (plays, wins) in stats.per_input_counts.items():
        pairs.append((f"per_input.{key}", f"{plays} {wins}"))
    _emit(pairs)
    return 0


def cmd_gyni(args) -> int:
    pairs = [("command", "gyni"), ("spec", str(args.spec))]
    game = _load_spec(args.spec, pairs)
    if game is None:
        _emit(pairs)
        return 3
    if not isinstance(game.payoff, TargetPayoff):
        pairs.append(("status", "error"))
        pairs.append(("error", "gyni requires a target-mode game"))
        _emit(pairs)
        return 6
    pairs.append(("game_digest", io.game_digest(game)))
    injective = check_injective(game.payoff.targets, game.n)
    pairs.append(("injective", "true" if injective else "false"))
    pairs.append(("classical_bound", io.fmt_float(gyni_classical_bound(game.distribution, game.n))))
    try:
        brute = target_classical_value(game, budget=args.budget)
    except StrategySpaceError as exc:
        pairs.append(("status", "error"))
        pairs.append(("error", str(exc)))
        pairs.append(("space_size", str(exc.space_size)))
        pairs.append(("budget", str(exc.budget)))
        _emit(pairs)
        return 4
    pairs.append(("brute_force_value", io.fmt_float(brute)))
    opts = OptimizeOptions(restarts=args.restarts, seed=args.seed, threads=_threads(args))
    pairs.append(("quantum_probe", io.fmt_float(target_quantum_probe(game, opts))))
    _emit(pairs)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphgame",
        description="Build, validate, solve and simulate graph-based cooperative games.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("validate", help="check a game spec file")
    p.add_argument("spec")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("classify", help="sharing indices and advantage verdict")
    p.add_argument("spec")
    p.add_argument(
        "--semantics",
        choices=list(classification.SEMANTICS),
        default=classification.COMMON_INTERSECTION,
    )
    p.add_argument("--budget", type=int, default=DEFAULT_STRATEGY_BUDGET)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("value", help="classical value and/or quantum lower bound")
    p.add_argument("spec")
    p.add_argument("--classical", action="store_true")
    p.add_argument("--quantum", action="store_true")
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, default=1e-6)
    p.add_argument("--grid-size", type=int, default=16)
    p.add_argument("--budget", type=int, default=DEFAULT_STRATEGY_BUDGET)
    p.add_argument("--pair-budget", type=int, default=DEFAULT_PAIR_BUDGET)
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=cmd_value)

    p = sub.add_parser("simulate", help="Monte Carlo referee sessions")
    p.add_argument("spec")
    p.add_argument("--strategy", required=True)
    p.add_argument("--rounds", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("gyni", help="target-mode analysis: injectivity, bounds, probe")
    p.add_argument("spec")
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=DEFAULT_STRATEGY_BUDGET)
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=cmd_gyni)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
