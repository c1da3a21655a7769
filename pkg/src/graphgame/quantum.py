"""EPR-pair strategies: exact win probabilities and angle optimization.

Resource model: every vertex owned by exactly two players carries one
maximally-entangled qubit pair, one half per owner.  A strategy gives each
player a measurement direction per (pair vertex, own input) -- rank-1
projective measurements in a single plane, so one angle each -- plus a
wiring that turns measured outcomes into the per-vertex output signs.  An
output expression is a fixed sign times the product of a subset of the
player's own measured outcomes at that input; an empty subset is a
deterministic sign.

Outcome statistics for one pair measured along ``theta_a`` and ``theta_b``:

    P(a, b) = (1 + a * b * cos(theta_a - theta_b)) / 4

with uniform marginals; a half that nobody measures behaves as an
independent fair sign.  Winning probabilities are computed exactly by
enumerating outcome tuples of the measured halves, so every optimizer
result is a genuine lower bound on the game's quantum value, never an
estimate.

Vertices owned by three or more players have no pair here and are rejected
by default; passing ``allow_multiway=True`` treats them as unentangled
(deterministic outputs only), which is the honest model when such sharing
exists and is what the command-line tools use.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product as _iter_product
from typing import Mapping, Optional, Sequence

import numpy as np

from .classical import DeterministicStrategy, target_value_from_tables
from .model import (
    ConsistencyPayoff,
    GraphGameError,
    GraphicGame,
    OutputAssignment,
    TargetPayoff,
    evaluate_payoff,
    input_vectors,
    input_weight,
)

DEFAULT_PAIR_BUDGET = 12

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_INVPHI2 = (3.0 - math.sqrt(5.0)) / 2.0


class MultiwaySharedVertexError(GraphGameError):
    """A vertex is owned by three or more players; no single pair fits it."""

    def __init__(self, vertices: Sequence[str]):
        super().__init__(
            "vertices shared by three or more players: " + ", ".join(sorted(vertices))
        )
        self.vertices = tuple(sorted(vertices))


class PairBudgetError(GraphGameError):
    """More pairs than the exact evaluator is allowed to enumerate."""

    def __init__(self, pairs: int, budget: int):
        super().__init__(f"game has {pairs} pairs, budget is {budget}")
        self.pairs = pairs
        self.budget = budget


class StrategyError(GraphGameError):
    """A quantum strategy is malformed for the given game."""


def epr_correlator(theta_a: float, theta_b: float) -> float:
    """Expectation of the product of the two outcomes: cos(theta_a - theta_b)."""
    return math.cos(theta_a - theta_b)


def pair_outcome_distribution(
    theta_a: Optional[float], theta_b: Optional[float]
) -> tuple[float, float, float, float]:
    """Probabilities of (+,+), (+,-), (-,+), (-,-) for one pair.

    Passing None for a side means that half is not measured; its recorded
    sign is then an independent fair coin.
    """
    if theta_a is None or theta_b is None:
        return (0.25, 0.25, 0.25, 0.25)
    c = math.cos(theta_a - theta_b)
    same = (1.0 + c) / 4.0
    diff = (1.0 - c) / 4.0
    return (same, diff, diff, same)


@dataclass(frozen=True)
class PairModel:
    """One entangled pair per two-owner vertex, sorted by vertex id."""

    pairs: tuple[tuple[str, int, int], ...]
    multiway: tuple[str, ...] = ()

    def owners(self, vertex: str) -> tuple[int, int]:
        for v, a, b in self.pairs:
            if v == vertex:
                return (a, b)
        raise KeyError(vertex)


def build_pair_model(game: GraphicGame, allow_multiway: bool = False) -> PairModel:
    owners: dict[str, set[int]] = {}
    for i in game.players:
        for x in (0, 1):
            for v in game.owned(i, x):
                owners.setdefault(v, set()).add(i)
    pairs = []
    multiway = []
    for v in sorted(owners):
        who = sorted(owners[v])
        if len(who) == 2:
            pairs.append((v, who[0], who[1]))
        elif len(who) >= 3:
            multiway.append(v)
    if multiway and not allow_multiway:
        raise MultiwaySharedVertexError(multiway)
    return PairModel(pairs=tuple(pairs), multiway=tuple(multiway))


@dataclass(frozen=True)
class OutputExpr:
    """sign * product of the player's measured outcomes on ``refs``."""

    sign: int
    refs: tuple[str, ...] = ()


@dataclass(frozen=True)
class QuantumStrategy:
    """Measurement angles keyed (player, vertex, input) plus output wiring.

    An absent angle key means the player does not measure that half at that
    input.  Wiring keys are (player, input, vertex) over owned vertices.
    """

    angles: Mapping[tuple[int, str, int], float]
    wiring: Mapping[tuple[int, int, str], OutputExpr]

    def with_angles(self, angles: Mapping[tuple[int, str, int], float]) -> "QuantumStrategy":
        return QuantumStrategy(angles=dict(angles), wiring=dict(self.wiring))


@dataclass(frozen=True)
class QuantumValueResult:
    value: float
    strategy: QuantumStrategy
    restarts_used: int
    converged: bool


@dataclass(frozen=True)
class OptimizeOptions:
    restarts: int = 20
    grid_size: int = 16
    tolerance: float = 1e-6
    seed: int = 0
    template: str = "auto"
    pair_budget: int = DEFAULT_PAIR_BUDGET
    allow_multiway: bool = False
    threads: int = 1
    max_sweeps: int = 40


def validate_strategy(game: GraphicGame, strategy: QuantumStrategy, model: PairModel) -> None:
    pair_owner = {v: (a, b) for v, a, b in model.pairs}
    for (i, v, x) in strategy.angles:
        if v not in pair_owner:
            raise StrategyError(f"angle on {v!r}: vertex carries no pair")
        if i not in pair_owner[v]:
            raise StrategyError(f"angle on {v!r}: player {i} holds no half of it")
        if x not in (0, 1):
            raise StrategyError(f"angle input must be a bit, got {x!r}")
    for i in game.players:
        for x in (0, 1):
            measured = {v for (p, v, xx) in strategy.angles if p == i and xx == x}
            owned = game.owned(i, x)
            keys = {(i, x, v) for v in owned}
            present = {k for k in strategy.wiring if k[0] == i and k[1] == x}
            if keys != present:
                raise StrategyError(
                    f"player {i} at input {x}: wiring must cover exactly the owned vertices"
                )
            for v in owned:
                expr = strategy.wiring[(i, x, v)]
                if expr.sign not in (1, -1):
                    raise StrategyError(f"wiring sign must be +1/-1 on {v!r}")
                for r in expr.refs:
                    if r not in measured:
                        raise StrategyError(
                            f"player {i} at input {x} wires {v!r} to unmeasured {r!r}"
                        )


def build_strategy(
    game: GraphicGame, template: str = "auto", allow_multiway: bool = False
) -> tuple[QuantumStrategy, PairModel]:
    """Wiring template with all angles initialised to 0.

    ``direct``: each owned pair vertex outputs its own outcome, everything
    else outputs +1.  ``auto``: per counterpart the two owners agree on one
    designated pair (the smallest shared pair vertex) and copy its outcome
    to every region vertex; a high-block player with a leftover odd outcome
    product routes it onto one of its private vertices so the total product
    is deterministically +1.  ``auto`` is the template the optimizer uses.
    """
    if template not in ("auto", "direct"):
        raise StrategyError(f"unknown template {template!r}")
    model = build_pair_model(game, allow_multiway=allow_multiway)
    pair_owner = {v: (a, b) for v, a, b in model.pairs}
    all_owned: dict[str, set[int]] = {}
    for i in game.players:
        for x in (0, 1):
            for v in game.owned(i, x):
                all_owned.setdefault(v, set()).add(i)
    solo = {v for v, who in all_owned.items() if len(who) == 1}

    designated: dict[frozenset[int], str] = {}
    for v, a, b in model.pairs:
        key = frozenset((a, b))
        if key not in designated or v < designated[key]:
            designated[key] = v

    angles: dict[tuple[int, str, int], float] = {}
    wiring: dict[tuple[int, int, str], OutputExpr] = {}
    for i in game.players:
        for x in (0, 1):
            owned = sorted(game.owned(i, x))
            refs_used: dict[str, int] = {}
            exprs: dict[str, OutputExpr] = {}
            for v in owned:
                if v in pair_owner and i in pair_owner[v]:
                    if template == "direct":
                        ref = v
                    else:
                        a, b = pair_owner[v]
                        j = b if i == a else a
                        ref = designated[frozenset((i, j))]
                    exprs[v] = OutputExpr(1, (ref,))
                    refs_used[ref] = refs_used.get(ref, 0) + 1
                else:
                    exprs[v] = OutputExpr(1, ())
            if template == "auto" and i > game.m:
                odd = tuple(sorted(r for r, c in refs_used.items() if c % 2))
                if odd:
                    slack = next((v for v in owned if v in solo), None)
                    if slack is not None:
                        exprs[slack] = OutputExpr(1, odd)
            for v, expr in exprs.items():
                wiring[(i, x, v)] = expr
                for r in expr.refs:
                    angles[(i, r, x)] = 0.0
    strategy = QuantumStrategy(angles=angles, wiring=wiring)
    validate_strategy(game, strategy, model)
    return strategy, model


def deterministic_as_quantum(game: GraphicGame, det: DeterministicStrategy) -> QuantumStrategy:
    """Embed a deterministic strategy: no measurements, fixed signs."""
    wiring = {
        (i, x, v): OutputExpr(det.signs[(i, x, v)], ())
        for i in game.players
        for x in (0, 1)
        for v in game.owned(i, x)
    }
    return QuantumStrategy(angles={}, wiring=wiring)


@dataclass(frozen=True)
class _CompiledInput:
    weight: float
    # per active pair: (slot index of side a or None, slot index of side b or None)
    specs: tuple[tuple[Optional[int], Optional[int]], ...]
    wins: tuple[float, ...]


class _Evaluator:
    def __init__(self, game: GraphicGame, strategy: QuantumStrategy, model: PairModel):
        self.slots: list[tuple[int, str, int]] = sorted(strategy.angles)
        index = {k: i for i, k in enumerate(self.slots)}
        self.inputs: list[_CompiledInput] = []
        for x in input_vectors(game.n):
            w = input_weight(game.distribution, x)
            if w == 0.0:
                continue
            specs = []
            sides = []  # (player, vertex) per enumerated outcome variable
            for v, a, b in model.pairs:
                ka = (a, v, x[a - 1])
                kb = (b, v, x[b - 1])
                ia = index.get(ka)
                ib = index.get(kb)
                if ia is None and ib is None:
                    continue
                specs.append((ia, ib))
                if ia is not None:
                    sides.append((a, v))
                if ib is not None:
                    sides.append((b, v))
            dims = [4 if ia is not None and ib is not None else 2 for ia, ib in specs]
            wins = []
            for combo in _iter_product(*[_OUTCOMES[d] for d in dims]):
                outcomes: dict[tuple[int, str], int] = {}
                pos = 0
                for (ia, ib), vals in zip(specs, combo):
                    if ia is not None and ib is not None:
                        outcomes[sides[pos]] = vals[0]
                        outcomes[sides[pos + 1]] = vals[1]
                        pos += 2
                    else:
                        outcomes[sides[pos]] = vals[0]
                        pos += 1
                values = {}
                for i in game.players:
                    for v in game.owned(i, x[i - 1]):
                        expr = strategy.wiring[(i, x[i - 1], v)]
                        s = expr.sign
                        for r in expr.refs:
                            s *= outcomes[(i, r)]
                        values[(i, v)] = s
                verdict = evaluate_payoff(game, x, OutputAssignment(values)).verdict
                wins.append(float(verdict))
            self.inputs.append(_CompiledInput(w, tuple(specs), tuple(wins)))

    def value(self, theta: Sequence[float]) -> float:
        total = 0.0
        for inp in self.inputs:
            probs = [1.0]
            for ia, ib in inp.specs:
                if ia is not None and ib is not None:
                    c = math.cos(theta[ia] - theta[ib])
                    q = (1.0 + c) * 0.25
                    r = (1.0 - c) * 0.25
                    probs = [p * e for p in probs for e in (q, r, r, q)]
                else:
                    probs = [p * 0.5 for p in probs for _ in (0, 1)]
            total += inp.weight * math.fsum(p * w for p, w in zip(probs, inp.wins) if w)
        return total


_OUTCOMES = {
    4: ((1, 1), (1, -1), (-1, 1), (-1, -1)),
    2: ((1,), (-1,)),
}


def exact_quantum_value(
    game: GraphicGame,
    strategy: QuantumStrategy,
    pair_budget: int = DEFAULT_PAIR_BUDGET,
    allow_multiway: bool = False,
) -> float:
    """Exact average winning probability of one fixed pair-measurement strategy."""
    if not isinstance(game.payoff, ConsistencyPayoff):
        raise GraphGameError("exact_quantum_value requires a consistency-mode game")
    model = build_pair_model(game, allow_multiway=allow_multiway)
    if len(model.pairs) > pair_budget:
        raise PairBudgetError(len(model.pairs), pair_budget)
    validate_strategy(game, strategy, model)
    ev = _Evaluator(game, strategy, model)
    theta = [strategy.angles[k] for k in ev.slots]
    return ev.value(theta)


def _golden_max(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    a, b = lo, hi
    h = b - a
    if h <= tol:
        mid = 0.5 * (a + b)
        return mid, f(mid)
    steps = max(1, int(math.ceil(math.log(tol / h) / math.log(_INVPHI))))
    c = a + _INVPHI2 * h
    d = a + _INVPHI * h
    yc = f(c)
    yd = f(d)
    for _ in range(steps - 1):
        if yc > yd:
            b, d, yd = d, c, yc
            h *= _INVPHI
            c = a + _INVPHI2 * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            h *= _INVPHI
            d = a + _INVPHI * h
            yd = f(d)
    return (c, yc) if yc > yd else (d, yd)


def _ascend(ev: _Evaluator, theta: np.ndarray, opts: OptimizeOptions) -> tuple[float, bool]:
    """Cyclic per-angle line search: grid scan then golden refinement."""
    value = ev.value(theta)
    if not len(theta):
        return value, True
    converged = False
    grid = [2.0 * math.pi * k / opts.grid_size for k in range(opts.grid_size)]
    step = 2.0 * math.pi / opts.grid_size
    for _ in range(opts.max_sweeps):
        before = value
        for idx in range(len(theta)):
            def f(t: float, idx: int = idx) -> float:
                theta[idx] = t
                return ev.value(theta)

            best_t, best_v = theta[idx], f(theta[idx])
            for t in grid:
                v = f(t)
                if v > best_v:
                    best_t, best_v = t, v
            t_ref, v_ref = _golden_max(f, best_t - step, best_t + step, opts.tolerance)
            if v_ref > best_v:
                best_t, best_v = t_ref, v_ref
            theta[idx] = best_t
            value = best_v
        if value - before < opts.tolerance:
            converged = True
            break
    return value, converged


def optimize_quantum(game: GraphicGame, options: OptimizeOptions | None = None) -> QuantumValueResult:
    """Multi-start coordinate ascent over measurement angles.

    The wiring stays fixed to the selected template; only angles move.  All
    randomness flows from ``options.seed`` (one independent substream per
    restart), so results are identical for any thread count.  The returned
    value is exact for the returned strategy, hence a true lower bound.
    """
    opts = options or OptimizeOptions()
    if not isinstance(game.payoff, ConsistencyPayoff):
        raise GraphGameError("optimize_quantum requires a consistency-mode game")
    strategy, model = build_strategy(game, opts.template, allow_multiway=opts.allow_multiway)
    if len(model.pairs) > opts.pair_budget:
        raise PairBudgetError(len(model.pairs), opts.pair_budget)
    ev = _Evaluator(game, strategy, model)
    k = len(ev.slots)

    def run(restart: int) -> tuple[float, int, np.ndarray, bool]:
        rng = np.random.default_rng(np.random.SeedSequence((opts.seed & (2**63 - 1), restart)))
        theta = rng.uniform(0.0, 2.0 * math.pi, size=k)
        value, converged = _ascend(ev, theta, opts)
        return value, restart, theta, converged

    if opts.threads > 1 and opts.restarts > 1:
        with ThreadPoolExecutor(max_workers=opts.threads) as pool:
            results = list(pool.map(run, range(opts.restarts)))
    else:
        results = [run(r) for r in range(opts.restarts)]

    best = max(results, key=lambda r: (r[0], -r[1]))
    value, _, theta, converged = best
    angles = {key: float(t) for key, t in zip(ev.slots, theta)}
    return QuantumValueResult(
        value=value,
        strategy=strategy.with_angles(angles),
        restarts_used=opts.restarts,
        converged=converged,
    )


def closed_form_star_quantum(params) -> float:
    """Best pair-measurement value of the star game, by 1-D search.

    With q = 1-p and c = sqrt(2 - 4pq), the value is

        p_star / 2**(n1-1) * max_theta [ p (1 + c cos theta)**(n1-1)
                                         + q (1 + c sin theta)**(n1-1) ]

    where theta is confined to directions with c*cos(theta) <= 1 and
    c*sin(theta) <= 1 (the two branch observables have unit norm, so the
    unconstrained maximum is not physical once c > 1).
    """
    params._check_base()
    if params.n1 is None or params.n1 < 2:
        raise ValueError("star form needs n1 >= 2")
    p = params.p
    q = 1.0 - p
    n1 = params.n1
    c = math.sqrt(2.0 - 4.0 * p * q)
    reach = min(1.0, 1.0 / c)
    lo = math.acos(reach)
    hi = math.asin(reach)

    def f(theta: float) -> float:
        return p * (1.0 + c * math.cos(theta)) ** (n1 - 1) + q * (
            1.0 + c * math.sin(theta)
        ) ** (n1 - 1)

    if hi - lo <= 1e-15:
        best = f(0.5 * (lo + hi))
    else:
        grid = 256
        ts = [lo + (hi - lo) * k / grid for k in range(grid + 1)]
        vals = [f(t) for t in ts]
        k = max(range(len(ts)), key=lambda idx: vals[idx])
        a = ts[max(0, k - 1)]
        b = ts[min(len(ts) - 1, k + 1)]
        _, best = _golden_max(f, a, b, 1e-12)
        best = max(best, vals[k])
    return params.p_star * best / 2.0 ** (n1 - 1)


def unbalanced_chsh_has_advantage(p00: float, p01: float, p10: float, p11: float) -> bool:
    """Advantage test for a pair game with per-question prior {p00,p01,p10,p11}."""
    probs = (p00, p01, p10, p11)
    if any(p <= 0.0 for p in probs):
        raise GraphGameError("advantage condition undefined for zero probability entries")
    if abs(sum(probs) - 1.0) > 1e-9:
        raise ValueError(f"probabilities sum to {sum(probs)!r}, not 1")
    if min(p10, p11) <= min(p00, p01):
        return (1.0 / p10 - 1.0 / p11) ** 2 - (1.0 / p00 + 1.0 / p01) ** 2 < 0.0
    return (1.0 / p00 - 1.0 / p01) ** 2 - (1.0 / p10 + 1.0 / p11) ** 2 < 0.0


def trig_power_mean_holds(angles: Sequence[float]) -> bool:
    """Geometric means of sin / cos never beat sin / cos of the mean angle.

    Checked with a 1e-12 slack so that exact equality cases pass.
    """
    if len(angles) < 2:
        raise GraphGameError("need at least two angles")
    for t in angles:
        if not (0.0 <= t <= math.pi / 2.0 + 1e-15):
            raise GraphGameError(f"angle {t!r} outside [0, pi/2]")
    s = len(angles)
    mean = math.fsum(angles) / s
    sin_gm = math.prod(math.sin(t) for t in angles) ** (1.0 / s)
    cos_gm = math.prod(math.cos(t) for t in angles) ** (1.0 / s)
    return sin_gm <= math.sin(mean) + 1e-12 and cos_gm <= math.cos(mean) + 1e-12


def target_quantum_probe(game: GraphicGame, options: OptimizeOptions | None = None) -> float:
    """Best found value of outcome-driven response strategies for a target game.

    Players measure every pair half they hold and answer from (own input,
    own outcomes) via response tables; tables are optimized by exact
    per-cell best response and angles by coordinate ascent.  Every reported
    number is the exact value of a concrete strategy, so for injective
    targets it can never exceed the classical optimum.  Games without any
    two-owner vertex degenerate to the classical response search.
    """
    if not isinstance(game.payoff, TargetPayoff):
        raise GraphGameError("target_quantum_probe requires a target-mode game")
    opts = options or OptimizeOptions()
    model = build_pair_model(game, allow_multiway=True)
    tables = game.payoff.targets.tables
    if not model.pairs:
        return target_value_from_tables(tables, game.distribution, game.n)

    n = game.n
    my_pairs = {i: [v for v, a, b in model.pairs if i in (a, b)] for i in game.players}
    images = {i: sorted(set(tables[i].values())) for i in game.players}
    slots = sorted(
        (i, v, x) for v, a, b in model.pairs for i in (a, b) for x in (0, 1)
    )
    slot_index = {key: idx for idx, key in enumerate(slots)}
    weighted = [
        (x, input_weight(game.distribution, x)) for x in input_vectors(n)
    ]
    weighted = [(x, w) for x, w in weighted if w != 0.0]
    combos = list(_iter_product(*[_OUTCOMES[4] for _ in model.pairs]))

    def outcome_views(combo) -> dict[int, tuple[int, ...]]:
        per_player = {}
        for i in game.players:
            view = []
            for v in my_pairs[i]:
                k = next(idx for idx, (pv, _, _) in enumerate(model.pairs) if pv == v)
                a_side = model.pairs[k][1]
                view.append(combo[k][0] if i == a_side else combo[k][1])
            per_player[i] = tuple(view)
        return per_player

    views = [outcome_views(c) for c in combos]

    def probs_for(x, theta) -> list[float]:
        out = [1.0]
        for v, a, b in model.pairs:
            c = math.cos(theta[slot_index[(a, v, x[a - 1])]] - theta[slot_index[(b, v, x[b - 1])]])
            q = (1.0 + c) * 0.25
            r = (1.0 - c) * 0.25
            out = [p * e for p in out for e in (q, r, r, q)]
        return out

    def value_of(tables_now, theta) -> float:
        total = 0.0
        for x, w in weighted:
            key = "".join(str(b) for b in x)
            probs = probs_for(x, theta)
            for P, view in zip(probs, views):
                if all(
                    tables_now[i][(x[i - 1], view[i])] == tables[i][key]
                    for i in game.players
                ):
                    total += w * P
        return total

    def best_response(tables_now, theta, player) -> bool:
        changed = False
        for xbit in (0, 1):
            cells = sorted({view[player] for view in views})
            for cell in cells:
                score = {v: 0.0 for v in images[player]}
                for x, w in weighted:
                    if x[player - 1] != xbit:
                        continue
                    key = "".join(str(b) for b in x)
                    probs = probs_for(x, theta)
                    for P, view in zip(probs, views):
                        if view[player] != cell:
                            continue
                        if all(
                            tables_now[j][(x[j - 1], view[j])] == tables[j][key]
                            for j in game.players
                            if j != player
                        ):
                            score[tables[player][key]] += w * P
                best_v = max(images[player], key=lambda v: (score[v], -images[player].index(v)))
                if tables_now[player][(xbit, cell)] != best_v:
                    tables_now[player][(xbit, cell)] = best_v
                    changed = True
        return changed

    def keyed_tables(xstar) -> dict[int, dict]:
        flipped = tuple(1 - b for b in xstar)
        key_s = "".join(str(b) for b in xstar)
        key_f = "".join(str(b) for b in flipped)
        out: dict[int, dict] = {}
        for i in game.players:
            out[i] = {}
            for xbit in (0, 1):
                answer = tables[i][key_s] if xbit == xstar[i - 1] else tables[i][key_f]
                for view in views:
                    out[i][(xbit, view[i])] = answer
        return out

    xstar = max(input_vectors(n), key=lambda x: input_weight(game.distribution, x)
                + input_weight(game.distribution, tuple(1 - b for b in x)))

    best = 0.0
    for restart in range(max(1, opts.restarts)):
        rng = np.random.default_rng(np.random.SeedSequence((opts.seed & (2**63 - 1), restart)))
        theta = rng.uniform(0.0, 2.0 * math.pi, size=len(slots))
        tabs = keyed_tables(xstar)
        current = value_of(tabs, theta)
        for _ in range(opts.max_sweeps):
            for player in game.players:
                best_response(tabs, theta, player)
            for idx in range(len(theta)):
                def f(t: float, idx: int = idx) -> float:
                    theta[idx] = t
                    return value_of(tabs, theta)

                grid = [2.0 * math.pi * k / opts.grid_size for k in range(opts.grid_size)]
                best_t, best_v = theta[idx], f(theta[idx])
                for t in grid:
                    v = f(t)
                    if v > best_v:
                        best_t, best_v = t, v
                theta[idx] = best_t
            now = value_of(tabs, theta)
            if now - current < opts.tolerance:
                current = now
                break
            current = now
        best = max(best, current)
    return best
