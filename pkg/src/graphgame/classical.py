"""Exact classical game values by exhaustive deterministic-strategy search.

The search space is reduced before enumeration: within one (player, input)
vertex set, vertices are grouped by their membership signature across the
other players' owned sets, because the referee only ever looks at products
over such regions.  One representative sign per group is enumerated and the
rest are pinned to +1, which preserves the optimum exactly.  Two further
exact reductions apply: for a low-block player a group that lies in no
constrained region is dropped outright, and for a high-block player such a
group merely absorbs the total-product condition (the witness sets its
representative to whatever sign restores the product to +1).

The module also carries the closed-form values used to cross-check the
search on star-shaped and fully-shared games, the complementary-pair bound
for target games, and the injectivity check for target functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _iter_product
from typing import Mapping, Sequence

import numpy as np

from .model import (
    ConsistencyPayoff,
    GraphGameError,
    GraphicGame,
    InputDistribution,
    TargetPayoff,
    bits_key,
    input_vectors,
    input_weight,
)

DEFAULT_STRATEGY_BUDGET = 1 << 24

# Joint win tensors are processed in blocks of at most this many entries.
_BLOCK_ENTRIES = 1 << 22


class StrategySpaceError(GraphGameError):
    """The deterministic strategy space exceeds the configured budget."""

    def __init__(self, space_size: int, budget: int):
        super().__init__(
            f"strategy space has {space_size} points after grouping, budget is {budget}"
        )
        self.space_size = space_size
        self.budget = budget


@dataclass(frozen=True)
class DeterministicStrategy:
    """A full deterministic answer plan: a sign per (player, input, vertex).

    ``index`` is the strategy's position in the reduced enumeration order,
    kept so that tie-breaks and replays are reproducible.
    """

    signs: Mapping[tuple[int, int, str], int]
    index: int = 0


@dataclass(frozen=True)
class ClosedFormParams:
    """Inputs to the closed-form value formulas.

    ``p`` is the probability of input bit 0, ``p_star`` the constant win
    factor contributed by unconstrained pairs, ``n1`` the star size (hub
    plus leaves), ``l`` the count of mutually sharing players.
    """

    p: float
    p_star: float = 1.0
    n1: int | None = None
    l: int | None = None  # noqa: E741 - matches the usual symbol

    def _check_base(self) -> None:
        if not (0.0 <= self.p <= 1.0):
            raise ValueError(f"p={self.p} outside [0, 1]")
        if not (0.0 <= self.p_star <= 1.0):
            raise ValueError(f"p_star={self.p_star} outside [0, 1]")


@dataclass(frozen=True)
class _Enumeration:
    """Reduced per-player choice spaces plus the tables the evaluator needs."""

    choices: tuple[int, ...]  # joint (input0, input1) patterns per player
    group_bits: dict[tuple[int, int], int]
    groups: dict[tuple[int, int], list[tuple[str, ...]]]
    region_masks: dict[tuple[int, int, int, int], int]  # (i, x_i, j, x_j) -> bit mask
    a_checked: dict[tuple[int, int], bool]  # high-block (i, x): total product enforced?
    free_groups: dict[tuple[int, int], tuple[str, ...]]  # absorbing group, if any
    dropped: dict[tuple[int, int], list[tuple[str, ...]]]  # unconstrained low-block groups

    @property
    def space_size(self) -> int:
        size = 1
        for c in self.choices:
            size *= c
        return size


def _build_enumeration(game: GraphicGame) -> _Enumeration:
    n, m = game.n, game.m
    group_bits: dict[tuple[int, int], int] = {}
    groups: dict[tuple[int, int], list[tuple[str, ...]]] = {}
    region_masks: dict[tuple[int, int, int, int], int] = {}
    a_checked: dict[tuple[int, int], bool] = {}
    free_groups: dict[tuple[int, int], tuple[str, ...]] = {}
    dropped: dict[tuple[int, int], list[tuple[str, ...]]] = {}

    for i in range(1, n + 1):
        if i <= m:
            relevant = [j for j in range(m + 1, n + 1)]
        else:
            relevant = [j for j in range(1, n + 1) if j != i]
        for x in (0, 1):
            sigs: dict[frozenset[tuple[int, int]], list[str]] = {}
            for v in sorted(game.owned(i, x)):
                sig = frozenset(
                    (j, xj) for j in relevant for xj in (0, 1) if v in game.owned(j, xj)
                )
                sigs.setdefault(sig, []).append(v)
            ordered = sorted(sigs.items(), key=lambda kv: kv[1][0] if kv[1] else "")
            kept: list[tuple[frozenset, tuple[str, ...]]] = []
            dropped[(i, x)] = []
            for sig, verts in ordered:
                if sig:
                    kept.append((sig, tuple(verts)))
                elif i > m:
                    # One sign free of every region: it can always restore the
                    # total product, so the product condition never binds.
                    free_groups[(i, x)] = tuple(verts)
                else:
                    dropped[(i, x)].append(tuple(verts))
            groups[(i, x)] = [verts for _, verts in kept]
            group_bits[(i, x)] = len(kept)
            if i > m:
                a_checked[(i, x)] = (i, x) not in free_groups
            # Bit k of a pattern drives group k; weight is MSB-first.
            g = len(kept)
            for j in range(1, n + 1):
                if j == i:
                    continue
                for xj in (0, 1):
                    mask = 0
                    for k, (sig, _) in enumerate(kept):
                        if (j, xj) in sig:
                            mask |= 1 << (g - 1 - k)
                    region_masks[(i, x, j, xj)] = mask

    choices = tuple(
        1 << (group_bits[(i, 0)] + group_bits[(i, 1)]) for i in range(1, n + 1)
    )
    return _Enumeration(
        choices=choices,
        group_bits=group_bits,
        groups=groups,
        region_masks=region_masks,
        a_checked=a_checked,
        free_groups=free_groups,
        dropped=dropped,
    )


def _patterns_for(enum: _Enumeration, i: int, x: int) -> np.ndarray:
    """Per-choice bit pattern of player i at input x, over all joint choices."""
    codes = np.arange(enum.choices[i - 1], dtype=np.uint64)
    g0 = enum.group_bits[(i, 0)]
    g1 = enum.group_bits[(i, 1)]
    if x == 0:
        return (codes >> np.uint64(g1)) & np.uint64((1 << g0) - 1)
    return codes & np.uint64((1 << g1) - 1)


def _parity_sign(patterns: np.ndarray, mask: int) -> np.ndarray:
    ones = np.bitwise_count(patterns & np.uint64(mask)).astype(np.int8)
    return (1 - 2 * (ones & 1)).astype(np.int8)


def _pair_targets(game: GraphicGame, x: Sequence[int]):
    """Constrained pairs at input x: (i, j, wanted product of region signs)."""
    out = []
    for i in range(1, game.m + 1):
        for j in range(game.m + 1, game.n + 1):
            if game.owned(i, x[i - 1]) & game.owned(j, x[j - 1]):
                want = -1 if x[i - 1] == 1 and x[j - 1] == 1 else 1
                out.append((i, j, want))
    for i in range(game.m + 1, game.n + 1):
        for j in range(i + 1, game.n + 1):
            if game.owned(i, x[i - 1]) & game.owned(j, x[j - 1]):
                out.append((i, j, 1))
    return out


def classical_value(
    game: GraphicGame, budget: int = DEFAULT_STRATEGY_BUDGET
) -> tuple[float, DeterministicStrategy]:
    """Exact optimum over deterministic strategies, with an attaining witness.

    Ties break toward the lowest enumeration index.  Raises
    StrategySpaceError when the reduced space exceeds ``budget``.
    """
    if not isinstance(game.payoff, ConsistencyPayoff):
        raise GraphGameError("classical_value requires a consistency-mode game")
    enum = _build_enumeration(game)
    size = enum.space_size
    if size > budget:
        raise StrategySpaceError(size, budget)

    n = game.n
    shape = enum.choices
    rest = int(np.prod(shape[1:], dtype=np.int64)) if n > 1 else 1
    block = max(1, min(shape[0], _BLOCK_ENTRIES // max(rest, 1)))

    weighted = [
        (x, input_weight(game.distribution, x)) for x in input_vectors(n)
    ]
    weighted = [(x, w) for x, w in weighted if w != 0.0]

    # Per input vector: unary factors (high-block product checks) and pair
    # factors (region product targets), as arrays over per-player choices.
    per_input = []
    for x, w in weighted:
        unary = []
        for i in range(game.m + 1, n + 1):
            if enum.a_checked.get((i, x[i - 1])) and enum.group_bits[(i, x[i - 1])] > 0:
                pat = _patterns_for(enum, i, x[i - 1])
                full = (1 << enum.group_bits[(i, x[i - 1])]) - 1
                unary.append((i - 1, _parity_sign(pat, full) == 1))
        pairs = []
        for i, j, want in _pair_targets(game, x):
            zi = _parity_sign(
                _patterns_for(enum, i, x[i - 1]), enum.region_masks[(i, x[i - 1], j, x[j - 1])]
            )
            zj = _parity_sign(
                _patterns_for(enum, j, x[j - 1]), enum.region_masks[(j, x[j - 1], i, x[i - 1])]
            )
            pairs.append((i - 1, j - 1, zi, zj, want))
        per_input.append((w, unary, pairs))

    def _reshape(arr: np.ndarray, axis: int, local_shape: tuple[int, ...]) -> np.ndarray:
        dims = [1] * len(local_shape)
        dims[axis] = len(arr)
        return arr.reshape(dims)

    best_value = -1.0
    best_flat = 0
    for start in range(0, shape[0], block):
        stop = min(start + block, shape[0])
        local_shape = (stop - start,) + shape[1:]
        acc = np.zeros(local_shape, dtype=np.float64)
        for w, unary, pairs in per_input:
            mask = np.ones(local_shape, dtype=bool)
            for axis, arr in unary:
                a = arr[start:stop] if axis == 0 else arr
                mask &= _reshape(a, axis, local_shape)
            for ai, aj, zi, zj, want in pairs:
                zi_l = zi[start:stop] if ai == 0 else zi
                zj_l = zj[start:stop] if aj == 0 else zj
                pm = (zi_l[:, None].astype(np.int16) * zj_l[None, :]) == want
                dims = [1] * len(local_shape)
                dims[ai] = len(zi_l)
                dims[aj] = len(zj_l)
                mask &= pm.reshape(dims)
            acc[mask] += w
        flat = int(np.argmax(acc))
        value = float(acc.flat[flat])
        if value > best_value:
            best_value = value
            best_flat = start * rest + flat

    witness = _decode_strategy(game, enum, best_flat)
    return best_value, witness


def _decode_strategy(game: GraphicGame, enum: _Enumeration, flat: int) -> DeterministicStrategy:
    coords = []
    rem = flat
    for c in reversed(enum.choices):
        coords.append(rem % c)
        rem //= c
    coords.reverse()

    signs: dict[tuple[int, int, str], int] = {}
    for i in range(1, game.n + 1):
        code = coords[i - 1]
        g0 = enum.group_bits[(i, 0)]
        g1 = enum.group_bits[(i, 1)]
        patterns = {0: (code >> g1) & ((1 << g0) - 1), 1: code & ((1 << g1) - 1)}
        for x in (0, 1):
            for v in game.owned(i, x):
                signs[(i, x, v)] = 1
            g = enum.group_bits[(i, x)]
            parity = 1
            for k, verts in enumerate(enum.groups[(i, x)]):
                s = -1 if (patterns[x] >> (g - 1 - k)) & 1 else 1
                signs[(i, x, verts[0])] = s
                parity *= s
            free = enum.free_groups.get((i, x))
            if free:
                # Restore the high-block total product to +1.
                signs[(i, x, free[0])] = parity
    return DeterministicStrategy(signs=signs, index=flat)


def strategy_value(game: GraphicGame, strategy: DeterministicStrategy) -> float:
    """Average winning probability of one fixed deterministic strategy."""
    from .model import OutputAssignment, evaluate_payoff

    total = 0.0
    for x in input_vectors(game.n):
        w = input_weight(game.distribution, x)
        if w == 0.0:
            continue
        values = {
            (i, v): strategy.signs[(i, x[i - 1], v)]
            for i in game.players
            for v in game.owned(i, x[i - 1])
        }
        total += w * evaluate_payoff(game, x, OutputAssignment(values)).verdict
    return total


def closed_form_star_classical(params: ClosedFormParams) -> float:
    """Optimal classical value of a star of simultaneous pair games.

    With p0 = max(p, 1-p), the value is p_star * (p0 + (1-p0) * p0**(n1-1)):
    all pairs go unconstrained on the likelier hub branch and each leaf is
    guessed independently on the other branch.
    """
    params._check_base()
    if params.n1 is None or params.n1 < 2:
        raise ValueError("star form needs n1 >= 2")
    p0 = max(params.p, 1.0 - params.p)
    return params.p_star * (p0 + (1.0 - p0) * p0 ** (params.n1 - 1))


def closed_form_shared_classical(params: ClosedFormParams) -> float:
    """Optimal classical value when l players all own one common region.

    The first player's branch at input 0 is always winnable; at input 1 it
    must match every other player's input, so the two branches give
    p_star * (p + p**(l-1) - p**l) for p >= 1/2 and
    p_star * (p + (1-p)**l) for p <= 1/2 (equal at p = 1/2).
    """
    params._check_base()
    if params.l is None or params.l < 3:
        raise ValueError("shared form needs l >= 3")
    p, l = params.p, params.l
    if p >= 0.5:
        return params.p_star * (p + p ** (l - 1) - p**l)
    return params.p_star * (p + (1.0 - p) ** l)


def gyni_classical_bound(dist: InputDistribution, n: int) -> float:
    """Best complementary-pair mass: max over x of P(x) + P(~x)."""
    best = 0.0
    for x in input_vectors(n):
        flipped = tuple(1 - b for b in x)
        best = max(best, input_weight(dist, x) + input_weight(dist, flipped))
    return best


def check_injective(targets, n: int) -> bool:
    """True iff x -> (f_1(x), ..., f_n(x)) has pairwise distinct images."""
    tables = targets.tables if hasattr(targets, "tables") else {int(i): dict(t) for i, t in targets.items()}
    seen = set()
    for x in input_vectors(n):
        key = bits_key(x)
        image = tuple(tables[i][key] for i in range(1, n + 1))
        if image in seen:
            return False
        seen.add(image)
    return True


def target_value_from_tables(
    tables: Mapping[int, Mapping[str, int]],
    dist: InputDistribution,
    n: int,
    budget: int = DEFAULT_STRATEGY_BUDGET,
) -> float:
    """Exact optimum over per-player response tables y_i: own bit -> value."""
    values_per_player = [sorted(set(tables[i].values())) for i in range(1, n + 1)]
    space = 1
    for vals in values_per_player:
        space *= len(vals) ** 2
    if space > budget:
        raise StrategySpaceError(space, budget)

    weighted = [(x, input_weight(dist, x)) for x in input_vectors(n)]
    weighted = [(x, w) for x, w in weighted if w != 0.0]
    best = 0.0
    response_spaces = [
        list(_iter_product(vals, repeat=2)) for vals in values_per_player
    ]
    for responses in _iter_product(*response_spaces):
        total = 0.0
        for x, w in weighted:
            key = bits_key(x)
            if all(responses[i - 1][x[i - 1]] == tables[i][key] for i in range(1, n + 1)):
                total += w
        if total > best:
            best = total
    return best


def target_classical_value(game: GraphicGame, budget: int = DEFAULT_STRATEGY_BUDGET) -> float:
    """Exact classical optimum of a target-mode game."""
    if not isinstance(game.payoff, TargetPayoff):
        raise GraphGameError("target_classical_value requires a target-mode game")
    return target_value_from_tables(
        game.payoff.targets.tables, game.distribution, game.n, budget
    )
