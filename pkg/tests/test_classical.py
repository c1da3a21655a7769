import numpy as np
import pytest

from graphgame import (
    AssignmentMap,
    ClosedFormParams,
    ConsistencyPayoff,
    Graph,
    GraphicGame,
    IIDDistribution,
    JointDistribution,
    StrategySpaceError,
    check_injective,
    classical_value,
    closed_form_shared_classical,
    closed_form_star_classical,
    gyni_classical_bound,
    strategy_value,
    target_classical_value,
    target_value_from_tables,
)
from graphgame import games

from _oracles import random_game


class TestClassicalValue:
    def test_chsh(self):
        value, witness = classical_value(games.chsh_game())
        assert value == pytest.approx(0.75, abs=1e-12)
        assert strategy_value(games.chsh_game(), witness) == pytest.approx(value, abs=1e-15)

    def test_star3(self):
        value, _ = classical_value(games.star_game(3))
        assert value == pytest.approx(0.625, abs=1e-12)

    def test_shared_skewed(self):
        value, _ = classical_value(games.shared_game(3, p=0.7))
        assert value == pytest.approx(0.847, abs=1e-12)

    def test_trivial_game_wins_everything(self):
        value, _ = classical_value(games.trivial_game())
        assert value == pytest.approx(1.0, abs=1e-15)

    def test_witness_attains_value(self):
        for build in (games.chsh_game, games.chain_game, lambda: games.star_game(4, p=0.3)):
            g = build()
            value, witness = classical_value(g)
            assert strategy_value(g, witness) == pytest.approx(value, abs=1e-14)

    def test_budget_error_reports_space(self):
        with pytest.raises(StrategySpaceError) as err:
            classical_value(games.star_game(4), budget=16)
        assert err.value.space_size > 16
        assert err.value.budget == 16

    def test_ties_break_to_lowest_index(self):
        value, witness = classical_value(games.trivial_game())
        assert witness.index == 0  # the all-plus strategy already wins

    def test_relabelling_invariance(self):
        base = games.star_game(3)
        value, _ = classical_value(base)
        renamed = GraphicGame(
            graph=Graph(["x2", "x3", "y2", "y3"]),
            n=3,
            m=1,
            assignments=AssignmentMap(
                {
                    (1, 0): ["x2", "x3"],
                    (1, 1): ["x2", "x3"],
                    (2, 0): ["x2", "y2"],
                    (2, 1): ["x2", "y2"],
                    (3, 0): ["x3", "y3"],
                    (3, 1): ["x3", "y3"],
                }
            ),
            distribution=IIDDistribution(0.5),
            payoff=ConsistencyPayoff(),
        )
        renamed_value, _ = classical_value(renamed)
        assert renamed_value == pytest.approx(value, abs=1e-14)

    def test_value_bounds_and_witness_on_random_games(self):
        # The enumerating solver and the referee are independent paths; the
        # witness must score exactly the reported optimum through the latter.
        rng = np.random.default_rng(31)
        for _ in range(25):
            g = random_game(rng)
            value, witness = classical_value(g)
            assert 0.0 <= value <= 1.0 + 1e-12
            assert strategy_value(g, witness) == pytest.approx(value, abs=1e-12)

    def test_player_permutation_invariance(self):
        # Swap the two leaves of the star; ownership is isomorphic.
        base = games.star_game(3)
        swapped = GraphicGame(
            graph=base.graph,
            n=3,
            m=1,
            assignments=AssignmentMap(
                {
                    (1, 0): ["w2", "w3"],
                    (1, 1): ["w2", "w3"],
                    (2, 0): ["w3", "u3"],
                    (2, 1): ["w3", "u3"],
                    (3, 0): ["w2", "u2"],
                    (3, 1): ["w2", "u2"],
                }
            ),
            distribution=base.distribution,
            payoff=ConsistencyPayoff(),
        )
        assert classical_value(swapped)[0] == pytest.approx(classical_value(base)[0], abs=1e-14)


class TestClosedForms:
    def test_star_examples(self):
        assert closed_form_star_classical(ClosedFormParams(p=0.5, n1=2)) == pytest.approx(0.75, abs=1e-15)
        assert closed_form_star_classical(ClosedFormParams(p=0.5, n1=3)) == pytest.approx(0.625, abs=1e-15)
        assert closed_form_star_classical(ClosedFormParams(p=1.0, n1=5)) == pytest.approx(1.0, abs=1e-15)

    def test_shared_examples(self):
        assert closed_form_shared_classical(ClosedFormParams(p=0.5, l=3)) == pytest.approx(0.625, abs=1e-15)
        assert closed_form_shared_classical(ClosedFormParams(p=0.3, l=3)) == pytest.approx(0.643, abs=1e-12)
        assert closed_form_shared_classical(ClosedFormParams(p=0.7, l=3)) == pytest.approx(0.847, abs=1e-12)

    def test_branches_agree_at_half(self):
        for l in (3, 4, 5):
            lo = closed_form_shared_classical(ClosedFormParams(p=0.5 - 1e-13, l=l))
            hi = closed_form_shared_classical(ClosedFormParams(p=0.5 + 1e-13, l=l))
            assert lo == pytest.approx(hi, abs=1e-12)

    def test_linear_in_p_star(self):
        for p_star in (0.25, 0.5, 1.0):
            star = closed_form_star_classical(ClosedFormParams(p=0.4, p_star=p_star, n1=3))
            shared = closed_form_shared_classical(ClosedFormParams(p=0.4, p_star=p_star, l=4))
            assert star / p_star == pytest.approx(
                closed_form_star_classical(ClosedFormParams(p=0.4, n1=3)), abs=1e-14
            )
            assert shared / p_star == pytest.approx(
                closed_form_shared_classical(ClosedFormParams(p=0.4, l=4)), abs=1e-14
            )

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            closed_form_star_classical(ClosedFormParams(p=0.5, n1=1))
        with pytest.raises(ValueError):
            closed_form_shared_classical(ClosedFormParams(p=0.5, l=2))
        with pytest.raises(ValueError):
            closed_form_star_classical(ClosedFormParams(p=1.5, n1=2))

    def test_star_grid_against_brute_force(self):
        for n1 in (2, 3):
            for p in (0.2, 0.5, 0.8):
                brute, _ = classical_value(games.star_game(n1, p=p))
                assert brute == pytest.approx(
                    closed_form_star_classical(ClosedFormParams(p=p, n1=n1)), abs=1e-12
                )

    def test_shared_grid_against_brute_force(self):
        for l in (3, 4):
            for p in (0.2, 0.5, 0.8):
                brute, _ = classical_value(games.shared_game(l, p=p))
                assert brute == pytest.approx(
                    closed_form_shared_classical(ClosedFormParams(p=p, l=l)), abs=1e-12
                )


class TestGyniBound:
    def test_uniform(self):
        assert gyni_classical_bound(IIDDistribution(0.5), 3) == pytest.approx(0.25, abs=1e-15)

    def test_complementary_mass(self):
        d = JointDistribution({"000": 0.5, "111": 0.5})
        assert gyni_classical_bound(d, 3) == pytest.approx(1.0, abs=1e-15)

    def test_sparse_table(self):
        d = JointDistribution({"000": 0.6, "011": 0.4})
        assert gyni_classical_bound(d, 3) == pytest.approx(0.6, abs=1e-15)


class TestInjectivity:
    def test_identity_permutation(self):
        tables = {i: {k: int(k[i - 1]) for k in ("000", "001", "010", "011", "100", "101", "110", "111")} for i in (1, 2, 3)}
        assert check_injective(games.gyni_game().payoff.targets, 3)
        from graphgame import TargetFunction

        assert check_injective(TargetFunction(tables), 3)

    def test_sum_mapping(self):
        assert check_injective(games.example2_game().payoff.targets, 3)

    def test_power_mapping(self):
        from graphgame import TargetFunction
        from graphgame.model import bits_key, input_vectors

        tables = {
            i: {
                bits_key(x): 2 ** x[i - 1] - 2 ** (sum(x) - x[i - 1])
                for x in input_vectors(3)
            }
            for i in (1, 2, 3)
        }
        assert check_injective(TargetFunction(tables), 3)

    def test_constant_collides(self):
        assert not check_injective(games.constant_target_game().payoff.targets, 3)


class TestTargetValues:
    def test_gyni_matches_bound(self):
        g = games.gyni_game()
        assert target_classical_value(g) == pytest.approx(0.25, abs=1e-15)
        assert target_classical_value(g) == pytest.approx(
            gyni_classical_bound(g.distribution, 3), abs=1e-15
        )

    def test_keyed_strategy_wins_skewed_prior(self):
        g = games.gyni_game(dist=JointDistribution({"000": 0.9, "111": 0.1}))
        assert target_classical_value(g) == pytest.approx(1.0, abs=1e-15)

    def test_single_player_echo(self):
        value = target_value_from_tables({1: {"0": 0, "1": 1}}, IIDDistribution(0.5), 1)
        assert value == pytest.approx(1.0, abs=1e-15)

    def test_injective_value_can_exceed_pair_bound(self):
        # The complementary-pair bound is not tight for every injective
        # target: the coordinate-sum mapping admits a three-string win set
        # {001, 010, 100}, worth 3/8 under uniform inputs.
        g = games.example2_game()
        brute = target_classical_value(g)
        assert brute == pytest.approx(0.375, abs=1e-12)
        assert brute > gyni_classical_bound(g.distribution, 3)

    def test_budget(self):
        with pytest.raises(StrategySpaceError):
            target_classical_value(games.example2_game(), budget=8)
