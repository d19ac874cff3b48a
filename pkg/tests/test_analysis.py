import itertools
from fractions import Fraction

import pytest

from nlgames.analysis import (
    EnumerationSizeError,
    brute_force_uniform_win_prob,
    central_binomial,
    coordinated_deterministic_max,
    decay_ratio,
    enumerate_strategy_values,
    exact_prob,
    uniform_win_prob,
)
from nlgames.games import Transcript, evaluate_win, game1_spec, game2_spec, game3_spec


def pascal_row(m):
    row = [1]
    for _ in range(m):
        row = [1] + [x + y for x, y in zip(row, row[1:])] + [1]
    return row


def pascal_central(n):
    return pascal_row(2 * n)[n]


def transcript_oracle(spec):
    """Win fraction over every answer tuple, scored by the game predicate itself."""
    wins = total = 0
    for values in itertools.product((1, -1), repeat=2 * spec.n):
        answers = list(zip(values[::2], values[1::2]))
        wins += evaluate_win(spec, Transcript.from_answers(spec.game_id, answers))
        total += 1
    return Fraction(wins, total)


class TestCentralBinomial:
    @pytest.mark.parametrize("n, expected", [(1, 2), (2, 6), (10, 184756)])
    def test_values(self, n, expected):
        assert central_binomial(n) == expected

    @pytest.mark.parametrize("n", range(1, 31))
    def test_matches_pascal_triangle(self, n):
        assert central_binomial(n) == pascal_central(n)

    def test_pascal_oracle_frozen_value(self):
        assert pascal_central(10) == 184756

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            central_binomial(0)


class TestUniformValues:
    def test_game1_small(self):
        assert uniform_win_prob(game1_spec(1)) == Fraction(1, 2)
        assert uniform_win_prob(game1_spec(2)) == Fraction(6, 16)

    def test_game2_constant(self):
        assert uniform_win_prob(game2_spec(7)) == Fraction(1, 2)

    def test_game3_impossible(self):
        assert uniform_win_prob(game3_spec()) == 0

    def test_reduced(self):
        v = uniform_win_prob(game1_spec(10))
        assert (v.numerator, v.denominator) == (46189, 262144)
        assert v == Fraction(184756, 1048576)

    @pytest.mark.parametrize("n", range(1, 11))
    def test_game1_closed_form_equals_brute_force(self, n):
        assert uniform_win_prob(game1_spec(n)) == brute_force_uniform_win_prob(game1_spec(n))

    @pytest.mark.parametrize("n", range(1, 11))
    def test_game2_half_by_brute_force(self, n):
        assert brute_force_uniform_win_prob(game2_spec(n)) == Fraction(1, 2)

    @pytest.mark.parametrize("spec", [game1_spec(n) for n in (1, 2, 3, 4)] + [game2_spec(n) for n in (1, 2, 3, 4)])
    def test_brute_force_matches_transcript_oracle(self, spec):
        assert brute_force_uniform_win_prob(spec) == transcript_oracle(spec)

    def test_brute_force_listed_cases(self):
        assert brute_force_uniform_win_prob(game1_spec(1)) == Fraction(2, 4)
        assert brute_force_uniform_win_prob(game1_spec(2)) == Fraction(6, 16)
        assert brute_force_uniform_win_prob(game3_spec()) == 0

    def test_cap(self):
        with pytest.raises(EnumerationSizeError):
            brute_force_uniform_win_prob(game1_spec(13))
        with pytest.raises(EnumerationSizeError):
            brute_force_uniform_win_prob(game1_spec(3), n_cap=2)
        with pytest.raises(EnumerationSizeError):
            brute_force_uniform_win_prob(game1_spec(3), n_cap=13)


class TestDecay:
    def test_listed_ratios(self):
        assert decay_ratio(1) == Fraction(3, 4)
        assert decay_ratio(2) == Fraction(5, 6)

    @pytest.mark.parametrize("n", range(1, 40))
    def test_closed_form_and_below_one(self, n):
        assert decay_ratio(n) == Fraction(2 * n + 1, 2 * n + 2)
        assert decay_ratio(n) < 1

    def test_strictly_decreasing(self):
        values = [uniform_win_prob(game1_spec(n)) for n in range(1, 60)]
        assert all(b < a for a, b in zip(values, values[1:]))
        for n, (a, b) in enumerate(zip(values, values[1:]), start=1):
            assert b == a * Fraction(2 * n + 1, 2 * n + 2)

    def test_tends_to_zero(self):
        assert uniform_win_prob(game1_spec(5000)) < Fraction(1, 100)


class TestExactProb:
    def test_reduces(self):
        v = exact_prob(6, 16)
        assert (v.numerator, v.denominator) == (3, 8)

    @pytest.mark.parametrize("num, den", [(5, 4), (-1, 2)])
    def test_out_of_range(self, num, den):
        with pytest.raises(ValueError):
            exact_prob(num, den)


class TestDeterministic:
    def test_sixteen_pairs(self):
        assert len(enumerate_strategy_values(game3_spec())) == 16

    def test_game3_all_zero(self):
        assert all(v == 0 for _, v in enumerate_strategy_values(game3_spec()))
        assert coordinated_deterministic_max(game3_spec()) == 0

    @pytest.mark.parametrize("n", [1, 2, 5])
    def test_game1_opposite_constants(self, n):
        assert coordinated_deterministic_max(game1_spec(n)) == 1
        values = {(p.alice.on_x, p.bob.on_x): v for p, v in enumerate_strategy_values(game1_spec(n))}
        assert values[(1, -1)] == 1 and values[(-1, 1)] == 1
        assert values[(1, 1)] == 0

    @pytest.mark.parametrize("n", [1, 3, 4])
    def test_game2_all_plus(self, n):
        assert coordinated_deterministic_max(game2_spec(n)) == 1
        values = {(p.alice.on_x, p.bob.on_x): v for p, v in enumerate_strategy_values(game2_spec(n))}
        assert values[(1, 1)] == 1

    def test_game2_odd_rounds_mixed_sign_loses(self):
        values = {(p.alice.on_x, p.bob.on_x): v for p, v in enumerate_strategy_values(game2_spec(3))}
        assert values[(1, -1)] == 0
