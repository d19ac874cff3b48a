"""Exact classical game values.

Two classical models are kept apart:

* Model U: both players answer uniformly at random, independently.
* Model D: the players coordinate on a pair of memoryless deterministic
  strategies (one fixed answer per question kind).

All values are :class:`fractions.Fraction`, which keeps them reduced.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from nlgames import kernels
from nlgames.games import GameId, GameSpec, Question, Round, Transcript, evaluate_win, game1_spec

ENUMERATION_CAP = 12


class EnumerationSizeError(ValueError):
    pass


def exact_prob(num: int, den: int = 1) -> Fraction:
    """A probability as a reduced fraction; rejects values outside [0, 1]."""
    value = Fraction(num, den)
    if not 0 <= value <= 1:
        raise ValueError(f"{value} is not a probability")
    return value


def central_binomial(n: int) -> int:
    if n < 1:
        raise ValueError("n must be >= 1")
    return math.comb(2 * n, n)


def uniform_win_prob(spec: GameSpec) -> Fraction:
    """Closed-form Model U winning probability."""
    if spec.game_id is GameId.GAME1:
        return exact_prob(central_binomial(spec.n), 4**spec.n)
    if spec.game_id is GameId.GAME2:
        return exact_prob(1, 2)
    return exact_prob(0)


def question_arrangements(spec: GameSpec):
    if spec.game_id is GameId.GAME3:
        return [(Question.X, Question.XBAR), (Question.XBAR, Question.X)]
    return [(Question.X, Question.X)]


def brute_force_uniform_win_prob(spec: GameSpec, n_cap: int = ENUMERATION_CAP) -> Fraction:
    """Model U value by counting winners among all 2**(2n) answer tuples."""
    if n_cap > ENUMERATION_CAP:
        raise EnumerationSizeError(f"enumeration cap {n_cap} exceeds {ENUMERATION_CAP}")
    if spec.n > n_cap:
        raise EnumerationSizeError(f"n={spec.n} exceeds enumeration cap {n_cap}")
    if spec.game_id is GameId.GAME3:
        wins = total = 0
        for q_a, q_b in question_arrangements(spec):
            for a, b in itertools.product((1, -1), repeat=2):
                total += 1
                wins += evaluate_win(spec, Transcript(spec.game_id, (Round(q_a, q_b, a, b),)))
        return exact_prob(wins, total)
    wins = kernels.enumerate_wins(spec.game_id.value, spec.n)
    return exact_prob(wins, 4**spec.n)


def decay_ratio(n: int) -> Fraction:
    """Ratio of consecutive Game 1 Model U values, P(n + 1) / P(n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return uniform_win_prob(game1_spec(n + 1)) / uniform_win_prob(game1_spec(n))


@dataclass(frozen=True)
class DeterministicStrategy:
    """Memoryless answer map: one fixed answer per question kind."""

    on_x: int
    on_xbar: int

    def __call__(self, question: Question) -> int:
        return self.on_x if question is Question.X else self.on_xbar

    @property
    def label(self) -> str:
        return f"X->{self.on_x:+d},XBAR->{self.on_xbar:+d}"


@dataclass(frozen=True)
class DeterministicStrategyPair:
    alice: DeterministicStrategy
    bob: DeterministicStrategy

    @property
    def label(self) -> str:
        return f"A[{self.alice.label}] B[{self.bob.label}]"


def all_deterministic_strategies() -> List[DeterministicStrategy]:
    return [DeterministicStrategy(x, xb) for x, xb in itertools.product((1, -1), repeat=2)]


def all_strategy_pairs() -> List[DeterministicStrategyPair]:
    strategies = all_deterministic_strategies()
    return [DeterministicStrategyPair(a, b) for a in strategies for b in strategies]


def deterministic_win_prob(spec: GameSpec, pair: DeterministicStrategyPair) -> Fraction:
    """Win probability of a strategy pair, averaged over the referee's question arrangements."""
    arrangements = question_arrangements(spec)
    wins = 0
    for q_a, q_b in arrangements:
        rounds = tuple(Round(q_a, q_b, pair.alice(q_a), pair.bob(q_b)) for _ in range(spec.n))
        wins += evaluate_win(spec, Transcript(spec.game_id, rounds))
    return exact_prob(wins, len(arrangements))


def enumerate_strategy_values(spec: GameSpec) -> List[Tuple[DeterministicStrategyPair, Fraction]]:
    return [(pair, deterministic_win_prob(spec, pair)) for pair in all_strategy_pairs()]


def best_deterministic_pair(spec: GameSpec) -> Tuple[DeterministicStrategyPair, Fraction]:
    """First maximizing pair in enumeration order."""
    best = None
    for pair, value in enumerate_strategy_values(spec):
        if best is None or value > best[1]:
            best = (pair, value)
    return best


def coordinated_deterministic_max(spec: GameSpec) -> Fraction:
    return best_deterministic_pair(spec)[1]
