"""Game definitions in the general ``f(questions) == g(answers)`` form.

A game is won when the answer score equals the question target and the
(optional) proviso on the answers holds.  All three games here are
two-party; Game 3 is single-round.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, List, Sequence, Tuple


class Question(Enum):
    X = "X"
    XBAR = "XBAR"


class GameId(Enum):
    GAME1 = 1
    GAME2 = 2
    GAME3 = 3


class PromiseViolation(Exception):
    """The referee's questions break the game's promise; neither win nor loss."""


class GameMismatchError(ValueError):
    pass


def check_answer(value) -> int:
    if isinstance(value, bool) or value not in (1, -1):
        raise ValueError(f"answer must be +1 or -1, got {value!r}")
    return int(value)


@dataclass(frozen=True)
class Round:
    q_a: Question
    q_b: Question
    a: int
    b: int

    def __post_init__(self):
        object.__setattr__(self, "q_a", Question(self.q_a))
        object.__setattr__(self, "q_b", Question(self.q_b))
        object.__setattr__(self, "a", check_answer(self.a))
        object.__setattr__(self, "b", check_answer(self.b))


@dataclass(frozen=True)
class Transcript:
    game_id: GameId
    rounds: Tuple[Round, ...]

    def __post_init__(self):
        object.__setattr__(self, "game_id", GameId(self.game_id))
        object.__setattr__(self, "rounds", tuple(self.rounds))
        if not self.rounds:
            raise ValueError("transcript has no rounds")
        if self.game_id is GameId.GAME3:
            if len(self.rounds) != 1:
                raise ValueError("Game 3 transcripts have exactly one round")
        elif any(Question.XBAR in (r.q_a, r.q_b) for r in self.rounds):
            raise ValueError("XBAR only occurs in Game 3")

    @classmethod
    def from_answers(cls, game_id, answers: Iterable[Tuple[int, int]], questions=None) -> "Transcript":
        """Build a transcript from (a, b) pairs; questions default to (X, X)."""
        answers = list(answers)
        if questions is None:
            questions = [(Question.X, Question.X)] * len(answers)
        return cls(game_id, tuple(Round(qa, qb, a, b) for (qa, qb), (a, b) in zip(questions, answers)))

    def csv_rows(self) -> List[Tuple[int, str, str, int, int]]:
        return [(i, r.q_a.value, r.q_b.value, r.a, r.b) for i, r in enumerate(self.rounds)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(TRANSCRIPT_CSV_COLUMNS)
        writer.writerows(self.csv_rows())
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "game_id": self.game_id.name,
            "rounds": [
                {"q_a": r.q_a.value, "q_b": r.q_b.value, "a": r.a, "b": r.b} for r in self.rounds
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "Transcript":
        return cls(
            GameId[data["game_id"]],
            tuple(Round(Question(r["q_a"]), Question(r["q_b"]), r["a"], r["b"]) for r in data["rounds"]),
        )


TRANSCRIPT_CSV_COLUMNS = ("round_index", "q_a", "q_b", "a", "b")

QuestionPair = Tuple[Question, Question]
AnswerPair = Tuple[int, int]


@dataclass(frozen=True)
class GameSpec:
    """A two-party game.

    ``question_rule`` maps the referee's coin (a uniform in [0, 1)) to the
    round's question pair.  ``promise`` is checked per round.  ``target``
    and ``score`` are the two sides of the winning equation; ``proviso``
    is an extra condition on the answers.
    """

    game_id: GameId
    n: int
    question_rule: Callable[[float], QuestionPair]
    promise: Callable[[Question, Question], bool]
    target: Callable[[Sequence[QuestionPair]], int]
    score: Callable[[Sequence[AnswerPair]], int]
    proviso: Callable[[Sequence[AnswerPair]], bool]

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"round count must be a positive integer, got {self.n!r}")
        if self.game_id is GameId.GAME3 and self.n != 1:
            raise ValueError("Game 3 is single-round")

    @property
    def name(self) -> str:
        return self.game_id.name


def _same_question(u: float) -> QuestionPair:
    return (Question.X, Question.X)


def _complementary_questions(u: float) -> QuestionPair:
    # referee's fair coin picks who gets X
    return (Question.X, Question.XBAR) if u < 0.5 else (Question.XBAR, Question.X)


def _no_promise(q_a: Question, q_b: Question) -> bool:
    return True


def _complementary(q_a: Question, q_b: Question) -> bool:
    return q_a is not q_b


def _always(answers) -> bool:
    return True


def answer_sum(answers: Sequence[AnswerPair]) -> int:
    return sum(a + b for a, b in answers)


def answer_product(answers: Sequence[AnswerPair]) -> int:
    return math.prod(a * b for a, b in answers)


def _additive_inverses(answers: Sequence[AnswerPair]) -> bool:
    return all(b == -a for a, b in answers)


def game1_spec(n: int) -> GameSpec:
    """Both players answer X each round; win iff all answers sum to zero."""
    return GameSpec(GameId.GAME1, n, _same_question, _no_promise, lambda qs: 0, answer_sum, _always)


def game2_spec(n: int) -> GameSpec:
    """Both players answer X each round; win iff the product of all answers is 1."""
    return GameSpec(GameId.GAME2, n, _same_question, _no_promise, lambda qs: 1, answer_product, _always)


def game3_spec() -> GameSpec:
    """One round, complementary questions; win iff a*b == 1 with b == -a."""
    return GameSpec(
        GameId.GAME3, 1, _complementary_questions, _complementary, lambda qs: 1, answer_product, _additive_inverses
    )


def game_spec(game: int, n: int = 1) -> GameSpec:
    game_id = GameId(game)
    if game_id is GameId.GAME1:
        return game1_spec(n)
    if game_id is GameId.GAME2:
        return game2_spec(n)
    return game3_spec()


def assign_questions(spec: GameSpec, round_index: int, rng) -> QuestionPair:
    """Questions for one round; always consumes exactly one draw from ``rng``."""
    if not 0 <= round_index < spec.n:
        raise ValueError(f"round index {round_index} outside 0..{spec.n - 1}")
    return spec.question_rule(float(rng.random()))


def _check_game(spec: GameSpec, transcript: Transcript) -> None:
    if transcript.game_id is not spec.game_id:
        raise GameMismatchError(f"{transcript.game_id.name} transcript given to {spec.name}")


def check_promise(spec: GameSpec, transcript: Transcript) -> bool:
    _check_game(spec, transcript)
    return all(spec.promise(r.q_a, r.q_b) for r in transcript.rounds)


def evaluate_win(spec: GameSpec, transcript: Transcript) -> bool:
    if not check_promise(spec, transcript):
        raise PromiseViolation(f"{spec.name}: questions break the promise")
    if len(transcript.rounds) != spec.n:
        raise ValueError(f"{spec.name} expects {spec.n} rounds, transcript has {len(transcript.rounds)}")
    questions = [(r.q_a, r.q_b) for r in transcript.rounds]
    answers = [(r.a, r.b) for r in transcript.rounds]
    return spec.score(answers) == spec.target(questions) and spec.proviso(answers)
