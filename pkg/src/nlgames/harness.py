"""Referee-driven game runs.

The referee draws questions, provisions a fresh entangled pair per round
when a quantum player takes part, hands each isolated player its
question, the shared pair and one private uniform, then scores the
transcript.  A player's ``behavior(question, pair, u)`` never sees the
trial index or earlier rounds.

Two engines produce bit-identical results:

* ``"kernel"`` runs built-in strategies through the batch kernels
  (compiled when available);
* ``"reference"`` calls every player's behavior round by round and scores
  with :func:`nlgames.games.evaluate_win`.  Custom strategies always use it.
"""
from __future__ import annotations

import csv
import dataclasses
import enum
import functools
import itertools
import json
import types
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from nlgames import kernels, rng
from nlgames.analysis import (
    ENUMERATION_CAP,
    DeterministicStrategy,
    DeterministicStrategyPair,
    deterministic_win_prob,
    question_arrangements,
    uniform_win_prob,
)
from nlgames.games import (
    GameId,
    GameSpec,
    PromiseViolation,
    Question,
    Round,
    TRANSCRIPT_CSV_COLUMNS,
    Transcript,
    answer_product,
    check_answer,
    evaluate_win,
    game3_spec,
)
from nlgames.quantum import (
    NORM_TOL,
    Site,
    StateVector,
    collapse_x,
    eigen_residual,
    pauli_x_observable,
    phi_plus_state,
    singlet_state,
    x_plus_probability,
)

DEFAULT_CHUNK = 1 << 16
_Q_CODE = {Question.X: 0, Question.XBAR: 1}
_Q_FROM_CODE = (Question.X, Question.XBAR)


class IsolationError(ValueError):
    """A strategy could carry state between rounds or between players."""


class StrategyKind(enum.Enum):
    UNIFORM_RANDOM = "uniform_random"
    QUANTUM_SINGLET = "quantum_singlet"
    QUANTUM_PHI_PLUS = "quantum_phi_plus"
    FIXED_DETERMINISTIC = "fixed_deterministic"
    CUSTOM = "custom"


class StateKind(enum.Enum):
    SINGLET = "singlet"
    PHI_PLUS = "phi_plus"

    def state(self) -> StateVector:
        return singlet_state() if self is StateKind.SINGLET else phi_plus_state()


_QUANTUM_KINDS = {
    StrategyKind.QUANTUM_SINGLET: StateKind.SINGLET,
    StrategyKind.QUANTUM_PHI_PLUS: StateKind.PHI_PLUS,
}


class SharedPair:
    """The entangled pair of one round; collapses as the players measure."""

    __slots__ = ("_state",)

    def __init__(self, state: StateVector):
        self._state = state

    @property
    def state(self) -> StateVector:
        return self._state

    def measure_x(self, site: Site, u: float) -> int:
        outcome = 1 if u < x_plus_probability(self._state, site) else -1
        self._state = collapse_x(self._state, site, outcome)
        return outcome


# --- isolation contract -------------------------------------------------

_IMMUTABLE_ATOMS = (type(None), bool, int, float, complex, str, bytes, enum.Enum, range, type)


def _is_immutable(value, depth: int = 0) -> bool:
    if depth > 8:
        return False
    if isinstance(value, _IMMUTABLE_ATOMS):
        return True
    if isinstance(value, (tuple, frozenset)):
        return all(_is_immutable(v, depth + 1) for v in value)
    if isinstance(value, (types.FunctionType, functools.partial, types.BuiltinFunctionType)):
        return _is_stateless(value, depth + 1)
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        params = getattr(type(value), "__dataclass_params__", None)
        return bool(params and params.frozen) and all(
            _is_immutable(getattr(value, f.name), depth + 1) for f in dataclasses.fields(value)
        )
    return False


def _is_stateless(behavior, depth: int = 0) -> bool:
    if isinstance(behavior, functools.partial):
        return (
            _is_stateless(behavior.func, depth + 1)
            and _is_immutable(behavior.args, depth + 1)
            and all(_is_immutable(v, depth + 1) for v in behavior.keywords.values())
        )
    if isinstance(behavior, types.BuiltinFunctionType):
        return getattr(behavior, "__self__", None) is None or isinstance(behavior.__self__, types.ModuleType)
    if isinstance(behavior, types.FunctionType):
        cells = behavior.__closure__ or ()
        try:
            contents = [c.cell_contents for c in cells]
        except ValueError:  # empty cell
            return False
        defaults = list(behavior.__defaults__ or ()) + list((behavior.__kwdefaults__ or {}).values())
        return all(_is_immutable(v, depth + 1) for v in contents + defaults)
    return False


# --- strategies ---------------------------------------------------------


@dataclass(frozen=True)
class PlayerStrategy:
    """A memoryless player.

    ``behavior(question, pair, u)`` returns +1 or -1 given the round's
    question, the round's shared pair (or None) and a private uniform.
    It must be a plain function or ``functools.partial`` holding only
    immutable values; anything that could remember is rejected.
    """

    kind: StrategyKind
    behavior: Callable = field(compare=False)
    site: Optional[Site] = None
    fixed: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        if not _is_stateless(self.behavior):
            raise IsolationError(
                f"{self.kind.value} behavior {self.behavior!r} can hold mutable state; "
                "use a plain function or partial over immutable values"
            )
        if self.kind in _QUANTUM_KINDS and self.site not in (Site.A, Site.B):
            raise ValueError("a quantum player needs site A or B")
        if self.kind is StrategyKind.FIXED_DETERMINISTIC:
            if self.fixed is None:
                raise ValueError("a fixed strategy needs its answer map")
            object.__setattr__(self, "fixed", tuple(check_answer(v) for v in self.fixed))

    @property
    def state_kind(self) -> Optional[StateKind]:
        return _QUANTUM_KINDS.get(self.kind)

    def answer(self, question: Question, pair: Optional[SharedPair], u: float) -> int:
        return check_answer(self.behavior(question, pair, u))


def _coin_answer(question, pair, u):
    return 1 if u < 0.5 else -1


def _measure_x_answer(question, pair, u, *, site):
    # X and XBAR both map to sigma_x, since sigma_x squared is the identity
    return pair.measure_x(site, u)


def _fixed_answer(question, pair, u, *, on_x, on_xbar):
    return on_x if question is Question.X else on_xbar


def uniform_random_player() -> PlayerStrategy:
    return PlayerStrategy(StrategyKind.UNIFORM_RANDOM, _coin_answer)


def quantum_players(state_kind) -> Tuple[PlayerStrategy, PlayerStrategy]:
    state_kind = StateKind(state_kind) if not isinstance(state_kind, StateKind) else state_kind
    kind = StrategyKind.QUANTUM_SINGLET if state_kind is StateKind.SINGLET else StrategyKind.QUANTUM_PHI_PLUS
    return (
        PlayerStrategy(kind, functools.partial(_measure_x_answer, site=Site.A), site=Site.A),
        PlayerStrategy(kind, functools.partial(_measure_x_answer, site=Site.B), site=Site.B),
    )


def fixed_player(strategy: DeterministicStrategy) -> PlayerStrategy:
    return PlayerStrategy(
        StrategyKind.FIXED_DETERMINISTIC,
        functools.partial(_fixed_answer, on_x=strategy.on_x, on_xbar=strategy.on_xbar),
        fixed=(strategy.on_x, strategy.on_xbar),
    )


def fixed_players(pair: DeterministicStrategyPair) -> Tuple[PlayerStrategy, PlayerStrategy]:
    return fixed_player(pair.alice), fixed_player(pair.bob)


def custom_player(behavior: Callable) -> PlayerStrategy:
    return PlayerStrategy(StrategyKind.CUSTOM, behavior)


def _shared_state(alice: PlayerStrategy, bob: PlayerStrategy) -> Optional[StateKind]:
    if alice.kind in _QUANTUM_KINDS and alice.site is not Site.A:
        raise ValueError("Alice's quantum strategy is bound to site B")
    if bob.kind in _QUANTUM_KINDS and bob.site is not Site.B:
        raise ValueError("Bob's quantum strategy is bound to site A")
    kinds = {p.state_kind for p in (alice, bob)} - {None}
    if len(kinds) > 1:
        raise ValueError("players ask for different entangled states")
    return kinds.pop() if kinds else None


# --- reports ------------------------------------------------------------


@dataclass(frozen=True)
class EigenCheck:
    observable: str
    state: str
    eigenvalue: float
    residual: float
    passed: bool

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def _eigen_check(observable, state: StateVector, eigenvalue: float, tol: float = NORM_TOL) -> EigenCheck:
    residual = eigen_residual(observable, state, eigenvalue)
    return EigenCheck(observable.name, state.label, float(eigenvalue), residual, residual <= tol)


def sum_observable():
    return pauli_x_observable(Site.A) + pauli_x_observable(Site.B)


def verify_eigen_relations() -> List[EigenCheck]:
    """Per-round eigen relations behind the quantum strategies.

    The n-round sum operator acts on n fresh pairs; its eigenvalue is the
    sum of the per-round ones, so checking one round suffices.
    """
    joint = pauli_x_observable(Site.JOINT)
    return [
        _eigen_check(sum_observable(), singlet_state(), 0.0),
        _eigen_check(joint, phi_plus_state(), 1.0),
        _eigen_check(joint, singlet_state(), -1.0),
    ]


REPORT_FIELDS = (
    "game_id",
    "n",
    "trials",
    "wins",
    "win_frequency",
    "exact_reference",
    "eigen_checks",
    "seed",
    "promise_violations",
    "condition_counts",
)


@dataclass(frozen=True)
class RunReport:
    game_id: GameId
    n: int
    trials: int
    wins: int
    win_frequency: float
    exact_reference: Optional[Fraction]
    eigen_checks: Tuple[EigenCheck, ...]
    seed: int
    promise_violations: int
    # Game 3 only: trials meeting each half of the winning condition.
    condition_counts: Optional[dict] = None

    def to_dict(self) -> dict:
        ref = self.exact_reference
        return {
            "game_id": self.game_id.name,
            "n": self.n,
            "trials": self.trials,
            "wins": self.wins,
            "win_frequency": self.win_frequency,
            "exact_reference": None if ref is None else {"num": ref.numerator, "den": ref.denominator},
            "eigen_checks": [c.to_dict() for c in self.eigen_checks],
            "seed": self.seed,
            "promise_violations": self.promise_violations,
            "condition_counts": None if self.condition_counts is None else dict(self.condition_counts),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def csv_row(self) -> list:
        ref = "" if self.exact_reference is None else str(self.exact_reference)
        checks = ";".join(f"{c.observable}@{c.state}={c.eigenvalue:g}:{'pass' if c.passed else 'fail'}" for c in self.eigen_checks)
        counts = self.condition_counts or {}
        return [
            self.game_id.name,
            self.n,
            self.trials,
            self.wins,
            repr(self.win_frequency),
            ref,
            checks,
            self.seed,
            self.promise_violations,
            ";".join(f"{k}={v}" for k, v in counts.items()),
        ]

    def rate(self, condition: str) -> float:
        return self.condition_counts[condition] / self.trials


# --- running ------------------------------------------------------------


def _kernel_code(player: PlayerStrategy):
    if player.kind is StrategyKind.UNIFORM_RANDOM:
        return kernels.UNIFORM, np.zeros(2, dtype=np.int8)
    if player.kind in _QUANTUM_KINDS:
        return kernels.QUANTUM, np.zeros(2, dtype=np.int8)
    if player.kind is StrategyKind.FIXED_DETERMINISTIC:
        return kernels.FIXED, np.array(player.fixed, dtype=np.int8)
    raise ValueError("custom strategies need the reference engine")


def _quantum_table(state: Optional[StateVector]) -> np.ndarray:
    """[P(a=+1), P(b=+1 | a=+1), P(b=+1 | a=-1), P(b=+1) on an unmeasured pair]."""
    if state is None:
        return np.zeros(4)
    p_first = x_plus_probability(state, Site.A)
    after_plus = x_plus_probability(collapse_x(state, Site.A, 1), Site.B) if p_first > 0.0 else 0.0
    after_minus = x_plus_probability(collapse_x(state, Site.A, -1), Site.B) if p_first < 1.0 else 0.0
    return np.array([p_first, after_plus, after_minus, x_plus_probability(state, Site.B)])


def _referee_questions(spec: GameSpec, u_ref: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    if spec.game_id is GameId.GAME3:
        alice_gets_x = u_ref < 0.5
        q_a = np.where(alice_gets_x, 0, 1).astype(np.int8)
        return q_a, (1 - q_a).astype(np.int8)
    zeros = np.zeros(u_ref.shape, dtype=np.int8)
    return zeros, zeros.copy()


@dataclass
class _Tally:
    wins: int = 0
    product_hits: int = 0
    inverse_hits: int = 0
    violations: int = 0

    def add(self, wins, product_hits, inverse_hits, violations):
        self.wins += int(wins)
        self.product_hits += int(product_hits)
        self.inverse_hits += int(inverse_hits)
        self.violations += int(violations)


def _chunk_kernel(spec, alice, bob, state, u_ref, u_a, u_b):
    q_a, q_b = _referee_questions(spec, u_ref)
    code_a, fixed_a = _kernel_code(alice)
    code_b, fixed_b = _kernel_code(bob)
    out_a = np.empty(q_a.shape, dtype=np.int8)
    out_b = np.empty(q_a.shape, dtype=np.int8)
    kernels.play_rounds(
        q_a, q_b, np.ascontiguousarray(u_a), np.ascontiguousarray(u_b),
        code_a, code_b, fixed_a, fixed_b, _quantum_table(state), out_a, out_b,
    )
    return q_a, q_b, out_a, out_b


def _chunk_reference(spec, alice, bob, state, u_ref, u_a, u_b):
    trials, n = u_ref.shape
    q_a = np.empty((trials, n), dtype=np.int8)
    q_b = np.empty((trials, n), dtype=np.int8)
    out_a = np.empty((trials, n), dtype=np.int8)
    out_b = np.empty((trials, n), dtype=np.int8)
    ur, ua, ub = u_ref.tolist(), u_a.tolist(), u_b.tolist()
    for t in range(trials):
        for i in range(n):
            qa, qb = spec.question_rule(ur[t][i])
            pair = SharedPair(state) if state is not None else None
            a = alice.answer(qa, pair, ua[t][i])
            b = bob.answer(qb, pair, ub[t][i])
            q_a[t, i], q_b[t, i], out_a[t, i], out_b[t, i] = _Q_CODE[qa], _Q_CODE[qb], a, b
    return q_a, q_b, out_a, out_b


def _score_reference(spec: GameSpec, q_a, q_b, a, b) -> Tuple[int, int, int, int]:
    wins = product_hits = inverse_hits = violations = 0
    for row in zip(q_a.tolist(), q_b.tolist(), a.tolist(), b.tolist()):
        transcript = _transcript(spec, *row)
        try:
            wins += evaluate_win(spec, transcript)
        except PromiseViolation:
            violations += 1
            continue
        answers = [(r.a, r.b) for r in transcript.rounds]
        product_hits += answer_product(answers) == 1
        inverse_hits += all(y == -x for x, y in answers)
    return wins, product_hits, inverse_hits, violations


def _transcript(spec: GameSpec, qa_row, qb_row, a_row, b_row) -> Transcript:
    return Transcript(
        spec.game_id,
        tuple(
            Round(_Q_FROM_CODE[qa], _Q_FROM_CODE[qb], a, b)
            for qa, qb, a, b in zip(qa_row, qb_row, a_row, b_row)
        ),
    )


def _resolve_engine(engine: str, alice: PlayerStrategy, bob: PlayerStrategy) -> str:
    custom = StrategyKind.CUSTOM in (alice.kind, bob.kind)
    if engine == "auto":
        return "reference" if custom else "kernel"
    if engine == "kernel" and custom:
        raise ValueError("custom strategies need the reference engine")
    if engine not in ("kernel", "reference"):
        raise ValueError(f"unknown engine {engine!r}")
    return engine


def _iter_chunks(spec, players, trials, seed, engine, chunk):
    alice, bob = players
    state_kind = _shared_state(alice, bob)
    state = state_kind.state() if state_kind else None
    engine = _resolve_engine(engine, alice, bob)
    play = _chunk_kernel if engine == "kernel" else _chunk_reference
    for start in range(0, trials, chunk):
        stop = min(trials, start + chunk)
        u_ref = rng.trial_uniforms(seed, rng.REFEREE, start, stop, spec.n)
        u_a = rng.trial_uniforms(seed, rng.ALICE, start, stop, spec.n)
        u_b = rng.trial_uniforms(seed, rng.BOB, start, stop, spec.n)
        yield engine, start, play(spec, alice, bob, state, u_ref, u_a, u_b)


def _check_run_args(players, trials: int, seed: int) -> None:
    if len(players) != 2:
        raise ValueError("a run needs exactly two players")
    if isinstance(trials, bool) or not isinstance(trials, int) or trials < 1:
        raise ValueError(f"trials must be a positive integer, got {trials!r}")
    rng.check_seed(seed)


def simulate_answers(
    spec: GameSpec, players: Sequence[PlayerStrategy], trials: int, seed: int, engine: str = "auto"
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Question codes and answers of every round: (q_a, q_b, a, b), each trials x n."""
    _check_run_args(players, trials, seed)
    parts = [arrays for _, _, arrays in _iter_chunks(spec, players, trials, seed, engine, DEFAULT_CHUNK)]
    return tuple(np.concatenate([p[k] for p in parts]) for k in range(4))


def _reference_value(spec: GameSpec, alice: PlayerStrategy, bob: PlayerStrategy) -> Optional[Fraction]:
    kinds = {alice.kind, bob.kind}
    if kinds == {StrategyKind.UNIFORM_RANDOM}:
        return uniform_win_prob(spec)
    if kinds == {StrategyKind.FIXED_DETERMINISTIC}:
        pair = DeterministicStrategyPair(DeterministicStrategy(*alice.fixed), DeterministicStrategy(*bob.fixed))
        return deterministic_win_prob(spec, pair)
    if len(kinds) == 1 and alice.kind in _QUANTUM_KINDS and spec.n <= ENUMERATION_CAP:
        # Bell-pair x outcomes: Alice's sign is a fair coin, Bob's is fixed by it.
        corr = -1 if alice.state_kind is StateKind.SINGLET else 1
        wins = total = 0
        for q_a, q_b in question_arrangements(spec):
            for signs in itertools.product((1, -1), repeat=spec.n):
                answers = [(s, corr * s) for s in signs]
                wins += evaluate_win(spec, Transcript.from_answers(spec.game_id, answers, [(q_a, q_b)] * spec.n))
                total += 1
        return Fraction(wins, total)
    return None


def _report_checks(spec: GameSpec, state_kind: Optional[StateKind]) -> Tuple[EigenCheck, ...]:
    if state_kind is None:
        return ()
    state = state_kind.state()
    if spec.game_id is GameId.GAME1:
        return (_eigen_check(sum_observable(), state, 0.0),)
    return (_eigen_check(pauli_x_observable(Site.JOINT), state, 1.0),)


def run_game(
    spec: GameSpec,
    players: Sequence[PlayerStrategy],
    trials: int,
    seed: int = 0,
    *,
    engine: str = "auto",
    transcript_path=None,
    chunk: int = DEFAULT_CHUNK,
) -> RunReport:
    """Play ``trials`` independent transcripts and tally the outcome.

    Equal arguments give an identical report; chunking does not change it.
    ``transcript_path`` streams every round to CSV with columns
    ``trial, round_index, q_a, q_b, a, b``.
    """
    _check_run_args(players, trials, seed)
    alice, bob = players
    tally = _Tally()
    sink = open(transcript_path, "w", newline="") if transcript_path is not None else None
    try:
        writer = None
        if sink is not None:
            writer = csv.writer(sink, lineterminator="\n")
            writer.writerow(("trial",) + TRANSCRIPT_CSV_COLUMNS)
        for engine_used, start, (q_a, q_b, a, b) in _iter_chunks(spec, players, trials, seed, engine, chunk):
            if engine_used == "kernel":
                tally.add(*kernels.score_rounds(spec.game_id.value, q_a, q_b, a, b))
            else:
                tally.add(*_score_reference(spec, q_a, q_b, a, b))
            if writer is not None:
                _write_rounds(writer, start, q_a, q_b, a, b)
    finally:
        if sink is not None:
            sink.close()
    counts = None
    if spec.game_id is GameId.GAME3:
        counts = {"product": tally.product_hits, "inverse": tally.inverse_hits}
    return RunReport(
        game_id=spec.game_id,
        n=spec.n,
        trials=trials,
        wins=tally.wins,
        win_frequency=tally.wins / trials,
        exact_reference=_reference_value(spec, alice, bob),
        eigen_checks=_report_checks(spec, _shared_state(alice, bob)),
        seed=seed,
        promise_violations=tally.violations,
        condition_counts=counts,
    )


def _write_rounds(writer, start, q_a, q_b, a, b):
    for t, row in enumerate(zip(q_a.tolist(), q_b.tolist(), a.tolist(), b.tolist()), start=start):
        for i, (qa, qb, x, y) in enumerate(zip(*row)):
            writer.writerow((t, i, _Q_FROM_CODE[qa].value, _Q_FROM_CODE[qb].value, x, y))


def game3_dual_report(trials: int, seed: int = 0, **kwargs) -> RunReport:
    """Game 3 with phi-plus players.

    ``condition_counts`` holds how many trials met each half of the
    winning condition (product 1, additive inverses); ``eigen_checks``
    holds the operator-level sigma_x (x) sigma_x relation on phi-plus.
    """
    return run_game(game3_spec(), quantum_players(StateKind.PHI_PLUS), trials, seed, **kwargs)
