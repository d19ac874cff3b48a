"""Exit criteria. Each test carries ``@pytest.mark.acceptance(n)``; the
conftest hook prints one PASS/FAIL line per criterion after the run.

    pytest tests/test_acceptance.py
"""
import json
import math
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from nlgames.analysis import (
    all_strategy_pairs,
    brute_force_uniform_win_prob,
    coordinated_deterministic_max,
    deterministic_win_prob,
    uniform_win_prob,
)
from nlgames.games import game1_spec, game2_spec, game3_spec
from nlgames.harness import (
    StateKind,
    game3_dual_report,
    quantum_players,
    run_game,
    uniform_random_player,
    verify_eigen_relations,
)
from nlgames.quantum import basis_state, measure_x_pair, phi_plus_state, singlet_state

MC_TRIALS = 100_000
EIGEN_TOL = 1e-12


def four_sigma(p, n):
    return 4 * math.sqrt(p * (1 - p) / n)


@pytest.mark.acceptance(1, "exact values: 1/2, 6/16, closed form == brute force for n=1..10, < 60 s")
def test_exact_values_match():
    start = time.perf_counter()
    assert uniform_win_prob(game1_spec(1)) == Fraction(1, 2)
    assert uniform_win_prob(game1_spec(2)) == Fraction(6, 16)
    for n in range(1, 11):
        spec = game1_spec(n)
        assert uniform_win_prob(spec) == brute_force_uniform_win_prob(spec), n
    assert time.perf_counter() - start < 60


@pytest.mark.acceptance(2, "decay: strictly decreasing, ratio (2n+1)/(2n+2), P(10) = 184756/1048576")
def test_asymptotic_decay():
    values = [uniform_win_prob(game1_spec(n)) for n in range(1, 101)]
    for n, (cur, nxt) in enumerate(zip(values, values[1:]), start=1):
        assert nxt < cur
        assert nxt / cur == Fraction(2 * n + 1, 2 * n + 2)
    assert values[9] == Fraction(184756, 1048576)


@pytest.mark.acceptance(3, "eigen relations: residuals < 1e-12 (0 on singlet, +1 on phi+, -1 on singlet)")
def test_eigen_relations():
    checks = verify_eigen_relations()
    assert [(c.state, c.eigenvalue) for c in checks] == [("singlet", 0.0), ("phi_plus", 1.0), ("singlet", -1.0)]
    for c in checks:
        assert c.residual < EIGEN_TOL and c.passed


@pytest.mark.acceptance(4, "perfect quantum play: game1(10) singlet and game2(5) phi+ win 1.0 over 1e5 trials, < 10 s each")
@pytest.mark.parametrize(
    "spec, kind",
    [(game1_spec(10), StateKind.SINGLET), (game2_spec(5), StateKind.PHI_PLUS)],
    ids=["game1-singlet", "game2-phi_plus"],
)
def test_perfect_quantum_strategies(spec, kind):
    start = time.perf_counter()
    report = run_game(spec, quantum_players(kind), MC_TRIALS, seed=20240601)
    elapsed = time.perf_counter() - start
    assert report.win_frequency == 1.0
    assert report.wins == MC_TRIALS
    assert elapsed < 10


@pytest.mark.acceptance(5, "classical Monte Carlo within 4 sigma: game1 n=1,2,3 and game2 n=1,5")
@pytest.mark.parametrize(
    "spec, seed",
    [(game1_spec(1), 101), (game1_spec(2), 102), (game1_spec(3), 103), (game2_spec(1), 201), (game2_spec(5), 205)],
    ids=["game1-n1", "game1-n2", "game1-n3", "game2-n1", "game2-n5"],
)
def test_classical_monte_carlo(spec, seed):
    players = (uniform_random_player(), uniform_random_player())
    report = run_game(spec, players, MC_TRIALS, seed=seed)
    p = float(uniform_win_prob(spec))
    assert abs(report.win_frequency - p) <= four_sigma(p, MC_TRIALS)


@pytest.mark.acceptance(6, "game 3: value 0, 16 deterministic pairs at 0, dual report product 1.0 / inverse 0.0 / eigen pass")
def test_game3():
    spec = game3_spec()
    assert uniform_win_prob(spec) == 0
    pairs = all_strategy_pairs()
    assert len(pairs) == 16
    assert all(deterministic_win_prob(spec, p) == 0 for p in pairs)
    assert coordinated_deterministic_max(spec) == 0
    report = game3_dual_report(10_000, seed=3)
    assert report.rate("product") == 1.0
    assert report.rate("inverse") == 0.0
    assert report.eigen_checks and all(c.passed for c in report.eigen_checks)


def _sample_counts(state, n, seed):
    rng = np.random.default_rng(seed)
    counts = {(1, 1): 0, (1, -1): 0, (-1, 1): 0, (-1, -1): 0}
    for _ in range(n):
        pair, _ = measure_x_pair(state, rng)
        counts[(pair.a, pair.b)] += 1
    return counts


@pytest.mark.acceptance(7, "measurement statistics over 1e5 samples: singlet/phi+ correlations, |00> uniform within 4 sigma")
def test_measurement_statistics():
    singlet = _sample_counts(singlet_state(), MC_TRIALS, 7)
    assert singlet[(1, 1)] == 0 and singlet[(-1, -1)] == 0
    phi = _sample_counts(phi_plus_state(), MC_TRIALS, 8)
    assert phi[(1, -1)] == 0 and phi[(-1, 1)] == 0
    zero = _sample_counts(basis_state(0), MC_TRIALS, 9)
    for count in zero.values():
        assert abs(count / MC_TRIALS - 0.25) <= four_sigma(0.25, MC_TRIALS)


@pytest.mark.acceptance(8, "reproducibility: identical CLI invocations give byte-identical JSON")
@pytest.mark.parametrize(
    "argv",
    [
        ["run", "--game", "1", "--rounds", "3", "--strategy", "uniform", "--trials", "20000", "--seed", "42"],
        ["run", "--game", "2", "--rounds", "5", "--strategy", "quantum", "--trials", "20000", "--seed", "42"],
        ["game3-report", "--trials", "5000", "--seed", "9"],
    ],
    ids=["run-uniform", "run-quantum", "game3-report"],
)
def test_cli_reproducibility(argv):
    cmd = [sys.executable, "-m", "nlgames", *argv, "--format", "json"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second
    assert json.loads(first)["seed"] == int(argv[argv.index("--seed") + 1])
