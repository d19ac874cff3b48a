"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 contract or verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import List, Optional

from nlgames import analysis, harness, rng
from nlgames.games import game_spec

EXIT_OK, EXIT_USAGE, EXIT_CONTRACT = 0, 1, 2
DECIMAL_DIGITS = 12

EXACT_CSV = ("n", "num", "den", "decimal", "brute_force", "match", "warning")
ENUMERATE_CSV = ("index", "alice_x", "alice_xbar", "bob_x", "bob_xbar", "num", "den", "decimal", "is_max")
VERIFY_CSV = ("observable", "state", "eigenvalue", "residual", "passed")
RUN_CSV = harness.REPORT_FIELDS


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


@dataclass(frozen=True)
class CliConfig:
    command: str
    game: int = 1
    rounds: int = 1
    trials: int = 1000
    strategy: str = "uniform"
    seed: int = 0
    format: str = "text"
    output: Optional[str] = None
    transcripts: Optional[str] = None
    engine: str = "auto"

    def __post_init__(self):
        if self.game not in (1, 2, 3):
            raise UsageError(f"--game must be 1, 2 or 3, got {self.game}")
        if self.rounds < 1:
            raise UsageError("--rounds must be >= 1")
        if self.trials < 1:
            raise UsageError("--trials must be >= 1")
        try:
            rng.check_seed(self.seed)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if self.game == 3:
            object.__setattr__(self, "rounds", 1)

    @property
    def state_kind(self) -> harness.StateKind:
        return harness.StateKind.SINGLET if self.game == 1 else harness.StateKind.PHI_PLUS


def fmt_decimal(value: Fraction) -> str:
    with localcontext() as ctx:
        ctx.prec = DECIMAL_DIGITS
        return str(Decimal(value.numerator) / Decimal(value.denominator))


def _frac(value: Optional[Fraction]):
    return None if value is None else {"num": value.numerator, "den": value.denominator}


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _dump_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


# --- commands -----------------------------------------------------------


def cmd_exact(config: CliConfig):
    rows = []
    ns = [1] if config.game == 3 else range(1, config.rounds + 1)
    for n in ns:
        spec = game_spec(config.game, n)
        value = analysis.uniform_win_prob(spec)
        row = {"n": n, "exact": str(value), "num": value.numerator, "den": value.denominator,
               "decimal": fmt_decimal(value), "brute_force": None, "match": None, "warning": None}
        if n <= analysis.ENUMERATION_CAP:
            brute = analysis.brute_force_uniform_win_prob(spec)
            row["brute_force"] = str(brute)
            row["match"] = brute == value
        else:
            row["warning"] = f"n={n} exceeds enumeration cap {analysis.ENUMERATION_CAP}; cross-check omitted"
        rows.append(row)
    ok = all(r["match"] is not False for r in rows)

    if config.format == "json":
        text = _dump_json({"game": config.game, "model": "uniform", "rows": rows})
    elif config.format == "csv":
        text = _dump_csv(EXACT_CSV, [
            [r["n"], r["num"], r["den"], r["decimal"], r["brute_force"] or "",
             "" if r["match"] is None else r["match"], r["warning"] or ""]
            for r in rows
        ])
    else:
        lines = [f"Game {config.game}, uniform random answers"]
        lines.append(f"{'n':>4}  {'exact':>24}  {'decimal':>16}  brute force")
        for r in rows:
            check = r["warning"] if r["warning"] else f"{r['brute_force']} ({'match' if r['match'] else 'MISMATCH'})"
            lines.append(f"{r['n']:>4}  {r['exact']:>24}  {r['decimal']:>16}  {check}")
        text = "\n".join(lines) + "\n"
    return text, EXIT_OK if ok else EXIT_CONTRACT


def _build_players(config: CliConfig):
    if config.strategy == "uniform":
        player = harness.uniform_random_player()
        return player, player
    if config.strategy == "quantum":
        return harness.quantum_players(config.state_kind)
    pair, _ = analysis.best_deterministic_pair(game_spec(config.game, config.rounds))
    return harness.fixed_players(pair)


def _report_text(report: harness.RunReport) -> str:
    lines = [
        f"game: {report.game_id.name}",
        f"rounds: {report.n}",
        f"trials: {report.trials}",
        f"wins: {report.wins}",
        f"win_frequency: {report.win_frequency!r}",
        f"exact_reference: {report.exact_reference if report.exact_reference is not None else '-'}",
        f"seed: {report.seed}",
        f"promise_violations: {report.promise_violations}",
    ]
    for c in report.eigen_checks:
        lines.append(
            f"eigen_check: {c.observable} on {c.state}, eigenvalue {c.eigenvalue:g}: "
            f"{'pass' if c.passed else 'FAIL'} (residual {c.residual:.3e})"
        )
    if report.condition_counts is not None:
        for name, count in report.condition_counts.items():
            lines.append(f"{name}_condition_rate: {count / report.trials!r} ({count}/{report.trials})")
    return "\n".join(lines) + "\n"


def _render_report(report: harness.RunReport, fmt: str) -> str:
    if fmt == "json":
        return report.to_json() + "\n"
    if fmt == "csv":
        return _dump_csv(RUN_CSV, [report.csv_row()])
    return _report_text(report)


def cmd_run(config: CliConfig):
    spec = game_spec(config.game, config.rounds)
    players = _build_players(config)
    report = harness.run_game(
        spec, players, config.trials, config.seed, engine=config.engine, transcript_path=config.transcripts
    )
    code = EXIT_OK if report.promise_violations == 0 else EXIT_CONTRACT
    return _render_report(report, config.format), code


def cmd_game3_report(config: CliConfig):
    report = harness.game3_dual_report(config.trials, config.seed, engine=config.engine)
    text = _render_report(report, config.format)
    ok = report.promise_violations == 0 and all(c.passed for c in report.eigen_checks)
    return text, EXIT_OK if ok else EXIT_CONTRACT


def cmd_verify(config: CliConfig):
    checks = harness.verify_eigen_relations()
    if config.format == "json":
        text = _dump_json([c.to_dict() for c in checks])
    elif config.format == "csv":
        text = _dump_csv(VERIFY_CSV, [[c.observable, c.state, c.eigenvalue, repr(c.residual), c.passed] for c in checks])
    else:
        lines = [f"{'observable':<12} {'state':<10} {'eigenvalue':>10}  {'residual':>10}  result"]
        for c in checks:
            lines.append(
                f"{c.observable:<12} {c.state:<10} {c.eigenvalue:>10g}  {c.residual:>10.3e}  {'pass' if c.passed else 'FAIL'}"
            )
        text = "\n".join(lines) + "\n"
    return text, EXIT_OK if all(c.passed for c in checks) else EXIT_CONTRACT


def cmd_enumerate(config: CliConfig):
    spec = game_spec(config.game, config.rounds)
    values = analysis.enumerate_strategy_values(spec)
    best_pair, best = analysis.best_deterministic_pair(spec)
    if config.format == "json":
        text = _dump_json({
            "game": config.game,
            "rounds": spec.n,
            "pairs": [
                {
                    "index": i,
                    "alice": {"X": p.alice.on_x, "XBAR": p.alice.on_xbar},
                    "bob": {"X": p.bob.on_x, "XBAR": p.bob.on_xbar},
                    "win_prob": _frac(v),
                    "is_max": v == best,
                }
                for i, (p, v) in enumerate(values)
            ],
            "maximum": _frac(best),
            "best_pair": best_pair.label,
        })
    elif config.format == "csv":
        text = _dump_csv(ENUMERATE_CSV, [
            [i, p.alice.on_x, p.alice.on_xbar, p.bob.on_x, p.bob.on_xbar, v.numerator, v.denominator,
             fmt_decimal(v), v == best]
            for i, (p, v) in enumerate(values)
        ])
    else:
        lines = [f"Game {config.game}, rounds {spec.n}: memoryless deterministic strategy pairs"]
        for i, (p, v) in enumerate(values):
            mark = "  <- max" if v == best else ""
            lines.append(f"{i:>2}  {p.label:<44} {str(v):>5}{mark}")
        lines.append(f"maximum {best} at {best_pair.label}")
        text = "\n".join(lines) + "\n"
    return text, EXIT_OK


COMMANDS = {
    "exact": cmd_exact,
    "run": cmd_run,
    "enumerate": cmd_enumerate,
    "verify": cmd_verify,
    "game3-report": cmd_game3_report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nlgames", description=__doc__.strip().splitlines()[0] if __doc__ else None)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, game=True, rounds=True):
        if game:
            p.add_argument("--game", type=int, choices=(1, 2, 3), default=1)
        if rounds:
            p.add_argument("--rounds", type=int, default=1, help="round count n (forced to 1 for game 3)")
        p.add_argument("--format", choices=("json", "csv", "text"), default="text")
        p.add_argument("--output", "-o", help="write to this file instead of stdout")

    fmt = argparse.RawDescriptionHelpFormatter
    p = sub.add_parser("exact", help="exact uniform-random winning probabilities",
                       epilog="CSV columns: " + ",".join(EXACT_CSV), formatter_class=fmt)
    common(p)
    p = sub.add_parser("run", help="Monte-Carlo run of a game",
                       epilog="CSV columns: " + ",".join(RUN_CSV)
                       + "\nTranscript CSV columns: trial,round_index,q_a,q_b,a,b", formatter_class=fmt)
    common(p)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--strategy", choices=("uniform", "quantum", "best-deterministic"), default="uniform")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--transcripts", help="stream every round to this CSV file")
    p.add_argument("--engine", choices=("auto", "kernel", "reference"), default="auto")
    p = sub.add_parser("enumerate", help="all memoryless deterministic strategy pairs",
                       epilog="CSV columns: " + ",".join(ENUMERATE_CSV), formatter_class=fmt)
    common(p)
    p = sub.add_parser("verify", help="check the sigma_x eigen relations",
                       epilog="CSV columns: " + ",".join(VERIFY_CSV), formatter_class=fmt)
    common(p, game=False, rounds=False)
    p = sub.add_parser("game3-report", help="Game 3 with phi-plus players: outcome and operator level",
                       epilog="CSV columns: " + ",".join(RUN_CSV), formatter_class=fmt)
    common(p, game=False, rounds=False)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--engine", choices=("auto", "kernel", "reference"), default="auto")
    return parser


def parse_config(argv: Optional[List[str]] = None) -> CliConfig:
    args = vars(build_parser().parse_args(argv))
    if args["command"] == "game3-report":
        args["game"] = 3
    return CliConfig(**{k: v for k, v in args.items() if v is not None or k in ("output", "transcripts")})


def main(argv: Optional[List[str]] = None) -> int:
    try:
        config = parse_config(argv)
    except UsageError as exc:
        build_parser().print_usage(sys.stderr)
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        text, code = COMMANDS[config.command](config)
    except harness.IsolationError as exc:
        print(f"nlgames: contract violation: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    if config.output:
        with open(config.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
