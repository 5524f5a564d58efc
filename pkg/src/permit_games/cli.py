"""Command line front end.

Exit codes: 0 success, 1 negative analysis verdict (empty core, manipulable
mechanism, infeasible ledger, failed reproduction), 2 input or usage error.
Output is deterministic for identical input: no timestamps, stable ordering.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import bankruptcy
from .games import lex_coalitions
from .lp import LpStructureError, as_fraction
from .mechanism import GridSizeError, dominance_check, equilibrium_check, make_config
from .partition_games import MINUS, PLUS, build_game, optimistic_game, pessimistic_game, resource_game, resource_witnesses
from .partitions import PartitionLimitError
from .production import SituationError, optimal_demand
from .reference import run_reference_checks
from .report import FORMATS, Report, TABLE, coalition_label, decimal_str, partition_label
from .scenario import Scenario, ScenarioError, dump_scenario, load_scenario, parse_grid
from .stability import CoreVerdict, core_nonempty, stable_pipeline, trade_ledger

INPUT_ERRORS = (
    ScenarioError, SituationError, bankruptcy.RationingError,
    PartitionLimitError, GridSizeError, LpStructureError, ValueError,
)

COMMANDS = (
    "demands", "game", "cores", "resource-games", "pipeline", "mechanism",
    "trade", "reproduce-paper",
)

CORE_CHOICES = ("optimistic", "pessimistic", "resource-plus", "resource-minus", "all")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="permit-games",
        description="Cooperative analysis of capped, taxed emission permit markets.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", help="path to a scenario JSON file")
    common.add_argument("--rule", choices=bankruptcy.RULES,
                        help="division rule (overrides the scenario)")
    common.add_argument("--precision", type=int,
                        help="decimal digits in reports (default from scenario, else 2)")
    common.add_argument("--format", choices=FORMATS, dest="fmt",
                        help="report format (default table; PERMIT_GAMES_FORMAT overrides)")
    common.add_argument("--partition-limit", type=int,
                        help="largest firm count enumerated exhaustively")
    common.add_argument("--grid",
                        help="report grid: 'auto' or comma-separated exact levels")
    common.add_argument("--dump-scenario", metavar="PATH",
                        help="write the normalized scenario back out before running")

    sub.add_parser("demands", parents=[common],
                   help="optimal permit demand of every coalition")
    sub.add_parser("game", parents=[common],
                   help="permit shares and profits for every coalition structure")
    cores = sub.add_parser("cores", parents=[common],
                           help="core verdicts for the derived games")
    cores.add_argument("--game", choices=CORE_CHOICES, default="all",
                       help="which derived game to test (default all)")
    sub.add_parser("resource-games", parents=[common],
                   help="best/worst-case permit allocation games")
    sub.add_parser("pipeline", parents=[common],
                   help="stable permit split and priced profit allocation")
    sub.add_parser("mechanism", parents=[common],
                   help="truthfulness of the rule as a direct mechanism")
    trade = sub.add_parser("trade", parents=[common],
                           help="uniform-price trading ledger toward a target")
    trade.add_argument("--target",
                       help="comma-separated exact profits (default: priced allocation)")
    trade.add_argument("--price", help="uniform permit price (exact literal)")
    sub.add_parser("reproduce-paper", parents=[common],
                   help="re-run the bundled reference economy against its expected tables")
    return parser


def _dispatch(args) -> int:
    if args.command == "reproduce-paper":
        return _cmd_reproduce(args)
    if not args.scenario:
        print("error: --scenario is required for this command", file=sys.stderr)
        return 2
    scenario = load_scenario(args.scenario)
    if args.rule:
        scenario = Scenario(
            name=scenario.name, situation=scenario.situation, rule=args.rule,
            options=scenario.options)
    if args.dump_scenario:
        dump_scenario(scenario, args.dump_scenario)
    handler = {
        "demands": _cmd_demands,
        "game": _cmd_game,
        "cores": _cmd_cores,
        "resource-games": _cmd_resource_games,
        "pipeline": _cmd_pipeline,
        "mechanism": _cmd_mechanism,
        "trade": _cmd_trade,
    }[args.command]
    report, code = handler(scenario, args)
    print(report.render(_format(scenario, args), _precision(scenario, args)), end="")
    return code


def _precision(scenario, args) -> int:
    if args.precision is not None:
        if args.precision < 0:
            raise ScenarioError("--precision must be nonnegative")
        return args.precision
    return scenario.options.precision


def _format(scenario, args) -> str:
    if args.fmt:
        return args.fmt
    env = os.environ.get("PERMIT_GAMES_FORMAT")
    if env:
        if env not in FORMATS:
            raise ScenarioError(
                f"PERMIT_GAMES_FORMAT={env!r} is not one of {', '.join(FORMATS)}")
        return env
    return scenario.options.report_format


def _limit(scenario, args) -> int:
    if args.partition_limit is not None:
        if args.partition_limit < 1:
            raise ScenarioError("--partition-limit must be positive")
        return args.partition_limit
    return scenario.options.partition_limit


def _cmd_demands(scenario, args):
    sit = scenario.situation
    report = Report()
    sec = report.section(f"optimal permit demands [{scenario.name}]",
                         ["coalition", "demand"])
    for fs in lex_coalitions(sit.firms()):
        sec.add_row(coalition_label(fs), optimal_demand(sit, fs))
    return report, 0


def _cmd_game(scenario, args):
    game = build_game(scenario.situation, scenario.rule, limit=_limit(scenario, args))
    report = Report()
    sec = report.section(
        f"partition game under {scenario.rule} [{scenario.name}]",
        ["structure", "block", "claim", "permits", "profit"])
    for partition in game.partitions:
        for block in partition:
            fs = frozenset(block)
            sec.add_row(
                partition_label(partition), coalition_label(fs),
                game.demands[fs], game.shares[fs, partition],
                game.values[fs, partition])
    return report, 0


def _core_section(report, title, game_values, verdict: CoreVerdict, precision):
    sec = report.section(title, ["coalition", "value"])
    for fs in sorted(game_values.values, key=lambda s: tuple(sorted(s))):
        sec.add_row(coalition_label(fs), game_values.values[fs])
    if verdict.nonempty:
        witness = ", ".join(
            f"{decimal_str(v, precision)}" for v in verdict.witness)
        sec.add_line(f"core: NONEMPTY; witness ({witness})")
    else:
        cert = verdict.certificate
        claims = " + ".join(
            f"{decimal_str(weight * game_values.values[fs], precision)}"
            if weight != 1 else decimal_str(game_values.values[fs], precision)
            for fs, weight in cert.parts)
        blocks = ", ".join(
            (f"{weight} x {coalition_label(fs)}" if weight != 1 else coalition_label(fs))
            for fs, weight in cert.parts)
        sec.add_line(
            f"core: EMPTY; {blocks} jointly claim {claims} = "
            f"{decimal_str(cert.weighted_total, precision)} > "
            f"{decimal_str(cert.grand_value, precision)} = grand value")


def _cmd_cores(scenario, args):
    sit = scenario.situation
    precision = _precision(scenario, args)
    game = build_game(sit, scenario.rule, limit=_limit(scenario, args))
    wanted = args.game
    derived = []
    if wanted in ("optimistic", "all"):
        derived.append(("optimistic profits", optimistic_game(game)))
    if wanted in ("pessimistic", "all"):
        derived.append(("pessimistic profits", pessimistic_game(game)))
    if wanted in ("resource-plus", "all"):
        derived.append(("best-case permit allocations", resource_game(game, PLUS)))
    if wanted in ("resource-minus", "all"):
        derived.append(("worst-case permit allocations", resource_game(game, MINUS)))
    report = Report()
    all_nonempty = True
    for title, cg in derived:
        verdict = core_nonempty(cg)
        all_nonempty = all_nonempty and verdict.nonempty
        _core_section(
            report, f"{title} under {scenario.rule} [{scenario.name}]",
            cg, verdict, precision)
    return report, 0 if all_nonempty else 1


def _cmd_resource_games(scenario, args):
    game = build_game(scenario.situation, scenario.rule, limit=_limit(scenario, args))
    report = Report()
    for sense, title in ((PLUS, "best-case"), (MINUS, "worst-case")):
        cg = resource_game(game, sense)
        witnesses = resource_witnesses(game, sense)
        sec = report.section(
            f"{title} permit allocation game under {scenario.rule} [{scenario.name}]",
            ["coalition", "permits", "witnessing structure"])
        for fs in cg.coalitions():
            sec.add_row(coalition_label(fs), cg.values[fs],
                        partition_label(witnesses[fs]))
    return report, 0


def _cmd_pipeline(scenario, args):
    sit = scenario.situation
    precision = _precision(scenario, args)
    result = stable_pipeline(sit, scenario.rule, limit=_limit(scenario, args))
    report = Report()
    sec = report.section(
        f"stability pipeline under {scenario.rule} [{scenario.name}]",
        ["firm", "demand", "permit split"])
    for i, firm in enumerate(sit.firms()):
        sec.add_row(coalition_label({firm}), result.individual_demands[i],
                    result.permit_split[i])
    cond = report.section("conditions")
    cond.add_line(f"cap {decimal_str(sit.cap, precision)}; grand demand "
                  f"{decimal_str(result.grand_demand, precision)}; "
                  f"scarce: {'yes' if result.scarce else 'no'}")
    cond.add_line("individual claims exceed cap: "
                  f"{'yes' if result.claims_exceed_cap else 'no'}")
    cond.add_line("pairwise demand floor (every pair covers 2*cap/n): "
                  f"{'yes' if result.pairwise_floor_ok else 'no'}")
    if result.cea_conditions_ok is not None:
        cond.add_line("equal-awards sufficient condition (rule cea, scarce, floor): "
                      f"{'yes' if result.cea_conditions_ok else 'no'}")
    if result.standalone_ok is not None:
        cond.add_line("pooled awards cover every standalone block share: "
                      f"{'yes' if result.standalone_ok else 'no'}")
    if result.split_membership is not None:
        verdict = report.section("permit split stability")
        if result.split_membership.ok:
            verdict.add_line("split lies in the core of the worst-case permit game")
        else:
            m = result.split_membership
            if not m.efficiency_ok:
                verdict.add_line("split is not efficient for the permit game")
            else:
                verdict.add_line(
                    f"coalition {coalition_label(m.violated)} gets "
                    f"{decimal_str(m.coalition_total, precision)} but can secure "
                    f"{decimal_str(m.coalition_value, precision)}")
            if result.resource_core is not None and not result.resource_core.nonempty:
                verdict.add_line("worst-case permit game core is EMPTY")
    if result.money is not None:
        money = report.section("priced profit allocation", ["firm", "profit"])
        for firm, value in zip(sit.firms(), result.money.money):
            money.add_row(coalition_label({firm}), value)
        money.add_line(
            "resource prices " +
            ", ".join(decimal_str(y, precision) for y in result.money.dual[:-1]) +
            f"; permit price {decimal_str(result.money.dual[-1], precision)}")
        money.add_line(
            "pessimistic-core membership: "
            f"{'verified' if result.money_membership.ok else 'FAILED'}")
    final = report.section("verdict")
    final.add_line(result.verdict)
    code = 0 if result.verdict in ("stable", "abundant") else 1
    return report, code


def _cmd_mechanism(scenario, args):
    sit = scenario.situation
    precision = _precision(scenario, args)
    grid = parse_grid(args.grid) if args.grid else scenario.options.grid
    cfg = make_config(sit, scenario.rule, grid=grid)
    report = Report()
    sec = report.section(
        f"direct mechanism under {scenario.rule} [{scenario.name}]",
        ["claimant", "true demand", "report grid"])
    for i, block in enumerate(cfg.structure):
        sec.add_row(coalition_label(block), cfg.true_demands[i],
                    ", ".join(str(v) for v in cfg.grids[i]))
    dom = dominance_check(sit, cfg)
    eq = equilibrium_check(sit, cfg, cfg.truthful_profile)
    out = report.section("verdict")
    out.add_line(f"payoff cells checked: {dom.cells_checked}")
    if dom.truthful_dominant:
        out.add_line("truth-telling is a dominant strategy on this grid")
    else:
        bad = dom.counterexample
        out.add_line("truth-telling is NOT dominant:")
        out.add_line(
            f"  claimant {coalition_label(cfg.structure[bad.claimant])} reports "
            f"{bad.deviation} against {tuple(str(v) for v in bad.opponent_reports)} "
            f"and improves {decimal_str(bad.truthful_payoff, precision)} -> "
            f"{decimal_str(bad.deviant_payoff, precision)}")
    out.add_line(
        "truthful profile is "
        + ("an equilibrium" if eq.holds else "NOT an equilibrium"))
    return report, 0 if dom.truthful_dominant else 1


def _parse_vector(text: str, what: str) -> tuple[Fraction, ...]:
    try:
        return tuple(as_fraction(part.strip()) for part in text.split(","))
    except LpStructureError as exc:
        raise ScenarioError(f"{what}: {exc}") from None


def _cmd_trade(scenario, args):
    sit = scenario.situation
    precision = _precision(scenario, args)
    pipeline = stable_pipeline(sit, scenario.rule, limit=_limit(scenario, args))
    if not (pipeline.scarce and pipeline.claims_exceed_cap):
        raise ScenarioError(
            "trading analysis needs a rationed cap: both the grand demand and "
            "the individual claims must exceed it")
    split = pipeline.permit_split
    if args.target:
        target = _parse_vector(args.target, "--target")
    else:
        if pipeline.money is None:
            raise ScenarioError(
                "no default target: the pipeline produced no priced allocation; "
                "pass --target explicitly")
        target = pipeline.money.money
    price = as_fraction(args.price) if args.price else None
    ledger = trade_ledger(sit, split, target, price=price)
    report = Report()
    if not ledger.feasible:
        sec = report.section(f"trade ledger [{scenario.name}]")
        sec.add_line(f"INFEASIBLE: {ledger.reason}")
        return report, 1
    sec = report.section(
        f"trade ledger [{scenario.name}]",
        ["firm", "permits bought", "tax paid", "final permits",
         "production revenue", "net sold", "trade cash", "net profit"])
    for row in ledger.rows:
        sec.add_row(
            coalition_label({row.firm}), row.initial_permits, row.tax_paid,
            row.final_permits, row.production_revenue, row.net_sold,
            row.trade_cash, row.net_profit)
    price_line = ("no trades needed" if ledger.price is None
                  else f"uniform permit price {decimal_str(ledger.price, precision)}")
    sec.add_line(price_line)
    sec.add_line(f"authority revenue {decimal_str(ledger.manager_revenue, precision)}")
    return report, 0


def _cmd_reproduce(args) -> int:
    checks = run_reference_checks()
    width = max(len(c.name) for c in checks)
    failed = 0
    for c in checks:
        status = "ok" if c.ok else "MISMATCH"
        detail = f"  {c.detail}" if (c.detail and not c.ok) else ""
        print(f"{c.name.ljust(width)}  {status}{detail}")
        if not c.ok:
            failed += 1
    total = len(checks)
    print(f"{total - failed}/{total} reference checks passed")
    return 0 if failed == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
