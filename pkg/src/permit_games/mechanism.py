"""Direct mechanism: firms report permit needs, a rule divides the cap.

Claimants are the blocks of a fixed coalition structure (singletons by
default).  Each block reports a need; when the reports exceed the cap the
announced rule rations them, otherwise reports are served in full.  A block's
payoff is its best profit from its own endowment at the allocated quantity,
tax included.  Truthfulness checks run exhaustively over finite report grids,
so they are desk-scale verifications rather than proofs over a continuum.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import bankruptcy
from .lp import as_fraction
from .partitions import Partition, singleton_partition
from .production import Situation, coalition_value, optimal_demand

ZERO = Fraction(0)

DEFAULT_CELL_LIMIT = 250_000


class GridSizeError(ValueError):
    """The opponent-profile x deviation product exceeds the configured limit."""


@dataclass(frozen=True)
class MechanismConfig:
    rule: str
    structure: Partition
    grids: tuple[tuple[Fraction, ...], ...]
    true_demands: tuple[Fraction, ...]

    @property
    def claimants(self) -> int:
        return len(self.structure)

    @property
    def truthful_profile(self) -> tuple[Fraction, ...]:
        return self.true_demands


def make_config(sit: Situation, rule: str, structure: Optional[Partition] = None,
                grid=None) -> MechanismConfig:
    """Assemble a config; every grid always contains the block's true demand.

    ``grid`` may be None (a small default including the truthful rationing
    water level), one sequence of levels shared by all claimants, or one
    sequence per claimant.
    """
    rule = bankruptcy.check_rule(rule)
    structure = structure or singleton_partition(sit.n_firms)
    blocks = [frozenset(b) for b in structure]
    demands = tuple(optimal_demand(sit, b) for b in blocks)
    if grid is None:
        levels_by_claimant = [_default_levels(sit, demands, i) for i in range(len(blocks))]
    elif grid and isinstance(grid[0], (list, tuple)):
        if len(grid) != len(blocks):
            raise ValueError(f"{len(grid)} grids for {len(blocks)} claimants")
        levels_by_claimant = [list(levels) for levels in grid]
    else:
        levels_by_claimant = [list(grid) for _ in blocks]
    grids = []
    for levels, demand in zip(levels_by_claimant, demands):
        values = {as_fraction(v) for v in levels}
        values.add(demand)
        if any(v < 0 for v in values):
            raise ValueError("report levels must be nonnegative")
        grids.append(tuple(sorted(values)))
    return MechanismConfig(
        rule=rule, structure=structure, grids=tuple(grids), true_demands=demands)


def _default_levels(sit: Situation, demands, i) -> list[Fraction]:
    levels = [ZERO, demands[i] / 2, demands[i], sit.cap]
    if sum(demands, ZERO) > sit.cap:
        # truthful rationing water level, a natural kink of the CEA allocation
        awards = bankruptcy.constrained_equal_awards(sit.cap, demands)
        levels.append(max(awards))
    return levels


def allocate(rule: str, reports: Sequence[Fraction], cap: Fraction) -> tuple[Fraction, ...]:
    """Serve reports in full under the cap, otherwise ration them."""
    reports = tuple(reports)
    if sum(reports, ZERO) <= cap:
        return reports
    return bankruptcy._RULE_FUNCTIONS[bankruptcy.check_rule(rule)](cap, reports)


def mechanism_payoff(sit: Situation, cfg: MechanismConfig,
                     reports: Sequence, claimant: int) -> Fraction:
    """Profit of claimant block ``claimant`` (0-based) under the reported needs."""
    profile = tuple(as_fraction(v) for v in reports)
    if len(profile) != cfg.claimants:
        raise ValueError(f"{len(profile)} reports for {cfg.claimants} claimants")
    if any(v < 0 for v in profile):
        raise ValueError("reports must be nonnegative")
    awards = allocate(cfg.rule, profile, sit.cap)
    return coalition_value(sit, cfg.structure[claimant], awards[claimant])


@dataclass(frozen=True)
class Deviation:
    claimant: int
    opponent_reports: tuple[Fraction, ...]  # full profile with the truth in place
    deviation: Fraction
    truthful_payoff: Fraction
    deviant_payoff: Fraction


@dataclass(frozen=True)
class DominanceReport:
    truthful_dominant: bool
    cells_checked: int
    counterexample: Optional[Deviation] = None


def dominance_check(sit: Situation, cfg: MechanismConfig,
                    cell_limit: int = DEFAULT_CELL_LIMIT) -> DominanceReport:
    """Is truth-telling weakly best against every grid profile of the others?

    Exhaustive over the grid product; the first counterexample in claimant /
    opponent / deviation order is returned.
    """
    k = cfg.claimants
    cells = sum(
        _product_size(cfg, i) * len(cfg.grids[i]) for i in range(k))
    if cells > cell_limit:
        raise GridSizeError(
            f"{cells} payoff cells exceed the limit of {cell_limit}")
    checked = 0
    for i in range(k):
        other_grids = [cfg.grids[j] for j in range(k) if j != i]
        for others in itertools.product(*other_grids):
            profile = list(others)
            profile.insert(i, cfg.true_demands[i])
            truthful = mechanism_payoff(sit, cfg, profile, i)
            for deviation in cfg.grids[i]:
                checked += 1
                profile[i] = deviation
                payoff = mechanism_payoff(sit, cfg, profile, i)
                if payoff > truthful:
                    profile[i] = cfg.true_demands[i]
                    return DominanceReport(
                        truthful_dominant=False, cells_checked=checked,
                        counterexample=Deviation(
                            claimant=i, opponent_reports=tuple(profile),
                            deviation=deviation, truthful_payoff=truthful,
                            deviant_payoff=payoff))
            profile[i] = cfg.true_demands[i]
    return DominanceReport(truthful_dominant=True, cells_checked=checked)


def _product_size(cfg: MechanismConfig, i: int) -> int:
    size = 1
    for j, grid in enumerate(cfg.grids):
        if j != i:
            size *= len(grid)
    return size


@dataclass(frozen=True)
class EquilibriumReport:
    holds: bool
    improving: Optional[Deviation] = None


def equilibrium_check(sit: Situation, cfg: MechanismConfig,
                      profile: Sequence) -> EquilibriumReport:
    """No claimant gains by a unilateral grid deviation from ``profile``."""
    base = tuple(as_fraction(v) for v in profile)
    for i in range(cfg.claimants):
        current = mechanism_payoff(sit, cfg, base, i)
        trial = list(base)
        for deviation in cfg.grids[i]:
            trial[i] = deviation
            payoff = mechanism_payoff(sit, cfg, trial, i)
            if payoff > current:
                return EquilibriumReport(
                    holds=False,
                    improving=Deviation(
                        claimant=i, opponent_reports=base, deviation=deviation,
                        truthful_payoff=current, deviant_payoff=payoff))
    return EquilibriumReport(holds=True)
