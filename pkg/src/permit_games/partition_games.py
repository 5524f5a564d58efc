"""Partition-function games induced by a division rule on permit claims.

For every coalition structure the blocks claim their optimal permit demands;
when the claims exceed the cap the announced rule rations them, otherwise
every block is served in full.  Block profits then depend on the whole
structure, which is exactly where the externalities live.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from . import bankruptcy
from .games import CharacteristicGame, lex_coalitions
from .partitions import DEFAULT_LIMIT, Partition, enumerate_partitions, partitions_containing
from .production import Situation, coalition_value, optimal_demand

ZERO = Fraction(0)

PLUS = "plus"
MINUS = "minus"


@dataclass
class PartitionGame:
    situation: Situation
    rule: str
    partitions: tuple[Partition, ...]
    demands: dict[frozenset[int], Fraction]
    shares: dict[tuple[frozenset[int], Partition], Fraction]
    values: dict[tuple[frozenset[int], Partition], Fraction]

    @property
    def players(self) -> tuple[int, ...]:
        return self.situation.firms()

    def demand(self, members: Iterable[int]) -> Fraction:
        return self.demands[frozenset(members)]

    def share(self, members: Iterable[int], partition: Partition) -> Fraction:
        return self.shares[frozenset(members), partition]

    def value(self, members: Iterable[int], partition: Partition) -> Fraction:
        return self.values[frozenset(members), partition]

    def containing(self, members: Iterable[int]) -> list[Partition]:
        return partitions_containing(self.partitions, members)

    @property
    def grand_partition(self) -> Partition:
        return (self.players,)

    @property
    def grand_value(self) -> Fraction:
        return self.values[frozenset(self.players), self.grand_partition]


def build_game(sit: Situation, rule: str, limit: int = DEFAULT_LIMIT) -> PartitionGame:
    """Tabulate permit shares and block profits for every coalition structure."""
    rule = bankruptcy.check_rule(rule)
    n = sit.n_firms
    partitions = enumerate_partitions(n, limit)
    demands = {fs: optimal_demand(sit, fs) for fs in lex_coalitions(sit.firms())}
    shares: dict[tuple[frozenset[int], Partition], Fraction] = {}
    values: dict[tuple[frozenset[int], Partition], Fraction] = {}
    for partition in partitions:
        blocks = [frozenset(b) for b in partition]
        claims = [demands[b] for b in blocks]
        if sum(claims, ZERO) <= sit.cap:
            awards = claims  # the cap satisfies everyone in this structure
        else:
            problem = bankruptcy.BankruptcyProblem.create(
                claimants=partition, estate=sit.cap, claims=claims)
            awards = bankruptcy.apply_rule(rule, problem)
        for block, award in zip(blocks, awards):
            shares[block, partition] = award
            values[block, partition] = coalition_value(sit, block, award)
    return PartitionGame(
        situation=sit, rule=rule, partitions=partitions,
        demands=demands, shares=shares, values=values)


def pessimistic_game(game: PartitionGame) -> CharacteristicGame:
    """Coalition worth = worst profit over the structures containing it."""
    return _bound_game(game, min)


def optimistic_game(game: PartitionGame) -> CharacteristicGame:
    """Coalition worth = best profit over the structures containing it."""
    return _bound_game(game, max)


def _bound_game(game: PartitionGame, pick) -> CharacteristicGame:
    values = {}
    for fs in lex_coalitions(game.players):
        values[fs] = pick(game.values[fs, p] for p in game.containing(fs))
    return CharacteristicGame(players=game.players, values=values)


def resource_game(game: PartitionGame, sense: str) -> CharacteristicGame:
    """Permit quantity a coalition gets in its best (plus) or worst (minus)
    structures, tie-broken toward the fewest permits."""
    values = {}
    for fs in lex_coalitions(game.players):
        values[fs] = min(game.shares[fs, p] for p in _extremal_partitions(game, fs, sense))
    return CharacteristicGame(players=game.players, values=values)


def resource_witnesses(game: PartitionGame, sense: str) -> dict[frozenset[int], Partition]:
    """Canonically first structure attaining each coalition's resource value."""
    out = {}
    for fs in lex_coalitions(game.players):
        candidates = _extremal_partitions(game, fs, sense)
        best_share = min(game.shares[fs, p] for p in candidates)
        out[fs] = next(p for p in candidates if game.shares[fs, p] == best_share)
    return out


def _extremal_partitions(game: PartitionGame, fs: frozenset[int], sense: str) -> list[Partition]:
    if sense not in (PLUS, MINUS):
        raise ValueError(f"sense must be {PLUS!r} or {MINUS!r}, got {sense!r}")
    containing = game.containing(fs)
    pick = max if sense == PLUS else min
    bound = pick(game.values[fs, p] for p in containing)
    return [p for p in containing if game.values[fs, p] == bound]
