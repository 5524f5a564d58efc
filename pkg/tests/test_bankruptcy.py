"""Division rules against hand-computed splits and their axioms."""

import itertools
import random
from fractions import Fraction

import pytest

from permit_games.bankruptcy import (
    BankruptcyProblem,
    RULES,
    RationingError,
    apply_rule,
    bankruptcy_game,
    constrained_equal_awards,
    constrained_equal_losses,
    talmud,
)
from permit_games.stability import in_core

import support

F = Fraction


def problem(estate, claims):
    return BankruptcyProblem.create(
        claimants=range(1, len(claims) + 1), estate=estate, claims=claims)


def test_cea_reference_splits():
    assert apply_rule("cea", problem(50, [20, 20, 25])) == (F(50, 3),) * 3
    assert apply_rule("cea", problem(50, [46, 20])) == (F(30), F(20))
    assert apply_rule("cea", problem(50, [40, 25])) == (F(25), F(25))
    assert apply_rule("cea", problem(50, [45, 20])) == (F(30), F(20))


def test_prop_reference_split():
    assert apply_rule("prop", problem(50, [20, 20, 25])) == (
        F(200, 13), F(200, 13), F(250, 13))


def test_cel_split():
    # oracle: walk loss breakpoints of sum max(d_i - loss, 0) = 50 by hand
    assert apply_rule("cel", problem(50, [20, 20, 25])) == (F(15), F(15), F(20))


def test_talmud_split():
    # estate 50 > half-claims 32.5, so half-claims plus CEL on the rest
    assert apply_rule("tal", problem(50, [20, 20, 25])) == (F(15), F(15), F(20))


@pytest.mark.parametrize("rule", RULES)
def test_exact_fill_and_empty_estate(rule):
    claims = [F(7), F(3), F(11, 2)]
    full = problem(sum(claims), claims)
    assert apply_rule(rule, full) == tuple(claims)
    empty = problem(0, claims)
    assert apply_rule(rule, empty) == (F(0),) * 3


def test_abundant_case_rejected():
    with pytest.raises(RationingError, match="abundant"):
        problem(100, [20, 20, 25])


def test_talmud_meets_half_claims_cea_at_breakpoint():
    rng = random.Random(5)
    for _ in range(50):
        claims = [support.rand_fraction(rng, 0, 12) for _ in range(rng.randint(1, 5))]
        half = sum(claims) / 2
        assert talmud(half, claims) == constrained_equal_awards(half, [d / 2 for d in claims])


@pytest.mark.parametrize("rule", RULES)
def test_rule_axioms_random(rule):
    rng = random.Random(hash(rule) % 100000)
    for _ in range(80):
        prob = support.rand_bankruptcy_problem(rng)
        awards = apply_rule(rule, prob)
        assert sum(awards) == prob.estate
        for a, d in zip(awards, prob.claims):
            assert 0 <= a <= d
        for (ai, di), (aj, dj) in itertools.combinations(zip(awards, prob.claims), 2):
            if di == dj:
                assert ai == aj
            if di <= dj:
                assert ai <= aj and di - ai <= dj - aj
            else:
                assert aj <= ai and dj - aj <= di - ai


def test_cea_merging_proofness_random():
    rng = random.Random(77)
    for _ in range(60):
        prob = support.rand_bankruptcy_problem(rng)
        if len(prob.claims) < 2:
            continue
        awards = constrained_equal_awards(prob.estate, prob.claims)
        for k, j in itertools.combinations(range(len(prob.claims)), 2):
            merged_claims = [d for idx, d in enumerate(prob.claims) if idx not in (k, j)]
            merged_claims.append(prob.claims[k] + prob.claims[j])
            merged = constrained_equal_awards(prob.estate, merged_claims)
            assert merged[-1] <= awards[k] + awards[j]


def test_prop_merging_neutrality_random():
    rng = random.Random(78)
    for _ in range(60):
        prob = support.rand_bankruptcy_problem(rng)
        if len(prob.claims) < 2 or sum(prob.claims) == 0:
            continue
        awards = apply_rule("prop", prob)
        for k, j in itertools.combinations(range(len(prob.claims)), 2):
            merged_claims = [d for idx, d in enumerate(prob.claims) if idx not in (k, j)]
            merged_claims.append(prob.claims[k] + prob.claims[j])
            merged = apply_rule("prop", problem(prob.estate, merged_claims))
            assert merged[-1] == awards[k] + awards[j]


def test_game_reference_values():
    game = bankruptcy_game(problem(50, [20, 20, 25]))
    assert game.value([1]) == 5
    assert game.value([1, 2]) == 25
    assert game.value([1, 2, 3]) == 50


def test_game_degenerate_cases():
    zero = bankruptcy_game(problem(0, [3, 4]))
    assert all(v == 0 for v in zero.values.values())
    null = bankruptcy_game(problem(6, [5, 0, 4]))
    for coalition in null.coalitions():
        if 2 not in coalition:
            assert null.values[coalition] == null.value(coalition | {2})


@pytest.mark.parametrize("rule", RULES)
def test_awards_lie_in_game_core(rule):
    rng = random.Random(hash(rule) % 9999 + 1)
    for _ in range(40):
        prob = support.rand_bankruptcy_problem(rng)
        awards = apply_rule(rule, prob)
        assert in_core(bankruptcy_game(prob), awards).ok


def test_cel_loss_level_oracle():
    # independent check: solve sum max(d_i - loss, 0) = estate by scanning
    rng = random.Random(31)
    for _ in range(40):
        prob = support.rand_bankruptcy_problem(rng)
        awards = constrained_equal_losses(prob.estate, prob.claims)
        losses = sorted({d - a for d, a in zip(prob.claims, awards) if a > 0})
        if losses:
            assert len(losses) == 1  # everyone served loses the same amount
            loss = losses[0]
            for d, a in zip(prob.claims, awards):
                if a == 0:
                    assert d <= loss
