"""Exact linear programming over the rationals.

Dense two-phase primal simplex with Bland's least-index pivot rule, so the
solver terminates under degeneracy and is deterministic for identical input.
All arithmetic uses fractions.Fraction; there is no floating point anywhere,
which keeps downstream argmin/argmax sets and core verdicts well defined.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

LE = "<="
EQ = "="
GE = ">="

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

ZERO = Fraction(0)
ONE = Fraction(1)


class LpStructureError(ValueError):
    """Malformed program (bad dimensions, unknown sense, inexact number).

    Distinct from INFEASIBLE, which is a property of a well-formed program.
    """


def as_fraction(x) -> Fraction:
    """Convert an exact numeric literal (int, Fraction, 'p/q' or decimal string)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise LpStructureError(f"not an exact number: {x!r}") from exc
    raise LpStructureError(f"refusing inexact or unknown numeric type {type(x).__name__}: {x!r}")


def _fraction_vector(values) -> tuple[Fraction, ...]:
    return tuple(as_fraction(v) for v in values)


@dataclass(frozen=True)
class LinearProgram:
    """max objective . x subject to rows {<=,=,>=} rhs and variable bounds.

    ``lower[j]`` is a Fraction (default 0) or None for a free variable;
    ``upper[j]`` is a Fraction or None (default) for no upper bound.
    """

    objective: tuple[Fraction, ...]
    rows: tuple[tuple[Fraction, ...], ...]
    senses: tuple[str, ...]
    rhs: tuple[Fraction, ...]
    lower: tuple[Optional[Fraction], ...]
    upper: tuple[Optional[Fraction], ...]

    @property
    def n_vars(self) -> int:
        return len(self.objective)

    @property
    def n_rows(self) -> int:
        return len(self.rows)


def linear_program(objective, constraints, lower=ZERO, upper=None) -> LinearProgram:
    """Build a validated LinearProgram.

    ``constraints`` is an iterable of (coefficients, sense, rhs) triples.
    ``lower``/``upper`` may be a single bound applied to every variable or a
    per-variable sequence; None means unbounded on that side.
    """
    obj = _fraction_vector(objective)
    n = len(obj)
    if n == 0:
        raise LpStructureError("a program needs at least one variable")
    rows, senses, rhs = [], [], []
    for k, triple in enumerate(constraints):
        try:
            coeffs, sense, b = triple
        except (TypeError, ValueError) as exc:
            raise LpStructureError(f"constraint {k}: expected (coeffs, sense, rhs)") from exc
        coeffs = _fraction_vector(coeffs)
        if len(coeffs) != n:
            raise LpStructureError(
                f"constraint {k}: {len(coeffs)} coefficients for {n} variables")
        if sense not in (LE, EQ, GE):
            raise LpStructureError(f"constraint {k}: unknown sense {sense!r}")
        rows.append(coeffs)
        senses.append(sense)
        rhs.append(as_fraction(b))

    def expand(bound):
        if bound is None or isinstance(bound, (int, Fraction, str)):
            one = None if bound is None else as_fraction(bound)
            return tuple(one for _ in range(n))
        seq = tuple(bound)
        if len(seq) != n:
            raise LpStructureError(f"{len(seq)} bounds for {n} variables")
        return tuple(None if b is None else as_fraction(b) for b in seq)

    return LinearProgram(
        objective=obj,
        rows=tuple(rows),
        senses=tuple(senses),
        rhs=tuple(rhs),
        lower=expand(lower),
        upper=expand(upper),
    )


@dataclass(frozen=True)
class LpSolution:
    """Outcome of a solve; primal/dual/objective_value are None unless optimal.

    ``dual`` carries one multiplier per declared constraint, with signs fixed
    so that for a maximization a <=-row has a nonnegative multiplier and a
    >=-row a nonpositive one.  At an optimum the pair (primal, dual) satisfies
    complementary slackness exactly.
    """

    status: str
    objective_value: Optional[Fraction] = None
    primal: Optional[tuple[Fraction, ...]] = None
    dual: Optional[tuple[Fraction, ...]] = None


def solve(lp: LinearProgram) -> LpSolution:
    """Solve ``lp`` exactly; returns status optimal/infeasible/unbounded."""
    _validate(lp)
    n = lp.n_vars

    # Map declared variables onto nonnegative standard-form columns.
    # Finite lower bound: x = lower + u.  Free: x = u+ - u-.
    col_of_var: list[tuple[str, int, int]] = []  # (kind, col, col_neg)
    shifts: list[Fraction] = []
    std_cols = 0
    for j in range(n):
        low = lp.lower[j]
        if low is None:
            col_of_var.append(("free", std_cols, std_cols + 1))
            shifts.append(ZERO)
            std_cols += 2
        else:
            col_of_var.append(("shift", std_cols, -1))
            shifts.append(low)
            std_cols += 1

    def std_row(coeffs: Sequence[Fraction]) -> list[Fraction]:
        row = [ZERO] * std_cols
        for j, a in enumerate(coeffs):
            if not a:
                continue
            kind, c0, c1 = col_of_var[j]
            row[c0] += a
            if kind == "free":
                row[c1] -= a
        return row

    work_rows: list[list[Fraction]] = []
    work_rhs: list[Fraction] = []
    work_senses: list[str] = []
    for i in range(lp.n_rows):
        shift = sum((a * s for a, s in zip(lp.rows[i], shifts)), ZERO)
        work_rows.append(std_row(lp.rows[i]))
        work_rhs.append(lp.rhs[i] - shift)
        work_senses.append(lp.senses[i])
    n_declared = lp.n_rows

    # Finite upper bounds become internal <=-rows (duals not reported).
    for j in range(n):
        up = lp.upper[j]
        if up is None:
            continue
        coeffs = [ZERO] * n
        coeffs[j] = ONE
        work_rows.append(std_row(coeffs))
        work_rhs.append(up - shifts[j])
        work_senses.append(LE)

    m = len(work_rows)
    flips = [ONE] * m
    for i in range(m):
        if work_rhs[i] < 0:
            flips[i] = -ONE
            work_rows[i] = [-a for a in work_rows[i]]
            work_rhs[i] = -work_rhs[i]
            if work_senses[i] != EQ:
                work_senses[i] = LE if work_senses[i] == GE else GE

    # Column layout: structural | slack/surplus | artificial, then rhs.
    slack_col: list[int] = [-1] * m
    unit_col: list[int] = [-1] * m  # column whose tableau entries expose B^-1
    next_col = std_cols
    for i in range(m):
        if work_senses[i] != EQ:
            slack_col[i] = next_col
            next_col += 1
    art_cols: list[int] = []
    for i in range(m):
        if work_senses[i] == LE:
            unit_col[i] = slack_col[i]
        else:
            unit_col[i] = next_col
            art_cols.append(next_col)
            next_col += 1
    total = next_col
    artificial = [False] * total
    for c in art_cols:
        artificial[c] = True

    tableau = [[ZERO] * (total + 1) for _ in range(m)]
    basis = [0] * m
    for i in range(m):
        row = tableau[i]
        row[: std_cols] = work_rows[i]
        if slack_col[i] >= 0:
            row[slack_col[i]] = ONE if work_senses[i] == LE else -ONE
        if unit_col[i] != slack_col[i]:
            row[unit_col[i]] = ONE
        row[total] = work_rhs[i]
        basis[i] = unit_col[i]

    obj_std = [ZERO] * total
    for j in range(n):
        kind, c0, c1 = col_of_var[j]
        obj_std[c0] += lp.objective[j]
        if kind == "free":
            obj_std[c1] -= lp.objective[j]

    if art_cols:
        phase1 = [(-ONE if artificial[c] else ZERO) for c in range(total)]
        if not _run_simplex(tableau, basis, phase1, total, enterable=lambda c: True):
            raise RuntimeError("phase-1 objective cannot be unbounded")
        infeasibility = sum(
            (tableau[i][total] for i in range(m) if artificial[basis[i]]), ZERO)
        if infeasibility != 0:
            return LpSolution(status=INFEASIBLE)
        _drive_out_artificials(tableau, basis, artificial, total)

    bounded = _run_simplex(
        tableau, basis, obj_std, total, enterable=lambda c: not artificial[c])
    if not bounded:
        return LpSolution(status=UNBOUNDED)

    values = [ZERO] * total
    for i in range(m):
        values[basis[i]] = tableau[i][total]
    primal = []
    for j in range(n):
        kind, c0, c1 = col_of_var[j]
        x = shifts[j] + values[c0]
        if kind == "free":
            x = values[c0] - values[c1]
        primal.append(x)
    objective_value = sum(
        (cj * xj for cj, xj in zip(lp.objective, primal)), ZERO)

    # y = c_B B^-1, read under the unit column of each row; undo row flips.
    y_std = []
    for i in range(m):
        col = unit_col[i]
        y_std.append(sum((obj_std[basis[k]] * tableau[k][col] for k in range(m)), ZERO))
    dual = tuple(flips[i] * y_std[i] for i in range(n_declared))

    solution = LpSolution(
        status=OPTIMAL,
        objective_value=objective_value,
        primal=tuple(primal),
        dual=dual,
    )
    _self_check(lp, solution, y_std, work_rhs, values, obj_std, total, m)
    return solution


def _validate(lp: LinearProgram) -> None:
    n = lp.n_vars
    if not (len(lp.senses) == len(lp.rhs) == lp.n_rows):
        raise LpStructureError("row count, senses and rhs lengths disagree")
    for i, row in enumerate(lp.rows):
        if len(row) != n:
            raise LpStructureError(f"row {i} has {len(row)} coefficients, expected {n}")
    if len(lp.lower) != n or len(lp.upper) != n:
        raise LpStructureError("bounds length disagrees with variable count")
    for i, sense in enumerate(lp.senses):
        if sense not in (LE, EQ, GE):
            raise LpStructureError(f"row {i}: unknown sense {sense!r}")
    for j in range(n):
        low, up = lp.lower[j], lp.upper[j]
        if low is not None and up is not None and low > up:
            raise LpStructureError(f"variable {j}: lower bound exceeds upper bound")


def _drive_out_artificials(tableau, basis, artificial, total) -> None:
    """Pivot zero-valued basic artificials out so they stay out in phase 2.

    A row whose non-artificial entries are all zero is redundant; its
    artificial stays basic at zero and no later pivot can move it.
    """
    dummy_red = [ZERO] * total
    for i in range(len(tableau)):
        if not artificial[basis[i]]:
            continue
        for j in range(total):
            if not artificial[j] and tableau[i][j] != 0:
                _pivot(tableau, dummy_red, basis, i, j)
                break


def _run_simplex(tableau, basis, cost, total, enterable) -> bool:
    """Pivot until optimal over the enterable columns; False means unbounded."""
    m = len(tableau)
    rhs = total
    # Reduced costs relative to the current basis, maintained under pivots.
    red = list(cost)
    for i in range(m):
        cb = cost[basis[i]]
        if cb:
            row = tableau[i]
            for j in range(total):
                if row[j]:
                    red[j] -= cb * row[j]
    while True:
        pivot_col = -1
        for j in range(total):  # Bland: first improving column
            if red[j] > 0 and enterable(j):
                pivot_col = j
                break
        if pivot_col < 0:
            return True
        pivot_row = -1
        best = None
        for i in range(m):
            a = tableau[i][pivot_col]
            if a > 0:
                ratio = tableau[i][rhs] / a
                if best is None or ratio < best or (
                        ratio == best and basis[i] < basis[pivot_row]):
                    best = ratio
                    pivot_row = i
        if pivot_row < 0:
            return False
        _pivot(tableau, red, basis, pivot_row, pivot_col)


def _pivot(tableau, red, basis, pr, pc) -> None:
    pivot = tableau[pr][pc]
    prow = tableau[pr]
    if pivot != 1:
        tableau[pr] = prow = [a / pivot for a in prow]
    for i, row in enumerate(tableau):
        if i == pr:
            continue
        factor = row[pc]
        if factor:
            tableau[i] = [a - factor * b for a, b in zip(row, prow)]
    factor = red[pc]
    if factor:
        for j in range(len(red)):
            red[j] -= factor * prow[j]
    basis[pr] = pc


def _self_check(lp, sol, y_std, work_rhs, values, obj_std, total, m) -> None:
    """Exact internal consistency checks; violations are solver bugs."""
    x = sol.primal
    for i in range(lp.n_rows):
        lhs = sum((a * v for a, v in zip(lp.rows[i], x)), ZERO)
        sense = lp.senses[i]
        ok = lhs <= lp.rhs[i] if sense == LE else (
            lhs >= lp.rhs[i] if sense == GE else lhs == lp.rhs[i])
        if not ok:
            raise RuntimeError(f"simplex returned an infeasible primal (row {i})")
        if sense != EQ:
            y = sol.dual[i]
            if y * (lp.rhs[i] - lhs) != 0:
                raise RuntimeError(f"complementary slackness violated on row {i}")
            if (sense == LE and y < 0) or (sense == GE and y > 0):
                raise RuntimeError(f"dual sign violated on row {i}")
    for j, v in enumerate(x):
        low, up = lp.lower[j], lp.upper[j]
        if (low is not None and v < low) or (up is not None and v > up):
            raise RuntimeError(f"variable {j} left its bounds")
    # Strong duality in the standard-form space (includes internal bound rows).
    dual_value = sum((yi * bi for yi, bi in zip(y_std, work_rhs)), ZERO)
    primal_std = sum((obj_std[c] * values[c] for c in range(total)), ZERO)
    if dual_value != primal_std:
        raise RuntimeError("strong duality failed in standard form")
