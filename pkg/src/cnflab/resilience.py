"""Exact resilience oracle, local-uniformity check, and pin sequences.

Resilience of a formula at width k: every size-k clause outside the formula
has forbidden-pattern probability either exactly 0 or at least theta, and
theta is the smallest nonzero value.  Computed here by brute force over all
2^k * C(n,k) candidates against the exact solution space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .core import Clause, CnfFormula, UnsatisfiableError, clause_status, SATISFIED
from .learner import iter_ksubsets_colex
from .solutions import Space


@dataclass(frozen=True)
class ResilienceReport:
    theta: Fraction
    zero_set_size: int
    argmin: Clause
    candidates: int
    solution_count: int


def resilience_theta(formula: CnfFormula, k, limit=None) -> ResilienceReport:
    """Exact minimum nonzero forbidden-pattern probability over all size-k
    clauses not present in the formula.

    Exact duplicates of formula clauses are excluded from the candidate
    space; clauses on the same variable set with a different polarity are
    candidates.  A satisfiable formula always has a defined theta: any
    pattern some solution realizes cannot be a clause of the formula, so at
    least one candidate has nonzero probability.
    """
    if not 0 < k <= formula.n:
        raise ValueError("need 0 < k <= n")
    space = Space(formula, limit=limit)
    if space.count == 0:
        raise UnsatisfiableError("resilience is undefined for an unsatisfiable formula")
    own = {(c.vars, c.forbidden) for c in formula.clauses if not c.tautology}
    best = None
    best_clause = None
    zero = 0
    candidates = 0
    for subset in iter_ksubsets_colex(formula.n, k):
        counts = space.counts_by_pattern(subset)
        for pattern, cnt in enumerate(counts):
            if (subset, pattern) in own:
                continue
            candidates += 1
            if cnt == 0:
                zero += 1
            elif best is None or cnt < best:
                best = cnt
                best_clause = Clause(subset, pattern)
    return ResilienceReport(
        theta=Fraction(best, space.count),
        zero_set_size=zero,
        argmin=best_clause,
        candidates=candidates,
        solution_count=space.count,
    )


class LocalUniformityReport(NamedTuple):
    max_marginal: Fraction
    bound: float
    holds: bool
    condition_holds: bool
    k_min: int
    k_max: int
    d_max: int
    t: int
    max_variable: int


def check_local_uniformity(formula: CnfFormula, t, limit=None) -> LocalUniformityReport:
    """Exact max single-variable marginal versus the (1/2) e^(1/t) bound.

    condition_holds reports whether the bound's hypothesis 2^k_min >=
    2e * d_max * t with t >= k_max is met; the comparison is computed and
    returned either way.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    space = Space(formula, limit=limit)
    if space.count == 0:
        raise UnsatisfiableError("marginals are undefined for an unsatisfiable formula")
    params = formula.params
    condition = (
        2 ** params.k_min >= 2 * math.e * params.d_max * t and t >= params.k_max
    )
    best = Fraction(0)
    best_var = 0
    for v in range(formula.n):
        ones = (space.bitmap & space.var_mask(v)).bit_count()
        m = Fraction(max(ones, space.count - ones), space.count)
        if m > best:
            best = m
            best_var = v
    if formula.n == 0:
        best = Fraction(1, 2)
    bound = 0.5 * math.exp(1 / t)
    return LocalUniformityReport(
        max_marginal=best,
        bound=bound,
        holds=best <= bound,
        condition_holds=condition,
        k_min=params.k_min,
        k_max=params.k_max,
        d_max=params.d_max,
        t=t,
        max_variable=best_var,
    )


def large_intersection_clauses(formula: CnfFormula, cstar: Clause, t1):
    """Indices of (non-tautological) clauses sharing at least t1 variables
    with cstar, ascending."""
    target = set(cstar.vars)
    out = []
    for i, c in enumerate(formula.clauses):
        if c.tautology:
            continue
        if len(target.intersection(c.vars)) >= t1:
            out.append(i)
    return tuple(out)


def intersection_bound_t1(k, p, s) -> float:
    """The threshold t1 = k/p + p*s/2 at which the large-intersection set
    provably has at most p members."""
    if p < 1:
        raise ValueError("p must be >= 1")
    return k / p + p * s / 2


PIN_OK = "ok"
PIN_SAME_VAR_SET = "SameVarSet"
PIN_INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class PinSequenceResult:
    status: str  # PIN_OK, PIN_SAME_VAR_SET, or PIN_INFEASIBLE
    steps: tuple  # ((variable, value), ...) in pin order
    clause_order: tuple  # indices of the intersection set, in processing order

    @property
    def pinning(self):
        return {v: val for v, val in self.steps}


def find_pin_sequence(formula: CnfFormula, cstar: Clause, t1) -> PinSequenceResult:
    """Greedy pinning that satisfies every clause sharing >= t1 variables
    with cstar, touching only variables outside vbl(cstar).

    Clauses are processed by ascending |vbl(c) - vbl(cstar)| (ties by
    index); each still-unsatisfied clause gets its smallest-index unpinned
    variable outside vbl(cstar) pinned to that clause's satisfying value.
    Returns the SameVarSet marker if some clause has exactly cstar's
    variable set, and infeasible if a clause has no variable to pin.
    """
    cstar_vars = set(cstar.vars)
    for c in formula.clauses:
        if not c.tautology and set(c.vars) == cstar_vars:
            return PinSequenceResult(PIN_SAME_VAR_SET, (), ())
    chosen = large_intersection_clauses(formula, cstar, t1)
    order = sorted(
        chosen, key=lambda i: (len(set(formula.clauses[i].vars) - cstar_vars), i)
    )
    pinning = {}
    steps = []
    for i in order:
        clause = formula.clauses[i]
        if clause_status(clause, pinning).kind == SATISFIED:
            continue
        free = [
            v for v in clause.vars if v not in cstar_vars and v not in pinning
        ]
        if not free:
            return PinSequenceResult(PIN_INFEASIBLE, tuple(steps), tuple(order))
        v = free[0]
        value = not clause.forbidden_value(v)
        pinning[v] = value
        steps.append((v, value))
    return PinSequenceResult(PIN_OK, tuple(steps), tuple(order))
