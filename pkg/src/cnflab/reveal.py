"""Conditional revealing process over a solution, and its predicates.

Given a solution tau, a target variable, and a pinned prefix, `reveal`
deterministically grows a pinned set S by repeatedly exposing tau's value
at the smallest-index alive variable touching the extended component of the
triggering clause c0.  Because the run reads tau only at variables it has
already pinned, the map tau -> (S, tau_S) has the Gibbs property: the runs
returning a given pinning are exactly the solutions agreeing with it.

All classification notions (frozen, blocked, alive, associated component)
take an explicit zeta and the bad sets produced by the structure module.
Tautological clauses are always satisfied and are ignored throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .core import (
    Clause,
    CnfFormula,
    CnfError,
    InfeasiblePinningError,
    SATISFIED,
    UnsatisfiableError,
    clause_status,
    simplify,
)
from .rand import SeededRng
from .solutions import Space, pinning_bitmap, select_bit
from .structure import (
    BadSets,
    EMPTY_BAD_SETS,
    dependency_components,
    identify_bad,
    modified_bad_sets,
)


@dataclass(frozen=True)
class RevealParams:
    alpha: float
    p_hd: float
    eps_bd: float
    zeta: float
    k: int | None = None  # defaults to the formula's largest clause size
    cstar: Clause | None = None  # candidate-clause context for the bad sets


@dataclass(frozen=True)
class ClauseClassification:
    frozen: frozenset
    blocked: frozenset
    satisfied: frozenset
    other: frozenset


def _resolve_k(formula, k):
    return formula.params.k_max if k is None else k


def _unpinned_good(clause, sigma, bad):
    return [v for v in clause.vars if v not in sigma and v not in bad.v_bad]


def classify_clauses(formula: CnfFormula, sigma, bad: BadSets, zeta,
                     k=None) -> ClauseClassification:
    """Partition clause indices under the partial assignment sigma.

    frozen: good (not bad), unsatisfied, with at most zeta*k unpinned good
    variables.  blocked: good, unsatisfied, above the frozen threshold, but
    every unpinned good variable lies in some frozen clause's variable set.
    Everything else unsatisfied (bad clauses, ordinary active clauses) lands
    in `other`; tautologies count as satisfied.
    """
    k = _resolve_k(formula, k)
    limit = zeta * k
    satisfied = set()
    frozen = set()
    candidates = {}
    other = set()
    for i, c in enumerate(formula.clauses):
        if c.tautology or clause_status(c, sigma).kind == SATISFIED:
            satisfied.add(i)
            continue
        if i in bad.c_bad:
            other.add(i)
            continue
        good = _unpinned_good(c, sigma, bad)
        if len(good) <= limit:
            frozen.add(i)
        else:
            candidates[i] = good
    cover = set()
    for i in frozen:
        cover.update(formula.clauses[i].vars)
    blocked = {
        i for i, good in candidates.items() if all(v in cover for v in good)
    }
    other.update(i for i in candidates if i not in blocked)
    return ClauseClassification(
        frozenset(frozen), frozenset(blocked), frozenset(satisfied), frozenset(other)
    )


def alive_variables(formula: CnfFormula, sigma, bad: BadSets, zeta, k=None):
    """Good unpinned variables whose revelation cannot freeze anything: every
    good clause containing the variable is either satisfied by sigma or keeps
    strictly more than zeta*k - 1 other unpinned good variables."""
    k = _resolve_k(formula, k)
    floor_needed = zeta * k - 1
    incident = {}
    for i, c in enumerate(formula.clauses):
        if c.tautology or i in bad.c_bad:
            continue
        for v in c.vars:
            incident.setdefault(v, []).append(i)
    alive = set()
    for v in range(formula.n):
        if v in sigma or v in bad.v_bad:
            continue
        ok = True
        for i in incident.get(v, ()):
            c = formula.clauses[i]
            if clause_status(c, sigma).kind == SATISFIED:
                continue
            others = [w for w in _unpinned_good(c, sigma, bad) if w != v]
            if not len(others) > floor_needed:
                ok = False
                break
        if ok:
            alive.add(v)
    return frozenset(alive)


def associated_component(formula: CnfFormula, sigma, bad: BadSets, zeta,
                         c_index, k=None):
    """Closure of a bad clause under frozen/blocked/bad neighbors reachable
    through shared unpinned variables; returns (A, A plus its unpinned
    neighborhood), both as sorted index tuples."""
    if c_index not in bad.c_bad:
        raise ValueError("clause %d is not in the bad set" % c_index)
    k = _resolve_k(formula, k)
    cls = classify_clauses(formula, sigma, bad, zeta, k=k)
    absorbable = set(cls.frozen) | set(cls.blocked) | set(bad.c_bad)
    by_var = {}
    for i, c in enumerate(formula.clauses):
        if c.tautology:
            continue
        for v in c.vars:
            if v not in sigma:
                by_var.setdefault(v, []).append(i)
    component = {c_index}
    stack = [c_index]
    while stack:
        j = stack.pop()
        for v in formula.clauses[j].vars:
            if v in sigma:
                continue
            for w in by_var.get(v, ()):
                if w not in component and w in absorbable:
                    component.add(w)
                    stack.append(w)
    neighborhood = set(component)
    for j in component:
        for v in formula.clauses[j].vars:
            if v not in sigma:
                neighborhood.update(by_var.get(v, ()))
    return tuple(sorted(component)), tuple(sorted(neighborhood))


EARLY_SPARSE = "sparse-alpha"
EARLY_NO_CLAUSE = "no-unsatisfied-clause"


@dataclass(frozen=True)
class RevealResult:
    S: tuple
    tau_S: dict
    c0: int | None
    trace: tuple
    early_reason: str | None = None


def reveal(formula: CnfFormula, tau, target, prefix, params: RevealParams,
           check_invariants=False) -> RevealResult:
    """Run the revealing process on solution tau.

    Early returns (just the prefix) when the density alpha is below 1/k^3 or
    no clause containing the target survives the prefix unsatisfied.
    Otherwise the smallest-index such clause becomes c0, the bad sets are
    augmented with the prefix, c0, and any heavy cstar-intersecting clauses,
    and the loop reveals tau at the smallest-index alive variable inside
    c0's extended component until none remains.

    check_invariants additionally asserts, at every step, that revealing the
    chosen variable left each of its good unsatisfied clauses above the
    frozen threshold, and at termination that every clause adjacent to the
    associated component is satisfied or shares no unpinned variable with
    it.  Violations raise CnfError.
    """
    if not formula.satisfied_by(tau):
        raise ValueError("tau must be a satisfying assignment")
    for v, value in prefix.items():
        if bool((tau >> v) & 1) != bool(value):
            raise ValueError("tau disagrees with the prefix at variable %d" % v)
    if target in prefix:
        raise ValueError("the target variable is already pinned")
    if not 0 <= target < formula.n:
        raise ValueError("target variable out of range")
    k = _resolve_k(formula, params.k)

    def _early(reason):
        return RevealResult(
            S=tuple(sorted(prefix)), tau_S=dict(prefix), c0=None,
            trace=(), early_reason=reason,
        )

    if k == 0 or params.alpha < 1 / k**3:
        return _early(EARLY_SPARSE)
    c0_index = None
    for i, c in enumerate(formula.clauses):
        if c.tautology or target not in c.vars:
            continue
        if clause_status(c, prefix).kind != SATISFIED:
            c0_index = i
            break
    if c0_index is None:
        return _early(EARLY_NO_CLAUSE)

    base = identify_bad(formula, params.p_hd, params.eps_bd, params.alpha, k=k)
    bad = modified_bad_sets(
        formula, params.cstar, prefix, c0_index, k=k, base=base
    )
    sigma = dict(prefix)
    trace = []
    zeta = params.zeta
    while True:
        _, ext = associated_component(formula, sigma, bad, zeta, c0_index, k=k)
        ext_vars = set()
        for j in ext:
            for v in formula.clauses[j].vars:
                if v not in sigma:
                    ext_vars.add(v)
        alive = alive_variables(formula, sigma, bad, zeta, k=k)
        candidates = alive & ext_vars
        if not candidates:
            break
        v = min(candidates)
        sigma[v] = bool((tau >> v) & 1)
        trace.append(v)
        if check_invariants:
            floor_needed = zeta * k - 1
            for i, c in enumerate(formula.clauses):
                if c.tautology or i in bad.c_bad or v not in c.vars:
                    continue
                if clause_status(c, sigma).kind == SATISFIED:
                    continue
                if not len(_unpinned_good(c, sigma, bad)) > floor_needed:
                    raise CnfError(
                        "revealing %d froze clause %d below the threshold" % (v, i)
                    )
    if check_invariants:
        component, _ = associated_component(formula, sigma, bad, zeta, c0_index, k=k)
        comp_set = set(component)
        comp_vars = set()
        comp_unpinned = set()
        for j in component:
            comp_vars.update(formula.clauses[j].vars)
            comp_unpinned.update(
                v for v in formula.clauses[j].vars if v not in sigma
            )
        for i, c in enumerate(formula.clauses):
            if c.tautology or i in comp_set:
                continue
            if not comp_vars.intersection(c.vars):
                continue
            if clause_status(c, sigma).kind == SATISFIED:
                continue
            if any(v in comp_unpinned for v in c.vars if v not in sigma):
                raise CnfError(
                    "clause %d stays unpinned-adjacent to the component "
                    "and unsatisfied" % i
                )
    return RevealResult(
        S=tuple(sorted(sigma)), tau_S=sigma, c0=c0_index, trace=tuple(trace)
    )


@dataclass(frozen=True)
class NiceReport:
    nice: bool
    diagnosis: str
    component_size: int
    exceptional: int | None


def is_nice(formula: CnfFormula, result: RevealResult, target, prefix, zeta,
            k=None, target_value=None) -> NiceReport:
    """Decide whether a revealing result leaves the target in a small,
    well-shaped residual component.

    Nice iff (after simplifying by tau_S) the target is isolated, or its
    component C' satisfies: at most one clause of C' has fewer than
    zeta*k - 1 remaining variables; if that exceptional clause is exactly
    {target} it must be satisfied by target_value (unknown value fails);
    and |C'| <= log2 n.  The diagnosis names the first failed condition.
    """
    k = _resolve_k(formula, k)
    if target in result.S:
        return NiceReport(False, "target-pinned", 0, None)
    for v, value in prefix.items():
        if v not in result.tau_S or bool(result.tau_S[v]) != bool(value):
            return NiceReport(False, "prefix-mismatch", 0, None)
    reduced = simplify(formula, result.tau_S)
    holding = [
        i for i, c in enumerate(reduced.clauses)
        if not c.tautology and target in c.vars
    ]
    if not holding:
        return NiceReport(True, "isolated", 0, None)
    component = None
    for comp in dependency_components(reduced):
        if holding[0] in comp:
            component = comp
            break
    small = [
        i for i in component if reduced.clauses[i].size < zeta * k - 1
    ]
    if len(small) > 1:
        return NiceReport(False, "small-clauses", len(component), None)
    exceptional = small[0] if small else None
    if exceptional is not None and reduced.clauses[exceptional].vars == (target,):
        c = reduced.clauses[exceptional]
        if target_value is None or bool(target_value) == c.forbidden_value(target):
            return NiceReport(False, "exceptional", len(component), exceptional)
    if not len(component) <= math.log2(formula.n):
        return NiceReport(False, "size", len(component), exceptional)
    return NiceReport(True, "component", len(component), exceptional)


@dataclass(frozen=True)
class EliminationResult:
    s_sets: tuple  # one sorted variable tuple per removed clause
    taus: tuple  # matching forbidden-value projections, as dicts
    removed: tuple  # clause indices in removal order
    stuck: bool
    remaining: tuple  # indices still present on exit


def iterative_elimination(component: CnfFormula, target, zeta,
                          exceptional=None, k=None) -> EliminationResult:
    """Repeatedly strip a clause rich in degree-one variables.

    While more than one clause remains, the smallest-index non-exceptional
    clause with at least zeta*k/2 - 2 degree-one non-target variables is
    removed; its degree-one non-target variables S_t are recorded together
    with the clause's forbidden values on them (so any assignment differing
    from tau_t somewhere on S_t satisfies the removed clause).  If no clause
    qualifies first, the run reports stuck with its partial sequences.
    """
    if any(c.tautology for c in component.clauses):
        raise ValueError("the component must be free of tautologies")
    k = _resolve_k(component, k)
    threshold = zeta * k / 2 - 2
    remaining = list(range(len(component.clauses)))
    s_sets = []
    taus = []
    removed = []
    stuck = False
    while len(remaining) > 1:
        deg = {}
        for i in remaining:
            for v in component.clauses[i].vars:
                deg[v] = deg.get(v, 0) + 1
        pick = None
        for i in remaining:
            if i == exceptional:
                continue
            singles = [
                v for v in component.clauses[i].vars
                if deg[v] == 1 and v != target
            ]
            if len(singles) >= threshold:
                pick = (i, singles)
                break
        if pick is None:
            stuck = True
            break
        i, singles = pick
        clause = component.clauses[i]
        s_sets.append(tuple(singles))
        taus.append({v: clause.forbidden_value(v) for v in singles})
        removed.append(i)
        remaining.remove(i)
    return EliminationResult(
        tuple(s_sets), tuple(taus), tuple(removed), stuck, tuple(remaining)
    )


@dataclass(frozen=True)
class NiceEstimate:
    fraction: Fraction
    successes: int
    trials: int
    wilson_low: float
    wilson_high: float
    diagnosis_counts: dict


def estimate_nice_probability(formula: CnfFormula, target, prefix, trials,
                              seed, params: RevealParams, target_value=None,
                              limit=None) -> NiceEstimate:
    """Empirical probability that revealing a solution drawn from the
    prefix-conditioned uniform distribution produces a nice result, with a
    Wilson 95% interval."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    space = Space(formula, limit=limit)
    if space.count == 0:
        raise UnsatisfiableError("formula is unsatisfiable")
    mask = space.bitmap & pinning_bitmap(formula.n, prefix)
    feasible = mask.bit_count()
    if feasible == 0:
        raise InfeasiblePinningError("no solution agrees with the prefix")
    rng = SeededRng(seed)
    successes = 0
    diagnosis_counts = {}
    for _ in range(trials):
        tau = select_bit(mask, rng.randbelow(feasible))
        result = reveal(formula, tau, target, prefix, params)
        report = is_nice(
            formula, result, target, prefix, params.zeta,
            k=params.k, target_value=target_value,
        )
        if report.nice:
            successes += 1
        diagnosis_counts[report.diagnosis] = (
            diagnosis_counts.get(report.diagnosis, 0) + 1
        )
    low, high = wilson_interval(successes, trials)
    return NiceEstimate(
        fraction=Fraction(successes, trials),
        successes=successes,
        trials=trials,
        wilson_low=low,
        wilson_high=high,
        diagnosis_counts=diagnosis_counts,
    )


def wilson_interval(successes, trials, z=1.96):
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    phat = successes / trials
    denom = 1 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = (
        z
        * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials))
        / denom
    )
    return max(0.0, center - half), min(1.0, center + half)
