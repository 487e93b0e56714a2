"""Revealing process, niceness predicate, and iterative clause elimination."""

from fractions import Fraction

import pytest

from cnflab import (
    Clause,
    CnfFormula,
    GadgetSpec,
    InfeasiblePinningError,
    RevealParams,
    UnsatisfiableError,
    alive_variables,
    associated_component,
    classify_clauses,
    enumerate_solutions,
    estimate_nice_probability,
    gen_disjoint_family,
    gen_gadget,
    is_nice,
    iterative_elimination,
    reveal,
    wilson_interval,
)
from cnflab.reveal import RevealResult
from cnflab.structure import BadSets, EMPTY_BAD_SETS

from util import F, pos, neg, from_bits


# (v0 | v1), (v0 | v2), (v2 | v3), plus an untouched variable 4
CHAIN = F(5, pos(0, 1), pos(0, 2), pos(2, 3))


def test_classify_frozen_and_blocked():
    sigma = {1: False, 3: False}
    cls = classify_clauses(CHAIN, sigma, EMPTY_BAD_SETS, zeta=0.5, k=2)
    # clauses 0 and 2 are down to one unpinned variable: frozen; clause 1's
    # unpinned variables both sit inside frozen clauses: blocked
    assert cls.frozen == frozenset({0, 2})
    assert cls.blocked == frozenset({1})
    assert cls.satisfied == frozenset()
    assert cls.other == frozenset()


def test_classify_satisfied_and_bad():
    cls = classify_clauses(CHAIN, {1: True}, EMPTY_BAD_SETS, zeta=0.5, k=2)
    assert 0 in cls.satisfied
    bad = BadSets(frozenset(), frozenset({1}), ())
    cls2 = classify_clauses(CHAIN, {1: False, 3: False}, bad, zeta=0.5, k=2)
    assert 1 in cls2.other  # bad clauses are never frozen or blocked


def test_classify_tautology_counts_satisfied():
    taut = Clause.from_literals([(0, False), (0, True)])
    f = CnfFormula(2, (taut,))
    cls = classify_clauses(f, {}, EMPTY_BAD_SETS, zeta=1.0, k=2)
    assert cls.satisfied == frozenset({0})


def test_classify_bad_variables_shrink_good_sets():
    bad = BadSets(frozenset({0}), frozenset(), ())
    cls = classify_clauses(CHAIN, {}, bad, zeta=0.5, k=2)
    # with v0 bad, clauses 0 and 1 have one good unpinned variable each
    assert cls.frozen == frozenset({0, 1})


def test_alive_variables_chain():
    sigma = {1: False, 3: False}
    alive = alive_variables(CHAIN, sigma, EMPTY_BAD_SETS, zeta=0.5, k=2)
    # v0 and v2 would freeze their clauses further; v4 sits in no clause
    assert alive == frozenset({4})
    alive_loose = alive_variables(CHAIN, {}, EMPTY_BAD_SETS, zeta=0.5, k=2)
    assert alive_loose == frozenset({0, 1, 2, 3, 4})


def test_alive_excludes_pinned_and_bad():
    bad = BadSets(frozenset({4}), frozenset(), ())
    alive = alive_variables(CHAIN, {0: True, 2: True}, bad, zeta=0.5, k=2)
    # clauses all satisfied; v1, v3 free; v0, v2 pinned; v4 bad
    assert alive == frozenset({1, 3})


def test_associated_component_isolated():
    f = F(6, pos(0, 1), pos(3, 4))
    bad = BadSets(frozenset(), frozenset({0}), ())
    comp, ext = associated_component(f, {}, bad, zeta=1.0, c_index=0, k=2)
    assert comp == (0,)
    assert ext == (0,)


def test_associated_component_chain_closure():
    # bad clause 0 chains through frozen clauses 1 and 2 by shared unpinned
    # variables; clause 3 is too wide to freeze but neighbors the component
    f = F(7, pos(0, 1), pos(1, 2), pos(2, 3), pos(3, 4, 5, 6))
    bad = BadSets(frozenset(), frozenset({0}), ())
    comp, ext = associated_component(f, {}, bad, zeta=1.0, c_index=0, k=2)
    assert comp == (0, 1, 2)
    assert ext == (0, 1, 2, 3)


def test_associated_component_requires_bad_clause():
    with pytest.raises(ValueError):
        associated_component(CHAIN, {}, EMPTY_BAD_SETS, zeta=1.0, c_index=0)


def test_associated_component_idempotent_across_bad_members():
    f = F(7, pos(0, 1), pos(1, 2), pos(2, 3), pos(3, 4, 5, 6))
    bad = BadSets(frozenset(), frozenset({0, 1}), ())
    comp0, _ = associated_component(f, {}, bad, zeta=1.0, c_index=0, k=2)
    comp1, _ = associated_component(f, {}, bad, zeta=1.0, c_index=1, k=2)
    assert comp0 == comp1


GADGET = gen_gadget(GadgetSpec(3, 2))
PARAMS = RevealParams(alpha=0.5, p_hd=100.0, eps_bd=0.5, zeta=0.4)


def test_reveal_early_sparse_alpha():
    sparse = RevealParams(alpha=0.01, p_hd=100.0, eps_bd=0.5, zeta=0.4)
    r = reveal(GADGET, 0, 0, {1: False}, sparse)
    assert r.early_reason == "sparse-alpha"
    assert r.S == (1,) and r.tau_S == {1: False}
    assert r.c0 is None and r.trace == ()


def test_reveal_early_no_unsatisfied_clause():
    f = gen_disjoint_family(3, 9, "rv")
    target = f.clauses[0].vars[0]
    other = f.clauses[0].vars[1]
    # one true variable per clause, including the prefix variable
    true_vars = {other, f.clauses[1].vars[0], f.clauses[2].vars[0]}
    tau = from_bits([v in true_vars for v in range(9)])
    assert f.satisfied_by(tau)
    r = reveal(f, tau, target, {other: True}, RevealParams(1.0, 100.0, 0.5, 0.4))
    assert r.early_reason == "no-unsatisfied-clause"
    assert r.S == (other,)


def test_reveal_validation():
    with pytest.raises(ValueError):
        reveal(GADGET, 0b111111, 0, {}, PARAMS)  # not a solution
    with pytest.raises(ValueError):
        reveal(GADGET, 0, 0, {1: True}, PARAMS)  # tau disagrees with prefix
    with pytest.raises(ValueError):
        reveal(GADGET, 0, 1, {1: False}, PARAMS)  # target already pinned
    with pytest.raises(ValueError):
        reveal(GADGET, 0, 17, {}, PARAMS)


def test_reveal_gadget_run_is_exact():
    r = reveal(GADGET, 0, 0, {}, PARAMS, check_invariants=True)
    # c0 is the first clause containing the target; its variables become bad.
    # Pinning v1 (smallest alive) satisfies both good clauses, after which
    # v3 and v5 are vacuously alive and get revealed in index order.
    assert r.c0 == 1
    assert r.trace == (1, 3, 5)
    assert r.S == (1, 3, 5)
    assert r.tau_S == {1: False, 3: False, 5: False}
    assert r.early_reason is None


def test_reveal_never_pins_target():
    for tau in enumerate_solutions(GADGET).solutions:
        r = reveal(GADGET, tau, 0, {}, PARAMS, check_invariants=True)
        assert 0 not in r.S


def test_reveal_deterministic_on_agreeing_solutions():
    base = reveal(GADGET, 0, 0, {}, PARAMS)
    for tau in enumerate_solutions(GADGET).solutions:
        if all(bool((tau >> v) & 1) == base.tau_S[v] for v in base.S):
            assert reveal(GADGET, tau, 0, {}, PARAMS) == base


def test_reveal_gibbs_set_equality():
    sols = enumerate_solutions(GADGET).solutions
    by_pinning = {}
    for tau in sols:
        r = reveal(GADGET, tau, 0, {}, PARAMS, check_invariants=True)
        key = (r.S, tuple(sorted(r.tau_S.items())))
        by_pinning.setdefault(key, set()).add(tau)
    for (S, items), produced in by_pinning.items():
        agreeing = {
            tau for tau in sols
            if all(bool((tau >> v) & 1) == val for v, val in items)
        }
        assert produced == agreeing


def test_is_nice_isolated():
    f = F(4, pos(0, 1))
    r = RevealResult(S=(1,), tau_S={1: True}, c0=0, trace=(1,))
    rep = is_nice(f, r, 0, {}, zeta=1.0, k=2)
    assert rep.nice and rep.diagnosis == "isolated"
    assert rep.component_size == 0


def test_is_nice_target_pinned_and_prefix_mismatch():
    f = F(4, pos(0, 1))
    pinned = RevealResult(S=(0,), tau_S={0: True}, c0=0, trace=(0,))
    assert is_nice(f, pinned, 0, {}, zeta=1.0, k=2).diagnosis == "target-pinned"
    r = RevealResult(S=(1,), tau_S={1: True}, c0=0, trace=())
    rep = is_nice(f, r, 0, {2: False}, zeta=1.0, k=2)
    assert rep.diagnosis == "prefix-mismatch"


def test_is_nice_size_diagnosis():
    r = RevealResult(S=(), tau_S={}, c0=1, trace=())
    rep = is_nice(GADGET, r, 0, {}, zeta=2 / 3, k=3)
    # the full gadget component has 3 clauses > log2(6)
    assert not rep.nice
    assert rep.diagnosis == "size"
    assert rep.component_size == 3


def test_is_nice_small_clauses_diagnosis():
    f = F(8, pos(0, 1), pos(1, 2))
    r = RevealResult(S=(), tau_S={}, c0=0, trace=())
    rep = is_nice(f, r, 0, {}, zeta=2.0, k=3)  # both clauses below 2*3-1
    assert not rep.nice
    assert rep.diagnosis == "small-clauses"


def test_is_nice_exceptional_depends_on_target_value():
    f = F(4, pos(0), pos(0, 1, 2, 3))
    r = RevealResult(S=(), tau_S={}, c0=0, trace=())
    unknown = is_nice(f, r, 0, {}, zeta=0.8, k=4)
    assert not unknown.nice and unknown.diagnosis == "exceptional"
    satisfied = is_nice(f, r, 0, {}, zeta=0.8, k=4, target_value=True)
    assert satisfied.nice and satisfied.diagnosis == "component"
    falsified = is_nice(f, r, 0, {}, zeta=0.8, k=4, target_value=False)
    assert not falsified.nice and falsified.diagnosis == "exceptional"


def test_is_nice_component_pass():
    r = reveal(GADGET, 0, 0, {}, PARAMS)
    # after pinning v1 the simplified gadget still ties all three clauses
    # together: too big at n=6; use the verdict object to document it
    rep = is_nice(GADGET, r, 0, {}, zeta=0.4, k=3)
    assert rep.component_size >= 1


def test_iterative_elimination_single_clause_is_trivial():
    f = F(3, pos(0, 1, 2))
    res = iterative_elimination(f, 0, zeta=1.0)
    assert res.s_sets == () and res.taus == ()
    assert not res.stuck
    assert res.remaining == (0,)


def test_iterative_elimination_two_clause_step():
    f = F(9, pos(0, 1, 2, 3, 4), pos(4, 5, 6, 7, 8))
    res = iterative_elimination(f, 4, zeta=0.8)
    assert res.removed == (0,)
    assert res.s_sets == ((0, 1, 2, 3),)
    assert res.taus == ({0: False, 1: False, 2: False, 3: False},)
    assert not res.stuck
    assert res.remaining == (1,)


def test_iterative_elimination_records_forbidden_projection():
    f = F(6, neg(0, 1, 2), pos(2, 3, 4, 5))
    res = iterative_elimination(f, 2, zeta=0.5)
    for idx, s_t, tau_t in zip(res.removed, res.s_sets, res.taus):
        clause = f.clauses[idx]
        assert set(s_t) <= set(clause.vars)
        assert 2 not in s_t
        for w in s_t:
            assert tau_t[w] == clause.forbidden_value(w)
            # flipping any recorded variable away from tau satisfies the clause
            forb = sum(
                1 << v for v in clause.vars if clause.forbidden_value(v)
            )
            assert clause.satisfied_by(forb ^ (1 << w))


def test_iterative_elimination_stuck_triangle():
    f = F(4, pos(0, 1, 3), pos(1, 2, 3), pos(0, 2, 3))
    res = iterative_elimination(f, 3, zeta=2.0)
    assert res.stuck
    assert res.removed == ()
    assert res.remaining == (0, 1, 2)


def test_iterative_elimination_skips_exceptional():
    f = F(6, pos(0, 1, 2), pos(3, 4, 5))
    res = iterative_elimination(f, 0, zeta=1.0, exceptional=0)
    assert res.removed == (1,)
    assert res.remaining == (0,)


def test_iterative_elimination_disjoint_sets_exclude_target():
    res = iterative_elimination(GADGET, 0, zeta=0.4)
    seen = set()
    for s_t in res.s_sets:
        assert 0 not in s_t
        assert not seen.intersection(s_t)
        seen.update(s_t)
    assert len(res.remaining) <= 1 or res.stuck


def test_iterative_elimination_rejects_tautologies():
    taut = Clause.from_literals([(0, False), (0, True)])
    with pytest.raises(ValueError):
        iterative_elimination(CnfFormula(2, (taut,)), 0, zeta=1.0)


def test_estimate_nice_probability_sparse_easy_case():
    f = F(12, pos(0, 1))
    params = RevealParams(alpha=1 / 12, p_hd=100.0, eps_bd=0.5, zeta=1.0)
    est = estimate_nice_probability(f, 0, {}, 40, "easy", params)
    assert est.fraction == 1
    assert est.successes == 40 and est.trials == 40
    assert est.diagnosis_counts == {"component": 40}
    assert est.wilson_high == 1.0 and est.wilson_low < 1.0


def test_estimate_nice_probability_isolated_target():
    f = F(12, pos(1, 2))
    params = RevealParams(alpha=1 / 12, p_hd=100.0, eps_bd=0.5, zeta=1.0)
    est = estimate_nice_probability(f, 0, {}, 25, "iso", params)
    assert est.fraction == 1
    assert est.diagnosis_counts == {"isolated": 25}


def test_estimate_nice_probability_deterministic():
    a = estimate_nice_probability(GADGET, 0, {}, 30, "det", PARAMS)
    b = estimate_nice_probability(GADGET, 0, {}, 30, "det", PARAMS)
    assert a == b
    assert sum(a.diagnosis_counts.values()) == 30
    assert 0.0 <= a.wilson_low <= float(a.fraction) <= a.wilson_high <= 1.0


def test_estimate_nice_probability_errors():
    with pytest.raises(InfeasiblePinningError):
        estimate_nice_probability(F(2, pos(0)), 1, {0: False}, 5, "s", PARAMS)
    with pytest.raises(UnsatisfiableError):
        estimate_nice_probability(F(1, pos(0), neg(0)), 0, {}, 5, "s", PARAMS)
    with pytest.raises(ValueError):
        estimate_nice_probability(F(2, pos(0)), 1, {}, 0, "s", PARAMS)


def test_wilson_interval_basics():
    lo, hi = wilson_interval(0, 10)
    assert lo == 0.0 and 0 < hi < 0.4
    lo, hi = wilson_interval(10, 10)
    assert 0.6 < lo < 1 and hi == 1.0
    lo, hi = wilson_interval(8, 10)
    assert lo < 0.8 < hi
    with pytest.raises(ValueError):
        wilson_interval(1, 0)
