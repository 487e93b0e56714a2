"""Clause/formula representation, partial evaluation, and DIMACS round trips."""

import pytest
from hypothesis import given, strategies as st

from cnflab import (
    Clause,
    CnfFormula,
    KdsParams,
    ParseError,
    SATISFIED,
    UNDETERMINED,
    VIOLATED,
    GadgetSpec,
    assignment_from_bools,
    assignment_to_bools,
    clause_status,
    gen_disjoint_family,
    gen_gadget,
    kds_parameters,
    parse_dimacs,
    simplify,
    write_dimacs,
)
from util import F, pos, neg, from_bits


def test_from_literals_canonicalizes():
    c = Clause.from_literals([(2, False), (0, True), (1, False)])
    assert c.vars == (0, 1, 2)
    # only the negated literal contributes a True forbidden value
    assert c.forbidden == 0b001
    assert not c.tautology
    assert c.literals() == [(0, True), (1, False), (2, False)]


def test_duplicate_literals_collapse():
    c = Clause.from_literals([(0, False), (0, False), (1, True)])
    assert c.vars == (0, 1)
    assert c.size == 2


def test_complementary_literals_make_tautology():
    c = Clause.from_literals([(0, False), (0, True), (1, False)])
    assert c.tautology
    assert c.vars == (0, 1)
    assert c.forbidden == 0
    for a in range(4):
        assert c.satisfied_by(a)
    with pytest.raises(ValueError):
        c.literals()


def test_forbidden_assignment_is_the_unique_falsifier():
    c = Clause.from_literals([(0, False), (2, True), (5, False)])
    for a in range(1 << 6):
        expected = not (
            (a >> 0) & 1 or not ((a >> 2) & 1) or (a >> 5) & 1
        )
        assert c.satisfied_by(a) == (not expected)
    # flipping any clause variable away from the forbidden pattern satisfies
    falsifier = from_bits([False, False, True, False, False, False])
    assert not c.satisfied_by(falsifier)
    for v in c.vars:
        assert c.satisfied_by(falsifier ^ (1 << v))


def test_clause_validation():
    with pytest.raises(ValueError):
        Clause((1, 0), 0)
    with pytest.raises(ValueError):
        Clause((-1,), 0)
    with pytest.raises(ValueError):
        Clause((0, 1), 4)  # pattern out of range
    with pytest.raises(ValueError):
        Clause((0,), 1, True)  # tautology carries no pattern


def test_clause_status_transitions():
    c = Clause.from_literals([(0, False), (1, True)])
    assert clause_status(c, {}) == (UNDETERMINED, (0, 1))
    assert clause_status(c, {0: True}).kind == SATISFIED
    assert clause_status(c, {0: False}) == (UNDETERMINED, (1,))
    assert clause_status(c, {0: False, 1: True}).kind == VIOLATED
    assert clause_status(c, {1: False}).kind == SATISFIED


def test_formula_rejects_out_of_range_clause():
    with pytest.raises(ValueError):
        CnfFormula(2, (Clause((5,), 0),))


def test_satisfied_by_whole_formula():
    f = F(3, pos(0, 1), neg(1, 2))
    assert f.satisfied_by(from_bits([True, False, False]))
    assert not f.satisfied_by(from_bits([False, False, True]))


def test_simplify_drops_satisfied_and_shrinks_rest():
    f = F(3, pos(0, 1), [(0, True), (2, False)])
    g = simplify(f, {0: True})
    assert g.n == 3
    assert len(g.clauses) == 1
    assert g.clauses[0].vars == (2,)
    h = simplify(f, {0: False})
    assert [c.vars for c in h.clauses] == [(1,)]


def test_simplify_keeps_violated_clause_as_empty():
    f = F(2, pos(0))
    g = simplify(f, {0: False})
    assert len(g.clauses) == 1
    assert g.clauses[0].vars == ()
    assert not g.satisfied_by(0b11)


def test_simplify_rejects_out_of_range_pin():
    with pytest.raises(ValueError):
        simplify(F(2, pos(0)), {5: True})


def test_assignment_bool_roundtrip():
    values = (True, False, False, True, True)
    a = assignment_from_bools(values)
    assert a == 0b11001
    assert assignment_to_bools(a, 5) == values


@given(st.lists(st.booleans(), max_size=12))
def test_assignment_roundtrip_property(values):
    a = assignment_from_bools(values)
    assert assignment_to_bools(a, len(values)) == tuple(values)


def test_kds_parameters_known_families():
    assert gen_disjoint_family(3, 9, "s").params == KdsParams(3, 3, 1, 0)
    assert gen_gadget(GadgetSpec(3, 2)).params == KdsParams(3, 3, 2, 1)
    assert gen_gadget(GadgetSpec(3, 2, restricted=True)).params == KdsParams(3, 3, 3, 2)
    assert gen_gadget(GadgetSpec(3, 3)).params == KdsParams(3, 3, 3, 1)
    assert gen_gadget(GadgetSpec(3, 3, restricted=True)).params == KdsParams(3, 3, 3, 2)


def test_kds_parameters_edge_cases():
    assert kds_parameters(CnfFormula(3, ())) == KdsParams(0, 0, 0, 0)
    taut = Clause.from_literals([(0, False), (0, True)])
    assert kds_parameters(CnfFormula(2, (taut,))) == KdsParams(0, 0, 0, 0)
    f = F(4, pos(0, 1, 2), pos(1, 2, 3))
    assert f.params == KdsParams(3, 3, 2, 2)


def test_variable_degrees_excludes_tautologies():
    taut = Clause.from_literals([(0, False), (0, True), (1, False)])
    f = CnfFormula(3, (Clause.from_literals(pos(0, 2)), taut))
    assert f.variable_degrees() == [1, 0, 1]


def test_dimacs_roundtrip_exact():
    f = gen_gadget(GadgetSpec(3, 2, restricted=True))
    assert parse_dimacs(write_dimacs(f)) == f


def test_dimacs_roundtrip_with_tautology():
    taut = Clause.from_literals([(1, False), (1, True), (3, False)])
    f = CnfFormula(5, (Clause.from_literals(neg(0, 4)), taut))
    g = parse_dimacs(write_dimacs(f))
    assert g == f
    assert g.clauses[1].tautology


def test_dimacs_known_text():
    f = parse_dimacs("c comment\np cnf 3 2\n1 -2 0\n2 3 0\n")
    assert f.n == 3
    assert f.clauses[0].literals() == [(0, False), (1, True)]
    assert f.clauses[1].literals() == [(1, False), (2, False)]


@pytest.mark.parametrize(
    "text",
    [
        "1 2 0\n",  # clause before header
        "p cnf 2 1\np cnf 2 1\n1 0\n",  # duplicate header
        "p cnf x 1\n1 0\n",  # bad counts
        "p dnf 2 1\n1 0\n",  # wrong format tag
        "p cnf 2 1\n3 0\n",  # variable out of range
        "p cnf 2 2\n1 0\n",  # clause count mismatch
        "p cnf 2 1\n1 2\n",  # unterminated clause
        "p cnf 2 1\n1 q 0\n",  # bad token
        "",  # missing header
    ],
)
def test_parse_dimacs_errors(text):
    with pytest.raises(ParseError):
        parse_dimacs(text)


@st.composite
def small_formulas(draw):
    n = draw(st.integers(min_value=1, max_value=6))
    m = draw(st.integers(min_value=0, max_value=5))
    clauses = []
    for _ in range(m):
        width = draw(st.integers(min_value=1, max_value=min(3, n)))
        vs = draw(
            st.lists(
                st.integers(min_value=0, max_value=n - 1),
                min_size=width, max_size=width, unique=True,
            )
        )
        lits = [(v, draw(st.booleans())) for v in vs]
        if draw(st.booleans()) and lits:
            # sprinkle in a complementary literal to exercise tautologies
            v, negated = lits[0]
            lits.append((v, not negated))
        clauses.append(Clause.from_literals(lits))
    return CnfFormula(n, tuple(clauses))


@given(small_formulas())
def test_dimacs_roundtrip_property(f):
    assert parse_dimacs(write_dimacs(f)) == f
