"""Small shared helpers for building formulas and talking to the naive oracle."""

from cnflab import Clause, CnfFormula


def F(n, *clauses):
    """Formula from literal lists: F(3, [(0, False), (1, True)], ...)."""
    return CnfFormula(n, tuple(Clause.from_literals(c) for c in clauses))


def pos(*vs):
    """All-positive clause (forbidden assignment: all False)."""
    return [(v, False) for v in vs]


def neg(*vs):
    """All-negative clause (forbidden assignment: all True)."""
    return [(v, True) for v in vs]


def to_naive(formula):
    """(n, clauses) in the naive oracle's literal-list representation.

    A tautological clause is rendered as its variables positive plus the
    first variable negated again, which is a tautology there too.
    """
    clauses = []
    for c in formula.clauses:
        if c.tautology:
            lits = [(v, False) for v in c.vars]
            lits.append((c.vars[0], True))
        else:
            lits = list(c.literals())
        clauses.append(lits)
    return formula.n, clauses


def bits(assignment, n):
    """Packed assignment int -> tuple of bools, variable 0 first."""
    return tuple(bool((assignment >> v) & 1) for v in range(n))


def from_bits(values):
    a = 0
    for v, x in enumerate(values):
        if x:
            a |= 1 << v
    return a
