"""Core CNF data model.

A clause is stored as its sorted variable tuple together with the single
assignment of those variables that falsifies it (the "forbidden pattern").
This dual view makes clause evaluation a couple of integer operations and is
the representation every other module builds on.

Assignments are packed into plain Python ints: bit ``v`` of the int is the
value of variable ``v``.  A formula over ``n`` variables therefore lives in
the assignment space ``range(2**n)``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import NamedTuple

VERSION = "0.1.0"


class CnfError(Exception):
    """Base class for every domain error raised by this package."""


class ParseError(CnfError):
    pass


class EnumerationLimitError(CnfError):
    """Raised when an operation would enumerate more than the configured 2^n."""


class SolutionCapError(CnfError):
    """Raised when materializing a solution set would exceed the caller's cap."""


class UnsatisfiableError(CnfError):
    pass


class InfeasiblePinningError(CnfError):
    """A conditioning event has zero mass (no solution agrees with it)."""


class SamplingBudgetError(CnfError):
    """Rejection sampling exhausted its try budget without enough accepts."""


# clause_status kinds
SATISFIED = "satisfied"
VIOLATED = "violated"
UNDETERMINED = "undetermined"


class ClauseState(NamedTuple):
    kind: str
    unpinned: tuple


class KdsParams(NamedTuple):
    k_min: int
    k_max: int
    d_max: int
    s_max: int


@dataclass(frozen=True)
class Clause:
    """A disjunction over distinct variables.

    ``vars`` is strictly increasing.  ``forbidden`` packs the unique violating
    assignment: bit ``i`` is the value of ``vars[i]``.  A positive literal on
    ``v`` therefore contributes a 0 bit (the clause is falsified when ``v`` is
    False) and a negative literal a 1 bit.

    A tautological clause (built from complementary literals) keeps its
    variable set but has no forbidden pattern; all checks must branch on the
    flag, and ``forbidden`` is normalized to 0.
    """

    vars: tuple
    forbidden: int
    tautology: bool = False

    def __post_init__(self):
        if not isinstance(self.vars, tuple):
            object.__setattr__(self, "vars", tuple(self.vars))
        if any(self.vars[i] >= self.vars[i + 1] for i in range(len(self.vars) - 1)):
            raise ValueError("clause variables must be strictly increasing")
        if any(v < 0 for v in self.vars):
            raise ValueError("negative variable index")
        if self.tautology:
            if self.forbidden != 0:
                raise ValueError("tautological clause has no forbidden pattern")
        elif not 0 <= self.forbidden < (1 << len(self.vars)):
            raise ValueError("forbidden pattern out of range")

    @classmethod
    def from_literals(cls, literals):
        """Build a canonical clause from (variable, negated) pairs.

        Duplicate literals collapse; a variable occurring with both polarities
        makes the clause tautological.
        """
        values = {}
        taut = False
        for var, negated in literals:
            forbidden = bool(negated)  # the forbidden pattern falsifies every literal
            if var in values and values[var] != forbidden:
                taut = True
            else:
                values[var] = forbidden
        vs = tuple(sorted(values))
        if taut:
            return cls(vs, 0, True)
        pattern = 0
        for i, v in enumerate(vs):
            if values[v]:
                pattern |= 1 << i
        return cls(vs, pattern)

    @property
    def size(self):
        return len(self.vars)

    def forbidden_value(self, var) -> bool:
        i = self.vars.index(var)
        return bool((self.forbidden >> i) & 1)

    def literals(self):
        """The clause as (variable, negated) pairs; undefined for tautologies."""
        if self.tautology:
            raise ValueError("a tautological clause has no canonical literals")
        return [(v, bool((self.forbidden >> i) & 1)) for i, v in enumerate(self.vars)]

    def pattern_of(self, assignment: int) -> int:
        """Restrict a packed assignment to this clause's variables."""
        p = 0
        for i, v in enumerate(self.vars):
            p |= ((assignment >> v) & 1) << i
        return p

    def satisfied_by(self, assignment: int) -> bool:
        if self.tautology:
            return True
        return self.pattern_of(assignment) != self.forbidden


@dataclass(frozen=True)
class CnfFormula:
    """An ordered clause list over variables 0..n-1.

    Clause order is significant: indexes into ``clauses`` are the identity
    used for every smallest-index tie-break downstream.
    """

    n: int
    clauses: tuple

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("negative variable count")
        if not isinstance(self.clauses, tuple):
            object.__setattr__(self, "clauses", tuple(self.clauses))
        for c in self.clauses:
            if c.vars and c.vars[-1] >= self.n:
                raise ValueError(
                    "clause variable %d out of range for n=%d" % (c.vars[-1], self.n)
                )

    @functools.cached_property
    def params(self) -> KdsParams:
        return kds_parameters(self)

    def satisfied_by(self, assignment: int) -> bool:
        return all(c.satisfied_by(assignment) for c in self.clauses)

    def variable_degrees(self):
        """Occurrence count per variable, tautologies excluded."""
        deg = [0] * self.n
        for c in self.clauses:
            if c.tautology:
                continue
            for v in c.vars:
                deg[v] += 1
        return deg


def assignment_from_bools(values) -> int:
    a = 0
    for i, x in enumerate(values):
        if x:
            a |= 1 << i
    return a


def assignment_to_bools(assignment: int, n: int):
    return tuple(bool((assignment >> i) & 1) for i in range(n))


def clause_satisfied(clause: Clause, assignment: int) -> bool:
    return clause.satisfied_by(assignment)


def clause_status(clause: Clause, pinning) -> ClauseState:
    """Evaluate a clause under a partial assignment.

    Satisfied as soon as one pinned variable disagrees with the forbidden
    pattern; Violated when every variable is pinned to it; otherwise
    Undetermined, carrying the clause's unpinned variables.
    """
    if clause.tautology:
        return ClauseState(SATISFIED, ())
    unpinned = []
    for i, v in enumerate(clause.vars):
        if v in pinning:
            if bool(pinning[v]) != bool((clause.forbidden >> i) & 1):
                return ClauseState(SATISFIED, ())
        else:
            unpinned.append(v)
    if not unpinned:
        return ClauseState(VIOLATED, ())
    return ClauseState(UNDETERMINED, tuple(unpinned))


def simplify(formula: CnfFormula, pinning) -> CnfFormula:
    """Remove satisfied clauses and delete pinned variables from the rest.

    Variables are not renumbered and ``n`` is unchanged.  A clause violated by
    the pinning becomes the empty clause, which keeps infeasible pinnings
    representable (the result simply has no solutions).
    """
    for v in pinning:
        if not 0 <= v < formula.n:
            raise ValueError("pinned variable %d out of range" % v)
    out = []
    for c in formula.clauses:
        st = clause_status(c, pinning)
        if st.kind == SATISFIED:
            continue
        if st.kind == VIOLATED:
            out.append(Clause((), 0))
            continue
        pattern = 0
        for i, v in enumerate(st.unpinned):
            if c.forbidden_value(v):
                pattern |= 1 << i
        out.append(Clause(st.unpinned, pattern))
    return CnfFormula(formula.n, tuple(out))


def kds_parameters(formula: CnfFormula) -> KdsParams:
    """Exact (k_min, k_max, d_max, s_max) over non-tautological clauses.

    Zeros for the empty formula.  s_max is the largest variable-set overlap
    over distinct clause index pairs, found by counting pair co-occurrences
    through a variable-to-clauses index.
    """
    real = [(i, c) for i, c in enumerate(formula.clauses) if not c.tautology]
    if not real:
        return KdsParams(0, 0, 0, 0)
    sizes = [c.size for _, c in real]
    by_var = {}
    for i, c in real:
        for v in c.vars:
            by_var.setdefault(v, []).append(i)
    d_max = max(len(ix) for ix in by_var.values()) if by_var else 0
    pair_counts = {}
    for ix in by_var.values():
        for a in range(len(ix)):
            for b in range(a + 1, len(ix)):
                key = (ix[a], ix[b])
                pair_counts[key] = pair_counts.get(key, 0) + 1
    s_max = max(pair_counts.values()) if pair_counts else 0
    return KdsParams(min(sizes), max(sizes), d_max, s_max)


def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF.  Strict: bad headers, out-of-range variables and
    clause-count mismatches all raise ParseError naming the line."""
    n = None
    m = None
    clauses = []
    current = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if n is not None:
                raise ParseError("duplicate header (line %d)" % ln)
            parts = line.split()
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
                raise ParseError("malformed header %r (line %d)" % (line, ln))
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError("malformed header %r (line %d)" % (line, ln)) from None
            if n < 0 or m < 0:
                raise ParseError("negative header counts (line %d)" % ln)
            continue
        if n is None:
            raise ParseError("clause data before header (line %d)" % ln)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError("bad token %r (line %d)" % (tok, ln)) from None
            if lit == 0:
                clauses.append(Clause.from_literals(current))
                current = []
            else:
                var = abs(lit) - 1
                if var >= n:
                    raise ParseError(
                        "variable %d out of range for n=%d (line %d)" % (abs(lit), n, ln)
                    )
                current.append((var, lit < 0))
    if n is None:
        raise ParseError("missing header")
    if current:
        raise ParseError("unterminated clause at end of input")
    if len(clauses) != m:
        raise ParseError("header declares %d clauses, found %d" % (m, len(clauses)))
    return CnfFormula(n, tuple(clauses))


def write_dimacs(formula: CnfFormula) -> str:
    """Serialize to DIMACS; parse_dimacs(write_dimacs(F)) == F, clause order
    and tautology flags included.  A tautological clause is emitted as its
    variables positive plus the first variable repeated negated."""
    lines = ["p cnf %d %d" % (formula.n, len(formula.clauses))]
    for c in formula.clauses:
        if c.tautology:
            toks = [str(v + 1) for v in c.vars]
            toks.append(str(-(c.vars[0] + 1)))
        else:
            toks = [str(-(v + 1)) if neg else str(v + 1) for v, neg in c.literals()]
        toks.append("0")
        lines.append(" ".join(toks))
    return "\n".join(lines) + "\n"
