"""Exact solution-space engine.

The entire assignment space of a formula over n variables is represented as
one 2^n-bit Python int ("bitmap"): bit a is set iff assignment a (packed as
in core) satisfies the formula.  Clause violation sets are cylinders built by
shift-doubling, so constructing the bitmap costs O(m * 2^n) bit operations,
and every probability afterwards is a popcount.  Everything is exact; the
only floats in this module are never returned.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    Clause,
    CnfFormula,
    EnumerationLimitError,
    InfeasiblePinningError,
    SamplingBudgetError,
    SolutionCapError,
    UnsatisfiableError,
    simplify,
)
from .generators import GadgetSpec, gen_gadget
from .rand import SeededRng

DEFAULT_ENUMERATION_LIMIT = 30
DEFAULT_SOLUTION_CAP = 1 << 20

# bytes per select-index block; 512 bytes = 4096 assignments
_BLOCK_BYTES = 512


def _check_limit(n, limit):
    lim = DEFAULT_ENUMERATION_LIMIT if limit is None else limit
    if n > lim:
        raise EnumerationLimitError(
            "n=%d exceeds the enumeration limit %d" % (n, lim)
        )


def _violation_cylinder(nbits, clause: Clause) -> int:
    """Bitmap of assignments whose restriction to the clause equals its
    forbidden pattern.  Empty for tautologies, full for the empty clause."""
    if clause.tautology:
        return 0
    base = 0
    for i, v in enumerate(clause.vars):
        if (clause.forbidden >> i) & 1:
            base |= 1 << v
    pat = 1 << base
    in_clause = 0
    for v in clause.vars:
        in_clause |= 1 << v
    for w in range(nbits):
        if not (in_clause >> w) & 1:
            pat |= pat << (1 << w)
    return pat


def _pattern_cylinder(nbits, vs, pattern: int) -> int:
    """Bitmap of assignments matching `pattern` on the variable tuple `vs`."""
    base = 0
    for i, v in enumerate(vs):
        if (pattern >> i) & 1:
            base |= 1 << v
    pat = 1 << base
    in_set = 0
    for v in vs:
        in_set |= 1 << v
    for w in range(nbits):
        if not (in_set >> w) & 1:
            pat |= pat << (1 << w)
    return pat


def _pinning_cylinder(nbits, pinning) -> int:
    vs = tuple(sorted(pinning))
    pattern = 0
    for i, v in enumerate(vs):
        if pinning[v]:
            pattern |= 1 << i
    return _pattern_cylinder(nbits, vs, pattern)


def pinning_bitmap(n, pinning) -> int:
    """Bitmap over all 2^n assignments of those agreeing with the pinning."""
    return _pinning_cylinder(n, pinning)


def select_bit(bitmap, rank) -> int:
    """Position of the 0-based rank-th set bit of a nonnegative int."""
    if rank < 0:
        raise IndexError("rank out of range")
    nbytes = (bitmap.bit_length() + 7) // 8
    data = bitmap.to_bytes(nbytes, "little")
    for off in range(0, nbytes, 8):
        word = int.from_bytes(data[off : off + 8], "little")
        count = word.bit_count()
        if rank < count:
            while True:
                low = word & -word
                if rank == 0:
                    return off * 8 + low.bit_length() - 1
                word ^= low
                rank -= 1
        rank -= count
    raise IndexError("rank out of range")


def _bitmap(nbits, clauses) -> int:
    full = (1 << (1 << nbits)) - 1
    viol = 0
    for c in clauses:
        viol |= _violation_cylinder(nbits, c)
    return full ^ viol


def _prefix_block(formula, high_bits, prefix):
    """Solution bitmap of one contiguous assignment block.

    The block fixes the top `high_bits` variables to `prefix`; the result is
    a 2^(n - high_bits)-bit bitmap over the remaining variables.
    """
    low = formula.n - high_bits
    pin = {low + t: bool((prefix >> t) & 1) for t in range(high_bits)}
    reduced = simplify(formula, pin)
    return _bitmap(low, reduced.clauses)


def solution_bitmap(formula: CnfFormula, limit=None, jobs=1) -> int:
    """The formula's full solution bitmap.

    With jobs > 1 the assignment space is split into contiguous prefix
    blocks computed by worker processes and OR-merged in block order, so the
    result is independent of the worker count.  Falls back to the serial
    path if a process pool cannot be created.
    """
    _check_limit(formula.n, limit)
    if jobs > 1 and formula.n >= 2:
        high = 1
        while (1 << high) < min(jobs, 1 << (formula.n - 1)):
            high += 1
        args = [(formula, high, p) for p in range(1 << high)]
        try:
            import concurrent.futures

            with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
                blocks = list(pool.map(_pool_worker, args))
        except (OSError, PermissionError, ImportError):
            blocks = [_pool_worker(a) for a in args]
        low = formula.n - high
        out = 0
        for p, bm in enumerate(blocks):
            out |= bm << (p << low)
        return out
    return _bitmap(formula.n, formula.clauses)


def _pool_worker(args):
    formula, high, prefix = args
    return _prefix_block(formula, high, prefix)


class Space:
    """Enumerated solution space with popcount-based exact queries."""

    def __init__(self, formula: CnfFormula, limit=None, jobs=1):
        _check_limit(formula.n, limit)
        self.formula = formula
        self.n = formula.n
        self.bitmap = solution_bitmap(formula, limit=limit, jobs=jobs)
        self.count = self.bitmap.bit_count()

    @functools.cached_property
    def _var_masks(self):
        return {}

    def var_mask(self, v) -> int:
        """Bitmap of assignments with variable v True (formula ignored)."""
        cached = self._var_masks.get(v)
        if cached is None:
            block = ((1 << (1 << v)) - 1) << (1 << v)
            for w in range(v + 1, self.n):
                block |= block << (1 << w)
            cached = self._var_masks[v] = block
        return cached

    def count_matching(self, vs, pattern: int) -> int:
        """Number of solutions matching `pattern` on variable tuple `vs`."""
        return (self.bitmap & _pattern_cylinder(self.n, vs, pattern)).bit_count()

    def counts_by_pattern(self, vs):
        """Solution counts for all 2^k patterns on `vs` in one sweep.

        Index bit i of the returned list's position corresponds to vs[i],
        matching the Clause.forbidden convention.
        """
        masks = {0: self.bitmap}
        for i, v in enumerate(vs):
            mv = self.var_mask(v)
            nxt = {}
            for b, m in masks.items():
                ones = m & mv
                nxt[b] = m ^ ones
                nxt[b | (1 << i)] = ones
            masks = nxt
        return [masks[b].bit_count() for b in range(1 << len(vs))]

    @functools.cached_property
    def _select_index(self):
        nbytes = max(1, ((1 << self.n) + 7) // 8)
        raw = self.bitmap.to_bytes(nbytes, "little")
        blocks = []
        cumulative = [0]
        for off in range(0, nbytes, _BLOCK_BYTES):
            chunk = int.from_bytes(raw[off : off + _BLOCK_BYTES], "little")
            blocks.append(chunk)
            cumulative.append(cumulative[-1] + chunk.bit_count())
        return blocks, cumulative

    def select(self, rank: int) -> int:
        """The rank-th solution in increasing assignment order (0-based)."""
        if not 0 <= rank < self.count:
            raise IndexError("rank out of range")
        blocks, cumulative = self._select_index
        lo, hi = 0, len(blocks) - 1
        while lo < hi:
            mid = (lo + hi) // 2
            if cumulative[mid + 1] <= rank:
                lo = mid + 1
            else:
                hi = mid
        remaining = rank - cumulative[lo]
        chunk = blocks[lo]
        pos = lo * _BLOCK_BYTES * 8
        while True:
            word = chunk & 0xFFFFFFFFFFFFFFFF
            wc = word.bit_count()
            if remaining < wc:
                while True:
                    low_bit = word & -word
                    if remaining == 0:
                        return pos + low_bit.bit_length() - 1
                    word ^= low_bit
                    remaining -= 1
            remaining -= wc
            chunk >>= 64
            pos += 64

    def iter_solutions(self):
        blocks, _ = self._select_index
        for bi, chunk in enumerate(blocks):
            base = bi * _BLOCK_BYTES * 8
            while chunk:
                low_bit = chunk & -chunk
                yield base + low_bit.bit_length() - 1
                chunk ^= low_bit


@dataclass(frozen=True)
class SolutionSet:
    formula: CnfFormula
    solutions: tuple
    count: int


def enumerate_solutions(formula, cap=DEFAULT_SOLUTION_CAP, limit=None, jobs=1) -> SolutionSet:
    """Materialize every satisfying assignment in increasing packed order.

    An unsatisfiable formula yields an empty set (not an error); exceeding
    `cap` raises SolutionCapError before materializing.
    """
    space = Space(formula, limit=limit, jobs=jobs)
    if cap is not None and space.count > cap:
        raise SolutionCapError(
            "%d solutions exceed the cap %d" % (space.count, cap)
        )
    return SolutionSet(formula, tuple(space.iter_solutions()), space.count)


def count_solutions(formula, limit=None, jobs=1) -> int:
    return Space(formula, limit=limit, jobs=jobs).count


def sample_uniform(formula, T, seed, limit=None, method="enumerate", reject_budget=None):
    """T i.i.d. uniform solutions, deterministic in the seed, in draw order.

    method="enumerate" draws a uniform rank into the exact solution set.
    method="rejection" draws whole assignments until one satisfies the
    formula; it works beyond the enumeration limit but gives up (with
    SamplingBudgetError) once the total try budget, default 10000 per
    requested sample, is spent.
    """
    rng = SeededRng(seed)
    if method == "rejection":
        budget = 10_000 * T if reject_budget is None else reject_budget
        out = []
        for _ in range(T):
            while True:
                if budget <= 0:
                    raise SamplingBudgetError(
                        "rejection sampling used up its try budget"
                    )
                budget -= 1
                a = rng.getrandbits(formula.n) if formula.n else 0
                if formula.satisfied_by(a):
                    out.append(a)
                    break
        return out
    if method != "enumerate":
        raise ValueError("unknown sampling method %r" % (method,))
    space = Space(formula, limit=limit)
    if space.count == 0:
        raise UnsatisfiableError("cannot sample from an unsatisfiable formula")
    return [space.select(rng.randbelow(space.count)) for _ in range(T)]


def _space_checked(formula, limit):
    space = Space(formula, limit=limit)
    if space.count == 0:
        raise UnsatisfiableError("formula is unsatisfiable")
    return space


def marginals(formula, limit=None):
    """Pr[X(v) = True] for every variable, as exact fractions."""
    space = _space_checked(formula, limit)
    return [
        Fraction((space.bitmap & space.var_mask(v)).bit_count(), space.count)
        for v in range(formula.n)
    ]


def conditional_prob(formula, condition, event, limit=None) -> Fraction:
    """Exact Pr[X agrees with event | X agrees with condition] under the
    uniform solution distribution."""
    space = _space_checked(formula, limit)
    base = space.bitmap & _pinning_cylinder(space.n, condition)
    base_count = base.bit_count()
    if base_count == 0:
        raise InfeasiblePinningError("conditioning event has zero mass")
    joint = base & _pinning_cylinder(space.n, event)
    return Fraction(joint.bit_count(), base_count)


def forbidden_pattern_prob(formula, cstar: Clause, limit=None) -> Fraction:
    """Probability that a uniform solution matches cstar's forbidden
    assignment on vbl(cstar)."""
    if cstar.tautology:
        raise ValueError("a tautological clause has no forbidden pattern")
    space = _space_checked(formula, limit)
    hits = space.count_matching(cstar.vars, cstar.forbidden)
    return Fraction(hits, space.count)


def tv_distance(a: CnfFormula, b: CnfFormula, limit=None) -> Fraction:
    """Exact total variation distance between the two uniform solution
    distributions."""
    if a.n != b.n:
        raise ValueError("variable counts differ: %d vs %d" % (a.n, b.n))
    sa = _space_checked(a, limit)
    sb = _space_checked(b, limit)
    na, nb = sa.count, sb.count
    inter = (sa.bitmap & sb.bitmap).bit_count()
    total = (
        inter * abs(Fraction(1, na) - Fraction(1, nb))
        + Fraction(na - inter, na)
        + Fraction(nb - inter, nb)
    )
    return total / 2


def correlation_dC(formula, u, v, limit=None) -> Fraction:
    """Pairwise correlation statistic: the sum over the four value pairs of
    |Pr[X(u)=x, X(v)=y] - Pr[X(u)=x] Pr[X(v)=y]|.  Zero iff u, v independent."""
    if u == v:
        raise ValueError("need two distinct variables")
    space = _space_checked(formula, limit)
    mu, mv = space.var_mask(u), space.var_mask(v)
    total = space.count
    cu = (space.bitmap & mu).bit_count()
    cv = (space.bitmap & mv).bit_count()
    c11 = (space.bitmap & mu & mv).bit_count()
    result = Fraction(0)
    for xu in (False, True):
        for xv in (False, True):
            joint = (
                c11
                if (xu and xv)
                else (cu - c11)
                if xu
                else (cv - c11)
                if xv
                else total - cu - cv + c11
            )
            pu = cu if xu else total - cu
            pv = cv if xv else total - cv
            result += abs(Fraction(joint, total) - Fraction(pu * pv, total * total))
    return result


def equivalent(a: CnfFormula, b: CnfFormula, limit=None) -> bool:
    """True iff the two formulas have the same solution set."""
    if a.n != b.n:
        raise ValueError("variable counts differ: %d vs %d" % (a.n, b.n))
    return solution_bitmap(a, limit=limit) == solution_bitmap(b, limit=limit)


@dataclass(frozen=True)
class GadgetCountReport:
    k: int
    ell: int
    count_unrestricted: int
    count_restricted: int
    ratio: Fraction
    lower: Fraction
    upper: Fraction
    bounds_hold: bool
    extra: tuple
    extra_is_alternating: bool


def verify_gadget_counts(k, ell, limit=None) -> GadgetCountReport:
    """Exact counting check for a gadget pair.

    Verifies 1 - 2^-((k-2) ell) <= |sols_r| / |sols_u| <= 1 - 2^-(k ell),
    that exactly one assignment separates the two solution sets, and that it
    sets odd layers all-True and even layers all-False.
    """
    su = Space(gen_gadget(GadgetSpec(k, ell, False)), limit=limit)
    sr = Space(gen_gadget(GadgetSpec(k, ell, True)), limit=limit)
    extra_bits = su.bitmap & ~sr.bitmap & ((1 << (1 << su.n)) - 1)
    extra = []
    while extra_bits:
        low_bit = extra_bits & -extra_bits
        extra.append(low_bit.bit_length() - 1)
        extra_bits ^= low_bit
    ratio = Fraction(sr.count, su.count)
    lower = 1 - Fraction(1, 1 << ((k - 2) * ell))
    upper = 1 - Fraction(1, 1 << (k * ell))
    expected = 0
    for layer in range(1, ell + 1):
        if layer % 2 == 1:
            expected |= ((1 << k) - 1) << ((layer - 1) * k)
    return GadgetCountReport(
        k=k,
        ell=ell,
        count_unrestricted=su.count,
        count_restricted=sr.count,
        ratio=ratio,
        lower=lower,
        upper=upper,
        bounds_hold=lower <= ratio <= upper,
        extra=tuple(extra),
        extra_is_alternating=extra == [expected],
    )
