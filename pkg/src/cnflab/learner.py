"""Clause-elimination learner and sample-complexity experiments.

The learner starts from every size-k clause over distinct variables and
removes each clause some sample violates; what survives is the output
formula.  A PatternTable gives the sample-major dual view: one observed-
pattern bitmask per k-subset of variables, so elimination costs
O(C(n,k) * (kT + 2^k)) instead of rescanning samples per clause.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
import time
from dataclasses import dataclass
from fractions import Fraction

from .core import Clause, CnfFormula, UnsatisfiableError
from .rand import ALGORITHM, SeededRng, derived_seed
from .solutions import Space, equivalent, sample_uniform, solution_bitmap


def iter_ksubsets_colex(n, k):
    """All k-subsets of range(n) in colexicographic order."""
    if k == 0:
        yield ()
        return
    if k > n:
        return
    subset = list(range(k))
    while True:
        yield tuple(subset)
        i = 0
        while i + 1 < k and subset[i] + 1 == subset[i + 1]:
            i += 1
        if subset[i] + 1 >= n:
            return
        subset[i] += 1
        for j in range(i):
            subset[j] = j


def colex_rank(subset) -> int:
    """Position of a sorted subset in colex order: sum of C(s_i, i+1)."""
    return sum(math.comb(s, i + 1) for i, s in enumerate(subset))


class PatternTable:
    """Observed-pattern bitmask for every k-subset of n variables.

    Mask bit b of entry r is set iff some added sample, restricted to the
    colex-rank-r subset (bit i of b = value of the subset's i-th variable),
    equals pattern b.  Masks only ever gain bits as samples accumulate.
    """

    def __init__(self, n, k):
        if not 0 <= k <= n:
            raise ValueError("need 0 <= k <= n")
        self.n = n
        self.k = k
        self.subsets = tuple(iter_ksubsets_colex(n, k))
        self.masks = [0] * len(self.subsets)

    def add_sample(self, assignment: int):
        masks = self.masks
        for r, subset in enumerate(self.subsets):
            pattern = 0
            for i, v in enumerate(subset):
                if (assignment >> v) & 1:
                    pattern |= 1 << i
            masks[r] |= 1 << pattern

    def add_samples(self, assignments):
        for a in assignments:
            self.add_sample(a)

    def surviving_clauses(self):
        """Clauses whose forbidden pattern was never observed, ordered by
        colex subset rank then ascending pattern."""
        out = []
        full = (1 << (1 << self.k)) - 1
        for r, subset in enumerate(self.subsets):
            missing = self.masks[r] ^ full
            while missing:
                low = missing & -missing
                out.append(Clause(subset, low.bit_length() - 1))
                missing ^= low
        return out


def valiant_learn(n, k, samples, mode="sample-major") -> CnfFormula:
    """Eliminate every size-k clause some sample violates.

    Returns the formula of all surviving clauses: the 2^k * C(n,k) candidate
    clauses minus those whose forbidden pattern appears among the samples on
    the clause's variable set.  With zero samples everything survives.  Both
    modes produce identical output; clause-major is the literal
    check-each-clause-against-each-sample loop kept for cross-validation.
    """
    if mode == "sample-major":
        table = PatternTable(n, k)
        table.add_samples(samples)
        return CnfFormula(n, tuple(table.surviving_clauses()))
    if mode != "clause-major":
        raise ValueError("unknown mode %r" % (mode,))
    clauses = []
    for subset in iter_ksubsets_colex(n, k):
        for pattern in range(1 << k):
            candidate = Clause(subset, pattern)
            if not any(candidate.pattern_of(a) == pattern for a in samples):
                clauses.append(candidate)
    return CnfFormula(n, tuple(clauses))


def extend_short_clauses(formula: CnfFormula, k) -> CnfFormula:
    """Replace every clause of size i < k by its 2^(k-i) * C(n-i, k-i)
    size-k extensions (every added-variable set, every added polarity).

    The output is logically equivalent to the input: the conjunction of all
    extensions of a clause forbids exactly the original forbidden pattern.
    Tautological clauses constrain nothing and are dropped.
    """
    if formula.n < k:
        raise ValueError("extension to size %d needs n >= %d" % (k, k))
    out = []
    for clause in formula.clauses:
        if clause.tautology:
            continue
        if clause.size > k:
            raise ValueError("clause of size %d exceeds k=%d" % (clause.size, k))
        if clause.size == k:
            out.append(clause)
            continue
        base = list(clause.literals())
        rest = [v for v in range(formula.n) if v not in clause.vars]
        add = k - clause.size
        for extra_vars in itertools.combinations(rest, add):
            for polarity in range(1 << add):
                lits = base + [
                    (w, bool((polarity >> i) & 1)) for i, w in enumerate(extra_vars)
                ]
                out.append(Clause.from_literals(lits))
    return CnfFormula(formula.n, tuple(out))


def predicted_sample_bound(theta, n, k, delta) -> int:
    """ceil((1/theta) * (k*ln(2n) - ln(delta))): the sample count at which
    the elimination learner's failure probability drops below delta for a
    theta-resilient truth formula."""
    theta = Fraction(theta)
    if not 0 < theta <= 1:
        raise ValueError("theta must lie in (0, 1]")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    value = (1 / float(theta)) * (k * math.log(2 * n) - math.log(delta))
    return math.ceil(value)


@dataclass(frozen=True)
class TrialRecord:
    family: str
    n: int
    k: int
    T: int
    seed: str
    success: bool
    learned_clause_count: int
    wall_time_s: float
    tv: Fraction | None = None


def exact_learning_trial(truth, k, T, seed, family="", report_tv=False, limit=None) -> TrialRecord:
    """Sample T solutions of the truth formula, learn, and record whether
    the learned formula has exactly the truth's solution set.

    Also asserts the learner's two unconditional guarantees on every trial:
    the learned solution set contains every sample and never exceeds the
    truth's solution set.
    """
    from .solutions import tv_distance

    start = time.monotonic()
    samples = sample_uniform(truth, T, seed, limit=limit)
    learned = valiant_learn(truth.n, k, samples)
    truth_bits = solution_bitmap(truth, limit=limit)
    learned_bits = solution_bitmap(learned, limit=limit)
    assert learned_bits & ~truth_bits == 0, "learned solutions escaped the truth set"
    for a in samples:
        assert (learned_bits >> a) & 1, "a sample violates a learned clause"
    success = learned_bits == truth_bits
    tv = None
    if report_tv and learned_bits:
        tv = tv_distance(truth, learned, limit=limit)
    return TrialRecord(
        family=family,
        n=truth.n,
        k=k,
        T=T,
        seed=str(seed),
        success=success,
        learned_clause_count=len(learned.clauses),
        wall_time_s=time.monotonic() - start,
        tv=tv,
    )


@dataclass(frozen=True)
class SweepRow:
    family: str
    n: int
    k: int
    T: int
    trials: int
    successes: int
    t_star_flag: bool
    seed_base: str


@dataclass(frozen=True)
class SweepResult:
    rows: tuple
    delta: float
    trials: int
    seed_base: str
    t_star: dict  # (family, n) -> grid T or None

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            ["family", "n", "k", "T", "trials", "successes", "t_star_flag", "seed_base"]
        )
        for row in self.rows:
            writer.writerow(
                [
                    row.family,
                    row.n,
                    row.k,
                    row.T,
                    row.trials,
                    row.successes,
                    int(row.t_star_flag),
                    row.seed_base,
                ]
            )
        return buf.getvalue()


def _completion_time(space, subsets, truth_masks, t_max, seed):
    """First sample count at which every subset's observed pattern mask
    equals the truth's support mask, or None within t_max.

    Draws the exact sequence sample_uniform would produce, so trials with
    larger T share the smaller trials' samples as a prefix.
    """
    rng = SeededRng(seed)
    observed = [0] * len(subsets)
    remaining = {
        r for r in range(len(subsets)) if truth_masks[r]  # always nonempty
    }
    for t in range(1, t_max + 1):
        a = space.select(rng.randbelow(space.count))
        done = []
        for r in remaining:
            pattern = 0
            for i, v in enumerate(subsets[r]):
                if (a >> v) & 1:
                    pattern |= 1 << i
            observed[r] |= 1 << pattern
            if observed[r] == truth_masks[r]:
                done.append(r)
        remaining.difference_update(done)
        if not remaining:
            return t
    return None


def sample_complexity_sweep(instances, k, t_grid, trials=200, delta=0.1,
                            seed_base="sweep", limit=None) -> SweepResult:
    """Success fraction of the elimination learner per (instance, grid T).

    instances: list of (family_label, CnfFormula).  Each trial t of an
    instance uses seed derived_seed(seed_base, t) and shares its sample
    prefix across all grid points, so per-seed success is monotone in T.
    T*(n) is the least grid T whose success fraction reaches 1 - delta
    (None if the grid never gets there).

    Success is computed by the support-mask criterion: a trial succeeds at
    T iff by sample T every k-subset of variables has shown every pattern
    that has nonzero probability under the truth.  For truth formulas whose
    clauses all have size <= k this is exactly equivalent(truth, learned):
    a missing supported pattern leaves a clause that cuts a true solution,
    and once none is missing, every surviving clause only cuts assignments
    of zero probability.  Formulas with larger clauses are rejected.
    """
    grid = sorted(set(t_grid))
    if not grid or grid[0] < 0:
        raise ValueError("t_grid must be nonempty and nonnegative")
    rows = []
    t_star = {}
    for family, formula in instances:
        if any(c.size > k for c in formula.clauses if not c.tautology):
            raise ValueError(
                "support-mask sweep needs truth clause sizes <= k"
            )
        space = Space(formula, limit=limit)
        if space.count == 0:
            raise UnsatisfiableError("sweep instance %r is unsatisfiable" % (family,))
        subsets = tuple(iter_ksubsets_colex(formula.n, k))
        truth_masks = []
        for subset in subsets:
            counts = space.counts_by_pattern(subset)
            mask = 0
            for pattern, cnt in enumerate(counts):
                if cnt:
                    mask |= 1 << pattern
            truth_masks.append(mask)
        t_max = grid[-1]
        times = [
            _completion_time(space, subsets, truth_masks, t_max,
                             derived_seed(seed_base, t))
            for t in range(trials)
        ]
        star = None
        for T in grid:
            successes = sum(1 for tc in times if tc is not None and tc <= T)
            is_star = star is None and successes >= (1 - delta) * trials
            if is_star:
                star = T
            rows.append(
                SweepRow(family, formula.n, k, T, trials, successes,
                         is_star, seed_base)
            )
        t_star[(family, formula.n)] = star
    return SweepResult(tuple(rows), delta, trials, seed_base, t_star)
