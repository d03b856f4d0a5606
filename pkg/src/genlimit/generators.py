"""Online generators playing against enumeration scripts.

Every generator consumes one input token per step and emits either a token or
(in the representative setting) an exact-rational distribution over tokens.
A step never mutates anything shared; distinct generator instances can run
concurrently.  "New" always means new relative to the distinct input set: a
generator may repeat its own earlier outputs.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .collection import Collection
from .errors import AdmissibilityError, ParameterError
from .procedures import (
    GroupPartition,
    NoisyTableBuilder,
    PlainTableBuilder,
    ReprTableBuilder,
    Schedule,
    scarce_groups,
    suffers_scarcity,
    validate_partition,
)
from .setalg import (
    NEG_INF,
    POS_INF,
    SetExpr,
    Token,
    cardinality,
    intersect,
    least_new,
    make_expr,
    member,
    universe,
)

Distribution = dict[Token, Fraction]


class _InputTracker:
    """Step counter, distinct-input set and per-language containment counters."""

    def __init__(self, col: Collection):
        self.col = col
        self.steps = 0
        self.seen: set[Token] = set()
        self.seen_list: list[Token] = []
        self.contains = [True] * len(col.languages)  # S_t subset of language?
        self.misses = [0] * len(col.languages)  # |S_t \ language|

    def note(self, token: Token) -> None:
        self.steps += 1
        if token in self.seen:
            return
        self.seen.add(token)
        self.seen_list.append(token)
        for k, lang in enumerate(self.col.languages):
            if not member(lang, token):
                self.contains[k] = False
                self.misses[k] += 1


class ParetoGenerator:
    """Plain-setting generator over the maintained complexity ordering.

    At step t the first ``f(t)`` languages are processed into the table, the
    current ordering is traversed, and a language joins the output pool when
    it contains the inputs and keeps the pool intersection infinite.
    """

    def __init__(self, col: Collection, schedule: Schedule, capacity: Optional[int] = None):
        self.schedule = schedule
        self.builder = PlainTableBuilder(col, capacity)
        self._in = _InputTracker(col)

    def step(self, token: Token) -> Token:
        self._in.note(token)
        col = self._in.col
        depth = min(self.schedule.size_at(self._in.steps), len(col.languages))
        self.builder.extend_to(depth)
        pool: Optional[SetExpr] = None
        for p in self.builder.ordering:
            if not self._in.contains[p]:
                continue
            cand = col.languages[p] if pool is None else intersect(pool, col.languages[p])
            if cardinality(cand) is None:
                pool = cand
        target = pool if pool is not None else universe(col.registry)
        out = least_new(target, self._in.seen)
        assert out is not None  # the pool is infinite, the input set finite
        return out


class PrefixBaselineGenerator:
    """The prior-guarantee baseline: declared ordering, one more language per step."""

    def __init__(self, col: Collection):
        self._in = _InputTracker(col)

    def step(self, token: Token) -> Token:
        self._in.note(token)
        col = self._in.col
        depth = min(self._in.steps, len(col.languages))
        pool: Optional[SetExpr] = None
        for k in range(depth):
            if not self._in.contains[k]:
                continue
            cand = col.languages[k] if pool is None else intersect(pool, col.languages[k])
            if cardinality(cand) is None:
                pool = cand
        target = pool if pool is not None else universe(col.registry)
        out = least_new(target, self._in.seen)
        assert out is not None
        return out


class NoisyGenerator:
    """Noisy-setting generator over the diagonal grid ordering.

    The containment test of the plain traversal is replaced by per-cell
    budgeted containment: cell (a, b) passes when at most ``a`` distinct
    inputs fall outside language b.
    """

    def __init__(self, col: Collection, schedule: Schedule, capacity: Optional[int] = None):
        self.schedule = schedule
        self.builder = NoisyTableBuilder(col, capacity)
        self._in = _InputTracker(col)

    def step(self, token: Token) -> Token:
        self._in.note(token)
        col = self._in.col
        self.builder.extend_to_position(self.schedule.size_at(self._in.steps))
        pool: Optional[SetExpr] = None
        for p in self.builder.ordering:
            level, index, expr = self.builder.cells[p]
            if self._in.misses[index - 1] > level:
                continue
            cand = expr if pool is None else intersect(pool, expr)
            if cardinality(cand) is None:
                pool = cand
        target = pool if pool is not None else universe(col.registry)
        out = least_new(target, self._in.seen)
        assert out is not None
        return out


class RepresentativeGenerator:
    """Representative-setting generator emitting exact-rational distributions."""

    def __init__(
        self,
        col: Collection,
        partition: GroupPartition,
        alpha: Fraction,
        schedule: Schedule,
        capacity: Optional[int] = None,
    ):
        if not 0 < alpha <= 1:
            raise ParameterError(f"alpha must be in (0, 1], got {alpha}")
        validate_partition(partition, col.registry)
        self.partition = partition
        self.alpha = Fraction(alpha)
        self.schedule = schedule
        self.builder = ReprTableBuilder(col, partition, alpha, capacity)
        self._in = _InputTracker(col)

    def step(self, token: Token) -> Distribution:
        self._in.note(token)
        col = self._in.col
        depth = min(self.schedule.size_at(self._in.steps), len(col.languages))
        self.builder.extend_to(depth)
        inputs = self._in.seen_list
        pool: Optional[SetExpr] = None
        for p in self.builder.ordering:
            if not self._in.contains[p]:
                continue
            cand = col.languages[p] if pool is None else intersect(pool, col.languages[p])
            if not suffers_scarcity(inputs, cand, self.partition, self.alpha):
                pool = cand
        if pool is None:
            share = Fraction(1, len(inputs))
            return {tok: share for tok in inputs}
        scarce = scarce_groups(pool, inputs, self.partition)
        counts = [0] * self.partition.K
        for tok in inputs:
            counts[self.partition.group_of(tok)] += 1
        total = len(inputs)
        spread = Fraction(sum(counts[g] for g in scarce), total) / (self.partition.K - len(scarce))
        dist: Distribution = {}
        for g in range(self.partition.K):
            if g in scarce:
                continue
            mass = Fraction(counts[g], total) + spread
            if mass == 0:
                continue
            pick = least_new(intersect(self.partition.groups[g], pool), self._in.seen)
            assert pick is not None  # non-scarce: a fresh token exists in this group
            dist[pick] = mass
        return dist


def empirical_distribution(tokens: Sequence[Token]) -> Distribution:
    share = Fraction(1, len(tokens))
    return {tok: share for tok in tokens}


def group_masses(dist: Distribution, partition: GroupPartition) -> list[Fraction]:
    masses = [Fraction(0)] * partition.K
    for tok, mass in dist.items():
        masses[partition.group_of(tok)] += mass
    return masses


def linf_group_distance(a: Distribution, b: Distribution, partition: GroupPartition) -> Fraction:
    ga, gb = group_masses(a, partition), group_masses(b, partition)
    return max(abs(x - y) for x, y in zip(ga, gb))


def _check_times(times: Sequence[int]) -> tuple[int, ...]:
    times = tuple(times)
    for t in times:
        if not isinstance(t, int) or isinstance(t, bool) or t < 1:
            raise AdmissibilityError(f"declared time {t!r} must be an integer >= 1")
    return times


class CofiniteObliviousGenerator:
    """Schedule-driven generator for one-point-complement integer languages.

    Language i excludes the single value ``excluded[i]`` and is activated at
    the declared time; outputs come from the intersection of the activated
    languages.  Declared times on a finite window are always admissible under
    the implicit tail rule (undeclared language i activates at time i).
    """

    def __init__(self, excluded: Sequence[int], times: Sequence[int]):
        if len(excluded) != len(times):
            raise AdmissibilityError("one declared time per language required")
        self.excluded = tuple(excluded)
        self.times = _check_times(times)
        self._universe = make_expr((), [(NEG_INF, POS_INF)])
        self.steps = 0
        self.seen: set[Token] = set()
        self.used: set[Token] = set()

    def step(self, token: Token) -> Token:
        self.steps += 1
        self.seen.add(token)
        active = [v for v, t in zip(self.excluded, self.times) if t <= self.steps]
        if not active:
            out = least_new(self._universe, self.seen | self.used)
        else:
            pool = make_expr((), [(NEG_INF, POS_INF)])
            out = least_new(pool, set(active) | self.seen | self.used)
        assert out is not None
        self.used.add(out)
        return out


class CappedRayObliviousGenerator:
    """Schedule-driven generator for block-plus-ray integer languages.

    Language i is the fixed block together with the ray starting at
    ``starts[i]``.  While at most ``block`` distinct inputs arrived, the
    activated set is time-driven; past the block size it is the set of
    languages containing the inputs.
    """

    def __init__(self, starts: Sequence[int], times: Sequence[int], block: tuple[int, int] = (1, 100)):
        if len(starts) != len(times):
            raise AdmissibilityError("one declared time per language required")
        self.starts = tuple(starts)
        self.times = _check_times(times)
        self.block = block
        self.languages = tuple(
            make_expr((), [block, (e, POS_INF)]) for e in self.starts
        )
        self._universe = make_expr((), [(NEG_INF, POS_INF)])
        self.steps = 0
        self.seen: set[Token] = set()
        self.used: set[Token] = set()
        self._contains = [True] * len(self.starts)

    def step(self, token: Token) -> Token:
        self.steps += 1
        if token not in self.seen:
            self.seen.add(token)
            for k, lang in enumerate(self.languages):
                if self._contains[k] and not member(lang, token):
                    self._contains[k] = False
        block_size = self.block[1] - self.block[0] + 1
        if len(self.seen) <= block_size:
            active = [k for k, t in enumerate(self.times) if t <= len(self.seen)]
        else:
            active = [k for k in range(len(self.starts)) if self._contains[k]]
        if not active:
            out = least_new(self._universe, self.seen | self.used)
        else:
            pool = self.languages[active[0]]
            for k in active[1:]:
                pool = intersect(pool, self.languages[k])
            out = least_new(pool, self.seen | self.used)
            if out is None:  # no new string available: repeat one from the pool
                out = least_new(pool, ())
        assert out is not None
        self.used.add(out)
        return out
