"""Insertion-sort complexity tables, their witness optimizers, and schedules.

Three settings share the same skeleton: process cells one at a time, append
the new cell at the end of the maintained ordering, then slide it forward one
position at a time.  At each trial position the setting's witness optimizer
computes the best witness over the current prefix; the slide stops when the
position is 1 or the witness value strictly exceeds the stored value of the
preceding cell.  The stored value/witness per cell is whatever the optimizer
reported at the stopping position.

* plain: witness value is the largest finite intersection over prefix
  subcollections containing the cell;
* noisy: cells are (noise level, language) grid entries visited in diagonal
  order, and the witness is the largest finite token set that each chosen
  member level-contains, with a finite member intersection;
* representative: the witness is the largest finite token set inside every
  chosen member that suffers group scarcity at the table's accuracy alpha.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import islice
from typing import NamedTuple, Optional, Sequence, Union

from . import setalg
from .collection import Collection, max_finite_intersection
from .errors import CapacityError, ParameterError, PartitionError, SchemaError, UnboundedScheduleError
from .setalg import (
    SetExpr,
    Token,
    cardinality,
    complement,
    finite_tokens,
    intersect,
    is_empty,
    iter_members,
    least_new,
    script_key,
    subtract_finite,
)

PLAIN_CAPACITY = 20
NOISY_CAPACITY = 36
REPR_CAPACITY = 16
MAX_GROUPS = 8

Cell = Union[int, tuple[int, int]]  # language index, or (level, index) grid cell


class WitnessInfo(NamedTuple):
    """A witness token set, the subcollection realizing it, and its size."""

    tokens: tuple[Token, ...]
    witness: tuple
    m: int


EMPTY_WITNESS = WitnessInfo((), (), 0)


@dataclass(frozen=True)
class TableEntry:
    """One processed cell: identity, stored witness value and witness data."""

    index: int
    level: Optional[int]
    position: int
    mstar: int
    witness: tuple
    witness_tokens: tuple[Token, ...]

    @property
    def cell(self) -> Cell:
        return self.index if self.level is None else (self.level, self.index)


@dataclass(frozen=True)
class ComplexityTable:
    setting: str  # "plain" | "noisy" | "representative"
    alpha: Optional[Fraction]
    entries: tuple[TableEntry, ...]
    ordering: tuple[int, ...]  # entry positions (0-based), current sorted order

    def entry_for(self, index: int, level: Optional[int] = None) -> TableEntry:
        for entry in self.entries:
            if entry.index == index and entry.level == level:
                return entry
        raise KeyError(f"no processed cell for index={index} level={level}")

    def mstar_by_language(self) -> list[int]:
        """Plain/representative tables only: stored values in collection order."""
        return [e.mstar for e in sorted(self.entries, key=lambda e: e.index)]


def diagonal_position(level: int, index: int) -> int:
    """1-based position of grid cell (level, index) in the diagonal traversal."""
    if level < 0 or index < 1:
        raise ParameterError(f"bad grid cell ({level}, {index})")
    d = level + index - 1
    return d * (d + 1) // 2 + index


def diagonal_cell(position: int) -> tuple[int, int]:
    """Inverse of :func:`diagonal_position`."""
    if position < 1:
        raise ParameterError(f"bad diagonal position {position}")
    d = 0
    while (d + 1) * (d + 2) // 2 < position:
        d += 1
    index = position - d * (d + 1) // 2
    return d - (index - 1), index


# ---------------------------------------------------------------------------
# noisy witness optimizer


def _pattern_regions(members: Sequence[tuple[int, int, SetExpr]]):
    """Nonempty regions of each violation pattern over the member languages."""
    regions = []
    for vmask in range(1, 1 << len(members)):
        region = None
        for pos, (_, _, expr) in enumerate(members):
            piece = complement(expr) if vmask >> pos & 1 else expr
            region = piece if region is None else intersect(region, piece)
        if not is_empty(region):
            regions.append((vmask, region, cardinality(region)))
    return regions


def _max_extras(members, budgets):
    """Best multiset of extra tokens charging each member's budget at most once per token."""
    regions = _pattern_regions(members)
    nmem = len(members)

    def limit(vmask, rem):
        return min(rem[pos] for pos in range(nmem) if vmask >> pos & 1)

    best_total = -1
    best_alloc: list[int] = []

    def grow(idx, rem, acc, alloc):
        nonlocal best_total, best_alloc
        bound = acc
        for vmask, _, cap in regions[idx:]:
            lim = limit(vmask, rem)
            bound += lim if cap is None else min(lim, cap)
        if bound <= best_total:
            return
        if idx == len(regions):
            best_total = acc
            best_alloc = list(alloc)
            return
        vmask, _, cap = regions[idx]
        lim = limit(vmask, rem)
        if cap is not None:
            lim = min(lim, cap)
        for take in range(lim, -1, -1):
            for pos in range(nmem):
                if vmask >> pos & 1:
                    rem[pos] -= take
            alloc.append(take)
            grow(idx + 1, rem, acc + take, alloc)
            alloc.pop()
            for pos in range(nmem):
                if vmask >> pos & 1:
                    rem[pos] += take
        return

    grow(0, list(budgets), 0, [])
    picked: list[Token] = []
    for (vmask, region, _), take in zip(regions, best_alloc):
        for _ in range(take):
            tok = least_new(region, picked)
            assert tok is not None
            picked.append(tok)
    return max(best_total, 0), picked


def best_noisy_witness(
    cells: Sequence[tuple[int, int, SetExpr]], j: int
) -> WitnessInfo:
    """Best noisy witness for position ``j`` of ``cells`` (= (level, index, expr)).

    Every subcollection of the first ``j`` cells containing cell ``j`` is
    considered; per language only its highest-level copy can matter, so the
    search runs over subsets of distinct other languages.  The witness set is
    the member intersection plus extra tokens chosen per violation pattern
    within the members' level budgets.
    """
    own_level, own_index, own_expr = cells[j - 1]
    strongest: dict[int, tuple[int, SetExpr]] = {}
    for level, index, expr in cells[: j - 1]:
        if index == own_index:
            continue  # another copy of the own language never helps
        cur = strongest.get(index)
        if cur is None or level > cur[0]:
            strongest[index] = (level, expr)
    others = sorted(strongest)

    best: Optional[WitnessInfo] = None
    for mask in range(1 << len(others)):
        members = [(own_level, own_index, own_expr)]
        for k, index in enumerate(others):
            if mask >> k & 1:
                level, expr = strongest[index]
                members.append((level, index, expr))
        inter = members[0][2]
        for _, _, expr in members[1:]:
            inter = intersect(inter, expr)
        base = cardinality(inter)
        if base is None:
            continue
        extra, extra_tokens = _max_extras(members, [lvl for lvl, _, _ in members])
        tokens = tuple(sorted(tuple(finite_tokens(inter)) + tuple(extra_tokens), key=script_key))
        witness = tuple(sorted(((lvl, idx) for lvl, idx, _ in members), key=lambda c: (c[1], c[0])))
        cand = WitnessInfo(tokens, witness, base + extra)
        if best is None or cand.m > best.m or (cand.m == best.m and cand.witness < best.witness):
            best = cand
    return best if best is not None else EMPTY_WITNESS


# ---------------------------------------------------------------------------
# group partitions and the representative witness optimizer


@dataclass(frozen=True)
class GroupPartition:
    groups: tuple[SetExpr, ...]
    names: tuple[str, ...]

    @property
    def K(self) -> int:
        return len(self.groups)

    def group_of(self, token: Token) -> int:
        for g, expr in enumerate(self.groups):
            if setalg.member(expr, token):
                return g
        raise PartitionError(f"token {token!r} in no group")


def validate_partition(partition: GroupPartition, registry: Sequence[str]) -> None:
    """Symbolic check that the groups tile the universe exactly."""
    registry = tuple(registry)
    if partition.K == 0:
        raise PartitionError("a partition needs at least one group")
    if partition.K > MAX_GROUPS:
        raise CapacityError(f"{partition.K} groups exceed the bound {MAX_GROUPS}")
    for expr in partition.groups:
        if expr.registry != registry:
            raise PartitionError("group registry differs from the collection registry")
    for a in range(partition.K):
        for b in range(a + 1, partition.K):
            if not is_empty(intersect(partition.groups[a], partition.groups[b])):
                raise PartitionError(f"groups {a + 1} and {b + 1} overlap")
    hole = complement(partition.groups[0])
    for expr in partition.groups[1:]:
        hole = intersect(hole, complement(expr))
    if not is_empty(hole):
        raise PartitionError("groups do not cover the universe")


def load_groups(doc: dict, registry: Sequence[str]) -> GroupPartition:
    """Parse a groups document ``{"groups": [{"name", "intervals", "atoms"}, ...]}``."""
    from .collection import _decode_endpoint  # shared endpoint coding

    if not isinstance(doc, dict) or not isinstance(doc.get("groups"), list):
        raise SchemaError('groups document must be {"groups": [...]}')
    exprs, names = [], []
    for pos, entry in enumerate(doc["groups"], start=1):
        if not isinstance(entry, dict):
            raise SchemaError(f"group #{pos} must be an object")
        intervals = [
            (_decode_endpoint(lo), _decode_endpoint(hi))
            for lo, hi in entry.get("intervals", [])
        ]
        exprs.append(setalg.make_expr(registry, intervals, atoms=entry.get("atoms", [])))
        names.append(entry.get("name", f"A{pos}"))
    partition = GroupPartition(tuple(exprs), tuple(names))
    validate_partition(partition, registry)
    return partition


def scarce_groups(
    intersection: SetExpr, tokens: Sequence[Token], partition: GroupPartition
) -> frozenset[int]:
    """Groups (0-based) whose fresh slice of the intersection is used up."""
    rest = subtract_finite(intersection, tokens)
    return frozenset(
        g for g, expr in enumerate(partition.groups) if is_empty(intersect(expr, rest))
    )


def group_counts(tokens: Sequence[Token], partition: GroupPartition) -> list[int]:
    counts = [0] * partition.K
    for tok in tokens:
        counts[partition.group_of(tok)] += 1
    return counts


def suffers_scarcity(
    tokens: Sequence[Token],
    intersection: SetExpr,
    partition: GroupPartition,
    alpha: Fraction,
) -> bool:
    """Exact-rational group-scarcity test; an empty token set never suffers."""
    tokens = list(tokens)
    if not tokens:
        return False
    scarce = scarce_groups(intersection, tokens, partition)
    if not scarce:
        return False
    counts = group_counts(tokens, partition)
    total = len(tokens)
    if any(Fraction(counts[g], total) > alpha for g in scarce):
        return True
    mass = Fraction(sum(counts[g] for g in scarce), total)
    return mass > alpha * (partition.K - len(scarce))


def _largest_below(limit: Fraction) -> int:
    """Largest integer strictly below a positive rational."""
    floor = limit.numerator // limit.denominator
    return floor - 1 if limit.denominator == 1 else floor


def best_scarce_witness(
    langs: Sequence[SetExpr],
    j: int,
    partition: GroupPartition,
    alpha: Fraction,
) -> WitnessInfo:
    """Best scarcity-suffering witness for position ``j`` of ``langs``.

    For each candidate subcollection the token set is described by per-group
    counts: a group is scarce exactly when its (finite) share of the member
    intersection is fully included, so the optimum enumerates which finite
    groups are driven scarce and pads the rest up to the scarcity inequality.
    """
    if not 0 < alpha <= 1:
        raise ParameterError(f"alpha must be in (0, 1], got {alpha}")
    if partition.K > MAX_GROUPS:
        raise CapacityError(f"{partition.K} groups exceed the bound {MAX_GROUPS}")
    own = langs[j - 1]
    others: list[int] = []
    seen = [own]
    for idx in range(1, len(langs) + 1):
        if idx == j:
            continue
        expr = langs[idx - 1]
        if any(expr == s for s in seen):
            continue
        seen.append(expr)
        others.append(idx)

    best: Optional[WitnessInfo] = None
    for mask in range(1 << len(others)):
        chosen = [others[k] for k in range(len(others)) if mask >> k & 1]
        inter = own
        for idx in chosen:
            inter = intersect(inter, langs[idx - 1])
        witness = tuple(sorted([j] + chosen))
        counts = [cardinality(intersect(expr, inter)) for expr in partition.groups]
        m, tokens = _best_scarce_tokens(inter, counts, partition, alpha)
        if m == 0:
            continue
        cand = WitnessInfo(tokens, witness, m)
        if best is None or cand.m > best.m or (cand.m == best.m and cand.witness < best.witness):
            best = cand
    return best if best is not None else EMPTY_WITNESS


def _best_scarce_tokens(
    inter: SetExpr,
    counts: Sequence[Optional[int]],
    partition: GroupPartition,
    alpha: Fraction,
) -> tuple[int, tuple[Token, ...]]:
    K = partition.K
    zero = [g for g, c in enumerate(counts) if c == 0]
    finite_pos = [g for g, c in enumerate(counts) if c is not None and c > 0]

    best_n = 0
    best_plan = None  # (full groups, padding per remaining group)
    for mask in range(1 << len(finite_pos)):
        full = [finite_pos[k] for k in range(len(finite_pos)) if mask >> k & 1]
        scarce = zero + full
        if not scarce:
            continue
        total_full = sum(counts[g] for g in full)
        pad_caps: list[tuple[int, Optional[int]]] = []
        for g, c in enumerate(counts):
            if g in scarce:
                continue
            pad_caps.append((g, None if c is None else c - 1))
        if len(scarce) == K:
            n = total_full
        else:
            bounds = []
            if full:
                bounds.append(Fraction(max(counts[g] for g in full)) / alpha)
            if total_full > 0:
                bounds.append(Fraction(total_full) / (alpha * (K - len(scarce))))
            if not bounds:
                continue  # scarce groups hold no tokens: both clauses are unsatisfiable
            n = _largest_below(max(bounds))
            room = 0
            unbounded = False
            for _, cap in pad_caps:
                if cap is None:
                    unbounded = True
                else:
                    room += cap
            if not unbounded:
                n = min(n, total_full + room)
        if n < max(total_full, 1):
            continue
        if n > best_n:
            best_n = n
            best_plan = (full, pad_caps, total_full)

    if best_plan is None:
        return 0, ()
    full, pad_caps, total_full = best_plan
    tokens: list[Token] = []
    for g in full:
        tokens.extend(finite_tokens(intersect(partition.groups[g], inter)))
    extra = best_n - total_full
    for g, cap in pad_caps:
        if extra == 0:
            break
        take = extra if cap is None else min(cap, extra)
        slice_expr = intersect(partition.groups[g], inter)
        tokens.extend(islice(iter_members(slice_expr), take))  # groups are disjoint
        extra -= take
    assert extra == 0 and len(tokens) == best_n
    assert suffers_scarcity(tokens, inter, partition, alpha)
    return best_n, tuple(sorted(tokens, key=script_key))


# ---------------------------------------------------------------------------
# table builders


class PlainTableBuilder:
    """Incremental plain-setting table; iterations are never re-run."""

    def __init__(self, col: Collection, capacity: Optional[int] = PLAIN_CAPACITY):
        self.col = col
        self.capacity = capacity
        self.entries: list[TableEntry] = []
        self.ordering: list[int] = []
        self.ordering_history: list[tuple[int, ...]] = []

    @property
    def processed(self) -> int:
        return len(self.entries)

    def extend_to(self, n: int) -> None:
        n = min(n, len(self.col.languages))
        if self.capacity is not None and n > self.capacity:
            raise CapacityError(f"prefix {n} exceeds capacity {self.capacity}")
        while len(self.entries) < n:
            self._insert(len(self.entries) + 1)

    def _insert(self, i: int) -> None:
        self.ordering.append(i - 1)
        j = len(self.ordering)
        while True:
            prefix = [self.col.languages[p] for p in self.ordering[:j]]
            wit = max_finite_intersection(prefix, j, bound=len(prefix))
            if j <= 1 or wit.m > self.entries[self.ordering[j - 2]].mstar:
                break
            self.ordering[j - 1], self.ordering[j - 2] = (
                self.ordering[j - 2],
                self.ordering[j - 1],
            )
            j -= 1
        witness = tuple(sorted(self.ordering[p - 1] + 1 for p in wit.witness))
        if witness:
            inter = self.col.languages[witness[0] - 1]
            for idx in witness[1:]:
                inter = intersect(inter, self.col.languages[idx - 1])
            tokens = finite_tokens(inter)
        else:
            tokens = ()
        self.entries.append(
            TableEntry(index=i, level=None, position=i, mstar=wit.m, witness=witness, witness_tokens=tokens)
        )
        self.ordering_history.append(tuple(self.ordering))

    def snapshot(self) -> ComplexityTable:
        return ComplexityTable("plain", None, tuple(self.entries), tuple(self.ordering))


class NoisyTableBuilder:
    """Incremental noisy-setting table over the diagonal grid traversal."""

    def __init__(self, col: Collection, capacity: Optional[int] = NOISY_CAPACITY):
        self.col = col
        self.capacity = capacity
        self.entries: list[TableEntry] = []
        self.ordering: list[int] = []
        self.ordering_history: list[tuple[int, ...]] = []
        self.cells: list[tuple[int, int, SetExpr]] = []
        self._scanned = 0  # grid positions consumed so far

    def extend_to_position(self, lmax: int) -> None:
        if self.capacity is not None and lmax > self.capacity:
            raise CapacityError(f"diagonal position {lmax} exceeds capacity {self.capacity}")
        while self._scanned < lmax:
            position = self._scanned + 1
            self._scanned = position
            level, index = diagonal_cell(position)
            if index > len(self.col.languages):
                continue  # grid column beyond the declared prefix
            self._insert(level, index, position)

    def _insert(self, level: int, index: int, position: int) -> None:
        self.cells.append((level, index, self.col.languages[index - 1]))
        self.ordering.append(len(self.cells) - 1)
        j = len(self.ordering)
        while True:
            prefix = [self.cells[p] for p in self.ordering[:j]]
            info = best_noisy_witness(prefix, j)
            if j <= 1 or info.m > self.entries[self.ordering[j - 2]].mstar:
                break
            self.ordering[j - 1], self.ordering[j - 2] = (
                self.ordering[j - 2],
                self.ordering[j - 1],
            )
            j -= 1
        self.entries.append(
            TableEntry(
                index=index,
                level=level,
                position=position,
                mstar=info.m,
                witness=info.witness,
                witness_tokens=info.tokens,
            )
        )
        self.ordering_history.append(tuple(self.ordering))

    def snapshot(self) -> ComplexityTable:
        return ComplexityTable("noisy", None, tuple(self.entries), tuple(self.ordering))


class ReprTableBuilder:
    """Incremental representative-setting table at a fixed accuracy alpha."""

    def __init__(
        self,
        col: Collection,
        partition: GroupPartition,
        alpha: Fraction,
        capacity: Optional[int] = REPR_CAPACITY,
    ):
        if not 0 < alpha <= 1:
            raise ParameterError(f"alpha must be in (0, 1], got {alpha}")
        validate_partition(partition, col.registry)
        self.col = col
        self.partition = partition
        self.alpha = Fraction(alpha)
        self.capacity = capacity
        self.entries: list[TableEntry] = []
        self.ordering: list[int] = []
        self.ordering_history: list[tuple[int, ...]] = []

    @property
    def processed(self) -> int:
        return len(self.entries)

    def extend_to(self, n: int) -> None:
        n = min(n, len(self.col.languages))
        if self.capacity is not None and n > self.capacity:
            raise CapacityError(f"prefix {n} exceeds capacity {self.capacity}")
        while len(self.entries) < n:
            self._insert(len(self.entries) + 1)

    def _insert(self, i: int) -> None:
        self.ordering.append(i - 1)
        j = len(self.ordering)
        while True:
            prefix = [self.col.languages[p] for p in self.ordering[:j]]
            info = best_scarce_witness(prefix, j, self.partition, self.alpha)
            if j <= 1 or info.m > self.entries[self.ordering[j - 2]].mstar:
                break
            self.ordering[j - 1], self.ordering[j - 2] = (
                self.ordering[j - 2],
                self.ordering[j - 1],
            )
            j -= 1
        witness = tuple(sorted(self.ordering[p - 1] + 1 for p in info.witness))
        self.entries.append(
            TableEntry(
                index=i,
                level=None,
                position=i,
                mstar=info.m,
                witness=witness,
                witness_tokens=info.tokens,
            )
        )
        self.ordering_history.append(tuple(self.ordering))

    def snapshot(self) -> ComplexityTable:
        return ComplexityTable(
            "representative", self.alpha, tuple(self.entries), tuple(self.ordering)
        )


def plain_table(col: Collection, n: Optional[int] = None, capacity: int = PLAIN_CAPACITY) -> ComplexityTable:
    builder = PlainTableBuilder(col, capacity)
    builder.extend_to(len(col.languages) if n is None else n)
    return builder.snapshot()


def noisy_table(col: Collection, max_position: int, capacity: int = NOISY_CAPACITY) -> ComplexityTable:
    builder = NoisyTableBuilder(col, capacity)
    builder.extend_to_position(max_position)
    return builder.snapshot()


def representative_table(
    col: Collection,
    partition: GroupPartition,
    alpha: Fraction,
    n: Optional[int] = None,
    capacity: int = REPR_CAPACITY,
) -> ComplexityTable:
    builder = ReprTableBuilder(col, partition, alpha, capacity)
    builder.extend_to(len(col.languages) if n is None else n)
    return builder.snapshot()


# ---------------------------------------------------------------------------
# schedules


class IdentitySchedule:
    """f(t) = t."""

    kind = "identity"

    def size_at(self, t: int) -> int:
        return t

    def start_time(self, i: int) -> int:
        return i


class PowerSchedule:
    """f(t) = base ** t, base >= 2."""

    def __init__(self, base: int = 2):
        if base < 2:
            raise ParameterError("power schedule needs base >= 2")
        self.base = base
        self.kind = f"pow{base}"

    def size_at(self, t: int) -> int:
        return self.base**t

    def start_time(self, i: int) -> int:
        t = 1
        while self.base**t < i:
            t += 1
        return t


class ExplicitSchedule:
    """f given by a non-decreasing table, clamped to its last value beyond it."""

    kind = "explicit"

    def __init__(self, values: Sequence[int]):
        values = tuple(values)
        if not values or any(b < a for a, b in zip(values, values[1:])):
            raise ParameterError("explicit schedule must be a non-empty non-decreasing table")
        self.values = values

    def size_at(self, t: int) -> int:
        return self.values[min(t, len(self.values)) - 1]

    def start_time(self, i: int) -> int:
        for t, v in enumerate(self.values, start=1):
            if v >= i:
                return t
        raise UnboundedScheduleError(f"explicit schedule never reaches prefix size {i}")


class TableSchedule:
    """The table-derived schedule: f(t) = largest covered position whose value fits.

    ``pairs`` holds (position, stored value) per processed cell; positions are
    language indices for plain/representative tables and diagonal positions
    for noisy tables.  f(t) = max{position : value + 1 <= t} and its inverse
    g(i) = min{value + 1 over positions >= i} satisfies g(i) <= value(i) + 1.
    """

    kind = "sufficient"

    def __init__(self, pairs: Sequence[tuple[int, int]]):
        if not pairs:
            raise ParameterError("table schedule needs at least one processed cell")
        self.pairs = tuple(sorted(pairs))

    def size_at(self, t: int) -> int:
        best = 0
        for position, value in self.pairs:
            if value + 1 <= t:
                best = max(best, position)
        return best

    def start_time(self, i: int) -> int:
        candidates = [value + 1 for position, value in self.pairs if position >= i]
        if not candidates:
            raise UnboundedScheduleError(f"schedule table never covers position {i}")
        return min(candidates)


Schedule = Union[IdentitySchedule, PowerSchedule, ExplicitSchedule, TableSchedule]


def schedule_from_table(table: ComplexityTable) -> TableSchedule:
    """The sufficient schedule of a finished table (g(i) <= stored value + 1)."""
    return TableSchedule([(e.position, e.mstar) for e in table.entries])


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParameterError(f"bad fraction {text!r}") from exc
