"""Exact symbolic algebra for countable subsets of an integers-plus-streams universe.

The universe is the disjoint union of the integers and a declared registry of
named abstract infinite streams ("atoms"); element ``k`` of atom ``a`` is the
token ``AtomElem(a, k)``.  A :class:`SetExpr` holds a normalized run of closed
integer intervals plus, per atom, either a finite or a cofinite slice of that
atom's stream.  The class is closed under intersection, complement, union and
finite subtraction, and membership, cardinality and least-element queries are
exact and total.

Two deterministic token orders are used throughout the package:

* the *universe order* (``canonical_key``) interleaves integers and atom
  elements in rounds ``0, 1, -1, (a,0)..., 2, -2, (a,1)...`` and drives
  ``least_new``;
* the *script order* (``script_key``) lists a set's integer members first
  (by the universe integer order) and its atom members afterwards, and drives
  enumeration scripts and witness-token listings.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, NamedTuple, Optional, Sequence, Union

from .errors import RegistryMismatchError, SchemaError

NEG_INF = float("-inf")
POS_INF = float("inf")

Endpoint = Union[int, float]
Interval = tuple[Endpoint, Endpoint]


class AtomElem(NamedTuple):
    """Element ``index`` of the infinite stream named ``atom``."""

    atom: str
    index: int


Token = Union[int, AtomElem]


def canonical_key(token: Token) -> tuple:
    """Sort key realizing the universe order (round, then slot within round)."""
    if isinstance(token, AtomElem):
        return (token.index, 2, token.atom)
    return (abs(token), 0 if token >= 0 else 1, "")


def script_key(token: Token) -> tuple:
    """Sort key realizing the script order: all integers, then atoms by id."""
    if isinstance(token, AtomElem):
        return (1, 0, token.atom, token.index)
    return (0, abs(token), 0 if token >= 0 else 1, "")


@dataclass(frozen=True)
class AtomPart:
    """Slice of one atom stream: the listed indices, or everything but them."""

    cofinite: bool
    indices: frozenset[int]

    def member(self, index: int) -> bool:
        return (index not in self.indices) if self.cofinite else (index in self.indices)

    def is_empty(self) -> bool:
        return not self.cofinite and not self.indices

    def least(self) -> Optional[int]:
        if self.cofinite:
            k = 0
            while k in self.indices:
                k += 1
            return k
        return min(self.indices) if self.indices else None


_EMPTY_PART = AtomPart(False, frozenset())
FULL_PART = AtomPart(True, frozenset())


def _part_intersect(a: AtomPart, b: AtomPart) -> AtomPart:
    if a.cofinite and b.cofinite:
        return AtomPart(True, a.indices | b.indices)
    if a.cofinite:
        return AtomPart(False, b.indices - a.indices)
    if b.cofinite:
        return AtomPart(False, a.indices - b.indices)
    return AtomPart(False, a.indices & b.indices)


def _part_union(a: AtomPart, b: AtomPart) -> AtomPart:
    if a.cofinite and b.cofinite:
        return AtomPart(True, a.indices & b.indices)
    if a.cofinite:
        return AtomPart(True, a.indices - b.indices)
    if b.cofinite:
        return AtomPart(True, b.indices - a.indices)
    return AtomPart(False, a.indices | b.indices)


def _part_complement(a: AtomPart) -> AtomPart:
    return AtomPart(not a.cofinite, a.indices)


def _check_endpoint(v) -> Endpoint:
    if isinstance(v, bool):
        raise SchemaError(f"invalid interval endpoint {v!r}")
    if isinstance(v, int):
        return v
    if v == NEG_INF or v == POS_INF:
        return v
    raise SchemaError(f"invalid interval endpoint {v!r}")


def normalize_intervals(pairs: Iterable[Interval]) -> tuple[Interval, ...]:
    """Sort, validate and merge overlapping or adjacent closed intervals."""
    cleaned = []
    for lo, hi in pairs:
        lo, hi = _check_endpoint(lo), _check_endpoint(hi)
        if lo == POS_INF or hi == NEG_INF:
            raise SchemaError(f"invalid interval [{lo}, {hi}]")
        if lo > hi:
            raise SchemaError(f"empty interval [{lo}, {hi}]")
        cleaned.append((lo, hi))
    cleaned.sort()
    merged: list[Interval] = []
    for lo, hi in cleaned:
        if merged and lo <= merged[-1][1] + 1:
            prev_lo, prev_hi = merged[-1]
            merged[-1] = (prev_lo, max(prev_hi, hi))
        else:
            merged.append((lo, hi))
    return tuple(merged)


@dataclass(frozen=True)
class SetExpr:
    """Normal-form symbolic subset of the universe over a fixed atom registry."""

    registry: tuple[str, ...]
    intervals: tuple[Interval, ...]
    parts: tuple[tuple[str, AtomPart], ...]

    def part_for(self, atom: str) -> AtomPart:
        for name, part in self.parts:
            if name == atom:
                return part
        return _EMPTY_PART

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        bits = [f"[{lo},{hi}]" for lo, hi in self.intervals]
        for name, part in self.parts:
            tag = "-" if part.cofinite else "+"
            idx = ",".join(str(i) for i in sorted(part.indices))
            bits.append(f"{name}{tag}{{{idx}}}")
        return "SetExpr(" + (" ∪ ".join(bits) if bits else "∅") + ")"


def make_expr(
    registry: Sequence[str],
    intervals: Iterable[Interval] = (),
    atoms: Iterable[str] = (),
    atom_parts: Optional[Mapping[str, AtomPart]] = None,
) -> SetExpr:
    """Build a normalized expression.

    ``atoms`` lists atoms included as full streams; ``atom_parts`` gives
    explicit finite/cofinite slices and overrides ``atoms`` on conflict.
    """
    registry = tuple(registry)
    if len(set(registry)) != len(registry):
        raise SchemaError("duplicate atom ids in registry")
    parts: dict[str, AtomPart] = {a: FULL_PART for a in atoms}
    if atom_parts:
        parts.update(atom_parts)
    for name in parts:
        if name not in registry:
            raise RegistryMismatchError(f"atom {name!r} not in registry {registry}")
    kept = tuple(
        (name, part) for name, part in sorted(parts.items()) if not part.is_empty()
    )
    return SetExpr(registry, normalize_intervals(intervals), kept)


def universe(registry: Sequence[str]) -> SetExpr:
    return make_expr(registry, [(NEG_INF, POS_INF)], atoms=registry)


def empty(registry: Sequence[str]) -> SetExpr:
    return make_expr(registry)


def _check_registry(a: SetExpr, b: SetExpr) -> None:
    if a.registry != b.registry:
        raise RegistryMismatchError(f"registries differ: {a.registry} vs {b.registry}")


def member(expr: SetExpr, token: Token) -> bool:
    if isinstance(token, AtomElem):
        if token.atom not in expr.registry:
            raise RegistryMismatchError(f"atom {token.atom!r} not in registry")
        if token.index < 0:
            raise SchemaError(f"negative atom index {token.index}")
        return expr.part_for(token.atom).member(token.index)
    for lo, hi in expr.intervals:
        if lo > token:
            break
        if token <= hi:
            return True
    return False


def is_empty(expr: SetExpr) -> bool:
    return not expr.intervals and not expr.parts


def cardinality(expr: SetExpr) -> Optional[int]:
    """Exact size of the set, or ``None`` when it is infinite."""
    total = 0
    for lo, hi in expr.intervals:
        if lo == NEG_INF or hi == POS_INF:
            return None
        total += hi - lo + 1
    for _, part in expr.parts:
        if part.cofinite:
            return None
        total += len(part.indices)
    return total


def is_infinite(expr: SetExpr) -> bool:
    return cardinality(expr) is None


def intersect(a: SetExpr, b: SetExpr) -> SetExpr:
    _check_registry(a, b)
    out: list[Interval] = []
    i = j = 0
    while i < len(a.intervals) and j < len(b.intervals):
        lo = max(a.intervals[i][0], b.intervals[j][0])
        hi = min(a.intervals[i][1], b.intervals[j][1])
        if lo <= hi:
            out.append((lo, hi))
        if a.intervals[i][1] < b.intervals[j][1]:
            i += 1
        else:
            j += 1
    parts = {}
    for name, part in a.parts:
        joint = _part_intersect(part, b.part_for(name))
        if not joint.is_empty():
            parts[name] = joint
    return SetExpr(a.registry, tuple(out), tuple(sorted(parts.items())))


def union(a: SetExpr, b: SetExpr) -> SetExpr:
    _check_registry(a, b)
    parts = {}
    for name in {n for n, _ in a.parts} | {n for n, _ in b.parts}:
        joint = _part_union(a.part_for(name), b.part_for(name))
        if not joint.is_empty():
            parts[name] = joint
    return SetExpr(
        a.registry,
        normalize_intervals(a.intervals + b.intervals),
        tuple(sorted(parts.items())),
    )


def complement(expr: SetExpr) -> SetExpr:
    """Universe minus the set, relative to the expression's registry."""
    out: list[Interval] = []
    cursor: Endpoint = NEG_INF
    exhausted = False
    for lo, hi in expr.intervals:
        if lo != NEG_INF:
            out.append((cursor, lo - 1))
        if hi == POS_INF:
            exhausted = True
        else:
            cursor = hi + 1
    if not exhausted:
        out.append((cursor, POS_INF))
    parts = {}
    for name in expr.registry:
        flipped = _part_complement(expr.part_for(name))
        if not flipped.is_empty():
            parts[name] = flipped
    return SetExpr(expr.registry, tuple(out), tuple(sorted(parts.items())))


def _remove_ints(intervals: Sequence[Interval], removed: Sequence[int]) -> tuple[Interval, ...]:
    removed = sorted(set(removed))
    out: list[Interval] = []
    for lo, hi in intervals:
        cur = lo
        for v in removed:
            if v > hi:
                break
            if v < lo:
                continue
            if cur == NEG_INF or cur <= v - 1:
                out.append((cur, v - 1))
            cur = v + 1
        if cur == NEG_INF or cur <= hi:
            out.append((cur, hi))
    return tuple(out)


def subtract_finite(expr: SetExpr, tokens: Iterable[Token]) -> SetExpr:
    """Remove a finite token set from the expression."""
    ints: list[int] = []
    by_atom: dict[str, set[int]] = {}
    for tok in tokens:
        if isinstance(tok, AtomElem):
            if tok.atom not in expr.registry:
                raise RegistryMismatchError(f"atom {tok.atom!r} not in registry")
            by_atom.setdefault(tok.atom, set()).add(tok.index)
        else:
            ints.append(tok)
    parts = {}
    for name, part in expr.parts:
        gone = by_atom.get(name)
        if gone:
            if part.cofinite:
                part = AtomPart(True, part.indices | frozenset(gone))
            else:
                part = AtomPart(False, part.indices - frozenset(gone))
        if not part.is_empty():
            parts[name] = part
    return SetExpr(expr.registry, _remove_ints(expr.intervals, ints), tuple(sorted(parts.items())))


def violations(tokens: Iterable[Token], expr: SetExpr) -> int:
    """Number of tokens falling outside the set."""
    return sum(1 for tok in tokens if not member(expr, tok))


def least_new(expr: SetExpr, forbidden: Iterable[Token] = ()) -> Optional[Token]:
    """Smallest member (universe order) not in ``forbidden``; ``None`` if exhausted."""
    rest = subtract_finite(expr, forbidden)
    best: Optional[Token] = None
    best_key = None
    for lo, hi in rest.intervals:
        if lo <= 0 <= hi:
            cand: Token = 0
        elif lo > 0:
            cand = int(lo)
        else:
            cand = int(hi)
        key = canonical_key(cand)
        if best_key is None or key < best_key:
            best, best_key = cand, key
    for name, part in rest.parts:
        k = part.least()
        if k is None:
            continue
        cand = AtomElem(name, k)
        key = canonical_key(cand)
        if best_key is None or key < best_key:
            best, best_key = cand, key
    return best


def iter_members(expr: SetExpr) -> Iterator[Token]:
    """Yield members in script order.

    When the integer part is unbounded the atom phase is never reached; callers
    truncate by horizon.
    """
    if expr.intervals:
        bounded = all(lo != NEG_INF and hi != POS_INF for lo, hi in expr.intervals)
        limit = (
            max(max(abs(lo), abs(hi)) for lo, hi in expr.intervals) if bounded else None
        )
        r = 0
        while limit is None or r <= limit:
            if member(expr, r):
                yield r
            if r > 0 and member(expr, -r):
                yield -r
            r += 1
    for name, part in expr.parts:
        if part.cofinite:
            k = 0
            while True:
                if k not in part.indices:
                    yield AtomElem(name, k)
                k += 1
        else:
            for k in sorted(part.indices):
                yield AtomElem(name, k)


def finite_tokens(expr: SetExpr) -> tuple[Token, ...]:
    """All members of a finite set, in script order."""
    if cardinality(expr) is None:
        raise ValueError("finite_tokens called on an infinite set")
    return tuple(iter_members(expr))
