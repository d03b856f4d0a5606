"""Collections of infinite languages, baseline guarantees and subcollection search.

A collection is an ordered, finite prefix of declared languages over a shared
atom registry.  The JSON document schema is::

    {
      "atoms": ["p1", "p2", ...],
      "lrt_limit": {"kind": "finite", "c": 100} | {"kind": "divergent"},
      "languages": [
        {"name": "L1", "intervals": [[1, 100], [200, "inf"]], "atoms": ["p1"]},
        ...
      ]
    }

Unbounded endpoints are encoded as the strings ``"inf"`` / ``"-inf"``.
Duplicate languages at distinct indices are allowed; finite languages are
rejected.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple, Optional, Sequence

from . import setalg
from .errors import CapacityError, FiniteLanguageError, SchemaError
from .setalg import NEG_INF, POS_INF, SetExpr, cardinality, intersect

MAX_SEARCH_PREFIX = 20


@dataclass(frozen=True)
class Collection:
    """Ordered finite prefix of infinite languages over one atom registry."""

    registry: tuple[str, ...]
    languages: tuple[SetExpr, ...]
    names: tuple[str, ...]
    lrt_limit: Optional[int] = None  # None: divergent regime; int: finite limit

    def __len__(self) -> int:
        return len(self.languages)

    def prefix(self, n: int) -> "Collection":
        return replace(self, languages=self.languages[:n], names=self.names[:n])

    def reordered(self, order: Sequence[int]) -> "Collection":
        """Same languages rearranged; ``order`` is a permutation of 1..n."""
        if sorted(order) != list(range(1, len(self.languages) + 1)):
            raise SchemaError(f"not a permutation of 1..{len(self.languages)}: {order}")
        return replace(
            self,
            languages=tuple(self.languages[i - 1] for i in order),
            names=tuple(self.names[i - 1] for i in order),
        )


class WitnessResult(NamedTuple):
    """Best finite-intersection size and the realizing index set (empty if none)."""

    m: int
    witness: tuple[int, ...]


def _decode_endpoint(v):
    if v == "inf":
        return POS_INF
    if v == "-inf":
        return NEG_INF
    if isinstance(v, int) and not isinstance(v, bool):
        return v
    raise SchemaError(f"bad interval endpoint {v!r}")


def _encode_endpoint(v):
    if v == POS_INF:
        return "inf"
    if v == NEG_INF:
        return "-inf"
    return v


def load_collection(doc: dict) -> Collection:
    """Parse and validate a collection document."""
    if not isinstance(doc, dict):
        raise SchemaError("collection document must be an object")
    atoms = doc.get("atoms", [])
    if not isinstance(atoms, list) or not all(isinstance(a, str) for a in atoms):
        raise SchemaError('"atoms" must be a list of strings')
    registry = tuple(atoms)

    limit_doc = doc.get("lrt_limit", {"kind": "divergent"})
    if not isinstance(limit_doc, dict) or "kind" not in limit_doc:
        raise SchemaError('"lrt_limit" must be {"kind": ...}')
    if limit_doc["kind"] == "divergent":
        lrt_limit = None
    elif limit_doc["kind"] == "finite":
        c = limit_doc.get("c")
        if not isinstance(c, int) or isinstance(c, bool) or c < 0:
            raise SchemaError('finite "lrt_limit" needs a non-negative integer "c"')
        lrt_limit = c
    else:
        raise SchemaError(f'unknown lrt_limit kind {limit_doc["kind"]!r}')

    langs_doc = doc.get("languages")
    if not isinstance(langs_doc, list):
        raise SchemaError('"languages" must be a list')
    languages: list[SetExpr] = []
    names: list[str] = []
    for pos, entry in enumerate(langs_doc, start=1):
        if not isinstance(entry, dict):
            raise SchemaError(f"language #{pos} must be an object")
        name = entry.get("name", f"L{pos}")
        intervals = [
            (_decode_endpoint(lo), _decode_endpoint(hi))
            for lo, hi in entry.get("intervals", [])
        ]
        expr = setalg.make_expr(registry, intervals, atoms=entry.get("atoms", []))
        if cardinality(expr) is not None:
            raise FiniteLanguageError(f"language #{pos} ({name}) is finite")
        languages.append(expr)
        names.append(name)
    return Collection(registry, tuple(languages), tuple(names), lrt_limit)


def collection_to_doc(col: Collection) -> dict:
    """Inverse of :func:`load_collection` (only full atom streams are emitted)."""
    langs = []
    for expr, name in zip(col.languages, col.names):
        atoms = []
        for atom, part in expr.parts:
            if not (part.cofinite and not part.indices):
                raise SchemaError("only full atom streams are representable in documents")
            atoms.append(atom)
        langs.append(
            {
                "name": name,
                "intervals": [[_encode_endpoint(lo), _encode_endpoint(hi)] for lo, hi in expr.intervals],
                "atoms": atoms,
            }
        )
    limit = {"kind": "divergent"} if col.lrt_limit is None else {"kind": "finite", "c": col.lrt_limit}
    return {"atoms": list(col.registry), "lrt_limit": limit, "languages": langs}


def max_finite_intersection(
    langs: Sequence[SetExpr], must_include: int, bound: int = MAX_SEARCH_PREFIX
) -> WitnessResult:
    """Largest finite intersection over subcollections containing ``must_include``.

    Indices are 1-based.  Ties are broken toward the lexicographically smallest
    sorted index tuple.  The returned witness is empty iff no subcollection
    containing the required index has a finite intersection.
    """
    n = len(langs)
    if n > bound:
        raise CapacityError(f"prefix of {n} languages exceeds search bound {bound}")
    if not 1 <= must_include <= n:
        raise IndexError(f"must_include {must_include} out of range 1..{n}")
    base = langs[must_include - 1]

    others: list[int] = []
    seen = [base]
    for idx in range(1, n + 1):
        if idx == must_include:
            continue
        expr = langs[idx - 1]
        if any(expr == s for s in seen):
            continue  # a duplicate can never change an intersection
        seen.append(expr)
        others.append(idx)

    best_m = -1
    best_wit: tuple[int, ...] = ()

    def record(m: int, chosen: list[int]) -> None:
        nonlocal best_m, best_wit
        wit = tuple(sorted([must_include] + chosen))
        if m > best_m or (m == best_m and wit < best_wit):
            best_m, best_wit = m, wit

    def grow(pos: int, expr: SetExpr, chosen: list[int]) -> None:
        card = cardinality(expr)
        if card is not None:
            record(card, chosen)  # supersets can only shrink a finite intersection
            return
        for k in range(pos, len(others)):
            chosen.append(others[k])
            grow(k + 1, intersect(expr, langs[others[k] - 1]), chosen)
            chosen.pop()

    grow(0, base, [])
    if best_m < 0:
        return WitnessResult(0, ())
    return WitnessResult(best_m, best_wit)


def closure_dimension(langs: Sequence[SetExpr], bound: int = MAX_SEARCH_PREFIX) -> int:
    """Largest finite intersection size over subcollections; 0 when none exists."""
    if len(langs) > bound:
        raise CapacityError(f"prefix of {len(langs)} languages exceeds search bound {bound}")
    distinct: list[SetExpr] = []
    for expr in langs:
        if not any(expr == s for s in distinct):
            distinct.append(expr)
    best = 0

    def grow(pos: int, expr: SetExpr) -> None:
        nonlocal best
        card = cardinality(expr)
        if card is not None:
            best = max(best, card)
            return
        for k in range(pos, len(distinct)):
            grow(k + 1, intersect(expr, distinct[k]))

    for i, expr in enumerate(distinct):
        grow(i + 1, expr)
    return best


def cp_complexity(col: Collection, i: int, bound: int = MAX_SEARCH_PREFIX) -> int:
    """Best finite intersection over prefix subcollections containing language ``i``."""
    if not 1 <= i <= len(col.languages):
        raise IndexError(f"index {i} out of range 1..{len(col.languages)}")
    return max_finite_intersection(col.languages[:i], i, bound).m


def baseline_times(col: Collection, which: str, bound: int = MAX_SEARCH_PREFIX) -> list[int]:
    """Per-language guaranteed generation times of the two prior algorithms.

    ``which = "closure"``: the closure-dimension guarantee, ``d_i + 1`` per
    prefix in the divergent regime, ``max(i, c + 1)`` when the declared limit
    is finite ``c``.  ``which = "prefix"``: the prefix-complexity guarantee
    ``max(i, m(L_i) + 1)``.
    """
    n = len(col.languages)
    if which == "closure":
        if col.lrt_limit is None:
            return [closure_dimension(col.languages[:i], bound) + 1 for i in range(1, n + 1)]
        c = col.lrt_limit
        return [max(i, c + 1) for i in range(1, n + 1)]
    if which == "prefix":
        return [max(i, cp_complexity(col, i, bound) + 1) for i in range(1, n + 1)]
    raise ValueError(f"unknown baseline {which!r}")
