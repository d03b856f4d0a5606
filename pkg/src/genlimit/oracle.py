"""Independent brute-force recomputations used to cross-check the fast paths.

Everything here favors directness over speed: full bitmask enumerations, token
pools checked literally with :func:`setalg.violations`, and a literal replay
of the insertion sort.  None of it shares search logic with the optimized
implementations it is meant to confirm.
"""

from __future__ import annotations

import random
from enum import Enum
from fractions import Fraction
from itertools import combinations, islice
from typing import Optional, Sequence

from .collection import Collection
from .errors import CapacityError
from .procedures import ComplexityTable, GroupPartition, TableEntry, suffers_scarcity
from .setalg import (
    NEG_INF,
    POS_INF,
    SetExpr,
    Token,
    cardinality,
    complement,
    finite_tokens,
    intersect,
    is_empty,
    iter_members,
    make_expr,
    script_key,
    violations,
)

ORACLE_PREFIX_BOUND = 12


def _naive_best(langs: Sequence[SetExpr], must: int) -> tuple[int, tuple[int, ...]]:
    """Unpruned full-mask scan for the largest finite intersection containing ``must``.

    Masks holding two copies of one language are skipped (a duplicate never
    changes an intersection), which pins the witness tie-break to first
    occurrences, matching the production search.
    """
    n = len(langs)
    best_m, best_wit = -1, ()
    for mask in range(1 << n):
        if not mask >> (must - 1) & 1:
            continue
        picked = [i for i in range(n) if mask >> i & 1]
        if any(langs[a] == langs[b] for k, a in enumerate(picked) for b in picked[:k]):
            continue
        inter = langs[picked[0]]
        for i in picked[1:]:
            inter = intersect(inter, langs[i])
        card = cardinality(inter)
        if card is None:
            continue
        wit = tuple(i + 1 for i in picked)
        if card > best_m or (card == best_m and wit < best_wit):
            best_m, best_wit = card, wit
    if best_m < 0:
        return 0, ()
    return best_m, best_wit


def replay_plain_table(col: Collection, n: Optional[int] = None) -> ComplexityTable:
    """Literal plain-table replay, structurally independent of the builders."""
    count = len(col.languages) if n is None else n
    if count > ORACLE_PREFIX_BOUND:
        raise CapacityError(f"oracle replay limited to {ORACLE_PREFIX_BOUND} languages")
    entries: list[TableEntry] = []
    order: list[int] = []  # 0-based language positions
    for i in range(1, count + 1):
        order.append(i - 1)
        j = len(order)
        while True:
            prefix = [col.languages[p] for p in order[:j]]
            m, wit = _naive_best(prefix, j)
            if j <= 1 or m > entries[order[j - 2]].mstar:
                break
            order[j - 1], order[j - 2] = order[j - 2], order[j - 1]
            j -= 1
        witness = tuple(sorted(order[p - 1] + 1 for p in wit))
        if witness:
            inter = col.languages[witness[0] - 1]
            for idx in witness[1:]:
                inter = intersect(inter, col.languages[idx - 1])
            tokens = finite_tokens(inter)
        else:
            tokens = ()
        entries.append(TableEntry(i, None, i, m, witness, tokens))
    return ComplexityTable("plain", None, tuple(entries), tuple(order))


def exhaustive_noisy_witness(
    cells: Sequence[tuple[int, int, SetExpr]], j: int, pool_slack: int = 2
) -> int:
    """Largest noisy witness size via direct token-set enumeration.

    For every cell subset containing position ``j`` with finite language
    intersection, candidate extra tokens are drawn per violation pattern
    (a few more than any budget could use) and all sub-multisets are checked
    literally for budgeted containment against every member.
    """
    n = len(cells)
    if n > 8:
        raise CapacityError("noisy oracle limited to 8 cells")
    best = 0
    for mask in range(1 << (j - 1)):
        members = [cells[k] for k in range(j - 1) if mask >> k & 1] + [cells[j - 1]]
        inter = members[0][2]
        for _, _, expr in members[1:]:
            inter = intersect(inter, expr)
        if cardinality(inter) is None:
            continue
        base = list(finite_tokens(inter))
        budget_sum = sum(level for level, _, _ in members)
        pool: list[Token] = []
        for vmask in range(1, 1 << len(members)):
            region = None
            for pos, (_, _, expr) in enumerate(members):
                piece = complement(expr) if vmask >> pos & 1 else expr
                region = piece if region is None else intersect(region, piece)
            if is_empty(region):
                continue
            pool.extend(islice(iter_members(region), budget_sum + pool_slack))
        pool = [tok for tok in pool if tok not in set(base)]
        for size in range(min(budget_sum, len(pool)) + 1):
            for extras in combinations(pool, size):
                tokens = base + list(extras)
                if all(
                    violations(tokens, expr) <= level for level, _, expr in members
                ):
                    best = max(best, len(tokens))
    return best


def exhaustive_scarce_witness(
    langs: Sequence[SetExpr],
    j: int,
    partition: GroupPartition,
    alpha: Fraction,
    size_cap: int = 40,
) -> int:
    """Largest scarcity-suffering witness size via direct per-group count search."""
    if len(langs) > 8:
        raise CapacityError("representative oracle limited to 8 languages")
    best = 0
    for mask in range(1 << (j - 1)):
        members = [langs[k] for k in range(j - 1) if mask >> k & 1] + [langs[j - 1]]
        inter = members[0]
        for expr in members[1:]:
            inter = intersect(inter, expr)
        slices = [intersect(expr, inter) for expr in partition.groups]
        caps = [cardinality(s) for s in slices]

        def grow(g: int, chosen: list[list[Token]]) -> None:
            nonlocal best
            if g == partition.K:
                tokens = [tok for group in chosen for tok in group]
                if tokens and suffers_scarcity(tokens, inter, partition, alpha):
                    best = max(best, len(tokens))
                return
            limit = size_cap if caps[g] is None else min(caps[g], size_cap)
            prefix = list(islice(iter_members(slices[g]), limit))
            for take in range(len(prefix) + 1):
                chosen.append(prefix[:take])
                grow(g + 1, chosen)
                chosen.pop()

        grow(0, [])
    return best


class Dominance(Enum):
    EQUAL = "equal"
    DOMINATES = "dominates"
    DOMINATED_BY = "dominated-by"
    INCOMPARABLE = "incomparable"


def dominance(a: Sequence[int], b: Sequence[int]) -> Dominance:
    """Pointwise comparison of two aligned generation-time sequences."""
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    if list(a) == list(b):
        return Dominance.EQUAL
    if all(x <= y for x, y in zip(a, b)):
        return Dominance.DOMINATES
    if all(x >= y for x, y in zip(a, b)):
        return Dominance.DOMINATED_BY
    return Dominance.INCOMPARABLE


RANDOM_REGISTRY = ("s1", "s2", "s3", "s4", "s5")


def random_collection(seed: int, n_langs: int = 6) -> Collection:
    """Reproducible random collection: interval unions plus atom streams.

    Languages draw 1-3 intervals from the window [-20, 40] and 0-2 atoms from
    a 5-atom registry; each language keeps at least one unbounded ray or one
    atom so it stays infinite.
    """
    rng = random.Random(seed)
    registry = RANDOM_REGISTRY
    languages, names = [], []
    for i in range(1, n_langs + 1):
        intervals = []
        for _ in range(rng.randint(1, 3)):
            lo = rng.randint(-20, 40)
            hi = lo + rng.randint(0, 12)
            intervals.append((lo, hi))
        atoms = rng.sample(registry, rng.randint(0, 2))
        if not atoms and rng.random() < 0.5:
            atoms = [rng.choice(registry)]
        if not atoms:
            lo = rng.randint(-20, 40)
            intervals.append((lo, POS_INF) if rng.random() < 0.5 else (NEG_INF, lo))
        languages.append(make_expr(registry, intervals, atoms=atoms))
        names.append(f"R{i}")
    return Collection(registry, tuple(languages), tuple(names), None)
