"""Desk-scale test collections and partitions used across the CLI docs and tests."""

from __future__ import annotations

from .collection import Collection
from .procedures import GroupPartition
from .setalg import NEG_INF, POS_INF, make_expr


def block_overlap_collection() -> Collection:
    """Eight languages over shared integer blocks plus per-language streams.

    The first block [1, 100] sits inside languages 1 and 2; language 2 spans
    three blocks and overlaps languages 3 and 4 in one block each; languages
    5-8 are pure streams.  The declared closure limit is 100.
    """
    registry = tuple(f"p{i}" for i in range(1, 9))
    specs = [
        ([(1, 100)], ["p1"]),
        ([(1, 300)], ["p2"]),
        ([(101, 200)], ["p3"]),
        ([(201, 300)], ["p4"]),
        ([], ["p5"]),
        ([], ["p6"]),
        ([], ["p7"]),
        ([], ["p8"]),
    ]
    languages = tuple(make_expr(registry, ivs, atoms=atoms) for ivs, atoms in specs)
    names = tuple(f"L{i}" for i in range(1, 9))
    return Collection(registry, languages, names, lrt_limit=100)


def reordered_block_overlap() -> Collection:
    """The same collection with language 2 moved after languages 3 and 4."""
    return block_overlap_collection().reordered([1, 3, 4, 2, 5, 6, 7, 8])


def singleton_collection() -> Collection:
    registry = ()
    return Collection(registry, (make_expr(registry, [(1, POS_INF)]),), ("L1",), None)


def duplicate_collection() -> Collection:
    """Two identical languages plus one finitely-overlapping third."""
    registry = ("s1",)
    ray = make_expr(registry, [(1, POS_INF)])
    small = make_expr(registry, [(1, 5)], atoms=["s1"])
    return Collection(registry, (ray, ray, small), ("L1", "L2", "L3"), None)


def two_language_noisy_collection() -> Collection:
    registry = ("s1",)
    languages = (
        make_expr(registry, [(1, POS_INF)]),
        make_expr(registry, [(1, 5)], atoms=["s1"]),
    )
    return Collection(registry, languages, ("L1", "L2"), None)


def two_language_repr_collection() -> Collection:
    registry = ("s1",)
    languages = (
        make_expr(registry, [(1, POS_INF)], atoms=["s1"]),
        make_expr(registry, [(1, 5)], atoms=["s1"]),
    )
    return Collection(registry, languages, ("L1", "L2"), None)


def integers_vs_stream_partition() -> GroupPartition:
    """Two groups over registry ("s1",): all integers, and the stream."""
    registry = ("s1",)
    return GroupPartition(
        (
            make_expr(registry, [(NEG_INF, POS_INF)]),
            make_expr(registry, atoms=["s1"]),
        ),
        ("ints", "s1"),
    )


def block_overlap_partition() -> GroupPartition:
    """Two groups over the block-overlap registry: non-negatives, and the rest."""
    registry = tuple(f"p{i}" for i in range(1, 9))
    return GroupPartition(
        (
            make_expr(registry, [(0, POS_INF)]),
            make_expr(registry, [(NEG_INF, -1)], atoms=registry),
        ),
        ("nonneg", "rest"),
    )


def point_complement_collection(values: list[int]) -> Collection:
    """Languages excluding one integer each: every finite intersection is infinite."""
    registry = ()
    languages = []
    for v in values:
        languages.append(make_expr(registry, [(NEG_INF, v - 1), (v + 1, POS_INF)]))
    names = tuple(f"Z minus {v}" for v in values)
    return Collection(registry, tuple(languages), names, None)


def capped_ray_collection(starts: list[int], block: tuple[int, int] = (1, 100)) -> Collection:
    """A fixed block plus one ray per language; closure dimension equals the block size."""
    registry = ()
    languages = tuple(make_expr(registry, [block, (e, POS_INF)]) for e in starts)
    names = tuple(f"block+ray {e}" for e in starts)
    return Collection(registry, tuple(languages), names, None)
