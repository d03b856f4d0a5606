"""Invariant suite: every checkable structural claim, re-run on demand.

Each check returns an :class:`InvariantResult`; the CLI ``verify`` command and
the test suite both drive these.  The suite also contains its own mutation
self-test: a deliberately broken table builder (slide comparison ``>=``
instead of ``>``) must be caught by at least one check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import adversary, harness
from .collection import Collection, baseline_times, closure_dimension, cp_complexity, max_finite_intersection
from .errors import NoAttackError
from .generators import NoisyGenerator, ParetoGenerator, RepresentativeGenerator
from .oracle import (
    exhaustive_noisy_witness,
    exhaustive_scarce_witness,
    random_collection,
    replay_plain_table,
)
from .procedures import (
    ComplexityTable,
    GroupPartition,
    NoisyTableBuilder,
    PlainTableBuilder,
    ReprTableBuilder,
    TableEntry,
    best_noisy_witness,
    best_scarce_witness,
    schedule_from_table,
    validate_partition,
)
from .setalg import cardinality, intersect, is_empty


@dataclass(frozen=True)
class InvariantResult:
    name: str
    passed: bool
    detail: str = ""


def _result(name: str, failures: list[str]) -> InvariantResult:
    if failures:
        return InvariantResult(name, False, "; ".join(failures[:4]))
    return InvariantResult(name, True)


def _ordering_monotone(entries: Sequence[TableEntry], history: Sequence[tuple[int, ...]]) -> list[str]:
    failures = []
    for it, ordering in enumerate(history, start=1):
        values = [entries[p].mstar for p in ordering]
        if any(b < a for a, b in zip(values, values[1:])):
            failures.append(f"iteration {it}: stored values along ordering not non-decreasing: {values}")
    return failures


def _witness_structure(col: Collection, entries: Sequence[TableEntry], setting: str) -> list[str]:
    """Nonempty witnesses contain their own cell; distinct members have smaller values.

    Plain and noisy witnesses additionally must contain a distinct language
    (a finite intersection needs one).  Representative witnesses need not: a
    single language whose intersection has a finite group slice can suffer
    scarcity on its own, already at the first iteration.
    """
    failures = []
    by_cell = {(e.level, e.index): e for e in entries}
    for entry in entries:
        if not entry.witness:
            continue
        own_expr = col.languages[entry.index - 1]
        if setting == "noisy":
            members = [(lvl, idx) for lvl, idx in entry.witness]
            if (entry.level, entry.index) not in members:
                failures.append(f"cell {(entry.level, entry.index)}: witness misses its own cell")
            distinct = [c for c in members if col.languages[c[1] - 1] != own_expr]
        else:
            if entry.index not in entry.witness:
                failures.append(f"language {entry.index}: witness misses its own index")
            distinct = [i for i in entry.witness if col.languages[i - 1] != own_expr]
        if not distinct and setting != "representative":
            failures.append(f"entry {entry.index}: no distinct earlier language in witness")
            continue
        for other in distinct:
            stored = by_cell[other] if setting == "noisy" else by_cell[(None, other)]
            if stored.mstar >= entry.mstar:
                failures.append(
                    f"entry {entry.index}: witness member {other} has value {stored.mstar} >= {entry.mstar}"
                )
    return failures


def _argmax_maintained_plain(col: Collection, entries, history) -> list[str]:
    failures = []
    for it, ordering in enumerate(history, start=1):
        prefix = [col.languages[p] for p in ordering]
        for k, p in enumerate(ordering, start=1):
            recomputed = max_finite_intersection(prefix[:k], k, bound=len(prefix)).m
            if recomputed != entries[p].mstar:
                failures.append(
                    f"iteration {it}, position {k}: recomputed {recomputed} != stored {entries[p].mstar}"
                )
    return failures


def plain_invariants(
    col: Collection,
    prefix: Optional[int] = None,
    with_simulations: bool = True,
    with_oracle: bool = True,
) -> list[InvariantResult]:
    n = len(col.languages) if prefix is None else min(prefix, len(col.languages))
    sub = col.prefix(n)
    builder = PlainTableBuilder(sub, capacity=None)
    builder.extend_to(n)
    table = builder.snapshot()
    results = []

    dims = [closure_dimension(sub.languages[:i]) for i in range(1, n + 1)]
    results.append(
        _result(
            "closure-dim-monotone",
            [f"{dims}" ] if any(b < a for a, b in zip(dims, dims[1:])) else [],
        )
    )
    bad = [
        f"language {i}: m={m} > d={d}"
        for i, (m, d) in enumerate(
            ((cp_complexity(sub, i), dims[i - 1]) for i in range(1, n + 1)), start=1
        )
        if m > d
    ]
    results.append(_result("complexity-le-closure-dim", bad))
    first = baseline_times(sub, "prefix")[0] if n else 1
    results.append(_result("baseline-first-position", [] if first == 1 else [f"got {first}"]))
    results.append(_result("table-ordering-monotone", _ordering_monotone(builder.entries, builder.ordering_history)))
    results.append(_result("witness-structure", _witness_structure(sub, builder.entries, "plain")))
    results.append(_result("argmax-maintained", _argmax_maintained_plain(sub, builder.entries, builder.ordering_history)))

    if with_oracle and n <= 10:
        replay = replay_plain_table(sub, n)
        mismatch = []
        if replay.ordering != table.ordering:
            mismatch.append(f"ordering {replay.ordering} != {table.ordering}")
        for a, b in zip(replay.entries, table.entries):
            if (a.mstar, a.witness, a.witness_tokens) != (b.mstar, b.witness, b.witness_tokens):
                mismatch.append(f"entry {a.index}: {a.mstar}/{a.witness} != {b.mstar}/{b.witness}")
        results.append(_result("oracle-table-equivalence", mismatch))

    if with_simulations and n:
        schedule = schedule_from_table(table)
        failures = []
        for i in range(1, n + 1):
            bound = harness.theoretical_bound(table, schedule, i)
            horizon = harness.default_horizon(bound, n)
            scripts = [adversary.canonical_script(sub, i, horizon)]
            if table.entries[i - 1].mstar > 0:
                scripts.append(adversary.intersection_first_script(sub, table, i, horizon))
            for script in scripts:
                report = harness.simulate(ParetoGenerator(sub, schedule), script, sub, bound=bound)
                if not report.passed:
                    failures.append(
                        f"target {i}: first stable {report.first_stable} > bound {bound}"
                    )
        results.append(_result("generation-validity", failures))
    return results


def _argmax_maintained_noisy(builder: NoisyTableBuilder) -> list[str]:
    failures = []
    for it, ordering in enumerate(builder.ordering_history, start=1):
        prefix = [builder.cells[p] for p in ordering]
        for k, p in enumerate(ordering, start=1):
            recomputed = best_noisy_witness(prefix[:k], k).m
            if recomputed != builder.entries[p].mstar:
                failures.append(
                    f"iteration {it}, position {k}: recomputed {recomputed} != stored {builder.entries[p].mstar}"
                )
    return failures


def noisy_invariants(
    col: Collection, max_position: int, with_simulations: bool = True, with_oracle: bool = True
) -> list[InvariantResult]:
    builder = NoisyTableBuilder(col, capacity=None)
    builder.extend_to_position(max_position)
    table = builder.snapshot()
    results = []
    results.append(_result("table-ordering-monotone", _ordering_monotone(builder.entries, builder.ordering_history)))
    results.append(_result("witness-structure", _witness_structure(col, builder.entries, "noisy")))
    results.append(_result("argmax-maintained", _argmax_maintained_noisy(builder)))

    bound_failures = []
    for l, entry in enumerate(builder.entries, start=1):
        cells = builder.cells[:l]
        a_star = max(lvl for lvl, _, _ in cells)
        langs, seen = [], set()
        own_pos = None
        for _, idx, expr in cells:
            if idx not in seen:
                seen.add(idx)
                langs.append(expr)
            if idx == entry.index and own_pos is None:
                own_pos = len(langs)
        d_star = max_finite_intersection(langs, own_pos, bound=len(langs)).m
        if entry.mstar > d_star + l * a_star:
            bound_failures.append(
                f"cell {(entry.level, entry.index)}: {entry.mstar} > {d_star} + {l}*{a_star}"
            )
    results.append(_result("noisy-witness-bound", bound_failures))

    if with_oracle and len(builder.cells) <= 6:
        mismatches = []
        prefix = [builder.cells[p] for p in builder.ordering]
        for k, p in enumerate(builder.ordering, start=1):
            exhaustive = exhaustive_noisy_witness(prefix[:k], k)
            if exhaustive != builder.entries[p].mstar:
                mismatches.append(
                    f"position {k}: exhaustive {exhaustive} != stored {builder.entries[p].mstar}"
                )
        results.append(_result("noisy-witness-oracle", mismatches))

    if with_simulations:
        schedule = schedule_from_table(table)
        failures = []
        for entry in builder.entries:
            bound = harness.theoretical_bound(table, schedule, entry.index, entry.level)
            horizon = harness.default_horizon(bound, len(builder.entries))
            scripts = [
                adversary.Script(
                    adversary.canonical_enumeration(col.languages[entry.index - 1], horizon),
                    entry.index,
                    entry.level,
                )
            ]
            if entry.mstar > 0:
                scripts.append(
                    adversary.intersection_first_script(col, table, entry.index, horizon, entry.level)
                )
            for script in scripts:
                report = harness.simulate(NoisyGenerator(col, schedule), script, col, bound=bound)
                if not report.passed:
                    failures.append(
                        f"cell {(entry.level, entry.index)}: first stable {report.first_stable} > bound {bound}"
                    )
        results.append(_result("noisy-validity", failures))
    return results


def _argmax_maintained_repr(builder: ReprTableBuilder) -> list[str]:
    failures = []
    for it, ordering in enumerate(builder.ordering_history, start=1):
        prefix = [builder.col.languages[p] for p in ordering]
        for k, p in enumerate(ordering, start=1):
            recomputed = best_scarce_witness(prefix[:k], k, builder.partition, builder.alpha).m
            if recomputed != builder.entries[p].mstar:
                failures.append(
                    f"iteration {it}, position {k}: recomputed {recomputed} != stored {builder.entries[p].mstar}"
                )
    return failures


def repr_invariants(
    col: Collection,
    partition: GroupPartition,
    alpha: Fraction,
    with_simulations: bool = True,
    with_oracle: bool = True,
) -> list[InvariantResult]:
    results = []
    try:
        validate_partition(partition, col.registry)
        results.append(InvariantResult("partition-valid", True))
    except Exception as exc:  # surfaced as a failed check, not a crash
        results.append(InvariantResult("partition-valid", False, str(exc)))
        return results
    builder = ReprTableBuilder(col, partition, alpha, capacity=None)
    builder.extend_to(len(col.languages))
    table = builder.snapshot()
    results.append(_result("table-ordering-monotone", _ordering_monotone(builder.entries, builder.ordering_history)))
    results.append(_result("witness-structure", _witness_structure(col, builder.entries, "representative")))
    results.append(_result("argmax-maintained", _argmax_maintained_repr(builder)))

    bound_failures = []
    for entry in builder.entries:
        if not entry.witness:
            continue
        inter = col.languages[entry.witness[0] - 1]
        for idx in entry.witness[1:]:
            inter = intersect(inter, col.languages[idx - 1])
        finite_counts = [
            c
            for c in (cardinality(intersect(g, inter)) for g in partition.groups)
            if c is not None
        ]
        p = max(finite_counts, default=0)
        if entry.mstar > partition.K * p / alpha:
            bound_failures.append(
                f"language {entry.index}: {entry.mstar} > {partition.K}*{p}/{alpha}"
            )
    results.append(_result("repr-witness-bound", bound_failures))

    if with_oracle and len(col.languages) <= 4:
        mismatches = []
        prefix = [col.languages[p] for p in builder.ordering]
        for k, p in enumerate(builder.ordering, start=1):
            exhaustive = exhaustive_scarce_witness(prefix[:k], k, partition, alpha)
            if exhaustive != builder.entries[p].mstar:
                mismatches.append(
                    f"position {k}: exhaustive {exhaustive} != stored {builder.entries[p].mstar}"
                )
        results.append(_result("repr-witness-oracle", mismatches))

    if with_simulations:
        schedule = schedule_from_table(table)
        validity_failures = []
        alpha_failures = []
        for entry in builder.entries:
            bound = harness.theoretical_bound(table, schedule, entry.index)
            horizon = harness.default_horizon(bound, len(col.languages))
            scripts = [adversary.canonical_script(col, entry.index, horizon)]
            if entry.mstar > 0:
                scripts.append(adversary.representative_script(col, table, entry.index, horizon))
            for script in scripts:
                gen = RepresentativeGenerator(col, partition, alpha, schedule)
                report = harness.simulate(
                    gen, script, col, partition=partition, alpha=alpha, bound=bound
                )
                if report.first_stable > bound:
                    validity_failures.append(
                        f"target {entry.index}: first stable {report.first_stable} > bound {bound}"
                    )
                if not report.alpha_ok:
                    worst = max(s.linf for s in report.steps if s.linf is not None)
                    alpha_failures.append(f"target {entry.index}: linf reached {worst}")
        results.append(_result("repr-validity", validity_failures))
        results.append(_result("alpha-representation", alpha_failures))
    return results


# ---------------------------------------------------------------------------
# randomized sweeps and the verifier's own self-test


def _interaction_free(col: Collection, a: int) -> bool:
    inter = intersect(col.languages[a - 1], col.languages[a])
    return is_empty(inter) or cardinality(inter) is None


def random_sweep(seed_start: int, count: int, n_langs: int = 6) -> list[InvariantResult]:
    """Oracle equivalence and swap invariance over seeded random collections."""
    equivalence_failures = []
    swap_failures = []
    for seed in range(seed_start, seed_start + count):
        col = random_collection(seed, n_langs)
        builder = PlainTableBuilder(col, capacity=None)
        builder.extend_to(len(col.languages))
        table = builder.snapshot()
        replay = replay_plain_table(col)
        if [e.mstar for e in replay.entries] != [e.mstar for e in table.entries] or replay.ordering != table.ordering:
            equivalence_failures.append(f"seed {seed}")
        for a in range(1, len(col.languages)):
            if _interaction_free(col, a):
                order = list(range(1, len(col.languages) + 1))
                order[a - 1], order[a] = order[a], order[a - 1]
                swapped = col.reordered(order)
                swapped_table = replay_plain_table(swapped)
                by_lang = {}
                for pos, entry in enumerate(swapped_table.entries, start=1):
                    by_lang[order[pos - 1]] = entry.mstar
                original = {i + 1: e.mstar for i, e in enumerate(table.entries)}
                if by_lang != original:
                    swap_failures.append(f"seed {seed} swap at {a}")
                break
    return [
        _result("oracle-equivalence-sweep", equivalence_failures),
        _result("swap-invariance-sweep", swap_failures),
    ]


def _mutated_plain_table(col: Collection, n: int):
    """Broken on purpose: the slide stops on >= instead of >. Self-test fixture."""
    entries: list[TableEntry] = []
    order: list[int] = []
    history = []
    for i in range(1, n + 1):
        order.append(i - 1)
        j = len(order)
        while True:
            prefix = [col.languages[p] for p in order[:j]]
            wit = max_finite_intersection(prefix, j, bound=len(prefix))
            if j <= 1 or wit.m >= entries[order[j - 2]].mstar:  # the planted bug
                break
            order[j - 1], order[j - 2] = order[j - 2], order[j - 1]
            j -= 1
        witness = tuple(sorted(order[p - 1] + 1 for p in wit.witness))
        entries.append(TableEntry(i, None, i, wit.m, witness, ()))
        history.append(tuple(order))
    return entries, history


def self_test(col: Collection) -> InvariantResult:
    """The suite must flag the planted break-rule mutation on this collection."""
    entries, history = _mutated_plain_table(col, len(col.languages))
    caught = bool(
        _ordering_monotone(entries, history)
        or _witness_structure(col, entries, "plain")
        or _argmax_maintained_plain(col, entries, history)
    )
    return InvariantResult("verifier-self-test", caught, "" if caught else "mutant not detected")
