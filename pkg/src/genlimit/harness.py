"""Simulation driver, baseline comparison sweep, and report (de)serialization.

A simulation feeds a script to a generator step by step and records, per step,
the distinct-input count, the output, and whether the output is valid for the
script's target (a fresh member of the target language; for distributions,
full support on fresh members plus the exact group-distance value).  The
first-stable time is the least distinct-input count from which every recorded
step is valid.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Optional, Sequence, Union

from .adversary import Script
from .collection import Collection, baseline_times
from .errors import CapacityError, SchemaError
from .generators import Distribution, empirical_distribution, group_masses, linf_group_distance
from .oracle import Dominance, dominance
from .procedures import (
    ComplexityTable,
    GroupPartition,
    Schedule,
    TableEntry,
    plain_table,
)
from .setalg import NEG_INF, POS_INF, AtomElem, SetExpr, Token, cardinality, intersect, member


@dataclass(frozen=True)
class StepRecord:
    t: int
    token: Token
    distinct: int
    output: Union[Token, tuple[tuple[Token, Fraction], ...]]
    valid: bool
    linf: Optional[Fraction] = None


@dataclass(frozen=True)
class SimReport:
    setting: str
    target: int
    noise_level: int
    horizon: int
    bound: Optional[int]
    first_stable: int
    steps: tuple[StepRecord, ...]
    alpha: Optional[Fraction] = None
    alpha_ok: Optional[bool] = None  # representative runs: linf <= alpha at every step

    @property
    def passed(self) -> bool:
        ok = self.bound is None or self.first_stable <= self.bound
        if self.alpha_ok is not None:
            ok = ok and self.alpha_ok
        return ok


def theoretical_bound(table: ComplexityTable, schedule: Schedule, target: int, level: Optional[int] = None) -> int:
    """max(g(position), stored value + 1) for the targeted cell."""
    entry = table.entry_for(target, level)
    return max(schedule.start_time(entry.position), entry.mstar + 1)


def simulate(
    generator,
    script: Script,
    col: Collection,
    *,
    partition: Optional[GroupPartition] = None,
    alpha: Optional[Fraction] = None,
    bound: Optional[int] = None,
) -> SimReport:
    target_lang = col.languages[script.target - 1]
    seen: set[Token] = set()
    seen_list: list[Token] = []
    steps: list[StepRecord] = []
    worst_invalid = 0
    alpha_ok = True if alpha is not None else None
    for t, token in enumerate(script.tokens, start=1):
        if token not in seen:
            seen.add(token)
            seen_list.append(token)
        out = generator.step(token)
        linf = None
        if isinstance(out, dict):
            assert sum(out.values()) == 1, "distribution masses must sum to exactly 1"
            valid = all(member(target_lang, tok) and tok not in seen for tok in out)
            if partition is not None:
                linf = linf_group_distance(out, empirical_distribution(seen_list), partition)
                if alpha is not None and linf > alpha:
                    alpha_ok = False
            recorded: Union[Token, tuple] = tuple(sorted(out.items(), key=lambda kv: str(kv[0])))
        else:
            valid = member(target_lang, out) and out not in seen
            recorded = out
        if not valid:
            worst_invalid = max(worst_invalid, len(seen))
        steps.append(StepRecord(t, token, len(seen), recorded, valid, linf))
    setting = "representative" if alpha is not None else ("noisy" if script.noise_level else "plain")
    return SimReport(
        setting=setting,
        target=script.target,
        noise_level=script.noise_level,
        horizon=len(script.tokens),
        bound=bound,
        first_stable=worst_invalid + 1,
        steps=tuple(steps),
        alpha=alpha,
        alpha_ok=alpha_ok,
    )


def default_horizon(bound: int, prefix_len: int) -> int:
    """Finite surrogate for the limit statement: runs comfortably past the bound."""
    return 2 * (bound + prefix_len) + 16


# ---------------------------------------------------------------------------
# baseline comparison sweep


@dataclass(frozen=True)
class ComparisonReport:
    sequences: dict[str, tuple[int, ...]]
    verdicts: dict[tuple[str, str], Dominance]
    reorderings: int
    optimal_dominated_by: int  # reordering sequences that dominate optimal-plus-one
    optimal_dominates: int
    dominating_default: Optional[tuple[int, ...]]  # a reordering beating the default


def _subset_best_tables(langs: Sequence[SetExpr]) -> list[list[int]]:
    """best[l][mask]: largest finite intersection over submasks of mask containing l."""
    n = len(langs)
    fincard: list[Optional[int]] = [None] * (1 << n)
    exprs: list[Optional[SetExpr]] = [None] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        rest = mask ^ low
        idx = low.bit_length() - 1
        expr = langs[idx] if rest == 0 else intersect(exprs[rest], langs[idx])
        exprs[mask] = expr
        fincard[mask] = cardinality(expr)
    best = [[-1] * (1 << n) for _ in range(n)]
    for l in range(n):
        for mask in range(1 << n):
            if not mask >> l & 1:
                continue
            v = fincard[mask] if fincard[mask] is not None else -1
            for b in range(n):
                if b != l and mask >> b & 1:
                    v = max(v, best[l][mask ^ (1 << b)])
            best[l][mask] = v
    return best


def ordering_times(langs: Sequence[SetExpr], order: Sequence[int], best=None) -> list[int]:
    """Prefix-guarantee times, reported by language, for one input ordering."""
    n = len(langs)
    if best is None:
        best = _subset_best_tables(langs)
    seq = [0] * n
    mask = 0
    for pos, l in enumerate(order, start=1):
        mask |= 1 << l
        m = max(0, best[l][mask])
        seq[l] = max(pos, m + 1)
    return seq


def compare_collections(col: Collection, max_reorder: int = 8) -> ComparisonReport:
    """Closure/prefix baselines vs the table-optimal times, plus a reordering sweep."""
    n = len(col.languages)
    sequences: dict[str, tuple[int, ...]] = {
        "closure": tuple(baseline_times(col, "closure")),
        "prefix-default": tuple(baseline_times(col, "prefix")),
    }
    table = plain_table(col)
    sequences["optimal-plus-one"] = tuple(m + 1 for m in table.mstar_by_language())

    verdicts: dict[tuple[str, str], Dominance] = {}
    names = sorted(sequences)
    for a in names:
        for b in names:
            if a < b:
                verdicts[(a, b)] = dominance(sequences[a], sequences[b])

    reorderings = 0
    dominated_by = 0
    dominates = 0
    beating_default: Optional[tuple[int, ...]] = None
    if n <= max_reorder:
        best = _subset_best_tables(col.languages)
        optimal = sequences["optimal-plus-one"]
        default = sequences["prefix-default"]
        for perm in permutations(range(n)):
            seq = tuple(ordering_times(col.languages, perm, best))
            reorderings += 1
            verdict = dominance(seq, optimal)
            if verdict is Dominance.DOMINATES:
                dominated_by += 1
            elif verdict is Dominance.DOMINATED_BY:
                dominates += 1
            if beating_default is None and dominance(seq, default) is Dominance.DOMINATES:
                beating_default = tuple(i + 1 for i in perm)
    elif n > max_reorder:
        raise CapacityError(f"reordering sweep limited to {max_reorder} languages")
    return ComparisonReport(
        sequences, verdicts, reorderings, dominated_by, dominates, beating_default
    )


# ---------------------------------------------------------------------------
# JSON codecs (deterministic; documents round-trip exactly)


def encode_token(token: Token):
    if isinstance(token, AtomElem):
        return {"atom": token.atom, "index": token.index}
    return token


def decode_token(doc) -> Token:
    if isinstance(doc, dict):
        if set(doc) != {"atom", "index"}:
            raise SchemaError(f"bad token document {doc!r}")
        return AtomElem(doc["atom"], doc["index"])
    if isinstance(doc, int) and not isinstance(doc, bool):
        return doc
    raise SchemaError(f"bad token document {doc!r}")


def _encode_fraction(value: Optional[Fraction]):
    return None if value is None else f"{value.numerator}/{value.denominator}"


def _decode_fraction(doc) -> Optional[Fraction]:
    return None if doc is None else Fraction(doc)


def table_to_doc(table: ComplexityTable) -> dict:
    return {
        "setting": table.setting,
        "alpha": _encode_fraction(table.alpha),
        "entries": [
            {
                "index": e.index,
                "level": e.level,
                "position": e.position,
                "mStar": e.mstar,
                "witness": [list(c) if isinstance(c, tuple) else c for c in e.witness],
                "witnessTokens": [encode_token(t) for t in e.witness_tokens],
            }
            for e in table.entries
        ],
        "ordering": list(table.ordering),
    }


def table_from_doc(doc: dict) -> ComplexityTable:
    entries = []
    for e in doc["entries"]:
        witness = tuple(
            tuple(c) if isinstance(c, list) else c for c in e["witness"]
        )
        entries.append(
            TableEntry(
                index=e["index"],
                level=e["level"],
                position=e["position"],
                mstar=e["mStar"],
                witness=witness,
                witness_tokens=tuple(decode_token(t) for t in e["witnessTokens"]),
            )
        )
    return ComplexityTable(
        doc["setting"], _decode_fraction(doc["alpha"]), tuple(entries), tuple(doc["ordering"])
    )


def script_to_doc(script: Script) -> dict:
    return {
        "tokens": [encode_token(t) for t in script.tokens],
        "target": script.target,
        "noise_level": script.noise_level,
    }


def script_from_doc(doc: dict) -> Script:
    return Script(
        tuple(decode_token(t) for t in doc["tokens"]),
        doc["target"],
        doc.get("noise_level", 0),
    )


def sim_report_to_doc(report: SimReport) -> dict:
    steps = []
    for s in report.steps:
        if isinstance(s.output, tuple):
            output = [[encode_token(tok), _encode_fraction(mass)] for tok, mass in s.output]
        else:
            output = encode_token(s.output)
        steps.append(
            {
                "t": s.t,
                "input": encode_token(s.token),
                "distinct": s.distinct,
                "output": output,
                "valid": s.valid,
                "linf": _encode_fraction(s.linf),
            }
        )
    return {
        "setting": report.setting,
        "target": report.target,
        "noiseLevel": report.noise_level,
        "horizon": report.horizon,
        "bound": report.bound,
        "firstStable": report.first_stable,
        "alpha": _encode_fraction(report.alpha),
        "alphaOk": report.alpha_ok,
        "passed": report.passed,
        "steps": steps,
    }


def comparison_to_doc(report: ComparisonReport) -> dict:
    return {
        "sequences": {name: list(seq) for name, seq in report.sequences.items()},
        "verdicts": [
            {"a": a, "b": b, "verdict": verdict.value}
            for (a, b), verdict in sorted(report.verdicts.items())
        ],
        "reorderings": report.reorderings,
        "optimalDominatedBy": report.optimal_dominated_by,
        "optimalDominates": report.optimal_dominates,
        "dominatingDefault": list(report.dominating_default) if report.dominating_default else None,
    }
