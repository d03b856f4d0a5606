"""Command-line driver: complexity tables, simulations, comparisons, verification.

Exit status is 0 exactly when every requested check passed.  All output is
deterministic for fixed inputs and seeds.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import adversary, harness, verify
from .collection import Collection, load_collection
from .errors import GenlimitError, ParameterError
from .generators import NoisyGenerator, ParetoGenerator, PrefixBaselineGenerator, RepresentativeGenerator
from .procedures import (
    ComplexityTable,
    ExplicitSchedule,
    IdentitySchedule,
    PowerSchedule,
    load_groups,
    noisy_table,
    parse_fraction,
    plain_table,
    representative_table,
    schedule_from_table,
)


def _load_json(path: str) -> dict:
    return json.loads(Path(path).read_text())


def _emit(doc: dict, as_json: bool, lines: list[str]) -> None:
    if as_json:
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        print("\n".join(lines))


def _fmt_token(tok) -> str:
    return f"{tok.atom}[{tok.index}]" if hasattr(tok, "atom") else str(tok)


def _table_lines(col: Collection, table: ComplexityTable) -> list[str]:
    lines = [f"setting: {table.setting}" + (f"  alpha: {table.alpha}" if table.alpha else "")]
    lines.append("cell        mStar  witness                     tokens")
    for e in table.entries:
        cell = f"{col.names[e.index - 1]}" + (f"@n{e.level}" if e.level is not None else "")
        wit = ",".join(str(w) for w in e.witness) or "-"
        toks = ",".join(_fmt_token(t) for t in e.witness_tokens[:8])
        if len(e.witness_tokens) > 8:
            toks += ",..."
        lines.append(f"{cell:<12}{e.mstar:<7}{wit:<28}{toks or '-'}")
    order = []
    for p in table.ordering:
        e = table.entries[p]
        order.append(col.names[e.index - 1] + (f"@n{e.level}" if e.level is not None else ""))
    lines.append("ordering: " + " < ".join(order))
    return lines


def _build_table(col: Collection, args) -> ComplexityTable:
    if getattr(args, "noisy", False):
        return noisy_table(col, args.cells)
    if getattr(args, "repr", False):
        partition = load_groups(_load_json(args.groups), col.registry)
        return representative_table(col, partition, parse_fraction(args.alpha))
    return plain_table(col)


def _schedule_for(args, table: ComplexityTable):
    spec = args.schedule
    if spec == "sufficient":
        return schedule_from_table(table)
    if spec == "identity":
        return IdentitySchedule()
    if spec == "pow2":
        return PowerSchedule(2)
    if spec.startswith("table:"):
        return ExplicitSchedule(_load_json(spec[len("table:") :])["values"])
    raise ParameterError(f"unknown schedule {spec!r}")


def cmd_complexity(args) -> int:
    col = load_collection(_load_json(args.collection))
    table = _build_table(col, args)
    doc = {"table": harness.table_to_doc(table), "simReports": [], "verdicts": {}, "invariantResults": []}
    _emit(doc, args.json, _table_lines(col, table))
    return 0


def cmd_simulate(args) -> int:
    col = load_collection(_load_json(args.collection))
    table = _build_table(col, args)
    schedule = _schedule_for(args, table)
    level = args.levels if args.noisy else None
    bound = harness.theoretical_bound(table, schedule, args.target, level)
    horizon = args.horizon or harness.default_horizon(bound, len(col.languages))

    if args.attack == "canonical":
        script = adversary.canonical_script(col, args.target, horizon)
        if args.noisy:
            script = adversary.Script(script.tokens, script.target, level)
    elif args.attack == "intersection-first":
        script = adversary.intersection_first_script(col, table, args.target, horizon, level)
    elif args.attack == "repr":
        script = adversary.representative_script(col, table, args.target, horizon)
    else:
        raise ParameterError(f"unknown attack {args.attack!r}")

    if args.repr:
        partition = load_groups(_load_json(args.groups), col.registry)
        alpha = parse_fraction(args.alpha)
        gen = RepresentativeGenerator(col, partition, alpha, schedule)
        report = harness.simulate(gen, script, col, partition=partition, alpha=alpha, bound=bound)
    else:
        if args.noisy:
            gen = NoisyGenerator(col, schedule)
        elif args.schedule == "identity" and args.baseline:
            gen = PrefixBaselineGenerator(col)
        else:
            gen = ParetoGenerator(col, schedule)
        report = harness.simulate(gen, script, col, bound=bound)

    doc = {
        "table": harness.table_to_doc(table),
        "simReports": [harness.sim_report_to_doc(report)],
        "verdicts": {},
        "invariantResults": [],
    }
    lines = [
        f"target {col.names[args.target - 1]}"
        + (f" at noise {level}" if args.noisy else "")
        + f", attack {args.attack}, horizon {report.horizon}",
        f"theoretical bound {bound}, first stable {report.first_stable}",
        f"result: {'pass' if report.passed else 'FAIL'}",
    ]
    _emit(doc, args.json, lines)
    return 0 if report.passed else 1


def cmd_compare(args) -> int:
    col = load_collection(_load_json(args.collection))
    report = harness.compare_collections(col, max_reorder=args.max_reorder)
    doc = {
        "table": None,
        "simReports": [],
        "verdicts": harness.comparison_to_doc(report),
        "invariantResults": [],
    }
    lines = []
    for name, seq in sorted(report.sequences.items()):
        lines.append(f"{name:<18}{list(seq)}")
    for (a, b), verdict in sorted(report.verdicts.items()):
        lines.append(f"{a} vs {b}: {verdict.value}")
    lines.append(
        f"reorderings checked: {report.reorderings}; "
        f"dominating optimal-plus-one: {report.optimal_dominated_by}"
    )
    if report.dominating_default:
        lines.append(f"an ordering beating prefix-default: {list(report.dominating_default)}")
    _emit(doc, args.json, lines)
    ok = report.optimal_dominated_by == 0
    return 0 if ok else 1


def cmd_verify(args) -> int:
    col = load_collection(_load_json(args.collection))
    results = []
    if args.noisy:
        results.extend(verify.noisy_invariants(col, args.cells))
    elif args.repr:
        partition = load_groups(_load_json(args.groups), col.registry)
        results.extend(verify.repr_invariants(col, partition, parse_fraction(args.alpha)))
    else:
        results.extend(verify.plain_invariants(col, prefix=args.prefix))
        results.append(verify.self_test(col.prefix(min(len(col.languages), args.prefix or 20))))
    if args.sweep:
        results.extend(verify.random_sweep(args.seed, args.sweep))
    doc = {
        "table": None,
        "simReports": [],
        "verdicts": {},
        "invariantResults": [
            {"name": r.name, "passed": r.passed, "detail": r.detail} for r in results
        ],
    }
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name}" + (f"  ({r.detail})" if r.detail else "") for r in results]
    _emit(doc, args.json, lines)
    return 0 if all(r.passed for r in results) else 1


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("collection", help="collection JSON document")
    p.add_argument("--json", action="store_true", help="emit a machine-readable report")
    p.add_argument("--noisy", action="store_true", help="noisy setting")
    p.add_argument("--cells", type=int, default=6, help="diagonal positions to process (noisy)")
    p.add_argument("--repr", action="store_true", help="representative setting")
    p.add_argument("--alpha", default="1/2", help="accuracy as a fraction, e.g. 1/2")
    p.add_argument("--groups", help="groups JSON document (representative)")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="genlimit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("complexity", help="compute a complexity table")
    _add_common(p)

    p = sub.add_parser("simulate", help="run a generator against a script")
    _add_common(p)
    p.add_argument("--target", type=int, required=True, help="1-based target language")
    p.add_argument("--levels", type=int, default=0, help="target noise level (noisy)")
    p.add_argument("--schedule", default="sufficient", help="identity|pow2|sufficient|table:FILE")
    p.add_argument("--attack", default="canonical", help="canonical|intersection-first|repr")
    p.add_argument("--horizon", type=int, default=0, help="script length (0: derive from bound)")
    p.add_argument("--baseline", action="store_true", help="use the declared-order baseline generator")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("compare", help="dominance table of baselines and reorderings")
    _add_common(p)
    p.add_argument("--max-reorder", type=int, default=8)

    p = sub.add_parser("verify", help="run the invariant suite")
    _add_common(p)
    p.add_argument("--prefix", type=int, default=None, help="cap the processed prefix")
    p.add_argument("--sweep", type=int, default=0, help="number of random seeds to sweep")
    p.add_argument("--seed", type=int, default=0)

    args = parser.parse_args(argv)
    handlers = {
        "complexity": cmd_complexity,
        "simulate": cmd_simulate,
        "compare": cmd_compare,
        "verify": cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except GenlimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
