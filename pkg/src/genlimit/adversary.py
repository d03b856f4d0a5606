"""Enumeration scripts: canonical enumerations, worst-case attacks, validation.

A script is a finite token sequence together with the targeted language index
and a declared noise level; it is always a prefix of some legal enumeration
(covering the whole language is a limit property, not a prefix property).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import islice
from typing import Iterator, NamedTuple, Optional

from .collection import Collection
from .errors import NoAttackError, SchemaError
from .procedures import ComplexityTable, TableEntry
from .setalg import SetExpr, Token, intersect, iter_members, member, violations


@dataclass(frozen=True)
class Script:
    tokens: tuple[Token, ...]
    target: int
    noise_level: int = 0


class ScriptReport(NamedTuple):
    ok: bool
    junk_positions: tuple[int, ...]  # 1-based positions of tokens outside the target
    offending: tuple[int, ...]  # junk positions beyond the declared noise budget


def _fresh_members(expr: SetExpr, used: set[Token]) -> Iterator[Token]:
    for tok in iter_members(expr):
        if tok not in used:
            used.add(tok)
            yield tok


def canonical_enumeration(expr: SetExpr, horizon: int) -> tuple[Token, ...]:
    """First ``horizon`` members of an infinite set in script order."""
    return tuple(islice(iter_members(expr), horizon))


def canonical_script(col: Collection, target: int, horizon: int) -> Script:
    return Script(canonical_enumeration(col.languages[target - 1], horizon), target, 0)


def _entry_for(table: ComplexityTable, target: int, level: Optional[int]) -> TableEntry:
    try:
        return table.entry_for(target, level)
    except KeyError as exc:
        raise NoAttackError(str(exc)) from exc


def intersection_first_script(
    col: Collection,
    table: ComplexityTable,
    target: int,
    horizon: int,
    level: Optional[int] = None,
) -> Script:
    """Worst-case script: the stored witness tokens first, then the target.

    Plain tables: the witness-intersection tokens, then the target language
    canonically.  Noisy tables (``level`` given): the witness token set, then
    whatever remains of the witness-language intersection, then the target.
    """
    entry = _entry_for(table, target, level)
    if entry.mstar == 0:
        raise NoAttackError(f"target {target} has an empty witness; no attack exists")
    used: set[Token] = set()
    tokens = list(_take(entry.witness_tokens, used))
    if table.setting == "noisy":
        langs = sorted({idx for _, idx in entry.witness})
        inter = col.languages[langs[0] - 1]
        for idx in langs[1:]:
            inter = intersect(inter, col.languages[idx - 1])
        tokens.extend(islice(_fresh_members(inter, used), max(0, horizon - len(tokens))))
    tokens.extend(
        islice(_fresh_members(col.languages[target - 1], used), max(0, horizon - len(tokens)))
    )
    noise = entry.level if table.setting == "noisy" else 0
    return Script(tuple(tokens[:horizon]), target, noise or 0)


def representative_script(
    col: Collection, table: ComplexityTable, target: int, horizon: int
) -> Script:
    """Worst-case representative script: the stored witness set, then the target."""
    if table.setting != "representative":
        raise SchemaError("representative attack needs a representative table")
    entry = _entry_for(table, target, None)
    if entry.mstar == 0:
        raise NoAttackError(f"target {target} has an empty witness; no attack exists")
    used: set[Token] = set()
    tokens = list(_take(entry.witness_tokens, used))
    tokens.extend(
        islice(_fresh_members(col.languages[target - 1], used), max(0, horizon - len(tokens)))
    )
    return Script(tuple(tokens[:horizon]), target, 0)


def _take(tokens, used: set[Token]):
    for tok in tokens:
        used.add(tok)
        yield tok


def validate_script(script: Script, col: Collection) -> ScriptReport:
    """Check the declared noise budget against the target language.

    The noise model counts positions, not distinct tokens: a repeated junk
    token spends budget every time it appears.
    """
    if not 1 <= script.target <= len(col.languages):
        raise SchemaError(f"target {script.target} out of range")
    lang = col.languages[script.target - 1]
    junk = tuple(
        pos for pos, tok in enumerate(script.tokens, start=1) if not member(lang, tok)
    )
    offending = junk[script.noise_level :]
    return ScriptReport(not offending, junk, offending)


def script_noise(script: Script, col: Collection) -> int:
    """Distinct tokens of the script outside its target language."""
    lang = col.languages[script.target - 1]
    return violations(set(script.tokens), lang)
