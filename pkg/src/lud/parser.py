"""Reading and writing the textual LUD format.

The format has an ``index:`` line followed by four optional sections::

    index:(l1,h0)
    lud_preds:
      l1-mood(decl,h0)
      l2-discrel(topic,h1,h2)
    lud_grouping:
      l5-inc([l6,l7])
    lud_meta:
      modifies(l8,l11)
    lud_scoping:
      alfa(i6,undef,l8,l13)
      leq(l2,h0)

Whitespace inside a line is insignificant and ``#`` starts a comment.
A section keyword may share its line with the first entry.
"""
from __future__ import annotations

import re

from .core import (
    ALFA_SORTS,
    MOODS,
    Alfa,
    Diagnostic,
    DiscRel,
    Dm,
    Grouping,
    Leq,
    LudError,
    LudRepresentation,
    Modifies,
    Mode,
    Mood,
    Neg,
    Plugging,
    Pred,
    Role,
    SourceSpan,
    is_hole,
    is_instance,
    is_label,
)

SECTIONS = ("lud_preds", "lud_grouping", "lud_meta", "lud_scoping")

_NAME = re.compile(r"^[A-Za-z][A-Za-z0-9_\-]*$")
_SECTION = re.compile(r"^(lud_preds|lud_grouping|lud_meta|lud_scoping)\s*:\s*(.*)$")
_INDEX = re.compile(r"^index\s*:\s*(.*)$")
_CALL = re.compile(r"^([A-Za-z_]+)\s*\((.*)\)$")
_PRED_ENTRY = re.compile(r"^(\S+?)\s*-\s*([A-Za-z_]+\s*\(.*\))$")
_GROUP_ENTRY = re.compile(r"^(\S+?)\s*-\s*inc\s*\(\s*\[(.*)\]\s*\)$")


class ParseError(LudError):
    """Raised when text is not a well-formed LUD; carries every error found."""

    code = "syntax"

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(str(d) for d in diagnostics))


class _EntryError(Exception):
    def __init__(self, code: str, message: str):
        self.code = code
        self.message = message


def _args(text: str) -> list[str]:
    return [a.strip() for a in text.split(",")] if text.strip() else []


def _need(value: str, check, what: str) -> str:
    if not check(value):
        raise _EntryError("syntax", f"expected {what}, found {value!r}")
    return value


def _name(value: str) -> str:
    return _need(value, _NAME.match, "a name")


def _condition(form: str):
    m = _CALL.match(form)
    if m is None:
        raise _EntryError("syntax", f"malformed condition {form!r}")
    head, args = m.group(1), _args(m.group(2))
    arity = {"mood": 2, "discrel": 3, "mode": 1, "neg": 2, "dm": 1, "predicate": 2, "role": 3}
    if head not in arity:
        raise _EntryError("unknown-condition", f"unknown condition {head!r}")
    if len(args) != arity[head]:
        raise _EntryError("syntax", f"{head} takes {arity[head]} arguments, got {len(args)}")
    if head == "mood":
        if args[0] not in MOODS:
            raise _EntryError("syntax", f"unknown mood {args[0]!r}")
        return Mood(args[0], _need(args[1], is_hole, "a hole"))
    if head == "discrel":
        return DiscRel(_name(args[0]), _need(args[1], is_hole, "a hole"), _need(args[2], is_hole, "a hole"))
    if head == "mode":
        return Mode(_need(args[0], is_hole, "a hole"))
    if head == "neg":
        return Neg(_need(args[0], is_instance, "an instance"), _need(args[1], is_hole, "a hole"))
    if head == "dm":
        return Dm(_need(args[0], is_instance, "an instance"))
    if head == "predicate":
        return Pred(_name(args[0]), _need(args[1], is_instance, "an instance"))
    return Role(
        _need(args[0], is_instance, "an instance"),
        _name(args[1]),
        _need(args[2], is_instance, "an instance"),
    )


def _scoping(entry: str):
    m = _CALL.match(entry)
    if m is None:
        raise _EntryError("syntax", f"malformed constraint {entry!r}")
    head, args = m.group(1), _args(m.group(2))
    if head == "leq":
        if len(args) != 2:
            raise _EntryError("syntax", f"leq takes 2 arguments, got {len(args)}")
        lower = _need(args[0], is_label, "a label")
        if is_label(args[1]):
            raise _EntryError("label-upper-leq", f"leq upper bound {args[1]} must be a hole")
        return Leq(lower, _need(args[1], is_hole, "a hole"))
    if head == "alfa":
        if len(args) != 4:
            raise _EntryError("syntax", f"alfa takes 4 arguments, got {len(args)}")
        if args[1] not in ALFA_SORTS:
            raise _EntryError("syntax", f"unknown alfa sort {args[1]!r}")
        return Alfa(
            _need(args[0], is_instance, "an instance"),
            args[1],
            _need(args[2], is_label, "a label"),
            _need(args[3], is_label, "a label"),
        )
    raise _EntryError("syntax", f"unknown constraint {head!r}")


def _span(raw: str, lineno: int, start: int | None = None) -> SourceSpan:
    body = raw.split("#", 1)[0].rstrip()
    if start is None:
        start = len(body) - len(body.lstrip())
    start = min(start, max(len(body) - 1, 0))
    return SourceSpan(lineno, start + 1, max(len(body), start + 1))


def parse(text: str, *, diagnostics: list[Diagnostic] | None = None, line_offset: int = 0) -> LudRepresentation:
    """Parse LUD text.

    Raises ParseError listing every error.  Warnings are appended to
    ``diagnostics`` when a list is given.  ``line_offset`` shifts reported
    line numbers, for text cut out of a larger file.
    """
    errors: list[Diagnostic] = []
    warnings: list[Diagnostic] = []
    index = None
    section = None
    conditions: dict[str, list] = {}
    groupings, meta, alfa, leq = [], [], [], []
    seen_leq = set()
    lines = text.split("\n")

    for n, raw in enumerate(lines, start=1):
        lineno = n + line_offset
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        col = len(raw) - len(raw.lstrip())

        if index is None:
            m = _INDEX.match(line)
            if m is None:
                errors.append(Diagnostic("error", "bad-index", "file must start with an index line", _span(raw, lineno)))
                index = ()
                continue
            inner = re.fullmatch(r"\(\s*(.*?)\s*\)", m.group(1))
            args = _args(inner.group(1)) if inner else []
            if len(args) == 2 and is_label(args[0]) and is_hole(args[1]):
                index = (None, args[0], args[1])
            elif len(args) == 3 and is_instance(args[0]) and is_label(args[1]) and is_hole(args[2]):
                index = tuple(args)
                warnings.append(Diagnostic(
                    "warning", "index-instance",
                    f"index instance {args[0]} is stored but not used", _span(raw, lineno),
                ))
            else:
                errors.append(Diagnostic("error", "bad-index", f"malformed index {m.group(1)!r}", _span(raw, lineno)))
                index = ()
            continue

        m = _SECTION.match(line)
        if m is not None:
            section = m.group(1)
            rest = m.group(2).strip()
            if not rest:
                continue
            col = raw.index(rest, raw.index(section) + len(section))
            line = rest
        elif _INDEX.match(line):
            errors.append(Diagnostic("error", "bad-index", "duplicate index line", _span(raw, lineno)))
            continue

        span = _span(raw, lineno, col)
        try:
            if section is None:
                raise _EntryError("syntax", f"entry {line!r} outside any section")
            if section == "lud_preds":
                pm = _PRED_ENTRY.match(line)
                if pm is None:
                    raise _EntryError("syntax", f"expected label-condition, found {line!r}")
                label = _need(pm.group(1), is_label, "a label")
                conditions.setdefault(label, []).append(_condition(pm.group(2)))
            elif section == "lud_grouping":
                gm = _GROUP_ENTRY.match(line)
                if gm is None:
                    raise _EntryError("syntax", f"expected label-inc([...]), found {line!r}")
                members = [_need(x, is_label, "a label") for x in _args(gm.group(2))]
                if not members:
                    raise _EntryError("syntax", "empty group")
                groupings.append(Grouping(_need(gm.group(1), is_label, "a label"), tuple(members)))
            elif section == "lud_meta":
                cm = _CALL.match(line)
                if cm is None or cm.group(1) != "modifies":
                    raise _EntryError("syntax", f"expected modifies(label,label), found {line!r}")
                args = _args(cm.group(2))
                if len(args) != 2:
                    raise _EntryError("syntax", "modifies takes 2 arguments")
                meta.append(Modifies(_need(args[0], is_label, "a label"), _need(args[1], is_label, "a label")))
            else:
                entry = _scoping(line)
                if isinstance(entry, Leq):
                    if entry in seen_leq:
                        warnings.append(Diagnostic("warning", "duplicate-leq", f"{entry} repeated", span))
                    seen_leq.add(entry)
                    leq.append(entry)
                else:
                    alfa.append(entry)
        except _EntryError as exc:
            errors.append(Diagnostic("error", exc.code, exc.message, span))

    if index is None:
        errors.append(Diagnostic("error", "bad-index", "missing index line", SourceSpan(1 + line_offset, 1, 1)))
    if errors:
        raise ParseError(errors)
    if diagnostics is not None:
        diagnostics.extend(warnings)
    return LudRepresentation(
        top_label=index[1],
        top_hole=index[2],
        conditions={k: tuple(v) for k, v in conditions.items()},
        groupings=tuple(groupings),
        meta=tuple(meta),
        alfa=tuple(alfa),
        leq=tuple(leq),
        index_instance=index[0],
    )


def serialize(lud: LudRepresentation) -> str:
    """Canonical text: fixed section order, numeric entry order, LF endings."""
    if lud.index_instance:
        out = [f"index:({lud.index_instance},{lud.top_label},{lud.top_hole})"]
    else:
        out = [f"index:({lud.top_label},{lud.top_hole})"]
    out.append("lud_preds:")
    out.extend(f"  {label}-{cond}" for label, cond in lud.iter_conditions())
    out.append("lud_grouping:")
    out.extend(f"  {g}" for g in lud.groupings)
    out.append("lud_meta:")
    out.extend(f"  {m}" for m in lud.meta)
    out.append("lud_scoping:")
    out.extend(f"  {a}" for a in lud.alfa)
    out.extend(f"  {c}" for c in lud.leq)
    return "\n".join(out) + "\n"


_PLUG = re.compile(r"^plug_into\s*\(\s*(l\d+)\s*,\s*(h\d+)\s*\)$")


def parse_plugging(text: str) -> Plugging:
    """Read ``plug_into(<label>,<hole>)`` lines."""
    assignment: dict[str, str] = {}
    errors = []
    for n, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _PLUG.match(line)
        if m is None:
            errors.append(Diagnostic("error", "syntax", f"expected plug_into(label,hole), found {line!r}", _span(raw, n)))
            continue
        label, hole = m.groups()
        if hole in assignment:
            errors.append(Diagnostic("error", "syntax", f"{hole} plugged twice", _span(raw, n)))
        assignment[hole] = label
    if errors:
        raise ParseError(errors)
    return Plugging(assignment)


def serialize_plugging(p: Plugging) -> str:
    return str(p) + "\n"
