"""LUD object model, validation and plugging admissibility.

A representation is a set of labeled conditions, some of which own holes,
plus ``alfa`` and ``leq`` constraints.  Labels that stand for whole DRS
fragments (group roots and ungrouped condition-bearing labels) are plugged
into holes; a plugging that yields a tree under the top hole and respects
every ``leq`` is a reading.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Union

_IDENT = re.compile(r"^([lhi])(\d+)$")

MOODS = ("decl", "int", "imp")
ALFA_SORTS = ("undef", "pron", "def")


class LudError(Exception):
    """Base class for errors raised by this package."""

    code = "lud-error"


class UnknownIdentError(LudError):
    code = "unknown-ident"


def ident_key(name: str) -> tuple[str, int]:
    """Sort key giving numeric order within each ident kind (``h2 < h10``)."""
    m = _IDENT.match(name)
    if m is None:
        return (name, -1)
    return (m.group(1), int(m.group(2)))


def ident_number(name: str) -> int:
    return ident_key(name)[1]


def is_label(name: str) -> bool:
    return bool(_IDENT.match(name)) and name[0] == "l"


def is_hole(name: str) -> bool:
    return bool(_IDENT.match(name)) and name[0] == "h"


def is_instance(name: str) -> bool:
    return bool(_IDENT.match(name)) and name[0] == "i"


def sort_idents(names: Iterable[str]) -> list[str]:
    return sorted(names, key=ident_key)


# --------------------------------------------------------------------------
# Conditions


@dataclass(frozen=True)
class Mood:
    mood: str
    scope: str

    def holes(self) -> tuple[str, ...]:
        return (self.scope,)

    def instances(self) -> tuple[str, ...]:
        return ()

    def __str__(self) -> str:
        return f"mood({self.mood},{self.scope})"


@dataclass(frozen=True)
class DiscRel:
    rel_type: str
    restriction: str
    scope: str

    def holes(self) -> tuple[str, ...]:
        return (self.restriction, self.scope)

    def instances(self) -> tuple[str, ...]:
        return ()

    def __str__(self) -> str:
        return f"discrel({self.rel_type},{self.restriction},{self.scope})"


@dataclass(frozen=True)
class Mode:
    scope: str

    def holes(self) -> tuple[str, ...]:
        return (self.scope,)

    def instances(self) -> tuple[str, ...]:
        return ()

    def __str__(self) -> str:
        return f"mode({self.scope})"


@dataclass(frozen=True)
class Neg:
    marker: str
    scope: str

    def holes(self) -> tuple[str, ...]:
        return (self.scope,)

    def instances(self) -> tuple[str, ...]:
        return (self.marker,)

    def __str__(self) -> str:
        return f"neg({self.marker},{self.scope})"


@dataclass(frozen=True)
class Dm:
    marker: str

    def holes(self) -> tuple[str, ...]:
        return ()

    def instances(self) -> tuple[str, ...]:
        return (self.marker,)

    def __str__(self) -> str:
        return f"dm({self.marker})"


@dataclass(frozen=True)
class Pred:
    name: str
    marker: str

    def holes(self) -> tuple[str, ...]:
        return ()

    def instances(self) -> tuple[str, ...]:
        return (self.marker,)

    def __str__(self) -> str:
        return f"predicate({self.name},{self.marker})"


@dataclass(frozen=True)
class Role:
    event: str
    role: str
    filler: str

    def holes(self) -> tuple[str, ...]:
        return ()

    def instances(self) -> tuple[str, ...]:
        return (self.event, self.filler)

    def __str__(self) -> str:
        return f"role({self.event},{self.role},{self.filler})"


Condition = Union[Mood, DiscRel, Mode, Neg, Dm, Pred, Role]


# --------------------------------------------------------------------------
# Sections and constraints


@dataclass(frozen=True)
class Grouping:
    root: str
    members: tuple[str, ...]

    def __str__(self) -> str:
        return f"{self.root}-inc([{','.join(self.members)}])"


@dataclass(frozen=True)
class Modifies:
    host: str
    modifier: str

    def __str__(self) -> str:
        return f"modifies({self.host},{self.modifier})"


@dataclass(frozen=True)
class Alfa:
    marker: str
    sort: str
    anchor: str
    content: str

    def __str__(self) -> str:
        return f"alfa({self.marker},{self.sort},{self.anchor},{self.content})"


@dataclass(frozen=True)
class Leq:
    lower: str
    upper: str

    def __str__(self) -> str:
        return f"leq({self.lower},{self.upper})"


@dataclass(frozen=True)
class SourceSpan:
    line: int
    col_start: int
    col_end: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col_start}-{self.col_end}"


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    code: str
    message: str
    location: SourceSpan | str | None = None

    @property
    def is_error(self) -> bool:
        return self.severity == "error"

    def __str__(self) -> str:
        where = f" at {self.location}" if self.location is not None else ""
        return f"{self.severity}[{self.code}]{where}: {self.message}"


def _error(code: str, message: str, location=None) -> Diagnostic:
    return Diagnostic("error", code, message, location)


def _warning(code: str, message: str, location=None) -> Diagnostic:
    return Diagnostic("warning", code, message, location)


# --------------------------------------------------------------------------
# The representation


@dataclass(frozen=True)
class LudRepresentation:
    """An underspecified DRS description.

    Collections are normalized on construction (conditions keyed in numeric
    label order, constraints sorted and de-duplicated), so two values built
    from the same entries in different orders compare equal.
    """

    top_label: str
    top_hole: str
    conditions: Mapping[str, tuple[Condition, ...]]
    groupings: tuple[Grouping, ...] = ()
    meta: tuple[Modifies, ...] = ()
    alfa: tuple[Alfa, ...] = ()
    leq: tuple[Leq, ...] = ()
    index_instance: str | None = field(default=None)

    def __post_init__(self):
        conds = {
            label: tuple(self.conditions[label])
            for label in sort_idents(self.conditions)
            if self.conditions[label]
        }
        object.__setattr__(self, "conditions", conds)
        object.__setattr__(
            self, "groupings",
            tuple(sorted(self.groupings, key=lambda g: (ident_key(g.root), [ident_key(m) for m in g.members]))),
        )
        object.__setattr__(
            self, "meta",
            tuple(sorted(set(self.meta), key=lambda m: (ident_key(m.host), ident_key(m.modifier)))),
        )
        object.__setattr__(
            self, "alfa",
            tuple(sorted(set(self.alfa), key=lambda a: (ident_key(a.marker), a.sort, ident_key(a.anchor), ident_key(a.content)))),
        )
        object.__setattr__(
            self, "leq",
            tuple(sorted(set(self.leq), key=lambda c: (ident_key(c.lower), ident_key(c.upper)))),
        )

    # -- derived views (cached; the dataclass is immutable) --

    def iter_conditions(self) -> Iterator[tuple[str, Condition]]:
        for label, conds in self.conditions.items():
            for cond in conds:
                yield label, cond

    @cached_property
    def group_of(self) -> dict[str, str]:
        """Map from member label to its group root."""
        out = {}
        for g in self.groupings:
            for m in g.members:
                out.setdefault(m, g.root)
        return out

    @cached_property
    def defined_labels(self) -> frozenset[str]:
        return frozenset(self.conditions) | {g.root for g in self.groupings}

    @cached_property
    def holes(self) -> tuple[str, ...]:
        """Every hole that appears as a condition argument, in numeric order."""
        found = {h for _, c in self.iter_conditions() for h in c.holes()}
        return tuple(sort_idents(found))

    @cached_property
    def instances(self) -> frozenset[str]:
        found = {i for _, c in self.iter_conditions() for i in c.instances()}
        return frozenset(found)

    def fragment_of(self, label: str) -> str:
        """The fragment root a label belongs to (itself when ungrouped)."""
        return self.group_of.get(label, label)

    @cached_property
    def fragment_conditions(self) -> dict[str, tuple[tuple[str, Condition], ...]]:
        """Conditions of each fragment root, root's own first, then members in order."""
        out: dict[str, list[tuple[str, Condition]]] = {}
        roots = sort_idents(
            {g.root for g in self.groupings}
            | {label for label in self.conditions if label not in self.group_of}
        )
        for root in roots:
            out[root] = [(root, c) for c in self.conditions.get(root, ())]
        for g in self.groupings:
            if g.root in self.group_of:
                continue
            for m in g.members:
                if self.group_of.get(m) == g.root:
                    out[g.root].extend((m, c) for c in self.conditions.get(m, ()))
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def hole_owner(self) -> dict[str, str]:
        """Fragment root owning each hole (first owner if ownership is ambiguous)."""
        out: dict[str, str] = {}
        for label, cond in self.iter_conditions():
            for h in cond.holes():
                out.setdefault(h, self.fragment_of(label))
        return out

    @cached_property
    def fragment_holes(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {}
        for h in self.holes:
            owner = self.hole_owner[h]
            out.setdefault(owner, []).append(h)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def pluggable(self) -> tuple[str, ...]:
        return tuple(sort_idents(pluggable_labels(self)))

    def discrels(self) -> list[tuple[str, DiscRel]]:
        return [(label, c) for label, c in self.iter_conditions() if isinstance(c, DiscRel)]

    def replace(self, **changes) -> "LudRepresentation":
        fields = dict(
            top_label=self.top_label,
            top_hole=self.top_hole,
            conditions=self.conditions,
            groupings=self.groupings,
            meta=self.meta,
            alfa=self.alfa,
            leq=self.leq,
            index_instance=self.index_instance,
        )
        fields.update(changes)
        return LudRepresentation(**fields)


def pluggable_labels(lud: LudRepresentation) -> frozenset[str]:
    """Labels that can be plugged into holes.

    Fragment roots, minus the top label, group members and alfa contents.
    """
    alfa_contents = {a.content for a in lud.alfa}
    roots = {g.root for g in lud.groupings} | set(lud.conditions)
    return frozenset(
        label
        for label in roots
        if label != lud.top_label
        and label not in lud.group_of
        and label not in alfa_contents
    )


# --------------------------------------------------------------------------
# Validation


def validate(lud: LudRepresentation) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    defined = lud.defined_labels

    # hole ownership
    owners: dict[str, list[str]] = {}
    for label, cond in lud.iter_conditions():
        hs = cond.holes()
        if isinstance(cond, DiscRel) and cond.restriction == cond.scope:
            diags.append(_error("discrel-same-hole", f"{label}-{cond} uses one hole twice", label))
            hs = (cond.restriction,)
        for h in hs:
            owners.setdefault(h, []).append(label)
    for h in sort_idents(owners):
        if len(owners[h]) > 1:
            diags.append(_error(
                "duplicate-hole-owner",
                f"{h} is an argument of {len(owners[h])} conditions ({', '.join(owners[h])})",
                h,
            ))

    # mood and index
    moods = [(label, c) for label, c in lud.iter_conditions() if isinstance(c, Mood)]
    top_moods = [c for label, c in moods if label == lud.top_label]
    if lud.top_label not in defined:
        diags.append(_error("undefined-ident", f"top label {lud.top_label} is not defined", lud.top_label))
    if not top_moods:
        diags.append(_error("missing-mood", f"top label {lud.top_label} carries no mood condition", lud.top_label))
    elif top_moods[0].scope != lud.top_hole:
        diags.append(_error(
            "top-hole-mismatch",
            f"mood scope {top_moods[0].scope} differs from top hole {lud.top_hole}",
            lud.top_label,
        ))
    if len(moods) > 1:
        diags.append(_error("duplicate-mood", f"{len(moods)} mood conditions found", lud.top_label))
    if lud.top_label in lud.group_of:
        diags.append(_error("grouped-top", f"top label {lud.top_label} is a group member", lud.top_label))

    # groupings
    seen_members: dict[str, str] = {}
    roots = {g.root for g in lud.groupings}
    root_count = Counter(g.root for g in lud.groupings)
    for root in sort_idents(r for r, n in root_count.items() if n > 1):
        diags.append(_error("duplicate-group", f"group root {root} declared {root_count[root]} times", root))
    for g in lud.groupings:
        for m in g.members:
            if m in seen_members and seen_members[m] != g.root:
                diags.append(_error("group-overlap", f"{m} is a member of {seen_members[m]} and {g.root}", m))
            seen_members.setdefault(m, g.root)
            if m in roots:
                diags.append(_error("group-root-member", f"group root {m} is also a member of {g.root}", m))
            if m not in lud.conditions:
                diags.append(_error("empty-member", f"group member {m} of {g.root} carries no condition", m))

    # constraints reference defined idents
    holes = set(lud.holes)
    for c in lud.leq:
        for name, ok in ((c.lower, c.lower in defined), (c.upper, c.upper in holes)):
            if not ok:
                diags.append(_error("undefined-ident", f"{c} mentions undefined {name}", name))
    for a in lud.alfa:
        for name in (a.anchor, a.content):
            if name not in defined:
                diags.append(_error("undefined-ident", f"{a} mentions undefined {name}", name))
        if a.marker not in lud.instances:
            diags.append(_error("undefined-ident", f"{a} mentions unused marker {a.marker}", a.marker))
    for m in lud.meta:
        for name in (m.host, m.modifier):
            if name not in defined:
                diags.append(_error("undefined-ident", f"{m} mentions undefined {name}", name))

    has_errors = any(d.is_error for d in diags)
    plug = pluggable_labels(lud)
    if not has_errors:
        if len(plug) != len(holes):
            diags.append(_error(
                "arity-mismatch",
                f"{len(plug)} pluggable labels for {len(holes)} holes",
                lud.top_label,
            ))
        for h in lud.holes:
            owner = lud.hole_owner[h]
            if owner != lud.top_label and owner not in plug:
                diags.append(_error("orphan-hole", f"{h} belongs to {owner}, which can never be plugged", h))
        for c in lud.leq:
            lower = lud.fragment_of(c.lower)
            if lower not in plug:
                diags.append(_error("bad-leq", f"{c}: {c.lower} can never be plugged", c.lower))

    # partition conflicts
    uppers: dict[str, set[str]] = {}
    for c in lud.leq:
        uppers.setdefault(c.lower, set()).add(c.upper)
    for label, cond in lud.discrels():
        for lower in sort_idents(uppers):
            if {cond.restriction, cond.scope} <= uppers[lower]:
                diags.append(_error(
                    "partition-conflict",
                    f"{lower} is below both {cond.restriction} and {cond.scope} of discrel {label}",
                    label,
                ))

    # warnings
    for m in lud.meta:
        if m.host in defined and m.modifier in defined:
            host_markers = {
                i for _, c in lud.fragment_conditions.get(lud.fragment_of(m.host), ()) for i in c.instances()
            }
            if lud.fragment_of(m.modifier) != lud.fragment_of(m.host):
                host_markers |= {i for c in lud.conditions.get(m.host, ()) for i in c.instances()}
            mod_markers = {i for c in lud.conditions.get(m.modifier, ()) for i in c.instances()}
            if not host_markers & mod_markers:
                diags.append(_warning(
                    "modifies-marker-mismatch",
                    f"{m}: modifier shares no marker with its host",
                    m.modifier,
                ))
    diags.extend(_unused_instance_warnings(lud, plug))
    return diags


def _unused_instance_warnings(lud: LudRepresentation, plug) -> list[Diagnostic]:
    declared: dict[str, str] = {}
    uses: Counter[str] = Counter()
    for label, cond in lud.iter_conditions():
        if isinstance(cond, Dm):
            declared.setdefault(cond.marker, label)
        else:
            uses.update(cond.instances())
    uses.update(a.marker for a in lud.alfa)
    out = []
    for inst in sort_idents(declared):
        if uses[inst]:
            continue
        label = declared[inst]
        frag = lud.fragment_of(label)
        # a lone dm plugged as a fragment stands for sentence-external material
        if frag in plug and len(lud.fragment_conditions.get(frag, ())) == 1:
            continue
        out.append(_warning("unused-instance", f"{inst} is declared by {label} but never used", label))
    return out


def has_errors(diags: Iterable[Diagnostic]) -> bool:
    return any(d.is_error for d in diags)


# --------------------------------------------------------------------------
# Pluggings and admissibility


@dataclass(frozen=True)
class Plugging:
    """A map from holes to labels, stored in numeric hole order."""

    assignment: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(
            self, "assignment",
            {h: self.assignment[h] for h in sort_idents(self.assignment)},
        )

    def __getitem__(self, hole: str) -> str:
        return self.assignment[hole]

    def __len__(self) -> int:
        return len(self.assignment)

    def items(self):
        return self.assignment.items()

    def sort_key(self) -> tuple:
        return tuple((ident_key(h), ident_key(lab)) for h, lab in self.assignment.items())

    def __hash__(self) -> int:
        return hash(tuple(self.assignment.items()))

    def __str__(self) -> str:
        return "\n".join(f"plug_into({lab},{h})" for h, lab in self.assignment.items())


def canonical_order(pluggings: Iterable[Plugging]) -> list[Plugging]:
    return sorted(pluggings, key=Plugging.sort_key)


@dataclass(frozen=True)
class Violation:
    kind: str  # not-injective | not-total | cyclic | leq-unsatisfied | bad-codomain
    detail: str


@dataclass(frozen=True)
class Verdict:
    admissible: bool
    violations: tuple[Violation, ...] = ()

    def __bool__(self) -> bool:
        return self.admissible

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}


class DominanceTree:
    """Parent links of the dominance graph induced by a bijective plugging.

    Nodes are fragment roots and holes.  Each hole's parent is the fragment
    owning it; each plugged fragment's parent is the hole it fills.
    """

    def __init__(self, lud: LudRepresentation, plugging: Plugging):
        self.lud = lud
        self.plugging = plugging
        self.hole_of = {lab: h for h, lab in plugging.items()}

    def parent(self, node: str) -> str | None:
        if is_hole(node):
            return self.lud.hole_owner.get(node)
        return self.hole_of.get(node)

    def path_to_root(self, node: str) -> list[str]:
        """Nodes from ``node`` upward; stops before repeating a node."""
        path, seen = [], set()
        while node is not None and node not in seen:
            path.append(node)
            seen.add(node)
            node = self.parent(node)
        return path

    def dominates(self, upper: str, lower: str) -> bool:
        """Reflexive-transitive dominance."""
        return upper in self.path_to_root(lower)

    def children(self, node: str) -> tuple[str, ...]:
        if is_hole(node):
            lab = self.plugging.assignment.get(node)
            return (lab,) if lab is not None else ()
        return self.lud.fragment_holes.get(node, ())

    def subtree(self, node: str) -> list[str]:
        out, stack = [], [node]
        while stack:
            n = stack.pop()
            out.append(n)
            stack.extend(reversed(self.children(n)))
        return out


def is_admissible(lud: LudRepresentation, p: Plugging) -> Verdict:
    defined = lud.defined_labels
    holes = set(lud.holes)
    for h, lab in p.items():
        if h not in holes:
            raise UnknownIdentError(f"plugging mentions unknown hole {h}")
        if lab not in defined:
            raise UnknownIdentError(f"plugging mentions unknown label {lab}")

    plug = set(lud.pluggable)
    violations: list[Violation] = []
    for h in lud.holes:
        if h not in p.assignment:
            violations.append(Violation("not-total", f"{h} is unplugged"))
    by_label: dict[str, list[str]] = {}
    for h, lab in p.items():
        by_label.setdefault(lab, []).append(h)
        if lab not in plug:
            violations.append(Violation("bad-codomain", f"{lab} in {h} is not pluggable"))
    for lab in sort_idents(by_label):
        if len(by_label[lab]) > 1:
            violations.append(Violation("not-injective", f"{lab} plugs {', '.join(by_label[lab])}"))
    if violations:
        return Verdict(False, tuple(violations))

    tree = DominanceTree(lud, p)
    for lab in lud.pluggable:
        path = tree.path_to_root(lab)
        last = path[-1]
        closing = tree.parent(last)
        if closing is not None:
            # the walk stopped because it re-entered a visited node
            violations.append(Violation("cyclic", f"{last} -> {closing}"))
            break
    if violations:
        return Verdict(False, tuple(violations))

    for c in lud.leq:
        if not tree.dominates(c.upper, lud.fragment_of(c.lower)):
            violations.append(Violation("leq-unsatisfied", str(c)))
    return Verdict(not violations, tuple(violations))
