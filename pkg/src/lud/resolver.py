"""Scope resolution among several discourse relations in one sentence.

Relations are classed by which of their parts is bound outside the
sentence.  Relations with an external part take wide scope over fully
internal ones; fully internal relations are ordered by surface position
(earlier morpheme scopes wider); externally bound relations are left tied.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from .core import (
    DominanceTree,
    Leq,
    LudError,
    LudRepresentation,
    Mode,
    Plugging,
    ident_number,
    sort_idents,
)
from .engine import enumerate_pluggings


class UnknownRelationError(LudError):
    code = "unknown-relation"


class MissingSurfacePositionError(LudError):
    code = "missing-surface-position"


class AlreadyModedError(LudError):
    code = "already-moded"


class AnaphoricityClass(enum.Enum):
    BOTH_INTERNAL = "both-internal"
    ANTECEDENT_EXTERNAL = "antecedent-external"
    CONCLUSION_EXTERNAL = "conclusion-external"

    @property
    def external(self) -> bool:
        return self is not AnaphoricityClass.BOTH_INTERNAL


@dataclass(frozen=True)
class LexiconEntry:
    rel_type: str
    cls: AnaphoricityClass
    fixed_side: str = "none"  # restriction | scope | none

    def __post_init__(self):
        if self.fixed_side not in ("restriction", "scope", "none"):
            raise ValueError(f"bad fixed side {self.fixed_side!r}")
        external_side = {
            AnaphoricityClass.ANTECEDENT_EXTERNAL: "restriction",
            AnaphoricityClass.CONCLUSION_EXTERNAL: "scope",
        }.get(self.cls)
        if external_side is not None and external_side == self.fixed_side:
            raise ValueError(f"{self.rel_type}: the external side cannot also be the fixed side")

    def __str__(self) -> str:
        return f"rel {self.rel_type} class={self.cls.value} fixed={self.fixed_side}"


DEFAULT_LEXICON_TEXT = """\
rel topic class=both-internal fixed=restriction
rel explanation-node class=both-internal fixed=restriction
rel conditional-nara class=both-internal fixed=restriction
rel explanation-noda class=conclusion-external fixed=none
rel dakara class=antecedent-external fixed=none
"""

_LEX_LINE = re.compile(r"^rel\s+(\S+)\s+class=(\S+)\s+fixed=(\S+)$")


def parse_lexicon(text: str) -> list[LexiconEntry]:
    entries = []
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LEX_LINE.match(line)
        if m is None:
            raise ValueError(f"lexicon line {n}: cannot parse {line!r}")
        try:
            cls = AnaphoricityClass(m.group(2))
        except ValueError:
            raise ValueError(f"lexicon line {n}: unknown class {m.group(2)!r}") from None
        entries.append(LexiconEntry(m.group(1), cls, m.group(3)))
    return entries


def default_lexicon() -> list[LexiconEntry]:
    return parse_lexicon(DEFAULT_LEXICON_TEXT)


def classify(lexicon: list[LexiconEntry], rel_type: str) -> AnaphoricityClass:
    for entry in lexicon:
        if entry.rel_type == rel_type:
            return entry.cls
    raise UnknownRelationError(f"relation {rel_type!r} is not in the lexicon")


def discrel_order(lud: LudRepresentation, p: Plugging) -> set[tuple[str, str]]:
    """Pairs (outer, inner) of discrel labels where inner sits under a hole of outer."""
    tree = DominanceTree(lud, p)
    rels = lud.discrels()
    pairs = set()
    for outer, cond in rels:
        below = set()
        for h in cond.holes():
            below.update(tree.subtree(h))
        for inner, _ in rels:
            if inner != outer and lud.fragment_of(inner) in below:
                pairs.add((outer, inner))
    return pairs


def discrel_chain(lud: LudRepresentation, p: Plugging) -> tuple[str, ...]:
    """Discrel labels ordered outermost first (by number of relations above)."""
    order = discrel_order(lud, p)
    depth = {label: sum(1 for _, inner in order if inner == label) for label, _ in lud.discrels()}
    return tuple(sorted(depth, key=lambda lab: (depth[lab], ident_number(lab))))


@dataclass(frozen=True)
class RankedPluggings:
    groups: tuple[tuple[Plugging, ...], ...]
    warnings: tuple[str, ...] = ()

    @property
    def best(self) -> tuple[Plugging, ...]:
        return self.groups[0] if self.groups else ()

    def flatten(self) -> list[Plugging]:
        return [p for g in self.groups for p in g]


def resolve(
    lud: LudRepresentation,
    surface: dict[str, int],
    lexicon: list[LexiconEntry],
) -> RankedPluggings:
    rels = lud.discrels()
    cls = {label: classify(lexicon, cond.rel_type) for label, cond in rels}
    for label, _ in rels:
        if label not in surface:
            raise MissingSurfacePositionError(f"no surface position for discrel {label}")

    pluggings = enumerate_pluggings(lud)
    orders = {p: discrel_order(lud, p) for p in pluggings}

    # (rule, outer, inner): plugging violates it when outer scopes over inner
    constraints = []
    labels = [label for label, _ in rels]
    for a in labels:
        for b in labels:
            if a == b:
                continue
            if not cls[a].external and cls[b].external:
                constraints.append(("R1", a, b))
    for a in labels:
        for b in labels:
            if a != b and not cls[a].external and not cls[b].external and surface[a] > surface[b]:
                constraints.append(("R2", a, b))

    warnings = []
    active = []
    survivors = list(pluggings)
    for rule, a, b in constraints:
        kept = [p for p in survivors if (a, b) not in orders[p]]
        if not kept:
            warnings.append(f"{rule} skipped for {a} over {b}: it would discard every reading")
            continue
        active.append((rule, a, b))
        survivors = kept

    def violated_rules(p: Plugging) -> int:
        return len({rule for rule, a, b in active if (a, b) in orders[p]})

    by_rank: dict[int, list[Plugging]] = {}
    for p in pluggings:
        by_rank.setdefault(violated_rules(p), []).append(p)
    groups = tuple(tuple(by_rank[k]) for k in sorted(by_rank))
    return RankedPluggings(groups, tuple(warnings))


def insert_mode(pre: LudRepresentation, *, always: bool = False) -> LudRepresentation:
    """Add a ``mode`` fragment collecting the discourse relations above the matrix.

    Holes of discrels that already bound a label (the lexically pinned
    side, or an external placeholder) are left alone; every other discrel
    hole gets the mode label below it.  Matrix material is every pluggable
    non-discrel label with no ``leq`` into a discrel hole or the top hole;
    it is placed under the mode hole.  With a single discrel (and
    ``always`` unset) the matrix goes straight under the discrel's free
    hole, and with none it goes under the top hole.
    """
    if any(isinstance(c, Mode) for _, c in pre.iter_conditions()):
        raise AlreadyModedError("representation already has a mode condition")

    rels = pre.discrels()
    rel_holes = {h for _, c in rels for h in c.holes()}
    bound = {c.upper for c in pre.leq}
    rel_frags = {pre.fragment_of(label) for label, _ in rels}
    attached = {pre.fragment_of(c.lower) for c in pre.leq if c.upper in rel_holes or c.upper == pre.top_hole}
    matrix = [lab for lab in pre.pluggable if lab not in rel_frags and lab not in attached]
    free = [h for _, c in rels for h in c.holes() if h not in bound]

    leq = list(pre.leq)
    conditions = dict(pre.conditions)
    if not rels:
        leq += [Leq(r, pre.top_hole) for r in matrix]
    elif len(rels) == 1 and not always:
        _, cond = rels[0]
        targets = free if len(free) <= 1 else [cond.scope]
        leq += [Leq(r, h) for r in matrix for h in targets]
    else:
        mode_label = f"l{max(ident_number(x) for x in pre.defined_labels) + 1}"
        mode_hole = f"h{max(ident_number(x) for x in pre.holes) + 1}"
        conditions[mode_label] = (Mode(mode_hole),)
        leq += [Leq(mode_label, h) for h in sort_idents(free)]
        leq += [Leq(r, mode_hole) for r in matrix]
    return pre.replace(conditions=conditions, leq=tuple(leq))


def strip_mode(lud: LudRepresentation) -> LudRepresentation:
    """Remove mode labels and every constraint mentioning them or their holes."""
    mode_labels = {label for label, c in lud.iter_conditions() if isinstance(c, Mode)}
    mode_holes = {c.scope for label, c in lud.iter_conditions() if isinstance(c, Mode)}
    conditions = {k: v for k, v in lud.conditions.items() if k not in mode_labels}
    leq = tuple(c for c in lud.leq if c.lower not in mode_labels and c.upper not in mode_holes)
    return lud.replace(conditions=conditions, leq=leq)
