"""Instantiating a plugging into a nested DRS, and rendering it."""
from __future__ import annotations

from dataclasses import dataclass, field

from .core import (
    DiscRel,
    Dm,
    LudError,
    LudRepresentation,
    Mode,
    Neg,
    Plugging,
    Pred,
    Role,
    is_admissible,
)


class InadmissiblePluggingError(LudError):
    code = "inadmissible-plugging"


@dataclass(frozen=True)
class Annotation:
    """A rendering-only condition such as ``anaph(i5)``."""

    name: str
    marker: str

    def instances(self) -> tuple[str, ...]:
        return (self.marker,)

    def __str__(self) -> str:
        return f"{self.name}({self.marker})"


def _cond_text(c) -> str:
    if isinstance(c, Pred):
        return f"{c.name}({c.marker})"
    if isinstance(c, Role):
        return f"{c.role}({c.event},{c.filler})"
    return str(c)


@dataclass
class DrsBox:
    referents: list[str] = field(default_factory=list)
    conditions: list = field(default_factory=list)
    # (connective, boxes); connective is "discrel(<type>)" or "neg"
    children: list[tuple[str, list["DrsBox"]]] = field(default_factory=list)

    def merge(self, other: "DrsBox") -> None:
        for r in other.referents:
            if r not in self.referents:
                self.referents.append(r)
        self.conditions.extend(other.conditions)
        self.children.extend(other.children)

    def is_empty(self) -> bool:
        return not (self.referents or self.conditions or self.children)

    def walk(self):
        yield self
        for _, boxes in self.children:
            for b in boxes:
                yield from b.walk()


class _Builder:
    def __init__(self, lud: LudRepresentation, p: Plugging):
        self.lud = lud
        self.p = p
        self.alfa_by_anchor: dict[str, list] = {}
        for a in lud.alfa:
            self.alfa_by_anchor.setdefault(lud.fragment_of(a.anchor), []).append(a)
        self.moved = {}  # modifier label -> host fragment, when they differ
        for m in lud.meta:
            host = lud.fragment_of(m.host)
            if lud.fragment_of(m.modifier) != host:
                self.moved[m.modifier] = host

    def hole(self, h: str) -> DrsBox:
        return self.fragment(self.p[h])

    def fragment(self, root: str) -> DrsBox:
        box = DrsBox()
        for label, c in self.lud.fragment_conditions.get(root, ()):
            if label in self.moved:
                continue
            self._add(box, c)
        for label, host in self.moved.items():
            if host == root:
                for c in self.lud.conditions.get(label, ()):
                    self._add(box, c)
        for a in self.alfa_by_anchor.get(root, ()):
            box.merge(self.fragment(a.content))
            if a.sort != "undef":
                box.conditions.append(Annotation("anaph" if a.sort == "pron" else "def", a.marker))
        return box

    def _add(self, box: DrsBox, c) -> None:
        if isinstance(c, Dm):
            if c.marker not in box.referents:
                box.referents.append(c.marker)
        elif isinstance(c, (Pred, Role)):
            box.conditions.append(c)
        elif isinstance(c, DiscRel):
            box.children.append((f"discrel({c.rel_type})", [self.hole(c.restriction), self.hole(c.scope)]))
        elif isinstance(c, Neg):
            box.children.append(("neg", [self.hole(c.scope)]))
        elif isinstance(c, Mode):
            box.merge(self.hole(c.scope))
        # a mood below the top cannot occur in validated input


def build_drs(lud: LudRepresentation, p: Plugging) -> DrsBox:
    verdict = is_admissible(lud, p)
    if not verdict:
        raise InadmissiblePluggingError(
            "; ".join(f"{v.kind}: {v.detail}" for v in verdict.violations)
        )
    return _Builder(lud, p).hole(lud.top_hole)


def undeclared_references(box: DrsBox, outer: frozenset[str] = frozenset()) -> list[str]:
    """Instances used by a condition but declared neither in its box nor above it."""
    scope = outer | set(box.referents)
    missing = []
    for c in box.conditions:
        missing.extend(i for i in c.instances() if i not in scope)
    for connective, boxes in box.children:
        for b in boxes:
            missing.extend(undeclared_references(b, frozenset(scope)))
    return missing


# --------------------------------------------------------------------------
# Rendering


def _box_lines(box: DrsBox) -> list[str]:
    if box.is_empty():
        return ["+--+", "+--+"]
    body = [" ".join(box.referents), None]
    body.extend(_cond_text(c) for c in box.conditions)
    for connective, boxes in box.children:
        body.append(f"{connective}:")
        for child in boxes:
            body.extend("  " + line for line in _box_lines(child))
    width = max(len(line) for line in body if line is not None)
    rule = "+" + "-" * (width + 2) + "+"
    out = [rule]
    for line in body:
        out.append(rule if line is None else f"| {line.ljust(width)} |")
    out.append(rule)
    return out


def render_box(box: DrsBox) -> str:
    return "\n".join(_box_lines(box)) + "\n"


def render_term(lud: LudRepresentation, p: Plugging) -> str:
    """Compact scope term such as ``topic(getsuyoubi, daijoubu)``."""
    if not is_admissible(lud, p):
        raise InadmissiblePluggingError("cannot render an inadmissible plugging")

    def frag(root: str) -> str:
        conds = [c for _, c in lud.fragment_conditions.get(root, ())]
        for c in conds:
            if isinstance(c, DiscRel):
                return f"{c.rel_type}({hole(c.restriction)}, {hole(c.scope)})"
            if isinstance(c, Mode):
                return hole(c.scope)
            if isinstance(c, Neg):
                return f"neg({hole(c.scope)})"
        for c in conds:
            if isinstance(c, Pred):
                return c.name
        if len(conds) == 1 and isinstance(conds[0], Dm):
            return "anaph"
        return root

    def hole(h: str) -> str:
        return frag(p[h])

    return hole(lud.top_hole)
