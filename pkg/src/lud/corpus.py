"""Corpus entries, the corpus runner, and a seeded random LUD generator."""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from pathlib import Path

from .core import (
    DiscRel,
    Dm,
    Grouping,
    Leq,
    LudError,
    LudRepresentation,
    Mood,
    Neg,
    Pred,
    Role,
    Alfa,
    has_errors,
    validate,
)
from .drs import render_term
from .engine import enumerate_pluggings, verify_equivalence
from .parser import parse
from .resolver import LexiconEntry, default_lexicon, insert_mode, parse_lexicon, resolve

_HEADER = re.compile(r"^([a-z0-9-]+)\s*:\s*(.*)$")


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    transliteration: tuple[str, ...]
    gloss: str
    translation: str
    lud: LudRepresentation
    surface: dict[str, int]
    expected_count: int | None
    expected_rank1: tuple[str, ...]
    path: Path | None = None
    notes: tuple[str, ...] = field(default=())


def split_entry(text: str) -> tuple[list[str], str, int]:
    """Split an entry file into header lines and LUD text.

    Returns (header lines, body, number of lines before the body).  Files
    without a header are all body.
    """
    lines = text.split("\n")
    for n, line in enumerate(lines):
        if line.strip().startswith("index"):
            return lines[:n], "\n".join(lines[n:]), n
    return [], text, 0


def parse_surface(value: str) -> dict[str, int]:
    out = {}
    for item in value.split():
        label, _, pos = item.partition("=")
        if not pos.isdigit():
            raise ValueError(f"bad surface position {item!r}")
        out[label] = int(pos)
    return out


def read_header(lines: list[str]) -> tuple[dict[str, list[str]], list[str]]:
    fields: dict[str, list[str]] = {}
    notes = []
    for line in lines:
        s = line.strip()
        if not s:
            continue
        if s.startswith("#"):
            notes.append(s.lstrip("# ").rstrip())
            continue
        m = _HEADER.match(s)
        if m is None:
            raise ValueError(f"bad header line {s!r}")
        fields.setdefault(m.group(1), []).append(m.group(2).strip())
    return fields, notes


def load_entry(path: str | Path) -> CorpusEntry:
    path = Path(path)
    header, body, offset = split_entry(path.read_text(encoding="utf-8"))
    fields, notes = read_header(header)
    lud = parse(body, line_offset=offset)

    def one(key, default=""):
        return fields.get(key, [default])[0]

    count = one("expected-count", None)
    return CorpusEntry(
        id=one("id", path.stem),
        transliteration=tuple(one("transliteration").split()),
        gloss=one("gloss"),
        translation=one("translation"),
        lud=lud,
        surface=parse_surface(one("surface")),
        expected_count=int(count) if count is not None else None,
        expected_rank1=tuple(fields.get("expected-rank1", ())),
        path=path,
        notes=tuple(notes),
    )


def load_lud(path: str | Path) -> LudRepresentation:
    """Read a bare LUD file or the LUD body of a corpus entry."""
    _, body, offset = split_entry(Path(path).read_text(encoding="utf-8"))
    return parse(body, line_offset=offset)


def load_surface(path: str | Path) -> dict[str, int]:
    text = Path(path).read_text(encoding="utf-8")
    header, _, _ = split_entry(text)
    if not any(line.strip().startswith("index") for line in text.splitlines()):
        header = text.splitlines()  # a bare metadata file
    fields, _ = read_header(header)
    return parse_surface(fields.get("surface", [""])[0])


@dataclass
class EntryResult:
    id: str
    passed: bool
    messages: list[str]


@dataclass
class CorpusReport:
    results: list[EntryResult]
    warnings: list[str]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def render(self) -> str:
        lines = [f"warning: {w}" for w in self.warnings]
        for r in self.results:
            status = "PASS" if r.passed else "FAIL"
            lines.append(f"{status} {r.id}" + (": " + "; ".join(r.messages) if r.messages else ""))
        failed = sum(not r.passed for r in self.results)
        lines.append(f"{len(self.results)} entries, {failed} failed")
        return "\n".join(lines) + "\n"


def check_entry(entry: CorpusEntry, lexicon: list[LexiconEntry]) -> EntryResult:
    msgs = []
    diags = validate(entry.lud)
    if has_errors(diags):
        return EntryResult(entry.id, False, [str(d) for d in diags if d.is_error])
    if not verify_equivalence(entry.lud):
        msgs.append("search and oracle disagree")
    pluggings = enumerate_pluggings(entry.lud)
    if entry.expected_count is not None and len(pluggings) != entry.expected_count:
        msgs.append(f"expected {entry.expected_count} pluggings, observed {len(pluggings)}")
    ranked = resolve(entry.lud, entry.surface, lexicon)
    terms = sorted(render_term(entry.lud, p) for p in ranked.best)
    if sorted(entry.expected_rank1) != terms:
        msgs.append(f"expected rank-1 {sorted(entry.expected_rank1)}, observed {terms}")
    ok = not msgs
    if ok:
        msgs.append(f"count={len(pluggings)} rank1={len(terms)}")
    return EntryResult(entry.id, ok, msgs)


def run_corpus(corpus_dir: str | Path, lexicon: list[LexiconEntry] | None = None) -> CorpusReport:
    """Check every ``*.lud`` entry in a directory, in name order."""
    corpus_dir = Path(corpus_dir)
    if not corpus_dir.is_dir():
        raise LudError(f"io: {corpus_dir} is not a directory")
    if lexicon is None:
        lex_file = corpus_dir / "lexicon.txt"
        lexicon = parse_lexicon(lex_file.read_text()) if lex_file.exists() else default_lexicon()
    paths = sorted(corpus_dir.glob("*.lud"))
    warnings = [] if paths else [f"no corpus entries in {corpus_dir}"]
    results = []
    for path in paths:
        try:
            entry = load_entry(path)
            results.append(check_entry(entry, lexicon))
        except (LudError, ValueError) as exc:
            results.append(EntryResult(path.stem, False, [f"{type(exc).__name__}: {exc}"]))
    return CorpusReport(results, warnings)


# --------------------------------------------------------------------------
# Random instances


def random_lud(seed: int, *, max_holes: int = 10) -> LudRepresentation:
    """A validated-clean representation wired like the corpus entries.

    1-4 discrels drawn from the default lexicon, an optional negation, one
    pinned leaf or external placeholder per discrel plus one matrix leaf,
    mode inserted when there are two or more relations.  Label and hole
    numbers are shuffled, leq constraints on pinned leaves are sometimes
    dropped, and leaves sometimes carry an alfa presupposition.
    """
    rng = random.Random(seed)
    lexicon = default_lexicon()
    n_rel = rng.choices((1, 2, 3, 4), weights=(3, 4, 3, 1))[0]
    with_mode = n_rel >= 2 or rng.random() < 0.3
    n_neg = rng.randint(0, 1)
    if 1 + 2 * n_rel + with_mode + n_neg > max_holes:
        n_neg = 0

    hole_ids = iter(rng.sample(range(1, 40), 12))
    label_ids = iter(rng.sample(range(2, 200), 60))
    inst_ids = iter(rng.sample(range(1, 100), 30))

    def new_label():
        return f"l{next(label_ids)}"

    def new_inst():
        return f"i{next(inst_ids)}"

    conditions: dict[str, list] = {"l1": [Mood("decl", "h0")]}
    groupings: list[Grouping] = []
    alfa: list[Alfa] = []
    leq: list[Leq] = []
    droppable: list[Leq] = []
    words = ["getsuyoubi", "gogo", "seminaa", "zikan", "yamada", "daijoubu", "ike", "iru", "haitte"]

    def leaf(placeholder: bool = False) -> str:
        if placeholder:
            label = new_label()
            conditions[label] = [Dm(new_inst())]
            return label
        root, d, p = new_label(), new_label(), new_label()
        inst = new_inst()
        conditions[d] = [Dm(inst)]
        conditions[p] = [Pred(rng.choice(words), inst)]
        groupings.append(Grouping(root, (d, p)))
        if rng.random() < 0.25:
            croot, cd, cp = new_label(), new_label(), new_label()
            cinst = new_inst()
            conditions[cd] = [Dm(cinst)]
            conditions[cp] = [Pred(rng.choice(words), cinst)]
            groupings.append(Grouping(croot, (cd, cp)))
            alfa.append(Alfa(cinst, rng.choice(["undef", "pron", "def"]), root, croot))
            conditions[p].append(Role(inst, "arg1", cinst))
        return root

    for _ in range(n_rel):
        entry = rng.choice(lexicon)
        label = new_label()
        restr, scope = f"h{next(hole_ids)}", f"h{next(hole_ids)}"
        conditions[label] = [DiscRel(entry.rel_type, restr, scope)]
        leq.append(Leq(label, "h0"))
        if entry.cls.value == "conclusion-external":
            pinned, is_placeholder = scope, True
        elif entry.cls.value == "antecedent-external":
            pinned, is_placeholder = restr, True
        else:
            pinned, is_placeholder = restr, False
        lab = leaf(placeholder=is_placeholder)
        leq.append(Leq(lab, pinned))
        if rng.random() < 0.15:
            droppable.append(Leq(lab, pinned))

    matrix = leaf()
    if n_neg:
        nroot, nd, nn = new_label(), new_label(), new_label()
        inst = new_inst()
        neg_hole = f"h{next(hole_ids)}"
        conditions[nd] = [Dm(inst)]
        conditions[nn] = [Neg(inst, neg_hole)]
        groupings.append(Grouping(nroot, (nd, nn)))
        leq.append(Leq(matrix, neg_hole))

    pre = LudRepresentation(
        top_label="l1",
        top_hole="h0",
        conditions={k: tuple(v) for k, v in conditions.items()},
        groupings=tuple(groupings),
        alfa=tuple(alfa),
        leq=tuple(leq),
    )
    lud = insert_mode(pre, always=with_mode)
    # dropping a pin only after mode insertion keeps the pinned hole free of the mode
    lud = lud.replace(leq=tuple(c for c in lud.leq if c not in droppable))
    assert not has_errors(validate(lud)), [str(d) for d in validate(lud)]
    return lud

