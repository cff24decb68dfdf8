import pytest
from hypothesis import given, settings, strategies as st

from conftest import ENTRY_IDS, F1_PREFERRED, GOLDEN
from lud.core import Plugging, Pred
from lud.corpus import random_lud
from lud.drs import (
    Annotation,
    DrsBox,
    InadmissiblePluggingError,
    build_drs,
    render_box,
    render_term,
    undeclared_references,
)
from lud.engine import enumerate_pluggings
from lud.resolver import default_lexicon, resolve


def test_t1_box_by_hand(entries):
    lud = entries["T1"].lud
    (p,) = enumerate_pluggings(lud)
    box = build_drs(lud, p)
    assert box.referents == [] and box.conditions == []
    [(connective, (restr, scope))] = box.children
    assert connective == "discrel(topic)"
    assert restr.referents == ["i1"] and restr.conditions == [Pred("getsuyoubi", "i1")]
    assert scope.referents == ["i2"] and scope.conditions == [Pred("daijoubu", "i2")]


def test_f1_preferred_box(f1):
    box = build_drs(f1, Plugging(F1_PREFERRED))
    [(conn, (inner, ext))] = box.children
    assert conn == "discrel(explanation-noda)"
    assert ext.referents == ["i7"]
    # mode is transparent: the topic relation sits directly in noda's restriction
    assert [c for c, _ in inner.children] == ["discrel(topic)"]
    # the tloc modifier and the pronoun land in the event's box
    cause = next(b for b in box.walk() if "i2" in b.referents)
    assert Annotation("anaph", "i5") in cause.conditions
    assert "i5" in cause.referents and "i6" in cause.referents


@pytest.mark.parametrize("entry_id", ENTRY_IDS)
def test_golden_term_and_box(entries, entry_id):
    e = entries[entry_id]
    best = resolve(e.lud, e.surface, default_lexicon()).best
    terms = sorted(render_term(e.lud, p) for p in best)
    assert terms == (GOLDEN / f"{entry_id}.term.txt").read_text().splitlines()
    assert render_box(build_drs(e.lud, best[0])) == (GOLDEN / f"{entry_id}.box.txt").read_text()


def test_def_annotation(entries):
    lud = entries["F5"].lud
    box = build_drs(lud, enumerate_pluggings(lud)[0])
    assert any(Annotation("def", "i4") in b.conditions for b in box.walk())


def test_inadmissible_rejected(f1):
    bad = Plugging({**F1_PREFERRED, "h1": "l2", "h5": "l5"})
    with pytest.raises(InadmissiblePluggingError):
        build_drs(f1, bad)
    with pytest.raises(InadmissiblePluggingError):
        render_term(f1, bad)


def test_empty_box():
    assert render_box(DrsBox()) == "+--+\n+--+\n"


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=100_000))
def test_every_reading_is_closed(seed):
    lud = random_lud(seed)
    for p in enumerate_pluggings(lud):
        box = build_drs(lud, p)
        assert undeclared_references(box) == []
        text = render_box(box)
        widths = {len(line) for line in text.splitlines()}
        assert len(widths) == 1


@pytest.mark.parametrize("entry_id", ENTRY_IDS)
def test_corpus_readings_closed(entries, entry_id):
    lud = entries[entry_id].lud
    for p in enumerate_pluggings(lud):
        assert undeclared_references(build_drs(lud, p)) == []
