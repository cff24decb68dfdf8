import pytest
from hypothesis import given, settings, strategies as st

from lud.core import DominanceTree, Leq, LudRepresentation, Mood, Pred, Dm, is_admissible
from lud.corpus import random_lud
from lud.engine import (
    EnumerationOptions,
    InvalidInputError,
    TooLargeError,
    enumerate_oracle,
    enumerate_pluggings,
    search_trace,
    verify_equivalence,
)
from lud.parser import parse

seeds = st.integers(min_value=0, max_value=100_000)


def test_f1_six(f1):
    found = enumerate_pluggings(f1)
    assert len(found) == 6
    assert found == enumerate_oracle(f1)


def test_forced_holes_f1(f1):
    found = enumerate_pluggings(f1)
    forced = {"h1": "l5", "h3": "l8", "h6": "l16", "h7": "l21", "h8": "l24"}
    for p in found:
        assert {h: p[h] for h in forced} == forced


def test_search_forces_before_branching(f1):
    trace = search_trace(f1)
    # before any branching only the mode's holes are singletons
    assert trace[:2] == [("h7", "l21"), ("h8", "l24")]
    assert trace[2] == ("h0", "l2")


def test_dropping_constraint_grows(f1):
    loose = f1.replace(leq=tuple(c for c in f1.leq if c != Leq("l17", "h2")))
    assert verify_equivalence(loose)
    assert len(enumerate_pluggings(loose)) > 6


def test_max_solutions_is_prefix(f1):
    full = enumerate_pluggings(f1)
    for k in (1, 3, 6, 10):
        assert enumerate_pluggings(f1, EnumerationOptions(max_solutions=k)) == full[:k]
    with pytest.raises(ValueError):
        EnumerationOptions(max_solutions=0)


def test_invalid_input():
    lud = parse("index:(l1,h0)\nlud_preds: l1-mood(decl,h0)")
    with pytest.raises(InvalidInputError):
        enumerate_pluggings(lud)
    with pytest.raises(InvalidInputError):
        enumerate_oracle(lud)


def test_oracle_too_large():
    conditions = {"l1": (Mood("decl", "h0"),)}
    text = ["index:(l1,h0)", "lud_preds:", "  l1-mood(decl,h0)"]
    for k in range(1, 12):
        text.append(f"  l{k + 1}-neg(i{k},h{k})")
    text.append("  l13-dm(i20)")
    lud = parse("\n".join(text))
    assert len(lud.holes) == 12
    with pytest.raises(TooLargeError):
        enumerate_oracle(lud)


def test_no_constraints_counts_chains():
    # three unary fragments and a leaf under h0: every stacking order works
    lud = parse(
        "index:(l1,h0)\nlud_preds:\n  l1-mood(decl,h0)\n"
        "  l2-neg(i1,h1)\n  l3-neg(i1,h2)\n  l4-neg(i1,h3)\n  l5-dm(i1)\n"
    )
    found = enumerate_pluggings(lud)
    assert len(found) == 6  # 3! orders, leaf always at the bottom
    assert found == enumerate_oracle(lud)


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_search_equals_oracle(seed):
    lud = random_lud(seed)
    assert enumerate_pluggings(lud) == enumerate_oracle(lud)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_pluggings_are_trees(seed):
    lud = random_lud(seed)
    for p in enumerate_pluggings(lud):
        assert is_admissible(lud, p)
        tree = DominanceTree(lud, p)
        for lab in lud.pluggable:
            assert tree.path_to_root(lab)[-1] == lud.top_label
        for c in lud.leq:
            assert tree.dominates(c.upper, lud.fragment_of(c.lower))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_output_canonical_and_unique(seed):
    found = enumerate_pluggings(random_lud(seed))
    keys = [p.sort_key() for p in found]
    assert keys == sorted(keys)
    assert len(set(found)) == len(found)


@settings(max_examples=40, deadline=None)
@given(seeds, st.data())
def test_adding_leq_is_monotone(seed, data):
    lud = random_lud(seed)
    lower = data.draw(st.sampled_from(lud.pluggable))
    upper = data.draw(st.sampled_from(lud.holes))
    tighter = lud.replace(leq=lud.leq + (Leq(lower, upper),))
    before = set(enumerate_pluggings(lud))
    try:
        after = set(enumerate_pluggings(tighter))
    except InvalidInputError:
        return
    assert after <= before


@pytest.mark.parametrize("n", range(1, 8))
def test_oracle_visits_every_bijection(n):
    import math

    import numpy as np

    from lud.engine import _scan_bijections

    # all holes owned by the top and no constraints: every row survives
    empty = np.zeros(0, dtype=np.int64)
    rows = _scan_bijections(n, np.full(n + 1, n, dtype=np.int64), empty, empty)
    assert len({tuple(r) for r in rows}) == len(rows) == math.factorial(n)
