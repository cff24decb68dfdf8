"""Enumeration of admissible pluggings.

Two independent routes produce the same canonical list: a propagating
backtracking search, and a brute-force oracle that scores every bijection
between holes and pluggable labels.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .core import (
    LudError,
    LudRepresentation,
    Plugging,
    canonical_order,
    ident_key,
    is_admissible,
    validate,
)

ORACLE_MAX_HOLES = 10


class InvalidInputError(LudError):
    code = "invalid-input"


class TooLargeError(LudError):
    code = "too-large"


@dataclass(frozen=True)
class EnumerationOptions:
    max_solutions: int | None = None
    mode: str = "propagating"  # or "oracle"

    def __post_init__(self):
        if self.max_solutions is not None and self.max_solutions < 1:
            raise ValueError("max_solutions must be >= 1")
        if self.mode not in ("propagating", "oracle"):
            raise ValueError(f"unknown mode {self.mode!r}")


def _check_valid(lud: LudRepresentation) -> None:
    errors = [d for d in validate(lud) if d.is_error]
    if errors:
        raise InvalidInputError("; ".join(str(d) for d in errors))


def enumerate_pluggings(lud: LudRepresentation, opts: EnumerationOptions | None = None) -> list[Plugging]:
    opts = opts or EnumerationOptions()
    if opts.mode == "oracle":
        found = enumerate_oracle(lud)
    else:
        _check_valid(lud)
        found = canonical_order(_Search(lud).run())
    if opts.max_solutions is not None:
        found = found[: opts.max_solutions]
    return found


# --------------------------------------------------------------------------
# Propagating search


class _Search:
    def __init__(self, lud: LudRepresentation):
        self.lud = lud
        self.top = lud.top_label
        self.owner = lud.hole_owner
        self.frag_holes = lud.fragment_holes
        self.labels = lud.pluggable
        self.leq = [(lud.fragment_of(c.lower), c.upper) for c in lud.leq]
        self.trace: list[tuple[str, str]] = []

    def run(self) -> list[Plugging]:
        out: list[Plugging] = []
        self._solve({}, {}, out)
        return out

    # ancestry under a partial assignment
    def _climb(self, node: str, hole_of: dict[str, str]):
        """Yield holes above fragment ``node``; return the topmost fragment reached."""
        while True:
            h = hole_of.get(node)
            if h is None:
                return node
            yield h
            node = self.owner[h]

    def _root_of(self, node: str, hole_of) -> str:
        gen = self._climb(node, hole_of)
        try:
            while True:
                next(gen)
        except StopIteration as stop:
            return stop.value

    def _creates_cycle(self, hole: str, label: str, hole_of) -> bool:
        return self._root_of(self.owner[hole], hole_of) == label

    def _has_open_hole(self, hole: str, assign) -> bool:
        stack = [hole]
        while stack:
            h = stack.pop()
            lab = assign.get(h)
            if lab is None:
                return True
            stack.extend(self.frag_holes.get(lab, ()))
        return False

    def _leq_possible(self, lower: str, upper: str, assign, hole_of) -> bool:
        gen = self._climb(lower, hole_of)
        try:
            while True:
                if next(gen) == upper:
                    return True
        except StopIteration as stop:
            root = stop.value
        if root == self.top:
            return False
        # root must later hang below upper
        if self._root_of(self.owner[upper], hole_of) == root:
            return False
        return self._has_open_hole(upper, assign)

    def _feasible(self, hole: str, label: str, assign, hole_of) -> bool:
        if self._creates_cycle(hole, label, hole_of):
            return False
        assign[hole] = label
        hole_of[label] = hole
        try:
            return all(self._leq_possible(lo, up, assign, hole_of) for lo, up in self.leq)
        finally:
            del assign[hole]
            del hole_of[label]

    def _candidates(self, assign, hole_of) -> dict[str, list[str]]:
        free = [lab for lab in self.labels if lab not in hole_of]
        return {
            h: [lab for lab in free if self._feasible(h, lab, assign, hole_of)]
            for h in self.lud.holes
            if h not in assign
        }

    def _solve(self, assign: dict[str, str], hole_of: dict[str, str], out: list[Plugging]) -> None:
        assign, hole_of = dict(assign), dict(hole_of)
        while True:
            cands = self._candidates(assign, hole_of)
            if not cands:
                p = Plugging(assign)
                if is_admissible(self.lud, p):
                    out.append(p)
                return
            if any(not c for c in cands.values()):
                return
            forced = [h for h in self.lud.holes if h in cands and len(cands[h]) == 1]
            if not forced:
                break
            # one at a time: two singletons may compete for the same label
            h = forced[0]
            assign[h] = cands[h][0]
            hole_of[cands[h][0]] = h
            self.trace.append((h, cands[h][0]))

        hole = min(cands, key=lambda h: (len(cands[h]), ident_key(h)))
        for lab in cands[hole]:
            self.trace.append((hole, lab))
            assign[hole] = lab
            hole_of[lab] = hole
            self._solve(assign, hole_of, out)
            del assign[hole]
            del hole_of[lab]


def search_trace(lud: LudRepresentation) -> list[tuple[str, str]]:
    """The (hole, label) decisions made by the propagating search, in order."""
    _check_valid(lud)
    s = _Search(lud)
    s.run()
    return s.trace


# --------------------------------------------------------------------------
# Brute-force oracle


@njit(cache=True)
def _scan_bijections(n, owner, leq_lower, leq_upper):
    """Visit all n! bijections (Heap's algorithm) and keep the admissible ones.

    ``perm[h]`` is the fragment index plugged into hole h and ``owner[h]``
    the fragment owning hole h; index ``n`` stands for the top label.
    Returns an array whose rows are the admissible ``perm`` vectors.
    The row check is written inline: as a helper call it costs 4x more.
    """
    perm = np.arange(n)
    hole_of = np.arange(n + 1)
    holed = np.unique(owner[:n])
    holed = holed[holed < n]
    seen = np.zeros(n + 1, dtype=np.int64)
    stamp = 0
    found = np.empty((16, max(n, 1)), dtype=np.int64)
    count = 0
    c = np.zeros(n, dtype=np.int64)
    i = 1
    while True:
        ok = True
        # leq first, since most bijections fail it within a step or two: the
        # upper hole must lie on the way up from the lower fragment.  The
        # walk is bounded so a cycle cannot trap it.
        for k in range(leq_lower.shape[0]):
            cur = leq_lower[k]
            hit = False
            steps = 0
            while cur != n and steps <= n:
                h = hole_of[cur]
                if h == leq_upper[k]:
                    hit = True
                    break
                cur = owner[h]
                steps += 1
            if not hit:
                ok = False
                break
        # Only fragments owning holes can sit on a cycle, so walking up from
        # each of them decides acyclicity.  seen[f] == stamp marks fragments
        # already known to reach the top under this bijection.
        if ok:
            stamp += 1
            for k in range(holed.shape[0]):
                cur = holed[k]
                steps = 0
                while cur != n and seen[cur] != stamp:
                    if steps > n:
                        ok = False
                        break
                    cur = owner[hole_of[cur]]
                    steps += 1
                if not ok:
                    break
                cur = holed[k]
                while cur != n and seen[cur] != stamp:
                    seen[cur] = stamp
                    cur = owner[hole_of[cur]]
        if ok:
            if count == found.shape[0]:
                grown = np.empty((2 * count, found.shape[1]), dtype=np.int64)
                grown[:count] = found
                found = grown
            found[count, :n] = perm
            count += 1
        # next bijection
        while i < n and c[i] >= i:
            c[i] = 0
            i += 1
        if i >= n:
            break
        j = 0 if i % 2 == 0 else c[i]
        a, b = perm[j], perm[i]
        perm[j], perm[i] = b, a
        hole_of[a], hole_of[b] = i, j
        c[i] += 1
        i = 1
    return found[:count, :n]


def _oracle_rows(lud: LudRepresentation) -> np.ndarray:
    """Rows of label indices per hole for every admissible bijection."""
    holes, labels = list(lud.holes), list(lud.pluggable)
    n = len(holes)
    frag_index = {lab: i for i, lab in enumerate(labels)}
    frag_index[lud.top_label] = n
    owner = np.array([frag_index[lud.hole_owner[h]] for h in holes] + [n], dtype=np.int64)
    # constraints under the top hole rarely fail, so check them last
    leqs = sorted(lud.leq, key=lambda c: c.upper == lud.top_hole)
    leq_lower = np.array([frag_index[lud.fragment_of(c.lower)] for c in leqs], dtype=np.int64)
    leq_upper = np.array([holes.index(c.upper) for c in leqs], dtype=np.int64)
    return _scan_bijections(n, owner, leq_lower, leq_upper)


def enumerate_oracle(lud: LudRepresentation) -> list[Plugging]:
    """Every admissible plugging, found by scoring all bijections."""
    n = len(lud.holes)
    if n > ORACLE_MAX_HOLES:
        raise TooLargeError(f"{n} holes exceeds the oracle limit of {ORACLE_MAX_HOLES}")
    _check_valid(lud)
    holes, labels = lud.holes, lud.pluggable
    found = []
    for row in _oracle_rows(lud):
        p = Plugging({h: labels[j] for h, j in zip(holes, row)})
        # confirm each survivor against the scalar definition
        assert is_admissible(lud, p), p
        found.append(p)
    return canonical_order(found)


def verify_equivalence(lud: LudRepresentation) -> bool:
    return enumerate_pluggings(lud) == enumerate_oracle(lud)
