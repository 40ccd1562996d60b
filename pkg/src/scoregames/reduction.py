"""Reduction of a Muller game to a safety game over score-sheet classes.

The quotient arena is explored breadth-first from the single-vertex sheets;
every class whose tracked scores stay below the threshold is safe, and all
classes that reach the threshold are merged into one absorbing sink.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import comb, factorial
from typing import Optional

from .arena import Arena, MullerCondition, SizeLimitError, Word, f1_loops, is_path
from .scoring import (
    ScoreSheet,
    family_of,
    flat_init,
    flat_step,
    flat_to_entries,
    lar_update,
    sheet_init,
)

DEFAULT_MAX_STATES = 500_000


@dataclass(frozen=True)
class SafetyGame:
    """An arena plus the set of vertices Player 0 must never leave."""

    arena: Arena
    safe: int


@dataclass
class SafetyReduction:
    """The quotient safety game together with the embedding of the original
    vertices and the per-class score sheets.

    ``base_arena`` is the original arena with roles swapped when the tracked
    player is 0, so quotient Player 0 is always the player avoiding the sink.
    Class numbering is breadth-first discovery order and therefore
    reproducible; ``rep_words`` holds the first play prefix that reached each
    class (the sink's is the first prefix that crossed the threshold).
    """

    game: SafetyGame
    base_arena: Arena
    embed: tuple
    sheets: tuple
    rep_words: tuple
    tracked_player: int
    threshold: int
    family: tuple
    sink: Optional[int]
    unsafe_sheets: tuple
    _index: dict = field(repr=False)
    _delta: dict = field(repr=False)

    @property
    def n_classes(self) -> int:
        return self.game.arena.n

    @property
    def unsafe_class_count(self) -> int:
        return len(self.unsafe_sheets)

    def step_class(self, c: int, v: int) -> int:
        """The quotient successor of class ``c`` under vertex ``v``."""
        try:
            return self._delta[c, v]
        except KeyError:
            raise ValueError(f"no quotient edge from class {c} labelled {v}") from None

    def class_of(self, word: Word) -> int:
        """The class of a play prefix whose proper prefixes stay below the
        threshold; the sink if the last letter crosses it."""
        if not word:
            raise ValueError("empty play prefix")
        if not is_path(self.base_arena, word):
            raise ValueError("word is not a path of the arena")
        flat = flat_init(self.family, word[0])
        terminal = False
        for v in word[1:]:
            if terminal:
                raise ValueError("a proper prefix already reached the threshold")
            flat, hit = flat_step(self.family, flat, v)
            terminal = hit >= self.threshold
        if terminal:
            if self.sink is None:
                raise ValueError("threshold crossed but the reduction has no sink")
            return self.sink
        try:
            return self._index[word[-1], flat]
        except KeyError:
            raise ValueError("the prefix's class was not constructed") from None


def lar_sum_bound(n: int) -> int:
    """Upper bound on the class count: the number of latest appearance
    records times the score/accumulator combinations per record, plus the
    sink.  The coarser (n!)^3 form only dominates this sum for n >= 4."""
    return sum(comb(n, k) * factorial(k) * 2**k * factorial(k) for k in range(1, n + 1)) + 1


def build_safety_game(
    arena: Arena,
    muller: MullerCondition,
    tracked_player: int = 1,
    threshold: int = 3,
    max_states: int = DEFAULT_MAX_STATES,
) -> SafetyReduction:
    """Construct the quotient safety game tracking one player's scores.

    With ``tracked_player=1`` the quotient is built on the game as given;
    with ``tracked_player=0`` the roles are swapped first, so the returned
    game is always solved from quotient Player 0's perspective.  Classes
    reaching ``threshold`` are merged into a single absorbing sink (which
    gets a self-loop so the quotient arena has no terminal vertex).
    """
    if tracked_player not in (0, 1):
        raise ValueError("tracked_player must be 0 or 1")
    if threshold not in (2, 3):
        raise ValueError("threshold must be 2 or 3")
    if tracked_player == 1:
        base = arena
        family = family_of(f1_loops(arena, muller))
    else:
        base = arena.swap_roles()
        family = family_of(muller.f0)

    sheets: list = []
    flats: list = []
    rep_words: list = []
    index: dict = {}
    delta: dict = {}
    succ_lists: list = []
    embed = []
    sink = None
    unsafe_sheets: dict = {}

    def new_class(sheet, flat, word):
        cid = len(sheets)
        if cid >= max_states:
            raise SizeLimitError(f"quotient exceeds the state cap of {max_states}")
        sheets.append(sheet)
        flats.append(flat)
        rep_words.append(word)
        succ_lists.append([])
        if sheet is not None:
            index[sheet.last, flat] = cid
        return cid

    for v in range(base.n):
        cid = new_class(sheet_init(family, v), flat_init(family, v), (v,))
        embed.append(cid)

    # per-vertex view of the family: positions whose set contains v, with the
    # residual mask to test for a completed traversal; all other positions
    # reset to (0, 0), which the step starts from
    zeros = [0] * (2 * len(family))
    members = []
    for v in range(base.n):
        b = 1 << v
        members.append(tuple((2 * i, f & ~b, b) for i, f in enumerate(family) if f & b))

    work = deque(range(len(sheets)))
    while work:
        cid = work.popleft()
        sheet = sheets[cid]
        word = rep_words[cid]
        flat = flats[cid]
        lst = succ_lists[cid]
        for v in base.succ[sheet.last]:
            out = zeros.copy()
            hit = 0
            for i2, rem, b in members[v]:
                a = flat[i2 + 1]
                if a == rem:
                    s = flat[i2] + 1
                    if s > hit:
                        hit = s
                    out[i2] = s
                else:
                    out[i2] = flat[i2]
                    out[i2 + 1] = a | b
            nxt = tuple(out)
            if hit >= threshold:
                if (v, nxt) not in unsafe_sheets:
                    unsafe_sheets[v, nxt] = ScoreSheet(
                        v, flat_to_entries(nxt), lar_update(sheet.lar, v)
                    )
                if sink is None:
                    sink = new_class(None, None, word + (v,))
                target = sink
            else:
                target = index.get((v, nxt))
                if target is None:
                    target = new_class(
                        ScoreSheet(v, flat_to_entries(nxt), lar_update(sheet.lar, v)),
                        nxt,
                        word + (v,),
                    )
                    work.append(target)
            delta[cid, v] = target
            if target not in lst:
                lst.append(target)

    owner = []
    names = []
    joiner = "" if all(len(nm) == 1 for nm in base.names) else "."
    for cid, sheet in enumerate(sheets):
        if sheet is None:
            owner.append(1)  # absorbing, the owner never matters
            names.append("unsafe")
            succ_lists[cid] = [cid]
        else:
            owner.append(base.owner[sheet.last])
            names.append("[" + joiner.join(base.names[v] for v in rep_words[cid]) + "]")

    quotient = Arena(tuple(names), tuple(owner), tuple(tuple(sorted(s)) for s in succ_lists))
    safe = (1 << len(sheets)) - 1
    if sink is not None:
        safe &= ~(1 << sink)
    return SafetyReduction(
        game=SafetyGame(quotient, safe),
        base_arena=base,
        embed=tuple(embed),
        sheets=tuple(sheets),
        rep_words=tuple(rep_words),
        tracked_player=tracked_player,
        threshold=threshold,
        family=family,
        sink=sink,
        unsafe_sheets=tuple(unsafe_sheets.values()),
        _index=index,
        _delta=delta,
    )
