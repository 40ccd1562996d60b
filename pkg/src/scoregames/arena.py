"""Arenas, winning conditions, and finite representations of plays.

Vertices carry external string names but are handled internally as dense
integer indices 0..n-1.  Vertex sets are plain int bitmasks throughout, so
set algebra is integer arithmetic and every set is hashable.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

Word = tuple  # finite vertex sequence, tuple[int, ...]

DEFAULT_LOOP_LIMIT = 14  # enumerate_loops is exponential in the vertex count


class SizeLimitError(RuntimeError):
    """An exponential construction exceeded its configured size guard."""


def bit(v: int) -> int:
    return 1 << v


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices set in ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def vertices_of(mask: int) -> tuple:
    return tuple(iter_bits(mask))


@dataclass(frozen=True)
class Arena:
    """A finite directed game graph with a vertex partition between two players.

    ``owner[v]`` is 0 or 1, ``succ[v]`` the sorted successor indices of ``v``.
    Every vertex is expected to have at least one successor; ``validate``
    reports vertices that do not.
    """

    names: tuple
    owner: tuple
    succ: tuple

    @staticmethod
    def build(owner: Sequence[int], edges: Iterable, names: Sequence = None) -> "Arena":
        n = len(owner)
        if names is None:
            names = tuple(str(i) for i in range(n))
        else:
            names = tuple(names)
            if len(names) != n:
                raise ValueError("names and owner must have the same length")
        succ = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) references an unknown vertex")
            succ[u].add(v)
        return Arena(names, tuple(owner), tuple(tuple(sorted(s)) for s in succ))

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown vertex {name!r}") from None

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.succ[u]

    def edges(self) -> Iterator:
        for u, targets in enumerate(self.succ):
            for v in targets:
                yield u, v

    def predecessors(self) -> tuple:
        pred = [[] for _ in range(self.n)]
        for u, v in self.edges():
            pred[v].append(u)
        return tuple(tuple(p) for p in pred)

    def swap_roles(self) -> "Arena":
        """The same graph with the players exchanged."""
        return Arena(self.names, tuple(1 - p for p in self.owner), self.succ)

    def set_str(self, mask: int) -> str:
        return "{" + ",".join(self.names[v] for v in iter_bits(mask)) + "}"


@dataclass(frozen=True)
class MullerCondition:
    """A partition of the arena's loops: Player 0 wins a play iff its infinity
    set belongs to ``f0``; the remaining loops are Player 1's.

    ``f0`` holds vertex bitmasks.
    """

    f0: frozenset


@dataclass(frozen=True)
class SafetyCondition:
    """Player 0 wins iff the play never leaves ``safe``."""

    safe: int


@dataclass(frozen=True)
class BuchiCondition:
    """Player 0 wins iff the play visits ``target`` infinitely often."""

    target: int


@dataclass(frozen=True)
class CoBuchiCondition:
    """Player 0 wins iff the play eventually stays inside ``persistent``."""

    persistent: int


@dataclass(frozen=True)
class ParityCondition:
    """Player 0 wins iff the minimal priority seen infinitely often is even."""

    priority: tuple


@dataclass(frozen=True)
class RequestResponseCondition:
    """Player 0 wins iff every visit to a request set is followed, strictly
    later, by a visit to the matching response set.

    ``pairs`` holds (request mask, response mask) tuples.
    """

    pairs: tuple


Condition = Union[
    MullerCondition,
    SafetyCondition,
    BuchiCondition,
    CoBuchiCondition,
    ParityCondition,
    RequestResponseCondition,
]


@dataclass(frozen=True)
class Lasso:
    """Finite representation ``stem . cycle^omega`` of an ultimately periodic play."""

    stem: Word
    cycle: Word

    def unfolding(self) -> Word:
        return tuple(self.stem) + tuple(self.cycle)


def occ(word: Sequence[int]) -> int:
    """The set of vertices occurring in ``word``, as a bitmask."""
    return mask_of(word)


def infi(lasso: Lasso) -> int:
    """The infinity set of the represented play: the vertices on the cycle."""
    return mask_of(lasso.cycle)


def is_path(arena: Arena, word: Sequence[int]) -> bool:
    return all(arena.has_edge(u, v) for u, v in zip(word, word[1:]))


def lasso_violations(arena: Arena, lasso: Lasso) -> list:
    """Check that stem.cycle and cycle.cycle are paths of the arena."""
    out = []
    if not lasso.cycle:
        out.append("empty cycle")
        return out
    full = tuple(lasso.stem) + tuple(lasso.cycle)
    if any(not (0 <= v < arena.n) for v in full):
        out.append("unknown vertex in lasso")
        return out
    if not is_path(arena, full):
        out.append("stem.cycle is not a path")
    if not arena.has_edge(lasso.cycle[-1], lasso.cycle[0]):
        out.append("cycle does not close")
    return out


def _rr_pair_won(lasso: Lasso, request: int, response: int) -> bool:
    inf = infi(lasso)
    if inf & response:
        return True  # responses recur, every request is answered
    if inf & request:
        return False  # requests recur but responses die out
    # Responses occur at most in the stem; a request is pending at cycle
    # entry iff the last request in the stem has no later response.
    pending = False
    for v in lasso.stem:
        b = 1 << v
        if b & response:
            pending = False
        if b & request:
            pending = True
    return not pending


def winner(arena: Arena, condition: Condition, lasso: Lasso) -> int:
    """The player winning the play represented by ``lasso``.

    Raises ValueError if the lasso is not a path of the arena.
    """
    problems = lasso_violations(arena, lasso)
    if problems:
        raise ValueError("invalid lasso: " + "; ".join(problems))
    inf = infi(lasso)
    if isinstance(condition, MullerCondition):
        return 0 if inf in condition.f0 else 1
    if isinstance(condition, SafetyCondition):
        return 0 if occ(lasso.unfolding()) & ~condition.safe == 0 else 1
    if isinstance(condition, BuchiCondition):
        return 0 if inf & condition.target else 1
    if isinstance(condition, CoBuchiCondition):
        return 0 if inf & ~condition.persistent == 0 else 1
    if isinstance(condition, ParityCondition):
        least = min(condition.priority[v] for v in iter_bits(inf))
        return least % 2
    if isinstance(condition, RequestResponseCondition):
        won = all(_rr_pair_won(lasso, q, p) for q, p in condition.pairs)
        return 0 if won else 1
    raise TypeError(f"unsupported condition {type(condition).__name__}")


def is_loop(arena: Arena, s: int) -> bool:
    """True iff ``s`` is a non-empty strongly connected vertex set.

    A singleton {v} counts as a loop only if v has a self-loop: a path from
    v back to v inside {v} has to use it.
    """
    if s == 0:
        return False
    first = (s & -s).bit_length() - 1
    if s == 1 << first:
        return arena.has_edge(first, first)
    # forward and backward reachability inside s from one vertex
    for succsets in (arena.succ, arena.predecessors()):
        reached = 1 << first
        frontier = [first]
        while frontier:
            u = frontier.pop()
            for w in succsets[u]:
                b = 1 << w
                if s & b and not reached & b:
                    reached |= b
                    frontier.append(w)
        if reached != s:
            return False
    return True


def enumerate_loops(arena: Arena, limit: int = DEFAULT_LOOP_LIMIT) -> tuple:
    """All loops of the arena, as a sorted tuple of bitmasks.

    Exponential in the vertex count; guarded by ``limit``.
    """
    if arena.n > limit:
        raise SizeLimitError(
            f"loop enumeration over {arena.n} vertices exceeds the guard of {limit}"
        )
    loops = []
    for s in range(1, arena.full_mask + 1):
        if is_loop(arena, s):
            loops.append(s)
    return tuple(loops)


def f1_loops(arena: Arena, muller: MullerCondition, limit: int = DEFAULT_LOOP_LIMIT) -> tuple:
    """The loops that are not in ``f0``, sorted."""
    return tuple(s for s in enumerate_loops(arena, limit) if s not in muller.f0)


def swap_roles(arena: Arena, muller: MullerCondition) -> tuple:
    """The game seen from Player 1's side: players exchanged, ``f0`` replaced
    by the complementary loop family."""
    return arena.swap_roles(), MullerCondition(frozenset(f1_loops(arena, muller)))


def validate(arena: Arena, condition: Condition) -> list:
    """Check all structural invariants; returns a list of violation messages
    (empty iff the game is well-formed)."""
    out = []
    for v in range(arena.n):
        if not arena.succ[v]:
            out.append(f"vertex {arena.names[v]}: no outgoing edge")
        if arena.owner[v] not in (0, 1):
            out.append(f"vertex {arena.names[v]}: owner must be 0 or 1")
    full = arena.full_mask
    if isinstance(condition, MullerCondition):
        for s in sorted(condition.f0):
            if s == 0:
                out.append("f0 member {}: empty set")
            elif s & ~full:
                out.append(f"f0 member: unknown vertices in mask {s:#x}")
            elif not is_loop(arena, s):
                out.append(f"f0 member {arena.set_str(s)}: not a loop")
    elif isinstance(condition, (SafetyCondition, BuchiCondition, CoBuchiCondition)):
        mask = (
            condition.safe
            if isinstance(condition, SafetyCondition)
            else condition.target
            if isinstance(condition, BuchiCondition)
            else condition.persistent
        )
        if mask & ~full:
            out.append(f"condition: unknown vertices in mask {mask:#x}")
    elif isinstance(condition, ParityCondition):
        if len(condition.priority) != arena.n:
            out.append("priority map must cover exactly the vertex set")
        else:
            for v, p in enumerate(condition.priority):
                if p < 0:
                    out.append(f"vertex {arena.names[v]}: negative priority")
    elif isinstance(condition, RequestResponseCondition):
        for j, (q, p) in enumerate(condition.pairs):
            if q & ~full or p & ~full:
                out.append(f"pair {j}: unknown vertices")
    else:
        out.append(f"unsupported condition {type(condition).__name__}")
    return out
