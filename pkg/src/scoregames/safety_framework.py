"""Generic safety reductions: monitor DFAs over the vertex alphabet, product
safety games, and solving via the product.

A monitor recognizes a prefix-closed language L such that staying in L
forever wins for Player 0, and Player 0 can stay in L from her winning
region.  Monitors are given by transition callables so exponential state
spaces (seen-sets, score sheets) are only materialized where the product
reaches them.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Sequence

from .arena import (
    Arena,
    BuchiCondition,
    CoBuchiCondition,
    Condition,
    Lasso,
    MullerCondition,
    ParityCondition,
    RequestResponseCondition,
    bit,
    f1_loops,
    mask_of,
)
from .reduction import SafetyGame
from .safety_solver import solve_safety
from .scoring import ZERO, entries_step, entries_terminal, family_of
from .strategy import MemoryStrategy


class _Reject:
    __slots__ = ()

    def __repr__(self):
        return "REJECT"


REJECT = _Reject()

_CLOSED = -1  # request-response: no open request for the pair


class MonitorDFA:
    """A deterministic automaton over the vertex alphabet with an absorbing
    reject state; every other reachable state accepts unless a separate
    acceptance predicate is supplied."""

    def __init__(
        self,
        alphabet_size: int,
        start,
        step: Callable,
        accepting: Callable = None,
        reject=REJECT,
    ):
        self.alphabet_size = alphabet_size
        self.start = start
        self.reject = reject
        self._step = step
        self._accepting = accepting

    def step(self, q, v: int):
        if not 0 <= v < self.alphabet_size:
            raise ValueError(f"letter {v} outside the alphabet")
        if q == self.reject:
            return self.reject
        return self._step(q, v)

    def is_accepting(self, q) -> bool:
        if q == self.reject:
            return False
        if self._accepting is None:
            return True
        return self._accepting(q)

    def run(self, word: Sequence[int]):
        q = self.start
        for v in word:
            q = self.step(q, v)
        return q


def run_dfa(dfa: MonitorDFA, word: Sequence[int]):
    return dfa.run(word)


def reachable_states(dfa: MonitorDFA, max_states: int = 100_000) -> tuple:
    """All states reachable from the start over the full alphabet, in
    breadth-first order."""
    seen = {dfa.start: 0}
    order = [dfa.start]
    queue = deque([dfa.start])
    while queue:
        q = queue.popleft()
        for v in range(dfa.alphabet_size):
            q2 = dfa.step(q, v)
            if q2 not in seen:
                if len(seen) >= max_states:
                    raise RuntimeError(f"monitor exceeds {max_states} states")
                seen[q2] = len(order)
                order.append(q2)
                queue.append(q2)
    return tuple(order)


@dataclass
class ProductGame:
    """The arena unfolded against a monitor: positions are (vertex, state)
    pairs, the safe positions are those with an accepting state."""

    game: SafetyGame
    states: tuple
    seeds: tuple
    _index: dict

    def position(self, v: int, q) -> int:
        return self._index[v, q]


def product_game(arena: Arena, dfa: MonitorDFA) -> ProductGame:
    """The reachable part of the product, seeded with (v, step(start, v))
    for every vertex v."""
    if dfa.alphabet_size < arena.n:
        raise ValueError("monitor alphabet does not cover the arena")
    states = []
    index = {}
    queue = deque()

    def intern(v, q):
        node = (v, q)
        if node not in index:
            index[node] = len(states)
            states.append(node)
            queue.append(node)
        return index[node]

    seeds = tuple(intern(v, dfa.step(dfa.start, v)) for v in range(arena.n))
    succ_lists = []
    while queue:
        v, q = queue.popleft()
        succ_lists.append([intern(u, dfa.step(q, u)) for u in arena.succ[v]])

    owner = tuple(arena.owner[v] for v, _ in states)
    names = tuple(f"{arena.names[v]}|{q!r}" for v, q in states)
    succ = tuple(tuple(sorted(set(s))) for s in succ_lists)
    safe = mask_of(i for i, (_, q) in enumerate(states) if dfa.is_accepting(q))
    return ProductGame(SafetyGame(Arena(names, owner, succ), safe), tuple(states), seeds, index)


def solve_via_safety(arena: Arena, condition: Condition, dfa: MonitorDFA) -> tuple:
    """Solve a safety-reducible game through its monitor: returns Player 0's
    winning region and a finite-state winning strategy whose memory is the
    monitor state space.

    The caller is responsible for the monitor actually witnessing safety
    reducibility of ``condition``; the builders in this module do.
    """
    prod = product_game(arena, dfa)
    sol = solve_safety(prod.game)
    w0 = mask_of(v for v in range(arena.n) if sol.w0 & bit(prod.seeds[v]))

    memory = []
    seen = set()
    for _, q in prod.states:
        if q not in seen:
            seen.add(q)
            memory.append(q)

    init = {v: dfa.step(dfa.start, v) for v in range(arena.n)}
    # total exactly on the pairs reachable along arena edges, so the update
    # table never leaves the product's state set
    update = {}
    for u, q in prod.states:
        for v in arena.succ[u]:
            update[q, v] = dfa.step(q, v)
    next_move = {}
    for v in range(arena.n):
        if arena.owner[v] != 0:
            continue
        for q in memory:
            pid = prod._index.get((v, q))
            if pid is not None and pid in sol.strategy0:
                target_v, _ = prod.states[sol.strategy0[pid]]
                next_move[v, q] = target_v
            else:
                next_move[v, q] = arena.succ[v][0]
    return w0, MemoryStrategy(0, tuple(memory), init, update, next_move)


def buchi_monitor(arena: Arena, target: int) -> MonitorDFA:
    """Counts consecutive vertices outside ``target``; more than
    |V \\ target| of them in a row rejects."""
    k = arena.n - target.bit_count()

    def step(c, v):
        if target & bit(v):
            return 0
        return c + 1 if c + 1 <= k else REJECT

    return MonitorDFA(arena.n, 0, step)


def cobuchi_monitor(arena: Arena, persistent: int) -> MonitorDFA:
    """Tracks which vertices outside ``persistent`` have been seen; any
    revisit rejects."""
    bad = ~persistent

    def step(seen, v):
        b = bit(v)
        if bad & b:
            return REJECT if seen & b else seen | b
        return seen

    return MonitorDFA(arena.n, 0, step)


def parity_monitor(arena: Arena, priority: Sequence[int]) -> MonitorDFA:
    """One counter per odd priority c, counting its occurrences since the
    last smaller even priority; exceeding the number n_c of c-vertices
    rejects.  Smaller odd priorities only bump their own counter."""
    odds = sorted({p for p in priority if p % 2 == 1})
    pos = {p: i for i, p in enumerate(odds)}
    limit = {p: sum(1 for q in priority if q == p) for p in odds}

    def step(counters, v):
        p = priority[v]
        if p % 2 == 0:
            return tuple(
                0 if odds[i] > p else c for i, c in enumerate(counters)
            )
        c = counters[pos[p]] + 1
        if c > limit[p]:
            return REJECT
        return counters[: pos[p]] + (c,) + counters[pos[p] + 1 :]

    return MonitorDFA(arena.n, (0,) * len(odds), step)


def rr_monitor(arena: Arena, pairs: Sequence) -> MonitorDFA:
    """Ages the open request of each pair; an age beyond
    k = |V| * r * 2^(r+1) rejects.  A vertex that both answers and requests
    counts as answered first, then opens a fresh request; repeated requests
    while one is open do not stack."""
    r = len(pairs)
    k = arena.n * r * 2 ** (r + 1)

    def step(ages, v):
        b = bit(v)
        out = []
        for age, (req, resp) in zip(ages, pairs):
            if age != _CLOSED:
                age += 1
                if age > k:
                    return REJECT
            if resp & b:
                age = _CLOSED
            if req & b and age == _CLOSED:
                age = 0
            out.append(age)
        return tuple(out)

    return MonitorDFA(arena.n, (_CLOSED,) * r, step)


def muller_monitor(arena: Arena, muller: MullerCondition) -> MonitorDFA:
    """Score entries for Player 1's loop family; any score reaching 3
    rejects.  The product of the arena with this monitor is the score-class
    quotient."""
    family = family_of(f1_loops(arena, muller))

    def step(entries, v):
        nxt = entries_step(family, entries, v)
        return REJECT if entries_terminal(nxt, 3) else nxt

    return MonitorDFA(arena.n, (ZERO,) * len(family), step)


def monitor_for(arena: Arena, condition: Condition) -> MonitorDFA:
    """The stock monitor witnessing the safety reducibility of ``condition``."""
    if isinstance(condition, BuchiCondition):
        return buchi_monitor(arena, condition.target)
    if isinstance(condition, CoBuchiCondition):
        return cobuchi_monitor(arena, condition.persistent)
    if isinstance(condition, ParityCondition):
        return parity_monitor(arena, condition.priority)
    if isinstance(condition, RequestResponseCondition):
        return rr_monitor(arena, condition.pairs)
    if isinstance(condition, MullerCondition):
        return muller_monitor(arena, condition)
    raise TypeError(f"no monitor for {type(condition).__name__}")


def lasso_accepted_forever(dfa: MonitorDFA, lasso: Lasso) -> bool:
    """Whether every prefix of the represented play is accepted.  Decidable
    by pumping: once the state at the top of the cycle repeats, acceptance
    repeats forever."""
    q = dfa.start
    for v in lasso.stem:
        q = dfa.step(q, v)
        if not dfa.is_accepting(q):
            return False
    seen = set()
    while q not in seen:
        seen.add(q)
        for v in lasso.cycle:
            q = dfa.step(q, v)
            if not dfa.is_accepting(q):
                return False
    return True
