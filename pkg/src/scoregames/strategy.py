"""Finite-state strategies for Muller games.

The antichain strategy keeps only the maximal score classes reachable under
a fixed positional safety strategy; the permissive strategy keeps the whole
winning region of the quotient and allows every move that stays inside it.
Both are certified by an explicit product search bounding the opponent's
scores.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .arena import Arena, MullerCondition, Word, bit, f1_loops, iter_bits, mask_of, swap_roles
from .reduction import SafetyReduction, build_safety_game
from .safety_solver import SafetySolution, solve_safety
from .scoring import entries_init, entries_step, entries_terminal, family_of, sheet_le


class _Bottom:
    """Absorbing junk memory state; unreachable under consistent play."""

    __slots__ = ()

    def __repr__(self):
        return "BOT"


BOTTOM = _Bottom()


@dataclass
class _FiniteStateStrategy:
    """A memory structure (states, init, update) with a next-move table.

    ``init`` maps vertices to memory states, ``update`` is total on
    states x vertices, and ``next_move`` is keyed by (vertex, state) for the
    vertices of ``owner_player``.
    """

    owner_player: int
    states: tuple
    init: dict
    update: dict
    next_move: dict

    def initial(self, v: int):
        return self.init[v]

    def step(self, m, v: int):
        try:
            return self.update[m, v]
        except KeyError:
            raise ValueError(f"strategy update undefined for state {m!r}, vertex {v}") from None

    def moves(self, v: int, m) -> tuple:
        raise NotImplementedError

    def run(self, word: Word):
        """The memory state after reading a play prefix."""
        m = self.initial(word[0])
        for v in word[1:]:
            m = self.step(m, v)
        return m


class MemoryStrategy(_FiniteStateStrategy):
    """Deterministic finite-state strategy: one successor per move."""

    def moves(self, v, m):
        try:
            return (self.next_move[v, m],)
        except KeyError:
            raise ValueError(f"strategy has no move for vertex {v} in state {m!r}") from None


class PermissiveStrategy(_FiniteStateStrategy):
    """Multi-strategy: every move yields a non-empty set of successors."""

    def moves(self, v, m):
        try:
            return self.next_move[v, m]
        except KeyError:
            raise ValueError(f"strategy has no move for vertex {v} in state {m!r}") from None


@dataclass(frozen=True)
class AntichainMemory:
    """The quotient classes used as memory states, pairwise incomparable in
    the score preorder."""

    elements: tuple

    @staticmethod
    def from_strategy(strategy: MemoryStrategy) -> "AntichainMemory":
        return AntichainMemory(tuple(m for m in strategy.states if m is not BOTTOM))


@dataclass
class MullerSolution:
    w0: int
    w1: int
    strategy_p0: MemoryStrategy
    strategy_p1: MemoryStrategy


def _reachable_under(red: SafetyReduction, sol: SafetySolution) -> list:
    """Classes reachable from the embedded winning vertices when quotient
    Player 0 follows the positional safety strategy and Player 1 moves
    freely."""
    quotient = red.game.arena
    seeds = sorted(
        {red.embed[v] for v in range(red.base_arena.n) if sol.w0 & bit(red.embed[v])}
    )
    seen = set(seeds)
    queue = deque(seeds)
    while queue:
        c = queue.popleft()
        if quotient.owner[c] == 0:
            targets = (sol.strategy0[c],)
        else:
            targets = quotient.succ[c]
        for t in targets:
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return sorted(seen)


def build_antichain_strategy(red: SafetyReduction, sol: SafetySolution) -> MemoryStrategy:
    """The finite-state winning strategy whose memory states are the maximal
    score classes reachable under the positional safety strategy.

    Memory updates over-approximate the true class of the play: they jump to
    a maximal class above it, ties broken by lowest class index.  BOTTOM
    absorbs every situation that cannot occur in consistent play.
    """
    base = red.base_arena
    reachable = _reachable_under(red, sol)

    # maximal elements, per last vertex: sweeping in descending score order
    # guarantees that anything above the current element was seen before it
    by_last: dict = {}
    for c in reachable:
        by_last.setdefault(red.sheets[c].last, []).append(c)

    def dominance_key(c):
        sheet = red.sheets[c]
        return (
            sum(st[0] for st in sheet.entries),
            sum(st[1].bit_count() for st in sheet.entries),
        )

    maximal_by_last: dict = {}
    for last, group in by_last.items():
        maxima: list = []
        for c in sorted(group, key=dominance_key, reverse=True):
            sheet = red.sheets[c]
            if not any(sheet_le(red.family, sheet, red.sheets[m]) for m in maxima):
                maxima.append(c)
        maximal_by_last[last] = sorted(maxima)
    maximal = sorted(c for group in maximal_by_last.values() for c in group)

    above_cache: dict = {}

    def above(cls):
        """The lowest-indexed maximal class dominating ``cls`` (BOTTOM if none)."""
        if cls is None or cls == red.sink:
            return BOTTOM
        hit = above_cache.get(cls)
        if hit is None:
            sheet = red.sheets[cls]
            hit = BOTTOM
            for r in maximal_by_last.get(sheet.last, ()):
                if sheet_le(red.family, sheet, red.sheets[r]):
                    hit = r
                    break
            above_cache[cls] = hit
        return hit

    init = {}
    for v in range(base.n):
        e = red.embed[v]
        init[v] = above(e) if sol.w0 & bit(e) else BOTTOM

    update = {}
    next_move = {}
    for m in maximal:
        for v in range(base.n):
            target = red._delta.get((m, v))
            update[m, v] = above(target) if target is not None else BOTTOM
        last = red.sheets[m].last
        for v in range(base.n):
            if base.owner[v] != 0:
                continue
            choice = base.succ[v][0]
            if v == last:
                for u in base.succ[v]:
                    if above(red._delta[m, u]) is not BOTTOM:
                        choice = u
                        break
            next_move[v, m] = choice
    for v in range(base.n):
        update[BOTTOM, v] = BOTTOM
        if base.owner[v] == 0:
            next_move[v, BOTTOM] = base.succ[v][0]

    owner_player = 0 if red.tracked_player == 1 else 1
    return MemoryStrategy(owner_player, tuple(maximal) + (BOTTOM,), init, update, next_move)


def build_permissive_strategy(red: SafetyReduction, sol: SafetySolution) -> PermissiveStrategy:
    """The most general multi-strategy bounding the opponent's scores: its
    memory is the full winning region of the quotient and it allows exactly
    the moves whose class stays in that region."""
    if red.tracked_player != 1:
        raise ValueError("permissive strategies are built from the Player-1-tracking reduction")
    base = red.base_arena
    w0 = sol.w0
    classes = [c for c in range(red.n_classes) if w0 & bit(c)]

    init = {}
    for v in range(base.n):
        e = red.embed[v]
        init[v] = e if w0 & bit(e) else BOTTOM

    update = {}
    next_move = {}
    for c in classes:
        last = red.sheets[c].last
        for v in range(base.n):
            target = red._delta.get((c, v))
            update[c, v] = target if target is not None and w0 & bit(target) else BOTTOM
        for v in range(base.n):
            if base.owner[v] != 0:
                continue
            if v == last:
                allowed = tuple(u for u in base.succ[v] if w0 & bit(red._delta[c, u]))
                next_move[v, c] = allowed if allowed else (base.succ[v][0],)
            else:
                next_move[v, c] = (base.succ[v][0],)
    for v in range(base.n):
        update[BOTTOM, v] = BOTTOM
        if base.owner[v] == 0:
            next_move[v, BOTTOM] = (base.succ[v][0],)

    return PermissiveStrategy(0, tuple(classes) + (BOTTOM,), init, update, next_move)


def solve_muller(arena: Arena, muller: MullerCondition, max_states: int = None) -> MullerSolution:
    """Winning regions and antichain strategies for both players, via one
    reduction per player (roles swapped for Player 1's side)."""
    kwargs = {} if max_states is None else {"max_states": max_states}
    red1 = build_safety_game(arena, muller, tracked_player=1, **kwargs)
    sol1 = solve_safety(red1.game)
    w0 = mask_of(v for v in range(arena.n) if sol1.w0 & bit(red1.embed[v]))

    red0 = build_safety_game(arena, muller, tracked_player=0, **kwargs)
    sol0 = solve_safety(red0.game)
    w1 = mask_of(v for v in range(arena.n) if sol0.w0 & bit(red0.embed[v]))

    if w0 & w1 or (w0 | w1) != arena.full_mask:
        raise RuntimeError(
            "internal error: winning regions do not partition the vertex set "
            f"(w0={arena.set_str(w0)}, w1={arena.set_str(w1)}); determinacy guarantees they do"
        )
    return MullerSolution(
        w0=w0,
        w1=w1,
        strategy_p0=build_antichain_strategy(red1, sol1),
        strategy_p1=build_antichain_strategy(red0, sol0),
    )


def verify_bounded_scores(
    arena: Arena,
    muller: MullerCondition,
    strat: _FiniteStateStrategy,
    start: int,
    bound: int,
) -> tuple:
    """Model-check that no play consistent with ``strat`` lets the opposing
    player's scores exceed ``bound``, starting anywhere in the vertex mask
    ``start``.

    Explores the product of the restricted arena with score sheets capped at
    bound + 1 and returns (True, None) or (False, witness prefix).  A True
    verdict certifies that the strategy is winning from ``start``: bounded
    opponent scores force the infinity set into the owner's family.
    Strategies for Player 1 are checked on the role-swapped game.
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    if start & ~arena.full_mask:
        raise ValueError("start vertices outside the arena")
    if strat.owner_player == 1:
        arena, muller = swap_roles(arena, muller)
    family = family_of(f1_loops(arena, muller))
    cap = bound + 1

    parents: dict = {}
    queue = deque()
    for v in iter_bits(start):
        state = (v, strat.initial(v), entries_init(family, v))
        if state not in parents:
            parents[state] = None
            queue.append(state)

    succ_mask = tuple(mask_of(s) for s in arena.succ)

    def path_to(state):
        out = []
        while state is not None:
            out.append(state[0])
            state = parents[state]
        return tuple(reversed(out))

    while queue:
        state = queue.popleft()
        v, m, entries = state
        if arena.owner[v] == 0:
            targets = strat.moves(v, m)
        else:
            targets = arena.succ[v]
        for u in targets:
            if not succ_mask[v] & bit(u):
                raise ValueError(f"strategy proposes a non-edge {v} -> {u}")
            nxt_entries = entries_step(family, entries, u)
            child = (u, strat.step(m, u), nxt_entries)
            if entries_terminal(nxt_entries, cap):
                return False, path_to(state) + (u,)
            if child not in parents:
                parents[child] = state
                queue.append(child)
    return True, None


def check_subsumption_bounded(
    arena: Arena,
    muller: MullerCondition,
    sigma: _FiniteStateStrategy,
    sigma_prime: PermissiveStrategy,
    start: int,
    depth: int,
) -> bool:
    """True iff every play prefix of length <= depth from ``start`` that is
    consistent with ``sigma`` is also consistent with ``sigma_prime``.

    ``sigma`` must bound the opponent's scores by 2 from ``start``; that is
    the precondition under which permissive strategies promise subsumption.
    """
    if sigma.owner_player != sigma_prime.owner_player:
        raise ValueError("strategies must belong to the same player")
    ok, _ = verify_bounded_scores(arena, muller, sigma, bit(start), 2)
    if not ok:
        raise ValueError("candidate strategy does not bound the opponent's scores by 2")

    player = sigma.owner_player
    frontier = {(start, sigma.initial(start), sigma_prime.initial(start))}
    seen = set(frontier)
    for _ in range(max(depth - 1, 0)):
        nxt = set()
        for v, m, mp in frontier:
            if arena.owner[v] == player:
                allowed = set(sigma_prime.moves(v, mp))
                targets = sigma.moves(v, m)
                if any(u not in allowed for u in targets):
                    return False
            else:
                targets = arena.succ[v]
            for u in targets:
                child = (u, sigma.step(m, u), sigma_prime.step(mp, u))
                if child not in seen:
                    seen.add(child)
                    nxt.add(child)
        if not nxt:
            break
        frontier = nxt
    return True


@dataclass
class StrategyProduct:
    """The reachable (vertex, memory) graph of plays consistent with a
    strategy; used to check that BOTTOM is never reached and for export."""

    arena: Arena
    nodes: tuple
    edges: tuple


def consistent_product(arena: Arena, strat: _FiniteStateStrategy, start: int) -> StrategyProduct:
    nodes = []
    index = {}
    edges = []
    queue = deque()
    for v in iter_bits(start):
        node = (v, strat.initial(v))
        if node not in index:
            index[node] = len(nodes)
            nodes.append(node)
            queue.append(node)
    while queue:
        node = queue.popleft()
        v, m = node
        if arena.owner[v] == strat.owner_player:
            targets = strat.moves(v, m)
        else:
            targets = arena.succ[v]
        for u in targets:
            child = (u, strat.step(m, u))
            if child not in index:
                index[child] = len(nodes)
                nodes.append(child)
                queue.append(child)
            edges.append((node, child))
    return StrategyProduct(arena, tuple(nodes), tuple(edges))
