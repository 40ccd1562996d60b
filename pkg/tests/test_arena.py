import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scoregames.arena import (
    Arena,
    BuchiCondition,
    CoBuchiCondition,
    Lasso,
    MullerCondition,
    ParityCondition,
    RequestResponseCondition,
    SizeLimitError,
    enumerate_loops,
    f1_loops,
    infi,
    is_loop,
    occ,
    swap_roles,
    validate,
    vertices_of,
    winner,
)

from conftest import m, random_lasso, random_muller_game, word


def test_validate_example4_clean(example4):
    arena, muller = example4
    assert validate(arena, muller) == []


def test_validate_terminal_vertex():
    arena = Arena.build([0, 1], [(0, 1)])
    problems = validate(arena, BuchiCondition(m(0)))
    assert any("no outgoing edge" in p for p in problems)


def test_validate_non_loop_member(example4):
    arena, _ = example4
    bad = MullerCondition(frozenset({m(0, 2)}))
    problems = validate(arena, bad)
    assert any("not a loop" in p for p in problems)


def test_validate_empty_member(example4):
    arena, _ = example4
    assert any("empty" in p for p in validate(arena, MullerCondition(frozenset({0}))))


def test_occ():
    assert occ(word("10012100")) == m(0, 1, 2)
    assert occ(word("0")) == m(0)
    assert occ(word("1212")) == m(1, 2)


def test_infi():
    assert infi(Lasso(word("1"), word("01"))) == m(0, 1)
    assert infi(Lasso((), word("0"))) == m(0)
    assert infi(Lasso(word("120"), word("0"))) == m(0)


def test_winner_muller(example4):
    arena, muller = example4
    assert winner(arena, muller, Lasso(word("1"), word("01"))) == 1
    assert winner(arena, muller, Lasso((), word("0"))) == 0


def test_winner_parity_single_even():
    arena = Arena.build([0], [(0, 0)])
    assert winner(arena, ParityCondition((0,)), Lasso((), (0,))) == 0
    assert winner(arena, ParityCondition((1,)), Lasso((), (0,))) == 1


def test_winner_rejects_non_path(example4):
    arena, muller = example4
    with pytest.raises(ValueError):
        winner(arena, muller, Lasso((0,), (2,)))


def test_winner_safety_occurrence_based():
    arena = Arena.build([0, 0], [(0, 1), (1, 1)])
    from scoregames.arena import SafetyCondition

    # the stem leaves {1}, so Player 1 wins even though the cycle stays inside
    assert winner(arena, SafetyCondition(m(1)), Lasso((0,), (1,))) == 1
    assert winner(arena, SafetyCondition(m(0, 1)), Lasso((0,), (1,))) == 0


def test_winner_buchi_cobuchi():
    arena = Arena.build([0, 0], [(0, 1), (1, 0), (1, 1)])
    assert winner(arena, BuchiCondition(m(0)), Lasso((), (0, 1))) == 0
    assert winner(arena, BuchiCondition(m(0)), Lasso((0,), (1,))) == 1
    assert winner(arena, CoBuchiCondition(m(1)), Lasso((0,), (1,))) == 0
    assert winner(arena, CoBuchiCondition(m(1)), Lasso((), (0, 1))) == 1


def test_winner_request_response():
    # 0 requests, 2 responds, 1 is neutral
    arena = Arena.build(
        [0, 0, 0], [(0, 1), (1, 0), (1, 1), (1, 2), (2, 1), (0, 2), (2, 0)]
    )
    rr = RequestResponseCondition(((m(0), m(2)),))
    # request answered inside the cycle
    assert winner(arena, rr, Lasso((), word("012"))) == 0
    # request recurs, response never comes
    assert winner(arena, rr, Lasso((), word("01"))) == 1
    # request in the stem, cycle never answers
    assert winner(arena, rr, Lasso(word("0"), word("1"))) == 1
    # request in the stem answered in the stem
    assert winner(arena, rr, Lasso(word("02"), word("1"))) == 0
    # no requests at all
    assert winner(arena, rr, Lasso((), word("1"))) == 0


def test_is_loop(example4):
    arena, _ = example4
    assert is_loop(arena, m(0, 1, 2))
    assert not is_loop(arena, m(0, 2))
    assert is_loop(arena, m(0))
    assert not is_loop(arena, m(1))  # no self-loop on the middle vertex
    assert not is_loop(arena, 0)


def test_enumerate_loops(example4):
    arena, _ = example4
    assert set(enumerate_loops(arena)) == {m(0), m(2), m(0, 1), m(1, 2), m(0, 1, 2)}

    single = Arena.build([0], [(0, 0)])
    assert enumerate_loops(single) == (m(0),)

    two = Arena.build([0, 1], [(0, 1), (1, 0)])
    assert enumerate_loops(two) == (m(0, 1),)


def test_enumerate_loops_guard():
    n = 15
    arena = Arena.build([0] * n, [(v, v) for v in range(n)])
    with pytest.raises(SizeLimitError):
        enumerate_loops(arena)


def test_f1_loops(example4):
    arena, muller = example4
    assert set(f1_loops(arena, muller)) == {m(0, 1), m(1, 2)}
    all_loops = MullerCondition(frozenset(enumerate_loops(arena)))
    assert f1_loops(arena, all_loops) == ()
    nothing = MullerCondition(frozenset())
    assert set(f1_loops(arena, nothing)) == set(enumerate_loops(arena))


def test_swap_roles(example4):
    arena, muller = example4
    swapped, smuller = swap_roles(arena, muller)
    assert swapped.owner == (0, 1, 0)
    assert smuller.f0 == frozenset({m(0, 1), m(1, 2)})
    assert swapped.succ == arena.succ


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_infinity_set_is_loop(seed):
    arena, _ = random_muller_game(seed)
    rng = random.Random(seed)
    lasso = random_lasso(arena, rng)
    assert is_loop(arena, infi(lasso))


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10_000), kind=st.sampled_from(["muller", "buchi", "cobuchi", "parity", "rr"]))
def test_winner_rotation_and_pumping_invariance(seed, kind):
    from scoregames.oracle import GeneratorConfig, random_game

    n = 2 + seed % 4
    arena, condition = random_game(GeneratorConfig(n=n, density=0.6, seed=seed, kind=kind))
    rng = random.Random(seed + 1)
    lasso = random_lasso(arena, rng)
    w = winner(arena, condition, lasso)
    assert w == winner(arena, condition, Lasso(lasso.stem + lasso.cycle, lasso.cycle))
    assert w == winner(arena, condition, Lasso(lasso.stem, lasso.cycle + lasso.cycle))


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_muller_winner_depends_only_on_infinity_set(seed):
    arena, muller = random_muller_game(seed)
    rng = random.Random(seed ^ 0xBEEF)
    a = random_lasso(arena, rng)
    b = random_lasso(arena, rng)
    if infi(a) == infi(b):
        assert winner(arena, muller, a) == winner(arena, muller, b)


def test_vertices_of_roundtrip():
    assert vertices_of(m(0, 3, 5)) == (0, 3, 5)
