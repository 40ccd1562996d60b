"""Text formats and the command line interface.

Game files are line oriented, one directive per line, ``#`` starts a
comment::

    vertex <id> <0|1>
    edge <id> <id>
    condition muller        followed by   f0 { id id ... }
    condition parity        followed by   priority <id> <nat>
    condition buchi|cobuchi followed by   final <id>
    condition rr            followed by   pair { ids } { ids }

Strategy files list the memory structure and next-move table::

    player <0|1>
    state <label>
    init <vertex> <label>
    update <label> <vertex> <label>
    move <vertex> <label> { <vertex> ... }

All output is deterministic: identical invocations produce identical bytes.
"""
from __future__ import annotations

import argparse
import sys

from .arena import (
    Arena,
    BuchiCondition,
    CoBuchiCondition,
    Condition,
    MullerCondition,
    ParityCondition,
    RequestResponseCondition,
    bit,
    iter_bits,
    mask_of,
    validate,
)
from .oracle import GeneratorConfig, encode_as_muller, random_game, zielonka
from .reduction import SafetyReduction, build_safety_game
from .safety_framework import (
    MonitorDFA,
    ProductGame,
    monitor_for,
    reachable_states,
    solve_via_safety,
)
from .safety_solver import solve_safety
from .strategy import (
    BOTTOM,
    MemoryStrategy,
    PermissiveStrategy,
    StrategyProduct,
    build_antichain_strategy,
    build_permissive_strategy,
    consistent_product,
    solve_muller,
    verify_bounded_scores,
)


class GameParseError(ValueError):
    """A syntax or validation error in a game or strategy file."""


def _tokens(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _brace_groups(lineno: int, parts: list, expected: int) -> list:
    groups = []
    i = 0
    while i < len(parts):
        if parts[i] != "{":
            raise GameParseError(f"line {lineno}: expected '{{', got {parts[i]!r}")
        try:
            close = parts.index("}", i)
        except ValueError:
            raise GameParseError(f"line {lineno}: unclosed '{{'") from None
        groups.append(parts[i + 1 : close])
        i = close + 1
    if len(groups) != expected:
        raise GameParseError(f"line {lineno}: expected {expected} braced group(s)")
    return groups


def parse_game(text: str) -> tuple:
    """Parse a game file into a validated (arena, condition) pair."""
    names: list = []
    owners: list = []
    ids: dict = {}
    edges: list = []
    kind = None
    muller_sets: list = []
    priorities: dict = {}
    finals = 0
    pairs: list = []

    def vertex_id(lineno, name):
        if name not in ids:
            raise GameParseError(f"line {lineno}: unknown vertex {name!r}")
        return ids[name]

    for lineno, parts in _tokens(text):
        head = parts[0]
        if head == "vertex":
            if len(parts) != 3 or parts[2] not in ("0", "1"):
                raise GameParseError(f"line {lineno}: expected 'vertex <id> <0|1>'")
            if parts[1] in ids:
                raise GameParseError(f"line {lineno}: duplicate vertex {parts[1]!r}")
            ids[parts[1]] = len(names)
            names.append(parts[1])
            owners.append(int(parts[2]))
        elif head == "edge":
            if len(parts) != 3:
                raise GameParseError(f"line {lineno}: expected 'edge <id> <id>'")
            edges.append((vertex_id(lineno, parts[1]), vertex_id(lineno, parts[2])))
        elif head == "condition":
            if kind is not None:
                raise GameParseError(f"line {lineno}: duplicate condition block")
            if len(parts) != 2 or parts[1] not in ("muller", "parity", "buchi", "cobuchi", "rr"):
                raise GameParseError(
                    f"line {lineno}: expected 'condition muller|parity|buchi|cobuchi|rr'"
                )
            kind = parts[1]
        elif head == "f0":
            if kind != "muller":
                raise GameParseError(f"line {lineno}: 'f0' outside a muller condition")
            (group,) = _brace_groups(lineno, parts[1:], 1)
            muller_sets.append(mask_of(vertex_id(lineno, nm) for nm in group))
        elif head == "priority":
            if kind != "parity":
                raise GameParseError(f"line {lineno}: 'priority' outside a parity condition")
            if len(parts) != 3 or not parts[2].isdigit():
                raise GameParseError(f"line {lineno}: expected 'priority <id> <nat>'")
            priorities[vertex_id(lineno, parts[1])] = int(parts[2])
        elif head == "final":
            if kind not in ("buchi", "cobuchi"):
                raise GameParseError(f"line {lineno}: 'final' outside a buchi/cobuchi condition")
            if len(parts) != 2:
                raise GameParseError(f"line {lineno}: expected 'final <id>'")
            finals |= bit(vertex_id(lineno, parts[1]))
        elif head == "pair":
            if kind != "rr":
                raise GameParseError(f"line {lineno}: 'pair' outside an rr condition")
            req, resp = _brace_groups(lineno, parts[1:], 2)
            pairs.append(
                (
                    mask_of(vertex_id(lineno, nm) for nm in req),
                    mask_of(vertex_id(lineno, nm) for nm in resp),
                )
            )
        else:
            raise GameParseError(f"line {lineno}: unknown directive {head!r}")

    if not names:
        raise GameParseError("no vertices declared")
    if kind is None:
        raise GameParseError("missing condition")
    arena = Arena.build(owners, edges, names)
    if kind == "muller":
        condition: Condition = MullerCondition(frozenset(muller_sets))
    elif kind == "parity":
        missing = [names[v] for v in range(len(names)) if v not in priorities]
        if missing:
            raise GameParseError(f"missing priority for vertices: {', '.join(missing)}")
        condition = ParityCondition(tuple(priorities[v] for v in range(len(names))))
    elif kind == "buchi":
        condition = BuchiCondition(finals)
    elif kind == "cobuchi":
        condition = CoBuchiCondition(finals)
    else:
        condition = RequestResponseCondition(tuple(pairs))
    problems = validate(arena, condition)
    if problems:
        raise GameParseError("invalid game: " + "; ".join(problems))
    return arena, condition


def serialize_game(arena: Arena, condition: Condition) -> str:
    lines = [f"vertex {arena.names[v]} {arena.owner[v]}" for v in range(arena.n)]
    lines += [f"edge {arena.names[u]} {arena.names[v]}" for u, v in sorted(arena.edges())]

    def group(mask):
        return "{ " + " ".join(arena.names[v] for v in iter_bits(mask)) + " }"

    if isinstance(condition, MullerCondition):
        lines.append("condition muller")
        lines += [f"f0 {group(s)}" for s in sorted(condition.f0)]
    elif isinstance(condition, ParityCondition):
        lines.append("condition parity")
        lines += [
            f"priority {arena.names[v]} {p}" for v, p in enumerate(condition.priority)
        ]
    elif isinstance(condition, BuchiCondition):
        lines.append("condition buchi")
        lines += [f"final {arena.names[v]}" for v in iter_bits(condition.target)]
    elif isinstance(condition, CoBuchiCondition):
        lines.append("condition cobuchi")
        lines += [f"final {arena.names[v]}" for v in iter_bits(condition.persistent)]
    elif isinstance(condition, RequestResponseCondition):
        lines.append("condition rr")
        lines += [f"pair {group(q)} {group(p)}" for q, p in condition.pairs]
    else:
        raise ValueError(f"cannot serialize a {type(condition).__name__}")
    return "\n".join(lines) + "\n"


def parse_strategy(text: str, arena: Arena):
    """Parse a strategy file; returns a MemoryStrategy when every move line
    names a single successor, a PermissiveStrategy otherwise."""
    player = None
    states: list = []
    init: dict = {}
    update: dict = {}
    moves: dict = {}

    def vid(lineno, name):
        try:
            return arena.index(name)
        except KeyError:
            raise GameParseError(f"line {lineno}: unknown vertex {name!r}") from None

    def sid(lineno, label):
        if label not in states:
            raise GameParseError(f"line {lineno}: undeclared state {label!r}")
        return label

    for lineno, parts in _tokens(text):
        head = parts[0]
        if head == "player":
            if len(parts) != 2 or parts[1] not in ("0", "1"):
                raise GameParseError(f"line {lineno}: expected 'player <0|1>'")
            player = int(parts[1])
        elif head == "state":
            if len(parts) != 2:
                raise GameParseError(f"line {lineno}: expected 'state <label>'")
            states.append(parts[1])
        elif head == "init":
            if len(parts) != 3:
                raise GameParseError(f"line {lineno}: expected 'init <vertex> <state>'")
            init[vid(lineno, parts[1])] = sid(lineno, parts[2])
        elif head == "update":
            if len(parts) != 4:
                raise GameParseError(f"line {lineno}: expected 'update <state> <vertex> <state>'")
            update[sid(lineno, parts[1]), vid(lineno, parts[2])] = sid(lineno, parts[3])
        elif head == "move":
            if len(parts) < 5:
                raise GameParseError(f"line {lineno}: expected 'move <vertex> <state> {{ ... }}'")
            v = vid(lineno, parts[1])
            m = sid(lineno, parts[2])
            (group,) = _brace_groups(lineno, parts[3:], 1)
            if not group:
                raise GameParseError(f"line {lineno}: empty move set")
            targets = tuple(vid(lineno, nm) for nm in group)
            for u in targets:
                if not arena.has_edge(v, u):
                    raise GameParseError(
                        f"line {lineno}: move {arena.names[v]} -> {arena.names[u]} is not an edge"
                    )
            moves[v, m] = targets
        else:
            raise GameParseError(f"line {lineno}: unknown directive {head!r}")

    if player is None:
        raise GameParseError("missing 'player' line")
    if any(v for v in init.values() if v not in states):
        raise GameParseError("init references undeclared states")
    if len(set(states)) != len(states):
        raise GameParseError("duplicate state labels")
    if all(len(t) == 1 for t in moves.values()):
        return MemoryStrategy(
            player, tuple(states), init, update, {k: t[0] for k, t in moves.items()}
        )
    return PermissiveStrategy(player, tuple(states), init, update, moves)


def serialize_strategy(strat, arena: Arena) -> str:
    labels = {}
    for i, m in enumerate(strat.states):
        labels[m] = "bot" if m is BOTTOM else f"m{i}"
    lines = [f"player {strat.owner_player}"]
    lines += [f"state {labels[m]}" for m in strat.states]
    lines += [
        f"init {arena.names[v]} {labels[strat.init[v]]}"
        for v in sorted(strat.init)
    ]
    for m in strat.states:
        for v in range(arena.n):
            if (m, v) in strat.update:
                lines.append(
                    f"update {labels[m]} {arena.names[v]} {labels[strat.update[m, v]]}"
                )
    for v in range(arena.n):
        for m in strat.states:
            if (v, m) in strat.next_move:
                targets = strat.moves(v, m)
                body = " ".join(arena.names[u] for u in targets)
                lines.append(f"move {arena.names[v]} {labels[m]} {{ {body} }}")
    return "\n".join(lines) + "\n"


def _dot_lines(nodes, edges) -> str:
    out = ["digraph G {", "  rankdir=LR;"]
    out += [f"  {n};" for n in nodes]
    out += [f"  {e};" for e in edges]
    out.append("}")
    return "\n".join(out) + "\n"


def _node(name, owner, doubled=False):
    shape = "ellipse" if owner == 0 else "box"
    peripheries = 2 if doubled else 1
    return f'"{name}" [shape={shape}, peripheries={peripheries}]'


def export_dot(obj) -> str:
    """Graphviz text for an arena, a safety reduction (safe classes drawn
    with double lines), a product game, or a strategy product."""
    if isinstance(obj, Arena):
        nodes = [_node(obj.names[v], obj.owner[v]) for v in range(obj.n)]
        edges = [f'"{obj.names[u]}" -> "{obj.names[v]}"' for u, v in obj.edges()]
        return _dot_lines(nodes, edges)
    if isinstance(obj, SafetyReduction):
        quotient = obj.game.arena
        nodes = [
            _node(quotient.names[c], quotient.owner[c], doubled=bool(obj.game.safe & bit(c)))
            for c in range(quotient.n)
        ]
        edges = [f'"{quotient.names[u]}" -> "{quotient.names[v]}"' for u, v in quotient.edges()]
        return _dot_lines(nodes, edges)
    if isinstance(obj, ProductGame):
        quotient = obj.game.arena
        nodes = [
            _node(quotient.names[c], quotient.owner[c], doubled=bool(obj.game.safe & bit(c)))
            for c in range(quotient.n)
        ]
        edges = [f'"{quotient.names[u]}" -> "{quotient.names[v]}"' for u, v in quotient.edges()]
        return _dot_lines(nodes, edges)
    if isinstance(obj, StrategyProduct):
        arena = obj.arena

        def label(node):
            v, m = node
            return f"{arena.names[v]},{m!r}"

        nodes = [_node(label(nd), arena.owner[nd[0]]) for nd in obj.nodes]
        edges = [f'"{label(a)}" -> "{label(b)}"' for a, b in obj.edges]
        return _dot_lines(nodes, edges)
    raise TypeError(f"cannot export a {type(obj).__name__}")


def monitor_dot(dfa: MonitorDFA, arena: Arena, max_states: int = 10_000) -> str:
    order = reachable_states(dfa, max_states)
    labels = {q: f"q{i}" for i, q in enumerate(order)}
    nodes = [_node(labels[q], 0, doubled=dfa.is_accepting(q)) for q in order]
    edges = []
    for q in order:
        for v in range(arena.n):
            edges.append(f'"{labels[q]}" -> "{labels[dfa.step(q, v)]}" [label="{arena.names[v]}"]')
    return _dot_lines(nodes, edges)


def _fmt_region(arena: Arena, mask: int) -> str:
    return "{" + ",".join(arena.names[v] for v in iter_bits(mask)) + "}"


def _load_game(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_game(fh.read())


def _cmd_solve(args) -> int:
    arena, condition = _load_game(args.game)
    if isinstance(condition, MullerCondition):
        sol = solve_muller(arena, condition, max_states=args.max_states)
        w0, w1 = sol.w0, sol.w1
    else:
        w0, _ = solve_via_safety(arena, condition, monitor_for(arena, condition))
        w1 = arena.full_mask & ~w0
    print(f"W0 = {_fmt_region(arena, w0)}")
    print(f"W1 = {_fmt_region(arena, w1)}")
    return 0


def _require_muller(condition) -> MullerCondition:
    if not isinstance(condition, MullerCondition):
        raise GameParseError("this command needs a muller condition")
    return condition


def _cmd_reduce(args) -> int:
    arena, condition = _load_game(args.game)
    muller = _require_muller(condition)
    red = build_safety_game(
        arena,
        muller,
        tracked_player=args.track_player,
        threshold=args.threshold,
        max_states=args.max_states,
    )
    if args.out == "dot":
        sys.stdout.write(export_dot(red))
        return 0
    quotient = red.game.arena
    print(f"classes {quotient.n}")
    print(f"safe {bin(red.game.safe).count('1')}")
    print(f"unsafe-pre-merge {red.unsafe_class_count}")
    print(f"sink {'none' if red.sink is None else quotient.names[red.sink]}")
    for v in range(arena.n):
        print(f"embed {arena.names[v]} {quotient.names[red.embed[v]]}")
    return 0


def _cmd_strategy(args) -> int:
    arena, condition = _load_game(args.game)
    muller = _require_muller(condition)
    if args.kind == "permissive":
        if args.player != 0:
            raise GameParseError("permissive strategies are computed for player 0")
        red = build_safety_game(arena, muller, tracked_player=1, max_states=args.max_states)
        strat = build_permissive_strategy(red, solve_safety(red.game))
    else:
        tracked = 1 if args.player == 0 else 0
        red = build_safety_game(arena, muller, tracked_player=tracked, max_states=args.max_states)
        strat = build_antichain_strategy(red, solve_safety(red.game))
    if args.out == "dot":
        sol = solve_muller(arena, muller, max_states=args.max_states)
        start = sol.w0 if strat.owner_player == 0 else sol.w1
        sys.stdout.write(export_dot(consistent_product(arena, strat, start)))
        return 0
    sys.stdout.write(serialize_strategy(strat, arena))
    return 0


def _cmd_verify(args) -> int:
    arena, condition = _load_game(args.game)
    muller = _require_muller(condition)
    with open(args.strategy, "r", encoding="utf-8") as fh:
        strat = parse_strategy(fh.read(), arena)
    if args.start is not None:
        try:
            start = mask_of(arena.index(nm) for nm in args.start.split(","))
        except KeyError as exc:
            raise GameParseError(f"--start: {exc.args[0]}") from None
    else:
        sol = solve_muller(arena, muller)
        start = sol.w0 if strat.owner_player == 0 else sol.w1
    ok, witness = verify_bounded_scores(arena, muller, strat, start, args.bound)
    if ok:
        print(f"verified: scores bounded by {args.bound} from {_fmt_region(arena, start)}")
        return 0
    print(f"violation: {''.join(arena.names[v] for v in witness)}")
    return 1


def _cmd_oracle(args) -> int:
    arena, condition = _load_game(args.game)
    if isinstance(condition, MullerCondition):
        zw0, zw1 = zielonka(arena, condition)
        sol = solve_muller(arena, condition)
        sw0, sw1 = sol.w0, sol.w1
    elif isinstance(condition, RequestResponseCondition):
        raise GameParseError("the oracle does not support request-response conditions")
    else:
        muller = encode_as_muller(arena, condition)
        zw0, zw1 = zielonka(arena, muller)
        sw0, _ = solve_via_safety(arena, condition, monitor_for(arena, condition))
        sw1 = arena.full_mask & ~sw0
    print(f"oracle W0 = {_fmt_region(arena, zw0)}")
    print(f"oracle W1 = {_fmt_region(arena, zw1)}")
    print(f"solver W0 = {_fmt_region(arena, sw0)}")
    print(f"solver W1 = {_fmt_region(arena, sw1)}")
    if (zw0, zw1) == (sw0, sw1):
        print("agreement: yes")
        return 0
    print("agreement: NO")
    return 1


def _cmd_random(args) -> int:
    cfg = GeneratorConfig(
        n=args.vertices,
        density=args.density,
        owner_bias=args.owner_bias,
        seed=args.seed,
        kind=args.kind,
    )
    arena, condition = random_game(cfg)
    sys.stdout.write(serialize_game(arena, condition))
    return 0


def _cmd_monitor(args) -> int:
    arena, condition = _load_game(args.game)
    kinds = {
        MullerCondition: "muller",
        BuchiCondition: "buchi",
        CoBuchiCondition: "cobuchi",
        ParityCondition: "parity",
        RequestResponseCondition: "rr",
    }
    actual = kinds[type(condition)]
    if args.kind is not None and args.kind != actual:
        raise GameParseError(f"game has a {actual} condition, not {args.kind}")
    dfa = monitor_for(arena, condition)
    if args.out == "dot":
        sys.stdout.write(monitor_dot(dfa, arena, args.max_states))
        return 0
    order = reachable_states(dfa, args.max_states)
    labels = {q: f"q{i}" for i, q in enumerate(order)}
    print(f"states {len(order)}")
    print(f"start {labels[order[0]]}")
    print("accepting " + " ".join(labels[q] for q in order if dfa.is_accepting(q)))
    for q in order:
        for v in range(arena.n):
            print(f"trans {labels[q]} {arena.names[v]} {labels[dfa.step(q, v)]}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scoregames",
        description="Solve Muller and other omega-regular games via safety reductions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="winning regions of a game")
    p.add_argument("game")
    p.add_argument("--max-states", type=int, default=500_000)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("reduce", help="score-class safety reduction of a muller game")
    p.add_argument("game")
    p.add_argument("--track-player", type=int, choices=(0, 1), default=1)
    p.add_argument("--threshold", type=int, choices=(2, 3), default=3)
    p.add_argument("--out", choices=("text", "dot"), default="text")
    p.add_argument("--max-states", type=int, default=500_000)
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("strategy", help="synthesize a finite-state strategy")
    p.add_argument("game")
    p.add_argument("--kind", choices=("antichain", "permissive"), default="antichain")
    p.add_argument("--player", type=int, choices=(0, 1), default=0)
    p.add_argument("--out", choices=("table", "dot"), default="table")
    p.add_argument("--max-states", type=int, default=500_000)
    p.set_defaults(func=_cmd_strategy)

    p = sub.add_parser("verify", help="check that a strategy bounds the opponent's scores")
    p.add_argument("game")
    p.add_argument("strategy")
    p.add_argument("--bound", type=int, default=2)
    p.add_argument("--start", help="comma separated start vertices (default: winning region)")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("oracle", help="cross-check the solver against the recursive oracle")
    p.add_argument("game")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("random", help="generate a seeded random game")
    p.add_argument("--vertices", type=int, default=4)
    p.add_argument("--density", type=float, default=0.4)
    p.add_argument("--owner-bias", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--kind", choices=("muller", "buchi", "cobuchi", "parity", "rr"), default="muller"
    )
    p.set_defaults(func=_cmd_random)

    p = sub.add_parser("monitor", help="the safety monitor of a game's condition")
    p.add_argument("game")
    p.add_argument("--kind", choices=("buchi", "cobuchi", "parity", "rr", "muller"))
    p.add_argument("--out", choices=("text", "dot"), default="text")
    p.add_argument("--max-states", type=int, default=10_000)
    p.set_defaults(func=_cmd_monitor)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except (GameParseError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
