"""Deciding the history-preserving bisimulation family.

All five kinds are decided as greatest fixed points over a finite arena:
triples (X, Y, f) with f an order isomorphism for H, HWH and HH, and plain
configuration pairs for IB and WH.  States violating the kind's transfer
clauses are removed until stabilization; the structures are equivalent iff
the initial state survives.  Removals are timestamped with the failing
move so a distinguishing formula can later be unrolled from the log.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import StateSpaceTooLarge
from .structures import ConfigStructure, members, popcount, poset_isomorphisms

DEFAULT_STATE_CAP = 1_000_000
STATE_CAP_ENV = "TRUECON_STATE_CAP"

KINDS = ("ib", "wh", "h", "hwh", "hh")

IsoPairs = tuple[tuple[int, int], ...]
GameState = tuple[int, int, IsoPairs]

INITIAL: GameState = (0, 0, ())


def _state_cap(cap: int | None) -> int:
    if cap is not None:
        return cap
    raw = os.environ.get(STATE_CAP_ENV)
    return int(raw) if raw else DEFAULT_STATE_CAP


def _fmap(f: IsoPairs) -> dict[int, int]:
    return dict(f)


def _finv(f: IsoPairs) -> dict[int, int]:
    return {b: a for a, b in f}


@dataclass
class StateSpace:
    """All isomorphism triples between two structures.

    ``s`` is the state count and ``c`` the smaller of the two maximum
    configuration sizes; any play of the associated game repeats a state
    after at most ``s`` moves.
    """

    left: ConfigStructure
    right: ConfigStructure
    states: tuple[GameState, ...]
    index: dict[GameState, int]
    by_pair: dict[tuple[int, int], tuple[int, ...]]
    s: int
    c: int

    def bound(self) -> int:
        """The a-priori bound |C|*|D|*c! on the state count."""
        fact = 1
        for i in range(2, self.c + 1):
            fact *= i
        return len(self.left.configs) * len(self.right.configs) * fact


def build_state_space(
    left: ConfigStructure, right: ConfigStructure, cap: int | None = None
) -> StateSpace:
    """Enumerate every (X, Y, f) with f ranging over poset isomorphisms."""
    cap = _state_cap(cap)
    states: list[GameState] = []
    for x in left.sorted_configs:
        px = left.poset(x)
        nx = popcount(x)
        for y in right.sorted_configs:
            if popcount(y) != nx:
                continue
            py = right.poset(y)
            for iso in poset_isomorphisms(px, py):
                states.append((x, y, tuple(sorted(iso.items()))))
                if len(states) > cap:
                    raise StateSpaceTooLarge(len(states), cap)
    index = {st: i for i, st in enumerate(states)}
    by_pair: dict[tuple[int, int], list[int]] = {}
    for i, (x, y, _) in enumerate(states):
        by_pair.setdefault((x, y), []).append(i)
    c = min(left.max_config_size, right.max_config_size)
    return StateSpace(
        left=left,
        right=right,
        states=tuple(states),
        index=index,
        by_pair={k: tuple(v) for k, v in by_pair.items()},
        s=len(states),
        c=c,
    )


# -- moves and responses -------------------------------------------------------------

# A move is (clause, event, target-mask) where clause identifies the side
# and direction: "fL"/"fR" forward on left/right, "rL"/"rR" reverse.

Move = tuple[str, int, int]


def attacker_moves(space: StateSpace, st: GameState, reverse: bool) -> list[Move]:
    x, y, _ = st
    moves: list[Move] = [("fL", e, x2) for e, x2 in space.left.forward_transitions(x)]
    moves += [("fR", e, y2) for e, y2 in space.right.forward_transitions(y)]
    if reverse:
        moves += [("rL", e, x2) for e, x2 in space.left.reverse_transitions(x)]
        moves += [("rR", e, y2) for e, y2 in space.right.reverse_transitions(y)]
    return moves


def responses(
    space: StateSpace, st: GameState, move: Move, extend: bool
) -> list[int]:
    """State indices reachable by a valid defender answer to ``move``.

    ``extend`` selects the history-preserving forward clause (the new
    isomorphism must extend the old one); otherwise any isomorphism on the
    successor pair is allowed.  Reverse answers are forced: undoing e on
    one side forces undoing its image on the other.
    """
    x, y, f = st
    clause, e, target = move
    out: list[int] = []
    if clause == "fL":
        a = space.left.labels[e]
        if extend:
            for e2, y2 in space.right.forward_by_label(y, a):
                cand = (target, y2, tuple(sorted(f + ((e, e2),))))
                idx = space.index.get(cand)
                if idx is not None:
                    out.append(idx)
        else:
            for _, y2 in space.right.forward_by_label(y, a):
                out.extend(space.by_pair.get((target, y2), ()))
    elif clause == "fR":
        a = space.right.labels[e]
        if extend:
            for e1, x2 in space.left.forward_by_label(x, a):
                cand = (x2, target, tuple(sorted(f + ((e1, e),))))
                idx = space.index.get(cand)
                if idx is not None:
                    out.append(idx)
        else:
            for _, x2 in space.left.forward_by_label(x, a):
                out.extend(space.by_pair.get((x2, target), ()))
    elif clause == "rL":
        e2 = _fmap(f)[e]
        y2 = y & ~(1 << e2)
        if space.right.has_config(y2):
            cand = (target, y2, tuple(p for p in f if p[0] != e))
            idx = space.index.get(cand)
            if idx is not None:
                out.append(idx)
    elif clause == "rR":
        e1 = _finv(f)[e]
        x2 = x & ~(1 << e1)
        if space.left.has_config(x2):
            cand = (x2, target, tuple(p for p in f if p[1] != e))
            idx = space.index.get(cand)
            if idx is not None:
                out.append(idx)
    else:
        raise AssertionError(clause)
    return sorted(set(out))


@dataclass
class Refinement:
    """Outcome of the greatest-fixed-point computation on a state space."""

    space: StateSpace
    kind: str
    survivors: set[int]
    removed: dict[int, tuple[int, Move]]  # state -> (timestamp, failing move)
    rounds: int

    def surviving_states(self) -> list[GameState]:
        return [self.space.states[i] for i in sorted(self.survivors)]


def _kind_clauses(kind: str) -> tuple[bool, bool]:
    """(uses reverse clauses, forward requires extension) per kind."""
    if kind == "h":
        return False, True
    if kind == "hh":
        return True, True
    if kind == "hwh":
        return True, False
    raise ValueError(f"not a triple-arena kind: {kind}")


def refine_triples(space: StateSpace, kind: str) -> Refinement:
    """Iteratively remove triples violating the kind's transfer clauses."""
    reverse, extend = _kind_clauses(kind)
    survivors = set(range(len(space.states)))
    removed: dict[int, tuple[int, Move]] = {}
    moves_of = [attacker_moves(space, st, reverse) for st in space.states]
    resp_of = [
        [responses(space, st, mv, extend) for mv in moves_of[i]]
        for i, st in enumerate(space.states)
    ]
    clock = 0
    rounds = 0
    changed = True
    while changed:
        changed = False
        rounds += 1
        for i in range(len(space.states)):
            if i not in survivors:
                continue
            for mv, resp in zip(moves_of[i], resp_of[i]):
                if not any(r in survivors for r in resp):
                    survivors.discard(i)
                    removed[i] = (clock, mv)
                    clock += 1
                    changed = True
                    break
    return Refinement(space, kind, survivors, removed, rounds)


# -- pair arenas for IB and WH ---------------------------------------------------------


@dataclass
class PairArena:
    left: ConfigStructure
    right: ConfigStructure
    states: tuple[tuple[int, int], ...]
    index: dict[tuple[int, int], int]


@dataclass
class PairRefinement:
    arena: PairArena
    kind: str
    survivors: set[int]
    removed: dict[int, tuple[int, tuple[str, str, int]]]  # (ts, (clause, label, target))
    rounds: int


def build_pair_arena(
    left: ConfigStructure, right: ConfigStructure, require_iso: bool, cap: int | None = None
) -> PairArena:
    cap = _state_cap(cap)
    states: list[tuple[int, int]] = []
    iso_memo: dict[tuple[int, int], bool] = {}
    for x in left.sorted_configs:
        for y in right.sorted_configs:
            if popcount(x) != popcount(y):
                continue
            if require_iso:
                key = (x, y)
                ok = iso_memo.get(key)
                if ok is None:
                    ok = next(poset_isomorphisms(left.poset(x), right.poset(y)), None) is not None
                    iso_memo[key] = ok
                if not ok:
                    continue
            states.append((x, y))
            if len(states) > cap:
                raise StateSpaceTooLarge(len(states), cap)
    return PairArena(left, right, tuple(states), {p: i for i, p in enumerate(states)})


def refine_pairs(arena: PairArena, kind: str) -> PairRefinement:
    survivors = set(range(len(arena.states)))
    removed: dict[int, tuple[int, tuple[str, str, int]]] = {}
    left, right = arena.left, arena.right

    def moves(x: int, y: int) -> list[tuple[str, str, int]]:
        out = [("fL", left.labels[e], x2) for e, x2 in left.forward_transitions(x)]
        out += [("fR", right.labels[e], y2) for e, y2 in right.forward_transitions(y)]
        # label-deterministic dedup keeps reasons stable
        return list(dict.fromkeys(out))

    def respond(clause: str, label: str, target: int, x: int, y: int) -> list[int]:
        if clause == "fL":
            cands = [(target, y2) for _, y2 in right.forward_by_label(y, label)]
        else:
            cands = [(x2, target) for _, x2 in left.forward_by_label(x, label)]
        return sorted(
            {arena.index[c] for c in cands if c in arena.index}
        )

    moves_of = [moves(x, y) for x, y in arena.states]
    resp_of = [
        [respond(cl, a, t, x, y) for cl, a, t in moves_of[i]]
        for i, (x, y) in enumerate(arena.states)
    ]
    clock = 0
    rounds = 0
    changed = True
    while changed:
        changed = False
        rounds += 1
        for i in range(len(arena.states)):
            if i not in survivors:
                continue
            for mv, resp in zip(moves_of[i], resp_of[i]):
                if not any(r in survivors for r in resp):
                    survivors.discard(i)
                    removed[i] = (clock, mv)
                    clock += 1
                    changed = True
                    break
    return PairRefinement(arena, kind, survivors, removed, rounds)


# -- verdicts ----------------------------------------------------------------------------


@dataclass
class Verdict:
    """Result of an equivalence check, with enough context to audit it."""

    kind: str
    equivalent: bool
    s: int
    c: int
    rounds: int
    witness: list | None = None
    counterexample: tuple | None = None  # (Formula, side) with side "left"/"right"

    def to_json(self) -> dict:
        from .frontend import render_formula

        out = {
            "kind": self.kind,
            "equivalent": self.equivalent,
            "s": self.s,
            "c": self.c,
            "rounds": self.rounds,
        }
        if self.counterexample is not None:
            phi, side = self.counterexample
            out["counterexample"] = {"formula": render_formula(phi), "holds_on": side}
        else:
            out["counterexample"] = None
        if self.witness is not None:
            out["witness_size"] = len(self.witness)
        return out


def normalize_kind(kind: str) -> str:
    k = kind.lower()
    if k not in KINDS:
        raise ValueError(f"unknown equivalence kind {kind!r}; expected one of {KINDS}")
    return k


def check_equivalence(
    left: ConfigStructure,
    right: ConfigStructure,
    kind: str,
    cap: int | None = None,
    with_counterexample: bool = True,
) -> Verdict:
    """Decide the given equivalence and package the outcome.

    When inequivalent and ``with_counterexample`` is set, a distinguishing
    formula in the kind's sublogic is synthesized, re-verified by model
    checking both sides, and attached.
    """
    k = normalize_kind(kind)
    c = min(left.max_config_size, right.max_config_size)
    if k in ("ib", "wh"):
        arena = build_pair_arena(left, right, require_iso=(k == "wh"), cap=cap)
        ref = refine_pairs(arena, k)
        initial = arena.index.get((0, 0))
        equivalent = initial is not None and initial in ref.survivors
        verdict = Verdict(k, equivalent, len(arena.states), c, ref.rounds)
        if equivalent:
            verdict.witness = [arena.states[i] for i in sorted(ref.survivors)]
    else:
        space = build_state_space(left, right, cap=cap)
        ref = refine_triples(space, k)
        initial = space.index[INITIAL]
        equivalent = initial in ref.survivors
        verdict = Verdict(k, equivalent, space.s, space.c, ref.rounds)
        if equivalent:
            verdict.witness = ref.surviving_states()
    if not equivalent and with_counterexample:
        from .formulas import distinguishing_formula

        verdict.counterexample = distinguishing_formula(left, right, k, cap=cap)
    return verdict


# -- the safety game ----------------------------------------------------------------------


@dataclass
class GameSolution:
    defender_wins: bool
    strategy: dict[tuple[GameState, Move], GameState]
    attacker_trace: list[tuple[GameState, Move]] = field(default_factory=list)
    s: int = 0
    c: int = 0


def solve_game(
    left: ConfigStructure, right: ConfigStructure, cap: int | None = None
) -> GameSolution:
    """Solve the bisimulation game as a safety game on the triple space.

    The defender's winning region is the greatest set of states where
    every attack has a response staying in the region; on a finite arena
    this coincides with the repeat-a-state win condition.  When the
    attacker wins, a trace of attacks leading the defender to a stuck
    position is emitted.
    """
    space = build_state_space(left, right, cap=cap)
    ref = refine_triples(space, "hh")
    initial = space.index[INITIAL]
    defender_wins = initial in ref.survivors

    strategy: dict[tuple[GameState, Move], GameState] = {}
    for i in sorted(ref.survivors):
        st = space.states[i]
        for mv in attacker_moves(space, st, reverse=True):
            resp = [r for r in responses(space, st, mv, extend=True) if r in ref.survivors]
            if resp:
                strategy[(st, mv)] = space.states[resp[0]]

    trace: list[tuple[GameState, Move]] = []
    if not defender_wins:
        i = initial
        while i in ref.removed:
            ts, mv = ref.removed[i]
            st = space.states[i]
            trace.append((st, mv))
            resp = responses(space, st, mv, extend=True)
            earlier = [r for r in resp if r in ref.removed and ref.removed[r][0] < ts]
            if not earlier:
                break
            i = max(earlier, key=lambda r: ref.removed[r][0])
    return GameSolution(defender_wins, strategy, trace, space.s, space.c)
