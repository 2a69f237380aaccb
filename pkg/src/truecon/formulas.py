"""Formula synthesis: order characterizers, characteristic formulas and
distinguishing formulas.

The order characterizer of a configuration X is a reverse-only formula
that other configurations of equal size satisfy exactly when they carry an
isomorphic causal order; its open variant pins a specific correspondence
of identifiers to events.  Characteristic formulas nest these along the
transition relation; distinguishing formulas unroll the failure log of a
fixed-point refinement.  All constructions share subterms through
memoization, so the results are dags.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable

from .equivalences import (
    INITIAL,
    GameState,
    Move,
    PairRefinement,
    Refinement,
    StateSpace,
    build_pair_arena,
    build_state_space,
    normalize_kind,
    refine_pairs,
    refine_triples,
    responses,
)
from .errors import DagTooLarge, InternalVerificationFailed
from .logic import (
    And,
    Declare,
    Formula,
    FwdBox,
    FwdDiamond,
    LabelBox,
    LabelDiamond,
    Neg,
    RevDiamond,
    TT,
    classify_sublogic,
    conj,
    disj,
    free_identifiers,
    modal_depth,
    node_count,
    satisfies,
    substitute,
    walk_unique,
)
from .structures import ConfigStructure, members, popcount

DEFAULT_DAG_CAP = 1_000_000


def ident_for_event(event: int) -> str:
    """Canonical identifier naming an event in synthesized formulas."""
    return f"z{event}"


def topological_events(s: ConfigStructure, x: int) -> list[int]:
    """Events of x ordered compatibly with causality, ties by event id."""
    order = [s.causes(x, e) for e in range(s.n_events)]
    remaining = set(members(x))
    out: list[int] = []
    placed = 0
    while remaining:
        ready = sorted(e for e in remaining if order[e] & ~placed == 0)
        e = ready[0]
        out.append(e)
        placed |= 1 << e
        remaining.discard(e)
    return out


def theta_open(
    s: ConfigStructure,
    x,
    ident_of: Callable[[int], str] | None = None,
) -> tuple[Formula, dict[str, int]]:
    """Open reverse-only characterizer of x's causal order.

    Returns (formula, environment) where the environment maps each
    identifier to its event; under that environment x satisfies the
    formula, and an equal-size configuration satisfies it under some
    environment exactly when it is isomorphic to x.

    One conjunct per pivot event k: undo everything above k in reverse
    topological order, then greedily undo as much below as possible, and
    state that the leftovers (exactly k's causes) cannot be undone.
    """
    m = s.require_config(x)
    ident_of = ident_of or ident_for_event
    events = topological_events(s, m)
    n = len(events)
    rho = {ident_of(e): e for e in events}

    def reversal_chain(seq: list[int], body: Formula) -> Formula:
        out = body
        for e in reversed(seq):
            out = RevDiamond(ident_of(e), out)
        return out

    parts: list[Formula] = [reversal_chain(list(reversed(events)), TT)]
    for k in range(1, n + 1):
        pivot = events[k - 1]
        seq = list(reversed(events[k:]))
        current = m
        for e in seq:
            current &= ~(1 << e)
        for e in reversed(events[: k - 1]):
            without = current & ~(1 << e)
            if s.has_config(without):
                seq.append(e)
                current = without
        stuck = [
            Neg(RevDiamond(ident_of(e), TT))
            for e in events[: k - 1]
            if s.less(m, e, pivot)
        ]
        parts.append(reversal_chain(seq, conj(stuck)))
    return conj(parts), rho


def theta_closed(s: ConfigStructure, x) -> Formula:
    """Closed reverse-only characterizer: declarations around the open one."""
    m = s.require_config(x)
    body, _ = theta_open(s, m)
    for e in reversed(topological_events(s, m)):
        body = Declare(ident_for_event(e), s.labels[e], body)
    return body


# -- characteristic formulas -----------------------------------------------------------


class _DagBudget:
    def __init__(self, cap: int):
        self.cap = cap
        self.spent = 0

    def charge(self, amount: int = 1) -> None:
        self.spent += amount
        if self.spent > self.cap:
            raise DagTooLarge(self.spent, self.cap)


def char_formula(
    s: ConfigStructure,
    kind: str,
    depth: int | None = None,
    act: Iterable[str] | None = None,
    node_cap: int = DEFAULT_DAG_CAP,
) -> Formula:
    """Characteristic formula of a structure for "wh", "h" or "hh".

    The "hh" family is indexed by a depth; checking another structure
    against depth s(C, D) decides HH equivalence.  ``act`` is the label
    alphabet quantified over in box conjuncts and defaults to the
    structure's own; callers comparing two structures should pass the
    union of both alphabets.
    """
    k = kind.lower()
    alphabet = tuple(sorted(set(act))) if act is not None else s.alphabet
    budget = _DagBudget(node_cap)
    if k == "wh":
        return _chi_wh(s, alphabet, budget)
    if k == "h":
        return _chi_h(s, alphabet, budget)
    if k == "hh":
        if depth is None:
            raise ValueError("the hh characteristic formula needs a depth")
        return _chi_hh(s, depth, alphabet, budget)
    raise ValueError(f"no characteristic formula family for kind {kind!r}")


def _chi_wh(s: ConfigStructure, act: tuple[str, ...], budget: _DagBudget) -> Formula:
    memo: dict[int, Formula] = {}

    def go(x: int) -> Formula:
        got = memo.get(x)
        if got is not None:
            return got
        budget.charge(8)
        parts: list[Formula] = [theta_closed(s, x)]
        succ_by_label: dict[str, list[int]] = {}
        for e, x2 in s.forward_transitions(x):
            succ_by_label.setdefault(s.labels[e], []).append(x2)
        for a in sorted(succ_by_label):
            for x2 in dict.fromkeys(succ_by_label[a]):
                parts.append(LabelDiamond(a, go(x2)))
        for a in act:
            targets = list(dict.fromkeys(succ_by_label.get(a, [])))
            parts.append(LabelBox(a, disj([go(x2) for x2 in targets])))
        out = conj(parts)
        memo[x] = out
        return out

    return go(0)


def _box_ident(level: int) -> str:
    return f"u{level}"


def _chi_h(s: ConfigStructure, act: tuple[str, ...], budget: _DagBudget) -> Formula:
    memo: dict[int, Formula] = {}

    def go(x: int) -> Formula:
        got = memo.get(x)
        if got is not None:
            return got
        budget.charge(8)
        theta, _ = theta_open(s, x)
        parts: list[Formula] = [theta]
        fwd = s.forward_transitions(x)
        for e, x2 in fwd:
            parts.append(FwdDiamond(ident_for_event(e), s.labels[e], go(x2)))
        u = _box_ident(popcount(x))
        for a in act:
            disjuncts = [
                substitute(go(x2), ident_for_event(e), u)
                for e, x2 in fwd
                if s.labels[e] == a
            ]
            parts.append(FwdBox(u, a, disj(disjuncts)))
        out = conj(parts)
        memo[x] = out
        return out

    return go(0)


def _chi_hh(
    s: ConfigStructure, depth: int, act: tuple[str, ...], budget: _DagBudget
) -> Formula:
    memo: dict[tuple[int, int], Formula] = {}
    thetas: dict[int, Formula] = {}

    def theta(x: int) -> Formula:
        got = thetas.get(x)
        if got is None:
            got, _ = theta_open(s, x)
            thetas[x] = got
        return got

    def go(x: int, n: int) -> Formula:
        key = (x, n)
        got = memo.get(key)
        if got is not None:
            return got
        budget.charge(8)
        if n == 0:
            out = theta(x)
        else:
            parts: list[Formula] = [theta(x)]
            fwd = s.forward_transitions(x)
            for e, x2 in fwd:
                parts.append(FwdDiamond(ident_for_event(e), s.labels[e], go(x2, n - 1)))
            u = _box_ident(n)
            for a in act:
                disjuncts = [
                    substitute(go(x2, n - 1), ident_for_event(e), u)
                    for e, x2 in fwd
                    if s.labels[e] == a
                ]
                parts.append(FwdBox(u, a, disj(disjuncts)))
            for e, x2 in s.reverse_transitions(x):
                parts.append(RevDiamond(ident_for_event(e), go(x2, n - 1)))
            out = conj(parts)
        memo[key] = out
        return out

    return go(0, depth)


@dataclass
class DagStats:
    nodes: int
    depth: int

    def to_json(self) -> dict:
        return {"nodes": self.nodes, "modal_depth": self.depth}


def dag_stats(phi: Formula) -> DagStats:
    return DagStats(nodes=node_count(phi), depth=modal_depth(phi))


# -- distinguishing formulas ---------------------------------------------------------


def distinguishing_formula(
    left: ConfigStructure,
    right: ConfigStructure,
    kind: str,
    cap: int | None = None,
    minimize: bool = True,
) -> tuple[Formula, str] | None:
    """A formula separating two structures, or None when equivalent.

    The formula lies in the sublogic characterizing the kind, holds on the
    left structure and fails on the right, and is re-verified by model
    checking before being returned; a verification failure raises rather
    than returning silently.  For "hh" the modal depth is additionally
    checked against the s + c bound.
    """
    k = normalize_kind(kind)
    if k in ("ib", "wh"):
        arena = build_pair_arena(left, right, require_iso=(k == "wh"), cap=cap)
        pref = refine_pairs(arena, k)
        initial = arena.index.get((0, 0))
        if initial is not None and initial in pref.survivors:
            return None
        phi = _disc_pairs(pref, k)
        bound = None
    else:
        space = build_state_space(left, right, cap=cap)
        ref = refine_triples(space, k)
        initial = space.index[INITIAL]
        if initial in ref.survivors:
            return None
        phi = _disc_triples(ref, k)
        bound = space.s + space.c if k == "hh" else None
    _verify_disc(left, right, phi, k, bound)
    if minimize:
        phi = _prune_conjuncts(left, right, phi, k, bound)
    return phi, "left"


_KIND_TAG = {"ib": "EIL_wh", "wh": "EIL_wh", "h": "EIL_h", "hwh": "EIL_hwh", "hh": "EIL"}


def _verify_disc(
    left: ConfigStructure,
    right: ConfigStructure,
    phi: Formula,
    kind: str,
    depth_bound: int | None,
) -> None:
    if _KIND_TAG[kind] not in classify_sublogic(phi):
        raise InternalVerificationFailed(
            f"distinguishing formula left the {_KIND_TAG[kind]} sublogic"
        )
    if not satisfies(left, 0, {}, phi):
        raise InternalVerificationFailed("distinguishing formula fails on the left structure")
    if satisfies(right, 0, {}, phi):
        raise InternalVerificationFailed("distinguishing formula holds on the right structure")
    if depth_bound is not None and modal_depth(phi) > depth_bound:
        raise InternalVerificationFailed(
            f"distinguishing formula depth {modal_depth(phi)} exceeds bound {depth_bound}"
        )


def _still_distinguishes(
    left: ConfigStructure,
    right: ConfigStructure,
    phi: Formula,
    kind: str,
    depth_bound: int | None,
) -> bool:
    try:
        _verify_disc(left, right, phi, kind, depth_bound)
        return True
    except InternalVerificationFailed:
        return False


def _prune_conjuncts(
    left: ConfigStructure,
    right: ConfigStructure,
    phi: Formula,
    kind: str,
    depth_bound: int | None,
    max_nodes: int = 4000,
) -> Formula:
    """Greedy removal of conjuncts that are not needed to distinguish.

    Best effort only; walks the outermost spine of unary operators, and at
    the first conjunction tries to drop operands one at a time.
    """
    if node_count(phi) > max_nodes:
        return phi

    def rebuild_spine(spine: list[Formula], core: Formula) -> Formula:
        out = core
        for node in reversed(spine):
            if isinstance(node, Neg):
                out = Neg(out)
            elif isinstance(node, FwdDiamond):
                out = FwdDiamond(node.ident, node.label, out)
            elif isinstance(node, LabelDiamond):
                out = LabelDiamond(node.label, out)
            elif isinstance(node, Declare):
                out = Declare(node.ident, node.label, out)
            elif isinstance(node, RevDiamond):
                out = RevDiamond(node.ident, out)
            else:
                raise AssertionError(type(node).__name__)
        return out

    spine: list[Formula] = []
    cursor = phi
    while isinstance(cursor, (Neg, FwdDiamond, LabelDiamond, Declare, RevDiamond)):
        spine.append(cursor)
        cursor = cursor.sub
    if not isinstance(cursor, And):
        return phi
    operands: list[Formula] = []
    flat = cursor
    while isinstance(flat, And):
        operands.append(flat.left)
        flat = flat.right
    operands.append(flat)
    if len(operands) > 24:
        return phi
    kept = list(operands)
    for cand in list(operands):
        if len(kept) == 1:
            break
        trial = [p for p in kept if p is not cand]
        candidate = rebuild_spine(spine, conj(trial))
        if _still_distinguishes(left, right, candidate, kind, depth_bound):
            kept = trial
    return rebuild_spine(spine, conj(kept))


# -- extraction from pair refinements ---------------------------------------------------


def _disc_pairs(ref: PairRefinement, kind: str) -> Formula:
    arena = ref.arena
    left, right = arena.left, arena.right
    memo: dict[int, Formula] = {}

    def disc(i: int) -> Formula:
        got = memo.get(i)
        if got is not None:
            return got
        ts, (clause, label, target) = ref.removed[i]
        x, y = arena.states[i]
        parts: list[Formula] = []
        if clause == "fL":
            if kind == "wh":
                parts.append(theta_closed(left, target))
            for _, y2 in right.forward_by_label(y, label):
                j = arena.index.get((target, y2))
                if j is None:
                    continue
                ts2, _ = ref.removed[j]
                assert ts2 < ts
                parts.append(disc(j))
            out: Formula = LabelDiamond(label, conj(parts))
        elif clause == "fR":
            if kind == "wh":
                parts.append(theta_closed(right, target))
            for _, x2 in left.forward_by_label(x, label):
                j = arena.index.get((x2, target))
                if j is None:
                    continue
                ts2, _ = ref.removed[j]
                assert ts2 < ts
                parts.append(Neg(disc(j)))
            out = Neg(LabelDiamond(label, conj(parts)))
        else:
            raise AssertionError(clause)
        memo[i] = out
        return out

    initial = arena.index.get((0, 0))
    if initial is None:
        # (empty, empty) failed the isomorphism admission test: impossible
        raise AssertionError("initial pair missing from arena")
    return disc(initial)


# -- extraction from triple refinements --------------------------------------------------


class _FreshVisible:
    def __init__(self) -> None:
        self._n = 0

    def __call__(self, stem: str = "v") -> str:
        name = f"{stem}{self._n}"
        self._n += 1
        return name


def _rename_free(phi: Formula, mapping: dict[str, str]) -> Formula:
    """Simultaneous renaming of free identifiers; targets must be fresh."""
    if not mapping:
        return phi
    memo: dict[int, Formula] = {}

    def go(node: Formula) -> Formula:
        if not (free_identifiers(node) & mapping.keys()):
            return node
        got = memo.get(id(node))
        if got is not None:
            return got
        if isinstance(node, RevDiamond):
            out: Formula = RevDiamond(mapping.get(node.ident, node.ident), go(node.sub))
        elif isinstance(node, (FwdDiamond, Declare)):
            # binder idents never collide with the fresh targets
            out = type(node)(node.ident, node.label, go(node.sub))
        elif isinstance(node, FwdBox):
            out = FwdBox(node.ident, node.label, go(node.sub))
        elif isinstance(node, Neg):
            out = Neg(go(node.sub))
        elif isinstance(node, And):
            out = And(go(node.left), go(node.right))
        else:
            from .logic import _rebuild, children

            out = _rebuild(node, tuple(go(c) for c in children(node)))
        memo[id(node)] = out
        return out

    return go(phi)


def _disc_triples(ref: Refinement, kind: str) -> Formula:
    """Unroll a refinement failure into a left-satisfied separating formula.

    At every removed state the recorded failing move is re-examined: each
    candidate answer is refuted either by an order characterizer (the
    extended matching is no isomorphism) or by the recursively constructed
    formula of the earlier-removed successor state.
    """
    space = ref.space
    left, right = space.left, space.right
    extend = kind in ("h", "hh")
    fresh = _FreshVisible()
    memo: dict[int, Formula] = {}

    def disc(i: int) -> Formula:
        got = memo.get(i)
        if got is not None:
            return got
        ts, move = ref.removed[i]
        x, y, f = space.states[i]
        fmap = dict(f)
        finv = {b: a for a, b in f}
        clause, e, target = move
        if clause == "fL":
            a = left.labels[e]
            out = self_fwd_left(i, ts, x, y, f, e, target, a)
        elif clause == "fR":
            a = right.labels[e]
            out = self_fwd_right(i, ts, x, y, f, e, target, a)
        elif clause == "rL":
            e2 = fmap[e]
            y2 = y & ~(1 << e2)
            if not right.has_config(y2):
                out = RevDiamond(ident_for_event(e), TT)
            else:
                j = space.index[(target, y2, tuple(p for p in f if p[0] != e))]
                ts2, _ = ref.removed[j]
                assert ts2 < ts
                out = RevDiamond(ident_for_event(e), disc(j))
        elif clause == "rR":
            e1 = finv[e]
            x2 = x & ~(1 << e1)
            if not left.has_config(x2):
                out = Neg(RevDiamond(ident_for_event(e1), TT))
            else:
                j = space.index[(x2, target, tuple(p for p in f if p[1] != e))]
                ts2, _ = ref.removed[j]
                assert ts2 < ts
                out = Neg(RevDiamond(ident_for_event(e1), Neg(disc(j))))
        else:
            raise AssertionError(clause)
        memo[i] = out
        return out

    def self_fwd_left(i, ts, x, y, f, e, target, a) -> Formula:
        if extend:
            parts: list[Formula] = []
            for e2, y2 in right.forward_by_label(y, a):
                cand = (target, y2, tuple(sorted(f + ((e, e2),))))
                j = space.index.get(cand)
                if j is None:
                    theta, _ = theta_open(left, target)
                    parts.append(theta)
                else:
                    ts2, _ = ref.removed[j]
                    assert ts2 < ts
                    parts.append(disc(j))
            return FwdDiamond(ident_for_event(e), a, conj(_dedup(parts)))
        # hwh: close the successor description with declarations
        parts = [theta_open(left, target)[0]]
        for _, y2 in right.forward_by_label(y, a):
            for j in space.by_pair.get((target, y2), ()):
                ts2, _ = ref.removed[j]
                assert ts2 < ts
                parts.append(disc(j))
        body = conj(_dedup(parts))
        for d in reversed(topological_events(left, target)):
            body = Declare(ident_for_event(d), left.labels[d], body)
        return LabelDiamond(a, body)

    def self_fwd_right(i, ts, x, y, f, e, target, a) -> Formula:
        finv = {b: c for c, b in f}
        if extend:
            u = fresh("v")
            parts: list[Formula] = []
            for e1, x2 in left.forward_by_label(x, a):
                cand = (x2, target, tuple(sorted(f + ((e1, e),))))
                j = space.index.get(cand)
                if j is None:
                    namer = lambda d: u if d == e else ident_for_event(finv[d])
                    theta, _ = theta_open(right, target, ident_of=namer)
                    parts.append(theta)
                else:
                    ts2, _ = ref.removed[j]
                    assert ts2 < ts
                    parts.append(Neg(substitute(disc(j), ident_for_event(e1), u)))
            return Neg(FwdDiamond(u, a, conj(_dedup(parts))))
        # hwh: describe the right successor, closed by declarations
        w_of = {d: fresh("w") for d in members(target)}
        theta, _ = theta_open(right, target, ident_of=lambda d: w_of[d])
        parts = [theta]
        for e1, x2 in left.forward_by_label(x, a):
            for j in space.by_pair.get((x2, target), ()):
                ts2, _ = ref.removed[j]
                assert ts2 < ts
                _, _, g = space.states[j]
                mapping = {ident_for_event(c): w_of[d] for c, d in g}
                parts.append(Neg(_rename_free(disc(j), mapping)))
        body = conj(_dedup(parts))
        for d in reversed(topological_events(right, target)):
            body = Declare(w_of[d], right.labels[d], body)
        return Neg(LabelDiamond(a, body))

    def _dedup(parts: list[Formula]) -> list[Formula]:
        return list(dict.fromkeys(parts))

    return disc(space.index[INITIAL])
