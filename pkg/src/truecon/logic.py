"""Core event-identifier logic: formulas, environments and satisfaction.

Formula nodes are immutable with hashes cached at construction, so shared
(dag-like) subterms hash in O(1) and structural equality short-circuits on
identity.  Surface nodes for derived operators (ff, disjunction, boxes,
label-only and step modalities) are kept distinct and rewritten to the six
core connectives by :func:`expand_derived` before evaluation.
"""

from __future__ import annotations

import itertools
from collections import Counter
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import NotPermissible
from .structures import ConfigStructure, members

# Reserved namespace for mechanically generated identifiers; the frontend
# parser never accepts these, which guarantees freshness of expansions.
FRESH_PREFIX = "$"


class Formula:
    """Base class for all formula nodes."""

    __slots__ = ("_hash", "_fi")
    core = False

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if type(self) is not type(other) or self._hash != other._hash:
            return False
        return self._fields() == other._fields()

    def __hash__(self) -> int:
        return self._hash

    def _fields(self) -> tuple:
        raise NotImplementedError

    def __repr__(self) -> str:
        from .frontend import render_formula

        return f"<Formula {render_formula(self, guard=10_000)}>"


class Tt(Formula):
    __slots__ = ()
    core = True

    def __init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("tt",)))

    def _fields(self) -> tuple:
        return ()


class Ff(Formula):
    """Surface falsity; expands to ~tt."""

    __slots__ = ()

    def __init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("ff",)))

    def _fields(self) -> tuple:
        return ()


class Neg(Formula):
    __slots__ = ("sub",)
    core = True

    def __init__(self, sub: Formula):
        object.__setattr__(self, "sub", sub)
        object.__setattr__(self, "_hash", hash(("~", sub._hash)))

    def _fields(self) -> tuple:
        return (self.sub,)


class And(Formula):
    __slots__ = ("left", "right")
    core = True

    def __init__(self, left: Formula, right: Formula):
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "_hash", hash(("&", left._hash, right._hash)))

    def _fields(self) -> tuple:
        return (self.left, self.right)


class Or(Formula):
    """Surface disjunction; expands to ~(~l & ~r)."""

    __slots__ = ("left", "right")

    def __init__(self, left: Formula, right: Formula):
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "_hash", hash(("|", left._hash, right._hash)))

    def _fields(self) -> tuple:
        return (self.left, self.right)


class FwdDiamond(Formula):
    """<x:a>F — perform a fresh a-labelled event, binding x to it."""

    __slots__ = ("ident", "label", "sub")
    core = True

    def __init__(self, ident: str, label: str, sub: Formula):
        object.__setattr__(self, "ident", ident)
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "sub", sub)
        object.__setattr__(self, "_hash", hash(("<:>", ident, label, sub._hash)))

    def _fields(self) -> tuple:
        return (self.ident, self.label, self.sub)


class FwdBox(Formula):
    """[x:a]F — surface dual of the forward diamond."""

    __slots__ = ("ident", "label", "sub")

    def __init__(self, ident: str, label: str, sub: Formula):
        object.__setattr__(self, "ident", ident)
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "sub", sub)
        object.__setattr__(self, "_hash", hash(("[:]", ident, label, sub._hash)))

    def _fields(self) -> tuple:
        return (self.ident, self.label, self.sub)


class Declare(Formula):
    """(x:a)F — bind x to some a-labelled event already in the configuration."""

    __slots__ = ("ident", "label", "sub")
    core = True

    def __init__(self, ident: str, label: str, sub: Formula):
        object.__setattr__(self, "ident", ident)
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "sub", sub)
        object.__setattr__(self, "_hash", hash(("(:)", ident, label, sub._hash)))

    def _fields(self) -> tuple:
        return (self.ident, self.label, self.sub)


class RevDiamond(Formula):
    """<-x>F — undo the event bound to x.  Does not bind x."""

    __slots__ = ("ident", "sub")
    core = True

    def __init__(self, ident: str, sub: Formula):
        object.__setattr__(self, "ident", ident)
        object.__setattr__(self, "sub", sub)
        object.__setattr__(self, "_hash", hash(("<-", ident, sub._hash)))

    def _fields(self) -> tuple:
        return (self.ident, self.sub)


class RevBox(Formula):
    """[-x]F — surface dual of the reverse diamond."""

    __slots__ = ("ident", "sub")

    def __init__(self, ident: str, sub: Formula):
        object.__setattr__(self, "ident", ident)
        object.__setattr__(self, "sub", sub)
        object.__setattr__(self, "_hash", hash(("[-", ident, sub._hash)))

    def _fields(self) -> tuple:
        return (self.ident, self.sub)


class LabelDiamond(Formula):
    """<a>F — surface forward move named only by label; binder is fresh."""

    __slots__ = ("label", "sub")

    def __init__(self, label: str, sub: Formula):
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "sub", sub)
        object.__setattr__(self, "_hash", hash(("<a>", label, sub._hash)))

    def _fields(self) -> tuple:
        return (self.label, self.sub)


class LabelBox(Formula):
    """[a]F over a label only; dual of LabelDiamond."""

    __slots__ = ("label", "sub")

    def __init__(self, label: str, sub: Formula):
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "sub", sub)
        object.__setattr__(self, "_hash", hash(("[a]", label, sub._hash)))

    def _fields(self) -> tuple:
        return (self.label, self.sub)


class FwdStep(Formula):
    """<{a,...}>F — one concurrent step performing the label multiset."""

    __slots__ = ("labels", "sub")

    def __init__(self, labels: Iterable[str], sub: Formula):
        object.__setattr__(self, "labels", tuple(sorted(labels)))
        object.__setattr__(self, "sub", sub)
        object.__setattr__(self, "_hash", hash(("<A>", self.labels, sub._hash)))

    def _fields(self) -> tuple:
        return (self.labels, self.sub)


class RevStep(Formula):
    """<-{a,...}>F — undo one concurrent step of the label multiset."""

    __slots__ = ("labels", "sub")

    def __init__(self, labels: Iterable[str], sub: Formula):
        object.__setattr__(self, "labels", tuple(sorted(labels)))
        object.__setattr__(self, "sub", sub)
        object.__setattr__(self, "_hash", hash(("<-A>", self.labels, sub._hash)))

    def _fields(self) -> tuple:
        return (self.labels, self.sub)


TT = Tt()
FF = Ff()


def conj(parts: Sequence[Formula]) -> Formula:
    """Right-nested conjunction; empty gives tt."""
    if not parts:
        return TT
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = And(p, out)
    return out


def disj(parts: Sequence[Formula]) -> Formula:
    """Right-nested surface disjunction; empty gives ff."""
    if not parts:
        return FF
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Or(p, out)
    return out


# -- traversal helpers ----------------------------------------------------------


def children(phi: Formula) -> tuple[Formula, ...]:
    if isinstance(phi, (Tt, Ff)):
        return ()
    if isinstance(phi, (Neg, FwdDiamond, FwdBox, Declare, RevDiamond, RevBox,
                        LabelDiamond, LabelBox, FwdStep, RevStep)):
        return (phi.sub,)
    if isinstance(phi, (And, Or)):
        return (phi.left, phi.right)
    raise TypeError(f"unknown formula node {type(phi).__name__}")


def walk_unique(phi: Formula) -> Iterator[Formula]:
    """All nodes reachable from phi, each object yielded once."""
    seen: set[int] = set()
    stack = [phi]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        yield node
        stack.extend(children(node))


def node_count(phi: Formula) -> int:
    """Number of distinct nodes in the formula dag."""
    return sum(1 for _ in walk_unique(phi))


def _rebuild(phi: Formula, new_children: tuple[Formula, ...]) -> Formula:
    if isinstance(phi, (Tt, Ff)):
        return phi
    if isinstance(phi, Neg):
        return Neg(new_children[0])
    if isinstance(phi, And):
        return And(*new_children)
    if isinstance(phi, Or):
        return Or(*new_children)
    if isinstance(phi, FwdDiamond):
        return FwdDiamond(phi.ident, phi.label, new_children[0])
    if isinstance(phi, FwdBox):
        return FwdBox(phi.ident, phi.label, new_children[0])
    if isinstance(phi, Declare):
        return Declare(phi.ident, phi.label, new_children[0])
    if isinstance(phi, RevDiamond):
        return RevDiamond(phi.ident, new_children[0])
    if isinstance(phi, RevBox):
        return RevBox(phi.ident, new_children[0])
    if isinstance(phi, LabelDiamond):
        return LabelDiamond(phi.label, new_children[0])
    if isinstance(phi, LabelBox):
        return LabelBox(phi.label, new_children[0])
    if isinstance(phi, FwdStep):
        return FwdStep(phi.labels, new_children[0])
    if isinstance(phi, RevStep):
        return RevStep(phi.labels, new_children[0])
    raise TypeError(type(phi).__name__)


# -- free identifiers ------------------------------------------------------------


def free_identifiers(phi: Formula) -> frozenset[str]:
    """The free identifiers of phi.

    Binders are the forward diamond/box and the declaration; the reverse
    modalities use their identifier free.  Cached on the node.
    """
    try:
        return phi._fi
    except AttributeError:
        pass
    if isinstance(phi, (Tt, Ff)):
        out: frozenset[str] = frozenset()
    elif isinstance(phi, (Neg, LabelDiamond, LabelBox, FwdStep, RevStep)):
        out = free_identifiers(phi.sub)
    elif isinstance(phi, (And, Or)):
        out = free_identifiers(phi.left) | free_identifiers(phi.right)
    elif isinstance(phi, (FwdDiamond, FwdBox, Declare)):
        out = free_identifiers(phi.sub) - {phi.ident}
    elif isinstance(phi, (RevDiamond, RevBox)):
        out = free_identifiers(phi.sub) | {phi.ident}
    else:
        raise TypeError(type(phi).__name__)
    phi._fi = out
    return out


def is_closed(phi: Formula) -> bool:
    return not free_identifiers(phi)


def identifiers_in(phi: Formula) -> set[str]:
    """All identifiers occurring anywhere (free or bound)."""
    out: set[str] = set()
    for node in walk_unique(phi):
        if isinstance(node, (FwdDiamond, FwdBox, Declare, RevDiamond, RevBox)):
            out.add(node.ident)
    return out


def labels_in(phi: Formula) -> set[str]:
    out: set[str] = set()
    for node in walk_unique(phi):
        if isinstance(node, (FwdDiamond, FwdBox, Declare, LabelDiamond, LabelBox)):
            out.add(node.label)
        elif isinstance(node, (FwdStep, RevStep)):
            out.update(node.labels)
    return out


class FreshNames:
    """Generator of identifiers in the reserved machine namespace."""

    def __init__(self, start: int = 0):
        self._next = start

    def __call__(self) -> str:
        name = f"{FRESH_PREFIX}{self._next}"
        self._next += 1
        return name


def _fresh_outside(taken: set[str], base: str) -> str:
    stem = base.lstrip(FRESH_PREFIX) or "x"
    for i in itertools.count():
        cand = f"{stem}_{i}" if not base.startswith(FRESH_PREFIX) else f"{FRESH_PREFIX}r{i}"
        if cand not in taken:
            return cand
    raise AssertionError


# -- substitution and alpha-conversion -------------------------------------------


def substitute(phi: Formula, old: str, new: str) -> Formula:
    """Capture-avoiding replacement of free occurrences of ``old`` by ``new``.

    The usual notation phi[new/old].  Binders that would capture ``new``
    are alpha-renamed first.
    """
    if old == new:
        return phi
    memo: dict[int, Formula] = {}

    def go(node: Formula) -> Formula:
        if old not in free_identifiers(node):
            return node
        got = memo.get(id(node))
        if got is not None:
            return got
        if isinstance(node, (RevDiamond, RevBox)):
            ident = new if node.ident == old else node.ident
            out: Formula = type(node)(ident, go(node.sub))
        elif isinstance(node, (FwdDiamond, FwdBox, Declare)):
            # old is free here, so node.ident != old
            if node.ident == new:
                taken = identifiers_in(node.sub) | {old, new}
                ren = _fresh_outside(taken, node.ident)
                body = substitute(node.sub, node.ident, ren)
                out = type(node)(ren, node.label, go_sub(body))
            else:
                out = type(node)(node.ident, node.label, go(node.sub))
        else:
            out = _rebuild(node, tuple(go(c) for c in children(node)))
        memo[id(node)] = out
        return out

    def go_sub(node: Formula) -> Formula:
        # after a rename the memo no longer applies to the fresh body
        return substitute(node, old, new)

    return go(phi)


def alpha_equal(a: Formula, b: Formula) -> bool:
    """Structural equality up to renaming of bound identifiers."""

    def go(x: Formula, y: Formula, mx: dict[str, int], my: dict[str, int], depth: int) -> bool:
        if type(x) is not type(y):
            return False
        if isinstance(x, (Tt, Ff)):
            return True
        if isinstance(x, Neg):
            return go(x.sub, y.sub, mx, my, depth)
        if isinstance(x, (And, Or)):
            return go(x.left, y.left, mx, my, depth) and go(x.right, y.right, mx, my, depth)
        if isinstance(x, (FwdDiamond, FwdBox, Declare)):
            if x.label != y.label:
                return False
            mx2 = {**mx, x.ident: depth}
            my2 = {**my, y.ident: depth}
            return go(x.sub, y.sub, mx2, my2, depth + 1)
        if isinstance(x, (RevDiamond, RevBox)):
            kx = mx.get(x.ident, x.ident)
            ky = my.get(y.ident, y.ident)
            return kx == ky and go(x.sub, y.sub, mx, my, depth)
        if isinstance(x, (LabelDiamond, LabelBox)):
            return x.label == y.label and go(x.sub, y.sub, mx, my, depth)
        if isinstance(x, (FwdStep, RevStep)):
            return x.labels == y.labels and go(x.sub, y.sub, mx, my, depth)
        raise TypeError(type(x).__name__)

    return go(a, b, {}, {}, 0)


# -- derived-operator expansion ---------------------------------------------------


def expand_derived(phi: Formula, fresh: FreshNames | None = None) -> Formula:
    """Rewrite all surface operators into the six core connectives.

    Fresh identifiers for label-only and step modalities come from the
    reserved machine namespace, so they are guaranteed distinct from
    anything the parser accepts.
    """
    if fresh is None:
        fresh = FreshNames()
    memo: dict[int, Formula] = {}

    def go(node: Formula) -> Formula:
        got = memo.get(id(node))
        if got is not None:
            return got
        if isinstance(node, Tt):
            out: Formula = node
        elif isinstance(node, Ff):
            out = Neg(TT)
        elif isinstance(node, Neg):
            out = Neg(go(node.sub))
        elif isinstance(node, And):
            out = And(go(node.left), go(node.right))
        elif isinstance(node, Or):
            out = Neg(And(Neg(go(node.left)), Neg(go(node.right))))
        elif isinstance(node, FwdDiamond):
            out = FwdDiamond(node.ident, node.label, go(node.sub))
        elif isinstance(node, FwdBox):
            out = Neg(FwdDiamond(node.ident, node.label, Neg(go(node.sub))))
        elif isinstance(node, Declare):
            out = Declare(node.ident, node.label, go(node.sub))
        elif isinstance(node, RevDiamond):
            out = RevDiamond(node.ident, go(node.sub))
        elif isinstance(node, RevBox):
            out = Neg(RevDiamond(node.ident, Neg(go(node.sub))))
        elif isinstance(node, LabelDiamond):
            out = FwdDiamond(fresh(), node.label, go(node.sub))
        elif isinstance(node, LabelBox):
            out = Neg(FwdDiamond(fresh(), node.label, Neg(go(node.sub))))
        elif isinstance(node, FwdStep):
            body = go(node.sub)
            idents = [fresh() for _ in node.labels]
            enabled = [RevDiamond(x, TT) for x in idents[:-1]]
            out = conj([body] + enabled) if enabled else body
            for x, a in zip(reversed(idents), reversed(node.labels)):
                out = FwdDiamond(x, a, out)
        elif isinstance(node, RevStep):
            body = go(node.sub)
            idents = [fresh() for _ in node.labels]
            if not idents:
                out = body
            else:
                chain = body
                for x in reversed(idents):
                    chain = RevDiamond(x, chain)
                enabled = [RevDiamond(x, TT) for x in idents[1:]]
                out = conj([chain] + enabled)
                for x, a in zip(reversed(idents), reversed(node.labels)):
                    out = Declare(x, a, out)
        else:
            raise TypeError(type(node).__name__)
        memo[id(node)] = out
        return out

    return go(phi)


def is_core(phi: Formula) -> bool:
    return all(node.core for node in walk_unique(phi))


# -- modal depth -------------------------------------------------------------------


def modal_depth(phi: Formula) -> int:
    """Nesting depth of forward and reverse diamonds; declarations are free."""
    if not is_core(phi):
        phi = expand_derived(phi)
    memo: dict[int, int] = {}

    def go(node: Formula) -> int:
        got = memo.get(id(node))
        if got is not None:
            return got
        if isinstance(node, Tt):
            d = 0
        elif isinstance(node, Neg):
            d = go(node.sub)
        elif isinstance(node, And):
            d = max(go(node.left), go(node.right))
        elif isinstance(node, Declare):
            d = go(node.sub)
        elif isinstance(node, (FwdDiamond, RevDiamond)):
            d = 1 + go(node.sub)
        else:
            raise TypeError(type(node).__name__)
        memo[id(node)] = d
        return d

    return go(phi)


# -- sublogic classification --------------------------------------------------------

SUBLOGIC_TAGS = ("EIL", "EIL_ro", "EIL_dfro", "EIL_h", "EIL_wh", "EIL_hwh")


def classify_sublogic(phi: Formula) -> frozenset[str]:
    """The set of sublogic grammars (by tag) that accept phi.

    Classification runs on the expanded core form; derived operators belong
    to whatever grammar their expansion belongs to.  Always contains "EIL".
    """
    if not is_core(phi):
        phi = expand_derived(phi)

    ro_memo: dict[int, bool] = {}
    dfro_memo: dict[int, bool] = {}
    h_memo: dict[int, bool] = {}
    wh_memo: dict[int, bool] = {}
    hwh_memo: dict[int, bool] = {}

    def is_ro(n: Formula) -> bool:
        got = ro_memo.get(id(n))
        if got is None:
            if isinstance(n, Tt):
                got = True
            elif isinstance(n, Neg):
                got = is_ro(n.sub)
            elif isinstance(n, And):
                got = is_ro(n.left) and is_ro(n.right)
            elif isinstance(n, (Declare, RevDiamond)):
                got = is_ro(n.sub)
            else:
                got = False
            ro_memo[id(n)] = got
        return got

    def is_dfro(n: Formula) -> bool:
        got = dfro_memo.get(id(n))
        if got is None:
            if isinstance(n, Tt):
                got = True
            elif isinstance(n, Neg):
                got = is_dfro(n.sub)
            elif isinstance(n, And):
                got = is_dfro(n.left) and is_dfro(n.right)
            elif isinstance(n, RevDiamond):
                got = is_dfro(n.sub)
            else:
                got = False
            dfro_memo[id(n)] = got
        return got

    def is_h(n: Formula) -> bool:
        got = h_memo.get(id(n))
        if got is None:
            if is_ro(n):
                got = True
            elif isinstance(n, Neg):
                got = is_h(n.sub)
            elif isinstance(n, And):
                got = is_h(n.left) and is_h(n.right)
            elif isinstance(n, (FwdDiamond, Declare)):
                got = is_h(n.sub)
            else:
                got = False
            h_memo[id(n)] = got
        return got

    def is_wh(n: Formula) -> bool:
        got = wh_memo.get(id(n))
        if got is None:
            if is_ro(n) and not free_identifiers(n):
                got = True
            elif isinstance(n, Tt):
                got = True
            elif isinstance(n, Neg):
                got = is_wh(n.sub)
            elif isinstance(n, And):
                got = is_wh(n.left) and is_wh(n.right)
            elif isinstance(n, FwdDiamond):
                got = n.ident not in free_identifiers(n.sub) and is_wh(n.sub)
            else:
                got = False
            wh_memo[id(n)] = got
        return got

    def is_hwh(n: Formula) -> bool:
        got = hwh_memo.get(id(n))
        if got is None:
            if isinstance(n, Tt):
                got = True
            elif isinstance(n, Neg):
                got = is_hwh(n.sub)
            elif isinstance(n, And):
                got = is_hwh(n.left) and is_hwh(n.right)
            elif isinstance(n, FwdDiamond):
                got = not free_identifiers(n.sub) and is_hwh(n.sub)
            elif isinstance(n, (Declare, RevDiamond)):
                got = is_hwh(n.sub)
            else:
                got = False
            hwh_memo[id(n)] = got
        return got

    tags = {"EIL"}
    if is_ro(phi):
        tags.add("EIL_ro")
    if is_dfro(phi):
        tags.add("EIL_dfro")
    if is_h(phi):
        tags.add("EIL_h")
    if is_wh(phi):
        tags.add("EIL_wh")
    if is_hwh(phi):
        tags.add("EIL_hwh")
    return frozenset(tags)


# -- environments and satisfaction ----------------------------------------------------

Environment = Mapping[str, int]


def restrict(rho: Environment, idents: frozenset[str]) -> tuple[tuple[str, int], ...]:
    """Canonical (sorted) restriction of an environment, for memo keys."""
    return tuple(sorted((x, e) for x, e in rho.items() if x in idents))


def is_permissible(phi: Formula, x_mask: int, rho: Environment) -> bool:
    """True iff rho covers FI(phi) and maps it into the configuration."""
    for ident in free_identifiers(phi):
        e = rho.get(ident)
        if e is None or not x_mask >> e & 1:
            return False
    return True


def satisfies(
    structure: ConfigStructure,
    config,
    rho: Environment,
    phi: Formula,
) -> bool:
    """Decide structure, config, rho |= phi.

    The formula may use surface operators; it is expanded first.  The
    environment must be permissible for the formula and configuration,
    otherwise NotPermissible is raised.  Inside the evaluation a reverse
    diamond whose continuation would lose permissibility is simply false.

    Evaluation memoizes on (configuration, node identity, environment
    restricted to the node's free identifiers); the restriction is sound
    because satisfaction only depends on the free identifiers' bindings.
    """
    x = structure.require_config(config)
    if not is_core(phi):
        phi = expand_derived(phi)
    if not is_permissible(phi, x, rho):
        raise NotPermissible(
            f"environment {dict(rho)} does not cover {set(free_identifiers(phi))} within the configuration"
        )
    memo: dict[tuple, bool] = {}
    return _eval(structure, x, dict(rho), phi, memo)


def _eval(
    s: ConfigStructure,
    x: int,
    rho: dict[str, int],
    phi: Formula,
    memo: dict[tuple, bool],
) -> bool:
    key = (x, id(phi), restrict(rho, free_identifiers(phi)))
    got = memo.get(key)
    if got is not None:
        return got
    if isinstance(phi, Tt):
        out = True
    elif isinstance(phi, Neg):
        out = not _eval(s, x, rho, phi.sub, memo)
    elif isinstance(phi, And):
        out = _eval(s, x, rho, phi.left, memo) and _eval(s, x, rho, phi.right, memo)
    elif isinstance(phi, FwdDiamond):
        out = False
        for e, x2 in s.forward_transitions(x):
            if s.labels[e] != phi.label:
                continue
            rho2 = dict(rho)
            rho2[phi.ident] = e
            if _eval(s, x2, rho2, phi.sub, memo):
                out = True
                break
    elif isinstance(phi, Declare):
        out = False
        for e in members(x):
            if s.labels[e] != phi.label:
                continue
            rho2 = dict(rho)
            rho2[phi.ident] = e
            if _eval(s, x, rho2, phi.sub, memo):
                out = True
                break
    elif isinstance(phi, RevDiamond):
        e = rho[phi.ident]
        x2 = x & ~(1 << e)
        if not (x >> e & 1) or not s.has_config(x2):
            out = False
        elif not is_permissible(phi.sub, x2, rho):
            # the continuation mentions an identifier bound to the undone
            # event; the transition is disallowed rather than an error
            out = False
        else:
            out = _eval(s, x2, rho, phi.sub, memo)
    else:
        raise TypeError(f"satisfaction over non-core node {type(phi).__name__}")
    memo[key] = out
    return out


def structure_satisfies(s: ConfigStructure, phi: Formula) -> bool:
    """Shorthand for the empty configuration and empty environment."""
    return satisfies(s, 0, {}, phi)
