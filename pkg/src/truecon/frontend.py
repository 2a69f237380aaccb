"""Textual surfaces: process terms, structure files and formulas.

Terms follow ``P ::= 0 | a.P | P+P | P|P | (P)`` with ``.`` tightest and
``+`` loosest.  Structure files are two lines, ``events:`` and ``configs:``.
The formula grammar is ASCII:

    tt | ff | ~F | F & F | F '|' F | <x:a>F | [x:a]F | <-x>F | [-x]F
       | (x:a)F | <a>F | [a]F | <-a>F | <{a,...}>F | <-{a,...}>F | (F)

with unary operators tightest, then ``&``, then ``|``.  A bare ``<-tok>``
is read as an identifier reverse when ``tok`` is bound in scope; otherwise
it is a label reverse when ``tok`` occurs in a label position somewhere in
the formula, and a free identifier reverse if not.  ``<-{a}>`` always
forces the label reading.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ElaborationTooLarge, ParseError, RenderGuardExceeded
from .logic import (
    And,
    Declare,
    FF,
    Ff,
    Formula,
    FwdBox,
    FwdDiamond,
    FwdStep,
    LabelBox,
    LabelDiamond,
    Neg,
    Or,
    RevBox,
    RevDiamond,
    RevStep,
    TT,
    Tt,
    FRESH_PREFIX,
    children,
    free_identifiers,
    identifiers_in,
    labels_in,
    node_count,
    substitute,
    walk_unique,
)
from .structures import MAX_EVENTS, ConfigStructure, mask_of, members, validate_stable

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*'*")
_NAME = re.compile(r"[A-Za-z0-9_.'\-]+")

DEFAULT_RENDER_GUARD = 100_000


# -- process terms ---------------------------------------------------------------


@dataclass(frozen=True)
class TermAst:
    """Node of the little process language."""

    kind: str  # "nil" | "prefix" | "choice" | "par"
    label: str | None = None
    subs: tuple["TermAst", ...] = ()


class _Cursor:
    """Minimal scanning state over an input string."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, token: str) -> bool:
        self.skip_ws()
        if self.text.startswith(token, self.pos):
            self.pos += len(token)
            return True
        return False

    def expect(self, token: str) -> None:
        if not self.eat(token):
            raise ParseError(f"expected {token!r}", self.pos)

    def ident(self) -> str | None:
        self.skip_ws()
        m = _IDENT.match(self.text, self.pos)
        if not m:
            return None
        self.pos = m.end()
        return m.group()

    def done(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)


def parse_term_ast(text: str) -> TermAst:
    cur = _Cursor(text)
    ast = _parse_choice(cur)
    if not cur.done():
        raise ParseError("trailing input after term", cur.pos)
    return ast


def _parse_choice(cur: _Cursor) -> TermAst:
    left = _parse_par(cur)
    while cur.eat("+"):
        right = _parse_par(cur)
        left = TermAst("choice", subs=(left, right))
    return left


def _parse_par(cur: _Cursor) -> TermAst:
    left = _parse_prefix(cur)
    while cur.eat("|"):
        right = _parse_prefix(cur)
        left = TermAst("par", subs=(left, right))
    return left


def _parse_prefix(cur: _Cursor) -> TermAst:
    if cur.eat("0"):
        return TermAst("nil")
    if cur.eat("("):
        inner = _parse_choice(cur)
        cur.expect(")")
        return inner
    label = cur.ident()
    if label is None:
        raise ParseError("expected a label, '0' or '('", cur.pos)
    if cur.eat("."):
        cont = _parse_prefix(cur)
    else:
        cont = TermAst("nil")
    return TermAst("prefix", label=label, subs=(cont,))


def _elaborate(ast: TermAst, addr: str) -> tuple[list[str], list[str], list[int]]:
    """Return (labels, names, family-of-bitmasks) for a term node.

    Event names are dotted positional paths, stable across runs: a prefix
    event is named by its node address, binary operators route children
    through address segments 0 and 1.
    """
    if ast.kind == "nil":
        return [], [], [0]
    if ast.kind == "prefix":
        name = addr or "0"
        labels, names, family = _elaborate(ast.subs[0], name + ".0")
        shifted = [m << 1 | 1 for m in family]
        return [ast.label] + labels, [name] + names, [0] + shifted
    left_addr = f"{addr}.0" if addr else "0"
    right_addr = f"{addr}.1" if addr else "1"
    l_labels, l_names, l_family = _elaborate(ast.subs[0], left_addr)
    r_labels, r_names, r_family = _elaborate(ast.subs[1], right_addr)
    shift = len(l_labels)
    labels = l_labels + r_labels
    names = l_names + r_names
    if ast.kind == "choice":
        family = list(dict.fromkeys(l_family + [m << shift for m in r_family]))
        return labels, names, family
    if ast.kind == "par":
        family = [x | (y << shift) for x in l_family for y in r_family]
        return labels, names, family
    raise AssertionError(ast.kind)


def elaborate_term(ast: TermAst) -> ConfigStructure:
    labels, names, family = _elaborate(ast, "")
    if len(labels) > MAX_EVENTS:
        raise ElaborationTooLarge(len(labels), MAX_EVENTS)
    return validate_stable(labels, family, names=names)


def parse_term(text: str) -> ConfigStructure:
    """Parse a process term and elaborate it into a validated structure."""
    return elaborate_term(parse_term_ast(text))


# -- structure files ---------------------------------------------------------------


def parse_structure_file(text: str) -> ConfigStructure:
    """Parse the two-line structure format (events: / configs:)."""
    events_line = None
    configs_line = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("events:"):
            if events_line is not None:
                raise ParseError("duplicate events: line")
            events_line = line[len("events:"):].strip()
        elif line.startswith("configs:"):
            if configs_line is not None:
                raise ParseError("duplicate configs: line")
            configs_line = line[len("configs:"):].strip()
        else:
            raise ParseError(f"unrecognized line {line!r}")
    if events_line is None:
        raise ParseError("missing events: line")
    if configs_line is None:
        raise ParseError("missing configs: line")

    names: list[str] = []
    labels: list[str] = []
    for tok in events_line.split():
        if ":" not in tok:
            raise ParseError(f"event declaration {tok!r} is not name:label")
        name, label = tok.split(":", 1)
        if not name or not _NAME.fullmatch(name) or not label:
            raise ParseError(f"bad event declaration {tok!r}")
        if name in names:
            raise ParseError(f"duplicate event name {name!r}")
        names.append(name)
        labels.append(label)
    index = {nm: i for i, nm in enumerate(names)}

    family: list[int] = []
    saw_empty = False
    for entry in configs_line.split(";"):
        entry = entry.strip()
        if not entry:
            continue
        if not (entry.startswith("{") and entry.endswith("}")):
            raise ParseError(f"configuration {entry!r} is not brace-delimited")
        inner = entry[1:-1].split()
        mask = 0
        for nm in inner:
            if nm not in index:
                raise ParseError(f"unknown event {nm!r} in configuration")
            mask |= 1 << index[nm]
        if mask == 0:
            saw_empty = True
        family.append(mask)
    if not saw_empty:
        raise ParseError("the empty configuration {} must be listed")
    return validate_stable(labels, family, names=tuple(names))


def render_structure_file(s: ConfigStructure) -> str:
    """Canonical text for a structure; parses back to an equal structure."""
    evs = " ".join(f"{s.names[i]}:{s.labels[i]}" for i in range(s.n_events))
    cfgs = "; ".join(
        "{" + " ".join(s.names[e] for e in members(m)) + "}" for m in s.sorted_configs
    )
    return f"events: {evs}\nconfigs: {cfgs}\n"


# -- formulas ------------------------------------------------------------------------


def _collect_label_tokens(text: str) -> set[str]:
    """Tokens that occur in a label position anywhere in the input.

    Label positions are lexically recognizable: after a ':' in a binder,
    a singleton '<tok>' or '[tok]' modality, and brace lists.
    """
    labels: set[str] = set()
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == ":":
            m = _IDENT.match(text, i + 1)
            if m:
                labels.add(m.group())
                i = m.end()
                continue
        if c in "<[":
            j = i + 1
            if j < n and text[j] == "-":
                j += 1
            if j < n and text[j] == "{":
                j += 1
                while j < n and text[j] != "}":
                    m = _IDENT.match(text, j)
                    if m:
                        labels.add(m.group())
                        j = m.end()
                    else:
                        j += 1
                i = j
                continue
            if text[i + 1 : j] != "-":
                m = _IDENT.match(text, j)
                if m and m.end() < n and text[m.end()] == (">" if c == "<" else "]"):
                    labels.add(m.group())
                    i = m.end()
                    continue
        i += 1
    return labels


def parse_formula(text: str) -> Formula:
    """Parse a surface formula.

    Open formulas are legal; free identifiers are simply left free.
    """
    label_tokens = _collect_label_tokens(text)
    cur = _Cursor(text)
    phi = _parse_or(cur, frozenset(), label_tokens)
    if not cur.done():
        raise ParseError("trailing input after formula", cur.pos)
    return phi


def _parse_or(cur: _Cursor, bound: frozenset[str], lbl: set[str]) -> Formula:
    parts = [_parse_and(cur, bound, lbl)]
    while cur.eat("|"):
        parts.append(_parse_and(cur, bound, lbl))
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Or(p, out)
    return out


def _parse_and(cur: _Cursor, bound: frozenset[str], lbl: set[str]) -> Formula:
    parts = [_parse_unary(cur, bound, lbl)]
    while cur.eat("&"):
        parts.append(_parse_unary(cur, bound, lbl))
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = And(p, out)
    return out


def _ident_or_fail(cur: _Cursor, what: str) -> str:
    name = cur.ident()
    if name is None:
        raise ParseError(f"expected {what}", cur.pos)
    return name


def _parse_label_list(cur: _Cursor) -> list[str]:
    labels = [_ident_or_fail(cur, "a label")]
    while cur.eat(","):
        labels.append(_ident_or_fail(cur, "a label"))
    return labels


def _parse_unary(cur: _Cursor, bound: frozenset[str], lbl: set[str]) -> Formula:
    cur.skip_ws()
    if cur.eat("~"):
        return Neg(_parse_unary(cur, bound, lbl))
    if cur.eat("<-{"):
        labels = _parse_label_list(cur)
        cur.expect("}")
        cur.expect(">")
        return RevStep(labels, _parse_unary(cur, bound, lbl))
    if cur.eat("<-"):
        tok = _ident_or_fail(cur, "an identifier")
        cur.expect(">")
        if tok in bound:
            return RevDiamond(tok, _parse_unary(cur, bound, lbl))
        if tok in lbl:
            return RevStep((tok,), _parse_unary(cur, bound, lbl))
        return RevDiamond(tok, _parse_unary(cur, bound, lbl))
    if cur.eat("<{"):
        labels = _parse_label_list(cur)
        cur.expect("}")
        cur.expect(">")
        return FwdStep(labels, _parse_unary(cur, bound, lbl))
    if cur.eat("<"):
        tok = _ident_or_fail(cur, "an identifier or label")
        if cur.eat(":"):
            label = _ident_or_fail(cur, "a label")
            cur.expect(">")
            return FwdDiamond(tok, label, _parse_unary(cur, bound | {tok}, lbl))
        cur.expect(">")
        return LabelDiamond(tok, _parse_unary(cur, bound, lbl))
    if cur.eat("[-"):
        tok = _ident_or_fail(cur, "an identifier")
        cur.expect("]")
        if tok not in bound and tok in lbl:
            return Neg(RevStep((tok,), Neg(_parse_unary(cur, bound, lbl))))
        return RevBox(tok, _parse_unary(cur, bound, lbl))
    if cur.eat("["):
        tok = _ident_or_fail(cur, "an identifier or label")
        if cur.eat(":"):
            label = _ident_or_fail(cur, "a label")
            cur.expect("]")
            return FwdBox(tok, label, _parse_unary(cur, bound | {tok}, lbl))
        cur.expect("]")
        return LabelBox(tok, _parse_unary(cur, bound, lbl))
    if cur.peek() == "(":
        save = cur.pos
        cur.eat("(")
        tok = cur.ident()
        if tok is not None and cur.eat(":"):
            label = _ident_or_fail(cur, "a label")
            cur.expect(")")
            return Declare(tok, label, _parse_unary(cur, bound | {tok}, lbl))
        cur.pos = save
        cur.eat("(")
        inner = _parse_or(cur, bound, lbl)
        cur.expect(")")
        return inner
    if cur.eat("tt"):
        return TT
    if cur.eat("ff"):
        return FF
    raise ParseError("expected a formula", cur.pos)


# -- rendering -----------------------------------------------------------------------

_LEVEL_OR = 1
_LEVEL_AND = 2
_LEVEL_UNARY = 3


def render_formula(phi: Formula, guard: int = DEFAULT_RENDER_GUARD) -> str:
    """Render a formula so that re-parsing yields an alpha-equivalent one.

    Machine-generated binders (reserved namespace) are folded back into
    label forms when unused, and alpha-renamed to printable names when
    used.  Refuses formulas whose dag exceeds the node guard, since text
    has no sharing.
    """
    count = node_count(phi)
    if count > guard:
        raise RenderGuardExceeded(count, guard)
    phi = _printable(phi)
    free_rev = {
        node.ident
        for node in walk_unique(phi)
        if isinstance(node, (RevDiamond, RevBox)) and node.ident in free_identifiers(phi)
    }
    clash = free_rev & labels_in(phi)
    if clash:
        raise ValueError(
            f"free identifiers {sorted(clash)} collide with labels; not renderable"
        )
    return _render(phi, _LEVEL_OR)


def _printable(phi: Formula) -> Formula:
    """Eliminate reserved-namespace identifiers ahead of rendering.

    An unused machine binder folds back to the label form it came from;
    a used one is alpha-renamed to a visible name.
    """
    if not any(
        isinstance(n, (FwdDiamond, FwdBox, Declare)) and n.ident.startswith(FRESH_PREFIX)
        for n in walk_unique(phi)
    ):
        return phi

    taken = identifiers_in(phi) | labels_in(phi)
    counter = 0

    def fresh_visible() -> str:
        nonlocal counter
        while True:
            name = f"x{counter}"
            counter += 1
            if name not in taken:
                taken.add(name)
                return name

    def go(node: Formula) -> Formula:
        if isinstance(node, Declare) and node.ident.startswith(FRESH_PREFIX):
            sub = node.sub
            if (
                isinstance(sub, RevDiamond)
                and sub.ident == node.ident
                and node.ident not in free_identifiers(sub.sub)
            ):
                return RevStep((node.label,), go(sub.sub))
        if isinstance(node, (FwdDiamond, FwdBox, Declare)) and node.ident.startswith(
            FRESH_PREFIX
        ):
            if node.ident not in free_identifiers(node.sub):
                body = go(node.sub)
                if isinstance(node, FwdDiamond):
                    return LabelDiamond(node.label, body)
                if isinstance(node, FwdBox):
                    return LabelBox(node.label, body)
                return Declare(fresh_visible(), node.label, body)
            name = fresh_visible()
            body = go(substitute(node.sub, node.ident, name))
            return type(node)(name, node.label, body)
        kids = tuple(go(c) for c in children(node))
        return _rebuild_unary(node, *kids) if kids else node

    return go(phi)


def _rebuild_unary(node: Formula, *kids: Formula) -> Formula:
    from .logic import _rebuild

    return _rebuild(node, tuple(kids))


def _render(phi: Formula, level: int) -> str:
    if isinstance(phi, Tt):
        return "tt"
    if isinstance(phi, Ff):
        return "ff"
    if isinstance(phi, And):
        text = f"{_render(phi.left, _LEVEL_UNARY)} & {_render(phi.right, _LEVEL_AND)}"
        return f"({text})" if level > _LEVEL_AND else text
    if isinstance(phi, Or):
        text = f"{_render(phi.left, _LEVEL_AND)} | {_render(phi.right, _LEVEL_OR)}"
        return f"({text})" if level > _LEVEL_OR else text
    if isinstance(phi, Neg):
        return f"~{_render(phi.sub, _LEVEL_UNARY)}"
    if isinstance(phi, FwdDiamond):
        return f"<{phi.ident}:{phi.label}>{_render(phi.sub, _LEVEL_UNARY)}"
    if isinstance(phi, FwdBox):
        return f"[{phi.ident}:{phi.label}]{_render(phi.sub, _LEVEL_UNARY)}"
    if isinstance(phi, Declare):
        return f"({phi.ident}:{phi.label}){_render(phi.sub, _LEVEL_UNARY)}"
    if isinstance(phi, RevDiamond):
        return f"<-{phi.ident}>{_render(phi.sub, _LEVEL_UNARY)}"
    if isinstance(phi, RevBox):
        return f"[-{phi.ident}]{_render(phi.sub, _LEVEL_UNARY)}"
    if isinstance(phi, LabelDiamond):
        return f"<{phi.label}>{_render(phi.sub, _LEVEL_UNARY)}"
    if isinstance(phi, LabelBox):
        return f"[{phi.label}]{_render(phi.sub, _LEVEL_UNARY)}"
    if isinstance(phi, FwdStep):
        return f"<{{{','.join(phi.labels)}}}>{_render(phi.sub, _LEVEL_UNARY)}"
    if isinstance(phi, RevStep):
        return f"<-{{{','.join(phi.labels)}}}>{_render(phi.sub, _LEVEL_UNARY)}"
    raise TypeError(type(phi).__name__)


# -- structure input sniffing ----------------------------------------------------------


def parse_structure(text: str) -> ConfigStructure:
    """Accept either a structure file or an inline process term."""
    stripped = text.lstrip()
    if stripped.startswith("events:") or stripped.startswith("#"):
        return parse_structure_file(text)
    return parse_term(text)
