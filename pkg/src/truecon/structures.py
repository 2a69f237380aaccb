"""Finite stable configuration structures.

A structure is a finite family of configurations (sets of labelled events)
that is rooted, connected and closed under bounded unions and intersections.
Configurations are represented as integer bitsets over event ids 0..n-1,
which keeps the axiom checks and transition scans O(1) per set operation.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    EventUnused,
    IntersectionNotClosed,
    NotAConfiguration,
    NotConnected,
    NotRooted,
    TooManyEvents,
    UnionNotClosed,
)

MAX_EVENTS = 64


def mask_of(events: Iterable[int]) -> int:
    """Pack an iterable of event ids into a bitmask."""
    m = 0
    for e in events:
        m |= 1 << e
    return m


def members(mask: int) -> tuple[int, ...]:
    """Unpack a bitmask into sorted event ids."""
    out = []
    e = 0
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return tuple(out)


def popcount(mask: int) -> int:
    return mask.bit_count()


@dataclass(frozen=True)
class LabeledPoset:
    """A finite set of events with a strict partial order and a labelling.

    ``below[i]`` is the bitmask of strict predecessors of ``events[i]``;
    bit positions refer to event ids of the owning structure.
    """

    events: tuple[int, ...]
    labels: tuple[str, ...]
    below: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.events)

    def label_of(self, event: int) -> str:
        return self.labels[self.events.index(event)]

    def less(self, d: int, e: int) -> bool:
        """Strict causal order d < e."""
        return bool(self.below[self.events.index(e)] >> d & 1)

    def label_multiset(self) -> Counter:
        return Counter(self.labels)


class ConfigStructure:
    """A validated stable configuration structure.

    Instances are immutable; construct them through :func:`validate_stable`
    (or the frontend parsers).  Transition relations and per-configuration
    causal orders are precomputed once here since every later module
    re-traverses them.
    """

    __slots__ = (
        "labels",
        "names",
        "configs",
        "_sorted_configs",
        "_fwd",
        "_rev",
        "_order",
        "_name_to_id",
    )

    def __init__(
        self,
        labels: tuple[str, ...],
        names: tuple[str, ...],
        configs: frozenset[int],
    ):
        self.labels = labels
        self.names = names
        self.configs = configs
        self._sorted_configs: tuple[int, ...] = tuple(
            sorted(configs, key=lambda m: (popcount(m), m))
        )
        self._name_to_id: dict[str, int] = {nm: i for i, nm in enumerate(names)}
        self._fwd: dict[int, tuple[tuple[int, int], ...]] = {}
        self._rev: dict[int, tuple[tuple[int, int], ...]] = {}
        self._order: dict[int, tuple[int, ...]] = {}
        self._precompute()

    # -- construction helpers -------------------------------------------------

    def _precompute(self) -> None:
        fwd: dict[int, list[tuple[int, int]]] = {m: [] for m in self.configs}
        rev: dict[int, list[tuple[int, int]]] = {m: [] for m in self.configs}
        for big in self._sorted_configs:
            for e in members(big):
                small = big & ~(1 << e)
                if small in self.configs:
                    fwd[small].append((e, big))
                    rev[big].append((e, small))
        for m in self.configs:
            self._fwd[m] = tuple(sorted(fwd[m]))
            self._rev[m] = tuple(sorted(rev[m]))
            self._order[m] = self._causes_in(m)

    def _causes_in(self, x: int) -> tuple[int, ...]:
        """For each event e in x, the bitmask of events d with d <= e within x.

        Computed literally from the definition: d precedes e iff every
        sub-configuration of x containing e also contains d.  The mask for
        an event is therefore the intersection of all sub-configurations
        containing it.  Index i of the result corresponds to event id i
        (events outside x get 0).
        """
        subs = [y for y in self.configs if y & ~x == 0]
        out = [0] * len(self.labels)
        for e in members(x):
            bit = 1 << e
            need = x
            for y in subs:
                if y & bit:
                    need &= y
            out[e] = need
        return tuple(out)

    # -- basic queries ---------------------------------------------------------

    @property
    def n_events(self) -> int:
        return len(self.labels)

    @property
    def alphabet(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.labels)))

    @property
    def sorted_configs(self) -> tuple[int, ...]:
        return self._sorted_configs

    @property
    def max_config_size(self) -> int:
        return max((popcount(m) for m in self.configs), default=0)

    def has_config(self, x: int) -> bool:
        return x in self.configs

    def require_config(self, x) -> int:
        """Coerce an event collection or bitmask to a configuration mask."""
        m = self.mask(x)
        if m not in self.configs:
            raise NotAConfiguration(members(m))
        return m

    def mask(self, x) -> int:
        """Coerce ids, names or a bitmask to an event bitmask (unvalidated)."""
        if isinstance(x, int):
            return x
        acc = 0
        for item in x:
            if isinstance(item, str):
                if item not in self._name_to_id:
                    raise NotAConfiguration([item])
                acc |= 1 << self._name_to_id[item]
            else:
                acc |= 1 << item
        return acc

    def event_id(self, name: str) -> int:
        return self._name_to_id[name]

    def label(self, event: int) -> str:
        return self.labels[event]

    # -- transitions -----------------------------------------------------------

    def forward_transitions(self, x) -> tuple[tuple[int, int], ...]:
        """All (event, successor configuration) pairs from x, by event id."""
        return self._fwd[self.require_config(x)]

    def reverse_transitions(self, x) -> tuple[tuple[int, int], ...]:
        """All (event, predecessor configuration) pairs from x, by event id."""
        return self._rev[self.require_config(x)]

    def forward_by_label(self, x, label: str) -> tuple[tuple[int, int], ...]:
        return tuple(
            (e, x2) for e, x2 in self.forward_transitions(x) if self.labels[e] == label
        )

    def reverse_by_label(self, x, label: str) -> tuple[tuple[int, int], ...]:
        return tuple(
            (e, x2) for e, x2 in self.reverse_transitions(x) if self.labels[e] == label
        )

    def step_transitions(self, x, labels: Iterable[str]) -> tuple[int, ...]:
        """Configurations reached from x by one concurrent step with the given
        label multiset.  The empty multiset yields x itself."""
        m = self.require_config(x)
        want = Counter(labels)
        size = sum(want.values())
        out = []
        for big in self._sorted_configs:
            if popcount(big) != popcount(m) + size or big & m != m:
                continue
            diff = members(big & ~m)
            if Counter(self.labels[e] for e in diff) != want:
                continue
            order = self._order[big]
            ok = True
            for d, e in itertools.combinations(diff, 2):
                if order[e] >> d & 1 or order[d] >> e & 1:
                    ok = False
                    break
            if ok:
                out.append(big)
        return tuple(out)

    # -- causality -------------------------------------------------------------

    def leq(self, x, d: int, e: int) -> bool:
        """Causality within configuration x (reflexive)."""
        m = self.require_config(x)
        return bool(self._order[m][e] >> d & 1)

    def less(self, x, d: int, e: int) -> bool:
        return d != e and self.leq(x, d, e)

    def concurrent(self, x, d: int, e: int) -> bool:
        return d != e and not self.less(x, d, e) and not self.less(x, e, d)

    def causes(self, x, e: int) -> int:
        """Bitmask of strict causes of e within configuration x."""
        m = self.require_config(x)
        return self._order[m][e] & ~(1 << e)

    def poset(self, x) -> LabeledPoset:
        """The labelled causal order carried by configuration x."""
        m = self.require_config(x)
        ev = members(m)
        order = self._order[m]
        return LabeledPoset(
            events=ev,
            labels=tuple(self.labels[e] for e in ev),
            below=tuple(order[e] & ~(1 << e) for e in ev),
        )

    # -- misc ------------------------------------------------------------------

    def config_names(self, x: int) -> tuple[str, ...]:
        return tuple(self.names[e] for e in members(x))

    def __repr__(self) -> str:
        return (
            f"ConfigStructure({self.n_events} events, {len(self.configs)} configurations)"
        )


def validate_stable(
    labels: Sequence[str],
    family: Iterable,
    names: Sequence[str] | None = None,
) -> ConfigStructure:
    """Check the stability axioms and build a structure.

    ``labels[i]`` is the label of event i; ``family`` is any iterable of
    event-id collections (or bitmasks).  Raises the first violated axiom
    with a witnessing configuration pair or triple.
    """
    n = len(labels)
    if n > MAX_EVENTS:
        raise TooManyEvents(n, MAX_EVENTS)
    if names is None:
        names = tuple(f"e{i}" for i in range(n))
    else:
        names = tuple(names)

    masks: set[int] = set()
    for x in family:
        masks.add(x if isinstance(x, int) else mask_of(x))
    configs = frozenset(masks)
    ordered = sorted(configs, key=lambda m: (popcount(m), m))

    if 0 not in configs:
        raise NotRooted()
    for m in ordered:
        if m == 0:
            continue
        if not any(m & ~(1 << e) in configs for e in members(m)):
            raise NotConnected(_named(m, names))
    for x, y in itertools.combinations_with_replacement(ordered, 2):
        u = x | y
        if u in configs and x & y in configs:
            continue
        for z in ordered:
            if u & ~z == 0:
                if u not in configs:
                    raise UnionNotClosed(_named(x, names), _named(y, names), _named(z, names))
                raise IntersectionNotClosed(
                    _named(x, names), _named(y, names), _named(z, names)
                )
    used = 0
    for m in configs:
        used |= m
    for e in range(n):
        if not used >> e & 1:
            raise EventUnused(e, names[e])

    return ConfigStructure(tuple(labels), names, configs)


def _named(mask: int, names: Sequence[str]) -> frozenset:
    return frozenset(names[e] for e in members(mask))


# -- labelled poset isomorphism ------------------------------------------------


def poset_isomorphisms(p: LabeledPoset, q: LabeledPoset) -> Iterator[dict[int, int]]:
    """Yield every label- and order-preserving bijection from p to q.

    Backtracking over p's events in id order; candidates are pruned by a
    (label, #predecessors, #successors) signature before pairwise order
    consistency is checked against the partial assignment.
    """
    n = len(p)
    if n != len(q) or p.label_multiset() != q.label_multiset():
        return

    def sig(poset: LabeledPoset, i: int) -> tuple[str, int, int]:
        e = poset.events[i]
        preds = popcount(poset.below[i])
        succs = sum(1 for b in poset.below if b >> e & 1)
        return (poset.labels[i], preds, succs)

    psigs = [sig(p, i) for i in range(n)]
    qsigs = [sig(q, j) for j in range(n)]
    candidates = [
        [j for j in range(n) if qsigs[j] == psigs[i]] for i in range(n)
    ]

    assignment: list[int | None] = [None] * n
    used = [False] * n

    def extend(i: int) -> Iterator[dict[int, int]]:
        if i == n:
            yield {p.events[k]: q.events[assignment[k]] for k in range(n)}
            return
        pe = p.events[i]
        for j in candidates[i]:
            if used[j]:
                continue
            ok = True
            for k in range(i):
                jk = assignment[k]
                pk = p.events[k]
                if bool(p.below[i] >> pk & 1) != bool(q.below[j] >> q.events[jk] & 1):
                    ok = False
                    break
                if bool(p.below[k] >> pe & 1) != bool(
                    q.below[jk] >> q.events[j] & 1
                ):
                    ok = False
                    break
            if not ok:
                continue
            assignment[i] = j
            used[j] = True
            yield from extend(i + 1)
            assignment[i] = None
            used[j] = False

    yield from extend(0)


def isomorphic(p: LabeledPoset, q: LabeledPoset) -> bool:
    """True iff at least one isomorphism exists."""
    return next(poset_isomorphisms(p, q), None) is not None
