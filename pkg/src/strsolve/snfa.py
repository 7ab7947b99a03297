"""Symbolic NFAs with interval-labeled transitions.

States are (id, tag) pairs; the tag realizes the injective state renaming
that keeps the two operands of a concatenation disjoint. Transition labels
are single non-empty intervals. Every collection is iterated in a fixed
sorted order, so identical inputs always rebuild identical automata, and
concatenation and product emit only states reachable from the initial set
(trim), which makes language emptiness a check on the accepting set.
"""

from __future__ import annotations

from collections import defaultdict, deque, namedtuple
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional

from .errors import ResourceLimitError
from .intervals import Interval

DEFAULT_ISO_CAP = 12


class StateId(namedtuple("StateId", ["id", "tag"])):
    __slots__ = ()

    def __repr__(self) -> str:
        return f"{self.id}:{self.tag}"


Transition = namedtuple("Transition", ["src", "label", "dst"])

# Debug-mode validation: when enabled, every constructed automaton is checked
# for well-formedness (and for honesty of its trim flag). Too costly for big
# products to leave on unconditionally.
_VALIDATE = False


def set_validation(enabled: bool) -> bool:
    global _VALIDATE
    previous = _VALIDATE
    _VALIDATE = enabled
    return previous


@dataclass(frozen=True)
class SNfa:
    """Immutable symbolic NFA (Q, transitions, I, F).

    `transitions` is a sorted duplicate-free tuple; `trim` records whether
    every state is known to be reachable from the initial set. The flag is
    bookkeeping, not part of value equality.
    """

    states: frozenset[StateId]
    transitions: tuple[Transition, ...]
    initial: frozenset[StateId]
    accepting: frozenset[StateId]
    trim: bool = field(default=False, compare=False)

    @cached_property
    def _out(self) -> dict[StateId, list[Transition]]:
        adj: dict[StateId, list[Transition]] = {}
        for t in self.transitions:
            adj.setdefault(t.src, []).append(t)
        return adj

    def n_states(self) -> int:
        return len(self.states)

    def n_transitions(self) -> int:
        return len(self.transitions)

    def __repr__(self) -> str:
        return (f"SNfa(states={len(self.states)}, transitions={len(self.transitions)}, "
                f"initial={len(self.initial)}, accepting={len(self.accepting)})")


def snfa(states: Iterable[StateId], transitions: Iterable[Transition],
         initial: Iterable[StateId], accepting: Iterable[StateId],
         trim: bool = False) -> SNfa:
    """Canonicalizing constructor: sorts and dedupes, validates in debug mode."""
    if not isinstance(transitions, (set, frozenset)):
        transitions = set(transitions)
    a = SNfa(frozenset(states), tuple(sorted(transitions)),
             frozenset(initial), frozenset(accepting), trim)
    if _VALIDATE:
        validate(a)
    return a


def well_formed(a: SNfa) -> bool:
    if not (a.initial <= a.states and a.accepting <= a.states):
        return False
    return all(t.src in a.states and t.dst in a.states and t.label.lo <= t.label.hi
               for t in a.transitions)


def validate(a: SNfa) -> None:
    """Raise ValueError on any well-formedness violation (debug aid)."""
    if not a.initial <= a.states:
        raise ValueError(f"initial states outside Q: {sorted(a.initial - a.states)}")
    if not a.accepting <= a.states:
        raise ValueError(f"accepting states outside Q: {sorted(a.accepting - a.states)}")
    for t in a.transitions:
        if t.src not in a.states or t.dst not in a.states:
            raise ValueError(f"transition endpoint outside Q: {t}")
        if t.label.lo > t.label.hi:
            raise ValueError(f"empty transition label stored: {t}")
    if a.trim:
        reachable = _reachable_states(a)
        if reachable != a.states:
            raise ValueError(f"trim flag set but unreachable states exist: {sorted(a.states - reachable)}")


def _reachable_states(a: SNfa) -> frozenset[StateId]:
    seen = set(a.initial)
    queue = deque(sorted(a.initial))
    while queue:
        q = queue.popleft()
        for t in a._out.get(q, ()):
            if t.dst not in seen:
                seen.add(t.dst)
                queue.append(t.dst)
    return frozenset(seen)


def accepts(a: SNfa, word: str) -> bool:
    """Membership by forward state-set simulation."""
    current = a.initial
    if not current:
        return False
    out = a._out
    for ch in word:
        cp = ord(ch)
        nxt = set()
        for q in current:
            for t in out.get(q, ()):
                if t.label.lo <= cp <= t.label.hi:
                    nxt.add(t.dst)
        if not nxt:
            return False
        current = nxt
    return not a.accepting.isdisjoint(current)


def rename(a: SNfa, tag: int) -> SNfa:
    """Isomorphic copy whose states are renumbered 0..n-1 and carry `tag`.

    Renumbering by sorted order keeps the map injective even when the input
    mixes tags, so two renames with distinct tags always have disjoint states.
    """
    mapping = {q: StateId(i, tag) for i, q in enumerate(sorted(a.states))}
    return snfa(mapping.values(),
                {Transition(mapping[t.src], t.label, mapping[t.dst]) for t in a.transitions},
                (mapping[q] for q in a.initial),
                (mapping[q] for q in a.accepting),
                trim=a.trim)


def concat(a1: SNfa, a2: SNfa) -> SNfa:
    """Concatenation: L(result) = { w1+w2 | w1 in L(a1), w2 in L(a2) }.

    The operands are renamed with tags 1 and 2 to make their state sets
    disjoint. Every a1-transition into an a1-accepting state is bridged to
    each a2-initial state; the initial set additionally includes a2's when
    a1 accepts the empty word. A worklist pass keeps only states reachable
    from the initial set, so the result is trim by construction.
    """
    r1 = rename(a1, 1)
    r2 = rename(a2, 2)
    if r1.initial & r1.accepting:
        initial = r1.initial | r2.initial
    else:
        initial = r1.initial
    entry2 = sorted(r2.initial)

    out: dict[StateId, list[Transition]] = defaultdict(list)
    for t in r1.transitions:
        out[t.src].append(t)
        if t.dst in r1.accepting:
            for q2 in entry2:
                out[t.src].append(Transition(t.src, t.label, q2))
    for t in r2.transitions:
        out[t.src].append(t)

    reached = set(initial)
    queue = deque(sorted(initial))
    kept: set[Transition] = set()
    while queue:
        q = queue.popleft()
        for t in out.get(q, ()):
            if t.label.lo > t.label.hi:  # cheap guard; labels are non-empty by invariant
                continue
            kept.add(t)
            if t.dst not in reached:
                reached.add(t.dst)
                queue.append(t.dst)
    return snfa(reached, kept, initial, reached & r2.accepting, trim=True)


def product(a1: SNfa, a2: SNfa) -> SNfa:
    """Product: L(result) = L(a1) & L(a2).

    Pair states are discovered by breadth-first search from I1 x I2 and
    renumbered on first visit, so only reachable pairs are built. A pair
    transition is kept exactly when the label intersection is non-empty.
    """
    out1 = _int_adjacency(a1)
    out2 = _int_adjacency(a2)
    pair_ids: dict[tuple[StateId, StateId], StateId] = {}
    init_pairs = [(p, q) for p in sorted(a1.initial) for q in sorted(a2.initial)]
    for pq in init_pairs:
        pair_ids[pq] = StateId(len(pair_ids), 0)
    queue = deque(init_pairs)
    labels: dict[tuple[int, int], Interval] = {}
    kept: set[Transition] = set()
    add = kept.add
    while queue:
        pq = queue.popleft()
        p, q = pq
        rows2 = out2.get(q)
        rows1 = out1.get(p)
        if not rows1 or not rows2:
            continue
        src = pair_ids[pq]
        for lo1, hi1, d1 in rows1:
            for lo2, hi2, d2 in rows2:
                lo = lo1 if lo1 >= lo2 else lo2
                hi = hi1 if hi1 <= hi2 else hi2
                if lo > hi:
                    continue
                dq = (d1, d2)
                dst = pair_ids.get(dq)
                if dst is None:
                    dst = StateId(len(pair_ids), 0)
                    pair_ids[dq] = dst
                    queue.append(dq)
                lab = labels.get((lo, hi))
                if lab is None:
                    lab = Interval(lo, hi)
                    labels[lo, hi] = lab
                add(Transition(src, lab, dst))
    acc1 = a1.accepting
    acc2 = a2.accepting
    accepting = {sid for (p, q), sid in pair_ids.items() if p in acc1 and q in acc2}
    initial = {pair_ids[pq] for pq in init_pairs}
    return snfa(pair_ids.values(), kept, initial, accepting, trim=True)


def _int_adjacency(a: SNfa) -> dict[StateId, list[tuple[int, int, StateId]]]:
    adj: dict[StateId, list[tuple[int, int, StateId]]] = {}
    for t in a.transitions:
        adj.setdefault(t.src, []).append((t.label.lo, t.label.hi, t.dst))
    return adj


def remove_unreachable(a: SNfa) -> SNfa:
    """Language-preserving trim: drop states unreachable from the initial set."""
    reached = set(a.initial)
    queue = deque(sorted(a.initial))
    kept: set[Transition] = set()
    while queue:
        q = queue.popleft()
        for t in a._out.get(q, ()):
            kept.add(t)
            if t.dst not in reached:
                reached.add(t.dst)
                queue.append(t.dst)
    return snfa(reached, kept, a.initial, a.accepting & reached, trim=True)


def is_empty(a: SNfa) -> bool:
    """Emptiness as accepting-set emptiness on the trimmed automaton."""
    t = a if a.trim else remove_unreachable(a)
    return not t.accepting


def some_word(a: SNfa) -> Optional[str]:
    """A shortest accepted word (BFS-first), taking each label's lo; None if empty."""
    t = a if a.trim else remove_unreachable(a)
    if not t.accepting:
        return None
    seeds = sorted(t.initial)
    for q in seeds:
        if q in t.accepting:
            return ""
    parent: dict[StateId, tuple[StateId, int]] = {}
    seen = set(seeds)
    queue = deque(seeds)
    while queue:
        q = queue.popleft()
        for tr in t._out.get(q, ()):
            if tr.dst in seen:
                continue
            seen.add(tr.dst)
            parent[tr.dst] = (q, tr.label.lo)
            if tr.dst in t.accepting:
                chars: list[int] = []
                cur = tr.dst
                while cur in parent:
                    cur, cp = parent[cur]
                    chars.append(cp)
                return "".join(map(chr, reversed(chars)))
            queue.append(tr.dst)
    raise AssertionError("trim automaton with accepting states has a reachable witness")


def split_word(a1: SNfa, a2: SNfa, c: Optional[SNfa], w: str) -> Optional[tuple[str, str]]:
    """A split w = w1+w2 with w1 in L(a1) and w2 in L(a2); shortest w1 wins.

    `c`, when given, is the already-built concatenation of a1 and a2 and is
    used only as a quick rejection filter.
    """
    if c is not None and not accepts(c, w):
        return None
    for i in range(len(w) + 1):
        w1 = w[:i]
        if accepts(a1, w1) and accepts(a2, w[i:]):
            return w1, w[i:]
    return None


def isomorphic(a1: SNfa, a2: SNfa, cap: int = DEFAULT_ISO_CAP) -> bool:
    """Structural isomorphism (exact labels), by backtracking search.

    Test utility only, hence the small default state cap.
    """
    if len(a1.states) > cap or len(a2.states) > cap:
        raise ResourceLimitError(
            f"isomorphism check limited to {cap} states "
            f"(got {len(a1.states)} and {len(a2.states)})")
    if (len(a1.states) != len(a2.states) or len(a1.transitions) != len(a2.transitions)
            or len(a1.initial) != len(a2.initial) or len(a1.accepting) != len(a2.accepting)):
        return False

    def signature(a: SNfa, q: StateId) -> tuple:
        out_labels = sorted(t.label for t in a._out.get(q, ()))
        in_labels = sorted(t.label for t in a.transitions if t.dst == q)
        return (q in a.initial, q in a.accepting, tuple(out_labels), tuple(in_labels))

    sig2: dict[tuple, list[StateId]] = defaultdict(list)
    for q in sorted(a2.states):
        sig2[signature(a2, q)].append(q)

    order = sorted(a1.states)
    trans2 = set(a2.transitions)
    mapping: dict[StateId, StateId] = {}
    used: set[StateId] = set()

    def consistent(q1: StateId, q2: StateId) -> bool:
        for t in a1.transitions:
            if t.src == q1 and t.dst in mapping:
                if Transition(q2, t.label, mapping[t.dst]) not in trans2:
                    return False
            if t.dst == q1 and t.src in mapping:
                if Transition(mapping[t.src], t.label, q2) not in trans2:
                    return False
            if t.src == q1 and t.dst == q1:
                if Transition(q2, t.label, q2) not in trans2:
                    return False
        return True

    def assign(i: int) -> bool:
        if i == len(order):
            mapped = {Transition(mapping[t.src], t.label, mapping[t.dst]) for t in a1.transitions}
            return mapped == trans2
        q1 = order[i]
        for q2 in sig2.get(signature(a1, q1), ()):
            if q2 in used or not consistent(q1, q2):
                continue
            mapping[q1] = q2
            used.add(q2)
            if assign(i + 1):
                return True
            del mapping[q1]
            used.remove(q2)
        return False

    return assign(0)


def to_dot(a: SNfa, name: str = "snfa") -> str:
    """GraphViz export with "lo-hi" edge labels."""
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    for i, q in enumerate(sorted(a.initial)):
        lines.append(f'  __start{i} [shape=point];')
        lines.append(f'  __start{i} -> "{q}";')
    for q in sorted(a.states):
        shape = "doublecircle" if q in a.accepting else "circle"
        lines.append(f'  "{q}" [shape={shape}];')
    for t in a.transitions:
        lines.append(f'  "{t.src}" -> "{t.dst}" [label="{t.label.lo}-{t.label.hi}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def dump(a: SNfa) -> str:
    """Line-based debug dump; exact grammar in docs/dump-format.md."""
    lines = [f"snfa trim={int(a.trim)} states={len(a.states)} "
             f"initial={len(a.initial)} accepting={len(a.accepting)} "
             f"transitions={len(a.transitions)}"]
    for q in sorted(a.states):
        flags = ("I" if q in a.initial else "-") + ("A" if q in a.accepting else "-")
        lines.append(f"q {q} {flags}")
    for t in a.transitions:
        lines.append(f"t {t.src} -> {t.dst} {t.label!r}")
    return "\n".join(lines) + "\n"
