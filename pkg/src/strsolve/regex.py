"""Regex parsing and compilation to epsilon-free symbolic NFAs.

The supported pattern language (full EBNF in docs/regex-grammar.md):
literals, escapes, character classes with ranges and leading ^ negation,
`.`, alternation `|`, `*` `+` `?`, grouping `()` and `(?:)`. Matching is
full-match: membership means the entire word is in the language. Anchors,
backreferences, lookaround, lazy/possessive quantifiers and bounded
repetition raise UnsupportedError rather than being approximated.

Compilation is a position construction (one state per literal/class
occurrence plus a single initial state), which yields an epsilon-free and
trim automaton directly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ResourceLimitError, SyntaxParseError, UnsupportedError
from .intervals import FULL, MAX_CODEPOINT, Interval, IntervalSet
from .snfa import SNfa, StateId, Transition, snfa


@dataclass(frozen=True)
class Literal:
    cp: int


@dataclass(frozen=True)
class CharClass:
    chars: IntervalSet  # normalized and non-empty


@dataclass(frozen=True)
class AnyChar:
    pass


@dataclass(frozen=True)
class Epsilon:
    pass


@dataclass(frozen=True)
class Never:
    """The empty language. Never produced by the parser; it exists so the
    SMT front-end can express `re.none` and empty ranges."""


@dataclass(frozen=True)
class Concat:
    items: tuple["Regex", ...]


@dataclass(frozen=True)
class Union:
    items: tuple["Regex", ...]


@dataclass(frozen=True)
class Star:
    item: "Regex"


@dataclass(frozen=True)
class Plus:
    item: "Regex"


@dataclass(frozen=True)
class Opt:
    item: "Regex"


Regex = Literal | CharClass | AnyChar | Epsilon | Never | Concat | Union | Star | Plus | Opt

DEFAULT_LENGTH_CAP = 10_000

_UNSUPPORTED_GROUPS = {"=": "lookahead", "!": "negative lookahead", "<": "lookbehind",
                       "P": "named group", "'": "named group"}


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.i = 0

    def _byte_offset(self, i: int) -> int:
        return len(self.src[:i].encode("utf-8"))

    def error(self, message: str, at: int | None = None) -> SyntaxParseError:
        return SyntaxParseError(message, self._byte_offset(self.i if at is None else at))

    def unsupported(self, feature: str, at: int | None = None) -> UnsupportedError:
        return UnsupportedError(feature, self._byte_offset(self.i if at is None else at))

    def peek(self) -> str | None:
        return self.src[self.i] if self.i < len(self.src) else None

    def take(self) -> str:
        ch = self.src[self.i]
        self.i += 1
        return ch

    def parse(self) -> Regex:
        node = self.union()
        if self.i != len(self.src):
            raise self.error(f"unexpected {self.src[self.i]!r}")
        return node

    def union(self) -> Regex:
        branches = [self.concat()]
        while self.peek() == "|":
            self.take()
            branches.append(self.concat())
        return branches[0] if len(branches) == 1 else Union(tuple(branches))

    def concat(self) -> Regex:
        items = []
        while self.peek() not in (None, "|", ")"):
            items.append(self.repeat())
        if not items:
            return Epsilon()
        return items[0] if len(items) == 1 else Concat(tuple(items))

    def repeat(self) -> Regex:
        node = self.atom()
        ch = self.peek()
        if ch not in ("*", "+", "?"):
            return node
        self.take()
        node = {"*": Star, "+": Plus, "?": Opt}[ch](node)
        follow = self.peek()
        if follow == "?":
            raise self.unsupported("lazy quantifier")
        if follow == "+":
            raise self.unsupported("possessive quantifier")
        if follow == "*":
            raise self.error("nothing to repeat")
        return node

    def atom(self) -> Regex:
        start = self.i
        ch = self.take()
        if ch == "(":
            if self.peek() == "?":
                self.take()
                mod = self.peek()
                if mod == ":":
                    self.take()
                else:
                    raise self.unsupported(_UNSUPPORTED_GROUPS.get(mod or "", "group modifier"), start)
            node = self.union()
            if self.peek() != ")":
                raise self.error("unbalanced (", start)
            self.take()
            return node
        if ch == "[":
            return self.char_class(start)
        if ch == ".":
            return AnyChar()
        if ch in "*+?":
            raise self.error("nothing to repeat", start)
        if ch == "{":
            raise self.unsupported("bounded repetition {m,n}", start)
        if ch in "^$":
            raise self.unsupported("anchor", start)
        if ch == ")":
            raise self.error("unbalanced )", start)
        if ch == "\\":
            return Literal(self.escape(start))
        return Literal(ord(ch))

    def escape(self, start: int) -> int:
        if self.peek() is None:
            raise self.error("dangling escape", start)
        ch = self.take()
        if ch == "n":
            return 10
        if ch == "t":
            return 9
        if ch == "r":
            return 13
        if ch == "x":
            return self.hex_digits(2, start)
        if ch == "u":
            if self.peek() != "{":
                raise self.error("expected { after \\u", start)
            self.take()
            j = self.i
            while self.peek() not in (None, "}"):
                self.take()
            if self.peek() is None:
                raise self.error("unterminated \\u{...}", start)
            digits = self.src[j:self.i]
            self.take()
            if not digits:
                raise self.error("empty \\u{...}", start)
            try:
                cp = int(digits, 16)
            except ValueError:
                raise self.error("bad hex in \\u{...}", start) from None
            if cp > MAX_CODEPOINT:
                raise self.error("code point above 0x10FFFF", start)
            return cp
        if ch.isdigit():
            raise self.unsupported("backreference", start)
        if ch.isalpha():
            raise self.unsupported(f"escape \\{ch}", start)
        return ord(ch)  # escaped punctuation stands for itself

    def hex_digits(self, n: int, start: int) -> int:
        digits = self.src[self.i:self.i + n]
        if len(digits) < n:
            raise self.error(f"expected {n} hex digits", start)
        try:
            cp = int(digits, 16)
        except ValueError:
            raise self.error(f"expected {n} hex digits", start) from None
        self.i += n
        return cp

    def char_class(self, start: int) -> Regex:
        negate = False
        if self.peek() == "^":
            self.take()
            negate = True
        parts: list[Interval] = []
        while True:
            ch = self.peek()
            if ch is None:
                raise self.error("unterminated character class", start)
            if ch == "]":
                self.take()
                break
            lo = self.class_char(start)
            if self.peek() == "-" and self.i + 1 < len(self.src) and self.src[self.i + 1] != "]":
                self.take()
                hi = self.class_char(start)
                if lo > hi:
                    raise self.error("reversed class range", start)
                parts.append(Interval(lo, hi))
            else:
                parts.append(Interval(lo, lo))
        if not parts:
            raise self.error("empty character class", start)
        chars = IntervalSet.normalize(parts)
        if negate:
            chars = chars.complement()
        if chars.is_empty():
            raise self.error("character class denotes no characters", start)
        return CharClass(chars)

    def class_char(self, start: int) -> int:
        ch = self.take()
        if ch == "\\":
            return self.escape(start)
        return ord(ch)


def parse_regex(src: str) -> Regex:
    """Parse a pattern into an AST; SyntaxParseError/UnsupportedError on bad input."""
    return _Parser(src).parse()


def _without_never(node: Regex) -> Regex:
    """Rewrite away embedded empty-language nodes so the position construction
    below never creates unreachable states; only a top-level Never survives."""
    if isinstance(node, CharClass) and node.chars.is_empty():
        return Never()
    if isinstance(node, Concat):
        items = tuple(_without_never(x) for x in node.items)
        if any(isinstance(x, Never) for x in items):
            return Never()
        return Concat(items)
    if isinstance(node, Union):
        items = tuple(x for x in (_without_never(x) for x in node.items)
                      if not isinstance(x, Never))
        if not items:
            return Never()
        return items[0] if len(items) == 1 else Union(items)
    if isinstance(node, Star):
        inner = _without_never(node.item)
        return Epsilon() if isinstance(inner, Never) else Star(inner)
    if isinstance(node, Plus):
        inner = _without_never(node.item)
        return Never() if isinstance(inner, Never) else Plus(inner)
    if isinstance(node, Opt):
        inner = _without_never(node.item)
        return Epsilon() if isinstance(inner, Never) else Opt(inner)
    return node


def compile(ast: Regex) -> SNfa:  # noqa: A001 - mirrors re.compile
    """Position-construction compile; the result is epsilon-free and trim."""
    ast = _without_never(ast)
    labels: list[IntervalSet] = []       # label of position p at labels[p-1]
    follow: list[set[int]] = []          # follow set of position p at follow[p-1]

    def new_pos(chars: IntervalSet) -> int:
        labels.append(chars)
        follow.append(set())
        return len(labels)

    def link(lasts: tuple[int, ...], firsts: tuple[int, ...]) -> None:
        for p in lasts:
            follow[p - 1].update(firsts)

    def lin(node: Regex) -> tuple[bool, tuple[int, ...], tuple[int, ...]]:
        if isinstance(node, Literal):
            p = new_pos(IntervalSet((Interval(node.cp, node.cp),)))
            return False, (p,), (p,)
        if isinstance(node, CharClass):
            p = new_pos(node.chars)
            return False, (p,), (p,)
        if isinstance(node, AnyChar):
            p = new_pos(IntervalSet((FULL,)))
            return False, (p,), (p,)
        if isinstance(node, Epsilon):
            return True, (), ()
        if isinstance(node, Never):
            return False, (), ()
        if isinstance(node, Concat):
            nullable, first, last = lin(node.items[0])
            for item in node.items[1:]:
                n2, f2, l2 = lin(item)
                link(last, f2)
                first = first + f2 if nullable else first
                last = last + l2 if n2 else l2
                nullable = nullable and n2
            return nullable, first, last
        if isinstance(node, Union):
            nullable, first, last = False, (), ()
            for item in node.items:
                n2, f2, l2 = lin(item)
                nullable = nullable or n2
                first += f2
                last += l2
            return nullable, first, last
        if isinstance(node, Star):
            _, first, last = lin(node.item)
            link(last, first)
            return True, first, last
        if isinstance(node, Plus):
            nullable, first, last = lin(node.item)
            link(last, first)
            return nullable, first, last
        if isinstance(node, Opt):
            _, first, last = lin(node.item)
            return True, first, last
        raise TypeError(f"not a regex node: {node!r}")

    nullable, first, last = lin(ast)
    init = StateId(0, 0)
    states = [init] + [StateId(p, 0) for p in range(1, len(labels) + 1)]
    transitions: set[Transition] = set()
    for p in first:
        for part in labels[p - 1].parts:
            transitions.add(Transition(init, part, StateId(p, 0)))
    for p in range(1, len(labels) + 1):
        src = StateId(p, 0)
        for q in sorted(follow[p - 1]):
            for part in labels[q - 1].parts:
                transitions.add(Transition(src, part, StateId(q, 0)))
    accepting = {StateId(p, 0) for p in last}
    if nullable:
        accepting.add(init)
    return snfa(states, transitions, {init}, accepting, trim=True)


def compile_pattern(src: str) -> SNfa:
    return compile(parse_regex(src))


_SIGMA_STAR = None


def sigma_star() -> SNfa:
    """The canonical one-state automaton for all words: one full self-loop."""
    global _SIGMA_STAR
    if _SIGMA_STAR is None:
        q = StateId(0, 0)
        _SIGMA_STAR = snfa({q}, {Transition(q, FULL, q)}, {q}, {q}, trim=True)
    return _SIGMA_STAR


def word_automaton(w: str) -> SNfa:
    """The singleton-language automaton for w: a chain of |w|+1 states."""
    states = [StateId(i, 0) for i in range(len(w) + 1)]
    transitions = {Transition(states[i], Interval(ord(ch), ord(ch)), states[i + 1])
                   for i, ch in enumerate(w)}
    return snfa(states, transitions, {states[0]}, {states[-1]}, trim=True)


def length_automaton(op: str, n: int, cap: int = DEFAULT_LENGTH_CAP) -> SNfa:
    """Automaton for { w : |w| op n } with op in <, <=, =, >=, >.

    A chain of any-character steps counts the length; >= and > end in a
    full self-loop. State count is n+O(1), hence the bound cap.
    """
    if op not in ("<", "<=", "=", ">=", ">"):
        raise ValueError(f"unknown length operator {op!r}")
    if n < 0:
        raise ValueError("length bound must be non-negative")
    if n > cap:
        raise ResourceLimitError(f"length bound too large: {n} (cap {cap})")
    chain = {"<": max(n - 1, 0), "<=": n, "=": n, ">=": n, ">": n + 1}[op]
    states = [StateId(i, 0) for i in range(chain + 1)]
    transitions = {Transition(states[i], FULL, states[i + 1]) for i in range(chain)}
    if op in (">=", ">"):
        transitions.add(Transition(states[chain], FULL, states[chain]))
        accepting = {states[chain]}
    elif op == "=":
        accepting = {states[chain]}
    elif op == "<=":
        accepting = set(states)
    else:  # "<"
        accepting = {s for i, s in enumerate(states) if i < n}
    return snfa(states, transitions, {states[0]}, accepting, trim=True)
