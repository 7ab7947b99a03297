"""Shared test utilities: seeded random generators and reference matchers.

The reference matchers here are deliberately naive and independent of the
production code paths they check.
"""

from __future__ import annotations

import random

from strsolve import regex as rx
from strsolve.constraints import Problem, make_problem
from strsolve.intervals import Interval, IntervalSet
from strsolve.snfa import SNfa, StateId, Transition, remove_unreachable, snfa

TEST_ALPHABET = (97, 99)      # a..c, used by the problem suites
LEMMA_ALPHABET = (97, 100)    # a..d, used by the automata suites


def words_upto(alphabet: tuple[int, int], max_len: int) -> list[str]:
    chars = [chr(c) for c in range(alphabet[0], alphabet[1] + 1)]
    out = [""]
    frontier = [""]
    for _ in range(max_len):
        frontier = [w + ch for w in frontier for ch in chars]
        out.extend(frontier)
    return out


def random_snfa(rng: random.Random, max_states: int = 5,
                alphabet: tuple[int, int] = LEMMA_ALPHABET,
                max_transitions: int = 6) -> SNfa:
    """A random trim automaton over a small alphabet (language may be empty)."""
    n = rng.randint(1, max_states)
    states = [StateId(i, 0) for i in range(n)]
    transitions = set()
    for _ in range(rng.randint(0, max_transitions)):
        lo = rng.randint(alphabet[0], alphabet[1])
        hi = rng.randint(lo, alphabet[1])
        transitions.add(Transition(rng.choice(states), Interval(lo, hi), rng.choice(states)))
    initial = rng.sample(states, rng.randint(1, n))
    accepting = [s for s in states if rng.random() < 0.5]
    return remove_unreachable(snfa(states, transitions, initial, accepting))


def random_problem(rng: random.Random, max_vars: int = 4, tree_only: bool = False,
                   alphabet: tuple[int, int] = TEST_ALPHABET) -> Problem:
    """A random acyclic problem; with tree_only no variable repeats on any
    right-hand side. Regular constraints skew small to keep oracles fast."""
    n = rng.randint(1, max_vars)
    names = [f"v{i}" for i in range(n)]
    pairs: dict[str, set[tuple[str, str]]] = {}
    used_rhs: set[str] = set()
    for i, lhs in enumerate(names):
        later = names[i + 1:]
        if len(later) < 1 or rng.random() > 0.7:
            continue
        for _ in range(1 if rng.random() < 0.8 else 2):
            if tree_only:
                avail = [v for v in later if v not in used_rhs]
                if len(avail) < 2:
                    break
                v1, v2 = rng.sample(avail, 2)
                used_rhs.update((v1, v2))
            else:
                v1 = rng.choice(later)
                v2 = rng.choice(later)
            pairs.setdefault(lhs, set()).add((v1, v2))
    chars = [chr(c) for c in range(alphabet[0], alphabet[1] + 1)]
    reg = {}
    for v in names:
        roll = rng.random()
        if roll < 0.15:
            reg[v] = rx.sigma_star()
        elif roll < 0.45:
            word = "".join(rng.choice(chars) for _ in range(rng.randint(0, 2)))
            reg[v] = rx.word_automaton(word)
        elif roll < 0.65:
            reg[v] = rx.length_automaton(rng.choice(["<=", "="]), rng.randint(0, 2))
        else:
            reg[v] = random_snfa(rng, max_states=4, alphabet=alphabet, max_transitions=5)
    return make_problem(names, pairs, reg)


def ref_regex_match(node: rx.Regex, w: str) -> bool:
    """Reference matcher: structural recursion with explicit split search."""
    if isinstance(node, rx.Literal):
        return w == chr(node.cp)
    if isinstance(node, rx.CharClass):
        return len(w) == 1 and node.chars.contains(ord(w))
    if isinstance(node, rx.AnyChar):
        return len(w) == 1
    if isinstance(node, rx.Epsilon):
        return w == ""
    if isinstance(node, rx.Never):
        return False
    if isinstance(node, rx.Concat):
        return _match_seq(node.items, w)
    if isinstance(node, rx.Union):
        return any(ref_regex_match(item, w) for item in node.items)
    if isinstance(node, rx.Star):
        if w == "":
            return True
        return any(ref_regex_match(node.item, w[:i]) and ref_regex_match(node, w[i:])
                   for i in range(1, len(w) + 1))
    if isinstance(node, rx.Plus):
        return any(ref_regex_match(node.item, w[:i])
                   and (i == len(w) or ref_regex_match(node, w[i:]))
                   for i in range(1, len(w) + 1)) or (w == "" and ref_regex_match(node.item, ""))
    if isinstance(node, rx.Opt):
        return w == "" or ref_regex_match(node.item, w)
    raise TypeError(node)


def _match_seq(items: tuple[rx.Regex, ...], w: str) -> bool:
    if not items:
        return w == ""
    return any(ref_regex_match(items[0], w[:i]) and _match_seq(items[1:], w[i:])
               for i in range(len(w) + 1))


def random_regex(rng: random.Random, depth: int,
                 alphabet: tuple[int, int] = TEST_ALPHABET) -> rx.Regex:
    lo, hi = alphabet
    if depth == 0:
        roll = rng.random()
        if roll < 0.4:
            return rx.Literal(rng.randint(lo, hi))
        if roll < 0.7:
            a = rng.randint(lo, hi)
            b = rng.randint(a, hi)
            return rx.CharClass(IntervalSet.from_pairs((a, b)))
        if roll < 0.85:
            return rx.AnyChar()
        return rx.Epsilon()
    roll = rng.random()
    if roll < 0.3:
        return rx.Concat(tuple(random_regex(rng, depth - 1, alphabet)
                               for _ in range(rng.randint(2, 3))))
    if roll < 0.55:
        return rx.Union(tuple(random_regex(rng, depth - 1, alphabet) for _ in range(2)))
    if roll < 0.7:
        return rx.Star(random_regex(rng, depth - 1, alphabet))
    if roll < 0.8:
        return rx.Plus(random_regex(rng, depth - 1, alphabet))
    if roll < 0.9:
        return rx.Opt(random_regex(rng, depth - 1, alphabet))
    return random_regex(rng, 0, alphabet)
