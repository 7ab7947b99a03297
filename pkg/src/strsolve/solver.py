"""Forward propagation of regular constraints and verdict classification.

Propagation walks the concatenation dependence graph from independent
variables upward: each round refines every variable whose dependencies are
already refined, replacing its automaton with the product of the current
one and the concatenation of its pair's automata. The working set shrinks
every round, so the loop runs at most |variables| times; if no variable is
ready while some remain, the dependencies are cyclic and the solve reports
unknown.

Verdicts: an empty refined language anywhere is a sound unsat; when all
refined languages are non-empty and no variable repeats on the equations'
right-hand sides, the constraint is satisfiable and a model is extracted
from the refined automata; otherwise the result is unknown.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .constraints import (Assignment, CyclicDependencyError, Problem, VarId,
                          check_tree, dependencies, sat_str, validate_problem)
from .errors import ResourceLimitError
from .regex import sigma_star
from .snfa import SNfa, concat, is_empty, product, some_word, split_word

DEFAULT_MAX_TRANSITIONS = 5_000_000

RefinedReg = dict[VarId, SNfa]


@dataclass
class SolveStats:
    iterations: int = 0
    millis: float = 0.0
    var_sizes: dict[VarId, tuple[int, int]] = field(default_factory=dict)

    @property
    def max_states(self) -> int:
        return max((s for s, _ in self.var_sizes.values()), default=0)

    @property
    def max_transitions(self) -> int:
        return max((t for _, t in self.var_sizes.values()), default=0)


@dataclass
class Verdict:
    kind: str  # "sat" | "unsat" | "unknown"
    model: Optional[Assignment] = None     # sat only; passes sat_str
    witness: Optional[VarId] = None        # unsat only; variable with empty language
    reason: Optional[str] = None           # unknown only; "not-tree" | "cyclic"
    stats: SolveStats = field(default_factory=SolveStats)


class Budget:
    """Cooperative per-solve limits, checked between automaton operations."""

    def __init__(self, max_transitions: int = DEFAULT_MAX_TRANSITIONS,
                 deadline: Optional[float] = None):
        self.max_transitions = max_transitions
        self.deadline = deadline  # time.monotonic() value

    def charge(self, a: SNfa) -> SNfa:
        if len(a.transitions) > self.max_transitions:
            raise ResourceLimitError(
                f"automaton grew past {self.max_transitions} transitions")
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise ResourceLimitError("time budget exhausted")
        return a


def ready_set(s: set[VarId], p: Problem, r: set[VarId]) -> set[VarId]:
    """Variables in s whose dependencies are all refined (i.e. in r)."""
    return {v for v in s if dependencies(p, v) <= r}


def _is_sigma_star(a: SNfa) -> bool:
    return (len(a.states) == 1 and len(a.transitions) == 1
            and a.initial == a.states and a.accepting == a.states
            and a.transitions[0].label.lo == 0
            and a.transitions[0].label.hi == 0x10FFFF)


def var_lang(c: set[VarId], p: Problem, reg: Mapping[VarId, SNfa],
             budget: Optional[Budget] = None, optimize: bool = False) -> RefinedReg:
    """Refine every variable in c against its concatenation constraints.

    With `optimize`, products with the canonical all-words automaton and
    concatenations of two of them are rewritten away instead of built.
    """
    budget = budget or Budget()
    out = dict(reg)
    for v in sorted(c):
        a = out[v]
        for v1, v2 in sorted(p.concat.get(v, frozenset())):
            r1, r2 = out[v1], out[v2]
            if optimize and _is_sigma_star(r1) and _is_sigma_star(r2):
                part = sigma_star()
            else:
                part = budget.charge(concat(r1, r2))
            if optimize and _is_sigma_star(a):
                a = part
            elif optimize and _is_sigma_star(part):
                pass
            else:
                a = budget.charge(product(a, part))
        out[v] = a
    return out


def forward_prop(p: Problem, budget: Optional[Budget] = None,
                 optimize: bool = False, stats: Optional[SolveStats] = None) -> RefinedReg:
    """Refine all regular constraints; raises CyclicDependencyError when the
    dependence graph prevents any progress."""
    validate_problem(p)
    budget = budget or Budget()
    s = set(p.variables)
    r: set[VarId] = set()
    reg: RefinedReg = dict(p.reg)
    iterations = 0
    while s:
        c = ready_set(s, p, r)
        if not c:
            raise CyclicDependencyError(frozenset(s))
        reg = var_lang(c, p, reg, budget, optimize)
        s -= c
        r |= c
        iterations += 1
    if stats is not None:
        stats.iterations = iterations
    return reg


def extract_model(p: Problem, reg1: Mapping[VarId, SNfa]) -> Assignment:
    """Build a satisfying assignment from refined automata, top down.

    Requires the tree property, acyclicity, and all languages non-empty.
    Roots take a shortest witness of their refined language; equations then
    split each assigned word into the pair's variables. Failure to split is
    a solver bug, not an input condition, hence the hard error.
    """
    rhs_vars = {x for v in p.concat for pair in p.concat[v] for x in pair}
    mu: Assignment = {}
    queue = [v for v in sorted(p.variables) if v not in rhs_vars]
    for v in queue:
        w = some_word(reg1[v])
        if w is None:
            raise RuntimeError(f"model extraction on empty language for {v!r}")
        mu[v] = w
    while queue:
        v = queue.pop(0)
        for v1, v2 in sorted(p.concat.get(v, frozenset())):
            split = split_word(reg1[v1], reg1[v2], None, mu[v])
            if split is None:
                raise RuntimeError(
                    f"no split of {mu[v]!r} for {v} = {v1} + {v2}; refinement is broken")
            mu[v1], mu[v2] = split
            queue.append(v1)
            queue.append(v2)
    missing = set(p.variables) - set(mu)
    if missing:
        raise RuntimeError(f"model extraction left variables unassigned: {sorted(missing)}")
    return mu


def classify(p: Problem, reg1: RefinedReg | CyclicDependencyError,
             stats: Optional[SolveStats] = None) -> Verdict:
    """Turn refined constraints into a verdict.

    unsat needs only one empty language (sound unconditionally); sat
    additionally needs the tree property and is backed by an extracted,
    checked model; everything else is unknown.
    """
    stats = stats or SolveStats()
    if isinstance(reg1, CyclicDependencyError):
        return Verdict("unknown", reason="cyclic", stats=stats)
    stats.var_sizes = {v: (len(reg1[v].states), len(reg1[v].transitions))
                       for v in sorted(reg1)}
    for v in sorted(reg1):
        if is_empty(reg1[v]):
            return Verdict("unsat", witness=v, stats=stats)
    if not check_tree(p):
        return Verdict("unknown", reason="not-tree", stats=stats)
    model = extract_model(p, reg1)
    if not sat_str(p, model):
        raise RuntimeError("extracted model fails the satisfaction predicate; solver bug")
    return Verdict("sat", model=model, stats=stats)


def solve(p: Problem, optimize: bool = False,
          max_transitions: int = DEFAULT_MAX_TRANSITIONS,
          deadline: Optional[float] = None) -> Verdict:
    """Propagate and classify one problem, collecting run statistics."""
    stats = SolveStats()
    start = time.perf_counter()
    budget = Budget(max_transitions, deadline)
    try:
        reg1: RefinedReg | CyclicDependencyError = forward_prop(
            p, budget, optimize, stats)
    except CyclicDependencyError as err:
        reg1 = err
    verdict = classify(p, reg1, stats)
    stats.millis = (time.perf_counter() - start) * 1000.0
    return verdict
