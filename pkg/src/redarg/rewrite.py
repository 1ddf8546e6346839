"""Rewriting engine: single steps, normalization, joinability, and
bounded reachable-set semantics.

Strategies fix a deterministic redex order (leftmost-innermost is the
default everywhere).  Fuel exhaustion is always a reported outcome,
never an exception, so callers can stay tri-state.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, Optional

from .errors import WellFormednessError
from .terms import (
    App,
    Position,
    Substitution,
    Term,
    Var,
    format_position,
    format_term,
    is_ground,
    match,
)

if TYPE_CHECKING:
    from .trs import Rule, Trs

DEFAULT_FUEL = 10_000
DEFAULT_MAX_TERMS = 5_000
DEFAULT_MAX_STEPS = 20_000

STRATEGIES = ("leftmost-innermost", "leftmost-outermost")


@dataclass(frozen=True)
class TraceStep:
    position: Position
    rule: "Rule"
    before: Term
    after: Term

    def __str__(self) -> str:
        return (
            f"{format_position(self.position)}: {format_term(self.before)} -> "
            f"{format_term(self.after)} [{self.rule.label}]"
        )


@dataclass(frozen=True)
class EvalOutcome:
    kind: str  # value | normal-form | fuel-exhausted
    term: Term
    steps: int
    trace: Optional[tuple[TraceStep, ...]] = None

    @property
    def is_value(self) -> bool:
        return self.kind == "value"

    @property
    def exhausted(self) -> bool:
        return self.kind == "fuel-exhausted"


@dataclass(frozen=True)
class SemanticsResult:
    sred: frozenset[Term]
    seval: frozenset[Term]
    snf: frozenset[Term]
    shnf: frozenset[Term]
    sempty: frozenset[Term]
    truncated: bool


@lru_cache(maxsize=128)
def _root_index(rules: tuple["Rule", ...]) -> dict[str, tuple["Rule", ...]]:
    index: dict[str, list["Rule"]] = {}
    for rule in rules:
        assert isinstance(rule.lhs, App)
        index.setdefault(rule.lhs.symbol.name, []).append(rule)
    return {name: tuple(rs) for name, rs in index.items()}


def _match_at(t: Term, rules: tuple["Rule", ...]) -> Optional[tuple["Rule", Substitution]]:
    """First rule (file order) whose lhs matches t at the root."""
    for rule in rules:
        sigma = match(rule.lhs, t)
        if sigma is not None:
            return rule, sigma
    return None


def rewrite_step(
    t: Term, trs: "Trs", strategy: str = "leftmost-innermost"
) -> Optional[tuple[Term, Position, "Rule"]]:
    """The unique step the strategy takes from t, or None on a normal form.

    Redex positions are ordered by the strategy (postorder for
    innermost, preorder for outermost); rules apply in file order.
    Single tree walk; only the path to the redex is rebuilt.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    innermost = strategy == "leftmost-innermost"
    index = _root_index(trs.rules)

    def at_root(s: Term) -> Optional[tuple[Term, Position, "Rule"]]:
        hit = _match_at(s, index.get(s.symbol.name, ()))
        if hit is None:
            return None
        rule, sigma = hit
        return sigma.apply(rule.rhs), (), rule

    def in_args(s: Term) -> Optional[tuple[Term, Position, "Rule"]]:
        for i, a in enumerate(s.args, start=1):
            got = walk(a)
            if got is not None:
                nxt, p, rule = got
                args = list(s.args)
                args[i - 1] = nxt
                return App(s.symbol, tuple(args)), (i,) + p, rule
        return None

    def walk(s: Term) -> Optional[tuple[Term, Position, "Rule"]]:
        if isinstance(s, Var):
            return None
        if innermost:
            return in_args(s) or at_root(s)
        return at_root(s) or in_args(s)

    return walk(t)


def is_constructor_ground(t: Term) -> bool:
    if isinstance(t, Var):
        return False
    return t.symbol.kind == "constructor" and all(
        is_constructor_ground(a) for a in t.args
    )


def is_normal_form(t: Term, trs: "Trs") -> bool:
    return rewrite_step(t, trs) is None


def normalize(
    t: Term,
    trs: "Trs",
    strategy: str = "leftmost-innermost",
    fuel: int = DEFAULT_FUEL,
    want_trace: bool = False,
) -> EvalOutcome:
    """Iterate rewrite_step to a normal form or fuel exhaustion.

    The step count is exact; with want_trace the outcome carries one
    TraceStep per step, replayable to the final term.
    """
    current = t
    steps = 0
    trace: list[TraceStep] = []
    while steps < fuel:
        hit = rewrite_step(current, trs, strategy)
        if hit is None:
            kind = "value" if is_constructor_ground(current) else "normal-form"
            return EvalOutcome(kind, current, steps, tuple(trace) if want_trace else None)
        nxt, p, rule = hit
        if want_trace:
            trace.append(TraceStep(p, rule, current, nxt))
        current = nxt
        steps += 1
    if rewrite_step(current, trs, strategy) is None:
        kind = "value" if is_constructor_ground(current) else "normal-form"
        return EvalOutcome(kind, current, steps, tuple(trace) if want_trace else None)
    return EvalOutcome(
        "fuel-exhausted", current, steps, tuple(trace) if want_trace else None
    )


def joinable(
    t: Term,
    s: Term,
    trs: "Trs",
    fuel: int = DEFAULT_FUEL,
    strategy: str = "leftmost-innermost",
) -> Optional[bool]:
    """Whether t and s normalize to the same term.

    Tri-state: None when either side runs out of fuel.  Complete only
    on confluent, terminating systems; callers gate on those checks.
    """
    a = normalize(t, trs, strategy, fuel)
    b = normalize(s, trs, strategy, fuel)
    if a.exhausted or b.exhausted:
        return None
    return a.term == b.term


def common_reduct(
    t: Term,
    s: Term,
    trs: "Trs",
    fuel: int = DEFAULT_FUEL,
    strategy: str = "leftmost-innermost",
) -> Optional[Term]:
    """The shared normal form when joinable, else None."""
    a = normalize(t, trs, strategy, fuel)
    b = normalize(s, trs, strategy, fuel)
    if a.exhausted or b.exhausted or a.term != b.term:
        return None
    return a.term


def evaluate(
    t: Term,
    trs: "Trs",
    fuel: int = DEFAULT_FUEL,
    strategy: str = "leftmost-innermost",
    want_trace: bool = False,
) -> EvalOutcome:
    """Normalize a ground term; Value iff the result is constructor-only."""
    if not is_ground(t):
        raise WellFormednessError(f"eval requires a ground term, got {format_term(t)}")
    return normalize(t, trs, strategy, fuel, want_trace)


def _reducts(s: Term, index: dict[str, tuple["Rule", ...]]) -> list[Term]:
    """One-step reducts of s in position-preorder, rule order within a
    position.  Siblings of the rewritten path are shared, not copied."""
    if isinstance(s, Var):
        return []
    res: list[Term] = []
    for rule in index.get(s.symbol.name, ()):
        sigma = match(rule.lhs, s)
        if sigma is not None:
            res.append(sigma.apply(rule.rhs))
    for i, a in enumerate(s.args):
        for red in _reducts(a, index):
            args = list(s.args)
            args[i] = red
            res.append(App(s.symbol, tuple(args)))
    return res


def successors(t: Term, trs: "Trs") -> list[Term]:
    """All one-step reducts of t, deduplicated, in deterministic order
    (position preorder, then rule order)."""
    return list(dict.fromkeys(_reducts(t, _root_index(trs.rules))))


def _has_root_redex(t: Term, trs: "Trs") -> bool:
    if isinstance(t, Var):
        return False
    rules = _root_index(trs.rules).get(t.symbol.name, ())
    return _match_at(t, rules) is not None


def bounded_semantics(
    t: Term,
    trs: "Trs",
    max_terms: int = DEFAULT_MAX_TERMS,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> SemanticsResult:
    """Breadth-first closure of the rewrite relation, with the
    derived term sets.

    sred: every reachable term discovered within the caps.
    seval: sred restricted to constructor-ground terms.
    snf: expanded terms with no reduct.
    shnf: terms whose (bounded) closure contains no root redex.
    sempty: always empty.

    truncated is set iff a cap was hit; membership in snf/shnf is then
    an approximation and callers should skip comparisons.
    """
    if not is_ground(t):
        raise WellFormednessError(
            f"bounded_semantics requires a ground term, got {format_term(t)}"
        )
    discovered: dict[Term, None] = {t: None}
    edges: list[tuple[Term, Term]] = []
    expanded: set[Term] = set()
    queue: deque[Term] = deque([t])
    truncated = False
    step_budget = max_steps
    while queue:
        u = queue.popleft()
        succs = successors(u, trs)
        if step_budget - len(succs) < 0:
            truncated = True
            break
        step_budget -= len(succs)
        expanded.add(u)
        for v in succs:
            edges.append((u, v))
            if v in discovered:
                continue
            if len(discovered) >= max_terms:
                truncated = True
                continue
            discovered[v] = None
            queue.append(v)
    if queue:
        truncated = True

    sred = frozenset(discovered)
    seval = frozenset(u for u in sred if is_constructor_ground(u))
    succ_map: dict[Term, list[Term]] = {u: [] for u in sred}
    pred_map: dict[Term, list[Term]] = {u: [] for u in sred}
    for u, v in edges:
        succ_map[u].append(v)
        if v in pred_map:
            pred_map[v].append(u)
    snf = frozenset(u for u in expanded if not succ_map[u])

    # backward closure of root-redex terms: anything that can reach one
    # is not a head normal form
    bad: set[Term] = set()
    stack = [u for u in sred if _has_root_redex(u, trs)]
    bad.update(stack)
    while stack:
        v = stack.pop()
        for u in pred_map[v]:
            if u not in bad:
                bad.add(u)
                stack.append(u)
    shnf = frozenset(u for u in sred if u not in bad)

    return SemanticsResult(
        sred=sred,
        seval=seval,
        snf=snf,
        shnf=shnf,
        sempty=frozenset(),
        truncated=truncated,
    )
