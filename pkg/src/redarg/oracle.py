"""Ground truth by brute force.

Independent of the analyzer: enumerate bounded contexts and terms,
compare bounded evaluation semantics directly against the definition
of argument redundancy, and differentially test erasures on random
ground terms.  The oracle can only refute or bound, never prove.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from .errors import EmptySort
from .erasure import SyntacticErasure, erase_term, erase_trs
from .rewrite import (
    DEFAULT_FUEL,
    DEFAULT_MAX_STEPS,
    DEFAULT_MAX_TERMS,
    bounded_semantics,
    evaluate,
)
from .terms import App, FuncSymbol, Sort, Substitution, Term, Var, replace
from .trs import Trs

HOLE_NAME = "[]"


def hole(sort: Sort) -> Var:
    return Var(HOLE_NAME, sort)


def plug(context: Term, t: Term) -> Term:
    """Fill the single hole of a context."""
    return Substitution({HOLE_NAME: t}).apply(context)


def term_depth(t: Term) -> int:
    """Tree depth in node levels; the context hole counts as zero."""
    if isinstance(t, Var):
        return 0 if t.name == HOLE_NAME else 1
    return 1 + max((term_depth(a) for a in t.args), default=0)


def enumerate_ground_terms(trs: Trs, sort: Sort, depth: int) -> list[Term]:
    """All ground terms of the sort (over the full signature, defined
    symbols included) with depth <= the bound, ordered by depth first
    and declaration order within a depth level."""
    by_sort: dict[Sort, list[Term]] = {s: [] for s in trs.sorts}
    depth_of: dict[Term, int] = {}
    for d in range(1, depth + 1):
        level: list[Term] = []
        for f in trs.symbols:
            if f.arity == 0:
                if d == 1:
                    t = App(f, ())
                    level.append(t)
                    depth_of[t] = 1
                continue
            pools = [by_sort.get(s, []) for s in f.arg_sorts]
            if any(not pool for pool in pools):
                continue
            for args in _ordered_product(pools):
                if max(depth_of[a] for a in args) != d - 1:
                    continue
                t = App(f, args)
                level.append(t)
                depth_of[t] = d
        for t in level:
            by_sort[t.symbol.result_sort].append(t)
    result = [t for t in by_sort.get(sort, []) if t.symbol.result_sort == sort]
    if not result:
        raise EmptySort(sort, depth)
    return result


def _ordered_product(pools: list[list[Term]]) -> Iterator[tuple[Term, ...]]:
    if not pools:
        yield ()
        return
    for head in pools[0]:
        for rest in _ordered_product(pools[1:]):
            yield (head,) + rest


def enumerate_contexts(trs: Trs, hole_sort: Sort, depth: int) -> list[Term]:
    """All one-hole contexts of depth <= the bound whose hole has the
    given sort, the empty context first; the hole contributes zero to
    depth.  Same canonical (depth, declaration) order as terms."""
    max_ground_depth = max(depth - 1, 0)
    ground_by_sort: dict[Sort, list[Term]] = {}
    for s in trs.sorts:
        try:
            ground_by_sort[s] = enumerate_ground_terms(trs, s, max_ground_depth) \
                if max_ground_depth else []
        except EmptySort:
            ground_by_sort[s] = []
    ctx_by_sort: dict[Sort, list[Term]] = {s: [] for s in trs.sorts}
    ctx_by_sort.setdefault(hole_sort, [])
    ctx_by_sort[hole_sort] = [hole(hole_sort)]
    all_contexts: list[Term] = [hole(hole_sort)]
    for d in range(1, depth + 1):
        level: list[Term] = []
        for f in trs.symbols:
            if f.arity == 0:
                continue
            for slot in range(1, f.arity + 1):
                ctx_pool = [
                    c
                    for c in ctx_by_sort.get(f.arg_sorts[slot - 1], [])
                    if term_depth(c) <= d - 1
                ]
                if not ctx_pool:
                    continue
                other_pools = []
                feasible = True
                for j, s in enumerate(f.arg_sorts, start=1):
                    if j == slot:
                        continue
                    pool = [t for t in ground_by_sort.get(s, []) if term_depth(t) <= d - 1]
                    if not pool:
                        feasible = False
                        break
                    other_pools.append(pool)
                if not feasible:
                    continue
                pools: list[list[Term]] = []
                k = 0
                for j in range(1, f.arity + 1):
                    if j == slot:
                        pools.append(ctx_pool)
                    else:
                        pools.append(other_pools[k])
                        k += 1
                for args in _ordered_product(pools):
                    if 1 + max(term_depth(a) for a in args) != d:
                        continue
                    level.append(App(f, args))
        for c in level:
            ctx_by_sort.setdefault(c.symbol.result_sort, []).append(c)
        all_contexts.extend(level)
    return all_contexts


@dataclass(frozen=True)
class EnumBounds:
    ctx_depth: int = 3
    term_depth: int = 3
    max_cases: int = 50_000
    max_terms: int = DEFAULT_MAX_TERMS
    max_steps: int = DEFAULT_MAX_STEPS


@dataclass(frozen=True)
class NoCounterexampleUpTo:
    ctx_depth: int
    term_depth: int
    cases_checked: int
    skipped_truncated: int


@dataclass(frozen=True)
class Counterexample:
    context: Term
    term: Term
    replacement: Term
    before: frozenset[Term]
    after: frozenset[Term]


Verdict = Union[NoCounterexampleUpTo, Counterexample]


def brute_force_redundant(
    trs: Trs, f: FuncSymbol | str, i: int, bounds: Optional[EnumBounds] = None
) -> Verdict:
    """Search for a context C, an f-rooted term t, and a replacement s
    whose bounded evaluation semantics differ between C[t] and
    C[t[s]_i].  First counterexample in enumeration order wins;
    truncated comparisons are skipped and counted."""
    bounds = bounds or EnumBounds()
    sym = trs.symbol_map[f if isinstance(f, str) else f.name]
    contexts = enumerate_contexts(trs, sym.result_sort, bounds.ctx_depth)
    arg_pools = [
        enumerate_ground_terms(trs, s, bounds.term_depth - 1) for s in sym.arg_sorts
    ]
    subjects = [App(sym, args) for args in _ordered_product(arg_pools)]
    replacements = enumerate_ground_terms(
        trs, sym.arg_sorts[i - 1], bounds.term_depth
    )

    seval_cache: dict[Term, tuple[frozenset[Term], bool]] = {}

    def seval_of(t: Term) -> tuple[frozenset[Term], bool]:
        hit = seval_cache.get(t)
        if hit is None:
            sem = bounded_semantics(t, trs, bounds.max_terms, bounds.max_steps)
            hit = (sem.seval, sem.truncated)
            seval_cache[t] = hit
        return hit

    cases = 0
    skipped = 0
    for context in contexts:
        for t in subjects:
            for s in replacements:
                if s == t.args[i - 1]:
                    continue
                if cases >= bounds.max_cases:
                    return NoCounterexampleUpTo(
                        bounds.ctx_depth, bounds.term_depth, cases, skipped
                    )
                cases += 1
                before_term = plug(context, t)
                after_term = plug(context, replace(t, (i,), s))
                before, tr1 = seval_of(before_term)
                after, tr2 = seval_of(after_term)
                if tr1 or tr2:
                    skipped += 1
                    continue
                if before != after:
                    return Counterexample(context, t, s, before, after)
    return NoCounterexampleUpTo(bounds.ctx_depth, bounds.term_depth, cases, skipped)


# ---------------------------------------------------------------------------
# Differential verification of an erasure

def _min_depths(trs: Trs) -> tuple[dict[Sort, int], dict[str, int]]:
    """Minimal ground-term depth per sort and per symbol."""
    sort_depth: dict[Sort, int] = {}
    changed = True
    while changed:
        changed = False
        for f in trs.symbols:
            if all(s in sort_depth for s in f.arg_sorts):
                d = 1 + max((sort_depth[s] for s in f.arg_sorts), default=0)
                if d < sort_depth.get(f.result_sort, 1 << 30):
                    sort_depth[f.result_sort] = d
                    changed = True
    sym_depth = {
        f.name: 1 + max((sort_depth[s] for s in f.arg_sorts), default=0)
        for f in trs.symbols
        if all(s in sort_depth for s in f.arg_sorts)
    }
    return sort_depth, sym_depth


def random_ground_term(
    trs: Trs, sort: Sort, depth: int, rng: random.Random
) -> Term:
    """A random ground term of the sort within the depth budget, over
    the full signature."""
    sort_depth, sym_depth = _min_depths(trs)
    if sort not in sort_depth or sort_depth[sort] > depth:
        raise EmptySort(sort, depth)

    def build(s: Sort, budget: int) -> Term:
        candidates = [
            f
            for f in trs.symbols
            if f.result_sort == s and sym_depth.get(f.name, 1 << 30) <= budget
        ]
        f = rng.choice(candidates)
        return App(f, tuple(build(a, budget - 1) for a in f.arg_sorts))

    return build(sort, depth)


@dataclass(frozen=True)
class Disagreement:
    term: Term
    original: Term
    erased: Term


@dataclass(frozen=True)
class VerifyReport:
    trials: int
    depth: int
    seed: int
    agree: int
    disagree: int
    indeterminate: int
    nonvalue: int
    witnesses: tuple[Disagreement, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return self.disagree == 0


def differential_verify(
    trs: Trs,
    rho: SyntacticErasure,
    trials: int = 200,
    depth: int = 6,
    seed: int = 42,
    fuel: int = DEFAULT_FUEL,
    suffix: str = "",
) -> VerifyReport:
    """Evaluate random ground terms under the original system and
    their erasures under the erased system, and compare values.

    Classification per trial: agree (both values, erased original
    value equals erased-system value), disagree (both values,
    different), indeterminate (either ran out of fuel), nonvalue
    (either normalized to a non-value normal form).  Reproducible for
    a fixed seed.
    """
    erased = erase_trs(trs, rho, suffix)
    rng = random.Random(seed)
    sort_depth, _ = _min_depths(trs)
    sorts = [s for s in trs.sorts if sort_depth.get(s, 1 << 30) <= depth]
    if not sorts:
        raise EmptySort(trs.sorts[0] if trs.sorts else "?", depth)
    agree = disagree = indeterminate = nonvalue = 0
    witnesses: list[Disagreement] = []
    for k in range(trials):
        sort = sorts[k % len(sorts)]
        t = random_ground_term(trs, sort, depth, rng)
        o1 = evaluate(t, trs, fuel=fuel)
        o2 = evaluate(erase_term(t, rho, suffix), erased.trs, fuel=fuel)
        if o1.exhausted or o2.exhausted:
            indeterminate += 1
            continue
        if not (o1.is_value and o2.is_value):
            nonvalue += 1
            continue
        if erase_term(o1.term, rho, suffix) == o2.term:
            agree += 1
        else:
            disagree += 1
            if len(witnesses) < 5:
                witnesses.append(Disagreement(t, o1.term, o2.term))
    return VerifyReport(
        trials=trials,
        depth=depth,
        seed=seed,
        agree=agree,
        disagree=disagree,
        indeterminate=indeterminate,
        nonvalue=nonvalue,
        witnesses=tuple(witnesses),
    )
