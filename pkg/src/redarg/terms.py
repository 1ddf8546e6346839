"""Immutable many-sorted first-order terms.

Terms are either variables or applications of a function symbol.  The
module also provides positions (1-based integer paths into the term
tree), substitutions, matching, and syntactic unification with occurs
check.  Everything here is a pure value; all other modules build on
this algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional, Union

from .errors import ArityMismatch, PositionOutOfRange, SortMismatch

Sort = str

Position = tuple[int, ...]

ROOT: Position = ()


@dataclass(frozen=True)
class FuncSymbol:
    """A declared function symbol: name, argument sorts, result sort, and
    whether it is a constructor or a defined symbol."""

    name: str
    arg_sorts: tuple[Sort, ...]
    result_sort: Sort
    kind: str  # "constructor" | "defined"

    @property
    def arity(self) -> int:
        return len(self.arg_sorts)

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Var:
    name: str
    sort: Sort

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True, eq=False)
class App:
    symbol: FuncSymbol
    args: tuple["Term", ...] = ()
    # hash is cached: closures and memo tables hash the same nodes heavily
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.args) != self.symbol.arity:
            raise ArityMismatch(
                f"{self.symbol.name} expects {self.symbol.arity} arguments, "
                f"got {len(self.args)}"
            )
        for got, want in zip(self.args, self.symbol.arg_sorts):
            if sort_of(got) != want:
                raise SortMismatch(
                    f"argument of {self.symbol.name} has sort {sort_of(got)}, "
                    f"expected {want}"
                )
        object.__setattr__(self, "_hash", hash((self.symbol.name, self.args)))

    @property
    def sort(self) -> Sort:
        return self.symbol.result_sort

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, App):
            return NotImplemented
        return (
            self._hash == other._hash
            and self.symbol == other.symbol
            and self.args == other.args
        )

    def __str__(self) -> str:
        return format_term(self)

    def __repr__(self) -> str:
        return format_term(self)


Term = Union[Var, App]


def sort_of(t: Term) -> Sort:
    return t.sort


def format_term(t: Term) -> str:
    """Render a term: nullary applications bare, otherwise f(a, b)."""
    if isinstance(t, Var):
        return t.name
    if not t.args:
        return t.symbol.name
    return f"{t.symbol.name}({', '.join(format_term(a) for a in t.args)})"


def format_position(p: Position) -> str:
    """Positions serialize dot-joined, the root as "e"."""
    return "e" if not p else ".".join(str(i) for i in p)


def is_prefix(p: Position, q: Position) -> bool:
    """The prefix order on positions: p <= q."""
    return len(p) <= len(q) and q[: len(p)] == p


def parallel(p: Position, q: Position) -> bool:
    """Disjointness: neither position is a prefix of the other."""
    return not is_prefix(p, q) and not is_prefix(q, p)


def iter_positions(t: Term, prefix: Position = ()) -> Iterator[Position]:
    """All tree addresses of t in preorder, root first."""
    yield prefix
    if isinstance(t, App):
        for i, a in enumerate(t.args, start=1):
            yield from iter_positions(a, prefix + (i,))


def positions(t: Term) -> set[Position]:
    return set(iter_positions(t))


def subterm(t: Term, p: Position) -> Term:
    for i in p:
        if not isinstance(t, App) or not 1 <= i <= len(t.args):
            raise PositionOutOfRange(f"position {format_position(p)} not in term")
        t = t.args[i - 1]
    return t


def replace(t: Term, p: Position, s: Term) -> Term:
    """The term t with the subtree at p replaced by s (t[s]_p)."""
    if not p:
        if sort_of(s) != sort_of(t):
            raise SortMismatch(
                f"cannot replace sort {sort_of(t)} subterm with sort {sort_of(s)}"
            )
        return s
    if not isinstance(t, App) or not 1 <= p[0] <= len(t.args):
        raise PositionOutOfRange(f"position {format_position(p)} not in term")
    i = p[0]
    new_args = list(t.args)
    new_args[i - 1] = replace(t.args[i - 1], p[1:], s)
    return App(t.symbol, tuple(new_args))


def vars_of(t: Term) -> set[Var]:
    """The set of variables occurring in t."""
    out: set[Var] = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Var):
            out.add(u)
        else:
            stack.extend(u.args)
    return out


def var_names(t: Term) -> set[str]:
    return {v.name for v in vars_of(t)}


def is_linear(t: Term) -> bool:
    """True iff no variable occurs twice in t."""
    seen: set[str] = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Var):
            if u.name in seen:
                return False
            seen.add(u.name)
        else:
            stack.extend(u.args)
    return True


def is_ground(t: Term) -> bool:
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Var):
            return False
        stack.extend(u.args)
    return True


def pos_fi(t: Term, f: FuncSymbol | str, i: int) -> set[Position]:
    """{q.i | q in Pos(t), root(t|_q) = f}: the i-th-argument positions of
    every f-rooted subterm.  f may be given by name."""
    fname = f if isinstance(f, str) else f.name
    if isinstance(f, FuncSymbol) and not 1 <= i <= f.arity:
        raise ArityMismatch(f"index {i} out of range for {f.name}/{f.arity}")
    out: set[Position] = set()
    for q in iter_positions(t):
        u = subterm(t, q)
        if isinstance(u, App) and u.symbol.name == fname:
            if not 1 <= i <= u.symbol.arity:
                raise ArityMismatch(
                    f"index {i} out of range for {u.symbol.name}/{u.symbol.arity}"
                )
            out.add(q + (i,))
    return out


class Substitution:
    """A finite, sort-preserving map from variable names to terms.

    Application is homomorphic; sorts are checked when a variable is
    actually replaced.
    """

    __slots__ = ("_map",)

    def __init__(self, bindings: Mapping[str, Term] | None = None) -> None:
        self._map: dict[str, Term] = dict(bindings or {})

    @classmethod
    def of(cls, *pairs: tuple[Var, Term]) -> "Substitution":
        return cls({v.name: t for v, t in pairs})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Substitution):
            return NotImplemented
        return self._map == other._map

    def __hash__(self) -> int:
        return hash(frozenset(self._map.items()))

    def __len__(self) -> int:
        return len(self._map)

    def __contains__(self, name: str) -> bool:
        return name in self._map

    def get(self, name: str) -> Optional[Term]:
        return self._map.get(name)

    def items(self) -> list[tuple[str, Term]]:
        return sorted(self._map.items())

    def domain(self) -> set[str]:
        return set(self._map)

    def extended(self, extra: Mapping[str, Term]) -> "Substitution":
        """A copy with `extra` bindings added, overriding on collision."""
        merged = dict(self._map)
        merged.update(extra)
        return Substitution(merged)

    def restricted(self, names: set[str]) -> "Substitution":
        return Substitution({n: t for n, t in self._map.items() if n in names})

    def apply(self, t: Term) -> Term:
        if isinstance(t, Var):
            rep = self._map.get(t.name)
            if rep is None:
                return t
            if sort_of(rep) != t.sort:
                raise SortMismatch(
                    f"binding for {t.name} has sort {sort_of(rep)}, "
                    f"expected {t.sort}"
                )
            return rep
        if not self._map:
            return t
        new_args = tuple(self.apply(a) for a in t.args)
        if new_args == t.args:
            return t
        return App(t.symbol, new_args)

    def __repr__(self) -> str:
        inner = ", ".join(f"{n} -> {format_term(t)}" for n, t in self.items())
        return "{" + inner + "}"


def _var_key(name: str) -> tuple[str, int]:
    """Order key for the canonical mgu orientation.

    A primed copy of a name orders before the plain name, so renamed
    rule variables become representatives and reported unifiers read
    as {plain -> primed}.  Otherwise plain lexicographic.
    """
    base = name.rstrip("'")
    return (base, -(len(name) - len(base)))


def match(pattern: Term, t: Term) -> Optional[Substitution]:
    """The substitution s with s(pattern) = t, or None.

    Nonlinear patterns require all occurrences of a variable to bind
    syntactically equal terms.
    """
    bindings: dict[str, Term] = {}
    stack = [(pattern, t)]
    while stack:
        p, u = stack.pop()
        if isinstance(p, Var):
            if p.sort != sort_of(u):
                return None
            prev = bindings.get(p.name)
            if prev is None:
                bindings[p.name] = u
            elif prev != u:
                return None
        else:
            if not isinstance(u, App) or u.symbol != p.symbol:
                return None
            stack.extend(zip(p.args, u.args))
    return Substitution(bindings)


def _walk(t: Term, bindings: dict[str, Term]) -> Term:
    while isinstance(t, Var) and t.name in bindings:
        t = bindings[t.name]
    return t


def _occurs(name: str, t: Term, bindings: dict[str, Term]) -> bool:
    stack = [t]
    while stack:
        u = _walk(stack.pop(), bindings)
        if isinstance(u, Var):
            if u.name == name:
                return True
        else:
            stack.extend(u.args)
    return False


def _resolve(t: Term, bindings: dict[str, Term]) -> Term:
    t = _walk(t, bindings)
    if isinstance(t, Var):
        return t
    return App(t.symbol, tuple(_resolve(a, bindings) for a in t.args))


def _unify_pairs(pairs: list[tuple[Term, Term]]) -> Optional[Substitution]:
    bindings: dict[str, Term] = {}
    stack = list(pairs)
    while stack:
        a, b = stack.pop()
        a = _walk(a, bindings)
        b = _walk(b, bindings)
        if a == b:
            continue
        if isinstance(a, Var) and isinstance(b, Var):
            if a.sort != b.sort:
                return None
            # bind the larger variable to the smaller one
            if _var_key(a.name) > _var_key(b.name):
                bindings[a.name] = b
            else:
                bindings[b.name] = a
        elif isinstance(a, Var):
            if a.sort != sort_of(b) or _occurs(a.name, b, bindings):
                return None
            bindings[a.name] = b
        elif isinstance(b, Var):
            if b.sort != sort_of(a) or _occurs(b.name, a, bindings):
                return None
            bindings[b.name] = a
        else:
            if a.symbol != b.symbol:
                return None
            stack.extend(zip(a.args, b.args))
    return Substitution({n: _resolve(t, bindings) for n, t in bindings.items()})


def unify(t: Term, s: Term) -> Optional[Substitution]:
    """An idempotent most general unifier of t and s, or None.

    Uses the occurs check.  Variable-variable ties are oriented
    canonically (see _var_key) so analysis output is reproducible.
    """
    return _unify_pairs([(t, s)])


def unify_up_to_arg(t: Term, s: Term, i: int) -> Optional[Substitution]:
    """Unify two applications of the same symbol with their i-th
    arguments deleted.

    The callers rename the inputs apart; an empty remaining tuple
    unifies with the identity substitution.
    """
    if not (isinstance(t, App) and isinstance(s, App)) or t.symbol != s.symbol:
        raise ArityMismatch("unify_up_to_arg needs two applications of one symbol")
    if not 1 <= i <= t.symbol.arity:
        raise ArityMismatch(f"index {i} out of range for {t.symbol.name}")
    pairs = [
        (a, b)
        for k, (a, b) in enumerate(zip(t.args, s.args), start=1)
        if k != i
    ]
    return _unify_pairs(pairs)
