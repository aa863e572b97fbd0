"""Propositional formula AST.

Formulas are immutable and hashable; the hash is computed once per node so
formulas can be used freely as dictionary and cache keys even when deep.
Conjunction and disjunction are n-ary (at least two operands) and keep the
exact nesting they were built with.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping

from .errors import RenamingCollision

ATOM_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")


class Formula:
    __slots__ = ()

    def __and__(self, other: Formula) -> Formula:
        return And((self, other))

    def __or__(self, other: Formula) -> Formula:
        return Or((self, other))

    def __invert__(self) -> Formula:
        return Not(self)

    def __rshift__(self, other: Formula) -> Formula:
        return Implies(self, other)

    def iff(self, other: Formula) -> Formula:
        return Iff(self, other)

    def __str__(self) -> str:
        return to_text(self)

    @cached_property
    def vars(self) -> frozenset[str]:
        return frozenset(_collect_vars(self))


@dataclass(frozen=True, repr=False)
class Const(Formula):
    value: bool

    def __hash__(self) -> int:
        return hash(self.value)

    def __repr__(self) -> str:
        return "TRUE" if self.value else "FALSE"


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True, repr=False)
class Var(Formula):
    name: str

    def __post_init__(self):
        if not ATOM_RE.match(self.name):
            raise ValueError(f"invalid atom name {self.name!r}")

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash(("var", self.name))

    def __repr__(self) -> str:
        return f"Var({self.name!r})"


@dataclass(frozen=True, repr=False)
class Not(Formula):
    arg: Formula

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash(("not", self.arg))

    def __repr__(self) -> str:
        return f"Not({self.arg!r})"


@dataclass(frozen=True, repr=False)
class And(Formula):
    args: tuple[Formula, ...]

    def __post_init__(self):
        if len(self.args) < 2:
            raise ValueError("And needs at least two operands; use conj()")

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash(("and", self.args))

    def __repr__(self) -> str:
        return f"And({self.args!r})"


@dataclass(frozen=True, repr=False)
class Or(Formula):
    args: tuple[Formula, ...]

    def __post_init__(self):
        if len(self.args) < 2:
            raise ValueError("Or needs at least two operands; use disj()")

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash(("or", self.args))

    def __repr__(self) -> str:
        return f"Or({self.args!r})"


@dataclass(frozen=True, repr=False)
class Implies(Formula):
    left: Formula
    right: Formula

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash(("imp", self.left, self.right))

    def __repr__(self) -> str:
        return f"Implies({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Iff(Formula):
    left: Formula
    right: Formula

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash(("iff", self.left, self.right))

    def __repr__(self) -> str:
        return f"Iff({self.left!r}, {self.right!r})"


def atoms(*names: str) -> tuple[Var, ...]:
    return tuple(Var(n) for n in names)


def conj(*fs: Formula) -> Formula:
    """Conjunction of ``fs`` with literal ``true`` operands dropped."""
    kept = tuple(f for f in fs if f != TRUE)
    if not kept:
        return TRUE
    if len(kept) == 1:
        return kept[0]
    return And(kept)


def disj(*fs: Formula) -> Formula:
    kept = tuple(f for f in fs if f != FALSE)
    if not kept:
        return FALSE
    if len(kept) == 1:
        return kept[0]
    return Or(kept)


def conjuncts(f: Formula) -> Iterator[Formula]:
    """Top-level conjuncts of ``f`` (nested conjunctions flattened, ``true`` dropped)."""
    if isinstance(f, And):
        for g in f.args:
            yield from conjuncts(g)
    elif f != TRUE:
        yield f


def _collect_vars(f: Formula) -> set[str]:
    out: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Var):
            out.add(g.name)
        elif isinstance(g, Not):
            stack.append(g.arg)
        elif isinstance(g, (And, Or)):
            stack.extend(g.args)
        elif isinstance(g, (Implies, Iff)):
            stack.append(g.left)
            stack.append(g.right)
    return out


def vars_of(fs: Iterable[Formula]) -> frozenset[str]:
    out: set[str] = set()
    for f in fs:
        out |= f.vars
    return frozenset(out)


def evaluate(f: Formula, assignment: Mapping[str, bool]) -> bool:
    """Truth value of ``f``; every atom of ``f`` must be assigned."""
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Var):
        return assignment[f.name]
    if isinstance(f, Not):
        return not evaluate(f.arg, assignment)
    if isinstance(f, And):
        return all(evaluate(g, assignment) for g in f.args)
    if isinstance(f, Or):
        return any(evaluate(g, assignment) for g in f.args)
    if isinstance(f, Implies):
        return (not evaluate(f.left, assignment)) or evaluate(f.right, assignment)
    if isinstance(f, Iff):
        return evaluate(f.left, assignment) == evaluate(f.right, assignment)
    raise TypeError(f"not a formula: {f!r}")


def simplify(f: Formula) -> Formula:
    """Constant folding only; no other normalization is performed."""
    if isinstance(f, (Const, Var)):
        return f
    if isinstance(f, Not):
        a = simplify(f.arg)
        if isinstance(a, Const):
            return FALSE if a.value else TRUE
        return f if a is f.arg else Not(a)
    if isinstance(f, And):
        args = [simplify(g) for g in f.args]
        if FALSE in args:
            return FALSE
        return conj(*args)
    if isinstance(f, Or):
        args = [simplify(g) for g in f.args]
        if TRUE in args:
            return TRUE
        return disj(*args)
    if isinstance(f, Implies):
        l, r = simplify(f.left), simplify(f.right)
        if l == FALSE or r == TRUE:
            return TRUE
        if l == TRUE:
            return r
        if r == FALSE:
            return simplify(Not(l))
        return Implies(l, r)
    if isinstance(f, Iff):
        l, r = simplify(f.left), simplify(f.right)
        if isinstance(l, Const):
            l, r = r, l
        if isinstance(r, Const):
            return l if r.value else simplify(Not(l))
        return Iff(l, r)
    raise TypeError(f"not a formula: {f!r}")


def substitute(f: Formula, mapping: Mapping[str, Formula]) -> Formula:
    """Replace atoms by formulas, simultaneously."""
    if isinstance(f, Const):
        return f
    if isinstance(f, Var):
        return mapping.get(f.name, f)
    if isinstance(f, Not):
        return Not(substitute(f.arg, mapping))
    if isinstance(f, And):
        return And(tuple(substitute(g, mapping) for g in f.args))
    if isinstance(f, Or):
        return Or(tuple(substitute(g, mapping) for g in f.args))
    if isinstance(f, Implies):
        return Implies(substitute(f.left, mapping), substitute(f.right, mapping))
    if isinstance(f, Iff):
        return Iff(substitute(f.left, mapping), substitute(f.right, mapping))
    raise TypeError(f"not a formula: {f!r}")


def rename(f: Formula, mapping: Mapping[str, str]) -> Formula:
    if not mapping.keys() & f.vars:
        return f
    return substitute(f, {old: Var(new) for old, new in mapping.items()})


def substitute_alphabet(f: Formula, alphabet: Iterable[str], tag: str) -> Formula:
    """Rename every atom ``x`` of ``alphabet`` occurring in ``f`` to ``x + tag``.

    Raises RenamingCollision when a new name already occurs in ``f`` outside
    the renamed alphabet (the renaming would then not be invertible).
    """
    alphabet = frozenset(alphabet)
    mapping = {x: x + tag for x in alphabet}
    clash = sorted(n for n in mapping.values() if n in f.vars and n not in alphabet)
    if clash:
        raise RenamingCollision(f"renamed atoms already occur: {', '.join(clash)}")
    return rename(f, mapping)


def restrict(f: Formula, assignment: Mapping[str, bool]) -> Formula:
    """``f`` with the assigned atoms replaced by constants, then constant-folded."""
    return simplify(substitute(f, {v: Const(b) for v, b in assignment.items()}))


def forget(f: Formula, forgotten: Iterable[str]) -> Formula:
    """Existentially eliminate ``forgotten`` atoms by Shannon expansion."""
    g = simplify(f)
    for v in sorted(set(forgotten)):
        if v not in g.vars:
            continue
        g = simplify(Or((restrict(g, {v: True}), restrict(g, {v: False}))))
    return g


def _prec(f: Formula) -> int:
    if isinstance(f, Iff):
        return 1
    if isinstance(f, Implies):
        return 2
    if isinstance(f, Or):
        return 3
    if isinstance(f, And):
        return 4
    if isinstance(f, Not):
        return 5
    return 6


def to_text(f: Formula) -> str:
    """Render in the concrete syntax with the fewest parentheses that still
    parse back to the same tree."""

    def wrap(g: Formula, paren: bool) -> str:
        s = to_text(g)
        return f"({s})" if paren else s

    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Not):
        return "!" + wrap(f.arg, _prec(f.arg) < 5)
    if isinstance(f, And):
        return " & ".join(wrap(g, _prec(g) <= 4) for g in f.args)
    if isinstance(f, Or):
        return " | ".join(wrap(g, _prec(g) <= 3) for g in f.args)
    if isinstance(f, Implies):
        return f"{wrap(f.left, _prec(f.left) <= 2)} -> {wrap(f.right, _prec(f.right) < 2)}"
    if isinstance(f, Iff):
        return f"{wrap(f.left, _prec(f.left) < 1)} <-> {wrap(f.right, _prec(f.right) <= 1)}"
    raise TypeError(f"not a formula: {f!r}")
