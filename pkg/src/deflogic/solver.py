"""Decision backend: Tseitin CNF encoding plus a DPLL solver.

Queries are split into groups of conjuncts that share no atoms; each group is
solved separately and cached, so repeated queries over renamed copies of the
same alphabet (as produced by the translations) stay cheap.  Auxiliary atoms
of the encoding never leave this module.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

from .formula import (
    And,
    Const,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Var,
    conjuncts,
    evaluate,
)


class _Encoder:
    def __init__(self):
        self.ids: dict[str, int] = {}
        self.names: list[str] = [""]
        self.clauses: list[list[int]] = []
        self.memo: dict[Formula, int | bool] = {}
        self.unsat = False

    def fresh(self, name: str = "") -> int:
        self.names.append(name)
        return len(self.names) - 1

    def atom(self, name: str) -> int:
        v = self.ids.get(name)
        if v is None:
            v = self.ids[name] = self.fresh(name)
        return v

    def lit(self, f: Formula) -> int | bool:
        if isinstance(f, Const):
            return f.value
        if isinstance(f, Var):
            return self.atom(f.name)
        cached = self.memo.get(f)
        if cached is not None:
            return cached
        if isinstance(f, Not):
            a = self.lit(f.arg)
            out = (not a) if isinstance(a, bool) else -a
        elif isinstance(f, And):
            out = self._gate([self.lit(g) for g in f.args], conjunctive=True)
        elif isinstance(f, Or):
            out = self._gate([self.lit(g) for g in f.args], conjunctive=False)
        elif isinstance(f, Implies):
            l = self.lit(f.left)
            l = (not l) if isinstance(l, bool) else -l
            out = self._gate([l, self.lit(f.right)], conjunctive=False)
        elif isinstance(f, Iff):
            out = self._iff(self.lit(f.left), self.lit(f.right))
        else:
            raise TypeError(f"not a formula: {f!r}")
        self.memo[f] = out
        return out

    def _gate(self, lits: list[int | bool], conjunctive: bool) -> int | bool:
        absorbing = not conjunctive
        kept = []
        for l in lits:
            if l is absorbing:
                return absorbing
            if l is not (not absorbing):
                kept.append(l)
        if not kept:
            return not absorbing
        if len(kept) == 1:
            return kept[0]
        x = self.fresh()
        if conjunctive:
            for l in kept:
                self.clauses.append([-x, l])
            self.clauses.append([x] + [-l for l in kept])
        else:
            for l in kept:
                self.clauses.append([x, -l])
            self.clauses.append([-x] + kept)
        return x

    def _iff(self, l: int | bool, r: int | bool) -> int | bool:
        if isinstance(l, bool):
            l, r = r, l
        if isinstance(r, bool):
            if isinstance(l, bool):
                return l == r
            return l if r else -l
        x = self.fresh()
        self.clauses += [[-x, -l, r], [-x, l, -r], [x, l, r], [x, -l, -r]]
        return x

    def add(self, f: Formula) -> None:
        for c in conjuncts(f):
            if isinstance(c, Or):
                clause = []
                for g in c.args:
                    l = self.lit(g)
                    if l is True:
                        break
                    if l is not False:
                        clause.append(l)
                else:
                    if not clause:
                        self.unsat = True
                    self.clauses.append(clause)
                continue
            l = self.lit(c)
            if l is False:
                self.unsat = True
            elif l is not True:
                self.clauses.append([l])


def dpll(num_vars: int, clauses: Sequence[Sequence[int]]) -> list[int] | None:
    """Decide a CNF over variables ``1..num_vars``.

    Returns a satisfying assignment as a list indexed by variable (``1`` true,
    ``-1`` false, ``0`` don't care) or ``None`` when unsatisfiable.  Plain DPLL:
    two-watched-literal unit propagation and chronological backtracking.
    """
    value = [0] * (num_vars + 1)
    watches: dict[int, list[list[int]]] = {}
    trail: list[int] = []
    units: list[int] = []
    occurrences = [0] * (num_vars + 1)
    for c in clauses:
        c = list(dict.fromkeys(c))
        if any(-l in c for l in c):
            continue
        if not c:
            return None
        for l in c:
            occurrences[abs(l)] += 1
        if len(c) == 1:
            units.append(c[0])
            continue
        watches.setdefault(c[0], []).append(c)
        watches.setdefault(c[1], []).append(c)

    def lit_value(l: int) -> int:
        v = value[abs(l)]
        return v if l > 0 else -v

    def assign(l: int) -> bool:
        v = lit_value(l)
        if v == 1:
            return True
        if v == -1:
            return False
        value[abs(l)] = 1 if l > 0 else -1
        trail.append(l)
        return True

    def propagate(head: int) -> bool:
        while head < len(trail):
            false_lit = -trail[head]
            head += 1
            watching = watches.get(false_lit)
            if not watching:
                continue
            kept = []
            i = 0
            n = len(watching)
            while i < n:
                c = watching[i]
                i += 1
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                if lit_value(c[0]) == 1:
                    kept.append(c)
                    continue
                for k in range(2, len(c)):
                    if lit_value(c[k]) != -1:
                        c[1], c[k] = c[k], c[1]
                        watches.setdefault(c[1], []).append(c)
                        break
                else:
                    kept.append(c)
                    if lit_value(c[0]) == -1:
                        kept.extend(watching[i:])
                        watches[false_lit] = kept
                        return False
                    assign(c[0])
            watches[false_lit] = kept
        return True

    for u in units:
        if not assign(u):
            return None
    if not propagate(0):
        return None

    order = sorted(range(1, num_vars + 1), key=lambda v: -occurrences[v])
    decisions: list[tuple[int, int, bool]] = []
    while True:
        var = next((v for v in order if value[v] == 0), None)
        if var is None:
            return value
        decisions.append((len(trail), -var, False))
        start = len(trail)
        assign(-var)
        while not propagate(start):
            while decisions and decisions[-1][2]:
                decisions.pop()
            if not decisions:
                return None
            pos, lit, _ = decisions.pop()
            for l in trail[pos:]:
                value[abs(l)] = 0
            del trail[pos:]
            decisions.append((pos, -lit, True))
            start = pos
            assign(-lit)


def _groups(fs: Iterable[Formula]) -> tuple[list[list[Formula]], bool]:
    """Split the conjuncts of ``fs`` into atom-disjoint groups.

    The flag is False when a ground conjunct evaluates to false.
    """
    parent: dict[str, str] = {}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    parts: list[Formula] = []
    for f in fs:
        for c in conjuncts(f):
            vs = c.vars
            if not vs:
                if not evaluate(c, {}):
                    return [], False
                continue
            parts.append(c)
            it = iter(vs)
            first = next(it)
            parent.setdefault(first, first)
            r = find(first)
            for v in it:
                parent.setdefault(v, v)
                rv = find(v)
                if rv != r:
                    parent[rv] = r
    buckets: dict[str, list[Formula]] = {}
    for c in parts:
        buckets.setdefault(find(next(iter(c.vars))), []).append(c)
    return list(buckets.values()), True


def _encode(group: Iterable[Formula]) -> _Encoder:
    enc = _Encoder()
    for c in group:
        enc.add(c)
    return enc


@lru_cache(maxsize=1 << 18)
def _group_sat(group: frozenset[Formula]) -> bool:
    enc = _encode(group)
    if enc.unsat:
        return False
    return dpll(len(enc.names) - 1, enc.clauses) is not None


def is_consistent(fs: Iterable[Formula]) -> bool:
    """True iff some assignment satisfies every formula of ``fs``."""
    groups, ok = _groups(fs)
    if not ok:
        return False
    return all(_group_sat(frozenset(g)) for g in groups)


def find_model(fs: Iterable[Formula]) -> dict[str, bool] | None:
    """A satisfying assignment over the atoms of ``fs``, or None."""
    groups, ok = _groups(fs)
    if not ok:
        return None
    model: dict[str, bool] = {}
    for g in groups:
        enc = _encode(g)
        if enc.unsat:
            return None
        value = dpll(len(enc.names) - 1, enc.clauses)
        if value is None:
            return None
        for name, v in enc.ids.items():
            model[name] = value[v] == 1
    return model


def entails(fs: Iterable[Formula], goal: Formula) -> bool:
    """``fs |= goal``, decided conjunct by conjunct as inconsistency of ``fs + [!goal_i]``."""
    fs = list(fs)
    return all(not is_consistent([*fs, Not(c)]) for c in conjuncts(goal))


def equivalent(f: Formula, g: Formula) -> bool:
    return entails([f], g) and entails([g], f)


def project(fs: Iterable[Formula], alphabet: Iterable[str]) -> frozenset[tuple[bool, ...]]:
    """Restrictions to ``alphabet`` (sorted by name) of the models of ``fs``.

    Branches atom by atom and prunes inconsistent partial assignments, so the
    cost is proportional to the number of projected models, not ``2^|alphabet|``.
    """
    fs = list(fs)
    names = sorted(alphabet)
    out: set[tuple[bool, ...]] = set()

    def branch(prefix: list[Formula], values: tuple[bool, ...]) -> None:
        if not is_consistent(fs + prefix):
            return
        i = len(values)
        if i == len(names):
            out.add(values)
            return
        x = Var(names[i])
        branch(prefix + [x], values + (True,))
        branch(prefix + [Not(x)], values + (False,))

    branch([], ())
    return frozenset(out)


def var_equivalent(f: Formula, g: Formula, alphabet: Iterable[str]) -> bool:
    """True iff ``f`` and ``g`` have the same consequences over ``alphabet``.

    Decided by comparing the projections of their models onto the atoms of
    ``alphabet`` occurring in either formula, which is equivalent to comparing
    the forgotten formulas but never materializes them.
    """
    shared = frozenset(alphabet) & (f.vars | g.vars)
    return project([f], shared) == project([g], shared)
