"""Default theories, processes and the four operational semantics.

A semantics selects the processes that are successful and closed.  Both
conditions depend only on the *set* of applied defaults; the order matters
only for the precondition check of the process property.  Extensions are
therefore enumerated over grounded sets of defaults, which avoids the
factorial blow-up of enumerating orderings; :func:`selected_processes`
still enumerates the ordered processes themselves.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    ContractViolation,
    EnumerationBound,
    InconsistentBackground,
    MalformedProcess,
    UndeclaredAtom,
)
from .formula import TRUE, Formula, conj, to_text, vars_of
from .solver import entails, is_consistent

# Guard for ordered (factorial) enumeration.
DEFAULT_BOUND = 8
# Guard for enumeration over sets of defaults (exponential).
DEFAULT_SET_BOUND = 16

Process = tuple[int, ...]


class Semantics(enum.Enum):
    REITER = "reiter"
    JUSTIFIED = "justified"
    RATIONAL = "rational"
    CONSTRAINED = "constrained"

    @property
    def global_success(self) -> bool:
        return self in (Semantics.RATIONAL, Semantics.CONSTRAINED)

    @property
    def maximality(self) -> bool:
        return self in (Semantics.JUSTIFIED, Semantics.CONSTRAINED)

    @classmethod
    def parse(cls, name: str | Semantics) -> Semantics:
        if isinstance(name, Semantics):
            return name
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(f"unknown semantics {name!r}") from None


ALL_SEMANTICS = tuple(Semantics)


@dataclass(frozen=True)
class Default:
    prec: Formula
    just: Formula
    cons: Formula
    label: str | None = None

    def __str__(self) -> str:
        p = "" if self.prec == TRUE else to_text(self.prec)
        j = "" if self.just == TRUE else to_text(self.just)
        head = f"{self.label}: " if self.label else ""
        return f"{head}{p} : {j} / {to_text(self.cons)}".replace("  ", " ")

    @property
    def vars(self) -> frozenset[str]:
        return self.prec.vars | self.just.vars | self.cons.vars

    def relabel(self, label: str) -> Default:
        return Default(self.prec, self.just, self.cons, label)


@dataclass(frozen=True)
class DefaultTheory:
    """A pair of an ordered default list and a consistent background.

    ``vars`` is the declared alphabet; it defaults to the occurring atoms and
    must cover them.  Unlabelled defaults are labelled ``d1, d2, ...`` by
    position.  The background is checked for consistency on construction.
    """

    defaults: tuple[Default, ...]
    background: tuple[Formula, ...] = ()
    vars: frozenset[str] = None  # type: ignore[assignment]

    def __post_init__(self):
        defaults = tuple(self.defaults)
        background = tuple(self.background)
        used = {d.label for d in defaults if d.label}
        labelled = []
        for i, d in enumerate(defaults, 1):
            if not d.label:
                label, k = f"d{i}", i
                while label in used:
                    k += 1
                    label = f"d{i}_{k}"
                used.add(label)
                d = d.relabel(label)
            labelled.append(d)
        labels = [d.label for d in labelled]
        if len(set(labels)) != len(labels):
            dup = sorted({x for x in labels if labels.count(x) > 1})
            raise ValueError(f"duplicate default labels: {', '.join(dup)}")
        occurring = vars_of(background)
        for d in labelled:
            occurring |= d.vars
        if self.vars is None:
            declared = occurring
        else:
            declared = frozenset(self.vars)
            missing = occurring - declared
            if missing:
                raise UndeclaredAtom(f"undeclared atoms: {', '.join(sorted(missing))}")
        if not is_consistent(background):
            raise InconsistentBackground("background theory is inconsistent")
        object.__setattr__(self, "defaults", tuple(labelled))
        object.__setattr__(self, "background", background)
        object.__setattr__(self, "vars", declared)

    def __len__(self) -> int:
        return len(self.defaults)

    def labels(self, proc: Iterable[int]) -> list[str]:
        return [self.defaults[i].label for i in proc]

    def cons(self, proc: Iterable[int]) -> list[Formula]:
        return [self.defaults[i].cons for i in proc]

    def justs(self, proc: Iterable[int]) -> list[Formula]:
        return [self.defaults[i].just for i in proc]

    def generator(self, proc: Iterable[int]) -> tuple[Formula, ...]:
        return (*self.background, *self.cons(proc))


@dataclass(frozen=True)
class Extension:
    """An extension, carried by its finite generator ``W + cons(witness)``."""

    generator: tuple[Formula, ...]
    witness: Process

    @property
    def formula(self) -> Formula:
        return conj(*self.generator)


@dataclass(frozen=True)
class DoubleExtension:
    justs: frozenset[Formula]
    generator: tuple[Formula, ...]
    witness: Process

    @property
    def formula(self) -> Formula:
        return conj(*self.generator)

    def sorted_justs(self) -> list[Formula]:
        return sorted(self.justs, key=to_text)


def process_key(proc: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sort key of the process ordering: shorter first, then lexicographic."""
    return (len(proc), tuple(proc))


# ---------------------------------------------------------------------------
# Set-level conditions


def _successful_set(theory: DefaultTheory, applied: frozenset[int] | Sequence[int], sem: Semantics) -> bool:
    base = list(theory.generator(applied))
    justs = theory.justs(applied)
    if sem.global_success:
        return is_consistent(base + justs)
    return all(is_consistent(base + [j]) for j in justs)


def _extends(theory: DefaultTheory, applied: frozenset[int], d: int, sem: Semantics) -> bool:
    """Whether ``applied + [d]`` is a successful process given ``applied`` is one."""
    dflt = theory.defaults[d]
    base = theory.generator(applied)
    if not entails(base, dflt.prec):
        return False
    if not is_consistent([*base, dflt.cons]):
        return False
    return _successful_set(theory, applied | {d}, sem)


def _applicable_set(theory: DefaultTheory, applied: frozenset[int], d: int, sem: Semantics) -> bool:
    if sem.maximality:
        return _extends(theory, applied, d, sem)
    dflt = theory.defaults[d]
    base = list(theory.generator(applied))
    if not entails(base, dflt.prec):
        return False
    if sem.global_success:
        base += theory.justs(applied)
    return is_consistent(base + [dflt.just])


def _closed_set(theory: DefaultTheory, applied: frozenset[int], sem: Semantics) -> bool:
    return not any(
        _applicable_set(theory, applied, d, sem)
        for d in range(len(theory))
        if d not in applied
    )


# ---------------------------------------------------------------------------
# Process-level operations


def _check_indices(theory: DefaultTheory, proc: Sequence[int]) -> None:
    for i in proc:
        if not isinstance(i, int) or not 0 <= i < len(theory):
            raise MalformedProcess(f"default index {i!r} out of range")


def is_process(theory: DefaultTheory, proc: Sequence[int]) -> bool:
    _check_indices(theory, proc)
    if len(set(proc)) != len(proc):
        return False
    for k, i in enumerate(proc):
        if not entails(theory.generator(proc[:k]), theory.defaults[i].prec):
            return False
    return is_consistent(theory.generator(proc))


def _require_process(theory: DefaultTheory, proc: Sequence[int]) -> None:
    if not is_process(theory, proc):
        raise ContractViolation(f"not a process: {list(proc)}")


def is_successful(theory: DefaultTheory, proc: Sequence[int], sem: Semantics | str) -> bool:
    sem = Semantics.parse(sem)
    _require_process(theory, proc)
    return _successful_set(theory, proc, sem)


def is_applicable(theory: DefaultTheory, proc: Sequence[int], d: int, sem: Semantics | str) -> bool:
    """Applicability of default ``d`` to ``proc``.

    Reiter and rational use local and global applicability; justified and
    constrained report whether ``proc + [d]`` is a successful process.
    """
    sem = Semantics.parse(sem)
    _check_indices(theory, [*proc, d])
    if d in proc:
        raise ContractViolation(f"default {d} already in the process")
    return _applicable_set(theory, frozenset(proc), d, sem)


def is_closed(theory: DefaultTheory, proc: Sequence[int], sem: Semantics | str) -> bool:
    sem = Semantics.parse(sem)
    _require_process(theory, proc)
    return _closed_set(theory, frozenset(proc), sem)


def _check_bound(theory: DefaultTheory, bound: int) -> None:
    if len(theory) > bound:
        raise EnumerationBound(f"{len(theory)} defaults exceed the enumeration bound {bound}")


def selected_processes(
    theory: DefaultTheory,
    sem: Semantics | str,
    bound: int = DEFAULT_BOUND,
    prune: bool = True,
) -> list[Process]:
    """All successful and closed processes, in lexicographic order.

    With ``prune`` the depth-first search only extends successful processes,
    which is sound because success is anti-monotone.  ``prune=False``
    filters every duplicate-free sequence and exists to cross-check it.
    """
    sem = Semantics.parse(sem)
    _check_bound(theory, bound)
    n = len(theory)
    if not prune:
        out = []
        for k in range(n + 1):
            for proc in itertools.permutations(range(n), k):
                if (
                    is_process(theory, proc)
                    and _successful_set(theory, proc, sem)
                    and _closed_set(theory, frozenset(proc), sem)
                ):
                    out.append(proc)
        return sorted(out)

    out: list[Process] = []

    def visit(proc: Process, applied: frozenset[int]) -> None:
        if _closed_set(theory, applied, sem):
            out.append(proc)
        for d in range(n):
            if d not in applied and _extends(theory, applied, d, sem):
                visit(proc + (d,), applied | {d})

    visit((), frozenset())
    return out


def minimal_ordering(theory: DefaultTheory, applied: Iterable[int]) -> Process | None:
    """Lexicographically least process over exactly the defaults ``applied``.

    Greedy: always apply the lowest-indexed default whose precondition holds.
    Entailment is monotone, so a default that becomes applicable stays so and
    the greedy choice never blocks a later one.  None if no ordering exists.
    """
    remaining = sorted(set(applied))
    proc: list[int] = []
    while remaining:
        base = theory.generator(proc)
        for i in remaining:
            if entails(base, theory.defaults[i].prec):
                proc.append(i)
                remaining.remove(i)
                break
        else:
            return None
    return tuple(proc)


def selected_sets(
    theory: DefaultTheory, sem: Semantics | str, bound: int = DEFAULT_SET_BOUND
) -> list[frozenset[int]]:
    """Sets of defaults of the selected processes.

    Depth-first search over successful grounded sets, each visited once.
    Every selected process is reachable because its greedy ordering has only
    successful prefixes.  Ordered by the least process over each set.
    """
    sem = Semantics.parse(sem)
    _check_bound(theory, bound)
    n = len(theory)
    seen: set[frozenset[int]] = set()
    found: list[frozenset[int]] = []
    stack = [frozenset()]
    seen.add(frozenset())
    while stack:
        applied = stack.pop()
        children = [
            applied | {d}
            for d in range(n)
            if d not in applied and _extends(theory, applied, d, sem)
        ]
        if sem.maximality:
            closed = not children
        else:
            closed = _closed_set(theory, applied, sem)
        if closed:
            found.append(applied)
        for child in children:
            if child not in seen:
                seen.add(child)
                stack.append(child)
    keyed = [(process_key(minimal_ordering(theory, s)), s) for s in found]
    keyed.sort(key=lambda t: t[0])
    return [s for _, s in keyed]


def _same_extension(g1: Sequence[Formula], g2: Sequence[Formula]) -> bool:
    if frozenset(g1) == frozenset(g2):
        return True
    return entails(g1, conj(*g2)) and entails(g2, conj(*g1))


def extensions(
    theory: DefaultTheory, sem: Semantics | str, bound: int = DEFAULT_SET_BOUND
) -> list[Extension]:
    """One extension per class of equivalent generators of selected processes.

    The witness of each extension is its least generating process under the
    process ordering; extensions are listed in that order.
    """
    result: list[Extension] = []
    for applied in selected_sets(theory, sem, bound):
        witness = minimal_ordering(theory, applied)
        gen = theory.generator(witness)
        if not any(_same_extension(gen, e.generator) for e in result):
            result.append(Extension(gen, witness))
    return result


def double_extensions(
    theory: DefaultTheory, sem: Semantics | str, bound: int = DEFAULT_SET_BOUND
) -> list[DoubleExtension]:
    """One double extension per class of equal justification sets and
    equivalent generators."""
    result: list[DoubleExtension] = []
    for applied in selected_sets(theory, sem, bound):
        witness = minimal_ordering(theory, applied)
        gen = theory.generator(witness)
        justs = frozenset(theory.justs(witness))
        if not any(
            justs == e.justs and _same_extension(gen, e.generator) for e in result
        ):
            result.append(DoubleExtension(justs, gen, witness))
    return result
