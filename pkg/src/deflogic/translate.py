"""Theory-to-theory translations and QBF-driven theory generators.

Every translation returns a :class:`TranslationResult` carrying the target
theory and the atoms it introduced.  Fresh control atoms are named ``__a``,
``__b``, ``__z<i>``, ``__k<i>``; alphabet copies append ``__p`` (primed copy)
or ``__c<i>`` (i-th copy).  A numeric suffix is added when a name is taken.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import AlphabetError, ContractViolation, UnsupportedConstruction
from .formula import (
    FALSE,
    TRUE,
    Formula,
    Iff,
    Implies,
    Not,
    Var,
    conj,
    evaluate,
    rename,
)
from .semantics import (
    DEFAULT_SET_BOUND,
    Default,
    DefaultTheory,
    Semantics,
    extensions,
)
from .solver import entails, equivalent


@dataclass(frozen=True)
class FreshVars:
    a: str | None = None
    b: str | None = None
    z: tuple[str, ...] = ()
    k: tuple[str, ...] = ()
    # copy name -> {source atom: copied atom}, e.g. "X'" or "X_2"
    alphabets: Mapping[str, Mapping[str, str]] = field(default_factory=dict)

    def atoms(self) -> frozenset[str]:
        out = {x for x in (self.a, self.b) if x}
        out.update(self.z, self.k)
        for m in self.alphabets.values():
            out.update(m.values())
        return frozenset(out)

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "z": list(self.z),
            "k": list(self.k),
            "alphabets": {
                name: dict(sorted(m.items())) for name, m in sorted(self.alphabets.items())
            },
        }


@dataclass(frozen=True)
class TranslationResult:
    """A translated theory, or the bottom marker (``theory is None``) that
    stands for a theory with no extensions at all."""

    theory: DefaultTheory | None
    fresh: FreshVars = field(default_factory=FreshVars)
    source_vars: frozenset[str] = frozenset()

    @property
    def bottom(self) -> bool:
        return self.theory is None


@dataclass(frozen=True)
class Qbf2:
    """``exists X forall Y . F`` with a block ``Z`` of free atoms."""

    x_vars: tuple[str, ...]
    y_vars: tuple[str, ...]
    matrix: Formula
    z_vars: tuple[str, ...] = ()

    def __post_init__(self):
        blocks = [tuple(self.x_vars), tuple(self.y_vars), tuple(self.z_vars)]
        object.__setattr__(self, "x_vars", blocks[0])
        object.__setattr__(self, "y_vars", blocks[1])
        object.__setattr__(self, "z_vars", blocks[2])
        seen: set[str] = set()
        for block in blocks:
            for v in block:
                if v in seen:
                    raise ValueError(f"variable {v!r} bound twice")
                seen.add(v)
        stray = self.matrix.vars - seen
        if stray:
            raise ValueError(f"unbound matrix atoms: {', '.join(sorted(stray))}")

    @property
    def vars(self) -> frozenset[str]:
        return frozenset((*self.x_vars, *self.y_vars, *self.z_vars))


def _assignments(names: Sequence[str]):
    for bits in itertools.product((False, True), repeat=len(names)):
        yield dict(zip(names, bits))


def qbf_valid(q: Qbf2, z_assignment: Mapping[str, bool] | None = None) -> bool:
    """Truth-table evaluation of ``exists X forall Y . F`` under ``z_assignment``."""
    fixed = dict(z_assignment or {})
    missing = set(q.z_vars) - fixed.keys()
    if missing:
        raise ContractViolation(f"free atoms not assigned: {', '.join(sorted(missing))}")
    return any(
        all(evaluate(q.matrix, {**fixed, **xs, **ys}) for ys in _assignments(q.y_vars))
        for xs in _assignments(q.x_vars)
    )


def count_valid_assignments(q: Qbf2) -> int:
    return sum(qbf_valid(q, zs) for zs in _assignments(q.z_vars))


class _Names:
    def __init__(self, taken: Iterable[str]):
        self.taken = set(taken)

    def atom(self, base: str) -> str:
        name, k = base, 0
        while name in self.taken:
            k += 1
            name = f"{base}_{k}"
        self.taken.add(name)
        return name

    def copy(self, alphabet: Sequence[str], tag: str) -> dict[str, str]:
        """Collision-free renaming ``x -> x + tag'`` for a tag derived from ``tag``."""
        t, k = tag, 0
        while any(x + t in self.taken for x in alphabet):
            k += 1
            t = f"{tag}_{k}"
        mapping = {x: x + t for x in alphabet}
        self.taken.update(mapping.values())
        return mapping


def _conj_w(theory: DefaultTheory) -> Formula:
    return conj(*theory.background)


def _background(f: Formula) -> tuple[Formula, ...]:
    return () if f == TRUE else (f,)


def _guarded(a: Formula, w: Formula) -> Formula:
    """``a -> w``, or ``true`` for an empty background."""
    return TRUE if w == TRUE else Implies(a, w)


def _bottom(theory: DefaultTheory) -> TranslationResult:
    return TranslationResult(None, FreshVars(), theory.vars)


# ---------------------------------------------------------------------------
# Translations


def t_cr(theory: DefaultTheory) -> TranslationResult:
    """Constrained to rational: every default becomes seminormal."""
    defaults = [
        Default(d.prec, conj(d.just, d.cons), d.cons, d.label) for d in theory.defaults
    ]
    target = DefaultTheory(tuple(defaults), theory.background, theory.vars)
    return TranslationResult(target, FreshVars(), theory.vars)


def t_jc(theory: DefaultTheory) -> TranslationResult:
    """Justified to constrained: one alphabet copy per default.

    Default ``i`` checks its justification on copy ``i`` and draws its
    consequence on the original alphabet and on every copy.
    """
    xs = sorted(theory.vars)
    names = _Names(xs)
    m = len(theory)
    copies = [names.copy(xs, f"__c{i}") for i in range(1, m + 1)]
    defaults = []
    for i, d in enumerate(theory.defaults):
        cons = conj(d.cons, *(rename(d.cons, c) for c in copies))
        defaults.append(Default(d.prec, rename(d.just, copies[i]), cons, d.label))
    w = _conj_w(theory)
    background = _background(conj(w, *(rename(w, c) for c in copies)))
    vars_ = frozenset(theory.vars).union(*(c.values() for c in copies))
    target = DefaultTheory(tuple(defaults), background, vars_)
    fresh = FreshVars(alphabets={f"X_{i}": c for i, c in enumerate(copies, 1)})
    return TranslationResult(target, fresh, theory.vars)


def _check_strongest(
    theory: DefaultTheory, ext: Formula, sem: Semantics, bound: int
) -> None:
    exts = extensions(theory, sem, bound)
    if not exts:
        raise ContractViolation(
            f"theory has no {sem.value} extension; pass no_extension=True"
        )
    match = [e for e in exts if equivalent(ext, e.formula)]
    if not match:
        raise ContractViolation(f"formula is not equivalent to a {sem.value} extension")
    for e in exts:
        if e is not match[0] and entails(e.generator, ext):
            raise ContractViolation(f"formula is not a strongest {sem.value} extension")


def _strongest_prelude(
    theory: DefaultTheory,
    ext: Formula | None,
    sem: Semantics,
    no_extension: bool,
    verify: bool,
    bound: int,
) -> bool:
    """Validate the strongest-extension argument; True when bottom applies."""
    if no_extension:
        return True
    if ext is None:
        raise ContractViolation("a strongest extension is required")
    stray = ext.vars - theory.vars
    if stray:
        raise AlphabetError(
            f"extension mentions atoms outside the theory: {', '.join(sorted(stray))}"
        )
    if verify:
        _check_strongest(theory, ext, sem, bound)
    return False


def t_rc(
    theory: DefaultTheory,
    ext: Formula | None,
    *,
    no_extension: bool = False,
    verify: bool = True,
    bound: int = DEFAULT_SET_BOUND,
    complete_guard: bool = False,
) -> TranslationResult:
    """Rational to constrained, given a strongest rational extension ``ext``.

    Consequences of the simulated process are drawn under ``a``, its
    justifications under ``b``, and both are checked on the primed alphabet.
    The ``g`` default closes a successful simulation; the ``s`` default
    yields ``ext`` otherwise.

    The guard of ``g`` is entailed only when every ``z_i`` is, and ``z_i`` is
    only derivable for defaults whose precondition is entailed.  Simulations
    of processes that leave some precondition underivable therefore never
    close, and their extensions are lost.  With ``complete_guard`` each
    default also gets ``u_i = (: !prec_i[X/X_i] / z_i)``, checked on its own
    copy ``X_i`` of the alphabet, to which ``a -> W`` and every simulated
    consequence are copied as well.
    """
    if _strongest_prelude(theory, ext, Semantics.RATIONAL, no_extension, verify, bound):
        return _bottom(theory)
    xs = sorted(theory.vars)
    names = _Names(xs)
    a, b = Var(names.atom("__a")), Var(names.atom("__b"))
    zs = [Var(names.atom(f"__z{i}")) for i in range(1, len(theory) + 1)]
    primed = names.copy(xs, "__p")
    m = len(theory)
    copies = [names.copy(xs, f"__c{i}") for i in range(1, m + 1)] if complete_guard else []

    defaults = []
    for i, d in enumerate(theory.defaults):
        copied = [Implies(a, rename(d.cons, c)) for c in copies]
        defaults.append(
            Default(
                Implies(a, d.prec),
                conj(rename(d.just, primed), rename(d.cons, primed)),
                conj(zs[i], Implies(a, d.cons), Implies(b, d.just), *copied),
                f"e_{d.label}",
            )
        )
        defaults.append(
            Default(
                conj(Implies(a, d.prec), Implies(conj(a, b), Not(d.just))),
                TRUE,
                zs[i],
                f"n_{d.label}",
            )
        )
        if complete_guard:
            defaults.append(Default(TRUE, Not(rename(d.prec, copies[i])), zs[i], f"u_{d.label}"))
    guard = conj(*(Implies(Implies(a, d.prec), zs[i]) for i, d in enumerate(theory.defaults)))
    defaults.append(Default(guard, conj(a, Not(ext)), conj(a, Not(b), *zs), "g"))
    defaults.append(Default(TRUE, TRUE, conj(Not(a), Not(b), ext, *zs), "s"))

    w = _conj_w(theory)
    copied_w = [_guarded(a, rename(w, c)) for c in copies]
    background = _background(conj(_guarded(a, w), rename(w, primed), *copied_w))
    vars_ = frozenset(names.taken)
    target = DefaultTheory(tuple(defaults), background, vars_)
    alphabets = {"X'": primed, **{f"X_{i}": c for i, c in enumerate(copies, 1)}}
    fresh = FreshVars(a=a.name, b=b.name, z=tuple(z.name for z in zs), alphabets=alphabets)
    return TranslationResult(target, fresh, theory.vars)


def t_rj(
    theory: DefaultTheory,
    ext: Formula | None,
    *,
    no_extension: bool = False,
    verify: bool = True,
    bound: int = DEFAULT_SET_BOUND,
    complete_guard: bool = False,
) -> TranslationResult:
    """Reiter to justified, given a strongest Reiter extension ``ext``.

    Defaults may be simulated even when their justification is violated; the
    ``g`` default equates the primed alphabet with the original one, so it
    can only be applied when the simulated process is successful.

    ``complete_guard`` adds ``u_i = (: a -> !prec_i / z_i)`` for the same
    reason as in :func:`t_rc`.  Justifications are checked one at a time here,
    so no alphabet copies are needed; the ``a`` guard keeps ``u_i`` from
    blocking ``s``.
    """
    if _strongest_prelude(theory, ext, Semantics.REITER, no_extension, verify, bound):
        return _bottom(theory)
    xs = sorted(theory.vars)
    names = _Names(xs)
    a = Var(names.atom("__a"))
    zs = [Var(names.atom(f"__z{i}")) for i in range(1, len(theory) + 1)]
    primed = names.copy(xs, "__p")

    defaults = []
    for i, d in enumerate(theory.defaults):
        defaults.append(
            Default(
                Implies(a, d.prec),
                rename(d.just, primed),
                conj(zs[i], Implies(a, d.cons)),
                f"e_{d.label}",
            )
        )
        defaults.append(
            Default(
                conj(Implies(a, d.prec), Implies(a, Not(d.just))),
                TRUE,
                zs[i],
                f"n_{d.label}",
            )
        )
        if complete_guard:
            defaults.append(Default(TRUE, Implies(a, Not(d.prec)), zs[i], f"u_{d.label}"))
    guard = conj(*(Implies(Implies(a, d.prec), zs[i]) for i, d in enumerate(theory.defaults)))
    same = [Iff(Var(x), Var(primed[x])) for x in xs]
    defaults.append(Default(guard, Not(ext), conj(a, *same, *zs), "g"))
    defaults.append(Default(TRUE, TRUE, conj(Not(a), ext, *zs), "s"))

    background = _background(_guarded(a, _conj_w(theory)))
    target = DefaultTheory(tuple(defaults), background, frozenset(names.taken))
    fresh = FreshVars(a=a.name, z=tuple(z.name for z in zs), alphabets={"X'": primed})
    return TranslationResult(target, fresh, theory.vars)


def add_known_extension(theory: DefaultTheory) -> TranslationResult:
    """Add the single extension ``Cn(a)`` and guard every default by ``!a``."""
    names = _Names(theory.vars)
    a = Var(names.atom("__a"))
    defaults = [
        Default(TRUE, a, a, "known_pos"),
        Default(TRUE, Not(a), Not(a), "known_neg"),
    ]
    defaults += [
        Default(conj(Not(a), d.prec), d.just, d.cons, f"g_{d.label}") for d in theory.defaults
    ]
    target = DefaultTheory(tuple(defaults), theory.background, frozenset(names.taken))
    return TranslationResult(target, FreshVars(a=a.name), theory.vars)


def combine_with_selector(first: DefaultTheory, second: DefaultTheory) -> TranslationResult:
    """Union of two theories, separated by a fresh selector atom ``b``."""
    if first.background or second.background:
        raise UnsupportedConstruction("combination requires empty backgrounds")
    names = _Names(first.vars | second.vars)
    b = Var(names.atom("__b"))
    defaults = [Default(TRUE, b, b, "sel_pos"), Default(TRUE, Not(b), Not(b), "sel_neg")]
    defaults += [Default(conj(b, d.prec), d.just, d.cons, f"l_{d.label}") for d in first.defaults]
    defaults += [
        Default(conj(Not(b), d.prec), d.just, d.cons, f"r_{d.label}") for d in second.defaults
    ]
    target = DefaultTheory(tuple(defaults), (), frozenset(names.taken))
    return TranslationResult(target, FreshVars(b=b.name), first.vars | second.vars)


# ---------------------------------------------------------------------------
# Generators


def _no_free_block(q: Qbf2, what: str) -> None:
    if q.z_vars:
        raise ContractViolation(f"{what} requires an empty free block")


def gen_sigma2_rational(q: Qbf2) -> DefaultTheory:
    """Theory with one rational extension if ``q`` is valid and none otherwise."""
    _no_free_block(q, "gen_sigma2_rational")
    names = _Names(q.vars)
    a = Var(names.atom("__a"))
    zs = [Var(names.atom(f"__z{i}")) for i in range(1, len(q.x_vars) + 1)]
    defaults = []
    for x, z in zip(q.x_vars, zs):
        xv = Var(x)
        defaults.append(Default(TRUE, conj(xv, z), conj(z, Implies(a, xv)), f"x_{x}"))
        defaults.append(
            Default(TRUE, conj(Not(xv), z), conj(z, Implies(a, Not(xv))), f"nx_{x}")
        )
    all_z = conj(*zs)
    defaults.append(Default(conj(all_z, Implies(a, q.matrix)), TRUE, Not(a), "close"))
    defaults.append(Default(all_z, a, FALSE, "fail"))
    return DefaultTheory(tuple(defaults), (), frozenset(names.taken))


def gen_one_or_two(q: Qbf2) -> DefaultTheory:
    """Theory with extensions ``!a & !b`` and, iff ``q`` is valid, ``!a & b``
    (rational and constrained)."""
    _no_free_block(q, "gen_one_or_two")
    names = _Names(q.vars)
    a, b = Var(names.atom("__a")), Var(names.atom("__b"))
    defaults = []
    for x in q.x_vars:
        xv = Var(x)
        defaults.append(Default(TRUE, xv, Implies(a, xv), f"x_{x}"))
        defaults.append(Default(TRUE, Not(xv), Implies(a, Not(xv)), f"nx_{x}"))
    valid = conj(Not(a), b)
    base = conj(Not(a), Not(b))
    defaults.append(Default(Implies(a, q.matrix), valid, valid, "valid"))
    defaults.append(Default(TRUE, base, base, "base"))
    return DefaultTheory(tuple(defaults), (), frozenset(names.taken))


def gen_assignment(q: Qbf2) -> DefaultTheory:
    """Theory whose rational and constrained extensions are ``w & !a & !b``
    for every assignment ``w`` of the free block, plus ``w & !a & b`` exactly
    when ``q`` is valid under ``w``."""
    names = _Names(q.vars)
    a, b = Var(names.atom("__a")), Var(names.atom("__b"))
    ks = [Var(names.atom(f"__k{i}")) for i in range(1, len(q.z_vars) + 1)]
    big_k = conj(*ks)
    defaults = []
    for z, k in zip(q.z_vars, ks):
        pos, neg = conj(Var(z), k), conj(Not(Var(z)), k)
        defaults.append(Default(TRUE, pos, pos, f"z_{z}"))
        defaults.append(Default(TRUE, neg, neg, f"nz_{z}"))
    for x in q.x_vars:
        xv = Var(x)
        defaults.append(Default(big_k, xv, Implies(a, xv), f"x_{x}"))
        defaults.append(Default(big_k, Not(xv), Implies(a, Not(xv)), f"nx_{x}"))
    valid = conj(Not(a), b)
    base = conj(Not(a), Not(b))
    defaults.append(Default(conj(big_k, Implies(a, q.matrix)), valid, valid, "valid"))
    defaults.append(Default(big_k, base, base, "base"))
    return DefaultTheory(tuple(defaults), (), frozenset(names.taken))


GENERATORS = {
    "sigma2": gen_sigma2_rational,
    "one-or-two": gen_one_or_two,
    "assignment": gen_assignment,
}


def expected_extension_count(construction: str, q: Qbf2) -> tuple[int, str]:
    """Extension count the construction is built to have, with its derivation."""
    if construction == "sigma2":
        n = int(qbf_valid(q))
        return n, f"{n} extensions (rational)"
    if construction == "one-or-two":
        n = 1 + int(qbf_valid(q))
        return n, f"1 + {n - 1} = {n} extensions (rational, constrained)"
    if construction == "assignment":
        valid = count_valid_assignments(q)
        n = 2 ** len(q.z_vars) + valid
        return n, f"2^{len(q.z_vars)} + {valid} = {n} extensions (rational, constrained)"
    raise ValueError(f"unknown construction {construction!r}")
