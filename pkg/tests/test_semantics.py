from __future__ import annotations

import pytest
from hypothesis import HealthCheck, given, settings

from deflogic import (
    TRUE,
    ContractViolation,
    Default,
    DefaultTheory,
    EnumerationBound,
    InconsistentBackground,
    MalformedProcess,
    Semantics,
    UndeclaredAtom,
    Var,
    atoms,
    double_extensions,
    entails,
    equivalent,
    extensions,
    is_applicable,
    is_closed,
    is_process,
    is_successful,
    minimal_ordering,
    selected_processes,
    selected_sets,
)
from deflogic.formula import conj
from families import theories, theory_family
from oracles import oracle_extensions, oracle_selected, projection

a, b, p, q = atoms("a", "b", "p", "q")
a1, b1 = Var("a'"), Var("b'")
ALL = ("reiter", "justified", "rational", "constrained")

NOEXT = DefaultTheory((Default(TRUE, a, ~a),))
PAIR = DefaultTheory((Default(TRUE, a, b), Default(TRUE, ~a, b)))
TRANSLATED_PAIR = DefaultTheory(
    (
        Default(TRUE, a1 & b1, conj(b, a1, b1)),
        Default(TRUE, ~a1 & b1, conj(b, ~a1, b1)),
    )
)


def test_theory_construction():
    t = DefaultTheory((Default(p, TRUE, q), Default(TRUE, q, q, "mine")), (p | q,))
    assert t.labels(range(2)) == ["d1", "mine"]
    assert t.vars == {"p", "q"}
    with pytest.raises(InconsistentBackground):
        DefaultTheory((), (p, ~p))
    with pytest.raises(UndeclaredAtom):
        DefaultTheory((Default(TRUE, p, q),), (), frozenset({"p"}))
    with pytest.raises(ValueError):
        DefaultTheory((Default(TRUE, p, q, "x"), Default(TRUE, q, q, "x")))


def test_semantics_parse():
    assert Semantics.parse("Rational") is Semantics.RATIONAL
    with pytest.raises(ValueError):
        Semantics.parse("stable")


def test_is_process_examples():
    assert is_process(PAIR, ())
    assert is_process(NOEXT, (0,))
    assert not is_process(DefaultTheory((Default(p, TRUE, q),)), (0,))
    assert not is_process(PAIR, (0, 0))
    with pytest.raises(MalformedProcess):
        is_process(PAIR, (2,))


def test_is_successful_examples():
    assert is_successful(PAIR, (0, 1), "reiter")
    assert not is_successful(PAIR, (0, 1), "constrained")
    for sem in ALL:
        assert is_successful(PAIR, (), sem)
    with pytest.raises(ContractViolation):
        is_successful(DefaultTheory((Default(p, TRUE, q),)), (0,), "reiter")


def test_is_applicable_examples():
    assert is_applicable(NOEXT, (), 0, "reiter")
    assert is_applicable(NOEXT, (), 0, "rational")
    t = DefaultTheory((Default(p, TRUE, q),))
    for sem in ALL:
        assert not is_applicable(t, (), 0, sem)


def test_is_closed_examples():
    assert is_closed(NOEXT, (), "justified")
    assert not is_closed(NOEXT, (), "reiter")
    empty = DefaultTheory((), (p,))
    for sem in ALL:
        assert is_closed(empty, (), sem)


def test_selected_processes_examples():
    assert selected_processes(NOEXT, "reiter") == []
    assert selected_processes(PAIR, "constrained") == [(0,), (1,)]
    for sem in ALL:
        assert selected_processes(DefaultTheory((), (p,)), sem) == [()]


def test_extensions_examples():
    (e,) = extensions(PAIR, "constrained")
    assert equivalent(e.formula, b)
    for sem in ("justified", "constrained"):
        (e,) = extensions(NOEXT, sem)
        assert equivalent(e.formula, TRUE)
    for sem in ("reiter", "rational"):
        assert extensions(NOEXT, sem) == []
    exts = extensions(TRANSLATED_PAIR, "reiter")
    assert len(exts) == 2
    assert equivalent(exts[0].formula, conj(b, a1, b1))
    assert equivalent(exts[1].formula, conj(b, ~a1, b1))


def test_double_extensions_examples():
    ds = double_extensions(PAIR, "constrained")
    assert [d.justs for d in ds] == [frozenset({a}), frozenset({~a})]
    assert all(equivalent(d.formula, b) for d in ds)
    (d,) = double_extensions(DefaultTheory((), (p,)), "reiter")
    assert d.justs == frozenset() and equivalent(d.formula, p)
    assert len(double_extensions(TRANSLATED_PAIR, "reiter")) == 2


def test_witness_is_least_process():
    t = DefaultTheory((Default(p, TRUE, q), Default(TRUE, TRUE, p)))
    (e,) = extensions(t, "reiter")
    assert e.witness == (1, 0)
    assert minimal_ordering(t, {0}) is None


def test_enumeration_bound():
    t = DefaultTheory(tuple(Default(TRUE, TRUE, Var(f"x{i}")) for i in range(5)))
    with pytest.raises(EnumerationBound):
        selected_processes(t, "reiter", bound=4)
    with pytest.raises(EnumerationBound):
        extensions(t, "reiter", bound=4)
    assert len(extensions(t, "reiter")) == 1


# Agreement with the definitional oracle ---------------------------------

FAMILY = theory_family(seed=101, n=120, max_atoms=3, max_defaults=3)


@pytest.mark.parametrize("sem", ALL)
def test_selected_processes_match_oracle(sem):
    for t in FAMILY:
        assert selected_processes(t, sem) == sorted(oracle_selected(t, sem))


@pytest.mark.parametrize("sem", ALL)
def test_extensions_match_oracle(sem):
    for t in FAMILY:
        xs = sorted(t.vars)
        mine = [projection(e.generator, xs) for e in extensions(t, sem)]
        assert len(mine) == len(set(mine))
        assert set(mine) == oracle_extensions(t, sem)


# Invariants ----------------------------------------------------------------

INVARIANT_FAMILY = theory_family(seed=202, n=150)


@pytest.mark.parametrize("sem", ALL)
def test_pruned_matches_unpruned(sem):
    for t in INVARIANT_FAMILY[:80]:
        assert selected_processes(t, sem) == selected_processes(t, sem, prune=False)


@pytest.mark.parametrize("sem", ALL)
def test_prefixes_of_selected_processes_are_successful_processes(sem):
    for t in INVARIANT_FAMILY:
        for proc in selected_processes(t, sem):
            for k in range(len(proc) + 1):
                assert is_process(t, proc[:k])
                assert is_successful(t, proc[:k], sem)


@pytest.mark.parametrize("sem", ALL)
def test_sets_match_ordered_enumeration(sem):
    for t in INVARIANT_FAMILY:
        ordered = {frozenset(pr) for pr in selected_processes(t, sem)}
        assert set(selected_sets(t, sem)) == ordered


@pytest.mark.parametrize("sem", ["justified", "constrained"])
def test_fail_safety(sem):
    for t in INVARIANT_FAMILY[:80]:
        selected = selected_processes(t, sem)
        assert selected, "fail-safe semantics always select a process"
        # every successful process is a prefix of a selected one
        frontier = [()]
        while frontier:
            proc = frontier.pop()
            assert any(s[: len(proc)] == proc for s in selected)
            for d in range(len(t)):
                nxt = proc + (d,)
                if d not in proc and is_process(t, nxt) and is_successful(t, nxt, sem):
                    frontier.append(nxt)


def test_reiter_non_containment():
    for t in INVARIANT_FAMILY:
        exts = extensions(t, "reiter")
        for e in exts:
            for f in exts:
                if e is not f:
                    assert not entails(e.generator, f.formula)


@pytest.mark.parametrize("sem", ALL)
def test_double_extensions_at_least_extensions(sem):
    for t in INVARIANT_FAMILY:
        doubles = double_extensions(t, sem)
        exts = extensions(t, sem)
        assert len(doubles) >= len(exts)
        # every double extension carries one of the extensions
        for d in doubles:
            assert any(equivalent(d.formula, e.formula) for e in exts)


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(theories())
def test_extensions_oracle_property(t):
    for sem in ALL:
        xs = sorted(t.vars)
        mine = {projection(e.generator, xs) for e in extensions(t, sem)}
        assert mine == oracle_extensions(t, sem)
