from __future__ import annotations

import pytest
from hypothesis import HealthCheck, given, settings

from deflogic import (
    TRUE,
    And,
    Default,
    DefaultTheory,
    InconsistentBackground,
    Not,
    ParseError,
    UndeclaredAtom,
    Var,
    add_known_extension,
    atoms,
    gen_assignment,
    parse_formula,
    parse_qbf,
    parse_theory,
    render_theory,
    strongest_extensions,
    t_cr,
    t_jc,
    t_rc,
    t_rj,
)
from deflogic.formula import Implies
from families import theories, theory_family

a, b, c, p, q, r, s, x, y, z = atoms("a", "b", "c", "p", "q", "r", "s", "x", "y", "z")


def test_formula_grammar():
    assert parse_formula("a & !b -> c") == Implies(And((a, Not(b))), c)
    assert parse_formula("true") == TRUE
    assert parse_formula("a -> b -> c") == Implies(a, Implies(b, c))
    assert parse_formula("  ( a )  ") == a
    assert parse_formula("x' & y_1") == And((Var("x'"), Var("y_1")))


@pytest.mark.parametrize(
    "text, column",
    [("a &", 4), ("a $ b", 3), ("(a | b", 7), ("a b", 3), ("", 1), ("a -> -> b", 6)],
)
def test_formula_errors_have_locations(text, column):
    with pytest.raises(ParseError) as info:
        parse_formula(text)
    assert info.value.line == 1
    assert info.value.column == column


def test_theory_examples():
    doc = parse_theory("d: : a / !a\n")
    assert doc.theory == DefaultTheory((Default(TRUE, a, ~a, "d"),))
    doc = parse_theory("w p & q\nd1: p : r / s\n")
    assert doc.theory.background == (p & q,)
    assert doc.theory.defaults == (Default(p, r, s, "d1"),)
    assert doc.locations == {"w1": (1, 1), "d1": (2, 1)}
    with pytest.raises(InconsistentBackground):
        parse_theory("w p\nw !p\n")


def test_theory_file_features():
    text = """
    # a comment
    vars p q r
    w p | q      # trailing comment
    first: p : q / r
    : !q / !q
    """
    doc = parse_theory(text)
    t = doc.theory
    assert t.vars == {"p", "q", "r"}
    assert [d.label for d in t.defaults] == ["first", "d2"]
    assert t.defaults[1].prec == TRUE
    assert doc.locations["d2"] == (6, 5)


def test_declared_alphabet_may_be_larger():
    t = parse_theory("vars p q z\nd: : p / q\n").theory
    assert t.vars == {"p", "q", "z"}
    assert render_theory(t) == "vars p q z\nd: : p / q\n"
    assert parse_theory(render_theory(t)).theory == t


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("vars p\nvars q\n", 2, 1),
        ("d: : a\n", 1, 4),
        ("d: p & : q / r\n", 1, 8),
        ("d: : q / r\nd: : q / r\n", 2, 1),
        ("w (p\n", 1, 5),
        ("vars p 9q\n", 1, 8),
        ("a : b : c : d / e\n", 1, 1),
    ],
)
def test_theory_errors_have_locations(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_theory(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_undeclared_atom():
    with pytest.raises(UndeclaredAtom):
        parse_theory("vars p\nd: q : / p\n")


def test_qbf_examples():
    qb = parse_qbf("exists x . forall y . x | y")
    assert (qb.x_vars, qb.y_vars, qb.z_vars, qb.matrix) == (("x",), ("y",), (), x | y)
    qb = parse_qbf("free z . exists x . forall y . z -> x")
    assert qb.z_vars == ("z",)
    with pytest.raises(ParseError):
        parse_qbf("exists x . forall x . x")


@pytest.mark.parametrize(
    "text", ["forall y . exists x . x", "exists x . y", "exists x x . x", "exists x", "exists 1 . x"]
)
def test_qbf_errors(text):
    with pytest.raises(ParseError):
        parse_qbf(text)


def test_render_examples():
    pair = DefaultTheory((Default(TRUE, a, b), Default(TRUE, ~a, b)))
    assert render_theory(pair) == "d1: : a / b\nd2: : !a / b\n"
    assert parse_theory(render_theory(pair)).theory == pair
    assert render_theory(DefaultTheory(())) == ""
    assert render_theory(DefaultTheory((), (p, q))) == "w p\nw q\n"


def _roundtrip(t):
    assert parse_theory(render_theory(t)).theory == t


@settings(max_examples=80, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(theories())
def test_roundtrip_property(t):
    _roundtrip(t)


def test_roundtrip_translation_outputs():
    for t in theory_family(seed=51, n=40, max_atoms=3, max_defaults=3):
        _roundtrip(t)
        _roundtrip(t_cr(t).theory)
        _roundtrip(t_jc(t).theory)
        _roundtrip(add_known_extension(t).theory)
        for e in strongest_extensions(t, "rational")[:1]:
            _roundtrip(t_rc(t, e.formula).theory)
            _roundtrip(t_rc(t, e.formula, complete_guard=True).theory)
        for e in strongest_extensions(t, "reiter")[:1]:
            _roundtrip(t_rj(t, e.formula).theory)
    from deflogic import Qbf2

    _roundtrip(gen_assignment(Qbf2(("x",), ("y",), z >> (x | y), ("z",))))
