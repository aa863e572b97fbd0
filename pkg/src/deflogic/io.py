"""Concrete syntax for formulas, default theories and QBF inputs.

Formulas use ``!``, ``&``, ``|``, ``->`` (right-associative) and ``<->``
(left-associative), binding in that order of decreasing strength, plus the
constants ``true`` and ``false``.  A theory file is line oriented::

    # comment
    vars p q r            optional, at most once: the declared alphabet
    w p | q               a background formula (any number of lines)
    d1: p : q / r         a default, in enumeration order
    d2: : !q / !q         an empty precondition or justification means true

The label and its colon may be left out (``p : q / r``); such defaults are
numbered by position.  Rendering produces the canonical form of this grammar
and parsing it back yields an identical theory.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping

from .errors import ParseError, UndeclaredAtom
from .formula import FALSE, TRUE, And, Formula, Iff, Implies, Not, Or, Var, vars_of
from .semantics import Default, DefaultTheory
from .translate import Qbf2

_TOKEN = re.compile(
    r"\s*(?:(?P<op><->|->|[!&|()])|(?P<atom>[A-Za-z_][A-Za-z0-9_']*)|(?P<bad>\S))"
)
_LABEL = re.compile(r"\s*([A-Za-z0-9_][A-Za-z0-9_'.\-]*)\s*:")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")
_KEYWORDS = {"true", "false"}


class _Parser:
    def __init__(self, text: str, line: int, column: int):
        self.text = text
        self.line = line
        self.column = column
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while True:
            m = _TOKEN.match(text, pos)
            if m is None:
                break
            kind = m.lastgroup
            if kind == "bad":
                self.fail(f"unexpected character {m.group('bad')!r}", m.start("bad"))
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def fail(self, message: str, offset: int | None = None):
        if offset is None:
            offset = self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)
        raise ParseError(message, self.line, self.column + offset)

    def peek(self) -> str | None:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else None

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> Formula:
        if not self.tokens:
            self.fail("empty formula")
        f = self.iff()
        if self.i < len(self.tokens):
            self.fail(f"unexpected {self.peek()!r}")
        return f

    def iff(self) -> Formula:
        f = self.implies()
        while self.peek() == "<->":
            self.take()
            f = Iff(f, self.implies())
        return f

    def implies(self) -> Formula:
        f = self.disjunction()
        if self.peek() == "->":
            self.take()
            return Implies(f, self.implies())
        return f

    def disjunction(self) -> Formula:
        args = [self.conjunction()]
        while self.peek() == "|":
            self.take()
            args.append(self.conjunction())
        return args[0] if len(args) == 1 else Or(tuple(args))

    def conjunction(self) -> Formula:
        args = [self.negation()]
        while self.peek() == "&":
            self.take()
            args.append(self.negation())
        return args[0] if len(args) == 1 else And(tuple(args))

    def negation(self) -> Formula:
        if self.peek() == "!":
            self.take()
            return Not(self.negation())
        return self.primary()

    def primary(self) -> Formula:
        if self.i >= len(self.tokens):
            self.fail("unexpected end of formula")
        kind, value, offset = self.take()
        if value == "(":
            f = self.iff()
            if self.peek() != ")":
                self.fail("expected ')'")
            self.take()
            return f
        if kind == "atom":
            if value == "true":
                return TRUE
            if value == "false":
                return FALSE
            return Var(value)
        self.fail(f"unexpected {value!r}", offset)


def parse_formula(text: str, *, line: int = 1, column: int = 1) -> Formula:
    """Parse one formula; ``line``/``column`` locate ``text`` in a larger source."""
    return _Parser(text, line, column).parse()


@dataclass(frozen=True)
class TheoryDocument:
    """A parsed theory file together with where each item came from.

    ``locations`` maps default labels and ``w<i>`` (the i-th background
    formula, 1-based) to their ``(line, column)``.
    """

    text: str
    theory: DefaultTheory
    locations: Mapping[str, tuple[int, int]] = field(default_factory=dict)


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def _optional_formula(text: str, line: int, column: int) -> Formula:
    if not text.strip():
        return TRUE
    return parse_formula(text, line=line, column=column)


def _parse_default(body: str, lineno: int) -> tuple[Default, int]:
    label = None
    start = 0
    if body.count(":") == 2:
        m = _LABEL.match(body)
        if m is None:
            col = len(body) - len(body.lstrip()) + 1
            raise ParseError("expected a default label", lineno, col)
        label = m.group(1)
        start = m.end()
    elif body.count(":") != 1:
        raise ParseError("a default needs the form 'label: prec : just / cons'", lineno, 1)
    colon = body.index(":", start)
    slash = body.find("/", colon)
    if slash < 0 or body.count("/") != 1:
        raise ParseError("a default needs exactly one '/' after its justification", lineno, colon + 1)
    prec = _optional_formula(body[start:colon], lineno, start + 1)
    just = _optional_formula(body[colon + 1 : slash], lineno, colon + 2)
    cons = parse_formula(body[slash + 1 :], line=lineno, column=slash + 2)
    column = len(body) - len(body.lstrip()) + 1
    return Default(prec, just, cons, label), column


def parse_theory(text: str) -> TheoryDocument:
    """Parse a theory file.

    Raises ParseError (with a location) on syntax errors and duplicate labels,
    UndeclaredAtom when a ``vars`` line misses an occurring atom, and
    InconsistentBackground when the ``w`` lines are jointly unsatisfiable.
    """
    declared: list[str] | None = None
    background: list[Formula] = []
    defaults: list[Default] = []
    locations: dict[str, tuple[int, int]] = {}
    positions: list[tuple[int, int]] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        hm = re.match(r"\s*(\S+)\s*", line)
        head, rest, offset = hm.group(1), line[hm.end() :], hm.end()
        if head == "vars" and ":" not in line:
            if declared is not None:
                raise ParseError("'vars' may appear only once", lineno, indent + 1)
            declared = []
            for m in re.finditer(r"\S+", rest):
                name = m.group()
                col = offset + m.start() + 1
                if not _IDENT.match(name) or name in _KEYWORDS:
                    raise ParseError(f"invalid atom name {name!r}", lineno, col)
                declared.append(name)
            continue
        if head == "w" and ":" not in line:
            background.append(parse_formula(rest, line=lineno, column=offset + 1))
            locations[f"w{len(background)}"] = (lineno, indent + 1)
            continue
        d, col = _parse_default(line, lineno)
        if d.label in seen:
            raise ParseError(f"duplicate default label {d.label!r}", lineno, col)
        if d.label:
            seen.add(d.label)
        defaults.append(d)
        positions.append((lineno, col))

    if declared is not None:
        occurring = vars_of(background)
        for d in defaults:
            occurring |= d.vars
        missing = sorted(occurring - set(declared))
        if missing:
            raise UndeclaredAtom(f"atoms not declared in 'vars': {', '.join(missing)}")
    theory = DefaultTheory(
        tuple(defaults),
        tuple(background),
        None if declared is None else frozenset(declared),
    )
    for d, where in zip(theory.defaults, positions):
        locations[d.label] = where
    return TheoryDocument(text, theory, locations)


def render_default(d: Default) -> str:
    prec = "" if d.prec == TRUE else f" {d.prec}"
    just = "" if d.just == TRUE else f" {d.just}"
    return f"{d.label}:{prec} :{just} / {d.cons}"


def render_theory(theory: DefaultTheory) -> str:
    """Canonical text of ``theory``, ending in a newline (empty for the
    empty theory).  A ``vars`` line is written only when the declared
    alphabet differs from the occurring atoms."""
    lines = []
    occurring = vars_of(theory.background)
    for d in theory.defaults:
        occurring |= d.vars
    if theory.vars != occurring:
        lines.append(" ".join(["vars", *sorted(theory.vars)]))
    lines += [f"w {f}" for f in theory.background]
    lines += [render_default(d) for d in theory.defaults]
    return "".join(line + "\n" for line in lines)


_BLOCKS = ("free", "exists", "forall")


def parse_qbf(text: str) -> Qbf2:
    """Parse ``[free Z .] [exists X .] [forall Y .] matrix``.

    Blocks appear in that order, each at most once.  A variable bound twice
    or a matrix atom bound by no block is a ParseError.
    """
    flat = text.replace("\n", " ")
    blocks: dict[str, list[str]] = {}
    pos = 0
    while True:
        m = re.match(r"\s*(free|exists|forall)\b", flat[pos:])
        if m is None:
            break
        kw = m.group(1)
        col = pos + m.start(1) + 1
        if kw in blocks or any(_BLOCKS.index(k) > _BLOCKS.index(kw) for k in blocks):
            raise ParseError(f"block {kw!r} repeated or out of order", 1, col)
        dot = flat.find(".", pos)
        if dot < 0:
            raise ParseError(f"block {kw!r} is not closed by '.'", 1, col)
        names = []
        body_start = pos + m.end()
        for v in re.finditer(r"\S+", flat[body_start:dot]):
            name = v.group().rstrip(",")
            vcol = body_start + v.start() + 1
            if not _IDENT.match(name) or name in _KEYWORDS:
                raise ParseError(f"invalid variable name {name!r}", 1, vcol)
            for other in blocks.values():
                if name in other:
                    raise ParseError(f"variable {name!r} bound twice", 1, vcol)
            if name in names:
                raise ParseError(f"variable {name!r} bound twice", 1, vcol)
            names.append(name)
        blocks[kw] = names
        pos = dot + 1
    matrix = parse_formula(flat[pos:], column=pos + 1)
    try:
        return Qbf2(
            tuple(blocks.get("exists", ())),
            tuple(blocks.get("forall", ())),
            matrix,
            tuple(blocks.get("free", ())),
        )
    except ValueError as exc:
        raise ParseError(str(exc), 1, pos + 1) from None
