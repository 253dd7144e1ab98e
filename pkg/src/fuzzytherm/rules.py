"""IF-THEN rule language: parsing, matrix expansion, and serialization.

Grammar (keywords case-insensitive, one rule per line or semicolon):

    rule := "IF" expr "THEN" ident "IS" ident
    expr := conj { "OR" conj }
    conj := atom { "AND" atom }
    atom := "(" expr ")" | ident "IS" ident { "OR" ident }

AND binds tighter than OR. The trailing ``{ "OR" ident }`` inside an atom
is shorthand that distributes the variable over the listed terms, so
``temperature is cold OR too-cold`` means
``(temperature is cold) OR (temperature is too-cold)``. Identifiers may
contain hyphens; ``#`` starts a comment.

All names are resolved against a vocabulary of linguistic variables while
parsing, and the stored spelling is the declared one, so a parsed rule
base never contains unbound or misspelled references.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

from .errors import (
    ConsequentVariableError,
    RuleSyntaxError,
    UnknownTermError,
    UnknownVariableError,
)
from .membership import LinguisticVariable


# -- antecedent syntax tree ---------------------------------------------------

@dataclass(frozen=True, slots=True)
class Atom:
    variable: str
    term: str


@dataclass(frozen=True, slots=True)
class And:
    left: "AntecedentExpr"
    right: "AntecedentExpr"


@dataclass(frozen=True, slots=True)
class Or:
    left: "AntecedentExpr"
    right: "AntecedentExpr"


AntecedentExpr = Union[Atom, And, Or]


@dataclass(frozen=True, slots=True)
class Rule:
    """One IF-THEN rule. ``consequent`` is a (variable, term) pair."""

    id: int
    antecedent: AntecedentExpr
    consequent: tuple[str, str]


@dataclass(frozen=True, slots=True)
class RuleBase:
    """An ordered, fully bound set of rules over a fixed vocabulary."""

    input_vars: tuple[LinguisticVariable, ...]
    output_var: LinguisticVariable
    rules: tuple[Rule, ...]

    def __post_init__(self):
        object.__setattr__(self, "input_vars", tuple(self.input_vars))
        object.__setattr__(self, "rules", tuple(self.rules))
        if not self.rules:
            raise ValueError("a rule base needs at least one rule")
        for i, rule in enumerate(self.rules, start=1):
            if rule.id != i:
                raise ValueError(f"rule ids must be 1..n contiguous, got {rule.id} at position {i}")
        names = [v.name.lower() for v in self.input_vars] + [self.output_var.name.lower()]
        if len(set(names)) != len(names):
            raise ValueError("vocabulary variable names must be unique")


# -- tokenizer ----------------------------------------------------------------

_KEYWORDS = frozenset({"if", "then", "and", "or", "is"})
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*")


@dataclass(frozen=True, slots=True)
class _Token:
    kind: str  # "ident" | "kw" | "lparen" | "rparen" | "end" | "eof"
    text: str
    line: int
    col: int


def _tokenize(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    for lineno, raw in enumerate(source.split("\n"), start=1):
        line = raw.split("#", 1)[0]
        col = 0
        while col < len(line):
            ch = line[col]
            if ch.isspace():
                col += 1
                continue
            if ch == "(":
                tokens.append(_Token("lparen", "(", lineno, col + 1))
                col += 1
                continue
            if ch == ")":
                tokens.append(_Token("rparen", ")", lineno, col + 1))
                col += 1
                continue
            if ch == ";":
                tokens.append(_Token("end", ";", lineno, col + 1))
                col += 1
                continue
            m = _IDENT_RE.match(line, col)
            if not m:
                raise RuleSyntaxError(f"unexpected character {ch!r}", lineno, col + 1)
            text = m.group(0)
            kind = "kw" if text.lower() in _KEYWORDS else "ident"
            tokens.append(_Token(kind, text, lineno, m.start() + 1))
            col = m.end()
        tokens.append(_Token("end", "\n", lineno, len(raw) + 1))
    tokens.append(_Token("eof", "", len(source.split("\n")), 1))
    return tokens


# -- parser -------------------------------------------------------------------

class _Vocabulary:
    """Case-insensitive lookup that reports errors with source positions."""

    def __init__(self, input_vars: Sequence[LinguisticVariable], output_var: LinguisticVariable):
        self.input_vars = tuple(input_vars)
        self.output_var = output_var
        self._by_name = {v.name.lower(): v for v in (*input_vars, output_var)}
        if len(self._by_name) != len(input_vars) + 1:
            raise ValueError("vocabulary variable names must be unique")

    def resolve_input(self, tok: _Token) -> LinguisticVariable:
        var = self._by_name.get(tok.text.lower())
        if var is None:
            raise UnknownVariableError(f"unknown variable {tok.text!r}", tok.line, tok.col)
        return var

    def resolve_output(self, tok: _Token) -> LinguisticVariable:
        var = self._by_name.get(tok.text.lower())
        if var is None:
            raise UnknownVariableError(f"unknown variable {tok.text!r}", tok.line, tok.col)
        if var is not self.output_var:
            raise ConsequentVariableError(
                f"consequent must name the output variable {self.output_var.name!r}, "
                f"got input variable {var.name!r}",
                tok.line,
                tok.col,
            )
        return var

    @staticmethod
    def resolve_term(var: LinguisticVariable, tok: _Token) -> str:
        try:
            return var.term(tok.text).name
        except KeyError:
            raise UnknownTermError(
                f"variable {var.name!r} has no term {tok.text!r}", tok.line, tok.col
            ) from None


class _Parser:
    def __init__(self, tokens: list[_Token], vocab: _Vocabulary):
        self._tokens = tokens
        self._pos = 0
        self._vocab = vocab

    def _peek(self, ahead: int = 0) -> _Token:
        return self._tokens[min(self._pos + ahead, len(self._tokens) - 1)]

    def _next(self) -> _Token:
        tok = self._tokens[self._pos]
        if tok.kind != "eof":
            self._pos += 1
        return tok

    def _expect_kw(self, word: str) -> _Token:
        tok = self._next()
        if tok.kind != "kw" or tok.text.lower() != word:
            raise RuleSyntaxError(f"expected {word.upper()!r}, got {tok.text!r}", tok.line, tok.col)
        return tok

    def _expect_ident(self, what: str) -> _Token:
        tok = self._next()
        if tok.kind != "ident":
            raise RuleSyntaxError(f"expected {what}, got {tok.text!r}", tok.line, tok.col)
        return tok

    def _is_kw(self, tok: _Token, word: str) -> bool:
        return tok.kind == "kw" and tok.text.lower() == word

    def parse_rules(self) -> list[tuple[AntecedentExpr, tuple[str, str]]]:
        parsed = []
        while True:
            while self._peek().kind == "end":
                self._next()
            if self._peek().kind == "eof":
                break
            parsed.append(self._parse_rule())
            tok = self._peek()
            if tok.kind not in ("end", "eof"):
                raise RuleSyntaxError(f"expected end of rule, got {tok.text!r}", tok.line, tok.col)
        return parsed

    def _parse_rule(self) -> tuple[AntecedentExpr, tuple[str, str]]:
        self._expect_kw("if")
        expr = self._parse_disj()
        self._expect_kw("then")
        var_tok = self._expect_ident("output variable")
        out_var = self._vocab.resolve_output(var_tok)
        self._expect_kw("is")
        term_tok = self._expect_ident("output term")
        term = self._vocab.resolve_term(out_var, term_tok)
        return expr, (out_var.name, term)

    def _parse_disj(self) -> AntecedentExpr:
        node = self._parse_conj()
        while self._is_kw(self._peek(), "or"):
            self._next()
            node = Or(node, self._parse_conj())
        return node

    def _parse_conj(self) -> AntecedentExpr:
        node = self._parse_atom()
        while self._is_kw(self._peek(), "and"):
            self._next()
            node = And(node, self._parse_atom())
        return node

    def _parse_atom(self) -> AntecedentExpr:
        tok = self._peek()
        if tok.kind == "lparen":
            self._next()
            expr = self._parse_disj()
            closing = self._next()
            if closing.kind != "rparen":
                raise RuleSyntaxError(f"expected ')', got {closing.text!r}", closing.line, closing.col)
            return expr
        var_tok = self._expect_ident("variable")
        var = self._vocab.resolve_input(var_tok)
        self._expect_kw("is")
        term_tok = self._expect_ident("term")
        node: AntecedentExpr = Atom(var.name, self._vocab.resolve_term(var, term_tok))
        # Shorthand: "x is a OR b" distributes x over the bare terms. A bare
        # identifier after OR (one not itself followed by IS) is such a term.
        while (
            self._is_kw(self._peek(), "or")
            and self._peek(1).kind == "ident"
            and not self._is_kw(self._peek(2), "is")
        ):
            self._next()
            extra = self._expect_ident("term")
            node = Or(node, Atom(var.name, self._vocab.resolve_term(var, extra)))
        return node


def parse_rules(
    source: str,
    input_vars: Sequence[LinguisticVariable],
    output_var: LinguisticVariable,
) -> RuleBase:
    """Parse rule text into a bound :class:`RuleBase`.

    Raises :class:`~fuzzytherm.errors.RuleSyntaxError` on malformed text and
    the bind-error subclasses when names do not resolve; every message
    carries a ``line:col`` prefix.
    """
    vocab = _Vocabulary(input_vars, output_var)
    parsed = _Parser(_tokenize(source), vocab).parse_rules()
    if not parsed:
        raise RuleSyntaxError("no rules found", 1, 1)
    rules = tuple(
        Rule(id=i, antecedent=expr, consequent=consequent)
        for i, (expr, consequent) in enumerate(parsed, start=1)
    )
    return RuleBase(input_vars=tuple(input_vars), output_var=output_var, rules=rules)


# -- serialization ------------------------------------------------------------

def _expr_text(expr: AntecedentExpr) -> str:
    if isinstance(expr, Atom):
        return f"({expr.variable} IS {expr.term})"
    op = "AND" if isinstance(expr, And) else "OR"
    return f"({_expr_text(expr.left)} {op} {_expr_text(expr.right)})"


def serialize_rulebase(rb: RuleBase) -> str:
    """Canonical text form: fully parenthesized, uppercase keywords,
    names in declaration casing, one rule per line, trailing newline.

    ``parse_rules`` reads the result back to a structurally identical rule
    base, and serializing again reproduces the exact bytes.
    """
    lines = [
        f"IF {_expr_text(r.antecedent)} THEN {r.consequent[0]} IS {r.consequent[1]}"
        for r in rb.rules
    ]
    return "\n".join(lines) + "\n"


# -- rule matrices ------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class RuleMatrix:
    """A 2-D rule grid: cell (i, j) names the output term commanded when
    ``row_var`` is ``row_terms[i]`` and ``col_var`` is ``col_terms[j]``."""

    row_var: str
    col_var: str
    out_var: str
    row_terms: tuple[str, ...]
    col_terms: tuple[str, ...]
    cells: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "row_terms", tuple(self.row_terms))
        object.__setattr__(self, "col_terms", tuple(self.col_terms))
        object.__setattr__(self, "cells", tuple(tuple(row) for row in self.cells))
        if len(self.cells) != len(self.row_terms):
            raise ValueError(
                f"matrix has {len(self.cells)} rows but {len(self.row_terms)} row terms"
            )
        for i, row in enumerate(self.cells):
            if len(row) != len(self.col_terms):
                raise ValueError(
                    f"matrix row {i} has {len(row)} cells but there are {len(self.col_terms)} column terms"
                )


def matrix_to_rules(
    m: RuleMatrix,
    input_vars: Sequence[LinguisticVariable],
    output_var: LinguisticVariable,
) -> RuleBase:
    """Expand a matrix into one AND rule per cell, row-major, ids 1..n."""
    vocab = _Vocabulary(input_vars, output_var)

    def _var(name: str) -> LinguisticVariable:
        return vocab.resolve_input(_Token("ident", name, 0, 0))

    row_var = _var(m.row_var)
    col_var = _var(m.col_var)
    out_var = vocab.resolve_output(_Token("ident", m.out_var, 0, 0))
    row_terms = [vocab.resolve_term(row_var, _Token("ident", t, 0, 0)) for t in m.row_terms]
    col_terms = [vocab.resolve_term(col_var, _Token("ident", t, 0, 0)) for t in m.col_terms]

    rules = []
    rule_id = 1
    for i, r_term in enumerate(row_terms):
        for j, c_term in enumerate(col_terms):
            cell = vocab.resolve_term(out_var, _Token("ident", m.cells[i][j], 0, 0))
            rules.append(
                Rule(
                    id=rule_id,
                    antecedent=And(Atom(row_var.name, r_term), Atom(col_var.name, c_term)),
                    consequent=(out_var.name, cell),
                )
            )
            rule_id += 1
    return RuleBase(input_vars=tuple(input_vars), output_var=output_var, rules=tuple(rules))


def matrix_to_dict(m: RuleMatrix) -> dict:
    return {
        "row_var": m.row_var,
        "col_var": m.col_var,
        "out": m.out_var,
        "rows": list(m.row_terms),
        "cols": list(m.col_terms),
        "cells": [list(row) for row in m.cells],
    }


def matrix_from_dict(doc: Mapping) -> RuleMatrix:
    """Read the JSON matrix form: rows/cols list the terms, ``out`` names
    the output variable, ``row_var``/``col_var`` name the two inputs."""
    for key in ("row_var", "col_var", "out", "rows", "cols", "cells"):
        if key not in doc:
            raise ValueError(f"rule matrix document is missing key {key!r}")
    return RuleMatrix(
        row_var=doc["row_var"],
        col_var=doc["col_var"],
        out_var=doc["out"],
        row_terms=tuple(doc["rows"]),
        col_terms=tuple(doc["cols"]),
        cells=tuple(tuple(row) for row in doc["cells"]),
    )
