"""A small text format for algebras and the data built on them.

Example::

    algebra C {
      gen x2L:2; gen x2R:2; gen y3:3;
      d y3 = x2L*x2R;
    }
    config F on C { xL = x2L; xR = x2R; y = y3; }
    element w = (y3 + e1L*x2R)*xi^-1;
    run hori --dir LR --element w;

Expressions use ``+ - *``, unary minus, ``^`` with an integer exponent
(possibly negative), parentheses, integer and ``p/q`` literals.  Inside an
element, ``xi`` stands for the inverted generator of whichever gerbe the
element is read in.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Union

from .algebra import ANY_DEGREE, AlgebraError, GradedElement, degree_of, make_algebra
from .dgca import FreeDGCA
from .laurent import LaurentContext, LaurentElement
from .tduality import RESERVED_NAMES, TDualityConfig

__all__ = [
    "Diagnostic",
    "Document",
    "DslError",
    "Model",
    "Span",
    "elaborate",
    "evaluate",
    "parse_document",
    "parse_expression",
    "render_document",
    "render_expr",
]

KEYWORDS = {"algebra", "gen", "d", "config", "on", "element", "run"}
XI_ALIAS = "xi"


@dataclass(frozen=True)
class Span:
    line: int
    col: int
    end_line: int
    end_col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}-{self.end_line}:{self.end_col}"

    def to(self, other: "Span") -> "Span":
        return Span(self.line, self.col, other.end_line, other.end_col)


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    message: str
    span: Span

    def __str__(self) -> str:
        return f"{self.span.line}:{self.span.col}: {self.severity}: {self.message}"

    def to_dict(self) -> dict:
        s = self.span
        return {"severity": self.severity, "message": self.message,
                "span": [s.line, s.col, s.end_line, s.end_col]}


class DslError(Exception):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


def _error(message: str, span: Span) -> DslError:
    return DslError([Diagnostic("error", message, span)])


# -- AST -------------------------------------------------------------------

def _span_field():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Num:
    value: Fraction
    span: Span = _span_field()


@dataclass(frozen=True)
class Name:
    id: str
    span: Span = _span_field()


@dataclass(frozen=True)
class Neg:
    operand: "Expr"
    span: Span = _span_field()


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    span: Span = _span_field()


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int
    span: Span = _span_field()


Expr = Union[Num, Name, Neg, BinOp, Pow]


@dataclass(frozen=True)
class GenDecl:
    name: str
    degree: int
    span: Span = _span_field()


@dataclass(frozen=True)
class DiffDecl:
    name: str
    expr: Expr
    span: Span = _span_field()


@dataclass(frozen=True)
class AlgebraDef:
    name: str
    items: tuple
    span: Span = _span_field()


@dataclass(frozen=True)
class ConfigDef:
    name: str
    algebra: str
    xL: Expr
    xR: Expr
    y: Expr
    span: Span = _span_field()


@dataclass(frozen=True)
class ElementDef:
    name: str
    expr: Expr
    span: Span = _span_field()


@dataclass(frozen=True)
class CommandDef:
    name: str
    args: tuple
    span: Span = _span_field()


@dataclass(frozen=True)
class Document:
    blocks: tuple


# -- lexer -----------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: Span


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<RATIONAL>\d+/\d+)
  | (?P<INT>\d+)
  | (?P<OPTION>--[A-Za-z][A-Za-z0-9_-]*)
  | (?P<IDENT>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<PUNCT>[{}();:=+\-*^])
""", re.VERBOSE)


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise _error(f"unexpected character {text[pos]!r}", Span(line, col, line, col + 1))
        kind = m.lastgroup
        end = m.end()
        if kind == "nl":
            line += 1
            line_start = end
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), Span(line, col, line, col + (end - pos))))
        pos = end
    col = pos - line_start + 1
    tokens.append(Token("EOF", "", Span(line, col, line, col + 1)))
    return tokens


# -- parser ----------------------------------------------------------------

_BINARY_PREC = {"+": 1, "-": 1, "*": 2}
_NEG_PREC = 3
_POW_PREC = 4


def _describe(tok: Token) -> str:
    return "end of input" if tok.kind == "EOF" else f"'{tok.text}'"


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind != "EOF":
            self.pos += 1
        return t

    def unexpected(self) -> DslError:
        return _error(f"unexpected token {_describe(self.tok)}", self.tok.span)

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind not in ("PUNCT", "IDENT"):
            raise _error(f"unexpected token {_describe(self.tok)}, expected '{text}'", self.tok.span)
        return self.advance()

    def ident(self) -> Token:
        if self.tok.kind != "IDENT":
            raise _error(f"unexpected token {_describe(self.tok)}, expected a name", self.tok.span)
        return self.advance()

    def name(self) -> Token:
        t = self.ident()
        if t.text in KEYWORDS:
            raise _error(f"keyword '{t.text}' cannot be used as a name", t.span)
        return t

    def integer(self) -> Token:
        if self.tok.kind != "INT":
            raise _error(f"unexpected token {_describe(self.tok)}, expected an integer", self.tok.span)
        return self.advance()

    # document := block*
    def document(self) -> Document:
        blocks = []
        while self.tok.kind != "EOF":
            t = self.tok
            if t.kind != "IDENT":
                raise self.unexpected()
            if t.text == "algebra":
                blocks.append(self.algebra())
            elif t.text == "config":
                blocks.append(self.config())
            elif t.text == "element":
                blocks.append(self.element())
            elif t.text == "run":
                blocks.append(self.command())
            else:
                raise _error(f"unexpected token {_describe(t)}, expected a block keyword", t.span)
        return Document(tuple(blocks))

    def algebra(self) -> AlgebraDef:
        start = self.expect("algebra")
        name = self.name()
        self.expect("{")
        items = []
        while not (self.tok.kind == "PUNCT" and self.tok.text == "}"):
            t = self.tok
            if t.kind == "IDENT" and t.text == "gen":
                self.advance()
                g = self.name()
                self.expect(":")
                deg = self.integer()
                end = self.expect(";")
                items.append(GenDecl(g.text, int(deg.text), t.span.to(end.span)))
            elif t.kind == "IDENT" and t.text == "d":
                self.advance()
                g = self.name()
                self.expect("=")
                e = self.expr()
                end = self.expect(";")
                items.append(DiffDecl(g.text, e, t.span.to(end.span)))
            else:
                raise _error(f"unexpected token {_describe(t)}, expected 'gen', 'd' or '}}'", t.span)
        end = self.expect("}")
        return AlgebraDef(name.text, tuple(items), start.span.to(end.span))

    def config(self) -> ConfigDef:
        start = self.expect("config")
        name = self.name()
        self.expect("on")
        alg = self.name()
        self.expect("{")
        clauses: dict[str, Expr] = {}
        while not (self.tok.kind == "PUNCT" and self.tok.text == "}"):
            key = self.ident()
            if key.text not in ("xL", "xR", "y"):
                raise _error(f"unexpected token '{key.text}', expected 'xL', 'xR' or 'y'", key.span)
            if key.text in clauses:
                raise _error(f"duplicate clause '{key.text}'", key.span)
            self.expect("=")
            clauses[key.text] = self.expr()
            self.expect(";")
        end = self.expect("}")
        span = start.span.to(end.span)
        missing = [k for k in ("xL", "xR", "y") if k not in clauses]
        if missing:
            raise _error(f"config {name.text} is missing clause(s) {', '.join(missing)}", span)
        return ConfigDef(name.text, alg.text, clauses["xL"], clauses["xR"], clauses["y"], span)

    def element(self) -> ElementDef:
        start = self.expect("element")
        name = self.name()
        self.expect("=")
        e = self.expr()
        end = self.expect(";")
        return ElementDef(name.text, e, start.span.to(end.span))

    def command(self) -> CommandDef:
        start = self.expect("run")
        name = self.ident().text
        # hyphenated command names such as compose-check
        while self._adjacent_hyphen():
            self.advance()
            name += "-" + self.ident().text
        args = []
        while self.tok.kind in ("IDENT", "INT", "OPTION") or self._adjacent_hyphen():
            if self.tok.kind == "PUNCT":
                self.advance()
                args.append("-" + self.integer().text)
            else:
                args.append(self.advance().text)
        end = self.expect(";")
        return CommandDef(name, tuple(args), start.span.to(end.span))

    def _adjacent_hyphen(self) -> bool:
        t, nxt = self.tok, self.tokens[self.pos + 1] if self.pos + 1 < len(self.tokens) else None
        return (t.kind == "PUNCT" and t.text == "-" and nxt is not None
                and nxt.kind in ("IDENT", "INT")
                and nxt.span.line == t.span.line and nxt.span.col == t.span.end_col)

    # precedence climbing
    def expr(self, min_prec: int = 1) -> Expr:
        left = self.unary()
        while self.tok.kind == "PUNCT" and self.tok.text in _BINARY_PREC:
            op = self.tok.text
            prec = _BINARY_PREC[op]
            if prec < min_prec:
                break
            self.advance()
            right = self.expr(prec + 1)
            left = BinOp(op, left, right, left.span.to(right.span))
        return left

    def unary(self) -> Expr:
        if self.tok.kind == "PUNCT" and self.tok.text == "-":
            t = self.advance()
            operand = self.unary()
            return Neg(operand, t.span.to(operand.span))
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.tok.kind == "PUNCT" and self.tok.text == "^":
            self.advance()
            sign = 1
            if self.tok.kind == "PUNCT" and self.tok.text == "-":
                self.advance()
                sign = -1
            e = self.integer()
            return Pow(base, sign * int(e.text), base.span.to(e.span))
        return base

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "INT":
            self.advance()
            return Num(Fraction(int(t.text)), t.span)
        if t.kind == "RATIONAL":
            self.advance()
            p, q = t.text.split("/")
            if int(q) == 0:
                raise _error("zero denominator", t.span)
            return Num(Fraction(int(p), int(q)), t.span)
        if t.kind == "IDENT":
            if t.text in KEYWORDS:
                raise _error(f"unexpected keyword '{t.text}' in expression", t.span)
            self.advance()
            return Name(t.text, t.span)
        if t.kind == "PUNCT" and t.text == "(":
            self.advance()
            e = self.expr()
            end = self.expect(")")
            return _respan(e, t.span.to(end.span))
        raise self.unexpected()


def _respan(e: Expr, span: Span) -> Expr:
    return type(e)(**{**{k: getattr(e, k) for k in e.__dataclass_fields__}, "span": span})


def parse_document(text: str) -> Document:
    return _Parser(text).document()


def parse_expression(text: str) -> Expr:
    p = _Parser(text)
    e = p.expr()
    if p.tok.kind != "EOF":
        raise p.unexpected()
    return e


# -- rendering -------------------------------------------------------------

def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _BINARY_PREC[e.op]
    if isinstance(e, Neg):
        return _NEG_PREC
    if isinstance(e, Pow):
        return _POW_PREC
    return 5


def render_expr(e: Expr) -> str:
    if isinstance(e, Num):
        v = e.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(e, Name):
        return e.id
    if isinstance(e, Neg):
        inner = render_expr(e.operand)
        return f"-{inner}" if _prec(e.operand) >= _NEG_PREC else f"-({inner})"
    if isinstance(e, Pow):
        base = render_expr(e.base)
        if _prec(e.base) <= _POW_PREC:
            base = f"({base})"
        return f"{base}^{e.exponent}"
    p = _BINARY_PREC[e.op]
    left = render_expr(e.left)
    if _prec(e.left) < p:
        left = f"({left})"
    right = render_expr(e.right)
    if _prec(e.right) <= p:
        right = f"({right})"
    sep = "*" if e.op == "*" else f" {e.op} "
    return f"{left}{sep}{right}"


def render_document(doc: Document) -> str:
    out = []
    for b in doc.blocks:
        if isinstance(b, AlgebraDef):
            out.append(f"algebra {b.name} {{")
            for it in b.items:
                if isinstance(it, GenDecl):
                    out.append(f"  gen {it.name}:{it.degree};")
                else:
                    out.append(f"  d {it.name} = {render_expr(it.expr)};")
            out.append("}")
        elif isinstance(b, ConfigDef):
            out.append(f"config {b.name} on {b.algebra} {{")
            out.append(f"  xL = {render_expr(b.xL)};")
            out.append(f"  xR = {render_expr(b.xR)};")
            out.append(f"  y = {render_expr(b.y)};")
            out.append("}")
        elif isinstance(b, ElementDef):
            out.append(f"element {b.name} = {render_expr(b.expr)};")
        else:
            out.append(" ".join(("run", b.name) + b.args) + ";")
    return "\n".join(out) + "\n"


# -- evaluation ------------------------------------------------------------

def evaluate(e: Expr, lookup: Callable[[Name], object]):
    """Evaluate with ``lookup`` resolving names; values need ``+ - * **``."""
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Name):
        return lookup(e)
    if isinstance(e, Neg):
        return -evaluate(e.operand, lookup)
    if isinstance(e, Pow):
        base = evaluate(e.base, lookup)
        try:
            if isinstance(base, Fraction):
                if not base and e.exponent < 0:
                    raise AlgebraError("division by zero")
                return base ** e.exponent
            return base ** e.exponent
        except AlgebraError as exc:
            raise _error(str(exc), e.span) from None
    left = evaluate(e.left, lookup)
    right = evaluate(e.right, lookup)
    try:
        if e.op == "+":
            return left + right
        if e.op == "-":
            return left - right
        return left * right
    except AlgebraError as exc:
        raise _error(str(exc), e.span) from None


def _names(e: Expr):
    if isinstance(e, Name):
        yield e
    elif isinstance(e, Neg):
        yield from _names(e.operand)
    elif isinstance(e, Pow):
        yield from _names(e.base)
    elif isinstance(e, BinOp):
        yield from _names(e.left)
        yield from _names(e.right)


def _graded_lookup(A: FreeDGCA):
    def lookup(n: Name) -> GradedElement:
        if n.id not in A.signature:
            raise _error(f"unknown identifier '{n.id}'", n.span)
        return A.gen(n.id)
    return lookup


def _as_graded(A: FreeDGCA, v) -> GradedElement:
    return v if isinstance(v, GradedElement) else A.element(v)


@dataclass
class Model:
    """Result of elaborating a document."""

    document: Document
    algebras: dict = field(default_factory=dict)
    configs: dict = field(default_factory=dict)
    elements: dict = field(default_factory=dict)
    commands: list = field(default_factory=list)

    def config(self, name: str | None = None) -> TDualityConfig:
        if not self.configs:
            raise KeyError("document declares no config")
        if name is None:
            return list(self.configs.values())[-1]
        if name not in self.configs:
            raise KeyError(f"unknown config {name!r}")
        return self.configs[name]

    def element_in(self, name: str, ctx: LaurentContext) -> LaurentElement:
        """Evaluate a named element inside a Laurent context; ``xi`` means ``ctx.xi``."""
        if name not in self.elements:
            raise KeyError(f"unknown element {name!r}")

        def lookup(n: Name):
            if n.id == XI_ALIAS or n.id == ctx.xi:
                return ctx.xi_power(1)
            if n.id in ctx.signature:
                return ctx.gen(n.id)
            raise _error(f"unknown identifier '{n.id}' in {ctx.algebra.name}", n.span)

        v = evaluate(self.elements[name].expr, lookup)
        return v if isinstance(v, LaurentElement) else ctx.element({0: v})


def elaborate(doc: Document) -> Model:
    """Resolve names and check degrees while building the model."""
    model = Model(doc)
    diags: list[Diagnostic] = []
    for block in doc.blocks:
        try:
            if isinstance(block, AlgebraDef):
                if block.name in model.algebras:
                    raise _error(f"duplicate algebra '{block.name}'", block.span)
                model.algebras[block.name] = _elaborate_algebra(block)
            elif isinstance(block, ConfigDef):
                if block.name in model.configs:
                    raise _error(f"duplicate config '{block.name}'", block.span)
                model.configs[block.name] = _elaborate_config(block, model)
            elif isinstance(block, ElementDef):
                if block.name in model.elements:
                    raise _error(f"duplicate element '{block.name}'", block.span)
                known = set(RESERVED_NAMES) | {XI_ALIAS}
                for A in model.algebras.values():
                    known.update(A.signature.names)
                for n in _names(block.expr):
                    if n.id not in known:
                        raise _error(f"unknown identifier '{n.id}'", n.span)
                model.elements[block.name] = block
            else:
                model.commands.append(block)
        except DslError as exc:
            diags.extend(exc.diagnostics)
    if diags:
        raise DslError(diags)
    return model


def _elaborate_algebra(block: AlgebraDef) -> FreeDGCA:
    gens: list[tuple[str, int]] = []
    seen: dict[str, GenDecl] = {}
    for it in block.items:
        if isinstance(it, GenDecl):
            if it.name in seen:
                raise _error(f"duplicate generator '{it.name}'", it.span)
            if it.name in RESERVED_NAMES or it.name == XI_ALIAS:
                raise _error(f"generator name '{it.name}' is reserved", it.span)
            if it.degree < 1:
                raise _error(f"generator '{it.name}' must have positive degree", it.span)
            seen[it.name] = it
            gens.append((it.name, it.degree))
    sig = make_algebra(gens)
    A0 = FreeDGCA(sig, {}, block.name)
    diff: dict[str, GradedElement] = {}
    lookup = _graded_lookup(A0)
    for it in block.items:
        if isinstance(it, DiffDecl):
            if it.name not in seen:
                raise _error(f"unknown identifier '{it.name}'", it.span)
            if it.name in diff:
                raise _error(f"duplicate differential for '{it.name}'", it.span)
            val = _as_graded(A0, evaluate(it.expr, lookup))
            deg = degree_of(val)
            want = seen[it.name].degree + 1
            if deg != ANY_DEGREE and deg != want:
                raise _error(f"degree mismatch: d {it.name} has degree {deg}, expected {want}", it.span)
            diff[it.name] = val
    return FreeDGCA(sig, diff, block.name)


def _elaborate_config(block: ConfigDef, model: Model) -> TDualityConfig:
    if block.algebra not in model.algebras:
        raise _error(f"unknown algebra '{block.algebra}'", block.span)
    A = model.algebras[block.algebra]
    lookup = _graded_lookup(A)
    vals = {}
    for key, want in (("xL", 2), ("xR", 2), ("y", 3)):
        expr = getattr(block, key)
        v = _as_graded(A, evaluate(expr, lookup))
        deg = degree_of(v)
        if deg != ANY_DEGREE and deg != want:
            raise _error(f"degree mismatch: {key} has degree {deg}, expected {want}", expr.span)
        vals[key] = v
    if A.differential(vals["xL"]):
        raise _error(f"xL = {vals['xL']} is not closed: d(xL) = {A.differential(vals['xL'])}", block.xL.span)
    if A.differential(vals["xR"]):
        raise _error(f"xR = {vals['xR']} is not closed: d(xR) = {A.differential(vals['xR'])}", block.xR.span)
    dy = A.differential(vals["y"])
    if dy != vals["xL"] * vals["xR"]:
        raise _error(f"relation d(y) = xL*xR fails: d(y) = {dy}, xL*xR = {vals['xL'] * vals['xR']}",
                     block.y.span)
    try:
        return TDualityConfig(A, vals["xL"], vals["xR"], vals["y"], block.name)
    except AlgebraError as exc:
        raise _error(str(exc), block.span) from None
