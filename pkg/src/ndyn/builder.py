"""Scheme DSL, operator assembly on p(z) = z^d - c, and the method catalog.

A scheme is a short program describing one step of an iterative root finder:

    y = z - p(z)/p'(z);
    next = y - p(y)/p'(z);

Statements bind intermediate values; the last statement must bind ``next``.
``p`` stands for the target polynomial z^d - c and apostrophes take its
derivatives, so a single scheme text serves every degree d and constant c.
Instantiating a scheme substitutes the explicit polynomial and performs the
rational arithmetic bottom-up, producing the iteration operator as a reduced
RationalMap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import (DivisionByZeroMap, SchemeSyntaxError, UnboundIdentifier,
                     UnknownMethod, ZeroC, ZeroDenominator)
from .conjugate import (OperatorForm, check_lambda_odd, extract_normal_form,
                        make_form, mobius_conjugate, standard_tau)
from .poly import (Polynomial, RationalMap, constant_map, identity_map,
                   poly_map, rat_combine)

__all__ = [
    "Var", "Const", "Param", "Deriv", "BinOp", "Ref", "Scheme",
    "SchemeContext", "CatalogEntry", "parse_scheme", "instantiate",
    "evaluate_scheme", "check_lambda_odd", "check_scheme_lambda_odd",
    "check_infinity_simple", "catalog", "catalog_entry", "catalog_names",
    "build_operator", "conjugated_form", "target_derivative",
]

# --------------------------------------------------------------------------
# AST
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    """The iteration variable z."""


@dataclass(frozen=True)
class Const:
    value: complex


@dataclass(frozen=True)
class Param:
    name: str


@dataclass(frozen=True)
class Deriv:
    """p^(order) applied to a subexpression."""
    order: int
    arg: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str  # + - * /
    lhs: "Node"
    rhs: "Node"


@dataclass(frozen=True)
class Ref:
    """Reference to a previously bound step."""
    name: str


Node = object


@dataclass(frozen=True)
class Scheme:
    """Ordered step bindings; the last one is named ``next``."""
    steps: tuple  # of (name, Node)

    @property
    def params(self) -> tuple:
        found: list[str] = []

        def walk(node):
            if isinstance(node, Param) and node.name not in found:
                found.append(node.name)
            elif isinstance(node, Deriv):
                walk(node.arg)
            elif isinstance(node, BinOp):
                walk(node.lhs)
                walk(node.rhs)

        for _, expr in self.steps:
            walk(expr)
        return tuple(found)


# --------------------------------------------------------------------------
# lexer / parser
# --------------------------------------------------------------------------

_OPS = set("+-*/=();'")


class _Token:
    __slots__ = ("kind", "text", "value", "line", "col")

    def __init__(self, kind, text, line, col, value=None):
        self.kind = kind      # ident | number | op | eof
        self.text = text
        self.value = value
        self.line = line
        self.col = col


def _lex(text: str) -> list:
    tokens = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            col += 1
            i += 1
            continue
        if ch == "#":
            while i < len(text) and text[i] != "\n":
                i += 1
            continue
        start_col = col
        if ch.isdigit() or (ch == "." and i + 1 < len(text) and text[i + 1].isdigit()):
            j = i
            seen_dot = False
            while j < len(text) and (text[j].isdigit() or (text[j] == "." and not seen_dot)):
                if text[j] == ".":
                    seen_dot = True
                j += 1
            literal = text[i:j]
            imag = j < len(text) and text[j] == "i"
            if imag:
                j += 1
            value = complex(0.0, float(literal)) if imag else complex(float(literal))
            tokens.append(_Token("number", text[i:j], line, start_col, value))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("ident", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch in _OPS:
            tokens.append(_Token("op", ch, line, start_col))
            col += 1
            i += 1
            continue
        raise SchemeSyntaxError(line, col, f"unexpected character {ch!r}")
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0
        self.bound: list[str] = []

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str) -> _Token:
        tok = self.peek()
        if tok.kind != "op" or tok.text != op:
            raise SchemeSyntaxError(tok.line, tok.col,
                                    f"expected {op!r}, found {tok.text or 'end of input'!r}")
        return self.advance()

    def parse(self) -> Scheme:
        steps = []
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.kind != "ident":
                raise SchemeSyntaxError(tok.line, tok.col,
                                        "a statement must start with a name")
            name = self.advance().text
            if name in ("z", "p"):
                raise SchemeSyntaxError(tok.line, tok.col,
                                        f"{name!r} is reserved and cannot be rebound")
            self.expect_op("=")
            expr = self.expr()
            self.expect_op(";")
            if name in self.bound:
                raise SchemeSyntaxError(tok.line, tok.col,
                                        f"step {name!r} is bound twice")
            self.bound.append(name)
            steps.append((name, expr))
        if not steps:
            tok = self.peek()
            raise SchemeSyntaxError(tok.line, tok.col, "empty scheme")
        if steps[-1][0] != "next":
            tok = self.peek()
            raise SchemeSyntaxError(tok.line, tok.col,
                                    "the last statement must bind 'next'")
        return Scheme(steps=tuple(steps))

    def expr(self) -> Node:
        node = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.advance().text
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Node:
        tok = self.peek()
        if tok.kind == "number":
            self.advance()
            return Const(tok.value)
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            return BinOp("*", Const(-1.0 + 0.0j), self.factor())
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect_op(")")
            return node
        if tok.kind == "ident":
            self.advance()
            name = tok.text
            if name == "z":
                return Var()
            if name == "p":
                order = 0
                while self.peek().kind == "op" and self.peek().text == "'":
                    self.advance()
                    order += 1
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Deriv(order, arg)
            nxt = self.peek()
            if nxt.kind == "op" and nxt.text == "(":
                raise UnboundIdentifier(name,
                                        f"line {tok.line}: only p can be applied")
            if nxt.kind == "op" and nxt.text == "'":
                raise SchemeSyntaxError(nxt.line, nxt.col,
                                        "derivatives apply only to p")
            if name in self.bound:
                return Ref(name)
            return Param(name)
        raise SchemeSyntaxError(tok.line, tok.col,
                                f"unexpected {tok.text or 'end of input'!r}")


def parse_scheme(text: str) -> Scheme:
    return _Parser(_lex(text)).parse()


# --------------------------------------------------------------------------
# instantiation
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SchemeContext:
    """Target polynomial z^d - c plus parameter bindings."""
    d: int
    c: complex
    bindings: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("degree d must be at least 2")
        if self.c == 0:
            raise ZeroC("the target family needs c != 0")


def target_derivative(d: int, c: complex, order: int) -> Polynomial:
    """The polynomial p^(order) for p(z) = z^d - c."""
    if order == 0:
        coeffs = [0.0] * (d + 1)
        coeffs[0] = -c
        coeffs[d] = 1.0
        return Polynomial(coeffs)
    if order > d:
        return Polynomial.zero()
    factor = math.perm(d, order)
    coeffs = [0.0] * (d - order + 1)
    coeffs[-1] = factor
    return Polynomial(coeffs)


def instantiate(node, ctx: SchemeContext) -> RationalMap:
    """Assemble the operator as a reduced rational map."""
    if isinstance(node, Scheme):
        env: dict[str, RationalMap] = {}
        for name, expr in node.steps:
            env[name] = _instantiate_expr(expr, ctx, env)
        return env["next"]
    return _instantiate_expr(node, ctx, {})


def _instantiate_expr(node, ctx: SchemeContext, env: dict) -> RationalMap:
    if isinstance(node, Var):
        return identity_map()
    if isinstance(node, Const):
        return constant_map(node.value)
    if isinstance(node, Param):
        if node.name not in ctx.bindings:
            raise UnboundIdentifier(node.name, "no binding supplied")
        return constant_map(complex(ctx.bindings[node.name]))
    if isinstance(node, Ref):
        return env[node.name]
    if isinstance(node, Deriv):
        inner = _instantiate_expr(node.arg, ctx, env)
        pk = target_derivative(ctx.d, ctx.c, node.order)
        return rat_combine("compose", poly_map(pk), inner)
    if isinstance(node, BinOp):
        lhs = _instantiate_expr(node.lhs, ctx, env)
        rhs = _instantiate_expr(node.rhs, ctx, env)
        opname = {"+": "add", "-": "sub", "*": "mul", "/": "div"}[node.op]
        if opname == "div" and rhs.is_zero():
            raise DivisionByZeroMap("a denominator reduced to the zero map")
        try:
            return rat_combine(opname, lhs, rhs)
        except ZeroDenominator as exc:
            raise DivisionByZeroMap(str(exc)) from exc
    raise TypeError(f"not a scheme node: {node!r}")


def evaluate_scheme(node, ctx: SchemeContext, z: complex) -> complex:
    """Pointwise evaluation of a scheme at a single z.

    Follows the same call-by-value step order as instantiate but never forms
    coefficient vectors, so it stays accurate for schemes whose expanded
    operator degree is large.
    """
    if isinstance(node, Scheme):
        env: dict[str, complex] = {}
        for name, expr in node.steps:
            env[name] = _eval_expr(expr, ctx, env, z)
        return env["next"]
    return _eval_expr(node, ctx, {}, z)


def _eval_expr(node, ctx: SchemeContext, env: dict, z: complex) -> complex:
    if isinstance(node, Var):
        return z
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Param):
        if node.name not in ctx.bindings:
            raise UnboundIdentifier(node.name, "no binding supplied")
        return complex(ctx.bindings[node.name])
    if isinstance(node, Ref):
        return env[node.name]
    if isinstance(node, Deriv):
        w = _eval_expr(node.arg, ctx, env, z)
        return complex(target_derivative(ctx.d, ctx.c, node.order)(w))
    if isinstance(node, BinOp):
        a = _eval_expr(node.lhs, ctx, env, z)
        b = _eval_expr(node.rhs, ctx, env, z)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        return a / b
    raise TypeError(f"not a scheme node: {node!r}")


def check_scheme_lambda_odd(node, ctx: SchemeContext, d: int,
                            trials: int = 50) -> bool:
    """Sampled d-th root-of-unity equivariance test, evaluated pointwise.

    Equivalent in exact arithmetic to check_lambda_odd on the instantiated
    map, but immune to the coefficient-level rounding that expanded
    high-degree operators accumulate.
    """
    import cmath

    import numpy as np
    rng = np.random.default_rng(0xA5C0FFEE + d)
    lams = [cmath.exp(2j * cmath.pi * j / d) for j in range(1, d)]
    done = 0
    attempts = 0
    while done < trials and attempts < 50 * trials + 100:
        attempts += 1
        z = complex(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0))
        if abs(z) < 0.1:
            continue
        try:
            v = evaluate_scheme(node, ctx, z)
            if abs(v) < 1e-6 or abs(v) > 1e6:
                continue
            for lam in lams:
                w = evaluate_scheme(node, ctx, lam * z)
                if abs(w - lam * v) > 1e-9 * (1.0 + abs(v)):
                    return False
        except ZeroDivisionError:
            continue
        done += 1
    return True


def check_infinity_simple(R: RationalMap) -> str:
    """How the operator treats infinity, read off the degree gap."""
    gap = R.num.degree - R.den.degree
    if gap == 1:
        return "simple"
    if gap >= 2:
        return "superattracting-at-inf"
    return "not-fixed"


# --------------------------------------------------------------------------
# catalog
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    params: tuple
    kind: str                      # "scheme" | "form"
    doc: str
    text: Optional[str] = None     # scheme source (kind == "scheme")
    nk: Optional[tuple] = None     # (n, k) of the conjugated d=2 operator
    form_fn: Optional[Callable] = None  # bindings -> OperatorForm (kind == "form")
    # linear coordinate used for stability regions, when one exists
    stability_param: Optional[str] = None
    stability_producer: Optional[Callable] = None  # t -> OperatorForm
    stability_note: str = ""

    @property
    def ast(self) -> Scheme:
        if self.kind != "scheme":
            raise UnknownMethod(f"{self.name} stores a conjugated form, not a scheme")
        return parse_scheme(self.text)


def _form_producer(name):
    def producer(t):
        return conjugated_form(name, _single_binding(name, t))
    return producer


def _single_binding(name, t):
    entry = catalog_entry(name)
    if not entry.params:
        return {}
    return {entry.params[0]: t}


_SCHEME_TEXTS = {
    "newton": "next = z - p(z)/p'(z);",
    "traub": ("y = z - p(z)/p'(z);\n"
              "next = y - p(y)/p'(z);"),
    "steffensen": "next = z - p(z)*p(z) / (p(z + p(z)) - p(z));",
    "traub-steffensen": ("w = z + gamma*p(z);\n"
                         "next = z - gamma*p(z)*p(z) / (p(w) - p(z));"),
    "ostrowski": ("y = z - p(z)/p'(z);\n"
                  "next = y - p(y)/p'(z) * p(z)/(p(z) - 2*p(y));"),
    "king": ("y = z - p(z)/p'(z);\n"
             "next = y - p(y)/p'(z) * (p(z) + (beta + 2)*p(y))"
             "/(p(z) + beta*p(y));"),
    "jarratt": ("y = z - (2/3) * p(z)/p'(z);\n"
                "j = (3*p'(y) + p'(z)) / (2*(3*p'(y) - p'(z)));\n"
                "next = z - j * p(z)/p'(z);"),
    "wang": ("y = z - (2/3) * p(z)/p'(z);\n"
             "j = (3*p'(y) + p'(z)) / (6*p'(y) - 2*p'(z));\n"
             "w = z - j * p(z)/p'(z);\n"
             "next = w - p(w)/p'(w);"),
    "amat": ("u = p(z)/p'(z);\n"
             "h = (p'(z - (2/3)*u) - p'(z)) / p'(z);\n"
             "next = z - u + (3/4)*u*h * (1 + beta*h)"
             "/(1 + (3/2 + beta)*h);"),
    "chun": ("y = z - (2/3) * p(z)/p'(z);\n"
             "j = (3*p'(y) + p'(z)) / (2*(3*p'(y) - p'(z)));\n"
             "w = z - j * p(z)/p'(z);\n"
             "next = w - p(w) / (alpha*(w - z)*(w - y)"
             " + (3/2)*j*p'(y) + (1 - (3/2)*j)*p'(z));"),
    "chebyshev-halley": ("y = z - p(z)/p'(z);\n"
                         "L = p(z)*p''(z) / (p'(z)*p'(z));\n"
                         "next = y - (1/2) * L/(1 - alpha*L) * p(z)/p'(z);"),
}


def _collapsing_form(n, a):
    """make_form with the k-collapse applied: a vanishing bottom coefficient
    of P pulls a factor z out of it, which joins the z^n block."""
    a = [complex(v) for v in a]
    scale = max([1.0] + [abs(v) for v in a])
    while a and abs(a[-1]) <= 1e-14 * scale:
        a.pop()
        n += 1
    return make_form(n, tuple(a))


def _cfamily_form(bindings):
    c = complex(bindings["c"])
    return _collapsing_form(3, (4.0, 5.0, 2.0 - 4.0 * c))


def _m4_form(bindings):
    beta = complex(bindings["beta"])
    if beta == 0:
        raise ZeroDenominator("the weight 1/beta requires beta != 0")
    return _collapsing_form(4, (6.0, 14.0, 14.0, (5.0 * beta - 1.0) / beta))


def _m4_linear(alpha):
    return _collapsing_form(4, (6.0, 14.0, 14.0, complex(alpha)))


def _os2_form(bindings):
    a = complex(bindings["a"])
    return _collapsing_form(5, (6.0 + a, 14.0 + 4.0 * a, 14.0 + 5.0 * a))


def _os3_form(bindings):
    a = complex(bindings["a"])
    disc = 196.0 + 76.0 * a + 9.0 * a * a
    if disc == 0:
        raise ZeroDenominator("coefficient denominator vanishes at this a")
    a4 = 5.0 * (14.0 + 5.0 * a) ** 2 / disc
    return _collapsing_form(4, (6.0 + a, 14.0 + 4.0 * a, 14.0 + 5.0 * a, a4))


def _os4_form(bindings):
    b = complex(bindings["b"])
    return _collapsing_form(4, (2.0, -2.0, -6.0, 4.0 * b - 3.0))


def _os5_form(bindings):
    a = complex(bindings["a"])
    # Pre-reduction shape: the coefficient sum vanishes identically, so the
    # reconstructed map always loses the shared factor (z - 1) and keeps a
    # global sign -1.
    return _collapsing_form(4, (6.0 + a, 14.0 + 4.0 * a, 14.0 + 5.0 * a,
                                -35.0 - 10.0 * a))


def _entries():
    e = []

    def scheme(name, params, nk, doc, stability=True):
        producer = _form_producer(name) if (stability and len(params) <= 1) else None
        e.append(CatalogEntry(
            name=name, params=params, kind="scheme", doc=doc,
            text=_SCHEME_TEXTS[name], nk=nk,
            stability_param=params[0] if (producer and params) else None,
            stability_producer=producer))

    scheme("newton", (), (2, 0), "tangent-line step, quadratic convergence")
    scheme("traub", (), (3, 1),
           "two Newton steps reusing the first derivative, third order")
    scheme("steffensen", (), None,
           "derivative-free step using a forward difference of p",
           stability=False)
    scheme("traub-steffensen", ("gamma",), None,
           "derivative-free family with a scaled difference node",
           stability=False)
    scheme("ostrowski", (), (4, 0),
           "Newton step plus a weighted corrector, fourth order")
    scheme("king", ("beta",), (4, 2),
           "one-parameter fourth-order correctors extending the weighted step")
    scheme("jarratt", (), (4, 0),
           "two-thirds predictor with a derivative-ratio weight, fourth order")
    scheme("wang", (), (8, 0),
           "derivative-ratio predictor followed by a fresh Newton step")
    scheme("amat", ("beta",), (4, 2),
           "fourth-order family built from a relative derivative increment")
    scheme("chun", ("alpha",), (8, 0),
           "sixth-order family mixing secant-like and derivative terms; "
           "only the alpha=0 member conjugates to the mirrored shape",
           stability=False)
    scheme("chebyshev-halley", ("alpha",), (3, 1),
           "classical one-parameter family using second derivatives")

    def form(name, params, nk, fn, doc, stability_param=None, producer=None,
             note=""):
        e.append(CatalogEntry(
            name=name, params=params, kind="form", doc=doc, nk=nk, form_fn=fn,
            stability_param=stability_param or (params[0] if params else None),
            stability_producer=producer or (lambda t, f=fn, p=params:
                                            f({p[0]: t}) if p else f({})),
            stability_note=note))

    form("c-family", ("c",), (3, 3), _cfamily_form,
         "cubic-over-cubic family whose last coefficient moves with c")
    form("m4", ("beta",), (4, 4), _m4_form,
         "three-step frozen-derivative family, quartic normal form",
         stability_param="alpha", producer=_m4_linear,
         note="alpha = (5*beta - 1)/beta")
    form("os2", ("a",), (5, 3), _os2_form,
         "weighted two-step subfamily with quintic local degree")
    form("os3", ("a",), (4, 4), _os3_form,
         "subfamily whose last coefficient depends rationally on a")
    form("os4", ("b",), (4, 4), _os4_form,
         "subfamily with z=1 superattracting for every parameter")
    form("os5", ("a",), (4, 4), _os5_form,
         "degenerate subfamily: the coefficient sum vanishes identically",
         note="reduces to sign -1 with k=3")
    return {entry.name: entry for entry in e}


_CATALOG = _entries()


def catalog_names() -> tuple:
    return tuple(_CATALOG)


def catalog_entry(name: str) -> CatalogEntry:
    try:
        return _CATALOG[name]
    except KeyError:
        raise UnknownMethod(f"unknown method {name!r}; "
                            f"available: {', '.join(_CATALOG)}") from None


def catalog(name: str, bindings=None):
    """The stored AST for scheme entries, the form producer otherwise."""
    entry = catalog_entry(name)
    if entry.kind == "scheme":
        return entry.ast
    return entry.form_fn


def build_operator(name: str, bindings=None, d: int = 2, c: complex = 1.0):
    """Instantiate a catalog method as a rational map on the z-plane of p."""
    entry = catalog_entry(name)
    bindings = dict(bindings or {})
    if entry.kind == "form":
        return entry.form_fn(bindings).reconstruct()
    ctx = SchemeContext(d=d, c=c, bindings=bindings)
    return instantiate(entry.ast, ctx)


def conjugated_form(name: str, bindings=None, c: complex = 1.0) -> OperatorForm:
    """The palindromic normal form of a catalog method for d=2."""
    entry = catalog_entry(name)
    bindings = dict(bindings or {})
    if entry.kind == "form":
        raw = entry.form_fn(bindings)
        if not raw.degenerate:
            return raw
        # reduce through reconstruction so the shared factor cancels
        return extract_normal_form(raw.reconstruct())
    ctx = SchemeContext(d=2, c=c, bindings=bindings)
    op = instantiate(entry.ast, ctx)
    return extract_normal_form(mobius_conjugate(op, standard_tau(c)))
