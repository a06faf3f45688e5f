"""Text form of space expressions: a recursive-descent parser and a printer.

Grammar::

    expr   := leaf | op "(" expr { "," expr } ")" | "conv" "(" expr "," num ")"
    op     := M | dual | prod | sym | Ces | Tand | Tandori | sum | cap
    leaf   := "L" "(" num [ "," num ] [ "," weight ] ")"
            | "Lambda" "(" num "," weight ")" | "Marc" "(" weight ")"
            | "{0}" | "L0"
    weight := "t^" signed-num | named-id
    num    := decimal | int "/" int | "inf"

``L(p)`` is L^p, ``L(p, q)`` the Lorentz space, ``L(p, weight)`` weighted
L^p.  ``Ces(num)`` abbreviates ``Ces(L(num))``.  ``print_expr`` emits the
canonical spelling, and ``parse(print_expr(e)) == e``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from . import space_algebra as A
from .space_algebra import INF, fmt_num


class ExprSyntaxError(SyntaxError):
    def __init__(self, msg: str, line: int, col: int, expected: frozenset):
        self.line, self.col, self.expected = line, col, frozenset(expected)
        exp = ", ".join(sorted(self.expected))
        super().__init__(f"{msg} at line {line}, column {col}; expected one of: {exp}")


class UnknownFamily(ValueError):
    pass


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<zero>\{\s*0\s*\})
  | (?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[(),^/+-])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Tok:
    kind: str
    text: str
    line: int
    col: int


def tokenize(src: str) -> list[Tok]:
    toks: list[Tok] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise ExprSyntaxError(f"unexpected character {src[pos]!r}", line, pos - line_start + 1, {"token"})
        kind = m.lastgroup
        text = m.group()
        if kind != "ws":
            toks.append(Tok(text if kind == "punct" else kind, text, line, pos - line_start + 1))
        nl = text.count("\n")
        if nl:
            line += nl
            line_start = pos + text.rfind("\n") + 1
        pos = m.end()
    toks.append(Tok("end", "", line, pos - line_start + 1))
    return toks


UNARY = {"dual": A.Dual, "sym": A.Symmetrize, "Ces": A.Cesaro, "Tand": A.Tandori, "Tandori": A.Tandori}
BINARY = {"M": A.Multiplier, "prod": A.Product, "sum": A.Sum, "cap": A.Intersect}
EXPR_START = frozenset({"L", "Lambda", "Marc", "{0}", "L0", "conv", *UNARY, *BINARY})


class _Parser:
    def __init__(self, src: str, domain: str):
        self.toks = tokenize(src)
        self.i = 0
        self.domain = domain

    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def fail(self, expected, msg=None):
        t = self.tok
        what = "end of input" if t.kind == "end" else repr(t.text)
        raise ExprSyntaxError(msg or f"unexpected {what}", t.line, t.col, expected)

    def eat(self, kind: str) -> Tok:
        if self.tok.kind != kind:
            self.fail({kind})
        t = self.tok
        self.i += 1
        return t

    def peek_is(self, kind: str) -> bool:
        return self.tok.kind == kind

    def number(self, signed: bool = False):
        sign = 1
        if signed and self.tok.kind in ("-", "+"):
            sign = -1 if self.eat(self.tok.kind).kind == "-" else 1
        t = self.tok
        if t.kind == "ident" and t.text == "inf":
            self.i += 1
            if sign < 0:
                raise A.BadExponent("negative infinity is not allowed")
            return INF
        if t.kind != "num":
            self.fail({"number"})
        self.i += 1
        val = Fraction(t.text)
        if self.peek_is("/"):
            self.eat("/")
            d = self.eat("num")
            den = Fraction(d.text)
            if den == 0:
                raise A.BadExponent("zero denominator")
            val = val / den
        return sign * val

    def weight(self):
        t = self.tok
        if t.kind != "ident":
            self.fail({"t^", "weight name"})
        if t.text == "t":
            self.i += 1
            self.eat("^")
            return A.PowerW(self.number(signed=True))
        if t.text in A.W.NAMED_IDS:
            self.i += 1
            return A.NamedW(t.text)
        raise UnknownFamily(f"unknown weight {t.text!r} at line {t.line}, column {t.col}")

    def expr(self) -> A.Expr:
        t = self.tok
        d = self.domain
        if t.kind == "zero":
            self.i += 1
            return A.Zero(domain=d)
        if t.kind != "ident":
            self.fail(EXPR_START, "expected expression" if t.kind == "end" else None)
        name = t.text
        if name == "L0":
            self.i += 1
            return A.MeasurableAll(domain=d)
        if name == "L":
            return self.lebesgue_family()
        if name == "Lambda":
            self.i += 1
            self.eat("(")
            p = self.number()
            self.eat(",")
            w = self.weight()
            self.eat(")")
            return A.Lambda(p, w, domain=d)
        if name == "Marc":
            self.i += 1
            self.eat("(")
            w = self.weight()
            self.eat(")")
            return A.Marc(w, domain=d)
        if name == "conv":
            self.i += 1
            self.eat("(")
            e = self.expr()
            self.eat(",")
            r = self.number()
            self.eat(")")
            return A.Convexify(e, r=r, domain=d)
        if name in UNARY:
            self.i += 1
            self.eat("(")
            bare = self.tok.kind == "num" or (self.tok.kind == "ident" and self.tok.text == "inf")
            if name == "Ces" and bare:
                inner = A.Lebesgue(self.number(), domain=d)
            else:
                inner = self.expr()
            self.eat(")")
            return UNARY[name](inner, domain=d)
        if name in BINARY:
            self.i += 1
            self.eat("(")
            a = self.expr()
            self.eat(",")
            b = self.expr()
            self.eat(")")
            return BINARY[name](a, b, domain=d)
        raise UnknownFamily(f"unknown family or operator {name!r} at line {t.line}, column {t.col}")

    def lebesgue_family(self) -> A.Expr:
        d = self.domain
        start = self.tok
        self.i += 1
        self.eat("(")
        p = self.number()
        q = w = None
        while self.peek_is(","):
            self.eat(",")
            if self.tok.kind == "ident" and self.tok.text != "inf":
                if w is not None:
                    self.fail({")"})
                w = self.weight()
            elif w is None and q is None:
                q = self.number()
            else:
                self.fail({")"})
        self.eat(")")
        if q is not None and w is not None:
            raise UnknownFamily(
                f"weighted Lorentz spaces L(p, q, weight) are not supported (line {start.line}, column {start.col})"
            )
        if q is not None:
            return A.Lorentz(p, q, domain=d)
        return A.Lebesgue(p, w or A.ONE, domain=d)

    def parse(self) -> A.Expr:
        e = self.expr()
        if self.tok.kind != "end":
            self.fail({"end of input"})
        return e


def parse(src: str, domain: str = "inf") -> A.Expr:
    if domain not in A.DOMAINS:
        raise ValueError(f"domain must be one of {A.DOMAINS}")
    return _Parser(src, domain).parse()


def _w(w) -> str:
    return w.text()


def print_expr(e: A.Expr) -> str:
    if isinstance(e, A.Zero):
        return "{0}"
    if isinstance(e, A.MeasurableAll):
        return "L0"
    if isinstance(e, A.Lebesgue):
        if e.weight == A.ONE:
            return f"L({fmt_num(e.p)})"
        return f"L({fmt_num(e.p)}, {_w(e.weight)})"
    if isinstance(e, A.Lorentz):
        return f"L({fmt_num(e.p)},{fmt_num(e.q)})"
    if isinstance(e, A.Lambda):
        return f"Lambda({fmt_num(e.p)}, {_w(e.weight)})"
    if isinstance(e, A.Marc):
        return f"Marc({_w(e.weight)})"
    if isinstance(e, A.Convexify):
        return f"conv({print_expr(e.e)}, {fmt_num(e.r)})"
    names = {
        A.Dual: "dual", A.Symmetrize: "sym", A.Cesaro: "Ces", A.Tandori: "Tandori",
        A.Multiplier: "M", A.Product: "prod", A.Sum: "sum", A.Intersect: "cap",
    }
    op = names[type(e)]
    return f"{op}({', '.join(print_expr(c) for c in e.children())})"


def to_json_obj(e: A.Expr) -> dict:
    """JSON AST: {"node": ..., fields..., "children": [...]}."""
    out: dict = {"node": type(e).__name__, "domain": e.domain}
    for k in ("p", "q", "r"):
        if hasattr(e, k):
            out[k] = fmt_num(getattr(e, k))
    if hasattr(e, "weight"):
        out["weight"] = e.weight.text()
    if e.children():
        out["children"] = [to_json_obj(c) for c in e.children()]
    if e.notes:
        out["notes"] = list(e.notes)
    return out
