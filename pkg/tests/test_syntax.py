import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from fsx import space_algebra as A
from fsx.syntax import ExprSyntaxError, UnknownFamily, parse, print_expr, to_json_obj, tokenize

import exprgen


def test_parse_examples():
    assert parse("M(L(2,1), L(2))") == A.Multiplier(A.Lorentz(Fr(2), Fr(1)), A.Lebesgue(Fr(2)))
    assert parse("dual(Ces(2))") == A.Dual(A.Cesaro(A.Lebesgue(Fr(2))))
    assert parse("Tand(L(3))") == parse("Tandori(L(3))")
    assert parse("conv(L(2,1), 1/3)") == A.Convexify(A.Lorentz(Fr(2), Fr(1)), r=Fr(1, 3))
    assert parse("{ 0 }") == A.Zero()
    assert parse("L(2, t^-0.5)").weight == A.PowerW(Fr(-1, 2))
    assert parse("Lambda(1, pole)").weight == A.NamedW("pole")


def test_print_examples():
    assert print_expr(parse("M(L(2,1),L(2))")) == "M(L(2,1), L(2))"
    assert print_expr(A.Zero()) == "{0}"
    assert print_expr(A.Lambda(Fr(2), A.PowerW(Fr(1, 2)))) == "Lambda(2, t^0.5)"
    assert print_expr(parse("L(1/3)")) == "L(1/3)"
    assert print_expr(parse("Tand(L(inf))")) == "Tandori(L(inf))"


def test_incomplete_input():
    with pytest.raises(ExprSyntaxError) as ei:
        parse("M(L(2,1),")
    err = ei.value
    assert (err.line, err.col) == (1, 10)
    assert "expected expression" in str(err)
    assert "L" in err.expected and "M" in err.expected


def test_position_on_later_line():
    with pytest.raises(ExprSyntaxError) as ei:
        parse("M(L(2),\n  L(2) L(3))")
    assert ei.value.line == 2


@pytest.mark.parametrize("src", ["L(2", "L(2))", "M(L(2))", "L(,)", "L(2, t^)", "L(2) $"])
def test_malformed(src):
    with pytest.raises(ExprSyntaxError):
        parse(src)


@pytest.mark.parametrize("src", ["Orlicz(2)", "L(2, 1, t^0.1)", "Lambda(2, wiggly)"])
def test_unknown_families(src):
    with pytest.raises(UnknownFamily):
        parse(src)


def test_bad_numbers():
    with pytest.raises(A.BadExponent):
        parse("L(1/0)")
    with pytest.raises(A.BadExponent):
        parse("L(0)")


def test_domain_flag():
    assert parse("L(2)", "01").domain == "01"
    with pytest.raises(ValueError):
        parse("L(2)", "02")


def test_tokens():
    kinds = [t.kind for t in tokenize("L(2, t^-1)")]
    assert kinds == ["ident", "(", "num", ",", "ident", "^", "-", "num", ")", "end"]


def test_json_ast():
    obj = to_json_obj(parse("M(L(2,1), L(2))"))
    assert obj["node"] == "Multiplier"
    assert obj["children"][0] == {"node": "Lorentz", "domain": "inf", "p": "2", "q": "1"}


@given(st.integers(0, 10**6))
@settings(max_examples=300, deadline=None)
def test_round_trip(seed):
    rng = random.Random(seed)
    e = exprgen.random_expr(rng, depth=4, d=rng.choice(["inf", "01"]))
    assert parse(print_expr(e), e.domain) == e


@given(st.integers(0, 10**6))
@settings(max_examples=200, deadline=None)
def test_printer_is_fixed_point(seed):
    s = print_expr(exprgen.random_expr(random.Random(seed)))
    assert print_expr(parse(s)) == s
