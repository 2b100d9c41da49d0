import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from compmap import ParseError, Point2, SingularityError, UnboundParameterError
from compmap.expr import (BinOp, Const, Neg, Param, Var, constant_fold,
                          differentiate, evaluate, expr_map, parse, to_text)
from compmap.planarmap import jacobian, fd_jacobian

from helpers import random_expr


def test_parse_structure():
    e = parse("x/(a+y)")
    assert e == BinOp("/", Var("x"), BinOp("+", Param("a"), Var("y")))


def test_unary_minus_binds_looser_than_power():
    e = parse("-x^2")
    assert e == Neg(BinOp("^", Var("x"), Const(2.0)))


def test_parse_errors_carry_offsets():
    with pytest.raises(ParseError) as exc:
        parse("x*(")
    assert exc.value.offset == 3
    assert "number" in exc.value.expected

    with pytest.raises(ParseError) as exc:
        parse("2x")  # no implicit multiplication
    assert exc.value.offset == 1

    with pytest.raises(ParseError) as exc:
        parse("x^y")  # exponents are literal numbers
    assert exc.value.offset == 2

    with pytest.raises(ParseError):
        parse("")
    with pytest.raises(ParseError):
        parse("(x+y")


def test_eval_examples():
    assert evaluate(parse("x/(a+y)"), 1.0, 1.0, {"a": 2.0}) == pytest.approx(1 / 3)
    assert evaluate(parse("x+y"), 0.0, 0.0) == 0.0
    assert evaluate(parse("y/(1+x)"), 1.0, 1.0) == pytest.approx(0.5)


def test_eval_errors():
    with pytest.raises(UnboundParameterError):
        evaluate(parse("a*x"), 1.0, 1.0, {})
    with pytest.raises(SingularityError):
        evaluate(parse("x/(a+y)"), 1.0, -2.0, {"a": 2.0})


def test_differentiate_examples():
    assert differentiate(parse("x*y"), "x") == Var("y")
    assert differentiate(parse("c"), "x") == Const(0.0)
    d = differentiate(parse("x/(a+y)"), "y")
    # quotient rule: -x/(a+y)^2; check pointwise
    for x, y in ((1.0, 1.0), (0.5, 2.0), (3.0, 0.25)):
        want = -x / (2.0 + y) ** 2
        assert evaluate(d, x, y, {"a": 2.0}) == pytest.approx(want, rel=1e-14)


def test_power_rule():
    d = differentiate(parse("x^3"), "x")
    for x in (0.5, 1.0, 2.0):
        assert evaluate(d, x, 0.0) == pytest.approx(3 * x * x)
    assert differentiate(parse("x^3"), "y") == Const(0.0)


@st.composite
def expr_trees(draw):
    seed = draw(st.integers(min_value=0, max_value=2 ** 31 - 1))
    return random_expr(np.random.default_rng(seed), depth=5)


@settings(max_examples=60, deadline=None)
@given(e=expr_trees())
def test_pretty_print_round_trip(e):
    text = to_text(e)
    reparsed = parse(text)
    assert to_text(reparsed) == text
    assert to_text(parse(to_text(reparsed))) == text


def test_round_trip_preserves_tree_for_plain_text():
    for s in ("x/(a+y)", "1 - x*y + y^2", "-(x + y)/(1 - b)", "x - y - c"):
        e = parse(s)
        assert parse(to_text(e)) == e


def test_constant_folding_preserves_values():
    rng = np.random.default_rng(7)
    params = {"a": 1.3, "b": 0.7, "c": 2.1}
    checked = 0
    while checked < 60:
        e = random_expr(rng, depth=5)
        folded = constant_fold(e)
        x, y = rng.uniform(0.5, 2.0, 2)
        try:
            want = evaluate(e, x, y, params)
        except SingularityError:
            continue
        if not math.isfinite(want) or abs(want) > 1e12:
            continue
        got = evaluate(folded, x, y, params)
        assert got == pytest.approx(want, rel=1e-12, abs=1e-12)
        checked += 1


def test_derivative_matches_finite_differences():
    # 100 random (expression, point) pairs; relative agreement 1e-5
    rng = np.random.default_rng(2024)
    params = {"a": 1.3, "b": 0.7, "c": 2.1}
    checked = 0
    while checked < 100:
        e = random_expr(rng, depth=5)
        var = "x" if rng.random() < 0.5 else "y"
        x, y = rng.uniform(0.5, 2.0, 2)
        try:
            d_sym = evaluate(differentiate(e, var), x, y, params)
            h = 1e-6 * max(1.0, abs(x if var == "x" else y))
            if var == "x":
                fplus = evaluate(e, x + h, y, params)
                fminus = evaluate(e, x - h, y, params)
            else:
                fplus = evaluate(e, x, y + h, params)
                fminus = evaluate(e, x, y - h, params)
        except SingularityError:
            continue
        d_fd = (fplus - fminus) / (2 * h)
        if not (math.isfinite(d_sym) and math.isfinite(d_fd)):
            continue
        if max(abs(d_sym), abs(d_fd)) > 1e8:
            continue  # conditioning of the FD quotient, not a derivative bug
        assert abs(d_sym - d_fd) <= 1e-5 * max(1.0, abs(d_sym), abs(d_fd))
        checked += 1


def test_expr_map_matches_builtin_ex1(ex1):
    m = expr_map("x/(a+y)", "y/(1+x)", {"a": 2.0}, name="ex1-dsl")
    rng = np.random.default_rng(5)
    for _ in range(25):
        x, y = rng.uniform(0.1, 4.0, 2)
        assert m.step(x, y) == pytest.approx(ex1.map.step(x, y), rel=1e-14)
        ja = jacobian(m, Point2(x, y))
        jb = jacobian(ex1.map, Point2(x, y))
        assert np.allclose(ja, jb, rtol=1e-12, atol=1e-14)


def test_expr_map_exact_jacobian_agrees_with_fd():
    m = expr_map("x/(a+y)", "y/(1+x)", {"a": 2.0})
    p = Point2(1.2, 0.7)
    exact = jacobian(m, p)
    fd = fd_jacobian(m, p)
    assert np.allclose(exact, fd, rtol=1e-6, atol=1e-9)


def test_expr_map_unbound_parameter():
    with pytest.raises(UnboundParameterError):
        expr_map("x/(a+y)", "y", {})
