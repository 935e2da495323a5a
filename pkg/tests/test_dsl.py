"""Expression-language tests: lexing, parsing, evaluation, printing."""

import math
import random

import pytest
from hypothesis import given, strategies as st

from hfstab import dsl
from hfstab.dsl import (Bin, Call, Lit, Neg, Var, DomainError, EvalError,
                        NonFiniteError, ParseError, UnboundVariableError,
                        compile_symbol, evaluate, parse, to_source,
                        validate_oddness)


def ev(text, k=0.0, **params):
    return evaluate(parse(text), k, params)


class TestParsing:
    def test_precedence(self):
        assert ev("1+2*3") == 7.0
        assert ev("(1+2)*3") == 9.0
        assert ev("2^3^2") == 512.0          # right-associative
        assert ev("-2^2") == -4.0            # unary binds looser than ^
        assert ev("2*3^2") == 18.0
        assert ev("10-4-3") == 3.0           # left-associative

    def test_numbers(self):
        assert ev("1.5e2") == 150.0
        assert ev(".5") == 0.5
        assert ev("2E-3") == 0.002

    def test_functions_and_constants(self):
        assert ev("sqrt(4)") == 2.0
        assert ev("tanh(0)") == 0.0
        assert ev("cos(pi)") == pytest.approx(-1.0)
        assert ev("sign(0)") == 0.0
        assert ev("sign(-3)") == -1.0
        assert ev("abs(-2)") == 2.0

    def test_variables(self):
        assert ev("g*k", k=2.0, g=3.0) == 6.0

    def test_parse_error_reports_offset(self):
        with pytest.raises(ParseError) as exc:
            parse("1 + * 2")
        assert exc.value.offset == 4
        assert "expected" in str(exc.value)

    def test_unknown_function(self):
        with pytest.raises(ParseError):
            parse("foo(1)")

    def test_trailing_garbage(self):
        with pytest.raises(ParseError):
            parse("1 2")

    def test_unbalanced_paren(self):
        with pytest.raises(ParseError):
            parse("(1+2")


class TestEvaluation:
    def test_unbound_variable(self):
        with pytest.raises(UnboundVariableError):
            ev("q")

    def test_sqrt_negative(self):
        with pytest.raises(DomainError):
            ev("sqrt(-1)")

    def test_division_by_zero(self):
        with pytest.raises(DomainError):
            ev("1/k", k=0.0)

    def test_fractional_power_of_negative(self):
        with pytest.raises(DomainError):
            ev("(-2)^0.5")

    def test_overflow_is_nonfinite_or_domain(self):
        with pytest.raises(EvalError):
            ev("exp(1e9)")

    def test_nonfinite_result(self):
        with pytest.raises(NonFiniteError):
            ev("exp(700)*exp(700)")


class TestOddness:
    def test_odd_symbol(self):
        rep = validate_oddness(parse("k^3"), None, [0.5, 1.0, 2.5])
        assert rep.is_odd and rep.max_violation == 0.0

    def test_even_symbol(self):
        rep = validate_oddness(parse("k^2"), None, [0.5, 1.0])
        assert not rep.is_odd and rep.max_violation == 2.0

    def test_builtin_water_wave_branch_is_odd(self):
        text = "sign(k)*sqrt(g*k*tanh(k*h))"
        rep = validate_oddness(parse(text), {"g": 1.0, "h": 1.0},
                               [0.0, 0.3, 1.0, 4.0])
        assert rep.is_odd


class TestCompileSymbol:
    def test_at_zero_limit(self):
        sym = compile_symbol("sqrt(g*tanh(k*h)/k)", {"g": 1.0, "h": 1.0},
                             at_zero=1.0)
        assert sym(0.0) == 1.0
        assert sym(1.0) == pytest.approx(math.sqrt(math.tanh(1.0)))


# --------------------------------------------------------------------------
# Round-trip property

_VARS = ("k", "g", "h", "x1", "beta")


def random_tree(rng: random.Random, depth: int):
    if depth <= 0 or rng.random() < 0.3:
        if rng.random() < 0.5:
            choice = rng.random()
            if choice < 0.4:
                return Lit(float(rng.randint(0, 99)))
            if choice < 0.8:
                return Lit(round(rng.uniform(0.0, 10.0), 6))
            return Lit(rng.random() * 10.0 ** rng.randint(-12, 12))
        return Var(rng.choice(_VARS))
    roll = rng.random()
    if roll < 0.15:
        return Neg(random_tree(rng, depth - 1))
    if roll < 0.3:
        return Call(rng.choice(dsl.FUNCTION_NAMES),
                    random_tree(rng, depth - 1))
    op = rng.choice("+-*/^")
    return Bin(op, random_tree(rng, depth - 1), random_tree(rng, depth - 1))


def test_round_trip_structural_identity_bulk():
    rng = random.Random(20230817)
    for _ in range(2000):
        tree = random_tree(rng, rng.randint(1, 6))
        assert parse(to_source(tree)) == tree


@st.composite
def expr_trees(draw, depth=4):
    if depth == 0:
        if draw(st.booleans()):
            value = draw(st.floats(min_value=0.0, max_value=1e12,
                                   allow_nan=False, allow_infinity=False))
            return Lit(value)
        return Var(draw(st.sampled_from(_VARS)))
    kind = draw(st.integers(0, 3))
    if kind == 0:
        return draw(expr_trees(depth=0))
    if kind == 1:
        return Neg(draw(expr_trees(depth=depth - 1)))
    if kind == 2:
        return Call(draw(st.sampled_from(dsl.FUNCTION_NAMES)),
                    draw(expr_trees(depth=depth - 1)))
    return Bin(draw(st.sampled_from("+-*/^")),
               draw(expr_trees(depth=depth - 1)),
               draw(expr_trees(depth=depth - 1)))


@given(expr_trees())
def test_round_trip_property(tree):
    assert parse(to_source(tree)) == tree
