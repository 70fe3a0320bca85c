import random

import pytest
import sympy

from ahsm.symcore import (
    EPS,
    THETA,
    A,
    DerivativeVariableError,
    DivisionByZeroError,
    Namespace,
    ParseError,
    PoleError,
    SubstitutionCycleError,
    UnboundAtomError,
    UnknownIdentifierError,
    closed_form,
    coefficient,
    coefficient_derivative,
    degree_in,
    diff_total,
    eval_exact,
    func_deriv,
    is_zero,
    normalize,
    parse,
    resolve_functions,
    series_atoms,
    substitute,
    to_latex,
    to_text,
    t,
    x,
)

from conftest import assert_same


def test_decimal_literals_are_exact():
    assert parse("0.5478") == sympy.Rational(2739, 5000)
    assert parse("7015/10000") == sympy.Rational(1403, 2000)


def test_coefficient_suffix_is_a_derivative():
    assert parse("u1_xxt") == sympy.diff(coefficient("u", 1), x, 2, t)
    assert parse("uhat2") == coefficient("uhat", 2)


def test_derivative_forms_agree():
    assert_same("d(F(u0)*u1, x, 2)", "dx(dx(F(u0)*u1))")
    assert_same("d(u0, x, 4)", "u0_xxxx")


def test_precedence_of_unary_minus_and_power():
    assert parse("-x^2") == -(x**2)
    assert parse("2*x^3/4") == x**3 / 2


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse("u0 +\n  * u1")
    assert (info.value.line, info.value.col) == (2, 3)


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifierError) as info:
        parse("foo + u0")
    assert info.value.col == 1


@pytest.mark.parametrize("src", ["d(u0, a)", "u0_z", "dz(u0)"])
def test_derivative_only_in_independent_variables(src):
    with pytest.raises(DerivativeVariableError):
        parse(src)


def test_custom_namespace():
    ns = Namespace(indep=("x", "t"), dep="v", params=("k",), funcs=())
    e = parse("v_t + k*v_xx", ns)
    v = sympy.Function("v")(x, t)
    assert e == sympy.diff(v, t) + sympy.Symbol("k") * sympy.diff(v, x, 2)
    with pytest.raises(UnknownIdentifierError):
        parse("F(v)", ns)


def test_chain_rule_through_uninterpreted_function():
    assert_same(diff_total(parse("F(u0)"), x), "F_1(u0)*u0_x")
    assert_same(diff_total(parse("F_1(u0)"), t, 2), "F_3(u0)*u0_t^2 + F_2(u0)*u0_tt")


def test_diff_total_rejects_nonpositive_order():
    with pytest.raises(ValueError):
        diff_total(x, x, 0)


def test_func_deriv_classes_are_shared():
    assert func_deriv("F", 2) is func_deriv("F", 2)
    assert func_deriv("F") is func_deriv("F", 0)
    assert parse("F(u0)") - func_deriv("F")(coefficient("u", 0)) == 0
    assert parse("F_2(u0)") == func_deriv("F", 2)(coefficient("u", 0))


def test_substitute_follows_derivatives():
    e = parse("u1_xx + u1")
    assert sympy.expand(substitute(e, {coefficient("u", 1): x**3})) == 6 * x + x**3


def test_substitute_rejects_cycles():
    u1 = coefficient("u", 1)
    with pytest.raises(SubstitutionCycleError):
        substitute(u1, {u1: 2 * u1})


def test_normal_form_is_canonical():
    assert normalize((x**2 - 1) / (x - 1)) == normalize(x + 1)
    assert normalize(THETA / (2 * x)) == normalize(sympy.Rational(1, 2) * THETA / x)
    assert is_zero(parse("dx(F(u0)*u0_x) - F_1(u0)*u0_x^2 - F(u0)*u0_xx"))


def test_normalize_division_by_zero():
    with pytest.raises(DivisionByZeroError):
        normalize(1 / (x - x))


def test_degree_in_series_atoms():
    e = parse("u1^2*u0 + u1_x + u2")
    assert degree_in(e, series_atoms(e, "u", [1])) == 2
    assert degree_in(e, series_atoms(e, "u", [2])) == 1
    assert degree_in(parse("F(u1)"), {coefficient("u", 1)}) is None
    assert degree_in(parse("1/u1"), {coefficient("u", 1)}) is None


def test_eval_exact():
    assert eval_exact(parse("x^2/(6*t)"), {x: 1, t: sympy.Rational(1, 10)}) == sympy.Rational(5, 3)

    u0 = coefficient("u", 0)
    u0_x = coefficient_derivative("u", 0, (1, 0))
    assert eval_exact(parse("u0_x*u0"), {u0_x: 2, u0: 3}) == 6


def test_eval_exact_errors():
    with pytest.raises(PoleError):
        eval_exact(1 / x, {x: 0})
    with pytest.raises(UnboundAtomError):
        eval_exact(parse("x + a"), {x: 1})
    with pytest.raises(UnboundAtomError):
        eval_exact(parse("F(x)"), {x: 1})


def test_closed_forms_resolve_derivatives():
    inverse = {"F": closed_form("1/s")}
    u0 = coefficient("u", 0)
    assert resolve_functions(parse("F_1(u0)"), inverse) == -1 / u0**2
    assert eval_exact(parse("F(x)"), {x: 4}, inverse) == sympy.Rational(1, 4)


@pytest.mark.parametrize(
    "src",
    [
        "F_1(u0)*u1_xx^2 - 3*eps*(1 - theta)*u0_xxxx",
        "x^2/(6*t) + eps*q/x^2",
        "uhat2_xt + theta^2*utilde1/a",
    ],
)
def test_text_is_reparseable(src):
    e = parse(src)
    assert parse(to_text(e)) == e


def test_latex_of_coefficients():
    assert to_latex(coefficient("utilde", 2)) == r"\tilde{u}_{2}"
    assert to_latex(coefficient_derivative("uhat", 1, (2, 0))) == r"\hat{u}_{1,xx}"
    assert r"\epsilon" in to_latex(parse("eps*u0"))


_RANDOM_ATOMS = ("x", "t", "eps", "theta", "u0", "u1", "u0_x", "u1_t", "u0_xx", "F(u0)", "F_1(u0)")


def _random_expression(seed: int, n_terms: int = 4, max_degree: int = 3) -> sympy.Expr:
    """A random rational expression in the series atoms, parameters and F."""
    rng = random.Random(seed)

    def monomial() -> str:
        factors = [rng.choice(_RANDOM_ATOMS) for _ in range(rng.randint(1, max_degree))]
        return f"{rng.choice([-3, -2, -1, 1, 2, 3])}*" + "*".join(factors)

    numerator = " + ".join(monomial() for _ in range(n_terms))
    if rng.random() < 0.5:
        return parse(f"({numerator})/(1 + x^2 + {rng.randint(1, 4)}*u0^2)")
    return parse(numerator)


SEEDS = range(12)


@pytest.mark.parametrize("seed", SEEDS)
def test_normalize_is_idempotent(seed):
    once = normalize(_random_expression(seed))
    assert normalize(once) == once
    assert normalize(once.as_expr()) == once


@pytest.mark.parametrize("seed", SEEDS)
def test_subtraction_of_rearranged_forms(seed):
    e = _random_expression(seed)
    assert normalize(e - e).is_zero
    assert normalize(sympy.expand(e) - sympy.together(e)).is_zero
    assert not normalize(e - (e + x)).is_zero


@pytest.mark.parametrize("seed", SEEDS)
def test_mixed_partials_commute(seed):
    e = _random_expression(seed)
    assert_same(diff_total(diff_total(e, x), t), diff_total(diff_total(e, t), x))
    assert_same(diff_total(diff_total(e, x), x), diff_total(e, x, 2))


@pytest.mark.parametrize("seed", SEEDS)
def test_leibniz_rule(seed):
    f, g = _random_expression(seed), _random_expression(seed + 1000)
    for v in (x, t):
        assert_same(diff_total(f * g, v), diff_total(f, v) * g + f * diff_total(g, v))


@pytest.mark.parametrize("seed", range(6))
def test_derivative_matches_central_difference(seed):
    # f depends on x only, so the central difference error is f'''(x0) h^2 / 6 + O(h^4)
    rng = random.Random(seed)
    terms = [f"{rng.randint(-3, 3)}*x^{m}" for m in range(5)]
    f = parse(" + ".join(terms) + f" + {rng.randint(1, 3)}/(x + {rng.randint(2, 5)})")
    x0 = sympy.Rational(rng.randint(1, 9), 10)
    exact = eval_exact(diff_total(f, x), {x: x0})

    def error(h):
        difference = (eval_exact(f, {x: x0 + h}) - eval_exact(f, {x: x0 - h})) / (2 * h)
        return abs(difference - exact)

    coarse, fine = error(sympy.Rational(1, 10**3)), error(sympy.Rational(1, 10**4))
    assert fine > 0
    assert 90 < coarse / fine < 110
    assert fine < sympy.Rational(1, 10**6)


@pytest.mark.parametrize("seed", SEEDS)
def test_repeated_evaluation_is_identical(seed):
    e = _random_expression(seed)
    rng = random.Random(seed)
    point = {atom: sympy.Rational(rng.randint(1, 9), rng.randint(1, 9)) for atom in series_atoms(e)}
    point.update(
        {x: sympy.Rational(1, 3), t: sympy.Rational(1, 10), EPS: sympy.Rational(1, 100), THETA: sympy.Rational(7, 10)}
    )
    funcs = {"F": closed_form("1/(1 + s^2)")}
    first, second = eval_exact(e, point, funcs), eval_exact(e, point, funcs)
    assert first == second
    assert (first.p, first.q) == (second.p, second.q)
    assert str(first) == str(second)


def test_fourth_x_derivative_of_travelling_inverse():
    e = 1 / (A * (A * t - x))
    assert_same(diff_total(e, x, 4), 24 / (A * (A * t - x) ** 5))
    assert_same(diff_total(e, x), 1 / (A * (A * t - x) ** 2))
