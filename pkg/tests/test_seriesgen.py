import json

import pytest
import sympy

from ahsm.chmodel import GOLDEN_AHSM
from ahsm.seriesgen import (
    Hierarchy,
    HierarchyKind,
    IncompleteHierarchyError,
    PerturbedPDE,
    check_linearity,
    expand_series,
    generate_ahsm,
    generate_ahsm_raw,
    generate_asm,
    qderivs_at0,
    rearrange,
    verify_linearity,
    verify_rearrangement,
)
from ahsm.symcore import EPS, THETA, coefficient, parse, placeholder

from conftest import assert_same


@pytest.fixture(scope="module")
def burgers():
    return PerturbedPDE("burgers", parse("u_t + u*u_x"), parse("u_xx"))


@pytest.mark.parametrize("k", range(4))
def test_rearranged_ch_hierarchy_matches_known_lines(ch_generic, k):
    h = generate_ahsm(ch_generic, 3)
    assert_same(h[k], GOLDEN_AHSM[k])


def test_asm_hierarchy_of_ch(ch_generic):
    h = generate_asm(ch_generic, 2)
    assert h.kind is HierarchyKind.ASM
    assert_same(h[0], "dt(u0) + dx(F(u0)*u0_x)")
    assert_same(h[1], "dt(u1) + d(F(u0)*u1, x, 2) + d(u0, x, 4)")
    assert_same(h[2], "2*dt(u2) + d(F_1(u0)*u1^2 + 2*F(u0)*u2, x, 2) + 2*d(u1, x, 4)")


def test_coefficient_form_divides_by_factorial(ch_generic):
    paper = generate_asm(ch_generic, 3)
    coefficients = generate_asm(ch_generic, 3, derivative_form=False)
    for i, factorial in enumerate([1, 1, 2, 6]):
        assert_same(coefficients[i] * factorial, paper[i])


def test_raw_ahsm_first_order(ch_generic):
    raw = generate_ahsm_raw(ch_generic, 1)
    assert_same(
        raw[1],
        "dt(u1) + d(F(u0)*u1, x, 2) - theta*(dt(u0) + dx(F(u0)*u0_x))"
        " + eps*(1 - theta)*u0_xxxx",
    )


def test_rearrange_certificate(burgers):
    _, certificate = rearrange(generate_ahsm_raw(burgers, 3))
    assert certificate[0] == ()
    assert certificate[1] == ((0, THETA),)
    assert certificate[2] == ((0, 2 * THETA**2), (1, 2 * THETA))
    assert certificate[3] == ((0, 6 * THETA**3), (1, 6 * THETA**2), (2, 3 * THETA))


def test_rearrange_certificate_coefficient_form(burgers):
    _, certificate = rearrange(generate_ahsm_raw(burgers, 2, derivative_form=False))
    assert certificate[2] == ((0, THETA**2), (1, THETA))


def test_rearranged_hierarchy_closed_form(ch_generic):
    assert verify_rearrangement(ch_generic, 3).passed
    assert verify_rearrangement(ch_generic, 3, derivative_form=False).passed


@pytest.mark.slow
def test_rearranged_hierarchy_closed_form_to_fifth_order(burgers):
    report = verify_rearrangement(burgers, 5)
    assert report.passed
    assert [r.order for r in report.orders] == list(range(6))


def test_rearrange_rejects_other_kinds(ch_generic):
    with pytest.raises(ValueError):
        rearrange(generate_asm(ch_generic, 2))


def test_rearrange_rejects_incomplete_hierarchy(ch_generic):
    raw = generate_ahsm_raw(ch_generic, 2)
    truncated = Hierarchy(HierarchyKind.AHSM_RAW, 2, raw.equations[:2])
    with pytest.raises(IncompleteHierarchyError):
        rearrange(truncated)


def test_qderivs_of_perturbation(ch_generic):
    G = qderivs_at0(ch_generic, "E1", 2)
    assert_same(G[1], "u1_xxxx")
    assert_same(G[2], "2*u2_xxxx")


def test_expand_series(ch_generic):
    e = expand_series(placeholder() ** 2, EPS, 1)
    u0, u1 = coefficient("u", 0), coefficient("u", 1)
    assert sympy.expand(e) == sympy.expand((u0 + EPS * u1) ** 2)
    with pytest.raises(ValueError):
        expand_series(placeholder(), EPS, -1)


def test_pde_parts_are_checked():
    with pytest.raises(ValueError):
        PerturbedPDE("bad", parse("u_t + eps*u"), parse("u_xx"))
    with pytest.raises(ValueError):
        PerturbedPDE("bad", parse("u_t + u1"), parse("u_xx"))


def test_linearity_of_each_order(ch_generic):
    h = generate_ahsm(ch_generic, 3)
    for i in range(1, 4):
        report = check_linearity(h, i)
        assert report.linear and report.degree == 1
    # u1 enters the second equation quadratically
    assert check_linearity(h, 2, wrt=1).degree == 2


@pytest.mark.parametrize(
    "kind", [HierarchyKind.ASM, HierarchyKind.AHSM_RAW, HierarchyKind.AHSM_REARRANGED]
)
def test_verify_linearity_ch(ch_generic, kind):
    report = verify_linearity(ch_generic, 3, kind)
    assert report.passed
    assert report.name == f"linearity ({kind.value})"


@pytest.mark.slow
def test_verify_linearity_random_pdes(ch_generic, random_pdes):
    assert verify_linearity(ch_generic, 4).passed
    for pde in random_pdes:
        report = verify_linearity(pde, 4)
        assert report.passed, f"{pde.name}\n{report.to_text()}"


def test_json_output_reparses(ch_generic):
    h = generate_ahsm(ch_generic, 2)
    lines = json.loads(h.to_json())
    assert len(lines) == 3
    for line, equation in zip(lines, h):
        assert_same(line, equation)


def test_text_output(ch_generic):
    text = generate_asm(ch_generic, 1).to_text()
    lines = text.splitlines()
    assert len(lines) == 2
    assert all(line.endswith(" = 0") for line in lines)


def test_hierarchy_theta_can_be_fixed(ch_generic):
    h = generate_ahsm(ch_generic, 2, theta=sympy.Rational(1, 2))
    assert THETA not in h[2].free_symbols
    assert EPS in h[2].free_symbols


@pytest.mark.parametrize("generate", [generate_asm, generate_ahsm_raw, generate_ahsm])
@pytest.mark.parametrize("N", [1, 2])
def test_raising_the_order_keeps_lower_equations(ch_generic, burgers, generate, N):
    for pde in (ch_generic, burgers):
        low, high = generate(pde, N), generate(pde, N + 1)
        assert len(high) == len(low) + 1
        for lhs, rhs in zip(low, high):
            assert_same(lhs, rhs)


@pytest.mark.slow
def test_raising_the_order_keeps_lower_equations_random_pdes(random_pdes):
    for pde in random_pdes[:5]:
        low, high = generate_ahsm(pde, 2), generate_ahsm(pde, 3)
        for lhs, rhs in zip(low, high):
            assert_same(lhs, rhs)
