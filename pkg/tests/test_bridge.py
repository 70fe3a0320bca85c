import pytest
import sympy

from ahsm.bridge import (
    CoefficientMap,
    MapKind,
    MapOrderError,
    apply_inverse_to_solution,
    apply_map_to_solution,
    build_map,
    compose,
    invert_map,
    lemma2_multiplier,
    operator_diagnostic,
    reduce,
    transform,
    verify_lemma2,
    verify_lemma2_upto,
    verify_theorem1,
)
from ahsm.chmodel import CHCase, builtin_asm_solution, homotopy_solution
from ahsm.seriesgen import generate_ahsm, generate_asm
from ahsm.solution import Flavor
from ahsm.symcore import EPS, THETA, coefficient, is_zero

from conftest import assert_same


def _assert_identity(m: CoefficientMap):
    for l, row in enumerate(m.entries):
        assert is_zero(row[0] - 1)
        assert all(is_zero(c) for c in row[1:])


def test_theorem1_map_entries():
    m = build_map(MapKind.THEOREM1, 3)
    assert (m.source, m.target) == ("u", "utilde")
    s = EPS * (1 - THETA)
    expected = s**3 * coefficient("utilde", 3) + 2 * THETA * s**2 * coefficient(
        "utilde", 2
    ) + THETA**2 * s * coefficient("utilde", 1)
    assert_same(m.image(3), expected)


def test_theta_zero_degenerates_to_eps_powers():
    m = build_map(MapKind.THEOREM1, 4, theta=sympy.S.Zero)
    for l in range(5):
        assert_same(m.image(l), EPS**l * coefficient("utilde", l))


def test_theorem1_map_is_theta_only_then_scaling():
    composed = compose(build_map(MapKind.THETA_ONLY, 4), build_map(MapKind.SCALING, 4))
    direct = build_map(MapKind.THEOREM1, 4)
    assert (composed.source, composed.target) == ("u", "utilde")
    for row, expected in zip(composed.entries, direct.entries):
        assert all(is_zero(a - b) for a, b in zip(row, expected))


def test_compose_checks_families():
    with pytest.raises(ValueError):
        compose(build_map(MapKind.SCALING, 2), build_map(MapKind.THETA_ONLY, 2))


@pytest.mark.parametrize(
    "kind", [MapKind.THETA_ONLY, MapKind.SCALING, MapKind.THEOREM1, MapKind.OPERATOR_ALT]
)
def test_inverse_after_forward_is_identity(kind):
    m = build_map(kind, 4)
    inverse = invert_map(m)
    assert (inverse.source, inverse.target) == (m.target, m.source)
    assert inverse.inverted
    _assert_identity(compose(inverse, m))
    _assert_identity(compose(m, inverse))


def test_singular_map():
    m = CoefficientMap(((sympy.S.One,), (sympy.S.Zero,)))
    with pytest.raises(ValueError):
        invert_map(m)


def test_rows_must_be_triangular():
    with pytest.raises(ValueError):
        CoefficientMap(((sympy.S.One,), (sympy.S.One, sympy.S.One)))


def test_transform_follows_derivatives():
    m = build_map(MapKind.THETA_ONLY, 2)
    e = coefficient("u", 2).diff("x")
    assert_same(transform(e, m), "uhat2_x + theta*uhat1_x")


def test_map_carries_solution_and_back():
    asm = builtin_asm_solution(CHCase.INV_U)
    m = build_map(MapKind.THEOREM1, asm.order)
    homotopy = apply_map_to_solution(m, asm)
    assert homotopy.flavor is Flavor.HOMOTOPY
    assert homotopy.params == asm.params

    recovered = apply_inverse_to_solution(m, homotopy)
    assert recovered.flavor is Flavor.ASM
    for a, b in zip(recovered.coefficients, asm.coefficients):
        assert_same(a, b)


def test_inverse_accepts_longer_map():
    homotopy = homotopy_solution(CHCase.LINEAR_U).truncate(2)
    recovered = apply_inverse_to_solution(build_map(MapKind.THEOREM1, 4), homotopy)
    assert recovered.order == 2
    assert_same(recovered.coefficients[2], builtin_asm_solution(CHCase.LINEAR_U).coefficients[2])


def test_map_order_errors():
    asm = builtin_asm_solution(CHCase.INV_U)
    with pytest.raises(MapOrderError):
        apply_map_to_solution(build_map(MapKind.THEOREM1, 2), asm)
    with pytest.raises(ValueError):
        apply_inverse_to_solution(build_map(MapKind.THEOREM1, 3), asm)


def test_lemma2_multipliers():
    assert lemma2_multiplier(2, 2) == 2 * THETA
    assert lemma2_multiplier(3, 2) == 6 * THETA**2
    assert lemma2_multiplier(3, 3) == 6 * THETA
    assert lemma2_multiplier(4, 2) == 24 * THETA**3


@pytest.mark.parametrize("n", [2, 3])
def test_lemma2_on_ch(ch_generic, n):
    report = verify_lemma2(ch_generic, n)
    assert report.passed
    assert [i for i, _ in report.certificate] == list(range(2, n + 1))


@pytest.mark.slow
def test_lemma2_on_ch_to_fourth_order(ch_generic):
    report = verify_lemma2_upto(ch_generic, 4)
    assert report.passed
    assert [r.order for r in report.orders] == [2, 3, 4]


def test_theta_only_reduction_second_order(ch_generic):
    reduced, certificate = reduce(ch_generic, 2, MapKind.THETA_ONLY)
    assert certificate[2] == ((2, 2 * THETA),)
    assert_same(
        reduced[2],
        "2*dt(uhat2) + d(F_1(uhat0)*uhat1^2 + 2*uhat2*F(uhat0), x, 2)"
        " + 2*eps*(1-theta)*d(uhat1,x,4)",
    )


def test_reduce_rejects_other_maps(ch_generic):
    with pytest.raises(ValueError):
        reduce(ch_generic, 2, MapKind.OPERATOR_ALT)


def test_theorem1_on_ch(ch_generic):
    report = verify_theorem1(ch_generic, 3)
    assert report.passed
    assert report.to_text().endswith("theorem1: PASS")


@pytest.mark.slow
def test_theorem1_on_ch_to_fourth_order(ch_generic):
    assert verify_theorem1(ch_generic, 4).passed


def test_theorem1_with_theta_zero(ch_generic):
    assert verify_theorem1(ch_generic, 3, theta=sympy.S.Zero).passed


@pytest.mark.slow
def test_theta_zero_maps_ahsm_onto_asm(ch_generic):
    zero = sympy.S.Zero
    m = build_map(MapKind.THEOREM1, 4, theta=zero)
    ahsm = generate_ahsm(ch_generic, 4, theta=zero)
    asm = generate_asm(ch_generic, 4, family="utilde")
    for l in range(5):
        assert_same(transform(ahsm[l], m), EPS**l * asm[l])


def test_theorem1_fails_for_wrong_map(ch_generic):
    reduced, _ = reduce(ch_generic, 2, MapKind.THETA_ONLY)
    asm = generate_asm(ch_generic, 2, family="utilde")
    assert not is_zero(reduced[2] - (EPS * (1 - THETA)) ** 2 * asm[2])


def test_operator_diagnostic():
    diagnostics = operator_diagnostic(2)
    assert [d.order for d in diagnostics] == [0, 1, 2]
    assert diagnostics[0].forward.is_zero and diagnostics[0].swapped.is_zero
    assert diagnostics[1].forward.is_zero and diagnostics[1].swapped.is_zero
    assert_same(diagnostics[2].forward.as_expr(), THETA * coefficient("u", 1) / 2)
    assert_same(
        diagnostics[2].swapped.as_expr(), -3 * THETA * coefficient("utilde", 1) / 2
    )
    assert diagnostics[2].to_json()["order"] == 2


def test_operator_diagnostic_order():
    with pytest.raises(ValueError):
        operator_diagnostic(-1)
