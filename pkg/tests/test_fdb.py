import itertools

import pytest
import sympy

from ahsm.fdb import (
    derivative_slots,
    enumerate_dio,
    fdb_qderiv_at0,
    linearity_witness,
    qderiv_series,
    verify_oracle,
)
from ahsm.seriesgen import PerturbedPDE, qderivs_at0
from ahsm.symcore import Q, coefficient_derivative, normalize, parse, placeholder


def _count(n: int, k: int) -> int:
    # brute force over every r with r_m <= n // m and every row of p with entries <= r_m
    total = 0
    for r in itertools.product(*(range(n // m + 1) for m in range(1, n + 1))):
        if sum(m * r_m for m, r_m in enumerate(r, start=1)) != n:
            continue
        rows = [
            [row for row in itertools.product(range(r_m + 1), repeat=k + 1) if sum(row) == r_m]
            for r_m in r
        ]
        total += sum(1 for _ in itertools.product(*rows))
    return total


@pytest.mark.parametrize("k", [0, 1, 3])
def test_first_order_has_one_solution_per_slot(k):
    solutions = enumerate_dio(1, k)
    assert len(solutions) == k + 1
    assert all(s.r == (1,) for s in solutions)


def test_second_order_without_extra_slots():
    assert [s.r for s in enumerate_dio(2, 0)] == [(0, 1), (2, 0)]


@pytest.mark.parametrize("n,k", [(n, k) for n in range(1, 6) for k in range(4)])
def test_solutions_satisfy_the_system(n, k):
    solutions = enumerate_dio(n, k)
    assert len(solutions) == _count(n, k)
    assert len(set(solutions)) == len(solutions)
    for s in solutions:
        assert s.n == n
        assert all(sum(row) == r_m for row, r_m in zip(s.p, s.r))
        assert all(len(row) == k + 1 for row in s.p)


def test_solutions_are_sorted():
    solutions = enumerate_dio(3, 1)
    keys = [(s.r, sum(s.p, ())) for s in solutions]
    assert keys == sorted(keys)


def test_solution_json():
    s = enumerate_dio(2, 1)[0]
    assert s.to_json() == {
        "r": [0, 1],
        "p": [[0, 0], [0, 1]],
        "r_total": 1,
        "p_columns": [0, 1],
    }


def test_invalid_orders():
    with pytest.raises(ValueError):
        enumerate_dio(0, 1)
    with pytest.raises(ValueError):
        enumerate_dio(2, -1)


def test_slots_of_ch(ch_generic):
    assert derivative_slots(ch_generic.E0, placeholder()) == [
        (0, 0),
        (0, 1),
        (1, 0),
        (2, 0),
    ]
    assert derivative_slots(ch_generic.E1, placeholder()) == [(4, 0)]


def test_qderiv_series():
    u2_x = coefficient_derivative("u", 2, (1, 0))
    u3_x = coefficient_derivative("u", 3, (1, 0))
    assert qderiv_series((1, 0), 2, 3) == 2 * u2_x + 6 * Q * u3_x
    with pytest.raises(ValueError):
        qderiv_series((0, 0), 4, 3)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_oracle_matches_direct_extraction_on_ch(ch_generic, n):
    direct = qderivs_at0(ch_generic, "E0", n)
    assert normalize(fdb_qderiv_at0(ch_generic, "E0", n) - direct[n]).is_zero


def test_oracle_on_perturbation(ch_generic):
    direct = qderivs_at0(ch_generic, "E1", 3)
    for n in range(1, 4):
        assert normalize(fdb_qderiv_at0(ch_generic, "E1", n) - direct[n]).is_zero


def test_oracle_of_slot_free_part_is_zero():
    pde = PerturbedPDE("heat", parse("u_t - u_xx"), sympy.S.Zero)
    assert fdb_qderiv_at0(pde, "E1", 2) == 0


def test_verify_oracle_report(ch_generic):
    report = verify_oracle(ch_generic, 3)
    assert report.passed
    assert report.name == "fdb-oracle"
    assert [r.order for r in report.orders] == [1, 2, 3]


@pytest.mark.slow
def test_verify_oracle_random_pdes(random_pdes):
    for pde in random_pdes:
        report = verify_oracle(pde, 4)
        assert report.passed, f"{pde.name}\n{report.to_text()}"


def test_linearity_witness():
    assert linearity_witness(parse("u2_xx*F(u0) + u1^2"), 2)
    assert not linearity_witness(parse("u2*u2_x"), 2)
