import io
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadcorr import (
    CapacityExceeded,
    InvSqrtBound,
    OutOfRange,
    ScaleGuard,
    build_rep_table,
    c_constant,
    correlation,
    correlation_grid,
    correlation_group_oracle,
    f_deviation,
    field_new,
    g_ratio,
    r_brute,
)
from test_repcount import box_lambdas


def test_table_example_d2():
    f2 = field_new(2)
    table = build_rep_table(f2, 3, 3)
    assert [table.lookup(i, 0) for i in range(5)] == [1, 4, 8, 8, 8]


def test_table_tiny_box():
    f2 = field_new(2)
    table = build_rep_table(f2, 1, 1)
    assert table.lookup(0, 0) == 1
    assert table.lookup(1, 0) == 4  # the lambda + 1 neighbour of 0


@pytest.mark.parametrize("d,box", [(2, 8), (5, 6), (13, 5)])
@pytest.mark.parametrize("symmetric", [False, True])
def test_table_matches_brute_force(d, box, symmetric):
    field = field_new(d)
    table = build_rep_table(field, box, box, symmetric=symmetric)
    checked = 0
    for lam in box_lambdas(field, box + 1):
        assert table.value(lam) == r_brute(field, lam), (d, lam.p, lam.q)
        checked += 1
    assert checked > 0


def test_correlation_example():
    f2 = field_new(2)
    res = correlation(f2, 3, 3)
    assert res.n_value == 100
    assert res.main_term == pytest.approx(72.0)
    assert res.deviation == pytest.approx(28.0)
    assert res.lambda_zero_included


def test_correlation_rational_bounds():
    f2 = field_new(2)
    # fractional box edges must be honored exactly
    a = correlation(f2, Fraction(5, 2), Fraction(5, 2)).n_value
    b = correlation(f2, 2, 2).n_value
    c = correlation(f2, 3, 3).n_value
    assert b <= a <= c
    # 0 <= lambda < 5/2 over the rationals means lambda in {0, 1, 2}
    assert a == c


def test_exclude_lambda_zero():
    f2 = field_new(2)
    incl = correlation(f2, 3, 3, include_lambda_zero=True).n_value
    excl = correlation(f2, 3, 3, include_lambda_zero=False).n_value
    assert incl - excl == r_brute(f2, f2.zero()) * r_brute(f2, f2.one())


@pytest.mark.parametrize("d", [2, 3, 5])
def test_oracle_equivalence_small(d):
    field = field_new(d)
    for v1 in range(1, 7):
        for v2 in range(1, 7):
            a = correlation(field, v1, v2).n_value
            b = correlation_group_oracle(field, v1, v2)
            assert a == b, (d, v1, v2)


def test_oracle_examples():
    f2 = field_new(2)
    assert correlation_group_oracle(f2, 3, 3) == 100
    assert correlation_group_oracle(f2, 1, 1) == 4
    f5 = field_new(5)
    assert correlation_group_oracle(f5, 2, 2) == correlation(f5, 2, 2).n_value


def test_oracle_scale_guard():
    with pytest.raises(ScaleGuard):
        correlation_group_oracle(field_new(2), 10**6, 10**6)


def test_monotonicity():
    f2 = field_new(2)
    values = {}
    for v1 in (2, 4, 6):
        for v2 in (2, 4, 6):
            values[(v1, v2)] = correlation(f2, v1, v2).n_value
    for v1 in (2, 4):
        for v2 in (2, 4):
            assert values[(v1 + 2, v2)] >= values[(v1, v2)]
            assert values[(v1, v2 + 2)] >= values[(v1, v2)]


@pytest.mark.parametrize("d", [2, 5])
def test_symmetric_storage_equals_full(d):
    field = field_new(d)
    for v in (5, 9, 14):
        a = correlation(field, v, v, symmetric=True).n_value
        b = correlation(field, v, v, symmetric=False).n_value
        assert a == b, (d, v)


def test_symmetric_requires_equal_bounds():
    with pytest.raises(OutOfRange):
        build_rep_table(field_new(2), 3, 4, symmetric=True)


def test_thread_determinism_small():
    f2 = field_new(2)
    base = correlation(f2, 200, 200, threads=1).n_value
    assert correlation(f2, 200, 200, threads=3).n_value == base
    assert correlation(f2, 200, 200, threads=8).n_value == base


@pytest.mark.parametrize("d", [2, 5])
def test_grid_matches_pointwise_correlation(d):
    field = field_new(d)
    grid = correlation_grid(field, 15)
    for v in range(1, 16):
        assert grid[v] == correlation(field, v, v).n_value, (d, v)
    # and the non-symmetric table gives the same grid
    full = correlation_grid(field, 15, symmetric=False)
    assert (grid == full).all()


def test_grid_excluding_lambda_zero():
    f2 = field_new(2)
    grid_in = correlation_grid(f2, 10)
    grid_ex = correlation_grid(f2, 10, include_lambda_zero=False)
    shift = r_brute(f2, f2.zero()) * r_brute(f2, f2.one())
    assert ((grid_in[1:] - grid_ex[1:]) == shift).all()


def test_f_deviation_small_values():
    f2 = field_new(2)
    pts = f_deviation(f2, 12, checkpoints=[1, 6, 12])
    grid = correlation_grid(f2, 12)
    devs = [abs(int(grid[v]) - 8 * v * v) for v in range(1, 13)]
    by_x = {p.x: p for p in pts}
    assert by_x[1].f_strict == 0  # empty grid below 1
    assert by_x[6].f_strict == max(devs[:5])
    assert by_x[6].f_inclusive == max(devs[:6])
    assert by_x[12].f_inclusive == max(devs)


def test_f_deviation_validates_checkpoints():
    with pytest.raises(OutOfRange):
        f_deviation(field_new(2), 10, checkpoints=[11])


def test_g_ratio_consistency():
    f2 = field_new(2)
    v = 500
    res = correlation(f2, v, InvSqrtBound(2, Fraction(v)))
    expected = res.n_value / (8.0 * math.sqrt(v))
    assert g_ratio(f2, v) == pytest.approx(expected, rel=1e-12)
    with pytest.raises(OutOfRange):
        g_ratio(f2, 1)


def test_invsqrt_bound_matches_float():
    f2 = field_new(2)
    bound = InvSqrtBound(2, Fraction(1000))
    edge = 1000 ** -0.5
    for i in range(0, 12):
        for j in range(-8, 9):
            lam = f2.from_xy(i, j)
            approx = lam.embed()[0]
            if abs(approx - edge) > 1e-6:
                assert bound.allows(lam.p, lam.q, True) == (approx < edge), (i, j)


def test_capacity_guard():
    with pytest.raises(CapacityExceeded):
        build_rep_table(field_new(2), 4000, 4000, memory_budget=10_000)


def test_csv_export_roundtrip():
    f5 = field_new(5)
    table = build_rep_table(f5, 4, 4, symmetric=True)
    buf = io.StringIO()
    table.write_csv(buf)
    lines = buf.getvalue().strip().splitlines()
    assert lines[0] == "# D=5 doubled=1"
    assert lines[1] == "x,y,r"
    seen = {}
    for row in lines[2:]:
        i, j, r = (int(t) for t in row.split(","))
        seen[(i, j)] = r
    # negative-j cells are present via mirroring and agree with brute force
    for (i, j), r in seen.items():
        assert r == r_brute(f5, f5.element(i, j)), (i, j)
    assert any(j < 0 for (_, j) in seen)


def test_symmetric_storage_footprint():
    # balanced case, d not 1 mod 4: about V^2 / (8 sqrt d) stored counters
    f2 = field_new(2)
    v = 1000
    table = build_rep_table(f2, v, v, symmetric=True)
    predicted = v * v / (8 * math.sqrt(2))
    assert abs(table.cells - predicted) / predicted < 0.05


def test_result_json_schema():
    res = correlation(field_new(2), 3, 3)
    payload = res.to_json_dict()
    assert set(payload) == {
        "d", "v1", "v2", "n_value", "c_constant_num", "c_constant_den", "deviation",
    }
    assert payload["n_value"] == 100
    assert payload["c_constant_num"] == 8
    assert payload["c_constant_den"] == 1


@given(st.sampled_from([2, 5]), st.integers(1, 10), st.integers(1, 10))
@settings(max_examples=25, deadline=None)
def test_correlation_is_sum_of_products(d, v1, v2):
    field = field_new(d)
    expected = 0
    for lam in box_lambdas(field, max(v1, v2) + 1):
        if lam.cmp(v1) < 0 and lam.conj().cmp(v2) < 0:
            expected += r_brute(field, lam) * r_brute(field, lam + field.one())
    assert correlation(field, v1, v2).n_value == expected
