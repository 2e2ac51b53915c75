import math

import pytest

from treeshift.complexity import complexity_exact
from treeshift.core import CATALOG_MATRICES, catalog_system, node_count, validate_system
from treeshift.entropy import (
    SeriesKind,
    bc_raw_ratio,
    bounds_report,
    conjugacy_scaled_entropy,
    dominates,
    dominates_up_to_symmetry,
    entropy_report,
    growth_constant,
    h_bc_estimate,
    h_ps_estimate,
    operator_norm_rowmax,
    series_reference,
)

LN2 = math.log(2)
M = CATALOG_MATRICES


@pytest.fixture(scope="module")
def h(catalog):
    return {int(s.name[2:]): h_ps_estimate(s) for s in catalog}


def test_operator_norm_examples():
    assert operator_norm_rowmax(M["A"]) == 2.0
    assert operator_norm_rowmax(M["D"]) == 2.0
    assert operator_norm_rowmax(M["B"]) == 1.0


def test_h_ps_examples(h):
    assert abs(h[1].value - LN2) <= 1e-9
    assert abs(h[2].value - LN2 / 2) <= 1e-9
    assert h[8].value == 0.0 and h[8].method == "exact-shortcut-zero"
    assert h[5].method == "projective-iteration"


def test_h_ps_argument_checks(X):
    with pytest.raises(ValueError):
        h_ps_estimate(X(5), n_max=1)
    with pytest.raises(ValueError):
        h_ps_estimate(X(5), tol=0.0)


def test_estimate_invariants(h):
    for r, est in h.items():
        assert est.value >= 0.0
        if est.converged:
            assert est.last_delta <= 1e-10, r
        assert est.converged, r


def test_h_ps_uses_requested_tolerance(X):
    loose = h_ps_estimate(X(5), tol=1e-3)
    tight = h_ps_estimate(X(5), tol=1e-12)
    assert loose.n_used < tight.n_used
    assert abs(loose.value - tight.value) < 1e-2


def test_bounds_examples(X):
    s, _ = validate_system([M["A"], M["B"], M["B"], M["B"], M["B"]])
    assert bounds_report(s).ps_upper_norm == 2 * math.log(2) / 5
    b1 = bounds_report(X(1))
    assert b1.ps_upper == LN2 and b1.ps_upper_norm == pytest.approx(1.5 * LN2)
    assert bounds_report(X(8)).zero_by_row_sums
    assert bounds_report(X(9)).zero_by_row_sums  # (B,C): C rows sum to 1 as well
    assert bounds_report(X(14)).zero_by_row_sums and bounds_report(X(14)).ps_upper == pytest.approx(LN2 / 2)


def test_sandwich(catalog, h):
    for s in catalog:
        b = bounds_report(s)
        assert b.ps_upper == min(b.ps_upper_norm, b.ps_upper_trivial)
        assert 0.0 <= h[int(s.name[2:])].value <= b.ps_upper + 1e-10, s.name


def test_h_bc_examples(X):
    for r in (1, 19):
        est = h_bc_estimate(X(r))
        assert est.value == LN2 and est.method == "shortcut-log-k"
        assert est.converged and est.last_delta == 0.0
    est = h_bc_estimate(X(8))
    assert est.value == 0.0 and est.method == "exact-shortcut-zero"
    with pytest.raises(ValueError):
        h_bc_estimate(X(1), n_max=2)


def test_saturation(catalog, h):
    for s in catalog:
        r = int(s.name[2:])
        if h[r].value > 0.01:
            assert h_bc_estimate(s, h_ps=h[r]).value == LN2
        if bounds_report(s).zero_by_row_sums:
            assert h_bc_estimate(s).value == 0.0
    for r in (1, 4, 19):
        assert abs(bc_raw_ratio(catalog_system(r), 25) - LN2) < 0.05


def test_raw_ratio_needs_growth():
    single, _ = validate_system([[[1]], [[1]]])
    with pytest.raises(ValueError, match="log log"):
        bc_raw_ratio(single, 5)


def test_dominates_examples(X):
    assert dominates(X(1), X(4))
    assert not dominates(X(4), X(1))
    assert dominates(X(4), X(4))
    # (D,G) against (B,D): entrywise fails, but (D,G) dominates the reordered (D,B)
    assert not dominates(X(22), X(10))
    assert dominates_up_to_symmetry(X(22), X(10))
    with pytest.raises(ValueError, match="shape"):
        dominates(X(1), validate_system([M["A"]])[0])


def test_monotone_estimates(catalog, h):
    for x in catalog:
        for y in catalog:
            if dominates(x, y):
                assert h[int(x.name[2:])].value >= h[int(y.name[2:])].value - 1e-10, (x.name, y.name)


def test_monotone_estimates_up_to_symmetry(catalog, h):
    for x in catalog:
        for y in catalog:
            if dominates_up_to_symmetry(x, y):
                assert h[int(x.name[2:])].value >= h[int(y.name[2:])].value - 1e-10, (x.name, y.name)


def test_shortcut_consistency(catalog):
    for s in catalog:
        if bounds_report(s).zero_by_row_sums:
            assert all(complexity_exact(s, n) == s.d for n in range(7)), s.name


def test_series_reference_examples():
    assert abs(series_reference(SeriesKind.FIB, 5) - 0.47616) < 5e-5
    assert series_reference("logn", 2) == pytest.approx(LN2 / 4)
    assert series_reference(SeriesKind.FIB, 2) == pytest.approx(LN2 / 4)
    with pytest.raises(ValueError):
        series_reference("fib", 1)


def test_series_agreement(h):
    assert abs(h[4].value - series_reference("fib", 40)) < 1e-6
    assert abs(h[5].value - series_reference("logn", 40)) < 1e-6
    assert abs(h[16].value - h[4].value / 4) < 1e-6
    assert abs(h[10].value - h[5].value / 2) < 1e-6


def test_estimator_monotone_after_three(catalog):
    from treeshift.complexity import log_complexities

    for s in catalog:
        if bounds_report(s).zero_by_row_sums:
            continue
        hs = [lp / node_count(s.k, n) for n, lp, _ in log_complexities(s, 40)]
        for a, b in zip(hs[3:], hs[4:]):
            assert b <= a + 1e-12, s.name


def test_growth_constants(X):
    gamma = 1.289066
    assert abs(growth_constant(X(5)) - gamma**2) < 1e-4
    assert abs(growth_constant(X(11)) - math.sqrt(1.597910)) < 1e-4
    assert abs(growth_constant(X(28)) - math.sqrt(2.258518)) < 1e-4
    assert growth_constant(X(8)) == 1.0


def test_conjugacy_scaled_entropy():
    assert conjugacy_scaled_entropy(LN2 / 2, 2, 1) == LN2
    assert conjugacy_scaled_entropy(0.3, 2, 0) == 0.3
    assert conjugacy_scaled_entropy(0.1, 3, 2) == pytest.approx(0.9)
    with pytest.raises(ValueError):
        conjugacy_scaled_entropy(-1.0, 2, 1)


def test_entropy_report_shape(X):
    rep = entropy_report(X(5))
    assert {"h_ps", "h_bc", "n_used", "converged", "bounds", "method"} <= set(rep)
    assert rep["h_bc"] == LN2 and rep["converged"]
    assert abs(rep["h_ps"] - 0.507836) < 1e-4
    assert entropy_report(X(9))["h_ps"] == 0.0
