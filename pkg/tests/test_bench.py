"""Benchmark integrands, the three rule variants, and slope fitting."""
import io
import math

import numpy as np
import pytest

from latquad.bench import (
    ConvergenceRecord,
    TestFunction as Integrand,
    converge_study,
    eval_g,
    eval_h,
    fit_slope,
    integrate,
    records_to_csv,
)
from latquad.points import LatticeRule


def test_eval_g_endpoints():
    assert eval_g(1, 0.1, [0.0]) == pytest.approx(20.0 / 21.0, rel=1e-15)
    assert eval_g(1, 0.1, [1.0]) == pytest.approx(1.0 + 0.1 * 11.0 / 21.0, rel=1e-15)
    # batch shape: trailing axis is the coordinate axis
    out = eval_g(2, 0.5, np.zeros((7, 2)))
    assert out.shape == (7,)
    with pytest.raises(ValueError):
        eval_g(2, 0.5, np.zeros((7, 3)))


def test_eval_h_values():
    c = (31.0 - 16.0 * math.cos(1.0)) / 8.0
    assert eval_h(1, 0.1, [0.0]) == pytest.approx(1.0 + 0.1 * c, rel=1e-14)
    assert float(eval_h(1, 0.1, [0.0])) == pytest.approx(1.2794395388263722, rel=1e-13)
    got = eval_h(2, 0.5, [0.0, 0.0])
    assert got == pytest.approx((1.0 + 0.5 * c) * (1.0 + 0.25 * c), rel=1e-14)


def test_test_function_validation():
    f = Integrand("g", 3, 0.9)
    assert f.exact_integral == 1.0
    assert f(np.full((2, 3), 0.5)).shape == (2,)
    with pytest.raises(ValueError):
        Integrand("q", 2, 0.5)
    with pytest.raises(ValueError):
        Integrand("g", 0, 0.5)
    with pytest.raises(ValueError):
        Integrand("g", 2, 0.0)


def test_constants_are_exact_for_every_variant():
    rule = LatticeRule(7, (1, 3))
    for variant in ("plain", "tent", "sym"):
        est = integrate(rule, variant, lambda p: np.ones(len(p)))
        assert est == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(ValueError):
        integrate(rule, "folded", lambda p: np.ones(len(p)))


def test_symmetrized_rule_integrates_odd_parts_exactly():
    for N, g in [(3, (1,)), (4, (3,)), (7, (2,))]:
        rule = LatticeRule(N, g)
        est = integrate(rule, "sym", lambda p: p.ravel())
        assert est == pytest.approx(0.5, abs=1e-14)
        est = integrate(rule, "sym", lambda p: np.cos(np.pi * p).ravel())
        assert est == pytest.approx(0.0, abs=1e-14)


def test_tent_equals_plain_on_even_cosines_at_odd_moduli():
    # cos(2 pi k x) pulled through the fold lands on the same node values;
    # even N can place mass on the fold crease, so only odd N is asserted
    for N, g in [(5, (1, 2)), (7, (1, 3)), (9, (1, 2))]:
        rule = LatticeRule(N, g)

        def f(p):
            return np.cos(2.0 * np.pi * p[:, 0]) * np.cos(4.0 * np.pi * p[:, 1])

        a = integrate(rule, "plain", f)
        b = integrate(rule, "tent", f)
        assert abs(a - b) <= 1e-13


def test_quadrature_reaches_the_exact_integral():
    f = Integrand("g", 2, 0.9)
    rule = LatticeRule(257, (1, 111))
    assert abs(integrate(rule, "sym", f) - 1.0) <= 1e-4


def test_fit_slope_on_exact_power_laws():
    recs1 = [ConvergenceRecord("plain", 2**m, 2**m, 1.0, 0.5 * 2.0**-m) for m in range(4, 10)]
    assert fit_slope(recs1) == pytest.approx(-1.0, abs=1e-9)
    recs3 = [ConvergenceRecord("tent", 2**m, 2**m, 1.0, 3.0 * 2.0 ** (-3 * m)) for m in range(4, 10)]
    assert fit_slope(recs3) == pytest.approx(-3.0, abs=1e-9)


def test_fit_slope_needs_enough_points_above_the_floor():
    recs = [
        ConvergenceRecord("plain", 2**m, 2**m, 1.0, err)
        for m, err in [(4, 1e-2), (5, 1e-3), (6, 1e-14), (7, 1e-15)]
    ]
    with pytest.raises(ValueError):
        fit_slope(recs)


def test_converge_study_records_and_csv():
    f = Integrand("g", 2, 0.9)
    Ns = [2**m for m in range(6, 10)]
    buf = io.StringIO()
    recs = converge_study(f, "tent", Ns, cbc_alpha=1, out=buf)
    assert [r.N for r in recs] == Ns
    assert all(r.nodes == r.N for r in recs)
    assert all(r.abs_error == abs(r.estimate - 1.0) for r in recs)
    lines = buf.getvalue().strip().splitlines()
    assert lines[0] == "variant,N,nodes,estimate,abs_error"
    assert len(lines) == 1 + len(Ns)
    assert lines[1].startswith("tent,64,64,")
    assert records_to_csv(recs) == buf.getvalue()


def test_converge_study_validation():
    f = Integrand("g", 2, 0.9)
    with pytest.raises(ValueError):
        converge_study(f, "tent", [64, 32])
    with pytest.raises(ValueError):
        converge_study(f, "spiral", [32, 64])
    with pytest.raises(ValueError):
        converge_study(Integrand("g", 11, 0.9), "sym", [32, 64])
    with pytest.raises(ValueError):
        converge_study(Integrand("g", 10, 0.9), "sym", [1 << 16])


def test_symmetrized_node_counts_in_records():
    f = Integrand("g", 3, 0.9)
    recs = converge_study(f, "sym", [8, 16])
    assert [r.nodes for r in recs] == [4 * 8 + 1, 4 * 16 + 1]


def test_tent_beats_plain_on_the_smooth_even_integrand():
    f = Integrand("g", 4, 0.9)
    Ns = [2**m for m in range(6, 12)]
    plain = converge_study(f, "plain", Ns, cbc_alpha=1)
    tent = converge_study(f, "tent", Ns, cbc_alpha=1)
    for p, t in zip(plain, tent):
        if p.N >= 2**8:
            assert t.abs_error < p.abs_error


def test_tent_is_second_order_on_the_rougher_integrand():
    # smooth but not reflection-symmetric: per-coordinate trapezoid behavior
    f = Integrand("h", 3, 0.5)
    recs = converge_study(f, "tent", [2**m for m in range(6, 13)], cbc_alpha=1)
    slope = fit_slope(recs)
    assert -2.3 <= slope <= -1.5
