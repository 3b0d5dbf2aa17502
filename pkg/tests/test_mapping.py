import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import pair_setup, quiet_domain
from oracles import ellipse_map, mirror
from uniform_inclusions.geometry import Circle
from uniform_inclusions.mapping import (
    EllipseOracle,
    InclusionContour,
    InvalidParametersError,
    NonUnivalentWarning,
    caliper_widths,
    detect_overlap,
    ellipse_oracle,
    hausdorff_distance,
    omega_boundary,
    oracle_deviation,
    procrustes_residual,
    residual_report,
    sample_contours,
    width_ratio,
)
from uniform_inclusions.rh import LoadingParameters, MapGauge, ProblemSetup, solve

UNIT = [Circle(0, 1)]


def _single(kappa, tau, tau_inf, c_minus1=1.0, N=64):
    s = ProblemSetup(quiet_domain(UNIT), LoadingParameters(tau, tau_inf, [kappa]), MapGauge(c_minus1), quadrature_n=N)
    return solve(s)


def _contour(index, z):
    th = 2 * np.pi * np.arange(len(z)) / len(z)
    return InclusionContour(index, th, np.asarray(z))


def _ellipse(center, a, b, M=128, clockwise=False):
    th = 2 * np.pi * np.arange(M) / M
    z = center + a * np.cos(th) + 1j * b * np.sin(th)
    return z[::-1] if clockwise else z


# -- closed form ----------------------------------------------------------------


def test_oracle_delta_examples():
    o = ellipse_oracle(2, 1.5, 1)
    assert o.delta == pytest.approx(1 / 3)
    assert o.semi_axes == pytest.approx((4 / 3, 2 / 3))
    assert not o.degenerate
    assert ellipse_oracle(2, 2, 1).delta == pytest.approx(1)
    assert ellipse_oracle(2, 2, 1).degenerate
    tau = 1.3 + 0.4j
    # 2 kappa tau - (kappa + 1) tau = tau over (1 - kappa) conj(tau) = -conj(tau)
    assert ellipse_oracle(2, tau, tau).delta == pytest.approx(-tau / np.conj(tau))
    assert ellipse_oracle(2, tau, tau).degenerate


def test_oracle_invalid_parameters():
    with pytest.raises(InvalidParametersError):
        EllipseOracle(1, 2, 1)
    with pytest.raises(InvalidParametersError):
        EllipseOracle(2, 0, 1)


def test_oracle_matches_reference():
    o = ellipse_oracle(3, 2 - 1j, 0.5j, c_minus1=0.8 * np.exp(0.4j))
    ref, delta = ellipse_map(3, 2 - 1j, 0.5j, 0.8 * np.exp(0.4j))
    th = np.linspace(0, 6, 11)
    assert delta == pytest.approx(o.delta)
    assert np.allclose(o.point(th), ref(th))


def test_single_inclusion_matches_ellipse():
    sol = _single(2, 1.5, 1)
    c = sample_contours(sol, 64)[0]
    dev = oracle_deviation(c, ellipse_oracle(2, 1.5, 1))
    assert dev < 1e-6
    wmin, wmax = caliper_widths(c)
    assert wmax == pytest.approx(2 * 4 / 3, rel=1e-12)
    assert wmin == pytest.approx(2 * 2 / 3, rel=1e-3)


def _admissible(kappa, t1, t2, s1, s2):
    tau, tau_inf = complex(t1, t2), complex(s1, s2)
    if abs(tau) < 0.1 or abs(kappa - 1) < 0.05:
        return None
    if abs(ellipse_oracle(kappa, tau, tau_inf).delta) > 0.9:
        return None
    return tau, tau_inf


def test_twenty_random_single_inclusions():
    rng = np.random.default_rng(11)
    done = 0
    while done < 20:
        kappa = float(np.exp(rng.uniform(np.log(0.1), np.log(20))))
        p = _admissible(kappa, *rng.uniform(-3, 3, 4))
        if p is None:
            continue
        sol = _single(kappa, *p)
        c = sample_contours(sol, 64)[0]
        assert oracle_deviation(c, ellipse_oracle(kappa, *p)) < 1e-6
        done += 1


@given(st.floats(0.2, 5.0), st.floats(-np.pi, np.pi))
def test_complex_c_minus1_single_inclusion(modulus, phase):
    c1 = modulus * np.exp(1j * phase)
    sol = _single(2, 1.5 + 0.3j, 1, c_minus1=c1)
    c = sample_contours(sol, 64)[0]
    assert oracle_deviation(c, ellipse_oracle(2, 1.5 + 0.3j, 1, c1)) < 1e-6 * modulus


def test_single_inclusion_residuals_tiny():
    sol = _single(2, 1.5, 1)
    rep = residual_report(sol, sample_contours(sol, 64))
    assert rep.imF < 1e-8 and rep.physical_bc < 1e-8
    assert rep.overlap is None


# -- sampling ---------------------------------------------------------------------


def test_sample_contours_grid_alignment(pair_solution):
    N = pair_solution.setup.quadrature_n
    cs = sample_contours(pair_solution, 2 * N + 1)
    assert len(cs) == 2
    for c in cs:
        assert len(c) == 2 * N + 1
        idx = pair_solution.setup.grids[c.index].node_index(c.theta)
        assert np.all(idx >= 0)
        assert np.array_equal(c.z, pair_solution.omega_nodes[c.index][idx])
    assert np.all(np.diff(cs[0].theta) > 0) and cs[0].theta[0] == 0 and cs[0].theta[-1] < 2 * np.pi


def test_sample_contours_off_grid_consistent(pair_solution):
    # evaluating between nodes agrees with the trigonometric interpolant of node values
    c = sample_contours(pair_solution, 64)[1]
    N = pair_solution.setup.quadrature_n
    g = pair_solution.setup.grids[1]
    k = np.arange(-N, N + 1)
    coef = np.exp(-1j * np.outer(k, g.theta)) @ pair_solution.omega_nodes[1] / g.size
    interp = np.exp(1j * np.outer(c.theta, k)) @ coef
    assert np.abs(interp - c.z).max() < 1e-9


def test_sample_contours_min_samples(pair_solution):
    with pytest.raises(ValueError):
        sample_contours(pair_solution, 8)


def test_omega_boundary(pair_solution):
    xi = Circle(1.5, 1).point(np.array([0.1, 0.2]))
    assert np.allclose(omega_boundary(pair_solution, xi, 1), pair_solution.omega_at(1, [0.1, 0.2]))
    assert isinstance(omega_boundary(pair_solution, xi[0], 1), complex)


def test_contour_validation():
    with pytest.raises(ValueError):
        InclusionContour(0, np.array([0.0, 0.0]), np.array([1, 2]))
    with pytest.raises(ValueError):
        InclusionContour(0, np.array([0.0, 1.0]), np.array([1]))


def test_fig1_contours_mirror_symmetric(pair_solution):
    cs = sample_contours(pair_solution, 256)
    assert hausdorff_distance(mirror(cs[0].z), cs[1].z) < 1e-6


# -- overlap ------------------------------------------------------------------------


def test_far_apart_ellipses_do_not_overlap():
    a = _contour(0, _ellipse(0, 2, 1))
    b = _contour(1, _ellipse(10, 2, 1))
    rep = detect_overlap([a, b])
    assert not rep.flag and rep.pairs == () and rep.univalent


def test_crossing_and_nested_ellipses_overlap():
    a = _contour(0, _ellipse(0, 2, 1))
    b = _contour(1, _ellipse(1.5, 2, 1))
    c = _contour(2, _ellipse(20, 0.5, 0.2))
    d = _contour(3, _ellipse(20, 2, 2))
    rep = detect_overlap([a, b, c, d])
    assert rep.flag
    assert set(rep.pairs) == {(0, 1), (2, 3)}


def test_self_intersection_reported_as_non_univalent():
    th = 2 * np.pi * np.arange(200) / 200
    eight = np.sin(th) + 1j * np.sin(th) * np.cos(th)
    with pytest.warns(NonUnivalentWarning):
        rep = detect_overlap([_contour(0, eight), _contour(1, _ellipse(10, 1, 1))])
    assert rep.self_intersecting == (0,)
    assert not rep.flag


def test_clockwise_contour_reported():
    with pytest.warns(NonUnivalentWarning):
        rep = detect_overlap([_contour(0, _ellipse(0, 1, 1, clockwise=True)), _contour(1, _ellipse(5, 1, 1))])
    assert rep.reversed_orientation == (0,)
    assert not rep.univalent
    d = rep.to_dict()
    assert d["flag"] is False and d["reversed_orientation"] == [0]


def test_signed_area():
    assert _contour(0, _ellipse(0, 2, 1, M=2000)).signed_area == pytest.approx(2 * np.pi, rel=1e-5)
    assert _contour(0, _ellipse(0, 2, 1, M=2000, clockwise=True)).signed_area < 0


def test_overlap_near_unit_contrast():
    sol = solve(pair_setup(kappa=0.9))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonUnivalentWarning)
        rep = detect_overlap(sample_contours(sol))
    assert rep.flag and rep.pairs == ((0, 1),)


def test_three_inclusions_are_disjoint(triple_domain):
    s = ProblemSetup(triple_domain, LoadingParameters(2, 1, [2, 2, 2]), base_point=0, max_level=3, quadrature_n=64)
    rep = detect_overlap(sample_contours(solve(s)))
    assert not rep.flag


# -- shape helpers ---------------------------------------------------------------


@given(st.floats(0.1, 5), st.floats(-np.pi, np.pi), st.floats(-10, 10), st.floats(-10, 10))
def test_procrustes_recovers_similarity(scale, angle, bx, by):
    x = _ellipse(0.3, 2, 1, M=50) + 0.1 * np.cos(np.arange(50)) ** 3
    A = scale * np.exp(1j * angle)
    res, A_fit, B_fit = procrustes_residual(x, A * x + complex(bx, by))
    assert res < 1e-9 * (1 + scale + abs(complex(bx, by)))
    assert abs(A_fit - A) < 1e-9 * (1 + scale)


def test_procrustes_rejects_mirror_image():
    x = _ellipse(0.3, 2, 1, M=50) + 0.3 * np.exp(2j * np.arange(50))
    res, *_ = procrustes_residual(x, np.conj(x))
    assert res > 0.1


def test_caliper_widths():
    assert caliper_widths(_contour(0, _ellipse(0, 3, 1, M=400))) == pytest.approx((2, 6), rel=1e-3)
    seg = _contour(0, np.linspace(-1, 1, 20) + 0j)
    wmin, wmax = caliper_widths(seg)
    assert wmin == 0 and wmax == pytest.approx(2)
    assert width_ratio(seg) == 0
    assert width_ratio(_contour(0, _ellipse(0, 1, 1, M=400))) == pytest.approx(1, rel=1e-3)


def test_residual_report_fields(pair_solution):
    rep = residual_report(pair_solution, sample_contours(pair_solution, 65))
    assert set(rep.residuals_dict()) == {"imF", "physical_bc", "symmetry", "automorphicity"}
    assert rep.imF < 1e-6 and rep.physical_bc < 1e-4
    assert rep.symmetry < 1e-12
    assert rep.automorphicity < 10 * rep.extra["tail_estimate"]
    assert rep.residue_identity_defects.shape == (2, 1)
    assert rep.overlap is not None and not rep.overlap.flag


def test_normalized_configuration_runs():
    # unit circle at the origin plus a circle on the real axis; base point falls back off the origin
    dom = quiet_domain([Circle(0, 1), Circle(3.5, 1)])
    s = ProblemSetup(dom, LoadingParameters(2, 1, [2, 3]), max_level=3)
    sol = solve(s)
    assert not dom.is_exterior(0)
    rep = residual_report(sol)
    assert rep.imF < 1e-4

