import numpy as np
import pytest
import sympy as sp

from lorentz_helix.errors import GridTooCoarseError, NotTimelikeError, NotUnitSpeedError, VanishingCurvatureError
from lorentz_helix.frenet import (
    CurvatureProfile,
    CurveSamples,
    FrenetData,
    check_unit_speed,
    frenet_data,
    frenet_residuals,
    reparametrize_unit_speed,
)
from lorentz_helix.minkowski import signature_deviation
from lorentz_helix.synthesis import CurvatureSpec, integrate_frenet, make_w_curve


def _w_curve_oracle():
    """Exact curvatures of the W-curve with a = sqrt(2), theta = b = phi = 1."""
    s = sp.symbols("s", real=True)
    a = sp.sqrt(2)
    alpha = sp.Matrix([a * sp.sinh(s), a * sp.cosh(s), sp.cos(s), sp.sin(s)])
    g = sp.diag(-1, 1, 1, 1)

    def ip(u, v):
        return sp.simplify((u.T * g * v)[0])

    T = alpha.diff(s)
    assert ip(T, T) == -1
    k1 = sp.sqrt(ip(T.diff(s), T.diff(s)))
    N = sp.simplify(T.diff(s) / k1)
    w = N.diff(s) - k1 * T  # N' = k1 T + k2 B1
    k2 = sp.sqrt(ip(w, w))
    B1 = sp.simplify(w / k2)
    v = B1.diff(s) + k2 * N  # B1' = -k2 N + k3 B2
    k3_abs = sp.sqrt(ip(v, v))
    B2 = sp.simplify(v / k3_abs)
    det = sp.simplify(sp.Matrix.hstack(T, N, B1, B2).det())
    k3 = sp.simplify(k3_abs * sp.sign(det))
    return [float(sp.nsimplify(sp.simplify(k))) for k in (k1, k2, k3)]


# frozen from _w_curve_oracle(); test_w_curve_oracle_is_current re-derives them
W_KAPPAS = (1.7320508075688772, 1.6329931618554521, 0.5773502691896258)


def test_w_curve_oracle_is_current():
    np.testing.assert_allclose(_w_curve_oracle(), W_KAPPAS, rtol=1e-15)


def test_reparametrize_identity_line():
    t = np.linspace(0, 1, 101)
    raw = CurveSamples(t, np.stack([t, 0 * t, 0 * t, 0 * t], axis=1))
    out = reparametrize_unit_speed(raw, 0.01)
    assert out.unit_speed and len(out) == 101
    np.testing.assert_allclose(out.s, t, atol=1e-10)
    np.testing.assert_allclose(out.points, raw.points, atol=1e-10)


def test_reparametrize_constant_speed_two():
    t = np.linspace(0, 1, 101)
    raw = CurveSamples(t, np.stack([2 * t, 0 * t, 0 * t, 0 * t], axis=1))
    out = reparametrize_unit_speed(raw, 0.02)
    assert len(out) == 101
    np.testing.assert_allclose(out.s[-1] - out.s[0], 2.0, atol=1e-10)
    np.testing.assert_allclose(out.points, raw.points, atol=1e-10)


def test_reparametrize_hyperbola():
    t = np.linspace(0, 1, 201)
    raw = CurveSamples(t, np.stack([np.sinh(t), np.cosh(t), 0 * t, 0 * t], axis=1))
    out = reparametrize_unit_speed(raw, 0.005)
    assert check_unit_speed(out, 1e-6) < 1e-6
    assert len(out) == 201


def test_reparametrize_keeps_node_count_without_step():
    t = np.linspace(0, 1, 51)
    raw = CurveSamples(t, np.stack([3 * t, t, 0 * t, 0 * t], axis=1))
    out = reparametrize_unit_speed(raw)
    assert len(out) == 51
    np.testing.assert_allclose(np.diff(out.s), np.sqrt(8) / 50, rtol=1e-9)


def test_unit_speed_round_trip_is_tight():
    s = np.linspace(0, 1, 1001)
    w = make_w_curve(np.sqrt(2), 1, 1, 1, s)
    out = reparametrize_unit_speed(CurveSamples(s, w.points), 1e-3)
    np.testing.assert_allclose(out.points, w.points, atol=1e-8)


def test_reparametrize_errors():
    t = np.linspace(0, 1, 50)
    spacelike = CurveSamples(t, np.stack([0 * t, t, 0 * t, 0 * t], axis=1))
    with pytest.raises(NotTimelikeError) as info:
        reparametrize_unit_speed(spacelike, 0.01)
    assert info.value.node == 0
    line = CurveSamples(t, np.stack([t, 0 * t, 0 * t, 0 * t], axis=1))
    with pytest.raises(GridTooCoarseError):
        reparametrize_unit_speed(line, 0.5)
    with pytest.raises(ValueError):
        reparametrize_unit_speed(line, -1.0)


def test_curve_samples_validation():
    with pytest.raises(GridTooCoarseError):
        CurveSamples(np.arange(6.0), np.zeros((6, 4)))
    with pytest.raises(ValueError):
        CurveSamples(np.array([0, 1, 2, 2, 3, 4, 5.0]), np.zeros((7, 4)))
    with pytest.raises(ValueError):
        CurveSamples(np.arange(7.0), np.zeros((7, 3)))


def test_frenet_needs_unit_speed_flag():
    s = np.linspace(0, 1, 50)
    with pytest.raises(NotUnitSpeedError):
        frenet_data(CurveSamples(s, make_w_curve(np.sqrt(2), 1, 1, 1, s).points))


def test_frenet_rejects_wrong_speed():
    s = np.linspace(0, 1, 50)
    fake = CurveSamples(s, np.stack([2 * s, 0 * s, 0 * s, 0 * s], axis=1), unit_speed=True)
    with pytest.raises(NotUnitSpeedError):
        frenet_data(fake)


@pytest.mark.parametrize("h", [1e-2, 1e-3])
def test_w_curve_curvatures_match_exact_values(h):
    s = np.arange(0, int(round(2 / h)) + 1) * h
    fd = frenet_data(make_w_curve(np.sqrt(2), 1, 1, 1, s))
    inner = fd.interior
    for got, want in zip((fd.kappa1, fd.kappa2, fd.kappa3), W_KAPPAS):
        got = got[inner]
        assert np.max(np.abs(got - want)) < 1e-5
        assert (got.max() - got.min()) / abs(want) < 1e-6 or h < 1e-2
    assert np.max(signature_deviation(fd.frames)) <= 1e-8


def test_w_curve_relative_variation_below_1e_6():
    s = np.linspace(0, 2, 201)
    fd = frenet_data(make_w_curve(np.sqrt(2), 1, 1, 1, s))
    for k in (fd.kappa1, fd.kappa2, fd.kappa3):
        k = k[fd.interior]
        assert (k.max() - k.min()) / abs(np.median(k)) < 1e-6


def test_w_curve_residuals_small():
    s = np.linspace(0, 2, 201)
    values, inner = frenet_residuals(frenet_data(make_w_curve(np.sqrt(2), 1, 1, 1, s)))
    assert np.max(values[inner]) < 1e-5


def test_planar_curve_has_vanishing_second_curvature():
    s = np.linspace(0, 1, 101)
    planar = CurveSamples(s, np.stack([np.sinh(s), np.cosh(s), 0 * s, 0 * s], axis=1), unit_speed=True)
    with pytest.raises(VanishingCurvatureError) as info:
        frenet_data(planar)
    assert info.value.index == 2


def test_signs_and_continuity():
    s = np.linspace(0, 2, 401)
    fd = frenet_data(make_w_curve(np.sqrt(2), 1, 1, 1, s))
    assert fd.kappa1[0] > 0 and fd.kappa2[0] > 0
    for X in (fd.T, fd.N, fd.B1, fd.B2):
        dots = np.einsum("ij,ij->i", X[:-1], X[1:])
        assert np.all(dots > 0)


def test_synthesized_residuals_below_1e_5():
    spec = CurvatureSpec("1+0.5*sin(s)", "1+0.3*s", "0.5+cos(s)", 0.0, 2.0, 1e-3)
    values, inner = frenet_residuals(integrate_frenet(spec).frenet)
    assert np.max(values[inner]) < 1e-5


def test_replaced_b2_shows_up_in_fourth_residual():
    spec = CurvatureSpec("1", "1", "0.5+0.25*s", 0.0, 2.0, 1e-3)
    fd = integrate_frenet(spec).frenet
    frozen = np.tile(np.array([0.0, 0.0, 0.0, 1.0]), (len(fd), 1))
    broken = FrenetData(fd.s, fd.T, fd.N, fd.B1, frozen, fd.kappa1, fd.kappa2, fd.kappa3)
    values, inner = frenet_residuals(broken)
    # B2' = 0 leaves |k3 B1| with the Euclidean norm of B1
    expected = np.abs(fd.kappa3) * np.linalg.norm(fd.B1, axis=1)
    np.testing.assert_allclose(values[inner, 3], expected[inner], rtol=1e-9)
    assert np.min(values[inner, 3]) > 0.4


def test_residuals_converge():
    maxima = []
    for h in (0.05, 0.025, 0.0125):
        spec = CurvatureSpec("2", "1+0.5*cos(s)", "1+s", 0.0, 2.0, h)
        values, inner = frenet_residuals(integrate_frenet(spec).frenet)
        maxima.append(np.max(values[inner]))
    assert maxima[0] / maxima[1] >= 3 and maxima[1] / maxima[2] >= 3


def test_profile_from_functions():
    s = np.linspace(0, 1, 11)
    cp = CurvatureProfile.from_functions(s, np.cos, 2.0, lambda x: x + 1)
    np.testing.assert_array_equal(cp.kappa2, 2.0)
    np.testing.assert_allclose(cp.kappa3, s + 1)
