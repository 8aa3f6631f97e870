import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from kaehler_blowup_lab.oracles import hessian_scalar_curvature
from kaehler_blowup_lab.radial_metrics import (
    T,
    MomentumProfile,
    RadialError,
    RadialPotential,
    ScheduleParams,
    SampledPotential,
    burns_simanca,
    burns_simanca_psi0,
    log_grid_derivative,
    mass_constant,
    radial_scalar_curvature,
    scalar_from_momentum,
    schedules,
    sphere_area,
)


@pytest.fixture(scope="module")
def bs3():
    return burns_simanca(3)


@pytest.fixture(scope="module")
def bs4():
    return burns_simanca(4)


@pytest.mark.parametrize("m", [1, 2, 3, 5])
def test_euclidean_is_flat(m):
    t = np.geomspace(1e-3, 1e3, 50)
    assert_allclose(radial_scalar_curvature(RadialPotential.euclidean(m), t), 0, atol=1e-14)


def test_e2_scalar_flat():
    P = RadialPotential.burns_simanca_2()
    for t in ("1/2", 1, 10):
        assert radial_scalar_curvature(P, t, exact=True) == 0
    grid = np.array([0.5, 1.0, 10.0])
    sampled = P.sampled(grid)
    assert_allclose(radial_scalar_curvature(sampled, grid), 0, atol=1e-12)
    assert P.scalar_expr() == 0


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_fubini_study_constant(m):
    P = RadialPotential.fubini_study(m)
    assert radial_scalar_curvature(P, 1, exact=True) == 2 * m * (m + 1)
    t = np.geomspace(1e-3, 1e3, 100)
    assert_allclose(radial_scalar_curvature(P, t), 2 * m * (m + 1), rtol=1e-12)


def test_formula_against_hessian_oracle():
    # a potential with no special structure
    P = RadialPotential(T / 2 + sp.log(1 + T) + T**2 / 7, 2)
    for pt in [(0.4, 0.3j), (1.2 - 0.5j, 0.8)]:
        t = sum(abs(c) ** 2 for c in pt)
        assert_allclose(radial_scalar_curvature(P, t), hessian_scalar_curvature(P.expr, 2, pt), rtol=1e-12)


def test_not_kahler():
    P = RadialPotential(-T, 2)
    with pytest.raises(RadialError) as e:
        radial_scalar_curvature(P, 1.0)
    assert e.value.code == "not_kahler_at_t"
    with pytest.raises(RadialError):
        radial_scalar_curvature(P, 1, exact=True)
    # F' = 1 - t/4 stays positive up to 4, F' + tF'' = 1 - t/2 only up to 2
    Q = RadialPotential(T - T**2 / 8, 2)
    radial_scalar_curvature(Q, 0.5)
    with pytest.raises(RadialError):
        radial_scalar_curvature(Q, 3.0)


@settings(max_examples=30, deadline=None)
@given(st.fractions(min_value=-10, max_value=10, max_denominator=7), st.integers(1, 4))
def test_shift_invariance(c, m):
    P = RadialPotential.fubini_study(m)
    Q = RadialPotential(P.expr + sp.Rational(c.numerator, c.denominator), m)
    assert radial_scalar_curvature(Q, "3/2", exact=True) == radial_scalar_curvature(P, "3/2", exact=True)


@pytest.mark.parametrize("a2", [0.25, 3.0, 17.0])
def test_scaling_law_closed_form(a2):
    t = np.geomspace(1e-2, 1e2, 20)
    for P in (RadialPotential.fubini_study(3), RadialPotential.burns_simanca_2()):
        # a^2 times the metric
        assert_allclose(radial_scalar_curvature(P.scaled(a2), t), radial_scalar_curvature(P, t) / a2, rtol=1e-8, atol=1e-12)
        # rescaled coordinates: F_a(t) = a^2 F(t / a^2)
        Pa = RadialPotential(sp.nsimplify(a2) * P.expr.subs(T, T / sp.nsimplify(a2)), P.m)
        assert_allclose(radial_scalar_curvature(Pa, t * a2), radial_scalar_curvature(P, t) / a2, rtol=1e-8, atol=1e-12)


@pytest.mark.parametrize("a2", [0.5, 4.0])
def test_scaling_law_momentum(bs3, a2):
    # psi_a(t) = a^2 psi(t / a^2): each derivative loses a factor a^2
    p = bs3
    sel = slice(2000, None, 500)
    t = p.t[sel]
    s = scalar_from_momentum(t, 3, p.psi[sel], p.dpsi[sel], p.d2psi[sel], p.d3psi[sel], p.eta[sel])
    sa = scalar_from_momentum(a2 * t, 3, a2 * p.psi[sel], p.dpsi[sel], p.d2psi[sel] / a2, p.d3psi[sel] / a2**2,
                              a2 * p.eta[sel])
    assert_allclose(sa, s / a2, rtol=1e-8, atol=1e-12)
    fs = RadialPotential.fubini_study(3)
    psi = lambda t: t / (1 + t)
    d = [sp.lambdify(T, sp.diff(T / (1 + T), T, k)) for k in (1, 2, 3)]
    tt = np.geomspace(1e-2, 1e2, 9)
    sa = scalar_from_momentum(a2 * tt, 3, a2 * psi(tt), d[0](tt), d[1](tt) / a2, d[2](tt) / a2**2)
    assert_allclose(sa, radial_scalar_curvature(fs, tt) / a2, rtol=1e-8)


def _fd_errors(n):
    t = np.geomspace(0.1, 10, n)
    S = SampledPotential.from_samples(t, np.log1p(t), 2)
    inner = slice(n // 10, -(n // 10))  # one-sided stencils compound at the edges
    e1 = np.max(np.abs(S.F1 - 1 / (1 + t))[inner] * (1 + t[inner]))
    e2 = np.max(np.abs(S.F2 + 1 / (1 + t) ** 2)[inner] * (1 + t[inner]) ** 2)
    es = np.max(np.abs(radial_scalar_curvature(S, t[inner]) - 12))
    return e1, e2, es


def test_sampled_derivatives_second_order():
    errs = np.array([_fd_errors(n) for n in (100, 200, 400, 800)])
    orders = np.log2(errs[:-1] / errs[1:])
    assert np.all(orders > 1.8), orders
    assert errs[-1, 2] < 1e-2


def test_sampled_mode_misc():
    t = np.geomspace(0.1, 10, 50)
    S = SampledPotential.from_samples(t, np.log1p(t), 2)
    with pytest.raises(RadialError):
        radial_scalar_curvature(S, 0.123456)
    assert_allclose(log_grid_derivative(t, np.log(t)), 1 / t, rtol=1e-12)
    assert_allclose(RadialPotential.fubini_study(2).sampled(t).F1, 1 / (1 + t))


def test_bs2_closed_form():
    p = burns_simanca(2)
    assert p.psi0 == 1.0
    assert_allclose(p.psi, p.t / 2 + 1, rtol=0, atol=0)
    # momentum-form rounding only; psi itself is exact
    assert np.max(np.abs(p.scalar_curvature())) < 1e-10
    t = np.geomspace(1e-2, 1e4, 1000)
    assert np.max(np.abs(radial_scalar_curvature(RadialPotential.burns_simanca_2(), t))) < 1e-12


@pytest.mark.parametrize("m", [3, 4])
def test_psi0_oracle_formula_first_integral(m):
    # psi^(m-1) phi = psi^m + A psi + B with phi(psi0) = 0 and phi'(psi0) = 1
    psi0 = burns_simanca_psi0(m)
    A = -(m - 1) * psi0 ** (m - 1)
    B = (m - 2) * psi0**m
    assert_allclose(psi0**m + A * psi0 + B, 0, atol=1e-14)
    # large-psi data: phi = psi - (m-2)^2 (2 psi)^(2-m) ... forces A through the t^(2-m) term
    assert_allclose(A, -(m - 1) * (m - 2) * 2.0 ** (2 - m), rtol=1e-14)


def test_bs3_shooting(bs3):
    p = bs3
    assert p.psi0 > 0
    assert_allclose(p.psi0, burns_simanca_psi0(3), rtol=1e-6)
    assert p.max_residual() < 1e-6
    assert abs(p.decay_exponent() - (-1)) < 0.1
    assert np.all(p.psi > 0) and np.all(p.dpsi > 0)
    assert p.psi[0] <= 1.01 * p.psi0


def test_bs4_shooting(bs4):
    p = bs4
    assert_allclose(p.psi0, burns_simanca_psi0(4), rtol=1e-6)
    assert p.max_residual() < 1e-6
    assert abs(p.decay_exponent() - (-2)) < 0.2
    assert p.psi[0] <= 1.01 * p.psi0


def test_bs3_stable_in_T(bs3):
    far = burns_simanca(3, T=1e5)
    assert f"{far.psi0:.4g}" == f"{bs3.psi0:.4g}"


def test_bs_leading_asymptotics(bs3):
    # psi - t/2 ~ (m-2) t^(2-m) = 1/t
    p = bs3
    assert_allclose(p.delta[-1] * p.t[-1], 1.0, rtol=1e-3)


def test_cache_and_csv(tmp_path, bs3):
    p = burns_simanca(3, cache_dir=tmp_path)
    files = list(tmp_path.glob("*.npz"))
    assert [f.name for f in files] == ["bs_m3_T10000_tol1e-10.npz"]
    q = burns_simanca(3, cache_dir=tmp_path)
    assert_allclose(q.psi, p.psi)
    assert isinstance(MomentumProfile.load(files[0]), MomentumProfile)
    out = tmp_path / "bs.csv"
    p.to_csv(out)
    data = np.loadtxt(out, delimiter=",", skiprows=1)
    assert data.shape == (len(p.t), 4)
    assert out.read_text().splitlines()[0] == "t,psi,F_prime,s"


def test_burns_simanca_invalid():
    with pytest.raises(RadialError):
        burns_simanca(1)


def test_schedules():
    s = schedules(ScheduleParams(1e-3, 2))
    assert_allclose(s["r_eps"], 10 ** (-9 / 5), rtol=1e-12)
    assert_allclose(s["R_eps"], 10 ** (6 / 5), rtol=1e-12)
    assert_allclose(s["R_eps"], s["r_eps"] / 1e-3, rtol=1e-12)
    assert str(s["drift_exponent"]) == "2/5"
    assert_allclose(schedules(ScheduleParams(1e-2, 3))["r_eps"], 10 ** (-10 / 7), rtol=1e-12)
    eps = [10.0**-k for k in range(1, 8)]
    for m in (2, 3, 4):
        r = [schedules(ScheduleParams(e, m))["r_eps"] for e in eps]
        R = [schedules(ScheduleParams(e, m))["R_eps"] for e in eps]
        assert all(a > b for a, b in zip(r, r[1:])) and all(a < b for a, b in zip(R, R[1:]))
    for bad in (0.0, 1.0, -0.5):
        with pytest.raises(RadialError):
            ScheduleParams(bad, 2)
    with pytest.raises(RadialError):
        ScheduleParams(0.5, 1)


def _sphere_recursive(n):
    # |S^0| = 2, |S^1| = 2 pi, |S^n| = 2 pi / (n - 1) |S^(n-2)|
    if n == 0:
        return 2.0
    if n == 1:
        return 2 * math.pi
    return 2 * math.pi / (n - 1) * _sphere_recursive(n - 2)


def test_sphere_area_recursion():
    for n in range(0, 12):
        assert_allclose(sphere_area(n), _sphere_recursive(n), rtol=1e-14)


def test_mass_constants():
    assert_allclose(mass_constant(2), 4 * math.pi**2, rtol=1e-14)
    assert_allclose(mass_constant(3), 8 * math.pi**3, rtol=1e-14)
    assert_allclose(mass_constant(4), 8 * math.pi**4, rtol=1e-14)
    for m in range(3, 7):
        assert_allclose(mass_constant(m), 4 * (m - 1) * (m - 2) * _sphere_recursive(2 * m - 1), rtol=1e-14)
    with pytest.raises(RadialError):
        mass_constant(1)
