import mpmath
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from kaehler_blowup_lab.biharmonic_match import (
    R,
    BiharmonicError,
    RadialProfile,
    SphericalData,
    determinant_growth_exponent,
    displacement,
    exterior_extension,
    extended_special_solutions,
    harmonic_dimension,
    interior_extension,
    load_mode_json,
    matching_matrices,
    sphere_area_exact,
    write_determinants_csv,
)


def _cartesian_check(profile: RadialProfile, l: int, m: int, point):
    """Cartesian Laplacians of profile(r) * zonal harmonic, by high-precision differences.

    Returns (ΔW - expected ΔW, Δ²W) at ``point``.
    """
    N = 2 * m
    x = sp.symbols(f"x1:{N + 1}", real=True)
    r = sp.sqrt(sum(xi**2 for xi in x))
    zonal = sp.gegenbauer(l, sp.Rational(N - 2, 2), x[0] / r)
    W = sp.lambdify(x, profile.to_sympy().subs(R, r) * zonal, "mpmath")
    LW_expect = sp.lambdify(x, profile.laplacian(l, m).to_sympy().subs(R, r) * zonal, "mpmath")
    with mpmath.workdps(60):
        h = mpmath.mpf("1e-8")
        c = [mpmath.mpf(-1) / 12, mpmath.mpf(4) / 3, mpmath.mpf(-5) / 2, mpmath.mpf(4) / 3, mpmath.mpf(-1) / 12]

        def lap(f):
            def g(*p):
                tot = 0
                for i in range(N):
                    for k, ck in zip(range(-2, 3), c):
                        q = list(p)
                        q[i] += k * h
                        tot += ck * f(*q)
                return tot / h**2
            return g

        p = [mpmath.mpf(v) for v in point]
        d_lap = lap(W)(*p) - LW_expect(*p)
        h = mpmath.mpf("1e-5")  # nested stencil: larger step keeps rounding below truncation
        bilap = lap(lap(W))(*p)
    return float(d_lap), float(bilap)


@pytest.mark.parametrize("m,l", [(2, 0), (2, 1), (2, 2), (3, 1)])
def test_displacement_against_cartesian_laplacian(m, l):
    H = SphericalData.mode(m, l, 0, sp.Rational(2, 3))
    K = SphericalData.mode(m, l, 0, 5) if l else SphericalData.mode(m, 0, 0, sp.Rational(8 * m, 3))
    pt = [mpmath.mpf(k + 2) / 7 for k in range(2 * m)]
    for W in (interior_extension(H, K), exterior_extension(H, K if l else SphericalData.zero(m))):
        d_lap, bilap = _cartesian_check(W.profile(l), l, m, pt)
        assert abs(d_lap) < 1e-20 and abs(bilap) < 1e-12


def test_log_mode_cartesian():
    # (k/4) log r^2 in R^4 has Laplacian k r^-2 and is biharmonic
    prof = RadialProfile.of({(0, True): sp.Rational(1, 2)})
    d_lap, bilap = _cartesian_check(prof, 0, 2, [mpmath.mpf(1) / 3, mpmath.mpf(2) / 5, 1, mpmath.mpf(1) / 7])
    assert abs(d_lap) < 1e-20 and abs(bilap) < 1e-12


def test_harmonic_dimension():
    assert [harmonic_dimension(4, l) for l in range(4)] == [1, 4, 9, 16]
    assert [harmonic_dimension(3, l) for l in range(4)] == [1, 3, 5, 7]
    assert harmonic_dimension(6, 1) == 6 and harmonic_dimension(6, 2) == 20


def test_interior_constant():
    for m in (2, 3, 5):
        b = sp.Rational(3, 7)
        W = interior_extension(SphericalData.constant(m, b), SphericalData.constant(m, 4 * m * b))
        assert sp.simplify(W.constant_part() - b * R**2) == 0
        assert W.admissible() and W.is_biharmonic()


def test_interior_degree_one():
    m = 2
    Y1 = SphericalData.mode(m, 1, 2)
    W = interior_extension(Y1, SphericalData.zero(m))
    assert W.profile(1, 2).to_sympy() == R
    W = interior_extension(SphericalData.zero(m), Y1.scale(4 + 4 * m))
    assert sp.expand(W.profile(1, 2).to_sympy() - (R**3 - R)) == 0


def test_interior_constraint_error():
    with pytest.raises(BiharmonicError) as e:
        interior_extension(SphericalData.constant(2, 1), SphericalData.zero(2))
    assert e.value.code == "interior_constraint"
    assert sp.simplify(e.value.value - 8 * sphere_area_exact(2)) == 0


def test_exterior_constant():
    c = sp.Rational(5, 3)
    for m in (2, 3, 4):
        W = exterior_extension(SphericalData.constant(m, c), SphericalData.zero(m))
        assert sp.simplify(W.constant_part() - c * R ** (2 - 2 * m)) == 0
        assert W.admissible()
    # m = 3 by hand: W = c r^-2 + d r^-4 on the pair {r^-4, r^-2} with W(1) = c, ΔW(1) = 0
    a, d = sp.symbols("a d")
    prof = RadialProfile.of({(-4, False): 1}).scale(a) + RadialProfile.of({(-2, False): 1}).scale(d)
    sol = sp.solve([a + d - c, prof.laplacian(0, 3).at_one()], [a, d])
    assert sol == {a: c, d: 0}


def test_exterior_degree_one_and_error():
    m = 3
    W = exterior_extension(SphericalData.zero(m), SphericalData.mode(m, 1, 0))
    p = W.profile(1)
    assert p.powers() == {(-5, False), (-3, False)}
    assert p.at_one() == 0 and p.laplacian(1, m).at_one() == 1
    with pytest.raises(BiharmonicError) as e:
        exterior_extension(SphericalData.zero(m), SphericalData.constant(m, 1))
    assert e.value.code == "exterior_constraint"


def test_extended_special_solutions():
    assert sp.expand(extended_special_solutions(3, k_const=1)["W_o_0k"] - (R**-4 - R**-2) / 4) == 0
    w = extended_special_solutions(2, k_const=2)["W_o_0k"]
    assert sp.simplify(w - sp.log(R)) == 0
    assert sp.simplify(w - sp.Rational(2, 4) * sp.log(R**2)) == 0
    assert extended_special_solutions(4, h_const=5)["W_i_h0"] == 5
    # their Laplacian at r = 1 returns k and their value vanishes
    for m in (2, 3, 4):
        from kaehler_blowup_lab.biharmonic_match import _special_profiles

        _, wo = _special_profiles(m, 0, 7)
        assert wo.at_one() == 0 and wo.laplacian(0, m).at_one() == 7


def test_displacement_roots():
    s = sp.Symbol("s")
    for m in (2, 3, 4):
        for l in range(4):
            poly = sp.expand(displacement(s, l, m) * displacement(s - 2, l, m))
            for root in (l, l + 2, 2 - 2 * m - l, 4 - 2 * m - l):
                assert poly.subs(s, root) == 0


def test_matching_hand_mode():
    # m = 2, l = 1 assembled by hand: rows (d/dr jump, d/dr Laplacian jump)
    M = matching_matrices(2, 1)[1].matrix
    # k = 1, h = 0: interior (r^3 - r)/12, exterior (r^-3 - r^-1)/4
    # d/dr jump = 1/6 - (-1/2) = 2/3; h column: 1 - (-3) = 4
    assert M == sp.Matrix([[4, sp.Rational(2, 3)], [0, 4]])
    assert M.det() == 16


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_matching_determinants(m):
    mats = matching_matrices(m, 50)
    for mm in mats:
        assert mm.det == (2 * mm.l + 2 * m - 2) ** 2
    exponent = determinant_growth_exponent(mats, lmin=40)
    assert 1.5 < exponent < 2.1


def test_constrained_variant_degenerate_at_zero():
    for m in (2, 3, 4):
        mats = matching_matrices(m, 3, "constrained")
        assert mats[0].det == 0
        assert all(mm.det != 0 for mm in mats[1:])


def test_boundary_reproduction_and_json(tmp_path):
    doc = {"m": 2, "lmax": 8, "h": {"0": ["1"], "1": ["0", "2", "0", "0"]}, "k": {"0": ["8"], "1": ["1/3", "0", "0", "0"]}}
    m, lmax, h, k = load_mode_json(doc)
    assert (m, lmax) == (2, 8)
    W = interior_extension(h, k)
    bh, bk = W.boundary()
    assert bh == h and bk == k
    assert h.to_json() == doc["h"]
    Wo = exterior_extension(h, SphericalData(2, {1: k.coeffs[1]}))
    bh, bk = Wo.boundary()
    assert bh == h and bk == SphericalData(2, {1: k.coeffs[1]})
    assert W.to_json()["modes"]["1"]["0"][0]["power"] == "1"
    path = tmp_path / "dets.csv"
    write_determinants_csv(path, matching_matrices(3, 4))
    assert path.read_text().splitlines()[:2] == ["m,l,variant,det", "3,0,extended,16"]


def test_invalid_inputs():
    with pytest.raises(BiharmonicError):
        SphericalData(1, {})
    with pytest.raises(BiharmonicError):
        SphericalData(2, {1: ["1", "2"]})
    with pytest.raises(BiharmonicError):
        matching_matrices(2, 3, "other")


rat = st.fractions(min_value=-4, max_value=4, max_denominator=6)


def _data(m, vals):
    return SphericalData(m, {1: {0: vals[0], 3: vals[1]}, 2: {1: vals[2]}, 4: {0: vals[3]}})


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 4), st.lists(rat, min_size=4, max_size=4), st.lists(rat, min_size=4, max_size=4),
       st.lists(rat, min_size=4, max_size=4), st.lists(rat, min_size=4, max_size=4), rat, rat, rat)
def test_linearity_and_reproduction(m, h1, k1, h2, k2, alpha, c1, c2):
    H1 = _data(m, h1) + SphericalData.constant(m, c1)
    K1 = _data(m, k1) + SphericalData.constant(m, 4 * m * c1)
    H2 = _data(m, h2) + SphericalData.constant(m, c2)
    K2 = _data(m, k2) + SphericalData.constant(m, 4 * m * c2)
    comb = interior_extension(H1.scale(alpha) + H2, K1.scale(alpha) + K2)
    a, b = interior_extension(H1, K1), interior_extension(H2, K2)
    for key in set(comb.per_mode) | set(a.per_mode) | set(b.per_mode):
        lhs = comb.profile(*key)
        rhs = a.profile(*key).scale(alpha) + b.profile(*key)
        assert (lhs + rhs.scale(-1)).terms == ()
    bh, bk = comb.boundary()
    assert bh == H1.scale(alpha) + H2 and bk == K1.scale(alpha) + K2
    assert comb.is_biharmonic() and comb.admissible()
    ext = exterior_extension(_data(m, h1), _data(m, k1))
    bh, bk = ext.boundary()
    assert bh == _data(m, h1) and bk == _data(m, k1)
    assert ext.is_biharmonic() and ext.admissible()
