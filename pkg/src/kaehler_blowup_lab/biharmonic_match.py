"""Biharmonic extensions inside and outside the unit ball of R^(2m).

Boundary data are the value ``h`` and Laplacian ``k`` on the unit sphere,
expanded in spherical harmonics. Every solve is per harmonic degree and uses
the displacement identity

    Δ(r^s Y_l) = [s(s + 2m - 2) - l(l + 2m - 2)] r^(s-2) Y_l,

so all arithmetic is exact (sympy numbers; the degree-0 coefficient of a
constant carries a factor sqrt|S^(2m-1)|).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from math import comb

import numpy as np
import sympy as sp

__all__ = [
    "R",
    "BiharmonicError",
    "harmonic_dimension",
    "displacement",
    "sphere_area_exact",
    "RadialProfile",
    "SphericalData",
    "load_mode_json",
    "ExtensionSolution",
    "interior_extension",
    "exterior_extension",
    "extended_special_solutions",
    "ModeMatrix",
    "matching_matrices",
    "determinant_growth_exponent",
    "write_determinants_csv",
]

R = sp.Symbol("r", positive=True)


class BiharmonicError(ValueError):
    def __init__(self, code: str, value=None, message: str = ""):
        self.code = code
        self.value = value
        super().__init__(f"{code}: {message or value}")


def harmonic_dimension(N: int, l: int) -> int:
    """Dimension of degree-l spherical harmonics on S^(N-1)."""
    if l < 0:
        return 0
    return comb(l + N - 1, N - 1) - (comb(l + N - 3, N - 1) if l >= 2 else 0)


def displacement(s, l: int, m: int):
    """Indicial factor of the Laplacian on r^s Y_l in R^(2m)."""
    return s * (s + 2 * m - 2) - l * (l + 2 * m - 2)


def sphere_area_exact(m: int):
    """|S^(2m-1)| = 2 pi^m / (m-1)!."""
    return 2 * sp.pi**m / sp.factorial(m - 1)


def _num(x):
    if isinstance(x, str):
        return sp.Rational(x)
    return sp.nsimplify(x) if isinstance(x, float) else sp.sympify(x)


# ---------------------------------------------------------------------------
# radial profiles


@dataclass(frozen=True)
class RadialProfile:
    """Finite sum of c r^s and c r^s log r, as {(s, is_log): c}."""

    terms: tuple = ()

    @classmethod
    def of(cls, mapping):
        clean = {k: v for k, v in ((k, _num(v)) for k, v in mapping.items()) if v != 0}
        return cls(tuple(sorted(clean.items(), key=lambda kv: (sp.Rational(kv[0][0]), kv[0][1]))))

    def as_dict(self):
        return dict(self.terms)

    def __add__(self, other):
        d = self.as_dict()
        for k, v in other.terms:
            d[k] = d.get(k, 0) + v
        return RadialProfile.of(d)

    def scale(self, c):
        return RadialProfile.of({k: c * v for k, v in self.terms})

    def laplacian(self, l: int, m: int) -> "RadialProfile":
        out = {}
        for (s, lg), c in self.terms:
            out[(s - 2, lg)] = out.get((s - 2, lg), 0) + c * displacement(s, l, m)
            if lg:
                # extra term from differentiating log r
                out[(s - 2, False)] = out.get((s - 2, False), 0) + c * (2 * s + 2 * m - 2)
        return RadialProfile.of(out)

    def derivative(self) -> "RadialProfile":
        out = {}
        for (s, lg), c in self.terms:
            out[(s - 1, lg)] = out.get((s - 1, lg), 0) + c * s
            if lg:
                out[(s - 1, False)] = out.get((s - 1, False), 0) + c
        return RadialProfile.of(out)

    def at_one(self):
        return sum((c for (s, lg), c in self.terms if not lg), sp.Integer(0))

    def to_sympy(self):
        return sum((c * R**s * (sp.log(R) if lg else 1) for (s, lg), c in self.terms), sp.Integer(0))

    def powers(self):
        return {k for k, _ in self.terms}


# ---------------------------------------------------------------------------
# boundary data


@dataclass
class SphericalData:
    """Coefficients of a function on S^(2m-1) in an orthonormal harmonic basis.

    ``coeffs[l]`` maps a component index (below :func:`harmonic_dimension`
    ``(2m, l)``) to its coefficient; dense lists are accepted and stored
    sparsely. The degree-0 coefficient is the mean times sqrt|S^(2m-1)|.
    """

    m: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.m < 2:
            raise BiharmonicError("invalid", self.m, "m >= 2 required")
        clean = {}
        for l, v in self.coeffs.items():
            l = int(l)
            dim = harmonic_dimension(2 * self.m, l)
            if isinstance(v, dict):
                items = v.items()
            else:
                v = list(v)
                if len(v) != dim:
                    raise BiharmonicError("invalid", l, f"degree {l} needs {dim} coefficients")
                items = enumerate(v)
            comp = {}
            for j, x in items:
                if not 0 <= int(j) < dim:
                    raise BiharmonicError("invalid", l, f"component {j} out of range for degree {l}")
                x = _num(x)
                if x != 0:
                    comp[int(j)] = x
            if comp:
                clean[l] = comp
        self.coeffs = clean

    @classmethod
    def zero(cls, m):
        return cls(m, {})

    @classmethod
    def constant(cls, m, value):
        return cls(m, {0: {0: _num(value) * sp.sqrt(sphere_area_exact(m))}})

    @classmethod
    def mode(cls, m, l, component=0, value=1):
        return cls(m, {l: {component: value}})

    def coeff(self, l, j=0):
        return self.coeffs.get(l, {}).get(j, sp.Integer(0))

    def mean(self):
        return sp.simplify(self.coeff(0) / sp.sqrt(sphere_area_exact(self.m)))

    def integral(self):
        """Integral over the sphere."""
        return sp.simplify(self.coeff(0) * sp.sqrt(sphere_area_exact(self.m)))

    @property
    def lmax(self):
        return max(self.coeffs, default=0)

    def support(self):
        return sorted((l, j) for l, comp in self.coeffs.items() for j in comp)

    def __add__(self, other):
        keys = set(self.support()) | set(other.support())
        out = {}
        for l, j in keys:
            out.setdefault(l, {})[j] = self.coeff(l, j) + other.coeff(l, j)
        return SphericalData(self.m, out)

    def scale(self, c):
        c = _num(c)
        return SphericalData(self.m, {l: {j: c * x for j, x in comp.items()} for l, comp in self.coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, SphericalData) or self.m != other.m:
            return NotImplemented
        keys = set(self.support()) | set(other.support())
        return all(sp.simplify(self.coeff(l, j) - other.coeff(l, j)) == 0 for l, j in keys)

    def to_json(self):
        """Dense lists per degree, as in the mode-coefficient file format."""
        out = {}
        for l in sorted(self.coeffs):
            dense = ["0"] * harmonic_dimension(2 * self.m, l)
            for j, x in self.coeffs[l].items():
                dense[j] = str(x)
            out[str(l)] = dense
        return out

    @classmethod
    def from_json(cls, m, d):
        return cls(m, {int(l): [sp.sympify(x) for x in v] if isinstance(v, list) else
                       {int(j): sp.sympify(x) for j, x in v.items()} for l, v in d.items()})


def load_mode_json(doc):
    """Parse ``{"m", "lmax", "h", "k"}`` into (m, lmax, h, k)."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    m = int(doc["m"])
    h = SphericalData.from_json(m, doc.get("h", {}))
    k = SphericalData.from_json(m, doc.get("k", {}))
    lmax = int(doc.get("lmax", max(h.lmax, k.lmax)))
    return m, lmax, h, k


# ---------------------------------------------------------------------------
# extensions


def interior_basis(l, m):
    return (l, l + 2)


def exterior_basis(l, m):
    return (2 - 2 * m - l, 4 - 2 * m - l)


@dataclass
class ExtensionSolution:
    """Radial profiles keyed by (degree, component).

    The full solution is the sum over keys (l, j) of profile(r) Y_lj.
    """

    side: str
    m: int
    per_mode: dict

    def profile(self, l, component=0) -> RadialProfile:
        return self.per_mode.get((l, component), RadialProfile())

    def boundary(self):
        """(W, ΔW) restricted to r = 1 as spherical data."""
        h, k = {}, {}
        for (l, j), p in self.per_mode.items():
            h.setdefault(l, {})[j] = p.at_one()
            k.setdefault(l, {})[j] = p.laplacian(l, self.m).at_one()
        return SphericalData(self.m, h), SphericalData(self.m, k)

    def is_biharmonic(self):
        return all(not p.laplacian(l, self.m).laplacian(l, self.m).terms for (l, _), p in self.per_mode.items())

    def constant_part(self):
        """Degree-0 part as a function of r (the Y_0 factor included)."""
        return sp.simplify(self.profile(0).to_sympy() / sp.sqrt(sphere_area_exact(self.m)))

    def admissible(self):
        """Structural growth-class check: no excluded radial powers used."""
        return all(p.powers() <= _allowed_powers(self.side, l, self.m) for (l, _), p in self.per_mode.items())

    def to_json(self):
        modes = {}
        for (l, j), p in sorted(self.per_mode.items()):
            modes.setdefault(str(l), {})[str(j)] = [
                {"power": str(s), "log": lg, "coeff": str(c)} for (s, lg), c in p.terms
            ]
        return {"side": self.side, "m": self.m, "modes": modes}


def _allowed_powers(side, l, m):
    if side == "interior":
        a, b = interior_basis(l, m)
        return {(b, False)} if l == 0 else {(a, False), (b, False)}
    a, b = exterior_basis(l, m)
    return {(a, False)} if l == 0 else {(a, False), (b, False)}


def _check_m(h, k):
    if h.m != k.m:
        raise BiharmonicError("invalid", None, "h and k live on different spheres")
    return h.m


def interior_extension(h: SphericalData, k: SphericalData) -> ExtensionSolution:
    """Biharmonic W on the ball, W = h and ΔW = k on the sphere, no r^0 mode.

    Raises
    ------
    BiharmonicError
        ``interior_constraint`` (value: the integral of 4mh - k) when the
        degree-0 data violate 4m h_0 = k_0.
    """
    m = _check_m(h, k)
    viol = sp.simplify(4 * m * h.coeff(0) - k.coeff(0))
    if viol != 0:
        raise BiharmonicError("interior_constraint", sp.simplify(viol * sp.sqrt(sphere_area_exact(m))),
                              "integral of 4mh - k must vanish")
    per = {}
    for l, j in sorted(set(h.support()) | set(k.support())):
        a_pow, b_pow = interior_basis(l, m)
        B = k.coeff(l, j) / (4 * l + 4 * m)  # displacement(l + 2, l, m)
        terms = {(b_pow, False): B} if l == 0 else {(a_pow, False): h.coeff(l, j) - B, (b_pow, False): B}
        per[(l, j)] = RadialProfile.of(terms)
    return ExtensionSolution("interior", m, per)


def exterior_extension(h: SphericalData, k: SphericalData) -> ExtensionSolution:
    """Decaying biharmonic W outside the ball with W = h, ΔW = k on the sphere.

    Raises
    ------
    BiharmonicError
        ``exterior_constraint`` (value: the integral of k) when k has a
        nonzero mean.
    """
    m = _check_m(h, k)
    if sp.simplify(k.coeff(0)) != 0:
        raise BiharmonicError("exterior_constraint", k.integral(), "integral of k must vanish")
    per = {}
    for l, j in sorted(set(h.support()) | set(k.support())):
        c_pow, d_pow = exterior_basis(l, m)
        if l == 0:
            per[(0, j)] = RadialProfile.of({(c_pow, False): h.coeff(0)})
            continue
        D = k.coeff(l, j) / displacement(d_pow, l, m)  # -4(l + m - 2), nonzero for l >= 1
        per[(l, j)] = RadialProfile.of({(c_pow, False): h.coeff(l, j) - D, (d_pow, False): D})
    return ExtensionSolution("exterior", m, per)


def _special_profiles(m, h, k):
    """Degree-0 profiles of the extended constant-data solutions (per unit Y_0)."""
    h, k = _num(h), _num(k)
    wi = RadialProfile.of({(0, False): h})
    if m == 2:
        wo = RadialProfile.of({(0, True): k / 2})
    else:
        c = k / (4 * (m - 2))
        wo = RadialProfile.of({(2 - 2 * m, False): c, (4 - 2 * m, False): -c})
    return wi, wo


def extended_special_solutions(m: int, h_const=0, k_const=0) -> dict:
    """Closed forms that leave the decay classes, used at degree 0 when matching.

    Returns sympy expressions in :data:`R`:
    ``W_i_h0`` is the constant h, ``W_o_0k`` is
    k/(4(m-2)) (r^(2-2m) - r^(4-2m)) for m >= 3 and (k/4) log r^2 for m = 2.
    """
    if m < 2:
        raise BiharmonicError("invalid", m, "m >= 2 required")
    wi, wo = _special_profiles(m, h_const, k_const)
    return {"W_i_h0": wi.to_sympy(), "W_o_0k": wo.to_sympy()}


# ---------------------------------------------------------------------------
# matching


@dataclass(frozen=True)
class ModeMatrix:
    m: int
    l: int
    variant: str
    matrix: sp.Matrix
    det: sp.Expr

    def to_json(self):
        return {"m": self.m, "l": self.l, "variant": self.variant,
                "matrix": [[str(x) for x in row] for row in self.matrix.tolist()], "det": str(self.det)}


def _jump(pi: RadialProfile, po: RadialProfile, l, m):
    d = pi + po.scale(-1)
    return [d.derivative().at_one(), d.laplacian(l, m).derivative().at_one()]


def _mode_matrix(m, l, variant):
    cols = []
    if l == 0 and variant == "constrained":
        # columns: unit coefficient on the single admissible power on each side
        a = RadialProfile.of({(interior_basis(0, m)[1], False): 1})
        b = RadialProfile.of({(exterior_basis(0, m)[0], False): 1})
        cols = [_jump(a, RadialProfile(), 0, m), _jump(RadialProfile(), b, 0, m)]
    elif l == 0:
        for h, k in ((1, 0), (0, 1)):
            wi_h, _ = _special_profiles(m, h, 0)
            # interior: constant h plus the admissible r^2 mode carrying k
            wi = wi_h + RadialProfile.of({(2, False): sp.Rational(k, 4 * m), (0, False): -sp.Rational(k, 4 * m)})
            _, wo_k = _special_profiles(m, 0, k)
            wo = wo_k + RadialProfile.of({(exterior_basis(0, m)[0], False): h})
            cols.append(_jump(wi, wo, 0, m))
    else:
        for h, k in ((1, 0), (0, 1)):
            H = SphericalData.mode(m, l, 0, h)
            K = SphericalData.mode(m, l, 0, k)
            cols.append(_jump(interior_extension(H, K).profile(l), exterior_extension(H, K).profile(l), l, m))
    M = sp.Matrix(cols).T
    return ModeMatrix(m, l, variant, M, M.det())


def matching_matrices(m: int, lmax: int, variant: str = "extended") -> list[ModeMatrix]:
    """Per-degree matrix of (h, k) -> (∂_r(W^i - W^o), ∂_rΔ(W^i - W^o)) at r = 1.

    ``variant="extended"`` uses the extended constant-data solutions at
    degree 0; ``"constrained"`` keeps only the growth-class powers there, with
    columns indexed by their coefficients.
    """
    if m < 2:
        raise BiharmonicError("invalid", m, "m >= 2 required")
    if variant not in ("extended", "constrained"):
        raise BiharmonicError("invalid", variant, "unknown variant")
    return [_mode_matrix(m, l, variant) for l in range(lmax + 1)]


def determinant_growth_exponent(mats, lmin: int = 10) -> float:
    """Slope of log|det| against log l for l >= lmin."""
    pts = [(mm.l, float(abs(mm.det))) for mm in mats if mm.l >= lmin]
    if len(pts) < 2:
        raise BiharmonicError("invalid", lmin, "not enough modes for a fit")
    l, d = np.array(pts).T
    return float(np.polyfit(np.log(l), np.log(d), 1)[0])


def write_determinants_csv(path, mats):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["m", "l", "variant", "det"])
        for mm in mats:
            w.writerow([mm.m, mm.l, mm.variant, str(mm.det)])
