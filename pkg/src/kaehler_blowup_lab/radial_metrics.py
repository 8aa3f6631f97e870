"""U(m)-invariant Kähler potentials F(t), t = |v|^2, on C^m or its blow-up at 0.

The metric i∂∂̄F(|v|^2) has eigenvalues F'(t) (multiplicity m-1, tangent to
the spheres) and F'(t) + tF''(t) (radial). With

    G = (m-1) log F' + log(F' + tF''),

the scalar curvature in the convention s(Fubini-Study) = 2m(m+1) is

    s = -2 [ (m-1) G'/F' + (G' + tG'')/(F' + tF'') ].

The momentum profile psi = tF' turns the scalar-flat equation into a
second-order ODE for phi = t psi' viewed as a function of psi; the
Burns-Simanca metrics for m >= 3 are found by shooting on that ODE from the
known large-t asymptotics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np
import sympy as sp
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

__all__ = [
    "T",
    "RadialError",
    "RadialPotential",
    "SampledPotential",
    "MomentumProfile",
    "ScheduleParams",
    "radial_scalar_curvature",
    "scalar_from_momentum",
    "burns_simanca",
    "burns_simanca_psi0",
    "schedules",
    "mass_constant",
    "sphere_area",
    "log_grid_derivative",
]

T = sp.Symbol("t", positive=True)


class RadialError(ValueError):
    def __init__(self, code: str, message: str = ""):
        super().__init__(f"{code}: {message}" if message else code)
        self.code = code


def _scalar_from_pq(t, m, p, dp, ddp, q, dq, ddq):
    # p = F', q = F' + tF'' and their t-derivatives
    Gp = (m - 1) * dp / p + dq / q
    Gpp = (m - 1) * (ddp / p - (dp / p) ** 2) + ddq / q - (dq / q) ** 2
    return -2 * ((m - 1) * Gp / p + (Gp + t * Gpp) / q)


def _scalar_from_F(t, m, F1, F2, F3, F4):
    p, dp, ddp = F1, F2, F3
    q = F1 + t * F2
    dq = 2 * F2 + t * F3
    ddq = 3 * F3 + t * F4
    return _scalar_from_pq(t, m, p, dp, ddp, q, dq, ddq)


def _scalar_x_form(m, psi, phi, Gx, Gxx):
    # same formula in x = log t: G' = G_x/t and G' + tG'' = G_xx/t, with tF' = psi, t(F' + tF'') = phi
    return -2 * ((m - 1) * Gx / psi + Gxx / phi)


def scalar_from_momentum(t, m, psi, dpsi, d2psi, d3psi, eta=None):
    """Scalar curvature from psi = tF' and its first three t-derivatives.

    ``eta = t psi' - psi`` may be supplied when it is known without
    cancellation (it is tiny compared with psi at large t).
    """
    t = np.asarray(t, dtype=float)
    phi = t * dpsi
    if eta is None:
        eta = phi - psi
    r = eta / psi
    k = t * d2psi / dpsi
    Gx = (m - 1) * r + k
    Gxx = (m - 1) * (t * t * d2psi / psi - r * (1 + r)) + t * (d2psi + t * d3psi) / dpsi - k * k
    return _scalar_x_form(m, psi, phi, Gx, Gxx)


class RadialPotential:
    """Closed-form radial potential ``F(t)`` as a sympy expression in :data:`T`.

    Parameters
    ----------
    expr : sympy expression or str
        The potential as a function of ``t = |v|^2``.
    m : int
        Complex dimension.
    kind : str
        One of ``euclidean``, ``fubini_study``, ``burns_simanca_2``, ``custom``.
    """

    def __init__(self, expr, m: int, kind: str = "custom"):
        if m < 1:
            raise ValueError("m must be positive")
        self.expr = sp.sympify(expr, locals={"t": T})
        self.m = m
        self.kind = kind
        self._derivs = [sp.diff(self.expr, T, k) for k in range(1, 5)]
        self._num = sp.lambdify(T, self._derivs, "numpy")
        self._s_expr = None
        self._xform = None

    @classmethod
    def euclidean(cls, m):
        return cls(T / 2, m, "euclidean")

    @classmethod
    def fubini_study(cls, m):
        return cls(sp.log(1 + T), m, "fubini_study")

    @classmethod
    def burns_simanca_2(cls):
        return cls(T / 2 + sp.log(T), 2, "burns_simanca_2")

    def derivatives(self, t):
        t = np.asarray(t, dtype=float)
        return tuple(np.broadcast_to(np.asarray(d, dtype=float), t.shape) for d in self._num(t))

    def scalar_expr(self):
        """Simplified symbolic scalar curvature."""
        if self._s_expr is None:
            F1, F2, F3, F4 = self._derivs
            self._s_expr = sp.simplify(_scalar_from_F(T, self.m, F1, F2, F3, F4))
        return self._s_expr

    def x_form(self):
        """Numeric callables for (psi, phi, G_x, G_xx), simplified symbolically first."""
        if self._xform is None:
            F1, F2 = self._derivs[:2]
            psi = sp.simplify(T * F1)
            phi = sp.simplify(T * (F1 + T * F2))
            G = (self.m - 1) * sp.log(F1) + sp.log(F1 + T * F2)
            Gx = sp.simplify(T * sp.diff(G, T))
            Gxx = sp.simplify(T * sp.diff(Gx, T))
            self._xform = sp.lambdify(T, [psi, phi, Gx, Gxx], "numpy")
        return self._xform

    def sampled(self, t_grid) -> "SampledPotential":
        t_grid = np.asarray(t_grid, dtype=float)
        F = np.asarray(sp.lambdify(T, self.expr, "numpy")(t_grid), dtype=float) * np.ones_like(t_grid)
        return SampledPotential(t_grid, F, *self.derivatives(t_grid), m=self.m)

    def scaled(self, a2):
        """Potential of a^2 times the metric."""
        return RadialPotential(sp.nsimplify(a2) * self.expr, self.m, "custom")

    def __repr__(self):
        return f"RadialPotential({self.expr}, m={self.m}, kind={self.kind!r})"


@dataclass
class SampledPotential:
    """F and its derivatives on a grid in t.

    Built either from a closed form (derivatives exact to rounding) or from
    raw samples via :meth:`from_samples` (finite differences, second order).
    """

    t: np.ndarray
    F: np.ndarray
    F1: np.ndarray
    F2: np.ndarray
    F3: np.ndarray
    F4: np.ndarray
    m: int = 2

    @classmethod
    def from_samples(cls, t, F, m):
        t = np.asarray(t, dtype=float)
        F = np.asarray(F, dtype=float)
        d = [F]
        for _ in range(4):
            d.append(log_grid_derivative(t, d[-1]))
        return cls(t, F, d[1], d[2], d[3], d[4], m)

    def at(self, t):
        i = int(np.argmin(np.abs(self.t - t)))
        if not np.isclose(self.t[i], t, rtol=1e-12, atol=0):
            raise RadialError("off_grid", f"t = {t} is not a grid point")
        return i


def log_grid_derivative(t, y):
    """dy/dt on a (typically logarithmic) grid, second-order accurate.

    Differentiates in x = log t with :func:`numpy.gradient` and applies the
    chain rule, which keeps the stencil uniform on a log grid.
    """
    x = np.log(t)
    return np.gradient(y, x, edge_order=2) / t


def radial_scalar_curvature(P, t, *, exact: bool = False):
    """Scalar curvature of a radial potential at ``t``.

    Parameters
    ----------
    P : RadialPotential or SampledPotential
    t : float, array or rational
        Evaluation point(s); for sampled potentials they must be grid points.
    exact : bool
        Closed-form mode only: return a simplified sympy value.

    Raises
    ------
    RadialError
        ``not_kahler_at_t`` when F' <= 0 or F' + tF'' <= 0.
    """
    if isinstance(P, RadialPotential):
        if exact:
            t_ = sp.nsimplify(t)
            F1, F2 = (d.subs(T, t_) for d in P._derivs[:2])
            if not (F1 > 0 and F1 + t_ * F2 > 0):
                raise RadialError("not_kahler_at_t", f"metric degenerate at t = {t}")
            return sp.simplify(P.scalar_expr().subs(T, t_))
        tt = np.asarray(t, dtype=float)
        F1, F2 = P.derivatives(tt)[:2]
        if np.any(F1 <= 0) or np.any(F1 + tt * F2 <= 0):
            raise RadialError("not_kahler_at_t", "F' > 0 and F' + tF'' > 0 are required")
        vals = [np.broadcast_to(np.asarray(v, dtype=float), tt.shape) for v in P.x_form()(tt)]
        s = _scalar_x_form(P.m, *vals)
        return float(s) if np.ndim(s) == 0 else s
    else:
        tt = np.asarray(t, dtype=float)
        idx = np.vectorize(P.at)(tt) if tt.ndim else P.at(float(tt))
        F1, F2, F3, F4 = P.F1[idx], P.F2[idx], P.F3[idx], P.F4[idx]
        m = P.m
    if np.any(F1 <= 0) or np.any(F1 + tt * F2 <= 0):
        raise RadialError("not_kahler_at_t", "F' > 0 and F' + tF'' > 0 are required")
    s = _scalar_from_F(tt, m, F1, F2, F3, F4)
    return float(s) if np.ndim(s) == 0 else s


# ---------------------------------------------------------------------------
# Burns-Simanca


@dataclass
class MomentumProfile:
    """psi = tF' with its derivatives on a log grid."""

    m: int
    t: np.ndarray
    psi: np.ndarray
    dpsi: np.ndarray
    d2psi: np.ndarray
    d3psi: np.ndarray
    psi0: float
    delta: np.ndarray | None = None  # psi - t/2, kept separately to avoid cancellation
    eta: np.ndarray | None = None  # t psi' - psi, same reason
    meta: dict = field(default_factory=dict)

    @property
    def F_prime(self):
        return self.psi / self.t

    def scalar_curvature(self):
        return scalar_from_momentum(self.t, self.m, self.psi, self.dpsi, self.d2psi, self.d3psi, self.eta)

    def max_residual(self, t_lo=None):
        s = self.scalar_curvature()
        mask = np.ones_like(self.t, dtype=bool) if t_lo is None else self.t >= t_lo
        return float(np.max(np.abs(s[mask])))

    def decay_exponent(self, lo=None, hi=None):
        """Least-squares slope of log(psi - t/2) against log t on [lo, hi]."""
        hi = self.t[-1] if hi is None else hi
        lo = hi / 10 if lo is None else lo
        d = self.delta if self.delta is not None else self.psi - self.t / 2
        mask = (self.t >= lo) & (self.t <= hi)
        slope, _ = np.polyfit(np.log(self.t[mask]), np.log(d[mask]), 1)
        return float(slope)

    def to_csv(self, path):
        data = np.column_stack([self.t, self.psi, self.F_prime, self.scalar_curvature()])
        np.savetxt(path, data, delimiter=",", header="t,psi,F_prime,s", comments="")

    def save(self, path):
        np.savez(path, m=self.m, t=self.t, psi=self.psi, dpsi=self.dpsi, d2psi=self.d2psi,
                 d3psi=self.d3psi, psi0=self.psi0, delta=_or_empty(self.delta), eta=_or_empty(self.eta))

    @classmethod
    def load(cls, path):
        z = np.load(path)
        opt = [z[k] if z[k].size else None for k in ("delta", "eta")]
        return cls(int(z["m"]), z["t"], z["psi"], z["dpsi"], z["d2psi"], z["d3psi"], float(z["psi0"]), *opt,
                   {"cached": str(path)})


def _or_empty(a):
    return np.array([]) if a is None else a


def _phi2(m, psi, eta, omega):
    # phi''(psi) from the scalar-flat equation, with phi = psi + eta, phi' = 1 + omega
    return -(m - 1) * ((m - 2) * eta / psi**2 + 2 * omega / psi)


# State in x = log t: delta = psi - t/2, chi = phi - t/2, omega = dphi/dpsi - 1.
# Subtracting t/2 from both psi and phi keeps every component small at large t
# without forming phi - psi, which would cancel near the divisor.


def _rhs(m):
    def f(x, y):
        delta, chi, omega = y
        t = math.exp(x)
        psi = t / 2 + delta
        phi = t / 2 + chi
        return [chi, chi + omega * phi, _phi2(m, psi, chi - delta, omega) * phi]

    return f


def _initial_state(m, T_, b):
    c = m - 2
    # psi = t/2 + c t^(2-m) + b t^(1-m) and its exact derivatives
    delta = c * T_ ** (2 - m) + b * T_ ** (1 - m)
    dpsi = 0.5 + c * (2 - m) * T_ ** (1 - m) + b * (1 - m) * T_ ** (-m)
    d2psi = c * (2 - m) * (1 - m) * T_ ** (-m) + b * (1 - m) * (-m) * T_ ** (-m - 1)
    chi = c * (2 - m) * T_ ** (2 - m) + b * (1 - m) * T_ ** (1 - m)
    omega = T_ * d2psi / dpsi
    return [delta, chi, omega]


def _shoot(m, T_, b, t_min, rtol, dense=False):
    def collapsed(x, y):
        return math.exp(x) / 2 + y[0] - 1e-6

    collapsed.terminal = True
    return solve_ivp(
        _rhs(m), (math.log(T_), math.log(t_min)), _initial_state(m, T_, b),
        method="DOP853", rtol=rtol, atol=1e-16, dense_output=dense, events=collapsed,
    )


def _omega_end(m, T_, b, t_min, rtol):
    sol = _shoot(m, T_, b, t_min, rtol)
    if sol.status != 0 or not np.all(np.isfinite(sol.y[:, -1])):
        return -1.0  # psi collapsed before t_min: no divisor, below any admissible cone angle
    return float(sol.y[2, -1])


def burns_simanca(m: int, T: float = 1e4, *, rtol: float = 1e-10, t_min: float = 1e-8,
                  t_grid_min: float = 1e-4, n_grid: int = 10_000, cache_dir=None) -> MomentumProfile:
    """Momentum profile of the scalar-flat Burns-Simanca metric on Bl_0 C^m.

    For m = 2 the profile is psi = t/2 + 1. For m >= 3 the large-t data
    ``psi = t/2 + (m-2) t^(2-m) + b t^(1-m)`` is integrated inward and ``b`` is
    tuned so the metric closes smoothly on the exceptional divisor
    (d phi / d psi = 1 where phi = t psi' vanishes).

    Raises
    ------
    RadialError
        ``shooting_failed`` when no admissible ``b`` is bracketed or the
        residual check fails.
    """
    if m < 2:
        raise RadialError("invalid", "m >= 2 required")
    if cache_dir is not None:
        path = Path(cache_dir) / f"bs_m{m}_T{T:g}_tol{rtol:g}.npz"
        if path.exists():
            return MomentumProfile.load(path)
    # the shooting runs down to t_min; the stored grid stops at t_grid_min, where
    # the scalar-curvature formula is still well conditioned in floating point
    t = np.geomspace(t_grid_min, T, n_grid)
    if m == 2:
        prof = MomentumProfile(2, t, t / 2 + 1, np.full_like(t, 0.5), np.zeros_like(t), np.zeros_like(t), 1.0,
                               np.ones_like(t), np.full_like(t, -1.0), {"closed_form": True})
    else:
        prof = _burns_simanca_shooting(m, T, rtol, t_min, t)
    if cache_dir is not None:
        Path(cache_dir).mkdir(parents=True, exist_ok=True)
        prof.save(path)
    return prof


def _burns_simanca_shooting(m, T_, rtol, t_min, t):
    # bracket: b = 0 gives a cone angle m - 1 > 1 (omega > 0); decreasing b lowers it
    g = lambda b: _omega_end(m, T_, b, t_min, rtol)
    hi, g_hi = 0.0, g(0.0)
    lo, step = None, 0.05
    b = 0.0
    for _ in range(400):
        b -= step
        val = g(b)
        if val < 0:
            lo = b
            break
        hi, g_hi = b, val
    if lo is None or g_hi <= 0:
        raise RadialError("shooting_failed", "could not bracket the smooth-closing parameter")
    b_star = brentq(g, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    sol = _shoot(m, T_, b_star, t_min, rtol, dense=True)
    if sol.status != 0:
        raise RadialError("shooting_failed", f"integration stopped early: {sol.message}")
    x = np.log(t)
    delta, chi, omega = sol.sol(x)
    psi = t / 2 + delta
    phi = t / 2 + chi
    eta = chi - delta
    dpsi = phi / t
    d2psi = omega * dpsi / t
    # psi''' by a five-point difference of the dense psi'' rather than from the ODE,
    # so the curvature residual is an independent check of the integration
    def d2(xx):
        d_, c_, o_ = sol.sol(xx)
        tt = np.exp(xx)
        return o_ * (tt / 2 + c_) / tt**2

    h = 1e-3
    d3psi = (-d2(x + 2 * h) + 8 * d2(x + h) - 8 * d2(x - h) + d2(x - 2 * h)) / (12 * h) / t
    d_end, chi_end, _ = sol.y[:, -1]
    psi0 = float(t_min / 2 + d_end - (t_min / 2 + chi_end))  # psi - t psi' at t_min
    prof = MomentumProfile(m, t, psi, dpsi, d2psi, d3psi, psi0, delta, eta,
                           {"b": b_star, "omega_end": float(sol.y[2, -1]), "T": T_, "rtol": rtol})
    if not (np.all(psi > 0) and np.all(dpsi > 0)):
        raise RadialError("shooting_failed", "profile is not positive")
    return prof


def burns_simanca_psi0(m: int) -> float:
    """Divisor size psi(0+) predicted by the first integrals of the ODE.

    Integrating the scalar-flat equation twice gives
    psi^(m-1) phi = psi^m + A psi + B; smooth closing and the asymptotic
    normalization fix A and B, hence psi0 = ((m-2) 2^(2-m))^(1/(m-1)).
    """
    if m == 2:
        return 1.0
    return ((m - 2) * 2.0 ** (2 - m)) ** (1.0 / (m - 1))


# ---------------------------------------------------------------------------
# schedules and constants


@dataclass(frozen=True)
class ScheduleParams:
    epsilon: float
    m: int

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise RadialError("invalid", "epsilon must lie in (0, 1)")
        if self.m < 2:
            raise RadialError("invalid", "m >= 2 required")


def schedules(p: ScheduleParams) -> dict:
    """Gluing radii: r_eps = eps^((2m-1)/(2m+1)), R_eps = r_eps / eps."""
    m = p.m
    r_exp = Fraction(2 * m - 1, 2 * m + 1)
    R_exp = r_exp - 1
    return {
        "r_eps": p.epsilon ** float(r_exp),
        "R_eps": p.epsilon ** float(R_exp),
        "r_exponent": r_exp,
        "R_exponent": R_exp,
        "drift_exponent": Fraction(2, 2 * m + 1),
    }


def sphere_area(n: int) -> float:
    """Area of the unit sphere S^n in R^(n+1)."""
    return 2 * math.pi ** ((n + 1) / 2) / math.gamma((n + 1) / 2)


def mass_constant(m: int) -> float:
    """c_2 = 2|S^3| and c_m = 4(m-1)(m-2)|S^(2m-1)| for m >= 3."""
    if m < 2:
        raise RadialError("invalid", "m >= 2 required")
    area = 2 * math.pi**m / math.factorial(m - 1)
    if m == 2:
        return 2 * area
    return 4 * (m - 1) * (m - 2) * area
