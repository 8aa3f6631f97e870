"""Independent checks for the closed-form formulas used elsewhere.

* Monte-Carlo integration over the unit sphere S^{2m+1} in C^{m+1} for the
  Fubini-Study mean ``tr(A)/(m+1)`` and the L^2 pairing of potentials.
* A symbolic computation of the scalar curvature of a radial potential from
  the full complex Hessian, s = -2 g^{i j̄} ∂_i ∂_j̄ log det g, with no use of
  the one-variable reduction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import sympy as sp

from ._exact import GaussianRational
from .projective_actions import HermitianGenerator, l2_pairing
from .radial_metrics import T, RadialPotential, radial_scalar_curvature

__all__ = [
    "GateResult",
    "sphere_samples",
    "random_hermitian",
    "run_moment_gates",
    "hessian_scalar_curvature",
    "run_curvature_gates",
]


@dataclass(frozen=True)
class GateResult:
    name: str
    expected: float
    estimate: float
    stderr: float
    tolerance: float
    passed: bool


def sphere_samples(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    """``n`` uniform points on the unit sphere of C^dim (normalized Gaussians)."""
    z = rng.standard_normal((n, dim)) + 1j * rng.standard_normal((n, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def random_hermitian(rng: np.random.Generator, dim: int, bound: int = 3) -> HermitianGenerator:
    rows = [[GaussianRational(0)] * dim for _ in range(dim)]
    for j in range(dim):
        rows[j][j] = GaussianRational(int(rng.integers(-bound, bound + 1)))
        for k in range(j + 1, dim):
            z = GaussianRational(int(rng.integers(-bound, bound + 1)), int(rng.integers(-bound, bound + 1)))
            rows[j][k], rows[k][j] = z, z.conjugate()
    return HermitianGenerator(rows)


def _to_numpy(A: HermitianGenerator) -> np.ndarray:
    return np.array([[complex(x) for x in row] for row in A.entries])


def _quadratic(Anp, z):
    return np.real(np.einsum("ni,ij,nj->n", z.conj(), Anp, z))


def run_moment_gates(n_samples: int = 10**6, n_pairs: int = 20, ms=(1, 2, 3), seed: int = 0,
                     n_sigma: float = 3.0) -> list[GateResult]:
    """Compare the closed-form mean and pairing with sphere averages."""
    rng = np.random.default_rng(seed)
    out = []
    for m in ms:
        dim = m + 1
        z = sphere_samples(rng, n_samples, dim)
        for k in range(n_pairs):
            A, B = random_hermitian(rng, dim), random_hermitian(rng, dim)
            qa, qb = _quadratic(_to_numpy(A), z), _quadratic(_to_numpy(B), z)
            for label, M, q in (("A", A, qa), ("B", B, qb)):
                exp = float(M.trace()) / dim
                est, se = q.mean(), q.std(ddof=1) / np.sqrt(n_samples)
                out.append(GateResult(f"mean m={m} pair={k} {label}", exp, est, se, n_sigma * se,
                                      abs(est - exp) <= n_sigma * se))
            fa = qa - float(A.trace()) / dim
            fb = qb - float(B.trace()) / dim
            prod = fa * fb
            exp = float(l2_pairing(A, B))
            est, se = prod.mean(), prod.std(ddof=1) / np.sqrt(n_samples)
            out.append(GateResult(f"pairing m={m} pair={k}", exp, est, se, n_sigma * se,
                                  abs(est - exp) <= n_sigma * se))
    return out


def hessian_scalar_curvature(F_expr, m: int, point) -> float:
    """Scalar curvature of i∂∂̄F(|z|^2) at ``point`` in C^m from the full Hessian."""
    z = sp.symbols(f"z1:{m + 1}")
    w = sp.symbols(f"w1:{m + 1}")  # stand-ins for the conjugates
    t = sum(a * b for a, b in zip(z, w))
    F = sp.sympify(F_expr).subs(T, t)
    g = sp.Matrix(m, m, lambda i, j: sp.diff(F, z[i], w[j]))
    logdet = sp.log(g.det())
    ric = sp.Matrix(m, m, lambda i, j: -sp.diff(logdet, z[i], w[j]))
    subs = {}
    for zi, wi, p in zip(z, w, point):
        p = complex(p)
        subs[zi] = sp.Float(p.real, 30) + sp.I * sp.Float(p.imag, 30)
        subs[wi] = sp.Float(p.real, 30) - sp.I * sp.Float(p.imag, 30)
    gv = g.subs(subs).evalf(30)
    rv = ric.subs(subs).evalf(30)
    s = 2 * (gv.inv() * rv).trace()
    return float(sp.re(sp.N(s, 20)))


def run_curvature_gates(tol: float = 1e-10) -> list[GateResult]:
    """Radial formula vs full-Hessian oracle on Fubini-Study (m = 1..3) and E_2."""
    cases = [(RadialPotential.fubini_study(m), m) for m in (1, 2, 3)]
    cases.append((RadialPotential.burns_simanca_2(), 2))
    points = {1: [(0.3,), (1.7 + 0.4j,)], 2: [(0.5, 0.2j), (1.1, -0.7 + 0.3j)], 3: [(0.4, 0.1, 0.3j), (1.0, 0.5j, -0.2)]}
    out = []
    for P, m in cases:
        for pt in points[m]:
            oracle = hessian_scalar_curvature(P.expr, m, pt)
            t = float(sum(abs(complex(c)) ** 2 for c in pt))
            got = radial_scalar_curvature(P, t)
            out.append(GateResult(f"curvature {P.kind} m={m} t={t:.4g}", oracle, got, 0.0, tol,
                                  abs(got - oracle) <= tol * max(1.0, abs(oracle))))
    return out
