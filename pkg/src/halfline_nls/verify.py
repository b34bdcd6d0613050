"""Black-box verification of candidate quarter-plane solutions.

All checks treat u as an opaque (x, t) -> complex evaluator: finite-difference
PDE residual, boundary-trace reproduction, t-periodicity, spatial decay, and
L1 growth.  This keeps the verifier independent of the construction pipeline
so it can serve as an oracle for it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .pairs import PeriodicPair


@dataclass
class VerificationReport:
    max_pde_residual: float = 0.0
    boundary_err_g0: float = 0.0
    boundary_err_g1: float = 0.0
    periodicity_err: float = 0.0
    decay_profile: list = field(default_factory=list)   # [(x, sup_t |u|)]
    l1_growth: list = field(default_factory=list)       # [(t, ||u(.,t)||_1)]
    passed: bool = False

    def to_json_dict(self) -> dict:
        return {
            "max_pde_residual": self.max_pde_residual,
            "boundary_err_g0": self.boundary_err_g0,
            "boundary_err_g1": self.boundary_err_g1,
            "periodicity_err": self.periodicity_err,
            "decay_profile": [[x, v] for x, v in self.decay_profile],
            "l1_growth": [[t, v] for t, v in self.l1_growth],
            "pass": self.passed,
        }


def nls_residual(u, xs, ts, h_x: float = 1e-3, h_t: float = 1e-3) -> float:
    """max over the grid of |i D_t u + D_xx u - 2|u|^2 u| (central, 2nd order)."""
    worst = 0.0
    for x in xs:
        for t in ts:
            u0 = u(x, t)
            ut = (u(x, t + h_t) - u(x, t - h_t)) / (2.0 * h_t)
            uxx = (u(x + h_x, t) - 2.0 * u0 + u(x - h_x, t)) / (h_x * h_x)
            r = abs(1j * ut + uxx - 2.0 * abs(u0) ** 2 * u0)
            worst = max(worst, r)
    return worst


def boundary_check(u, pair: PeriodicPair, t_grid, h_x: float = 1e-3):
    """Boundary-trace errors (err_g0, err_g1) at x = 0.

    The Neumann trace uses the one-sided 4th-order 5-point stencil, since u is
    only defined on the quarter plane.
    """
    err0 = err1 = 0.0
    c = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0
    for t in t_grid:
        g0, g1 = pair.eval(float(t))
        err0 = max(err0, abs(u(0.0, t) - g0))
        ux = sum(ci * u(i * h_x, t) for i, ci in enumerate(c)) / h_x
        err1 = max(err1, abs(ux - g1))
    return err0, err1


def periodicity_check(u, tau: float, xs, ts) -> float:
    return max(abs(u(x, t + tau) - u(x, t)) for x in xs for t in ts)


def decay_check(u, x_grid, t_samples=None) -> list:
    """Per-x supremum of |u| over t samples."""
    if t_samples is None:
        t_samples = np.linspace(0.0, 2.0 * np.pi, 9)
    return [(float(x), max(abs(u(float(x), float(t))) for t in t_samples))
            for x in x_grid]


def l1_growth(u, t_samples, x_max: float = 40.0, n_nodes: int = 200) -> list:
    """||u(., t)||_L1 over [0, x_max] by Gauss-Legendre quadrature.

    The truncation is justified once decay_check shows |u| below roundoff at
    x_max.
    """
    x, w = np.polynomial.legendre.leggauss(n_nodes)
    xs = 0.5 * x_max * (x + 1.0)
    ws = 0.5 * x_max * w
    out = []
    for t in t_samples:
        vals = np.array([abs(u(float(xi), float(t))) for xi in xs])
        out.append((float(t), float(np.dot(ws, vals))))
    return out


def verify_solution(u, pair: PeriodicPair | None, tau: float, xs, ts,
                    h_x: float = 1e-3, h_t: float = 1e-3,
                    residual_tol: float = 1e-5, boundary_tol_g0: float = 1e-10,
                    boundary_tol_g1: float = 1e-6,
                    periodicity_tol: float = 1e-12) -> VerificationReport:
    """Full report; the pair may be None to skip the boundary comparison."""
    rep = VerificationReport()
    interior_xs = [x for x in xs if x >= h_x]
    rep.max_pde_residual = nls_residual(u, interior_xs, ts, h_x, h_t)
    if pair is not None:
        rep.boundary_err_g0, rep.boundary_err_g1 = boundary_check(u, pair, ts, h_x)
    rep.periodicity_err = periodicity_check(u, tau, xs[:: max(1, len(xs) // 8)],
                                            ts[:: max(1, len(ts) // 8)])
    rep.decay_profile = decay_check(u, np.linspace(0.0, 20.0, 21),
                                    np.linspace(0.0, tau, 7))
    rep.l1_growth = l1_growth(u, np.linspace(0.0, 2.0 * tau, 5))
    rep.passed = (
        rep.max_pde_residual <= residual_tol
        and rep.boundary_err_g0 <= boundary_tol_g0
        and rep.boundary_err_g1 <= boundary_tol_g1
        and rep.periodicity_err <= periodicity_tol
    )
    return rep
