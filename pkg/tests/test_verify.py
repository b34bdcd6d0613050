import math

import numpy as np
import pytest

from halfline_nls import closedform as cf
from halfline_nls import verify as vf
from halfline_nls.pairs import PeriodicPair, make_exponential_family_d


def test_closed_form_passes():
    alpha, omega = 1.0, 1.0
    pair = make_exponential_family_d(alpha, omega)
    tau = pair.tau
    u = lambda x, t: cf.u_family_d(alpha, omega, x, t)  # noqa: E731
    xs = np.linspace(0.0, 4.0, 9)
    ts = np.linspace(0.0, 2.0 * tau, 7)
    rep = vf.verify_solution(u, pair, tau, xs, ts)
    assert rep.passed
    assert rep.max_pde_residual < 1e-5
    assert rep.boundary_err_g0 < 1e-10
    assert rep.boundary_err_g1 < 1e-6
    assert rep.periodicity_err < 1e-12


def test_decay_profile_monotone_tail():
    rep_vals = vf.decay_check(lambda x, t: cf.u_family_d(1.0, 1.0, x, t),
                              np.linspace(0.0, 20.0, 6))
    sup = [v for _, v in rep_vals]
    assert sup[-1] < 1e-8
    assert all(b < a for a, b in zip(sup, sup[1:]))


def test_plane_wave_negative_control():
    # u = alpha e^{i omega t} fails the equation with residual alpha|omega+2alpha^2|
    alpha, omega = 1.0, 1.0
    u = lambda x, t: alpha * np.exp(1j * omega * t)  # noqa: E731
    res = vf.nls_residual(u, [0.5, 1.0], [0.3, 0.9], 1e-3, 1e-3)
    assert res == pytest.approx(alpha * abs(omega + 2.0 * alpha**2), rel=0.01)


def test_wrong_solution_fails():
    # perturbing the closed form must be caught by the residual check
    u = lambda x, t: cf.u_family_d(1.0, 1.0, x, t) + 0.01 * math.exp(-x)  # noqa: E731
    pair = make_exponential_family_d(1.0, 1.0)
    rep = vf.verify_solution(u, pair, pair.tau, np.linspace(0.0, 2.0, 5),
                             np.linspace(0.0, 2.0, 5))
    assert not rep.passed


def test_fd_convergence_order():
    u = lambda x, t: cf.u_family_d(1.0, 1.0, x, t)  # noqa: E731
    xs, ts = [0.9], [0.4]
    r1 = vf.nls_residual(u, xs, ts, 2e-3, 2e-3)
    r2 = vf.nls_residual(u, xs, ts, 1e-3, 1e-3)
    order = math.log2(r1 / r2)
    assert order > 1.9


def test_zero_solution_report():
    pair = PeriodicPair.zero()
    u = lambda x, t: 0.0j  # noqa: E731
    rep = vf.verify_solution(u, pair, pair.tau, np.linspace(0.0, 2.0, 4),
                             np.linspace(0.0, 2.0, 4))
    assert rep.passed
    assert rep.max_pde_residual == 0.0
    d = rep.to_json_dict()
    assert d["pass"] is True
