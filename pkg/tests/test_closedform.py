import math

import numpy as np
import pytest

from halfline_nls import closedform as cf


def fd_residual(u, x, t, h=1e-4):
    u0 = u(x, t)
    ut = (u(x, t + h) - u(x, t - h)) / (2.0 * h)
    uxx = (u(x + h, t) - 2.0 * u0 + u(x - h, t)) / (h * h)
    return abs(1j * ut + uxx - 2.0 * abs(u0) ** 2 * u0)


def test_single_exponential_solves_nls():
    for alpha, omega in [(1.0, 1.0), (0.5, 2.0), (2.0, 0.3)]:
        u = lambda x, t: cf.u_family_d(alpha, omega, x, t)  # noqa: E731
        for x, t in [(0.3, 0.1), (1.5, 2.0), (4.0, 0.7)]:
            assert fd_residual(u, x, t) < 1e-5


def test_single_exponential_boundary_traces():
    alpha, omega = 1.3, 0.8
    c = -alpha * math.sqrt(omega + alpha * alpha)
    h = 1e-5
    for t in (0.0, 1.0, 3.7):
        phase = np.exp(1j * omega * t)
        assert cf.u_family_d(alpha, omega, 0.0, t) == pytest.approx(alpha * phase, abs=1e-12)
        ux = (cf.u_family_d(alpha, omega, h, t) - cf.u_family_d(alpha, omega, -h, t)) / (2 * h)
        assert ux == pytest.approx(c * phase, abs=1e-5)


def test_two_pole_example_solves_nls():
    for x, t in [(0.5, 0.2), (1.1, 1.0), (2.5, 3.0)]:
        assert fd_residual(cf.u_section5, x, t) < 1e-4


def test_two_pole_singular_abscissae():
    sings = cf.section5_singularities()
    assert len(sings) == 2
    assert sings[0] == pytest.approx(-1.46895, abs=5e-3)
    assert sings[1] == pytest.approx(-0.09081, abs=5e-3)


def test_singularity_formula():
    # for (alpha, omega) = (1, 1) the dressing denominator vanishes at
    # x = -log(3 + 2 sqrt(2)) / 2
    x_star = cf.singularity_x(1.0, 1.0)
    assert x_star == pytest.approx(-math.log(3.0 + 2.0 * math.sqrt(2.0)) / 2.0,
                                   abs=1e-14)
    assert x_star < 0.0
    # the closed form blows up there
    assert abs(cf.u_family_d(1.0, 1.0, x_star + 1e-8, 0.0)) > 1e6


def test_h1_closed_form():
    for alpha, omega in [(1.0, 1.0), (0.5, 2.0), (2.0, 0.3)]:
        want = -1j * alpha * math.sqrt(omega) / (
            math.sqrt(omega) + math.sqrt(alpha * alpha + omega))
        assert cf.h1_family_d(alpha, omega) == pytest.approx(want, abs=1e-14)


def test_classify_families():
    rng = np.random.default_rng(11)
    for fam in (cf.Family.FAMILY_A, cf.Family.FAMILY_B, cf.Family.FAMILY_C,
                cf.Family.FAMILY_D_MINUS, cf.Family.FAMILY_D_PLUS,
                cf.Family.FAMILY_E):
        for _ in range(5):
            tr = cf.sample_family(fam, rng)
            got, verdict = cf.classify(tr)
            assert got is fam, (fam, tr, got)
            want = (cf.Verdict.EVENTUALLY_ADMISSIBLE
                    if fam is cf.Family.FAMILY_D_MINUS
                    else cf.Verdict.NOT_ADMISSIBLE)
            assert verdict is want


def test_classify_none_of_these():
    got, verdict = cf.classify(cf.ExponentialTriple(1.0, 1.0, 0.3 + 0.9j))
    assert got is cf.Family.NONE_OF_THESE
    assert verdict is cf.Verdict.NOT_ADMISSIBLE


def test_classify_degenerate_corner():
    # omega = -alpha^2 with c = 0 joins the rejected branch
    got, verdict = cf.classify(cf.ExponentialTriple(1.0, -1.0, 0.0))
    assert verdict is cf.Verdict.NOT_ADMISSIBLE


def test_two_pole_descriptor_matches_closed_form():
    from halfline_nls.dressing import DressedSolution

    sol = DressedSolution(cf.section5_pole_data())
    for x in (0.0, 0.8, 2.3):
        for t in (0.0, 1.1, 4.0):
            assert abs(sol.u(x, t) - cf.u_section5(x, t)) < 1e-11
