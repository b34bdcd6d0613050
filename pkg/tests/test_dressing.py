import math

import numpy as np
import pytest

from halfline_nls import closedform as cf
from halfline_nls import dressing as dr
from halfline_nls.errors import CoincidentPoles, EvalAtPole, SingularSystem
from halfline_nls.scalarfuncs import PoleData


def family_d_descriptor(alpha, omega):
    k1 = 0.5j * math.sqrt(omega)
    return PoleData(poles=(k1,), residues=(cf.h1_family_d(alpha, omega),),
                    omega=omega)


def test_one_pole_matches_closed_form():
    for alpha, omega in [(1.0, 1.0), (0.5, 2.0), (2.0, 0.3)]:
        sol = dr.DressedSolution(family_d_descriptor(alpha, omega))
        for x in (0.0, 0.7, 3.2):
            for t in (0.0, 0.9, 5.0):
                want = cf.u_family_d(alpha, omega, x, t)
                assert abs(sol.u(x, t) - want) < 1e-12 * max(1.0, abs(want))


def test_residue_conditions():
    sol = dr.DressedSolution(cf.section5_pole_data())
    for x, t in [(0.2, 0.0), (1.0, 0.6), (2.8, 3.1)]:
        assert max(dr.residue_condition_residuals(sol, x, t)) < 1e-10


def test_b_matrix_conjugation_symmetry():
    sol = dr.DressedSolution(cf.section5_pole_data())
    for b in sol.b_matrices(0.7, 0.9):
        assert abs(b[1, 0] - np.conj(b[0, 1])) < 1e-10
        assert abs(b[1, 1] - np.conj(b[0, 0])) < 1e-10


def test_pole_order_invariance():
    pd = cf.section5_pole_data()
    swapped = PoleData(poles=pd.poles[::-1], residues=pd.residues[::-1],
                       omega=pd.omega)
    s1 = dr.DressedSolution(pd)
    s2 = dr.DressedSolution(swapped)
    for x, t in [(0.0, 0.0), (0.9, 1.4), (2.5, 0.3)]:
        assert abs(s1.u(x, t) - s2.u(x, t)) < 1e-9


def test_u_is_large_k_coefficient():
    sol = dr.DressedSolution(cf.section5_pole_data())
    x, t = 0.8, 0.5
    k = 1e6 * np.exp(0.3j)
    m = sol.mhat(x, t, k)
    assert abs(2j * k * m[0, 1] - sol.u(x, t)) < 1e-5 * abs(sol.u(x, t))


def test_mhat_det_and_pole_guard():
    sol = dr.DressedSolution(cf.section5_pole_data())
    m = sol.mhat(0.5, 0.2, 0.7 + 0.4j)
    # Mhat has unit determinant away from its poles
    assert abs(np.linalg.det(m) - 1.0) < 1e-9
    with pytest.raises(EvalAtPole):
        sol.mhat(0.5, 0.2, 1j)


def test_empty_descriptor_gives_zero():
    sol = dr.DressedSolution(PoleData(poles=(), residues=(), omega=1.0))
    assert sol.u(1.0, 2.0) == 0.0


def test_coincident_poles_raise():
    pd = PoleData(poles=(0.5j, 0.5j + 1e-12j), residues=(1j, 1j), omega=1.0)
    with pytest.raises(CoincidentPoles):
        dr.solve_dressing(pd, 0.0, 0.0)


def test_singular_system_raises_off_quarter_plane():
    # the one-pole system degenerates where |d_1| = 1, which for this
    # descriptor happens at negative x
    pd = family_d_descriptor(1.0, 1.0)
    x_star = cf.singularity_x(1.0, 1.0)
    with pytest.raises(SingularSystem) as exc:
        dr.solve_dressing(pd, x_star, 0.0)
    assert exc.value.stage == 1


def test_locate_singularity_bisection():
    pd = family_d_descriptor(1.0, 1.0)
    x_star = dr.locate_singularity(pd, 0.0, -1.5, -0.5)
    assert x_star == pytest.approx(-math.log(3.0 + 2.0 * math.sqrt(2.0)) / 2.0,
                                   abs=1e-8)


def test_t_periodicity():
    omega = 1.0
    sol = dr.DressedSolution(family_d_descriptor(1.0, omega))
    tau = 2.0 * math.pi / omega
    for x, t in [(0.0, 0.0), (1.3, 2.2)]:
        assert abs(sol.u(x, t + tau) - sol.u(x, t)) < 1e-12
