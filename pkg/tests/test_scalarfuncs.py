import math

import numpy as np
import pytest
from scipy.integrate import quad

from halfline_nls import closedform as cf
from halfline_nls import scalarfuncs as sc
from halfline_nls.errors import TooCloseToContour
from halfline_nls.pairs import make_exponential_family_d


def brute_cauchy(f, k, L=400.0):
    re = quad(lambda s: (f(s) / (s - k)).real, -L, L, limit=4000)[0]
    im = quad(lambda s: (f(s) / (s - k)).imag, -L, L, limit=4000)[0]
    return (re + 1j * im) / (2j * math.pi)


def test_cauchy_transform_against_quad():
    f = lambda s: 1.0 / (1.0 + s * s) ** 2  # noqa: E731
    grid = sc.build_line_grid(half_width=40.0, inner_scale=1.0)
    for k in (2j, 0.7 + 0.3j, -1.4 + 0.05j, 0.2 + 0.002j):
        got = sc.cauchy_transform(f, k, delta=1e-3, grid=grid)
        want = brute_cauchy(f, k)
        assert abs(got - want) < 1e-9, (k, got, want)


def test_cauchy_raises_near_contour():
    grid = sc.build_line_grid(half_width=40.0, inner_scale=1.0)
    with pytest.raises(TooCloseToContour):
        sc.cauchy_transform(lambda s: 1.0 / (1.0 + s * s), 0.5 + 1e-5j,
                            delta=1e-3, grid=grid)


def test_a_matches_rational():
    # for the single-exponential admissible family, a(k) = (k+k2)/(k+k1)
    for alpha, omega in [(1.0, 1.0), (0.5, 2.0)]:
        sf = sc.ScalarFunctions(make_exponential_family_d(alpha, omega))
        for k in (0.4 + 0.3j, 1.5j, -1.1 + 0.7j, 3.0 + 0.1j):
            want = cf.a_family_d(alpha, omega, k)
            assert abs(sf.a(k) - want) < 1e-6 * abs(want)


def test_a_tends_to_one():
    sf = sc.ScalarFunctions(make_exponential_family_d(1.0, 1.0))
    assert abs(sf.a(80.0j) - 1.0) < 2e-2
    assert abs(sf.a(80.0j) - 1.0) < abs(sf.a(8.0j) - 1.0)


def test_boundary_identities():
    # |a|^2 - |b|^2 = 1 and |a|^2 (1 - |qb|^2) = 1 on the real line
    sf = sc.ScalarFunctions(make_exponential_family_d(1.0, 1.0))
    from halfline_nls.monodromy import lattice_distance
    from halfline_nls.spectral import default_guard, sample

    pair = make_exponential_family_d(1.0, 1.0)
    guard = 10.0 * default_guard(pair.tau)
    ks = [k for k in np.linspace(0.21, 2.7, 15)
          if lattice_distance(k, pair.tau) > guard]
    for k in ks:
        a = sf.a_boundary(k)
        b = sf.b_boundary(k)
        qb = sample(pair, complex(k)).qb
        assert abs(abs(a) ** 2 - abs(b) ** 2 - 1.0) < 1e-6
        assert abs(abs(a) ** 2 * (1.0 - abs(qb) ** 2) - 1.0) < 1e-6


def test_h_residues_oracle():
    alpha, omega = 1.0, 1.0
    pair = make_exponential_family_d(alpha, omega)
    k1 = 0.5j * math.sqrt(omega)
    k2 = 0.5j * math.sqrt(omega + alpha * alpha)
    res_pb = -(alpha / 2j) * (k1 + k2) / (2.0 * k1)
    pd = sc.h_residues(pair, [(k1, res_pb)])
    want = cf.h1_family_d(alpha, omega)
    assert abs(pd.residues[0] - want) < 1e-8
    assert pd.poles[0] == pytest.approx(k1)


def test_pole_data_round_trip():
    pd = sc.PoleData(poles=(0.5j, 1.0j), residues=(1.0 + 0j, -0.25j), omega=2.0)
    back = sc.PoleData.from_json_dict(pd.to_json_dict())
    assert back.poles == pd.poles and back.residues == pd.residues
    with pytest.raises(ValueError):
        sc.PoleData(poles=(0.5,), residues=(1.0,), omega=1.0)
