import json
import math

import numpy as np
import pytest

from halfline_nls.pairs import PeriodicPair, make_exponential_family_d


def test_exponential_traces():
    pair = PeriodicPair.exponential(1.5, 2.0, -0.25 + 0.5j)
    g0, g1 = pair.eval(0.3)
    assert g0 == pytest.approx(1.5 * np.exp(2j * 0.3))
    assert g1 == pytest.approx((-0.25 + 0.5j) * np.exp(2j * 0.3))
    assert pair.tau == pytest.approx(math.pi)


def test_periodicity_of_traces():
    pair = PeriodicPair.exponential(0.7, -1.3, 0.2 - 0.1j)
    for t in np.linspace(0.0, 3.0, 7):
        a0, a1 = pair.eval(t)
        b0, b1 = pair.eval(t + pair.tau)
        assert abs(a0 - b0) < 1e-12 and abs(a1 - b1) < 1e-12


def test_fourier_pair():
    tau = 3.0
    pair = PeriodicPair.fourier(tau, g0_modes=((0, 1.0), (1, 0.5j)),
                                g1_modes=((-1, 2.0),))
    w = 2.0 * math.pi / tau
    g0, g1 = pair.eval(0.4)
    assert g0 == pytest.approx(1.0 + 0.5j * np.exp(1j * w * 0.4))
    assert g1 == pytest.approx(2.0 * np.exp(-1j * w * 0.4))


def test_zero_pair():
    pair = PeriodicPair.zero()
    assert pair.eval(1.234) == (0.0, 0.0)


def test_json_round_trip():
    pair = PeriodicPair.exponential(1.0, 1.0, -math.sqrt(2.0))
    d = json.loads(json.dumps(pair.to_json_dict()))
    back = PeriodicPair.from_json_dict(d)
    for t in (0.0, 0.7, 2.0):
        assert back.eval(t) == pytest.approx(pair.eval(t))


def test_family_d_constructor():
    pair = make_exponential_family_d(1.0, 1.0)
    g0, g1 = pair.eval(0.0)
    assert g0 == pytest.approx(1.0)
    assert g1 == pytest.approx(-math.sqrt(2.0))
    with pytest.raises(ValueError):
        make_exponential_family_d(-1.0, 1.0)
