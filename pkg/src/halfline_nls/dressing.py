"""Pole-only Riemann-Hilbert dressing.

Given lattice poles k_j with residues h_j, the solution matrix is the finite
product Mhat = (kI + B_N)...(kI + B_1) diag(prod (k-k_j)^-1, prod (k-kbar_j)^-1)
where each B_j solves a 2x2 algebraic system at (k_j, kbar_j) built from the
previous partial product.  The field is recovered from the exact k->infinity
coefficient u = 2i * sum_j (B_j)_12.
"""

from __future__ import annotations

import numpy as np

from .errors import CoincidentPoles, EvalAtPole, SingularSystem
from .scalarfuncs import PoleData

_COINCIDENT_FACTOR = 1e-8
_SINGULAR_FLOOR = 1e-12


def _ordered(pole_data: PoleData):
    order = np.argsort([abs(k) for k in pole_data.poles])
    ks = np.array([pole_data.poles[i] for i in order], dtype=complex)
    hs = np.array([pole_data.residues[i] for i in order], dtype=complex)
    return ks, hs


def d_coeffs(pole_data: PoleData, x: float, t: float) -> np.ndarray:
    """d_j = -h_j * prod_{l!=j}(k_j-k_l) / prod_l(k_j-kbar_l) * e^{2i(k_j x + 2 k_j^2 t)}."""
    ks, hs = _ordered(pole_data)
    n = len(ks)
    thresh = _COINCIDENT_FACTOR * np.sqrt(max(pole_data.omega, 1.0))
    out = np.empty(n, dtype=complex)
    for j in range(n):
        num = 1.0 + 0.0j
        den = 1.0 + 0.0j
        for l in range(n):
            if l != j:
                diff = ks[j] - ks[l]
                if abs(diff) < thresh:
                    raise CoincidentPoles(f"poles {ks[j]} and {ks[l]} too close")
                num *= diff
            den *= ks[j] - np.conj(ks[l])
        out[j] = -hs[j] * num / den * np.exp(2j * (ks[j] * x + 2.0 * ks[j] ** 2 * t))
    return out


def _partial_product(b_list, k: complex) -> np.ndarray:
    """Mhat_j(k) = (kI + B_j)...(kI + B_1) for the B_j solved so far."""
    m = np.eye(2, dtype=complex)
    for b in b_list:
        m = (k * np.eye(2) + b) @ m
    return m


def solve_dressing(pole_data: PoleData, x: float, t: float) -> list[np.ndarray]:
    """The recursive 2x2 solves for B_1..B_N at one (x, t)."""
    ks, _ = _ordered(pole_data)
    ds = d_coeffs(pole_data, x, t)
    b_list: list[np.ndarray] = []
    for j, (kj, dj) in enumerate(zip(ks, ds)):
        v1 = _partial_product(b_list, kj) @ np.array([1.0, -dj], dtype=complex)
        v2 = _partial_product(b_list, np.conj(kj)) @ np.array([-np.conj(dj), 1.0],
                                                             dtype=complex)
        vmat = np.column_stack([v1, v2])
        det = vmat[0, 0] * vmat[1, 1] - vmat[0, 1] * vmat[1, 0]
        scale = max(1.0, float(np.abs(vmat).max()) ** 2)
        if abs(det) < _SINGULAR_FLOOR * scale:
            raise SingularSystem(x, t, stage=j + 1)
        rhs = np.column_stack([-kj * v1, -np.conj(kj) * v2])
        b_list.append(rhs @ np.linalg.inv(vmat))
    return b_list


def u_from_b(b_list) -> complex:
    """u = 2i * sum_j (B_j)_12, the exact k->infinity limit of 2i k Mhat_12."""
    return complex(2j * sum(b[0, 1] for b in b_list))


class DressedSolution:
    """Evaluator bundle for one pole configuration.

    All per-point work happens in the methods; the object itself only stores
    the (immutable) pole data, so sharing it across threads is safe.
    """

    def __init__(self, pole_data: PoleData):
        ks, _ = _ordered(pole_data)
        self.pole_data = pole_data
        self.n = len(ks)
        self._ks = ks

    def b_matrices(self, x: float, t: float) -> list[np.ndarray]:
        return solve_dressing(self.pole_data, x, t)

    def u(self, x: float, t: float) -> complex:
        if self.n == 0:
            return 0.0 + 0.0j
        return u_from_b(self.b_matrices(x, t))

    def mhat(self, x: float, t: float, k: complex) -> np.ndarray:
        k = complex(k)
        thresh = _COINCIDENT_FACTOR * np.sqrt(max(self.pole_data.omega, 1.0))
        for kj in self._ks:
            if min(abs(k - kj), abs(k - np.conj(kj))) < thresh:
                raise EvalAtPole(f"mhat evaluated at pole {k}")
        prod = _partial_product(self.b_matrices(x, t) if self.n else [], k)
        diag1 = np.prod([1.0 / (k - kj) for kj in self._ks]) if self.n else 1.0
        diag2 = np.prod([1.0 / (k - np.conj(kj)) for kj in self._ks]) if self.n else 1.0
        return prod @ np.diag([diag1, diag2]).astype(complex)

    def u_grid(self, xs, ts) -> np.ndarray:
        """u on the tensor grid xs x ts; shape (len(xs), len(ts))."""
        out = np.empty((len(xs), len(ts)), dtype=complex)
        for i, x in enumerate(xs):
            for j, t in enumerate(ts):
                out[i, j] = self.u(float(x), float(t))
        return out


def stage_determinants(pole_data: PoleData, x: float, t: float) -> list[complex]:
    """Determinants of the per-stage 2x2 systems, without raising on
    degeneracy (used to bracket singular abscissae)."""
    ks, _ = _ordered(pole_data)
    ds = d_coeffs(pole_data, x, t)
    b_list: list[np.ndarray] = []
    dets = []
    for kj, dj in zip(ks, ds):
        v1 = _partial_product(b_list, kj) @ np.array([1.0, -dj], dtype=complex)
        v2 = _partial_product(b_list, np.conj(kj)) @ np.array([-np.conj(dj), 1.0],
                                                             dtype=complex)
        vmat = np.column_stack([v1, v2])
        det = vmat[0, 0] * vmat[1, 1] - vmat[0, 1] * vmat[1, 0]
        dets.append(complex(det))
        if abs(det) == 0.0:
            break
        rhs = np.column_stack([-kj * v1, -np.conj(kj) * v2])
        b_list.append(rhs @ np.linalg.inv(vmat))
    return dets


def locate_singularity(pole_data: PoleData, t: float, x_lo: float, x_hi: float,
                       xtol: float = 1e-12) -> float:
    """Bisection (Brent) zero of the stage-determinant product in [x_lo, x_hi].

    The product is real along the configurations of interest (purely imaginary
    poles); the imaginary part is checked and must stay at roundoff.
    """
    from scipy.optimize import brentq

    def f(x):
        dets = stage_determinants(pole_data, x, t)
        prod = np.prod(dets)
        if abs(prod.imag) > 1e-8 * max(1.0, abs(prod.real)):
            raise ValueError(f"determinant product not real at x = {x}")
        return prod.real

    return float(brentq(f, x_lo, x_hi, xtol=xtol))


def residue_condition_residuals(sol: DressedSolution, x: float, t: float) -> list[float]:
    """Scaled defects of the pole conditions at each k_j and kbar_j.

    At k_j:  Res Mhat^(1) = -h_j e^{2i(k_j x + 2 k_j^2 t)} Mhat(k_j)^(2)
    and the conjugated condition at kbar_j with -conj(h_j) e^{-2i(...)}.
    Residues are exact: the partial product is entire, so the residue of
    column 1 is the product value times 1/prod_{l!=j}(k_j - k_l).
    """
    ks, hs = _ordered(sol.pole_data)
    b_list = sol.b_matrices(x, t)
    out = []
    for j, (kj, hj) in enumerate(zip(ks, hs)):
        prod_kj = _partial_product(b_list, kj)
        other1 = np.prod([kj - kl for l, kl in enumerate(ks) if l != j]) if sol.n > 1 else 1.0
        res_col1 = prod_kj[:, 0] / other1
        col2_all = np.prod([kj - np.conj(kl) for kl in ks])
        col2 = prod_kj[:, 1] / col2_all
        expo = np.exp(2j * (kj * x + 2.0 * kj * kj * t))
        lhs, rhs = res_col1, -hj * expo * col2
        scale = max(1.0, float(np.abs(lhs).max()), float(np.abs(rhs).max()))
        out.append(float(np.abs(lhs - rhs).max() / scale))
        # conjugate condition at kbar_j, column 2
        kb = np.conj(kj)
        prod_kb = _partial_product(b_list, kb)
        other2 = np.prod([kb - np.conj(kl) for l, kl in enumerate(ks) if l != j]) if sol.n > 1 else 1.0
        res_col2 = prod_kb[:, 1] / other2
        col1_all = np.prod([kb - kl for kl in ks])
        col1 = prod_kb[:, 0] / col1_all
        expo_b = np.exp(-2j * (kb * x + 2.0 * kb * kb * t))
        lhs2, rhs2 = res_col2, -np.conj(hj) * expo_b * col1
        scale2 = max(1.0, float(np.abs(lhs2).max()), float(np.abs(rhs2).max()))
        out.append(float(np.abs(lhs2 - rhs2).max() / scale2))
    return out
