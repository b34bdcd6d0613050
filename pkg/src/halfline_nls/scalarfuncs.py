"""Scalar functions a, b, h built from the spectral quotients by a Cauchy
transform over the real line.

a(k) = exp(-C[log(1-|qb|^2)])(k) on the upper half-plane, b = qb*a, and the
meromorphic h = -pb/a^2 whose residues at the lattice poles feed the dressing
solve.  The transform uses composite Gauss-Legendre panels on [-L, L] with a
two-term analytic tail correction fitted to the 1/s^2 decay of the integrand;
panels close to k integrate the kernel exactly through second-kind Legendre
functions.  Boundary values on the real line are limits along
Im k = delta * 2^-m, extrapolated to zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GateNotPassed, PoleOfA, TooCloseToContour
from .monodromy import lattice_distance, monodromy_many
from .pairs import PeriodicPair
from .spectral import default_guard, sqrt_g_admissible

_NODES_PER_PANEL = 32


@dataclass(frozen=True)
class PoleData:
    """Upper-half-plane lattice poles k_j with the residues h_j of h."""

    poles: tuple
    residues: tuple
    omega: float

    def __post_init__(self):
        for k in self.poles:
            if not k.imag > 0:
                raise ValueError(f"pole {k} not in the open upper half-plane")
        if len(self.poles) != len(self.residues):
            raise ValueError("poles and residues must have equal length")

    def to_json_dict(self) -> dict:
        return {
            "omega": self.omega,
            "poles": [[k.real, k.imag] for k in self.poles],
            "residues": [[h.real, h.imag] for h in self.residues],
        }

    @staticmethod
    def from_json_dict(d: dict) -> "PoleData":
        return PoleData(
            poles=tuple(complex(re, im) for re, im in d["poles"]),
            residues=tuple(complex(re, im) for re, im in d["residues"]),
            omega=float(d["omega"]),
        )


@dataclass(frozen=True)
class LineGrid:
    """Panelled quadrature nodes and weights on [-L, L]."""

    nodes: np.ndarray
    weights: np.ndarray
    half_width: float


def build_line_grid(half_width: float, inner_scale: float,
                    n_per_panel: int = _NODES_PER_PANEL) -> LineGrid:
    """Composite Gauss-Legendre grid: uniform panels of width ~inner_scale on
    the core interval, geometrically widening panels out to +-half_width."""
    edges = [0.0]
    w = inner_scale
    while edges[-1] < half_width:
        nxt = edges[-1] + w
        if nxt >= half_width:
            edges.append(half_width)
            break
        edges.append(nxt)
        if nxt >= 4.0 * inner_scale:
            w *= 1.5
    edges = np.array(edges)
    edges = np.concatenate([-edges[::-1], edges[1:]])
    x, wq = np.polynomial.legendre.leggauss(n_per_panel)
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        nodes.append(mid + half * x)
        weights.append(half * wq)
    return LineGrid(np.concatenate(nodes), np.concatenate(weights), half_width)


def _log_ratio(x: complex) -> complex:
    """log((1+x)/(1-x)) with principal logs (safe for Im x != 0 or |x| < 1)."""
    return np.log1p(x) - np.log1p(-x)


def _tail_t2(k: complex, L: float) -> complex:
    """Integral of 1/(s^2 (s-k)) over |s| > L:
    (1/k^2) log((1+k/L)/(1-k/L)) - 2/(kL)."""
    x = k / L
    if abs(x) < 1e-2:
        # series form of the cancellation-prone difference
        x2 = x * x
        return 2.0 * x * (1.0 / 3.0 + x2 / 5.0 + x2 * x2 / 7.0) / L**2
    return _log_ratio(x) / (k * k) - 2.0 / (k * L)


def _tail_t4(k: complex, L: float) -> complex:
    """Integral of 1/(s^4 (s-k)) over |s| > L:
    (1/k^4) log((1+k/L)/(1-k/L)) - 2/(k^3 L) - 2/(3 k L^3)."""
    x = k / L
    if abs(x) < 1e-2:
        x2 = x * x
        return 2.0 * x * (1.0 / 5.0 + x2 / 7.0 + x2 * x2 / 9.0) / L**4
    return _log_ratio(x) / k**4 - 2.0 / (k**3 * L) - 2.0 / (3.0 * k * L**3)


def _fit_tail(grid: LineGrid, f_vals: np.ndarray) -> tuple[float, float]:
    """Least-squares fit f(s) ~ r2/s^2 + r4/s^4 on the outermost samples."""
    n = _NODES_PER_PANEL
    idx = np.concatenate([np.arange(n), np.arange(len(grid.nodes) - n, len(grid.nodes))])
    s = grid.nodes[idx]
    design = np.column_stack([1.0 / s**2, 1.0 / s**4])
    coef, *_ = np.linalg.lstsq(design, np.real(f_vals[idx]), rcond=None)
    return float(coef[0]), float(coef[1])


def _legendre_q_row(z: complex, n: int) -> np.ndarray:
    """Q_0..Q_{n-1} of the second kind by forward recurrence.

    Safe for z within a moderate Bernstein ellipse of [-1, 1], where the
    growing P_n contamination stays near roundoff.
    """
    q = np.empty(n, dtype=complex)
    q[0] = 0.5 * (np.log(1.0 + z) - np.log(z - 1.0))
    if n > 1:
        q[1] = z * q[0] - 1.0
    for m in range(1, n - 1):
        q[m + 1] = ((2 * m + 1) * z * q[m] - m * q[m - 1]) / (m + 1)
    return q


def _bernstein_radius(z: complex) -> float:
    w = z + np.sqrt(z * z - 1.0)
    r = abs(w)
    return r if r >= 1.0 else 1.0 / r


def cauchy_transform(f, k: complex, delta: float, grid: LineGrid,
                     f_vals: np.ndarray | None = None) -> complex:
    """(1/2pi i) * integral of f(s)/(s-k) over the real line.

    ``f`` is a callable accepting a real array; ``f_vals`` may carry its
    precomputed values on the grid nodes.  The tail |s| > L is handled by an
    analytic correction with coefficients fitted to the 1/s^2 decay of f.
    Panels close to k are integrated exactly against the kernel through the
    Legendre expansion of f and second-kind Legendre functions, so accuracy
    is uniform down to the contour.
    """
    k = complex(k)
    if abs(k.imag) < delta:
        raise TooCloseToContour(f"|Im k| = {abs(k.imag):.3g} < delta = {delta:.3g}")
    if f_vals is None:
        f_vals = np.asarray(f(grid.nodes), dtype=complex)
    L = grid.half_width
    r2, r4 = _fit_tail(grid, f_vals)
    tail = r2 * _tail_t2(k, L) + r4 * _tail_t4(k, L)
    n = _NODES_PER_PANEL
    x_ref, w_ref = np.polynomial.legendre.leggauss(n)
    p_ref = None
    core = 0.0 + 0.0j
    for i0 in range(0, len(grid.nodes), n):
        s = grid.nodes[i0 : i0 + n]
        w = grid.weights[i0 : i0 + n]
        fv = f_vals[i0 : i0 + n]
        # recover the panel midpoint/half-width from its scaled nodes
        half = (s[-1] - s[0]) / (x_ref[-1] - x_ref[0])
        mid = s[0] - half * x_ref[0]
        zk = (k - mid) / half
        if _bernstein_radius(zk) < 1.6:
            if p_ref is None:
                # Legendre-Vandermonde on the reference nodes
                p_ref = np.polynomial.legendre.legvander(x_ref, n - 1)
            coef = ((2.0 * np.arange(n) + 1.0) / 2.0) * ((p_ref.T * w_ref) @ fv)
            core += coef @ (-2.0 * _legendre_q_row(zk, n))
        else:
            core += np.sum(w * fv / (s - k))
    return (core + tail) / (2j * math.pi)


class ScalarFunctions:
    """Evaluators for a, b, h over Im k >= delta, plus real-line limits.

    Construction samples log(1 - |qb|^2) once on the panel grid; evaluation is
    a pure closure over that data and is safe to call from multiple threads.
    """

    def __init__(self, pair: PeriodicPair, delta: float | None = None,
                 half_width: float | None = None, tol: float = 1e-10,
                 method: str = "auto"):
        self.pair = pair
        self.tau = pair.tau
        self.tol = tol
        self.method = method
        w = pair.base_frequency
        if delta is None:
            delta = 1e-3 * math.sqrt(w)
        self.delta = delta
        g0, _ = pair.eval(0.0)
        rho = max(1.0, abs(g0), math.sqrt(w))
        if half_width is None:
            half_width = max(40.0, 12.0 * rho)
        self.grid = build_line_grid(half_width, rho)
        self._f_vals = self._log_term(self.grid.nodes)
        sup = float(np.sqrt(np.max(-np.expm1(np.real(self._f_vals)))))
        if not np.all(np.isfinite(np.real(self._f_vals))) or sup >= 1.0:
            raise GateNotPassed(
                f"sup |qb| = {sup:.6g} >= 1 on the sampling grid; a(k) undefined"
            )
        self.sup_qb = sup

    # -- spectral quotient helpers -------------------------------------------
    def _qb_pb(self, ks):
        ks = np.asarray(ks, dtype=complex)
        zs, _ = monodromy_many(self.pair, ks, self.tol, self.method)
        sg = sqrt_g_admissible(ks, self.tau)
        den = zs[..., 0, 0] - zs[..., 1, 1] - sg
        return -2.0 * zs[..., 0, 1] / den, -zs[..., 1, 0] / sg

    def _log_term(self, s):
        """log(1 - |qb(s)|^2) on real s.

        At nodes inside a lattice guard zone the quotient is a removable 0/0;
        there qb is recovered by its mean value over a small circle (qb is
        analytic in a strip around the real line for gate-passing pairs).
        """
        s = np.asarray(s, dtype=float)
        guard = default_guard(self.tau)
        w = self.pair.base_frequency
        n_circ = 16
        theta = 2.0 * math.pi * np.arange(n_circ) / n_circ
        eval_pts, spans = [], []
        for x in s:
            if lattice_distance(x, self.tau) < guard:
                # local lattice spacing ~ w/(8|s|) away from the origin
                spacing = math.sqrt(w) / 2.0 if abs(x) < math.sqrt(w) else w / (8.0 * abs(x))
                r = min(3.0 * guard, 0.45 * spacing)
                if r <= guard:
                    # circle cannot clear the guard zone; fall back to a nudge
                    eval_pts.append(np.array([x + 2.0 * guard]))
                else:
                    eval_pts.append(x + r * np.exp(1j * theta))
            else:
                eval_pts.append(np.array([x]))
            spans.append(len(eval_pts[-1]))
        qb, _ = self._qb_pb(np.concatenate(eval_pts))
        out = np.empty(len(s), dtype=complex)
        pos = 0
        for i, m in enumerate(spans):
            out[i] = np.mean(qb[pos : pos + m])
            pos += m
        return np.log1p(-np.abs(out) ** 2).astype(complex)

    # -- evaluators -----------------------------------------------------------
    def a(self, k: complex) -> complex:
        val = cauchy_transform(self._log_term, k, self.delta, self.grid,
                               f_vals=self._f_vals)
        return complex(np.exp(-val))

    def b(self, k: complex) -> complex:
        qb, _ = self._qb_pb([k])
        return complex(qb[0] * self.a(k))

    def h(self, k: complex) -> complex:
        _, pb = self._qb_pb([k])
        return complex(-pb[0] / self.a(k) ** 2)

    def a_boundary(self, k_real: float, m_levels: int = 6) -> complex:
        """Limit of a(k_real + i delta_m) along delta_m = 0.05 * 2^-m,
        extrapolated to the contour by Neville's scheme."""
        deltas = 0.05 * 2.0 ** -np.arange(m_levels)
        vals = np.array([self.a(complex(k_real, d)) for d in deltas])
        # Neville extrapolation to delta -> 0 (values are smooth in delta)
        tab = vals.copy()
        xs = deltas
        for j in range(1, m_levels):
            tab[: m_levels - j] = (
                tab[1 : m_levels - j + 1] * xs[: m_levels - j]
                - tab[: m_levels - j] * xs[j : m_levels]
            ) / (xs[: m_levels - j] - xs[j : m_levels])
        return complex(tab[0])

    def b_boundary(self, k_real: float) -> complex:
        qb, _ = self._qb_pb([complex(k_real)])
        return complex(qb[0] * self.a_boundary(k_real))

    def h_boundary(self, k_real: float) -> complex:
        _, pb = self._qb_pb([complex(k_real)])
        return complex(-pb[0] / self.a_boundary(k_real) ** 2)


def a_of_k(pair: PeriodicPair, k: complex, **kw) -> complex:
    return ScalarFunctions(pair, **kw).a(k)


def h_of_k(pair: PeriodicPair, k: complex, **kw) -> complex:
    return ScalarFunctions(pair, **kw).h(k)


def h_residues(pair: PeriodicPair, pb_poles, sf: ScalarFunctions | None = None,
               a_floor: float = 1e-6) -> PoleData:
    """Residues of h at the lattice poles of pb.

    ``pb_poles`` is the (k_j, residue-of-pb) list from the admissibility pole
    scan; since a is analytic and nonzero there, h_j = -res_j / a(k_j)^2.
    """
    if sf is None:
        sf = ScalarFunctions(pair)
    poles, residues = [], []
    for k_j, res_pb in pb_poles:
        a_val = sf.a(k_j)
        if abs(a_val) < a_floor:
            raise PoleOfA(f"|a({k_j})| = {abs(a_val):.3g} below threshold")
        poles.append(complex(k_j))
        residues.append(complex(-res_pb / a_val**2))
    return PoleData(poles=tuple(poles), residues=tuple(residues),
                    omega=pair.base_frequency)
