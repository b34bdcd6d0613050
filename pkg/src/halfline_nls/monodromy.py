"""One-period transfer matrix of the background t-part ODE.

The fundamental solution psi(t, k) of

    psi_t + 2i k^2 sigma3 psi = Vb(t, k) psi,    psi(0, k) = I,

is integrated over one period tau to give Z(k) = psi(tau, k).  The coefficient
matrix is trace-free, so det Z = 1 exactly; the determinant drift of the
numerical Z is used as a free a-posteriori error proxy.

Two evaluation paths are provided.  The general path is a classical 4th-order
fixed-step scheme with step doubling and Richardson extrapolation, vectorized
over batches of k.  For single-exponential pairs the time dependence can be
rotated away by a diagonal gauge, leaving a constant-coefficient system whose
one-period propagator is a closed-form 2x2 exponential; this exact path is the
default for exponential pairs because the oscillatory step count of the
fixed-step scheme grows like |k|^2 and becomes prohibitive along the real-line
quadrature grid.  The two paths agree to integrator tolerance and are
cross-checked in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonConvergence, SampleTooClose
from .pairs import PeriodicPair

# steps per unit of (1 + |k|^2) * tau for the initial step count
_STEP_DENSITY = 6.0
_MAX_TOTAL_STEPS = 3_000_000
_EXP_OVERFLOW_LIMIT = 680.0


@dataclass(frozen=True)
class Monodromy:
    """Z(k) together with the spectral parameter and an error estimate."""

    z: np.ndarray  # (2, 2) complex
    k: complex
    est_error: float

    @property
    def trace(self) -> complex:
        return self.z[0, 0] + self.z[1, 1]


def vb_matrix(pair: PeriodicPair, t: float, k: complex) -> np.ndarray:
    """Coefficient matrix Vb(t, k); trace-free by construction."""
    g0, g1 = pair.eval(t)
    return np.array(
        [
            [-1j * abs(g0) ** 2, 2 * k * g0 + 1j * g1],
            [2 * k * np.conj(g0) - 1j * np.conj(g1), 1j * abs(g0) ** 2],
        ],
        dtype=complex,
    )


def _coefficient_batch(pair, t, ks):
    """Full generator -2i k^2 sigma3 + Vb(t, k) for an array of k values."""
    g0, g1 = pair.eval(t)
    a = np.empty(ks.shape + (2, 2), dtype=complex)
    a[..., 0, 0] = -2j * ks * ks - 1j * abs(g0) ** 2
    a[..., 0, 1] = 2 * ks * g0 + 1j * g1
    a[..., 1, 0] = 2 * ks * np.conj(g0) - 1j * np.conj(g1)
    a[..., 1, 1] = 2j * ks * ks + 1j * abs(g0) ** 2
    return a


def _rk4_propagate(pair, ks, n_steps):
    """Integrate the batch over [0, tau] with n_steps classical RK4 steps."""
    h = pair.tau / n_steps
    y = np.zeros(ks.shape + (2, 2), dtype=complex)
    y[..., 0, 0] = 1.0
    y[..., 1, 1] = 1.0
    for i in range(n_steps):
        t = i * h
        a0 = _coefficient_batch(pair, t, ks)
        am = _coefficient_batch(pair, t + 0.5 * h, ks)
        a1 = _coefficient_batch(pair, t + h, ks)
        k1 = a0 @ y
        k2 = am @ (y + 0.5 * h * k1)
        k3 = am @ (y + 0.5 * h * k2)
        k4 = a1 @ (y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
    return y


def _monodromy_rk4_batch(pair, ks, tol):
    kmax2 = float(np.max(np.abs(ks)) ** 2)
    n = max(64, int(math.ceil(_STEP_DENSITY * (1.0 + kmax2) * pair.tau)))
    z_prev = _rk4_propagate(pair, ks, n)
    while True:
        n *= 2
        if n > _MAX_TOTAL_STEPS:
            raise NonConvergence(
                f"step budget exhausted at n={n} without reaching tol={tol}"
            )
        z = _rk4_propagate(pair, ks, n)
        scale = np.maximum(1.0, np.abs(z).max(axis=(-2, -1)))
        diff = np.abs(z - z_prev).max(axis=(-2, -1)) / scale
        # one extra order from Richardson extrapolation of the 4th-order pair
        z_ext = z + (z - z_prev) / 15.0
        err = diff / 15.0
        det = z_ext[..., 0, 0] * z_ext[..., 1, 1] - z_ext[..., 0, 1] * z_ext[..., 1, 0]
        # det - 1 cancels entry products of size scale^2, so its roundoff
        # floor sits at eps * scale^2; normalize accordingly
        err = np.maximum(err, np.abs(det - 1.0) / scale**2)
        if float(err.max()) <= tol:
            return z_ext, err
        z_prev = z


def _monodromy_exact_batch(pair, ks):
    """Closed-form Z for exponential pairs via the constant gauged system."""
    alpha, omega, c = pair.alpha, pair.omega, pair.c
    tau = pair.tau
    a_diag = 2.0 * ks * ks + 0.5 * omega + alpha * alpha
    b_off = 2.0 * ks * alpha + 1j * c
    c_off = 2.0 * ks * alpha - 1j * np.conj(c)
    m = np.empty(ks.shape + (2, 2), dtype=complex)
    m[..., 0, 0] = -1j * a_diag
    m[..., 0, 1] = b_off
    m[..., 1, 0] = c_off
    m[..., 1, 1] = 1j * a_diag
    mu2 = b_off * c_off - a_diag * a_diag  # = -Omega(k)^2
    mu = np.sqrt(mu2.astype(complex))
    if np.any(np.abs(np.real(tau * mu)) > _EXP_OVERFLOW_LIMIT):
        raise SampleTooClose(
            "monodromy magnitude exceeds float range at this k; reduce |Im k^2|"
        )
    tm = tau * mu
    ch = np.cosh(tm)
    small = np.abs(tm) < 1e-8
    with np.errstate(invalid="ignore", divide="ignore"):
        sh_over = np.where(small, tau * (1.0 + tm * tm / 6.0), np.sinh(tm) / np.where(small, 1.0, mu))
    z = ch[..., None, None] * np.eye(2) + sh_over[..., None, None] * m
    # the half-period gauge rotation contributes exp(i*pi*sigma3) = -I
    return -z


def monodromy_many(pair: PeriodicPair, ks, tol: float = 1e-10, method: str = "auto"):
    """Z(k) for an array of k values.

    Returns (z, err) where z has shape ks.shape + (2, 2).  ``method`` is
    "auto" (exact for exponential pairs, RK4 otherwise), "rk4", or "exact".
    """
    ks = np.asarray(ks, dtype=complex)
    if method == "auto":
        if pair.kind == "fourier" and not pair.g0_modes and not pair.g1_modes:
            # zero potential: Z = diag(exp(-2ik^2 tau), exp(2ik^2 tau)) exactly
            ph = np.exp(-2j * ks * ks * pair.tau)
            z = np.zeros(ks.shape + (2, 2), dtype=complex)
            z[..., 0, 0] = ph
            z[..., 1, 1] = 1.0 / ph
            scale = np.maximum(1.0, np.abs(z).max(axis=(-2, -1)))
            return z, 5e-15 * scale
        method = "exact" if pair.kind == "exponential" else "rk4"
    if method == "exact":
        if pair.kind != "exponential":
            raise ValueError("exact monodromy path requires an exponential pair")
        z = _monodromy_exact_batch(pair, ks)
        scale = np.maximum(1.0, np.abs(z).max(axis=(-2, -1)))
        err = 5e-15 * scale
        return z, err
    if method != "rk4":
        raise ValueError(f"unknown monodromy method {method!r}")
    if not tol > 0:
        raise ValueError("tol must be positive")
    return _monodromy_rk4_batch(pair, ks, tol)


def monodromy(pair: PeriodicPair, k: complex, tol: float = 1e-10,
              method: str = "auto") -> Monodromy:
    """Z(k) = psi(tau, k) for a single spectral parameter."""
    z, err = monodromy_many(pair, np.array([k], dtype=complex), tol, method)
    return Monodromy(z=z[0], k=complex(k), est_error=float(np.atleast_1d(err)[0]))


def lattice_distance(k: complex, tau: float) -> float:
    """Distance from k to the zero set of sin(2 k^2 tau).

    The zeros are {+-sqrt(n pi / (2 tau)), +-i sqrt(n pi / (2 tau)) : n >= 0}.
    """
    k = complex(k)
    n_center = 2.0 * abs(k) ** 2 * tau / math.pi
    best = abs(k)  # n = 0 point is the origin
    for n in range(max(1, int(n_center) - 3), int(n_center) + 4):
        r = math.sqrt(n * math.pi / (2.0 * tau))
        best = min(best, abs(k - r), abs(k + r), abs(k - 1j * r), abs(k + 1j * r))
    return best


def eta1(pair: PeriodicPair, t: float, n_nodes: int = 96) -> float:
    """Integral of Im(conj(g0) g1) over [0, t] by Gauss-Legendre quadrature."""
    x, w = np.polynomial.legendre.leggauss(n_nodes)
    s = 0.5 * t * (x + 1.0)
    vals = np.array([np.imag(np.conj(g0) * g1) for g0, g1 in (pair.eval(si) for si in s)])
    return float(0.5 * t * np.dot(w, vals))


def check_z_asymptotics(pair: PeriodicPair, k_samples, tol: float = 1e-10,
                        guard: float | None = None, method: str = "auto"):
    """Deviation of Z(k) from its order-1/k large-k truncation.

    The truncation is diag(e^{-2ik^2 tau}, e^{2ik^2 tau}) plus the 1/k matrix
    built from eta1(tau) and g0(0).  Deviations are scaled by the dominant
    exponential magnitude and must decay like 1/k^2 along rays.  Returns a list
    of (k, scaled deviation).
    """
    tau = pair.tau
    if guard is None:
        guard = 1e-3 * math.sqrt(pair.base_frequency)
    e1 = eta1(pair, tau)
    g0_0, _ = pair.eval(0.0)
    out = []
    for k in np.asarray(k_samples, dtype=complex):
        if lattice_distance(k, tau) < guard:
            raise SampleTooClose(f"sample {k} within guard distance of the lattice")
        if abs(2.0 * (k * k).imag * tau) > _EXP_OVERFLOW_LIMIT:
            raise SampleTooClose(f"sample {k} exceeds exponential float range")
        z, _ = monodromy_many(pair, np.array([k]), tol, method)
        z = z[0]
        ep = np.exp(2j * k * k * tau)
        em = np.exp(-2j * k * k * tau)
        sn = np.sin(2.0 * k * k * tau)
        trunc = np.array(
            [
                [em + (-1j * e1 * em) / k, (g0_0 * sn) / k],
                [(np.conj(g0_0) * sn) / k, ep + (1j * e1 * ep) / k],
            ],
            dtype=complex,
        )
        scale = max(abs(ep), abs(em))
        dev = float(np.abs(z - trunc).max() / scale)
        out.append((complex(k), dev))
    return out
