"""Spectral quantities derived from the one-period transfer matrix.

From Z(k) we form G = (tr Z)^2 - 4 and the cut-free combinations: the quotient
qb, the product pb, and the square ab2 of the diagonal spectral factor.  For a
pair that passes the admissibility gate, sqrt(G) is forced to equal the entire
expression 2i sin(2 k^2 tau), which is what all quotients below use; a
continuity-tracked square root of G along user paths is kept as a diagnostic
for rejecting pairs that are not of this form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDenominator
from .monodromy import Monodromy, lattice_distance, monodromy_many
from .pairs import PeriodicPair

_DEN_FLOOR = 1e-12


def default_guard(tau: float) -> float:
    """Guard distance around the singular lattice: 1e-3 * sqrt(2 pi / tau)."""
    return 1e-3 * math.sqrt(2.0 * math.pi / tau)


@dataclass(frozen=True)
class SpectralSample:
    """All spectral quantities at a single k."""

    k: complex
    g: complex
    sqrt_g: complex
    qb: complex
    pb: complex
    ab2: complex
    near_singular: bool


def g_of_k(z: Monodromy) -> complex:
    """G(k) = (tr Z)^2 - 4."""
    tr = z.trace
    return tr * tr - 4.0


def sqrt_g_admissible(k: complex, tau: float) -> complex:
    """The entire branch 2i sin(2 k^2 tau) valid for gate-passing pairs."""
    return 2j * np.sin(2.0 * k * k * tau)


def qb(z: Monodromy, sqrt_g: complex) -> complex:
    """Quotient -2 Z12 / (Z11 - Z22 - sqrt(G))."""
    den = z.z[0, 0] - z.z[1, 1] - sqrt_g
    scale = max(1.0, float(np.abs(z.z).max()))
    if abs(den) < _DEN_FLOOR * scale:
        raise DegenerateDenominator(f"qb denominator vanishes at k = {z.k}")
    return -2.0 * z.z[0, 1] / den


def pb(z: Monodromy, sqrt_g: complex) -> complex:
    """Product -Z21 / sqrt(G); poles on the lattice need residue extraction."""
    scale = max(1.0, float(np.abs(z.z).max()))
    if abs(sqrt_g) < _DEN_FLOOR * scale:
        raise DegenerateDenominator(f"sqrt(G) vanishes at k = {z.k}")
    return -z.z[1, 0] / sqrt_g


def ab_squared(z: Monodromy, sqrt_g: complex) -> complex:
    """-(Z11 - Z22 - sqrt(G)) / (2 sqrt(G)); tends to 1 along generic rays."""
    scale = max(1.0, float(np.abs(z.z).max()))
    if abs(sqrt_g) < _DEN_FLOOR * scale:
        raise DegenerateDenominator(f"sqrt(G) vanishes at k = {z.k}")
    return -(z.z[0, 0] - z.z[1, 1] - sqrt_g) / (2.0 * sqrt_g)


def sample(pair: PeriodicPair, k: complex, tol: float = 1e-10,
           guard: float | None = None, method: str = "auto") -> SpectralSample:
    """Evaluate all spectral quantities at one k.

    Inside the lattice guard zone the sample is flagged near_singular and the
    quotients are set to nan rather than extrapolated.
    """
    if guard is None:
        guard = default_guard(pair.tau)
    from .monodromy import monodromy as _monodromy

    z = _monodromy(pair, k, tol, method)
    g = g_of_k(z)
    sg = sqrt_g_admissible(k, pair.tau)
    near = lattice_distance(k, pair.tau) < guard
    if near:
        nan = complex(float("nan"), float("nan"))
        return SpectralSample(k=complex(k), g=g, sqrt_g=sg, qb=nan, pb=nan,
                              ab2=nan, near_singular=True)
    return SpectralSample(
        k=complex(k), g=g, sqrt_g=sg,
        qb=qb(z, sg), pb=pb(z, sg), ab2=ab_squared(z, sg),
        near_singular=False,
    )


def sample_grid(pair: PeriodicPair, ks, tol: float = 1e-10,
                guard: float | None = None, method: str = "auto"):
    """Vectorized version of :func:`sample`; returns a list of SpectralSample."""
    ks = np.asarray(ks, dtype=complex)
    if guard is None:
        guard = default_guard(pair.tau)
    zs, _ = monodromy_many(pair, ks, tol, method)
    tau = pair.tau
    out = []
    for k, z in zip(ks, zs):
        tr = z[0, 0] + z[1, 1]
        g = tr * tr - 4.0
        sg = sqrt_g_admissible(k, tau)
        near = lattice_distance(k, tau) < guard
        if near:
            nan = complex(float("nan"), float("nan"))
            out.append(SpectralSample(complex(k), g, sg, nan, nan, nan, True))
            continue
        den = z[0, 0] - z[1, 1] - sg
        out.append(
            SpectralSample(
                k=complex(k), g=g, sqrt_g=sg,
                qb=-2.0 * z[0, 1] / den,
                pb=-z[1, 0] / sg,
                ab2=-den / (2.0 * sg),
                near_singular=False,
            )
        )
    return out


def qb_on_real_grid(pair: PeriodicPair, ks, tol: float = 1e-10,
                    method: str = "auto") -> np.ndarray:
    """qb(k) on a real grid as a complex array (nan inside guard zones)."""
    ks = np.asarray(ks, dtype=float)
    zs, _ = monodromy_many(pair, ks.astype(complex), tol, method)
    sg = sqrt_g_admissible(ks.astype(complex), pair.tau)
    den = zs[:, 0, 0] - zs[:, 1, 1] - sg
    guard = default_guard(pair.tau)
    vals = -2.0 * zs[:, 0, 1] / den
    mask = np.array([lattice_distance(k, pair.tau) < guard for k in ks])
    vals[mask] = np.nan
    return vals


def sqrt_g_tracked(pair: PeriodicPair, path_ks, tol: float = 1e-10,
                   method: str = "auto") -> np.ndarray:
    """Continuity-tracked sqrt((tr Z)^2 - 4) along a sampled path.

    Diagnostic only: used to detect branch points of G when rejecting pairs
    that fail the gate.  The starting branch is chosen to match the
    admissible-case expression at the first path point.
    """
    path_ks = np.asarray(path_ks, dtype=complex)
    zs, _ = monodromy_many(pair, path_ks, tol, method)
    tr = zs[:, 0, 0] + zs[:, 1, 1]
    g = tr * tr - 4.0
    roots = np.sqrt(g.astype(complex))
    out = np.empty_like(roots)
    ref = sqrt_g_admissible(path_ks[0], pair.tau)
    prev = roots[0] if abs(roots[0] - ref) <= abs(-roots[0] - ref) else -roots[0]
    out[0] = prev
    for i in range(1, len(roots)):
        r = roots[i]
        prev = r if abs(r - prev) <= abs(-r - prev) else -r
        out[i] = prev
    return out
