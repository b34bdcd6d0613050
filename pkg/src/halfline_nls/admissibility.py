"""Operational admissibility gate for periodic boundary pairs.

The gate decides eventual admissibility by testing, in order:

1. smoothness: G(k) must equal -4 sin^2(2 k^2 tau) (the form forced by
   analyticity of the quotient qb in the closed upper half-plane), and qb must
   have no poles there -- checked by locating zeros of the diagonal spectral
   square ab2 in the upper half-plane and measuring the winding of qb around
   them;
2. the strict bound sup |qb| < 1 on the real line;
3. uniform 1/k decay of pb with the correct leading coefficient;
4. pole structure of pb: no poles on the real lattice, finitely many on the
   imaginary lattice, with residues extracted by spectrally accurate contour
   quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ContourCrossesSingularity, Inconclusive
from .monodromy import lattice_distance, monodromy_many
from .pairs import PeriodicPair
from .spectral import default_guard, sqrt_g_admissible

_CONTOUR_NODES = 64


@dataclass
class AdmissibilityReport:
    sup_qb_on_r: float = 0.0
    a3_pass: bool = False
    decay_pass: bool = False
    smoothness_pass: bool = False
    pole_candidates: list = field(default_factory=list)  # [(k_j, residue of pb)]
    finite_poles_pass: bool = False
    admissible: bool = False
    reason: str = ""

    def to_json_dict(self) -> dict:
        return {
            "sup_qb_on_r": self.sup_qb_on_r,
            "a3_pass": self.a3_pass,
            "decay_pass": self.decay_pass,
            "smoothness_pass": self.smoothness_pass,
            "pole_candidates": [
                [[k.real, k.imag], [r.real, r.imag]] for k, r in self.pole_candidates
            ],
            "finite_poles_pass": self.finite_poles_pass,
            "verdict": "Admissible" if self.admissible else f"Rejected({self.reason})",
        }


def _qb_from_z(zs, ks, tau):
    sg = sqrt_g_admissible(np.asarray(ks, dtype=complex), tau)
    den = zs[..., 0, 0] - zs[..., 1, 1] - sg
    return -2.0 * zs[..., 0, 1] / den


def _pb_from_z(zs, ks, tau):
    sg = sqrt_g_admissible(np.asarray(ks, dtype=complex), tau)
    return -zs[..., 1, 0] / sg


def _ab2_from_z(zs, ks, tau):
    sg = sqrt_g_admissible(np.asarray(ks, dtype=complex), tau)
    return -(zs[..., 0, 0] - zs[..., 1, 1] - sg) / (2.0 * sg)


def _abs_qb_real(pair, k, tol, method):
    zs, _ = monodromy_many(pair, np.array([k], dtype=complex), tol, method)
    return float(np.abs(_qb_from_z(zs, [k], pair.tau))[0])


def check_a3(pair: PeriodicPair, half_width: float | None = None, n: int = 401,
             margin: float = 1e-6, tol: float = 1e-10,
             method: str = "auto") -> tuple[float, bool]:
    """Grid supremum of |qb| on the real line, refined around the largest
    samples; passes iff sup < 1 - margin."""
    guard = default_guard(pair.tau)
    if half_width is None:
        g0, _ = pair.eval(0.0)
        half_width = 10.0 * max(1.0, abs(g0), math.sqrt(pair.base_frequency))
    ks = np.linspace(-half_width, half_width, n)
    # nudge samples out of lattice guard zones
    ks = np.array([
        k + 2.0 * guard if lattice_distance(k, pair.tau) < guard else k for k in ks
    ])
    zs, _ = monodromy_many(pair, ks.astype(complex), tol, method)
    vals = np.abs(_qb_from_z(zs, ks, pair.tau))
    sup = float(np.nanmax(vals))
    dk = ks[1] - ks[0]
    top = np.argsort(vals)[-5:]
    for i in top:
        lo, hi = ks[i] - dk, ks[i] + dk
        res = minimize_scalar(
            lambda x: -_abs_qb_real(pair, x, tol, method),
            bounds=(lo, hi), method="bounded",
            options={"xatol": 1e-10 * max(1.0, abs(ks[i]))},
        )
        x_star = float(res.x)
        if lattice_distance(x_star, pair.tau) < guard:
            # limit-aware evaluation just outside the guard zone
            cand = max(
                _abs_qb_real(pair, x_star - 2.0 * guard, tol, method),
                _abs_qb_real(pair, x_star + 2.0 * guard, tol, method),
            )
        else:
            cand = float(-res.fun)
        sup = max(sup, cand)
    return sup, sup < 1.0 - margin


def check_g_identity(pair: PeriodicPair, tol: float = 1e-10,
                     rtol: float = 1e-6, method: str = "auto") -> tuple[bool, float]:
    """Test G(k) == -4 sin^2(2 k^2 tau) on a spread of upper-half-plane
    samples; failure signals an odd-order zero of G (branch point of qb)."""
    g0, _ = pair.eval(0.0)
    rho = max(1.0, abs(g0), math.sqrt(pair.base_frequency))
    # G involves tr(Z)^2, so keep |Im 2 k^2 tau| <= 2 r^2 tau under ~170 to
    # hold (tr Z)^2 inside float range
    r_cap = 0.9 * math.sqrt(85.0 / pair.tau)
    radii = np.minimum(np.array([0.37, 0.83, 1.57, 2.41]) * rho,
                       np.array([0.35, 0.55, 0.78, 1.0]) * r_cap)
    angles = np.linspace(0.15, math.pi - 0.15, 7)
    ks = np.array([r * np.exp(1j * th) for r in radii for th in angles])
    ks = np.array([k for k in ks if lattice_distance(k, pair.tau) > default_guard(pair.tau)])
    zs, _ = monodromy_many(pair, ks, tol, method)
    tr = zs[:, 0, 0] + zs[:, 1, 1]
    g = tr * tr - 4.0
    target = -4.0 * np.sin(2.0 * ks * ks * pair.tau) ** 2
    scale = np.maximum(1.0, np.maximum(np.abs(g), np.abs(target)))
    dev = float(np.max(np.abs(g - target) / scale))
    return dev <= rtol, dev


# below this magnitude, qb values on a probe circle are roundoff noise and
# carry no phase information
_QB_NOISE_FLOOR = 1e-10


def _winding(values: np.ndarray) -> int:
    """Winding number of a closed sequence of nonzero complex values."""
    ph = np.angle(values)
    d = np.diff(np.concatenate([ph, ph[:1]]))
    d = (d + math.pi) % (2.0 * math.pi) - math.pi
    return int(round(d.sum() / (2.0 * math.pi)))


def find_qb_upper_poles(pair: PeriodicPair, half_width: float | None = None,
                        height: float | None = None, tol: float = 1e-10,
                        method: str = "auto", n_lattice: int = 12) -> list[complex]:
    """Poles of qb in the open upper half-plane.

    Off-lattice candidates are the small-|ab2| minima on a rectangle scan
    (zeros of ab2 make the qb denominator vanish); each candidate is confirmed
    as a pole by a negative winding of qb around a small circle.  The imaginary
    lattice points themselves are probed by the same winding test, since a
    zero of ab2 can land exactly on the lattice.
    """
    tau = pair.tau
    guard = default_guard(tau)
    g0, _ = pair.eval(0.0)
    rho = max(1.0, abs(g0), math.sqrt(pair.base_frequency))
    if half_width is None:
        half_width = 3.0 * rho
    if height is None:
        height = 3.0 * rho
    # overflow cap: |Im 2 k^2 tau| = 4 |x| y tau over the rectangle
    cap = 300.0 / (4.0 * tau)
    if half_width * height > cap:
        s = math.sqrt(cap / (half_width * height))
        half_width *= s
        height *= s
    xs = np.linspace(-half_width, half_width, 41)
    ys = np.linspace(0.04 * rho, height, 25)
    grid = np.array([complex(x, y) for y in ys for x in xs])
    grid = np.array([k for k in grid if lattice_distance(k, tau) > 2.0 * guard])
    zs, _ = monodromy_many(pair, grid, tol, method)
    ab2 = _ab2_from_z(zs, grid, tau)
    order = np.argsort(np.abs(ab2))
    poles = []
    for idx in order[:8]:
        if abs(ab2[idx]) > 0.5:
            break
        k0 = grid[idx]
        if any(abs(k0 - p) < 0.3 * rho for p in poles):
            continue
        # secant refinement of the ab2 zero
        k_prev, k_cur = k0, k0 + 0.01 * rho
        f_prev = ab2[idx]
        for _ in range(40):
            zc, _ = monodromy_many(pair, np.array([k_cur]), tol, method)
            f_cur = _ab2_from_z(zc, [k_cur], tau)[0]
            if abs(f_cur) < 1e-10:
                break
            step = f_cur * (k_cur - k_prev) / (f_cur - f_prev)
            k_prev, f_prev = k_cur, f_cur
            k_cur = k_cur - step
            if abs(step) < 1e-12 * max(1.0, abs(k_cur)):
                break
        if k_cur.imag <= 0 or abs(k_cur - k0) > rho:
            continue
        if lattice_distance(k_cur, tau) < 2.0 * guard:
            continue
        # winding of qb around the candidate: a pole gives a negative count
        r = max(10.0 * guard, 1e-3 * rho)
        theta = 2.0 * math.pi * np.arange(_CONTOUR_NODES) / _CONTOUR_NODES
        circle = k_cur + r * np.exp(1j * theta)
        zc, _ = monodromy_many(pair, circle, tol, method)
        qb_vals = _qb_from_z(zc, circle, tau)
        if np.max(np.abs(qb_vals)) > _QB_NOISE_FLOOR and _winding(qb_vals) < 0:
            poles.append(complex(k_cur))
    # lattice points: numerator and denominator of qb both vanish there, so a
    # surviving pole shows up as a negative winding around the point
    w = pair.base_frequency
    sqw = math.sqrt(w)
    theta = 2.0 * math.pi * np.arange(_CONTOUR_NODES) / _CONTOUR_NODES
    for n in range(1, n_lattice + 1):
        center = 0.5j * math.sqrt(n * w)
        gap = (math.sqrt(n + 1) - math.sqrt(n)) * sqw / 2.0
        circle = center + 0.25 * gap * np.exp(1j * theta)
        zc, _ = monodromy_many(pair, circle, tol, method)
        qb_vals = _qb_from_z(zc, circle, tau)
        if np.max(np.abs(qb_vals)) > _QB_NOISE_FLOOR and _winding(qb_vals) < 0:
            poles.append(complex(center))
    return sorted(poles, key=abs)


def _contour_residue(pair, center, radius, tol, method, func="pb"):
    theta = 2.0 * math.pi * np.arange(_CONTOUR_NODES) / _CONTOUR_NODES
    nodes = center + radius * np.exp(1j * theta)
    guard = default_guard(pair.tau)
    for node in nodes:
        d_self = abs(node - center)
        if lattice_distance(node, pair.tau) < guard and d_self > guard:
            raise ContourCrossesSingularity(
                f"contour around {center} enters the guard zone of another lattice point"
            )
    zs, _ = monodromy_many(pair, nodes, tol, method)
    vals = _pb_from_z(zs, nodes, pair.tau)
    # (1/2pi i) closed contour integral by the trapezoid rule
    return complex(radius * np.mean(vals * np.exp(1j * theta)))


def locate_poles(pair: PeriodicPair, n_max: int = 32, radius_factor: float = 0.25,
                 res_tol: float = 1e-8, tol: float = 1e-10, method: str = "auto"):
    """Residues of pb at the imaginary-lattice points i sqrt(n w)/2, n=1..n_max,
    plus a scan of the real lattice points (any nonzero residue there rejects
    the pair).  Returns (upper_poles, real_poles) as lists of (k, residue)."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    w = pair.base_frequency
    sqw = math.sqrt(w)

    def gap(n):
        lo = (math.sqrt(n) - math.sqrt(n - 1)) * sqw / 2.0 if n >= 1 else sqw / 2.0
        hi = (math.sqrt(n + 1) - math.sqrt(n)) * sqw / 2.0
        return min(lo, hi)

    upper = []
    for n in range(1, n_max + 1):
        center = 0.5j * math.sqrt(n * w)
        res = _contour_residue(pair, center, radius_factor * gap(n), tol, method)
        if abs(res) > res_tol:
            upper.append((center, res))
    real = []
    for n in range(0, n_max + 1):
        centers = [0.0] if n == 0 else [0.5 * math.sqrt(n * w), -0.5 * math.sqrt(n * w)]
        for center in centers:
            res = _contour_residue(pair, complex(center), radius_factor * gap(max(n, 1)),
                                   tol, method)
            if abs(res) > res_tol:
                real.append((complex(center), res))
    return upper, real


def residues_by_index(pair: PeriodicPair, n_max: int = 32,
                      radius_factor: float = 0.25, tol: float = 1e-10,
                      method: str = "auto") -> np.ndarray:
    """|residue of pb| at the upper lattice points, indexed n = 1..n_max."""
    w = pair.base_frequency
    sqw = math.sqrt(w)
    out = np.empty(n_max)
    for n in range(1, n_max + 1):
        gap = (math.sqrt(n + 1) - math.sqrt(n)) * sqw / 2.0
        center = 0.5j * math.sqrt(n * w)
        out[n - 1] = abs(_contour_residue(pair, center, radius_factor * gap, tol, method))
    return out


def check_finite_poles(residue_magnitudes, res_tol: float = 1e-8) -> tuple[bool, int]:
    """Pass iff the residues vanish beyond some N0 <= n_max/2; otherwise the
    window is too narrow to decide and Inconclusive is raised."""
    mags = np.asarray(residue_magnitudes, dtype=float)
    n_max = len(mags)
    above = np.nonzero(mags > res_tol)[0]
    n_last = int(above[-1]) + 1 if len(above) else 0
    if n_last <= n_max // 2:
        return True, n_last
    raise Inconclusive(
        f"residues persist up to n = {n_last} of n_max = {n_max}"
    )


def check_decay(pair: PeriodicPair, radii=None, theta: float = math.pi / 4,
                rtol: float = 0.02, tol: float = 1e-10,
                method: str = "auto") -> bool:
    """Extrapolate the 1/k leading coefficient of pb along a ray off the axes;
    pass iff it matches -conj(g0(0))/(2i) within rtol.

    A three-term fit pb*k = c0 + c1/k + c2/k^2 at three radii removes the
    subleading contamination; the radii are capped so |exp(2 i k^2 tau)| stays
    inside float range.
    """
    g0, _ = pair.eval(0.0)
    lead = -np.conj(g0) / 2j
    if radii is None:
        rho = max(1.0, abs(g0), math.sqrt(pair.base_frequency))
        # |Im 2 k^2 tau| = 2 r^2 tau at theta = pi/4 must stay under ~700
        r_cap = 0.95 * math.sqrt(680.0 / (2.0 * pair.tau * abs(math.sin(2.0 * theta))))
        r3 = min(8.0 * rho, r_cap)
        r1 = r3 / 1.75
        radii = np.array([r1, math.sqrt(r1 * r3), r3])
    ks = np.asarray(radii, dtype=float) * np.exp(1j * theta)
    zs, _ = monodromy_many(pair, ks, tol, method)
    pbs = _pb_from_z(zs, ks, pair.tau)
    vand = np.vander(1.0 / ks, 3, increasing=True)
    c0 = np.linalg.solve(vand, pbs * ks)[0]
    if abs(g0) == 0.0:
        return bool(abs(c0) <= 1e-8 and abs(pbs[-1]) <= 1e-8)
    return bool(abs(c0 - lead) <= rtol * abs(lead))


def verdict(pair: PeriodicPair, n_max: int = 32, res_tol: float = 1e-8,
            tol: float = 1e-10, method: str = "auto") -> AdmissibilityReport:
    """Run all gates in order and assemble the report."""
    rep = AdmissibilityReport()
    rep.smoothness_pass, _ = check_g_identity(pair, tol=tol, method=method)
    if not rep.smoothness_pass:
        rep.reason = "odd-order zero of G (branch point of qb) detected"
        return rep
    upper_qb_poles = find_qb_upper_poles(pair, tol=tol, method=method)
    if upper_qb_poles:
        rep.smoothness_pass = False
        rep.reason = f"pole of qb in the upper half-plane near {upper_qb_poles[0]:.6g}"
        return rep
    rep.sup_qb_on_r, rep.a3_pass = check_a3(pair, tol=tol, method=method)
    if not rep.a3_pass:
        rep.reason = f"sup |qb| on R = {rep.sup_qb_on_r:.6g} >= 1"
        return rep
    rep.decay_pass = check_decay(pair, tol=tol, method=method)
    if not rep.decay_pass:
        rep.reason = "pb does not decay with the required leading coefficient"
        return rep
    upper, real = locate_poles(pair, n_max=n_max, res_tol=res_tol, tol=tol,
                               method=method)
    rep.pole_candidates = upper
    if real:
        rep.reason = f"pb has a pole on the real line at {real[0][0]:.6g}"
        return rep
    mags = np.zeros(n_max)
    for k, r in upper:
        n = int(round((2.0 * abs(k)) ** 2 / pair.base_frequency))
        mags[n - 1] = abs(r)
    try:
        rep.finite_poles_pass, _ = check_finite_poles(mags, res_tol)
    except Inconclusive:
        rep.reason = "pole finiteness inconclusive within the lattice window"
        return rep
    rep.admissible = True
    rep.reason = ""
    return rep
