"""Smooth time-periodic boundary pairs {g0(t), g1(t)}.

A pair is either a single exponential (g0 = alpha*exp(i*omega*t),
g1 = c*exp(i*omega*t)) or a finite Fourier series on a period tau.  Values are
immutable after construction; evaluation reduces the phase modulo the period so
periodicity holds exactly for arbitrarily large t.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class PeriodicPair:
    """A tau-periodic Dirichlet/Neumann boundary pair.

    Exactly one of the two representations is active:

    * exponential: ``g0 = alpha*exp(i*omega*t)``, ``g1 = c*exp(i*omega*t)``
      with alpha > 0 and omega != 0; the period is ``2*pi/|omega|``.
    * fourier: finite mode lists ``[(n, coeff), ...]`` on a given period tau,
      ``g(t) = sum coeff * exp(2*pi*i*n*t/tau)``.
    """

    kind: str
    tau: float
    alpha: float = 0.0
    omega: float = 0.0
    c: complex = 0j
    g0_modes: tuple = field(default=())
    g1_modes: tuple = field(default=())

    def __post_init__(self):
        if self.kind not in ("exponential", "fourier"):
            raise ValueError(f"unknown pair kind {self.kind!r}")
        if not self.tau > 0:
            raise ValueError("period tau must be positive")
        if self.kind == "exponential":
            if not self.alpha > 0:
                raise ValueError("exponential pair requires alpha > 0")
            if self.omega == 0:
                raise ValueError("exponential pair requires omega != 0")

    @staticmethod
    def exponential(alpha: float, omega: float, c: complex) -> "PeriodicPair":
        if not alpha > 0:
            raise ValueError("exponential pair requires alpha > 0")
        if omega == 0:
            raise ValueError("exponential pair requires omega != 0")
        return PeriodicPair(
            kind="exponential",
            tau=2.0 * math.pi / abs(omega),
            alpha=float(alpha),
            omega=float(omega),
            c=complex(c),
        )

    @staticmethod
    def fourier(tau: float, g0_modes=(), g1_modes=()) -> "PeriodicPair":
        return PeriodicPair(
            kind="fourier",
            tau=float(tau),
            g0_modes=tuple((int(n), complex(a)) for n, a in g0_modes),
            g1_modes=tuple((int(n), complex(a)) for n, a in g1_modes),
        )

    @staticmethod
    def zero(tau: float = 2.0 * math.pi) -> "PeriodicPair":
        return PeriodicPair.fourier(tau)

    @property
    def base_frequency(self) -> float:
        """Angular frequency 2*pi/tau of the period lattice."""
        return 2.0 * math.pi / self.tau

    def eval(self, t: float) -> tuple[complex, complex]:
        """Return (g0(t), g1(t)); exactly tau-periodic in t."""
        t = math.fmod(t, self.tau)
        if self.kind == "exponential":
            # sign of omega only flips the direction of the phase rotation
            phase = cmath.exp(1j * self.omega * t)
            return self.alpha * phase, self.c * phase
        w = 2.0 * math.pi / self.tau
        g0 = sum(a * cmath.exp(1j * n * w * t) for n, a in self.g0_modes) + 0j
        g1 = sum(a * cmath.exp(1j * n * w * t) for n, a in self.g1_modes) + 0j
        return g0, g1

    def to_json_dict(self) -> dict:
        if self.kind == "exponential":
            return {
                "type": "exponential",
                "alpha": self.alpha,
                "omega": self.omega,
                "c": [self.c.real, self.c.imag],
            }
        return {
            "type": "fourier",
            "tau": self.tau,
            "g0": [[n, a.real, a.imag] for n, a in self.g0_modes],
            "g1": [[n, a.real, a.imag] for n, a in self.g1_modes],
        }

    @staticmethod
    def from_json_dict(d: dict) -> "PeriodicPair":
        if d.get("type") == "exponential":
            c = d["c"]
            return PeriodicPair.exponential(d["alpha"], d["omega"], complex(c[0], c[1]))
        if d.get("type") == "fourier":
            g0 = [(int(n), complex(re, im)) for n, re, im in d.get("g0", [])]
            g1 = [(int(n), complex(re, im)) for n, re, im in d.get("g1", [])]
            return PeriodicPair.fourier(d["tau"], g0, g1)
        raise ValueError(f"unknown pair type {d.get('type')!r}")


def eval_pair(pair: PeriodicPair, t: float) -> tuple[complex, complex]:
    """Functional form of :meth:`PeriodicPair.eval`."""
    return pair.eval(t)


def make_exponential_family_d(alpha: float, omega: float) -> PeriodicPair:
    """Admissible single-exponential pair with c = -alpha*sqrt(omega + alpha^2).

    Requires alpha > 0 and omega > 0; other parameter ranges are rejected
    because they fail the spectral gate.
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    if not omega > 0:
        raise ValueError("omega must be positive")
    c = -alpha * math.sqrt(omega + alpha * alpha)
    return PeriodicPair.exponential(alpha, omega, c)
