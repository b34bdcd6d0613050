"""Exception types shared across the pipeline."""


class HalflineNLSError(Exception):
    """Base class for all errors raised by this package."""


class NonConvergence(HalflineNLSError):
    """The one-period integrator failed to reach the requested tolerance."""


class SampleTooClose(HalflineNLSError):
    """A spectral sample lies inside the guard zone of the singular lattice."""


class DegenerateDenominator(HalflineNLSError):
    """A spectral quotient was requested too close to a vanishing denominator."""


class GuardCollision(HalflineNLSError):
    """A maximizer landed inside a lattice guard zone."""


class ContourCrossesSingularity(HalflineNLSError):
    """A residue contour intersects the guard zone of another lattice point."""


class GateNotPassed(HalflineNLSError):
    """An operation requiring the admissibility gate was called on a failing pair."""


class PoleOfA(HalflineNLSError):
    """The scalar function a(k) vanished where it must not."""


class TooCloseToContour(HalflineNLSError):
    """Cauchy-transform evaluation point is too close to the integration contour."""


class CoincidentPoles(HalflineNLSError):
    """Two poles in the dressing data are numerically indistinguishable."""


class SingularSystem(HalflineNLSError):
    """The algebraic dressing system degenerates at the given point."""

    def __init__(self, x, t, stage=None):
        self.x = x
        self.t = t
        self.stage = stage
        msg = f"dressing system singular at (x, t) = ({x}, {t})"
        if stage is not None:
            msg += f" in stage {stage}"
        super().__init__(msg)


class EvalAtPole(HalflineNLSError):
    """Matrix evaluation requested at one of its poles."""


class OnBranchCut(HalflineNLSError):
    """Evaluation point lies on (or too close to) a tracked branch cut."""


class SingularPoint(HalflineNLSError):
    """Closed-form solution evaluated too close to one of its singularities."""


class Inconclusive(HalflineNLSError):
    """A finiteness check could not reach a decision within its budget."""
