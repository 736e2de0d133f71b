"""Exception hierarchy shared by the evaluators, constructions and suites."""


class FracLabError(Exception):
    """Base class for all package errors."""


class NonSmoothPoint(FracLabError):
    """Evaluation point lies outside the field's smooth window (or too close to its edge)."""


class DivergentTail(FracLabError):
    """Tail descriptor does not certify membership in the weighted L^1 class."""


class ToleranceNotMet(FracLabError):
    """Adaptive quadrature exhausted its subdivision budget."""


class NotRadial(FracLabError):
    """A radial fast path was requested for a field without a radial profile."""


class PointOutsideBall(FracLabError):
    """Tail quantities need the evaluation point strictly inside the ball."""


class SingularKernel(FracLabError):
    """Kernel-derivative integrand is not supported away from the evaluation point."""


class DeltaSearchFailed(FracLabError):
    """Gradient lower bound failed on the shifted ball; derivative constants were too loose."""


class RadiusTooSmall(FracLabError):
    """Decomposition radius is not large compared with the evaluation point."""


class NonConvergent(FracLabError):
    """Iterated-limit extrapolation did not settle on the largest radius."""
