"""Exception types shared across the package."""


class GeometryError(ValueError):
    """Base class for geometric/numerical contract violations."""


class DomainError(GeometryError):
    """Point outside a chart domain or too close to its boundary."""


class HorizontalPointError(GeometryError):
    """A theta-singular quantity was requested at a horizontal point."""


class ProfileError(GeometryError):
    """Profile ODE / quadrature construction failed."""


class SpecError(ValueError):
    """Invalid surface/family specification (unknown kind, bad parameters)."""
