"""Exception types shared across the package."""


class DomainError(ValueError):
    """A numeric argument lies outside the domain where a formula is defined."""


class ParameterError(ValueError):
    """A structural parameter (tree shape, scheme, bounds) is invalid."""


class InfeasibleConfigError(ValueError):
    """The configuration is well formed but physically meaningless (e.g. eps_p > 1)."""
