"""Exception types raised across the planning toolkit."""


class EonPlanError(Exception):
    """Base class for all toolkit errors."""


class UnreachableEntropyError(EonPlanError, ValueError):
    """Requested entropy lies outside what the shaping family can produce."""


class SolverError(EonPlanError, RuntimeError):
    """A numerical root search failed to bracket or converge."""


class OversizeChannelError(EonPlanError, ValueError):
    """A configuration needs more bandwidth than the grid allows."""


class SpectrumError(EonPlanError, ValueError):
    """Invalid spectral layout (overlapping channels, channel outside band)."""


class TopologyError(EonPlanError, ValueError):
    """Malformed or inconsistent network topology input."""
