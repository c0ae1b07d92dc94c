class KLMedianError(Exception):
    """Base class for all package errors."""


class ParameterError(KLMedianError, ValueError):
    """An argument is outside its documented domain."""


class ResourceError(KLMedianError):
    """An enumeration would exceed a configured cap."""
