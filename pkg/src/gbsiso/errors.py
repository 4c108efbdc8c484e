"""Exception hierarchy shared by every module."""


class GbsIsoError(Exception):
    """Base class for all library errors."""


class InvalidGraphError(GbsIsoError, ValueError):
    """Malformed graph, automorphism or labelling."""


class PreconditionError(GbsIsoError, ValueError):
    """An operation was called outside its domain."""


class DegenerateGroupError(PreconditionError):
    """The group is virtually abelian (edgeless graph, or Euler characteristic >= 0)."""


class CertificateError(GbsIsoError):
    """A slide certificate failed to replay."""


class ResourceCapExceeded(GbsIsoError):
    """A search exceeded its configured node budget."""


class IsomorphismMismatch(GbsIsoError):
    """A poset isomorphism is inconsistent with the graphs it is meant to relate."""
