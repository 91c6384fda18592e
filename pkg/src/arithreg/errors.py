"""Exception hierarchy shared by all arithreg modules.

Error classes map onto CLI exit codes: FormatError/SchemaError -> 1,
DomainError and subclasses -> 2, PrecisionError -> 3.
"""


class ArithregError(Exception):
    """Base class for all library errors."""


class FormatError(ArithregError):
    """Malformed input record (polynomial, element, bundle, job)."""


class SchemaError(FormatError):
    """A job payload does not validate against its command schema."""


class DomainError(ArithregError):
    """Mathematically invalid request (division by zero, non-unit input,
    weight mismatch, field mismatch, unsupported degree, ...)."""


class MembershipError(DomainError):
    """A section does not lie in the stated module/lattice."""


class PrincipalityError(DomainError):
    """The supplied generator does not generate the stated ideal power."""


class PresentationIncompleteError(DomainError):
    """An element has no exponent expression over the supplied generators
    within the search bound; the caller must extend the generating set."""


class SquarefreeError(DomainError):
    """The defining polynomial has a repeated root."""


class PrecisionError(ArithregError):
    """Numerical data was insufficient at the requested precision; callers
    may retry with a larger digit count."""
