"""Exception hierarchy shared by every package under ``src/``.

The CLI maps the three families onto exit codes:
``PreconditionError`` -> 3, ``PolyParseError``/``ConfigError``/``CheckpointError`` -> 2.
Bounded searches that come back empty are not errors; they return ``None``.
"""


class ToolkitError(Exception):
    """Base class for all toolkit errors"""


class PreconditionError(ToolkitError):
    """A mathematical precondition of an operation is violated"""


class NonInvertibleImage(PreconditionError):
    """A negative power of a non-monomial substitution image was required"""


class ZeroPolynomial(PreconditionError):
    """The operation is undefined on the zero polynomial"""


class NotAPolynomial(PreconditionError):
    """A Laurent polynomial with negative x-exponents was given where a polynomial is required"""


class SingularMap(PreconditionError):
    """A linear substitution with vanishing determinant"""


class NotHomogeneousNegative(PreconditionError):
    """Input is not weighted-homogeneous of negative degree"""


class NotInAlgebra(PreconditionError):
    """Input provably lies outside the algebra"""


class ZeroOrConstantInput(PreconditionError):
    """Input is zero or constant where a polynomial of positive degree is needed"""


class MismatchedSurface(PreconditionError):
    """Divisor classes living on different Hirzebruch surfaces were combined"""


class InvalidSection(PreconditionError):
    """Self-intersection data that does not describe an ample section"""


class NotAMember(PreconditionError):
    """Input is not a member of the algebra"""


class InvalidAlgebra(PreconditionError):
    """Parameters that do not define a Wright algebra"""


class InvalidSearchSpace(PreconditionError):
    """Search space parameters out of range"""


class PolyParseError(ToolkitError, ValueError):
    """Text that does not match the polynomial grammar"""


class ConfigError(ToolkitError):
    """Invalid configuration file or value"""


class CheckpointError(ToolkitError):
    """Checkpoint file is unreadable or belongs to a different search space"""
