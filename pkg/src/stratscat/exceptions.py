class StratScatError(Exception):
    """
    Base class for every error raised by stratscat.
    """


class ProfileError(StratScatError, ValueError):
    pass


class GrazingIncidence(StratScatError, ValueError):
    def __init__(self, theta):
        self.theta = theta
        super(GrazingIncidence, self).__init__(
            "Grazing incidence is not supported (theta={!r} rad)".format(theta)
        )


class ZeroAlpha(StratScatError, ValueError):
    def __init__(self, x=None):
        self.x = x
        if x is None:
            msg = "alpha vanishes"
        else:
            msg = "alpha vanishes at x={!r}".format(x)
        super(ZeroAlpha, self).__init__(msg)


class InvalidPermittivity(StratScatError, ValueError):
    pass


class SpectralSingularity(StratScatError):
    """
    The transfer matrix entry M22 vanishes, or the Riccati solution blows up
    at ``x_blow``.
    """

    def __init__(self, x_blow=None, m22=None, detail=None):
        self.x_blow = x_blow
        self.m22 = m22
        parts = ["Spectral singularity"]
        if x_blow is not None:
            parts.append("at x_blow={!r}".format(x_blow))
        if m22 is not None:
            parts.append("(|m22|={!r})".format(abs(m22)))
        if detail:
            parts.append(detail)
        super(SpectralSingularity, self).__init__(" ".join(parts))


class IntegrationFailure(StratScatError):
    def __init__(self, message, x=None):
        self.x = x
        if x is not None:
            message = "{} (at x={!r})".format(message, x)
        super(IntegrationFailure, self).__init__(message)


class MMinusVanishes(StratScatError):
    """
    m_minus has a zero inside the integration window, so the linear
    second-order reduction is singular there and the window must be dissected.
    """

    def __init__(self, x0):
        self.x0 = x0
        super(MMinusVanishes, self).__init__(
            "m_minus vanishes at x={!r}".format(x0)
        )


class QMinusOne(StratScatError, ValueError):
    def __init__(self, x):
        self.x = x
        super(QMinusOne, self).__init__("Q(x) = -1 at x={!r}".format(x))


class QEqualsOne(StratScatError, ValueError):
    def __init__(self, x):
        self.x = x
        super(QEqualsOne, self).__init__("Q(x) = 1 at x={!r}".format(x))


class BranchAmbiguity(StratScatError):
    pass


class ConfigError(StratScatError):
    pass


class ParseError(ConfigError):
    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append("line {}".format(line))
        if field is not None:
            where.append("field {}".format(field))
        if where:
            message = "{}: {}".format(", ".join(where), message)
        super(ParseError, self).__init__(message)


class ValidationError(ConfigError, ValueError):
    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        if field is not None:
            message = "{}: {}".format(field, message)
        if line is not None:
            message = "line {}, {}".format(line, message)
        super(ValidationError, self).__init__(message)
