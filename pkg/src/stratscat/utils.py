import numpy as np

REFERENCE_METHOD = "riccati"

# Reference first, then the other integrators, then the independent oracles.
METHOD_ORDER = [
    REFERENCE_METHOD,
    "evolution",
    "slabstack",
    "linearx",
    "helmholtz",
    "psi",
]


def sorted_methods(names):
    """
    Sort method names into the order results are reported in: 'riccati' first,
    then the remaining known methods in METHOD_ORDER, then anything else
    alphabetically.
    """
    names = set(names)
    known = [m for m in METHOD_ORDER if m in names]
    others = sorted(names.difference(METHOD_ORDER))
    return known + others


def loglog_slope(xs, ys):
    """
    Least-squares slope of log(ys) against log(xs).
    """
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def parse_complex(value):
    """
    Accept a number, a string such as "2.25+0.1j" or a [re, im] pair.
    """
    if isinstance(value, bool):
        raise TypeError("Expected a complex number, got {!r}".format(value))
    if isinstance(value, (int, float, complex)):
        return complex(value)
    if isinstance(value, str):
        try:
            return complex(value.replace(" ", "").replace("i", "j"))
        except ValueError:
            raise ValueError("Cannot read {!r} as a complex number".format(value))
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise TypeError("Expected a complex number, got {!r}".format(value))


def format_float(value):
    """
    Shortest text that reads back as the same double.
    """
    return repr(float(value))
