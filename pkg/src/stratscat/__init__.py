"""
isort:skip_file
"""
import logging

logging.getLogger(__name__).addHandler(logging.NullHandler())

from .core import Polarization, WaveContext  # noqa: E402,F401
from .slabstack import Amplitudes, TransferMatrix2  # noqa: E402,F401
from .evolution import evolve_transfer  # noqa: E402,F401
from .riccati import riccati_amplitudes, solve_riccati  # noqa: E402,F401
from .linearx import dissect_and_solve, solve_linear_x  # noqa: E402,F401
from .designer import DesignSpec, synthesize  # noqa: E402,F401
from .xcheck import cross_validate, helmholtz_direct  # noqa: E402,F401
