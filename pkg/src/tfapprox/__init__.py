"""Optimal time-frequency invariant approximation of data on Z_d."""

__version__ = "0.1.0"

from .approximation import (  # noqa: E402
    ApproxResult,
    DataSet,
    TFSubspace,
    approximation_error,
    error_curve,
    error_from_spectrum,
    fiber_projection,
    fiberwise_error,
    optimal_generators,
    project,
)
from .errors import *  # noqa: E402,F401,F403
from .lattice import GroupConfig, character, lattice_elements, make_config  # noqa: E402
from .spectral import EigenDecomposition, eigh, gramian  # noqa: E402
from .transforms import (  # noqa: E402
    dft,
    helson,
    helson_inverse,
    idft,
    modulate,
    translate,
    zak,
    zak_time_domain,
)
