"""Light-field microscopy toolkit.

Paraxial design of thin-lens trains for lenslet sensors, synthetic raw
rendering, sub-aperture decoding, coverage measurement, and metric depth
calibration.
"""

from . import errors
from .optics import (
    ConjugatePair,
    OpticalElement,
    OpticalTrain,
    Regime,
    TrainSummary,
    chain_magnification,
    classify_regime,
    conjugate,
    f_number,
    microscope_f_number,
    optical_invariant,
    solve_lens_placement,
    summarize,
    working_f_number,
)

__version__ = "0.1.0"
