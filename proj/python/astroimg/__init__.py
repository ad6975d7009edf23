"""Astronomical image processing: morphology, filter banks, denoising, restoration, segmentation, spectra."""

from ._core import *  # noqa: F401,F403
from ._core import Error, ParameterError, DimensionError, DegenerateError, SingularError

__version__ = "0.1.0"
