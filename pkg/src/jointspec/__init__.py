"""Joint spectra of quantized integrable systems and their semiclassical limits."""
from .kernels import BACKEND

__version__ = "0.1.0"
