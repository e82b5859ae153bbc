"""Fast high-dimensional kernel summation via Fourier slicing"""

__version__ = "1.0.0"
__author__ = "slicesum developers"
