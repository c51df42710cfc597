"""Statevector simulation of hybrid quantum-classical bilinear risk valuation."""

from .kernels import backend as kernel_backend

__all__ = ["kernel_backend"]
__version__ = "0.1.0"
