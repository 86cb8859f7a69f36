"""Exactly solvable 2+1D coupled-chain fermion model: spectrum, free energy
and correlation functions, with independent numerical cross-checks."""

from .core import ModelParams, validate_params

__all__ = ["ModelParams", "validate_params"]
__version__ = "0.1.0"
