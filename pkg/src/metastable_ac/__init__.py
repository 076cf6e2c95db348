"""Metastable dynamics of the mass-conserving Allen-Cahn ring.

Submodules: ``model`` (potential and constrained dynamics), ``landscape``
(stationary points, transition graph, continuation in gamma), ``hierarchy``
(metastable orders and interface moves), ``rates`` (Eyring-Kramers
quantities and the spectral gap), ``simulate`` (SDE and jump chain) and
``cli``.
"""
from .errors import (BlowUpError, ContinuationError, DegeneratePointError, InputError,
                     InvariantError, MetastableError, NumericError, UnsupportedSizeError)
from .model import (HessianView, LatticeConfig, Params, constrained_drift, constrained_hessian,
                    morse_index, potential, project_to_S, unconstrained_gradient)

__version__ = "0.1.0"

__all__ = [
    "BlowUpError", "ContinuationError", "DegeneratePointError", "HessianView", "InputError",
    "InvariantError", "LatticeConfig", "MetastableError", "NumericError", "Params",
    "UnsupportedSizeError", "constrained_drift", "constrained_hessian", "morse_index",
    "potential", "project_to_S", "unconstrained_gradient",
]
