"""Anyon models, braid-group representations, exchange spectra and energy bounds."""

from __future__ import annotations

from .braid import BraidWord, parse, sigma_p
from .exchange import (
    EigenphaseSpectrum,
    exchange_direct,
    exchange_parameters,
    exchange_reduced,
    popcorn_alpha,
    spectrum,
)
from .fusion import FusionAlgebra, fusion_power, quantum_dimensions
from .modelfile import load_model, resolve_model
from .numerics import NumericalError, eigenphases
from .reps import Representation, abelian_rep, burau3_unitary, burau_rep, evaluate, splitting_rep
from .symbols import AnyonModel, builtin, verify_hexagon, verify_pentagon

__version__ = "0.1.0"

__all__ = [
    "AnyonModel",
    "BraidWord",
    "EigenphaseSpectrum",
    "FusionAlgebra",
    "NumericalError",
    "Representation",
    "abelian_rep",
    "builtin",
    "burau3_unitary",
    "burau_rep",
    "eigenphases",
    "evaluate",
    "exchange_direct",
    "exchange_parameters",
    "exchange_reduced",
    "fusion_power",
    "load_model",
    "parse",
    "popcorn_alpha",
    "quantum_dimensions",
    "resolve_model",
    "sigma_p",
    "spectrum",
    "splitting_rep",
    "verify_hexagon",
    "verify_pentagon",
]
