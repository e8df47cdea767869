"""Bound-entanglement witnesses for three-qubit GHZ-diagonal states."""
from .ghz import GhzDiagonalState, RVector, PptReport
from .witness import WitnessSpec, WitnessValue
from .circuits import Circuit, Gate
from .estimator import Estimate, NoiseParams

__all__ = [
    "Circuit",
    "Estimate",
    "Gate",
    "GhzDiagonalState",
    "NoiseParams",
    "PptReport",
    "RVector",
    "WitnessSpec",
    "WitnessValue",
]
