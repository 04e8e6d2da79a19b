"""sigdimlab: exact signaling dimension of polytopic generalized probabilistic theories."""

from __future__ import annotations

from .errors import DegenerateError, DimensionError, ParseError, SigDimError, SymmetryError
from .gpt import (CorrelationMatrix, Effect, Measurement, MeasurementClass, StateSpace,
                  correlation_matrix, extremal_effects, extremal_measurements, homogenize,
                  measurement_classes, state_symmetries)
from .polytope import HRep, Polytope, VRep, double_description, minkowski_asymmetry
from .sigdim import (BoundsRecord, SigDimReport, SimulationCertificate, bounds, classical_vertices,
                     signaling_dimension, sigdim_2d, simulable, vertex_count)
from .solids import generate_solid, parse_solid
from .symmetry import SymmetryGroup, congruent, find_symmetries

__version__ = "0.1.0"

__all__ = [
    "BoundsRecord", "CorrelationMatrix", "DegenerateError", "DimensionError", "Effect", "HRep",
    "Measurement", "MeasurementClass", "ParseError", "Polytope", "SigDimError", "SigDimReport",
    "SimulationCertificate", "StateSpace", "SymmetryError", "SymmetryGroup", "VRep", "bounds",
    "classical_vertices", "congruent", "correlation_matrix", "double_description",
    "extremal_effects", "extremal_measurements", "find_symmetries", "generate_solid",
    "homogenize", "measurement_classes", "minkowski_asymmetry", "parse_solid", "sigdim_2d",
    "signaling_dimension", "simulable", "state_symmetries", "vertex_count",
]
