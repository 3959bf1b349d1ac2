"""
###############################################################################
# CSD Engine - Concatenated symplectic double codes
###############################################################################
# Codes built from a seed stabilizer code by the symplectic double and a
# concatenation with the [[4,2,2]] code, their logical gates, fault-tolerant
# circuits, circuit-level noise simulation and BP+OSD decoding.
#
# Pipeline: seed → double → CSD code → gates / compiler → protocols
#           → noise → simulation → decoder
#
# Core modules:
# - f2, pauli: GF(2) linear algebra, Paulis and symplectic matrices
# - codes, construction: code types, the double and C4 concatenation
# - distance: information-set distance estimation
# - circuit, gates, groups: circuits, logical actions, gate groups
# - compiler: Clifford factorization with injection counting
# - protocols: state prep, Y measurement, Steane rounds, injection
# - noise, simulation: noise annotation, tableau and frame simulators, DEMs
# - decoder: min-sum BP with ordered statistics
# - exceptions, config: errors and simulation defaults
#
# Note: experiments, sweeps and reports live in the 'tools' package
###############################################################################
"""

from .exceptions import CsdError
from .config import SimulationConfig
from .f2 import BitMatrix, BitVector, kernel, rref, solve
from .pauli import PauliOperator, SymplecticMatrix, is_symplectic, symplectic_product
from .codes import ConcatLayout, CssCode, StabilizerCode, ZXDuality, compute_logicals, q_max, validate
from .construction import CsdConstruction, build_csd, concatenate_c4, seed_library, symplectic_double
from .distance import estimate_distance
from .circuit import Circuit, CliffordCircuit
from .gates import LogicalAction, GateRecord, logical_action, g_tau_generators, g_tau_records
from .compiler import GeneratorSet, csd_generator_set, factorize, injection_histogram
from .protocols import PrepPolicy, build_memory_circuit, build_state_prep, build_y_measurement
from .noise import NoiseModel, PrepNoiseProxy, annotate
from .simulation import DetectorErrorModel, extract_dem, sample, simulate
from .decoder import BpOsdDecoder, DecodingProblem, heavy_postselect, prior_update

__all__ = [
    'CsdError',
    'SimulationConfig',
    'BitMatrix',
    'BitVector',
    'kernel',
    'rref',
    'solve',
    'PauliOperator',
    'SymplecticMatrix',
    'is_symplectic',
    'symplectic_product',
    'ConcatLayout',
    'CssCode',
    'StabilizerCode',
    'ZXDuality',
    'compute_logicals',
    'q_max',
    'validate',
    'CsdConstruction',
    'build_csd',
    'concatenate_c4',
    'seed_library',
    'symplectic_double',
    'estimate_distance',
    'Circuit',
    'CliffordCircuit',
    'LogicalAction',
    'GateRecord',
    'logical_action',
    'g_tau_generators',
    'g_tau_records',
    'GeneratorSet',
    'csd_generator_set',
    'factorize',
    'injection_histogram',
    'PrepPolicy',
    'build_memory_circuit',
    'build_state_prep',
    'build_y_measurement',
    'NoiseModel',
    'PrepNoiseProxy',
    'annotate',
    'DetectorErrorModel',
    'extract_dem',
    'sample',
    'simulate',
    'BpOsdDecoder',
    'DecodingProblem',
    'heavy_postselect',
    'prior_update',
]

__version__ = '1.0.0'
