"""Contextuality inequalities on symplectic polar spaces of N-qubit Pauli observables."""

__version__ = "0.1.0"

from .pauli import PauliOperator, SymplecticPoint, canonical_operator, compose, from_label, symplectic_product, to_label
from .geometry import Context, IncidenceConfiguration, build_polar_space, context_sign, doily, quadric
from .contextuality import analyze, bounds, chi, ks_solvable, max_satisfiable, satisfied_count
from .circuits import context_circuit, emit_qasm, observable_block
from .simulator import NoiseModel, StateVector, run_context, run_experiment
