"""Numerical checks of linear growth of quantum circuit complexity.

Continuous side: accessible dimension of block circuits as Jacobian rank
(:mod:`.linalg`, :mod:`.architecture`, :mod:`.dimension`). Discrete side:
exact Clifford+T arithmetic and word-length complexity of random walks
(:mod:`.exact`, :mod:`.walk`). :mod:`.cli` runs configured experiments.
"""
from .architecture import BlockArchitecture, CircuitPoint, brickwork, construct, sample_point, single_slot
from .dimension import accessible_dimension, dimension_curve, growth_report, jacobian_at
from .walk import CliffordTBackend, LatticeBackend, PermutationBackend, exact_complexity, kingman_estimate

__version__ = "0.1.0"
