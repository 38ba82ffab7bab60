"""Spectra of 1D polynomial oscillators in an external field, in an optimized oscillator basis."""
from .basis import BasisSpec, expectation_in_level, make_basis, optimize_r, pivot_choice, stationarity_residual
from .eigensolver import SpectralResult, eigh, ground_state_pair
from .field import FieldScan, scan_field, spectrum, uniform_grid
from .hamiltonian import assemble, ordered_power, position_operator
from .model import DoubleWellParams, Model, ModelError, from_double_well, make_model, potential_value
from .perturbation import (asymptotic_fit, curvature_oracle, find_avoided_crossing, fit_response_a,
                           local_models, response_model, second_order_c1, single_term_c1)
from .wavefunction import eigenstate_on_grid, ho_function, position_matrix

__version__ = "0.1.0"
