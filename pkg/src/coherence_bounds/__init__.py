"""Coherence quantifiers from the unified (alpha, beta)-relative entropy and
their uncertainty lower bounds under mutually unbiased equiangular tight frames."""
from .bounds import (BoundResult, EnsembleShape, bound_argument, coherence_lower_bound,
                     coincidence_bound, etf_bound, mub_bound, pure_state_bounds, renyi_bound,
                     tsallis_bound)
from .coherence import (Branch, CoherenceParams, average_coherence, average_renyi_coherence,
                        basis_coherence, frame_coherence, member_coherences, renyi_coherence,
                        tsallis_coherence, unified_relative_entropy)
from .frames import (CertificationReport, Frame, MuetfEnsemble, builtin_ensemble,
                     computational_basis, load_frames, outcome_probabilities, prime_mub_set,
                     qubit_mub_triple, qubit_sic, save_frames, simplex_etf, verify_frame,
                     verify_muetf)
from .scalarfn import (beta_flip_chord, beta_flip_map, entropy_floor, gamma_log,
                       index_of_coincidence, tsallis_entropy)
from .spectra import SpectralDecomposition, decompose, matrix_power, quadratic_form, trace_power
from .states import (DensityMatrix, bloch_qubit, from_pure, maximally_mixed, pseudopure,
                     random_state, random_states)

__version__ = "0.1.0"
