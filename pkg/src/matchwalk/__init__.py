"""Down-up walk on fixed-size matchings: simulation, exact chain analytics,
certified multicommodity flows, influence matrices, and gadget experiments."""

from .analysis import (TransitionMatrix, build_transition_matrix, check_ergodicity,
                       dirichlet_form, mixing_time, mixing_time_bound,
                       spectral_gap, spectrum, tv_distance, variance)
from .errors import (CertificationError, MatchwalkError, NoAugmentingPathError,
                     NonErgodicError, ParseError, PathBudgetExceededError,
                     StateSpaceTooLargeError)
from .flow import (CanonicalPath, CertificateReport, EncodingReport, FlowSummary,
                   bad_pair_prefix, build_flow, certify, classify_pair,
                   good_path, good_path_encoding, iter_flow_paths,
                   verify_encoding_bounds)
from .gadget import (GadgetGraph, Pinning, build_gadget, ergodicity_experiment,
                     expected_avoidance, random_pinning, residual_graph,
                     slack_statistics)
from .graph import (Graph, ShortPathCatalog, as_fraction, parse_graph,
                    serialize_graph, short_path_catalog)
from .influence import (InfluenceMatrix, influence_matrix, influence_spectrum,
                        linf_independence_constant, spectral_independence_constant)
from .matching import (DiffDecomposition, Matching, enumerate_matchings,
                       find_short_augmenting_path, matching_number,
                       maximum_matching, symmetric_difference, toggle_path)
from .walk import (WalkConfig, empirical_distribution, make_rng, run,
                   sample_step_frequencies, step, trial_rng)

__version__ = "0.1.0"
