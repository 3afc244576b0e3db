"""Random binary trees, fringe subtrees and minimal DAG compression."""

from ._backend import available as available_backends, current as current_backend, set_backend
from .constants import (REFERENCE, ConstantsReport, compute_report, derived_constants,
                        estimate_b, extrapolate_b, mu, nu, p_iso, reference_report)
from .dag import (ClassFilter, FringeProfile, MinimalDag, all_trees, dag_sizes, empty_class,
                  fringe_profile, large_automorphism_group, low_bst_probability, minimal_dag,
                  unordered_minimal_dag)
from .exact import (brute_force_expectation, catalan, enumerate_trees,
                    expected_identical_pairs_uniform, expected_occurrences_uniform,
                    expected_z_bst, variance_occurrences_uniform, wedderburn_etherington)
from .experiments import (CltReport, ConcentrationReport, ExperimentConfig, ExperimentRecord,
                          clt_sample, concentration_check, export, run_count_experiment)
from .models import ModelKind, make_rng, pbst_neg_log2, sample, sample_bst, sample_uniform
from .textio import TreeParseError, format_tree, parse_tree
from .tree import (CanonTable, Tree, canonical_code, complete_tree, left_comb, leaf_count,
                   sym_count, tree_stats)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
