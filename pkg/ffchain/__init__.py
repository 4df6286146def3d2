from .errors import FFChainError, NotIrreducibleError, ZeroInverseError, DuplicateBasisError, GuardExceededError
from .polynomial import Poly, IrreduciblePoly, add, mul_mod, inv, inv_oracle, parse_poly, format_poly
from .irreducible import is_irreducible, make_irreducible, enumerate_irreducibles, count_irreducibles
from .chain_engine import BasisSchedule, k_chain, find_cycle, partition, reverse_consistency_check
from .chain_engine import find_closed_loop, enumerate_closed_loops
from .permutation import Permutation, build_permutation
from .graph_export import build_matching, build_union, loop_graph, export_dot, graph_to_json
from .experiment_config import ExperimentConfig
from .base_experiment import BaseExperiment
from .pair_survey import PairRecord, PairSurvey, run_pair_survey, spanning_census
from .loop_survey import LoopHistogram, LoopSurvey, run_loop_survey
from .utils import build_basis, build_schedule, build_config, build_experiment, run_experiment

__all__ = ["FFChainError", "NotIrreducibleError", "ZeroInverseError", "DuplicateBasisError", "GuardExceededError",
           "Poly", "IrreduciblePoly", "add", "mul_mod", "inv", "inv_oracle", "parse_poly", "format_poly",
           "is_irreducible", "make_irreducible", "enumerate_irreducibles", "count_irreducibles",
           "BasisSchedule", "k_chain", "find_cycle", "partition", "reverse_consistency_check",
           "find_closed_loop", "enumerate_closed_loops", "Permutation", "build_permutation",
           "build_matching", "build_union", "loop_graph", "export_dot", "graph_to_json",
           "ExperimentConfig", "BaseExperiment", "PairRecord", "PairSurvey", "run_pair_survey", "spanning_census",
           "LoopHistogram", "LoopSurvey", "run_loop_survey",
           "build_basis", "build_schedule", "build_config", "build_experiment", "run_experiment"]
__version__ = "0.1.0"
