"""Low-adaptivity monotone submodular maximization under matroid constraints."""
from .continuous import AcgState, accelerated_continuous_greedy, swap_round
from .core import AlgoParams, Matroid, OracleError, QueryLedger, SetFunction, ValidationError, batch_eval, batch_independent
from .estimators import (AcceleratedContinuousGreedy, AdaptiveSequencingMaximizer, BruteForceMaximizer,
                         GreedyMaximizer)
from .functions import CoverageFunction, FractionalPoint, ModularFunction, eval_marginal_surrogate, eval_multilinear, exact_F
from .matroids import (ContractedMatroid, GraphicMatroid, HiddenPartitionInstance, IntersectionConstraint,
                       PartitionMatroid, UniformMatroid, make_hidden_partition)
from .maximize import adaptive_sequencing, adaptive_sequencing_pp, brute_force, greedy, lazy_greedy

__version__ = "0.1.0"
