"""Self-dual [72,36,12] codes from group matrix ring constructions, and searches for new ones."""

from .analysis import (
    CodeReport,
    Family,
    analyze,
    classify_doubly_even,
    count_low_weights,
    extract_params,
    extremal_bound,
    is_self_dual,
    min_distance,
)
from .catalog import HitRecord, KnownParameterSet, append_hit, is_new, load_hits, load_paper_tables
from .constructions import REGISTRY, Construction, build_blocks, generator, get_construction, sigma3_cayley, tau3
from .gf2 import BitMatrix, BitVector, enumerate_combinations, gf2_matmul, gf2_rank_inverse, systematic_form
from .groups import GroupSpec, get_group
from .search import FitnessResult, GaConfig, RunLog, VoaConfig, compare, evaluate_fitness, ga_run, voa_run

__version__ = "0.1.0"
