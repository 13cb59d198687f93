"""Coset states over F_2, orthogonal subspace permutations and the (n,k) coset monogamy game."""

from .exact import QSqrt2
from .gf2 import (
    Subspace,
    coset_rep,
    coset_reps,
    dual,
    enumerate_grassmannian,
    gaussian_binomial,
    intersect_dim,
    intersection_count,
)
from .game import (
    Channel,
    DeterministicStrategy,
    Strategy,
    deterministic_value,
    dualize,
    p_win,
    p_win_extended,
    theorem1_bound,
    unentangled_value,
    winning_rate_envelope,
)
from .perms import PermutationFamily, full_family, orthogonal_family, verify_family

__version__ = "0.1.0"
