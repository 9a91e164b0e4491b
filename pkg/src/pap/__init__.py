"""Permutations avoiding patterns: the PAP game, the sets B_k, and the
finite checks around them."""

from .avoidance import AvoiderSet, count_avoiders, enumerate_avoiders, is_legal, threshold
from .catalog import build_bk, layered, staircase, witness
from .game import (
    GrundyCache,
    Position,
    Solver,
    follower_profile,
    grundy,
    mex,
    optimal_play_distribution,
    reverse_strategy_check,
    sg_table,
    winning_replies,
)
from .inflation import InflationTriple, inflate, stable_shadow
from .perm import PermError, contains, display, parse, parse_list, shadow

__version__ = "0.1.0"
