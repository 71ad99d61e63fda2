"""Equilibria of two-player games on edge-colored graphs, built from
one-player solutions, with memory skeletons and desk-scale lower-bound probes."""
from .arena import Arena, Edge, Lasso, OnePlayer, Player, is_one_player, random_arena, validate
from .equilibrium import check_equilibrium, play, play_counter
from .lifting import compute_g, lift_with_skeleton, parity_oracle, payoff_oracle, positional_lift
from .memory import ChromaticStrategy, MemorySkeleton, PositionalStrategy, enumerate_skeletons
from .parity import ParityGame, solve
from .payoffs import MeanPayoff, ParityPayoff, PhiPayoff, PsiPayoff

__version__ = "0.1.0"

__all__ = [
    "Arena", "Edge", "Lasso", "OnePlayer", "Player", "is_one_player", "random_arena", "validate",
    "check_equilibrium", "play", "play_counter",
    "compute_g", "lift_with_skeleton", "parity_oracle", "payoff_oracle", "positional_lift",
    "ChromaticStrategy", "MemorySkeleton", "PositionalStrategy", "enumerate_skeletons",
    "ParityGame", "solve",
    "MeanPayoff", "ParityPayoff", "PhiPayoff", "PsiPayoff",
]
