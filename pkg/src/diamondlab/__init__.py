"""Thin and Nottingham Lie algebras over F_p: construction, graded quotients, diamond analysis."""
from .construct import loop_nottingham, zassenhaus
from .diamond import analyze, is_nottingham, replay_chain_identities, verify_distance_theorem, verify_main_theorem
from .liecore import GradedLieAlgebra, HomogeneousElement, LeftNormedWord, bracket, eval_word, jacobi_audit, load, save
from .nilquot import graded_quotient, parse_presentation

__all__ = [
    "loop_nottingham", "zassenhaus", "analyze", "is_nottingham", "replay_chain_identities",
    "verify_distance_theorem", "verify_main_theorem", "GradedLieAlgebra", "HomogeneousElement",
    "LeftNormedWord", "bracket", "eval_word", "jacobi_audit", "load", "save", "graded_quotient",
    "parse_presentation",
]
__version__ = "0.1.0"
