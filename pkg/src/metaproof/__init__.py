"""metaproof: a small generic theorem prover.

Object logics are declared as theories (types, constants, axioms) over a
minimal intuitionistic higher-order meta-logic with implication `==>`,
quantification `!!` and equality `==`.  Backwards proof works by resolution
with lifting, driven by higher-order unification; the kernel is the only
producer of Theorem values.
"""

from .term import TermExpr, TypeExpr, norm, aconv, type_of
from .theory import builtin, extend, Theory
from .syntax import parse_term, print_term, parse_theory, table_for
from .kernel import Theorem
from .tactic import ProofState, initial_state, resolve_tac, assume_tac, finalize
from .session import Session

__all__ = [
    "TermExpr",
    "TypeExpr",
    "norm",
    "aconv",
    "type_of",
    "builtin",
    "extend",
    "Theory",
    "parse_term",
    "print_term",
    "parse_theory",
    "table_for",
    "Theorem",
    "ProofState",
    "initial_state",
    "resolve_tac",
    "assume_tac",
    "finalize",
    "Session",
]
