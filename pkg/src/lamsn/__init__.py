"""Lambda-calculus lab: beta plus the delta/gamma/assoc permutation rules,
strong normalization by reduction-graph exploration, and intersection-type
inference for beta-SN terms."""

from .terms import (
    Abs,
    App,
    Var,
    Term,
    alpha_eq,
    free_vars,
    nb_occurrences,
    parse_term,
    plug,
    print_term,
    size,
    substitute,
)
from .reduction import ALL, BETA, PERM, Redex, Rule, contract, find_redexes, head_parts, one_step_reducts
from .normalization import SN, Exhausted, NotSN, decide_sn, eta, eta_sigma, explore, size_sigma
from .typesys import check_derivation, find_derivation, is_normal, parse_type, print_type, restrict_type
from .inference import NotBetaSN, infer, induction_measure, is_fair, substitute_tracking

__version__ = "0.1.0"
