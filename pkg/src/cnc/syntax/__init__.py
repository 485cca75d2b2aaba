"""Abstract syntax, concrete grammar and structural measures."""

from .formulas import (ATOMS, UNITS, CAtom, CImp, CTensor, CUnit, F, Formula, G,
                       LAtom, LImp, LTensor, LUnit, RImp, Sort, SortError, atoms,
                       depth, rank, subformulas)
from .parser import (ParseError, parse_context, parse_formula, parse_pattern,
                     parse_proof, parse_sequent, parse_term, tokenize)
from .printer import (print_context, print_formula, print_pattern, print_proof,
                      print_sequent, print_term)
from .sequents import (CUT_RULES, RULE_ARITY, RULE_SIDE, RULES, Context,
                       ProofStructureError, ProofTree, Sequent, default_names)
from .terms import (GI, App, Derelict, Ex, FI, Lam, Let, NameSupply, PF, PG,
                    PPair, PTriv, PVar, Pair, Pattern, Term, Triv, Var, alpha_eq,
                    free_occurrences, free_vars, pattern_vars, subst)

__all__ = [name for name in dir() if not name.startswith("_")]
