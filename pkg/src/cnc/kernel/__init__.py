"""Proof checking: sequent-calculus trees and natural-deduction typings."""

from .nd import (ND_RULES, NDDerivation, NDTypeError, check_nd, infer_nd,
                 infer_splits, pattern_bindings, validate_nd)
from .sc import (PRINCIPAL, CheckReport, Match, RuleMismatch, check_sc,
                 is_cut_free, match_node, match_rule, matches)

__all__ = [name for name in dir() if not name.startswith("_")]
