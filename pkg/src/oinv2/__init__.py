"""Order-invariance toolkit for two-variable first-order logic."""

from .checker import evaluate, satisfying_pairs
from .cnf import CnfInstance, ground_to_cnf, solve_cnf
from .finder import find_model, find_model_up_to
from .formula import Signature, parse, render, signature_of, substitute_order
from .invariance import build_noninv_formula, check_order_invariance, reduce_validity
from .normal_form import NormalForm, normalize, size_bound
from .shrinker import classify_rare, shrink
from .structures import Structure, one_type_of, restrict, two_type_of, validate

__version__ = "0.1.0"
