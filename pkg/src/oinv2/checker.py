"""Bottom-up model checking of FO2 formulas on finite structures.

Every subformula is evaluated to its truth matrix ``M`` with
``M[a, b]`` true iff the subformula holds under ``x := a, y := b``.
Quantifiers collapse one axis, so a formula costs O(|f| * n^2).
"""

from __future__ import annotations

import numpy as np

from .formula import (
    And,
    Eq,
    Exists,
    Formula,
    FormulaError,
    Iff,
    Implies,
    Leq,
    Not,
    Or,
    Pred,
    free_vars,
    render,
)
from .structures import Structure


class EvaluationError(FormulaError):
    pass


def _axis(var: str) -> int:
    return 0 if var == "x" else 1


def _atom(n: int, vec_or_mat: np.ndarray, args: tuple[str, ...]) -> np.ndarray:
    if len(args) == 1:
        v = vec_or_mat
        return np.broadcast_to(v[:, None] if args[0] == "x" else v[None, :], (n, n))
    m = vec_or_mat
    a, b = args
    if a == b:
        d = np.diagonal(m)
        return np.broadcast_to(d[:, None] if a == "x" else d[None, :], (n, n))
    return m if a == "x" else m.T


def truth_matrix(s: Structure, f: Formula) -> np.ndarray:
    """Boolean ``n x n`` matrix of assignments satisfying ``f``."""
    n = s.n
    if isinstance(f, Pred):
        if len(f.args) == 1:
            if f.name not in s.unary:
                raise EvaluationError(f"unary predicate {f.name} is not interpreted in the structure")
            return _atom(n, s.unary_vectors[f.name], f.args)
        if f.name not in s.binary:
            raise EvaluationError(f"binary predicate {f.name} is not interpreted in the structure")
        return _atom(n, s.binary_matrices[f.name], f.args)
    if isinstance(f, Leq):
        if f.order not in s.orders:
            raise EvaluationError(f"order {f.order} is not interpreted in the structure")
        return _atom(n, s.binary_matrices[f.order], (f.left, f.right))
    if isinstance(f, Eq):
        if f.left == f.right:
            return np.ones((n, n), dtype=bool)
        return np.eye(n, dtype=bool)
    if isinstance(f, Not):
        return ~truth_matrix(s, f.arg)
    if isinstance(f, And):
        return truth_matrix(s, f.left) & truth_matrix(s, f.right)
    if isinstance(f, Or):
        return truth_matrix(s, f.left) | truth_matrix(s, f.right)
    if isinstance(f, Implies):
        return ~truth_matrix(s, f.left) | truth_matrix(s, f.right)
    if isinstance(f, Iff):
        return truth_matrix(s, f.left) == truth_matrix(s, f.right)
    m = truth_matrix(s, f.body)
    ax = _axis(f.var)
    col = m.any(axis=ax, keepdims=True) if isinstance(f, Exists) else m.all(axis=ax, keepdims=True)
    return np.broadcast_to(col, (n, n))


def satisfying_pairs(s: Structure, f: Formula) -> set[tuple[int, int]]:
    """Assignments ``(x, y)`` under which ``f`` holds."""
    rows, cols = np.nonzero(truth_matrix(s, f))
    return set(zip(rows.tolist(), cols.tolist()))


def evaluate(s: Structure, f: Formula) -> bool:
    fv = free_vars(f)
    if fv:
        raise EvaluationError(f"free variables {sorted(fv)} in {render(f)!r}; only sentences can be evaluated")
    return bool(truth_matrix(s, f)[0, 0])

