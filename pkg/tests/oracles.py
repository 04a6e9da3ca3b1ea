"""Reference implementations written independently of the package internals.

``naive_eval`` walks the formula with an explicit variable assignment.
``batch_truth`` evaluates one sentence on every structure of a given size
and signature at once (a tensor indexed by structure, x, y), which makes the
definitional brute force over all structures and all rankings affordable.
"""

from __future__ import annotations

import itertools
import random

import numpy as np

from oinv2.formula import (
    And,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Leq,
    Not,
    Or,
    Pred,
)
from oinv2.structures import Structure


# ------------------------------------------------------------ naive evaluator


def naive_eval(s: Structure, f: Formula, env: dict[str, int] | None = None) -> bool:
    env = env or {}
    if isinstance(f, Pred):
        args = tuple(env[v] for v in f.args)
        if len(args) == 1:
            return args[0] in s.unary[f.name]
        return args in s.binary[f.name]
    if isinstance(f, Eq):
        return env[f.left] == env[f.right]
    if isinstance(f, Leq):
        rank = s.orders[f.order]
        return rank[env[f.left]] <= rank[env[f.right]]
    if isinstance(f, Not):
        return not naive_eval(s, f.arg, env)
    if isinstance(f, And):
        return naive_eval(s, f.left, env) and naive_eval(s, f.right, env)
    if isinstance(f, Or):
        return naive_eval(s, f.left, env) or naive_eval(s, f.right, env)
    if isinstance(f, Implies):
        return (not naive_eval(s, f.left, env)) or naive_eval(s, f.right, env)
    if isinstance(f, Iff):
        return naive_eval(s, f.left, env) == naive_eval(s, f.right, env)
    if isinstance(f, Forall):
        return all(naive_eval(s, f.body, {**env, f.var: a}) for a in range(s.n))
    if isinstance(f, Exists):
        return any(naive_eval(s, f.body, {**env, f.var: a}) for a in range(s.n))
    raise TypeError(f)


def naive_pairs(s: Structure, f: Formula) -> set[tuple[int, int]]:
    return {(a, b) for a in range(s.n) for b in range(s.n) if naive_eval(s, f, {"x": a, "y": b})}


# ------------------------------------------------------- batched brute force


class Batch:
    """All structures of size ``n`` over the given unary and binary names."""

    def __init__(self, unary: list[str], binary: list[str], n: int):
        self.n = n
        slots = len(unary) * n + len(binary) * n * n
        codes = np.arange(1 << slots, dtype=np.int64)
        bits = ((codes[:, None] >> np.arange(slots)) & 1).astype(bool)
        self.size = len(codes)
        self.unary, self.binary = {}, {}
        k = 0
        for p in unary:
            self.unary[p] = bits[:, k : k + n]
            k += n
        for r in binary:
            self.binary[r] = bits[:, k : k + n * n].reshape(-1, n, n)
            k += n * n

    def structure(self, index: int, orders=None) -> Structure:
        return Structure(
            self.n,
            {p: set(np.flatnonzero(v[index]).tolist()) for p, v in self.unary.items()},
            {r: {(int(a), int(b)) for a, b in zip(*np.nonzero(m[index]))} for r, m in self.binary.items()},
            orders or {},
        )


def batch_truth(batch: Batch, f: Formula, orders: dict[str, tuple[int, ...]]) -> np.ndarray:
    """Boolean vector: does each structure of ``batch`` (with ``orders``) satisfy sentence ``f``."""
    n = batch.n
    shape = (batch.size, n, n)
    leq = {o: np.asarray(r)[:, None] <= np.asarray(r)[None, :] for o, r in orders.items()}

    def binary_view(m, u, v):
        # m indexed [b, first, second]; return [b, x, y]
        if (u, v) == ("x", "y"):
            return m
        if (u, v) == ("y", "x"):
            return np.swapaxes(m, 1, 2)
        diag = np.diagonal(m, axis1=1, axis2=2)
        return diag[:, :, None] if u == "x" else diag[:, None, :]

    def go(g):
        if isinstance(g, Pred):
            if len(g.args) == 1:
                v = batch.unary[g.name]
                return np.broadcast_to(v[:, :, None] if g.args[0] == "x" else v[:, None, :], shape)
            return np.broadcast_to(binary_view(batch.binary[g.name], *g.args), shape)
        if isinstance(g, Eq):
            m = np.ones((n, n), bool) if g.left == g.right else np.eye(n, dtype=bool)
            return np.broadcast_to(m, shape)
        if isinstance(g, Leq):
            m = leq[g.order][None]
            return np.broadcast_to(binary_view(m, g.left, g.right)[0], shape)
        if isinstance(g, Not):
            return ~go(g.arg)
        if isinstance(g, And):
            return go(g.left) & go(g.right)
        if isinstance(g, Or):
            return go(g.left) | go(g.right)
        if isinstance(g, Implies):
            return ~go(g.left) | go(g.right)
        if isinstance(g, Iff):
            return go(g.left) == go(g.right)
        axis = 1 if g.var == "x" else 2
        body = go(g.body)
        red = body.all(axis=axis, keepdims=True) if isinstance(g, Forall) else body.any(axis=axis, keepdims=True)
        return np.broadcast_to(red, shape)

    return go(f)[:, 0, 0].copy()


def _names(f: Formula) -> tuple[list[str], list[str]]:
    from oinv2.formula import signature_of

    sig = signature_of(f)
    return list(sig.unary), list(sig.binary)


def all_rankings(n: int) -> list[tuple[int, ...]]:
    return list(itertools.permutations(range(n)))


def disagreement_exists(phi: Formula, n: int) -> bool:
    """Literal definition: some structure of size n and two rankings of <= give phi different values."""
    batch = Batch(*_names(phi), n)
    table = np.stack([batch_truth(batch, phi, {"leq": r}) for r in all_rankings(n)])
    return bool((table.any(axis=0) & ~table.all(axis=0)).any())


def invariant_up_to(phi: Formula, cap: int) -> bool:
    return not any(disagreement_exists(phi, n) for n in range(1, cap + 1))


def countermodel_exists(phi: Formula, n: int) -> bool:
    """Some order-free structure of size n falsifies phi."""
    batch = Batch(*_names(phi), n)
    return not bool(batch_truth(batch, phi, {}).all())


# ------------------------------------------------------------ random objects


def random_formula(rng: random.Random, depth: int, free: tuple[str, ...] = (),
                   unary=("P", "Q"), binary=("R",), orders=("leq0", "leq1")) -> Formula:
    """Random formula whose free variables lie in ``free``; ``free=()`` gives a sentence."""
    if depth == 0 or (free and rng.random() < 0.25):
        if not free:
            v = rng.choice("xy")
            return Exists(v, random_formula(rng, 0, (v,), unary, binary, orders))
        kind = rng.randrange(4)
        u, v = rng.choice(free), rng.choice(free)
        if kind == 0:
            return Pred(rng.choice(unary), (u,))
        if kind == 1 and binary:
            return Pred(rng.choice(binary), (u, v))
        if kind == 2 and orders:
            return Leq(u, v, rng.choice(orders))
        return Eq(u, v)
    k = rng.randrange(7)
    if k == 0:
        return Not(random_formula(rng, depth - 1, free, unary, binary, orders))
    if k <= 4:
        cls = (And, Or, Implies, Iff)[k - 1]
        return cls(
            random_formula(rng, depth - 1, free, unary, binary, orders),
            random_formula(rng, depth - 1, free, unary, binary, orders),
        )
    v = rng.choice("xy")
    q = Forall if k == 5 else Exists
    return q(v, random_formula(rng, depth - 1, tuple(sorted(set(free) | {v})), unary, binary, orders))


def random_structure(rng: random.Random, n: int, unary=("P", "Q"), binary=("R",),
                     orders=("leq0", "leq1")) -> Structure:
    def ranking():
        r = list(range(n))
        rng.shuffle(r)
        return tuple(r)

    return Structure(
        n,
        {p: {a for a in range(n) if rng.random() < 0.5} for p in unary},
        {r: {(a, b) for a in range(n) for b in range(n) if rng.random() < 0.4} for r in binary},
        {o: ranking() for o in orders},
    )


def relabel(s: Structure, perm: list[int]) -> Structure:
    """Image of ``s`` under the bijection a -> perm[a]."""
    inv = [0] * s.n
    for a, b in enumerate(perm):
        inv[b] = a
    return Structure(
        s.n,
        {p: {perm[a] for a in v} for p, v in s.unary.items()},
        {r: {(perm[a], perm[b]) for a, b in v} for r, v in s.binary.items()},
        {o: tuple(rank[inv[b]] for b in range(s.n)) for o, rank in s.orders.items()},
    )
