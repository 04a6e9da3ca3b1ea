"""Hand-built normal forms and large models of them, for exercising the shrinker."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .formula import TRUE, Signature, parse
from .normal_form import NormalForm
from .structures import Structure


def _nf(chi0: str, chi1: str, gammas0, gammas1, preds: dict[str, int]) -> NormalForm:
    chi = (parse(chi0), parse(chi1)) if chi0 or chi1 else (TRUE, TRUE)
    return NormalForm(
        chi,
        (tuple(parse(g) for g in gammas0), tuple(parse(g) for g in gammas1)),
        Signature.of(preds),
    )


def _random_rankings(n: int, rng: np.random.Generator) -> dict[str, tuple[int, ...]]:
    return {o: tuple(int(r) for r in rng.permutation(n)) for o in ("leq0", "leq1")}


def successor_nf() -> NormalForm:
    """Every element has an R-successor; M = 1, two 1-types."""
    return _nf("", "", ["R(x,y)"], [], {"R": 2})


def successor_model(n: int, rng: np.random.Generator) -> Structure:
    targets = rng.integers(0, n, size=n)
    return Structure(n, {}, {"R": {(a, int(b)) for a, b in enumerate(targets)}}, _random_rankings(n, rng))


def predecessor_nf() -> NormalForm:
    """Every element has an R-edge to something not above it in <=0."""
    return _nf("", "", ["R(x,y) & y <=0 x"], [], {"R": 2})


def predecessor_model(n: int, rng: np.random.Generator) -> Structure:
    # <=0 natural; each a points to a-1, the minimum to itself
    edges = {(a, a - 1) for a in range(1, n)} | {(0, 0)}
    orders = {"leq0": tuple(range(n)), "leq1": tuple(int(r) for r in rng.permutation(n))}
    return Structure(n, {}, {"R": edges}, orders)


def two_colour_nf() -> NormalForm:
    """Every element sees both a P- and a non-P element through R; M = 2, four 1-types."""
    return _nf("", "", ["R(x,y) & P(y)", "R(x,y) & !P(y)"], [], {"P": 1, "R": 2})


def two_colour_model(n: int, rng: np.random.Generator) -> Structure:
    colour = rng.random(n) < 0.5
    colour[0], colour[1] = True, False
    ps = np.flatnonzero(colour)
    qs = np.flatnonzero(~colour)
    edges = set()
    for a in range(n):
        edges.add((a, int(rng.choice(ps))))
        edges.add((a, int(rng.choice(qs))))
    # sprinkle self-loops so the R(x,x) bit varies
    for a in rng.choice(n, size=n // 10, replace=False):
        edges.add((int(a), int(a)))
    return Structure(n, {"P": {int(a) for a in ps}}, {"R": edges}, _random_rankings(n, rng))


def two_sided_nf() -> NormalForm:
    """One obligation per half, each tied to its own order, plus an order-free universal part."""
    return _nf(
        "R0(x,y) -> !(P(x) & P(y))",
        "R1(x,y) -> (P(x) -> P(y))",
        ["R0(x,y) & y <=0 x"],
        ["R1(x,y) & x <=1 y"],
        {"P": 1, "R0": 2, "R1": 2},
    )


def two_sided_model(n: int, rng: np.random.Generator) -> Structure:
    rank0 = tuple(range(n))
    order1 = [int(a) for a in rng.permutation(n)]
    rank1 = [0] * n
    for r, a in enumerate(order1):
        rank1[a] = r
    # P alternates along <=0, so an R0 edge to the predecessor never joins two P elements
    P = {a for a in range(n) if a % 2 == 1}
    r0 = {(a, a - 1) for a in range(1, n)} | {(0, 0)}
    # R1 goes to the <=1-successor; P is kept upward closed along <=1 from the last P
    r1 = set()
    for r in range(n - 1):
        a, b = order1[r], order1[r + 1]
        if a in P and b not in P:
            r1.add((a, a))
        else:
            r1.add((a, b))
    r1.add((order1[-1], order1[-1]))
    return Structure(n, {"P": P}, {"R0": r0, "R1": r1}, {"leq0": rank0, "leq1": tuple(rank1)})


@dataclass(frozen=True)
class Family:
    name: str
    nf: Callable[[], NormalForm]
    model: Callable[[int, np.random.Generator], Structure]


FAMILIES = (
    Family("successor", successor_nf, successor_model),
    Family("predecessor", predecessor_nf, predecessor_model),
    Family("two-colour", two_colour_nf, two_colour_model),
    Family("two-sided", two_sided_nf, two_sided_model),
)
