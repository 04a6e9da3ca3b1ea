"""Finite relational structures with up to three linear orders, and atomic types.

The universe of a structure is always ``{0, ..., n-1}``.  A linear order is
stored as a ranking: a bijection ``rank`` onto ``{0..n-1}`` with
``a <= b`` iff ``rank[a] <= rank[b]``, so linearity holds by construction.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from .formula import ORDER_TOKENS, Signature


class StructureError(ValueError):
    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


@dataclass(frozen=True, eq=False)
class Structure:
    n: int
    unary: Mapping[str, frozenset[int]] = field(default_factory=dict)
    binary: Mapping[str, frozenset[tuple[int, int]]] = field(default_factory=dict)
    orders: Mapping[str, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "unary", {k: frozenset(v) for k, v in sorted(self.unary.items())})
        object.__setattr__(
            self, "binary", {k: frozenset((a, b) for a, b in v) for k, v in sorted(self.binary.items())}
        )
        object.__setattr__(self, "orders", {k: tuple(v) for k, v in sorted(self.orders.items())})

    def __eq__(self, other):
        if not isinstance(other, Structure):
            return NotImplemented
        return (self.n, self.unary, self.binary, self.orders) == (other.n, other.unary, other.binary, other.orders)

    def __hash__(self):
        return hash((self.n, tuple(self.unary.items()), tuple(self.binary.items()), tuple(self.orders.items())))

    def __repr__(self):
        return f"Structure({self.to_json()})"

    @property
    def signature(self) -> Signature:
        preds = [(p, 1) for p in self.unary] + [(r, 2) for r in self.binary]
        return Signature(tuple(preds), frozenset(self.orders))

    @property
    def universe(self) -> range:
        return range(self.n)

    # numpy views, built lazily; callers must not mutate them
    @cached_property
    def unary_vectors(self) -> dict[str, np.ndarray]:
        out = {}
        for p, ext in self.unary.items():
            v = np.zeros(self.n, dtype=bool)
            v[list(ext)] = True
            out[p] = v
        return out

    @cached_property
    def binary_matrices(self) -> dict[str, np.ndarray]:
        out = {}
        for r, ext in self.binary.items():
            m = np.zeros((self.n, self.n), dtype=bool)
            if ext:
                rows, cols = zip(*ext)
                m[list(rows), list(cols)] = True
            out[r] = m
        for o, rank in self.orders.items():
            r = np.asarray(rank)
            out[o] = r[:, None] <= r[None, :]
        return out

    def leq(self, order: str, a: int, b: int) -> bool:
        rank = self.orders[order]
        return rank[a] <= rank[b]

    def ordered(self, order: str) -> list[int]:
        """Elements listed from the order's minimum to its maximum."""
        rank = self.orders[order]
        return sorted(range(self.n), key=rank.__getitem__)

    def with_orders(self, orders: Mapping[str, Iterable[int]]) -> "Structure":
        return Structure(self.n, self.unary, self.binary, orders)

    def reduct(self, sig: Signature) -> "Structure":
        """Keep only the symbols of ``sig`` (orders included)."""
        names = sig.arities
        return Structure(
            self.n,
            {p: v for p, v in self.unary.items() if names.get(p) == 1},
            {r: v for r, v in self.binary.items() if names.get(r) == 2},
            {o: v for o, v in self.orders.items() if o in sig.orders},
        )

    # ---------------------------------------------------------- serialization

    def to_dict(self) -> dict:
        d = {
            "n": self.n,
            "unary": {p: sorted(v) for p, v in self.unary.items()},
            "binary": {r: [list(pair) for pair in sorted(v)] for r, v in self.binary.items()},
        }
        if self.orders:
            d["orders"] = {o: list(rank) for o, rank in self.orders.items()}
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(", ", ": "))

    @classmethod
    def from_dict(cls, d: Mapping) -> "Structure":
        try:
            return cls(
                int(d["n"]),
                {p: frozenset(int(a) for a in v) for p, v in d.get("unary", {}).items()},
                {r: frozenset((int(a), int(b)) for a, b in v) for r, v in d.get("binary", {}).items()},
                {o: tuple(int(a) for a in v) for o, v in d.get("orders", {}).items()},
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise StructureError(f"malformed structure: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "Structure":
        return cls.from_dict(json.loads(text))


def identity_ranking(n: int) -> tuple[int, ...]:
    return tuple(range(n))


def validate(s: Structure, sig: Signature | None = None) -> None:
    """Raise :class:`StructureError` listing every violated invariant."""
    problems = []
    if s.n < 1:
        problems.append(f"universe size {s.n}: structures must be non-empty")
    for p, ext in s.unary.items():
        bad = sorted(a for a in ext if not 0 <= a < s.n)
        if bad:
            problems.append(f"unary {p}: elements {bad} out of range for n={s.n}")
    for r, ext in s.binary.items():
        bad = sorted(pair for pair in ext if not all(0 <= a < s.n for a in pair))
        if bad:
            problems.append(f"binary {r}: pairs {bad} out of range for n={s.n}")
    for o, rank in s.orders.items():
        if o not in ORDER_TOKENS:
            problems.append(f"unknown order {o!r}")
        elif len(rank) != s.n or sorted(rank) != list(range(s.n)):
            problems.append(f"order {o}: ranking {list(rank)} is not a bijection onto 0..{s.n - 1}")
    overlap = set(s.unary) & set(s.binary)
    if overlap:
        problems.append(f"predicates {sorted(overlap)} interpreted as both unary and binary")
    if sig is not None:
        have = s.signature.arities
        want = sig.arities
        for name in sorted(set(want) - set(have)):
            problems.append(f"missing predicate {name}/{want[name]}")
        for name in sorted(set(have) - set(want)):
            problems.append(f"extra predicate {name}/{have[name]}")
        for name in sorted(set(have) & set(want)):
            if have[name] != want[name]:
                problems.append(f"predicate {name} has arity {have[name]}, signature says {want[name]}")
        for o in sorted(sig.orders - set(s.orders)):
            problems.append(f"missing order {o}")
        for o in sorted(set(s.orders) - sig.orders):
            problems.append(f"extra order {o}")
    if problems:
        raise StructureError(problems)


def restrict(s: Structure, keep: Iterable[int]) -> Structure:
    """Induced substructure on ``keep``, relabeled to ``0..|keep|-1`` in index order."""
    keep = sorted(set(keep))
    if not keep:
        raise StructureError("cannot restrict to an empty set")
    if keep[0] < 0 or keep[-1] >= s.n:
        raise StructureError(f"restriction set {keep} not within universe of size {s.n}")
    new = {a: i for i, a in enumerate(keep)}
    unary = {p: {new[a] for a in ext if a in new} for p, ext in s.unary.items()}
    binary = {r: {(new[a], new[b]) for a, b in ext if a in new and b in new} for r, ext in s.binary.items()}
    orders = {}
    for o, rank in s.orders.items():
        by_rank = sorted(keep, key=rank.__getitem__)
        r = [0] * len(keep)
        for pos, a in enumerate(by_rank):
            r[new[a]] = pos
        orders[o] = r
    return Structure(len(keep), unary, binary, orders)


# ------------------------------------------------------------------- types


def one_type_atoms(sig: Signature) -> tuple[str, ...]:
    """Atoms in a 1-type, in canonical bit order.  Order atoms come last."""
    atoms = [f"{p}(x)" for p in sig.unary]
    atoms += [f"{r}(x,x)" for r in sig.binary]
    atoms += [f"{o}(x,x)" for o in sorted(sig.orders)]
    return tuple(atoms)


def two_type_cross_atoms(sig: Signature) -> tuple[str, ...]:
    atoms = []
    for r in sig.binary + sorted(sig.orders):
        atoms += [f"{r}(x,y)", f"{r}(y,x)"]
    return tuple(atoms)


@dataclass(frozen=True)
class OneType:
    atoms: tuple[str, ...]
    bits: int

    def holds(self, atom: str) -> bool:
        return bool(self.bits >> self.atoms.index(atom) & 1)

    def literals(self) -> list[str]:
        return [a if self.bits >> i & 1 else "!" + a for i, a in enumerate(self.atoms)]

    def __str__(self):
        return "{" + ", ".join(self.literals()) + "}"


@dataclass(frozen=True)
class TwoType:
    x: OneType
    y: OneType
    atoms: tuple[str, ...]
    bits: int

    def holds(self, atom: str) -> bool:
        if atom == "x = y":
            return False
        if atom in self.atoms:
            return bool(self.bits >> self.atoms.index(atom) & 1)
        if "y" not in atom:
            return self.x.holds(atom)
        if "x" not in atom:
            return self.y.holds(atom.replace("y", "x"))
        raise KeyError(atom)

    def literals(self) -> list[str]:
        cross = [a if self.bits >> i & 1 else "!" + a for i, a in enumerate(self.atoms)]
        ys = [lit.replace("x", "y") for lit in self.y.literals()]
        return self.x.literals() + ys + cross + ["!x = y"]

    def __str__(self):
        return "{" + ", ".join(self.literals()) + "}"


def enumerate_one_types(sig: Signature) -> list[OneType]:
    """Every 1-type over ``sig``; reflexive order atoms are always positive."""
    atoms = one_type_atoms(sig)
    free = len(sig.unary) + len(sig.binary)
    fixed = sum(1 << i for i in range(free, len(atoms)))
    return [OneType(atoms, bits | fixed) for bits in range(1 << free)]


def count_one_types(sig: Signature) -> int:
    return 2 ** (len(sig.unary) + len(sig.binary))


def one_type_codes(s: Structure) -> tuple[tuple[str, ...], np.ndarray]:
    """Bit codes of the 1-types of all elements at once."""
    sig = s.signature
    atoms = one_type_atoms(sig)
    codes = np.zeros(s.n, dtype=np.int64)
    k = 0
    for p in sig.unary:
        codes |= s.unary_vectors[p].astype(np.int64) << k
        k += 1
    for r in sig.binary:
        codes |= np.diagonal(s.binary_matrices[r]).astype(np.int64) << k
        k += 1
    for _ in sig.orders:
        codes |= 1 << k
        k += 1
    return atoms, codes


def _check_element(s: Structure, d: int):
    if not 0 <= d < s.n:
        raise StructureError(f"element {d} out of range for n={s.n}")


def one_type_of(s: Structure, d: int) -> OneType:
    _check_element(s, d)
    sig = s.signature
    bits, k = 0, 0
    for p in sig.unary:
        bits |= (d in s.unary[p]) << k
        k += 1
    for r in sig.binary:
        bits |= ((d, d) in s.binary[r]) << k
        k += 1
    for _ in sig.orders:
        bits |= 1 << k
        k += 1
    return OneType(one_type_atoms(sig), bits)


def two_type_of(s: Structure, d: int, e: int) -> TwoType:
    _check_element(s, d)
    _check_element(s, e)
    if d == e:
        raise StructureError("2-types require distinct elements")
    sig = s.signature
    bits, k = 0, 0
    for r in sig.binary:
        bits |= ((d, e) in s.binary[r]) << k
        bits |= ((e, d) in s.binary[r]) << (k + 1)
        k += 2
    for o in sorted(sig.orders):
        bits |= s.leq(o, d, e) << k
        bits |= s.leq(o, e, d) << (k + 1)
        k += 2
    return TwoType(one_type_of(s, d), one_type_of(s, e), two_type_cross_atoms(sig), bits)


def all_structures(sig: Signature, n: int, rankings: bool = True):
    """Every structure over ``sig`` with universe size ``n``.

    Orders in ``sig`` range over all ``n!`` rankings when ``rankings`` is true.
    Exponential; meant for tiny ``n``.
    """
    pairs = list(itertools.product(range(n), repeat=2))
    slots = [(p, a) for p in sig.unary for a in range(n)] + [(r, pq) for r in sig.binary for pq in pairs]
    orders = sorted(sig.orders) if rankings else []
    perms = list(itertools.permutations(range(n)))
    for bits in range(1 << len(slots)):
        unary = {p: set() for p in sig.unary}
        binary = {r: set() for r in sig.binary}
        for i, (name, what) in enumerate(slots):
            if bits >> i & 1:
                (unary if name in unary else binary)[name].add(what)
        for combo in itertools.product(perms, repeat=len(orders)):
            yield Structure(n, unary, binary, dict(zip(orders, combo)))
