"""Shrinking a large model of a normal form below 224 * M^3 * |alpha| elements.

The construction keeps every element of a rare 1-type (at most 32M
realisations) together with extremal realisations of the other types,
closes that set twice under witnesses, takes the induced substructure and
finally repairs the missing witnesses of the outermost layer by copying
2-types onto extremal elements of the right 1-type.  The output is always
re-checked; a failed check is reported, never hidden.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .checker import evaluate, truth_matrix
from .finder import InternalInvariantError
from .normal_form import NormalForm, lemma_bound
from .structures import (
    OneType,
    Structure,
    count_one_types,
    enumerate_one_types,
    one_type_codes,
    restrict,
    validate,
)

# enumerate all 1-types in classify_rare only below this many
_ENUMERATION_LIMIT = 1 << 16


class ShrinkError(ValueError):
    def __init__(self, message: str, report: "ShrinkReport | None" = None):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class Rewiring:
    element: int
    old_witness: int
    new_witness: int
    conjunct: tuple[int, int]  # (half i, 1-based j)


@dataclass
class ShrinkReport:
    input_size: int
    output: Structure
    M: int
    alpha: int
    bound: int
    shrunk: bool
    W: tuple[frozenset[int], ...] = (frozenset(),) * 4
    pools: dict[tuple[int, int], list[int]] = field(default_factory=dict)
    rewired: list[Rewiring] = field(default_factory=list)
    kept: list[int] = field(default_factory=list)
    verified: bool = False

    @property
    def output_size(self) -> int:
        return self.output.n

    def to_dict(self) -> dict:
        d = self.output.to_dict()
        d["report"] = {
            "input_size": self.input_size,
            "output_size": self.output_size,
            "M": self.M,
            "alpha": self.alpha,
            "bound": self.bound,
            "shrunk": self.shrunk,
            "W": [sorted(w) for w in self.W],
            "kept": self.kept,
            "pools": [
                {"type": code, "k": k, "elements": elems} for (code, k), elems in sorted(self.pools.items())
            ],
            "rewired": [
                {"element": r.element, "old_witness": r.old_witness, "new_witness": r.new_witness,
                 "conjunct": list(r.conjunct)}
                for r in self.rewired
            ],
            "verified": self.verified,
        }
        return d


def _check_model(s: Structure, nf: NormalForm):
    validate(s, nf.signature)
    if not evaluate(s, nf.sentence()):
        raise ShrinkError("input structure is not a model of the normal form")


def classify_rare(s: Structure, nf: NormalForm) -> dict[OneType, bool]:
    """1-type -> True if rare (at most 32M realisations in ``s``).

    Unrealised types are included when the signature has at most 2^16 types.
    """
    _check_model(s, nf)
    M = max(nf.M, 1)
    atoms, codes = one_type_codes(s)
    values, counts = np.unique(codes, return_counts=True)
    realised = {int(v): int(c) for v, c in zip(values, counts)}
    if count_one_types(s.signature) <= _ENUMERATION_LIMIT:
        types = enumerate_one_types(s.signature)
    else:
        types = [OneType(atoms, code) for code in sorted(realised)]
    return {t: realised.get(t.bits, 0) <= 32 * M for t in types}


def _extremes(elems: list[int], rank, count: int) -> tuple[list[int], list[int]]:
    ordered = sorted(elems, key=rank.__getitem__)
    return ordered[:count], ordered[::-1][:count]


def _witness_closure(base: set[int], witness: list[np.ndarray], n: int) -> set[int]:
    """Greedy witness completion: smallest-index witness for each missing obligation."""
    inside = np.zeros(n, dtype=bool)
    inside[list(base)] = True
    added = set()
    for d in sorted(base):
        for w in witness:
            row = w[d]
            if not (row & inside).any():
                e = int(np.argmax(row))
                inside[e] = True
                added.add(e)
    return added


def shrink(s: Structure, nf: NormalForm, *, force: bool = False, strict: bool = True) -> ShrinkReport:
    """Shrink a model of ``nf``.

    Models already within the bound come back unchanged unless ``force`` is
    set, which runs the construction anyway.  With ``strict`` a failed final
    check raises :class:`ShrinkError` carrying the report.
    """
    _check_model(s, nf)
    M = max(nf.M, 1)
    alpha = count_one_types(nf.signature)
    bound = lemma_bound(M, alpha)
    n = s.n
    if n <= bound and not force:
        return ShrinkReport(n, s, M, alpha, bound, shrunk=False, kept=list(range(n)), verified=True)

    _, codes = one_type_codes(s)
    rank = {0: s.orders["leq0"], 1: s.orders["leq1"]}
    by_type: dict[int, list[int]] = {}
    for d, c in enumerate(codes.tolist()):
        by_type.setdefault(c, []).append(d)
    rare = {c for c, elems in by_type.items() if len(elems) <= 32 * M}

    W0: set[int] = set()
    S: set[int] = set()
    for c, elems in by_type.items():
        if c in rare:
            W0.update(elems)
            S.update(elems)
            continue
        for i in (0, 1):
            lo, hi = _extremes(elems, rank[i], 8 * M)
            S.update(lo)
            S.update(hi)
            lo, hi = _extremes(elems, rank[i], M)
            W0.update(lo)
            W0.update(hi)
    W1 = S - W0

    conjuncts = [(i, j) for i in (0, 1) for j in range(1, len(nf.gammas[i]) + 1)]
    witness = [truth_matrix(s, nf.gammas[i][j - 1]) for i, j in conjuncts]
    W2 = _witness_closure(W0 | W1, witness, n)
    W3 = _witness_closure(W0 | W1 | W2, witness, n)
    kept = sorted(W0 | W1 | W2 | W3)
    B = restrict(s, kept)
    new_index = {a: i for i, a in enumerate(kept)}

    pools: dict[tuple[int, int], list[int]] = {}
    for c, elems in by_type.items():
        if c in rare:
            continue
        avail = [d for d in elems if d in W1]
        for k, (i, from_max) in enumerate([(0, False), (0, True), (1, False), (1, True)]):
            ordered = sorted(avail, key=rank[i].__getitem__, reverse=from_max)
            pool = ordered[:M]
            if len(pool) < M:
                raise InternalInvariantError(f"pool V[{c}]^{k} has {len(pool)} < {M} elements")
            pools[(c, k)] = pool
            taken = set(pool)
            avail = [d for d in avail if d not in taken]

    binary = {r: set(ext) for r, ext in B.binary.items()}
    kept_mask = np.zeros(n, dtype=bool)
    kept_mask[kept] = True
    rewired: list[Rewiring] = []
    for d in sorted(W3):
        for (i, j), w in zip(conjuncts, witness):
            if (w[d] & kept_mask).any():
                continue
            e = int(np.argmax(w[d]))
            c = int(codes[e])
            if c in rare:
                raise InternalInvariantError(f"witness {e} of element {d} has a rare type but was dropped")
            k = 0 if rank[i][e] <= rank[i][d] else 1
            pool = pools[(c, 2 * i + k)]
            if j > len(pool):
                raise InternalInvariantError(f"conjunct index {j} exceeds pool size {len(pool)}")
            ej = pool[j - 1]
            nd, nej = new_index[d], new_index[ej]
            for r, ext in binary.items():
                src = s.binary[r]
                for (a, b), (na, nb) in (((d, e), (nd, nej)), ((e, d), (nej, nd))):
                    if (a, b) in src:
                        ext.add((na, nb))
                    else:
                        ext.discard((na, nb))
            rewired.append(Rewiring(d, e, ej, (i, j)))

    out = Structure(B.n, B.unary, binary, B.orders)
    report = ShrinkReport(
        n, out, M, alpha, bound, shrunk=True,
        W=(frozenset(W0), frozenset(W1), frozenset(W2), frozenset(W3)),
        pools=pools, rewired=rewired, kept=kept,
    )
    report.verified = evaluate(out, nf.sentence())
    if strict and not report.verified:
        raise ShrinkError("shrunk structure fails the normal form", report)
    return report
