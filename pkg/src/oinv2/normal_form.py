"""Scott-style normal form for the non-invariance sentence of an FO2[<=] formula.

For ``phi`` over the plain order ``<=`` we normalize
``phi[<=/<=0] & !phi[<=/<=1]`` half by half.  Each quantified subformula
``Q v. eta`` (innermost first) is named by a fresh unary predicate
``_Sk(u)``, ``u`` being the other variable, and only the implications
its polarity needs are emitted (Plaisted-Greenbaum style):

==========  =========================  ==========================
quantifier  positive: ``_Sk -> Q``     negative: ``Q -> _Sk``
==========  =========================  ==========================
exists      forall-exists              forall-forall
forall      forall-forall              forall-exists
==========  =========================  ==========================

Any model of the input expands to a model of the output by interpreting
``_Sk`` as the subformula's extension; conversely every model of the output
reducts to a model of the input by monotonicity.  The halves share no
fresh predicate and each half mentions only its own order, so the
separation required downstream holds.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import count

from .formula import (
    And,
    Exists,
    Forall,
    Formula,
    FormulaError,
    Iff,
    Implies,
    Not,
    Or,
    Pred,
    Signature,
    conj,
    is_quantifier_free,
    is_sentence,
    render,
    signature_of,
    size,
    substitute_order,
    swap_vars,
    ATOMS,
)
from .structures import count_one_types


class NormalizationError(FormulaError):
    pass


LEMMA_FACTOR = 224


@dataclass(frozen=True)
class NormalForm:
    """``AND_i ( forall x forall y. chi[i]  &  AND_j forall x exists y. gammas[i][j] )``."""

    chi: tuple[Formula, Formula]
    gammas: tuple[tuple[Formula, ...], tuple[Formula, ...]]
    signature: Signature
    source_size: int = 0
    auxiliary: frozenset[str] = frozenset()  # predicates introduced by normalization

    def __post_init__(self):
        for i in (0, 1):
            body = [self.chi[i], *self.gammas[i]]
            for g in body:
                if not is_quantifier_free(g):
                    raise NormalizationError(f"{render(g)!r} is not quantifier-free")
                if f"leq{1 - i}" in signature_of(g).orders or "leq" in signature_of(g).orders:
                    raise NormalizationError(f"half {i} mentions a foreign order: {render(g)!r}")
        sig = Signature(self.signature.preds, self.signature.orders | {"leq0", "leq1"})
        object.__setattr__(self, "signature", sig)

    @property
    def m(self) -> tuple[int, int]:
        return len(self.gammas[0]), len(self.gammas[1])

    @property
    def M(self) -> int:
        return max(self.m)

    def conjuncts(self) -> list[Formula]:
        out = []
        for i in (0, 1):
            out.append(Forall("x", Forall("y", self.chi[i])))
            out += [Forall("x", Exists("y", g)) for g in self.gammas[i]]
        return out

    def sentence(self) -> Formula:
        return conj(self.conjuncts())

    def render(self) -> str:
        lines = []
        for i in (0, 1):
            lines.append(f"chi{i}: {render(self.chi[i])}")
            for j, g in enumerate(self.gammas[i], 1):
                lines.append(f"gamma{i}.{j}: {render(g)}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "chi": [render(c) for c in self.chi],
            "gamma": [[render(g) for g in gs] for gs in self.gammas],
            "m": list(self.m),
            "auxiliary": sorted(self.auxiliary),
            "signature": {
                "predicates": dict(self.signature.preds),
                "orders": sorted(self.signature.orders),
            },
        }


    @classmethod
    def from_dict(cls, d) -> "NormalForm":
        from .formula import parse

        try:
            chi = tuple(parse(c) for c in d["chi"])
            gammas = tuple(tuple(parse(g) for g in gs) for gs in d["gamma"])
        except (KeyError, TypeError) as exc:
            raise NormalizationError(f"malformed normal form: {exc}") from exc
        if len(chi) != 2 or len(gammas) != 2:
            raise NormalizationError("a normal form has exactly two halves")
        sig = Signature()
        for part in chi + gammas[0] + gammas[1]:
            sig = sig | signature_of(part)
        declared = d.get("signature", {}).get("predicates", {})
        sig = sig | Signature.of(declared)
        return cls(chi, gammas, sig, auxiliary=frozenset(d.get("auxiliary", ())))


def _fresh_names(taken: set[str]):
    for k in count():
        name = f"_S{k}"
        if name not in taken:
            yield name


def _scott(sentence: Formula, fresh) -> tuple[list[Formula], list[Formula]]:
    """Return (forall-forall bodies, forall-exists bodies) for one half."""
    chis: list[Formula] = []
    gammas: list[Formula] = []

    def visit(f: Formula, pol: int) -> Formula:
        if isinstance(f, ATOMS):
            return f
        if isinstance(f, Not):
            return Not(visit(f.arg, -pol))
        if isinstance(f, (And, Or)):
            return type(f)(visit(f.left, pol), visit(f.right, pol))
        if isinstance(f, Implies):
            return Implies(visit(f.left, -pol), visit(f.right, pol))
        if isinstance(f, Iff):
            return Iff(visit(f.left, 0), visit(f.right, 0))
        body = visit(f.body, pol)
        # bring into the shape F(x) vs Q y. eta(x, y)
        eta = body if f.var == "y" else swap_vars(body)
        name = next(fresh)
        named = Pred(name, ("x",))
        if isinstance(f, Exists):
            if pol >= 0:
                gammas.append(Or(Not(named), eta))
            if pol <= 0:
                chis.append(Or(Not(eta), named))
        else:
            if pol >= 0:
                chis.append(Or(Not(named), eta))
            if pol <= 0:
                gammas.append(Or(Not(eta), named))
        return Pred(name, ("y" if f.var == "x" else "x",))

    top = visit(sentence, 1)
    return [top, *chis], gammas


def normalize(phi: Formula) -> NormalForm:
    """Normal form of ``phi[<=/<=0] & !phi[<=/<=1]``."""
    if not is_sentence(phi):
        raise NormalizationError(f"{render(phi)!r} is not a sentence")
    sig = signature_of(phi)
    if sig.orders - {"leq"}:
        raise NormalizationError("input must use only the plain order <=, not <=0 or <=1")
    fresh = _fresh_names({name for name, _ in sig.preds})
    halves = [substitute_order(phi, 0), Not(substitute_order(phi, 1))]
    chi, gammas = [], []
    for half in halves:
        c, g = _scott(half, fresh)
        chi.append(conj(c))
        gammas.append(tuple(g))
    ext = sig.without_orders()
    for part in chi + [g for gs in gammas for g in gs]:
        ext = ext | signature_of(part)
    aux = frozenset(ext.arities) - frozenset(sig.arities)
    return NormalForm((chi[0], chi[1]), (gammas[0], gammas[1]), ext, size(phi), aux)


def lemma_bound(M: int, alpha: int) -> int:
    return LEMMA_FACTOR * M**3 * alpha


def size_bound(nf: NormalForm) -> int:
    """224 * M^3 * |alpha| with M floored at 1 and alpha the number of 1-types."""
    return lemma_bound(max(nf.M, 1), count_one_types(nf.signature))


def coarse_bound(formula_size: int) -> int:
    """224 * |phi|^3 * 2^|phi|, with |phi| counted in AST nodes."""
    return LEMMA_FACTOR * formula_size**3 * 2**formula_size
