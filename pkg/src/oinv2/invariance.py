"""Order-invariance checking and the validity-to-invariance reduction."""

from __future__ import annotations

from dataclasses import dataclass

from .checker import evaluate
from .finder import InternalInvariantError, find_model_up_to
from .formula import (
    And,
    Exists,
    Forall,
    Formula,
    FormulaError,
    Implies,
    Leq,
    Not,
    Pred,
    Signature,
    is_sentence,
    render,
    signature_of,
    substitute_order,
)
from .normal_form import normalize
from .structures import Structure, enumerate_one_types


@dataclass(frozen=True)
class Counterexample:
    """A structure and two orders on which ``phi`` gets different truth values."""

    base: Structure
    ord0: tuple[int, ...]
    ord1: tuple[int, ...]
    phi: Formula

    def __post_init__(self):
        if not evaluate(self.under(self.ord0), self.phi):
            raise InternalInvariantError("counterexample: phi fails under the first order")
        if evaluate(self.under(self.ord1), self.phi):
            raise InternalInvariantError("counterexample: phi holds under the second order")

    @property
    def n(self) -> int:
        return self.base.n

    def under(self, ranking) -> Structure:
        return self.base.with_orders({"leq": ranking})

    def to_dict(self) -> dict:
        return {
            "formula": render(self.phi),
            "true_under": self.under(self.ord0).to_dict(),
            "false_under": self.under(self.ord1).to_dict(),
        }


@dataclass(frozen=True)
class NotInvariant:
    counterexample: Counterexample

    invariant = False
    complete = True

    def describe(self) -> str:
        c = self.counterexample
        return f"not invariant: counterexample of size {c.n}"


@dataclass(frozen=True)
class InvariantUpTo:
    cap: int
    bound: int

    invariant = True
    complete = False

    def describe(self) -> str:
        return (
            f"invariant on all structures of size <= {self.cap} "
            f"(incomplete: a full verdict needs size {self.bound})"
        )


@dataclass(frozen=True)
class Invariant:
    cap: int
    bound: int

    invariant = True
    complete = True

    def describe(self) -> str:
        return f"invariant (complete: cap {self.cap} reaches the bound {self.bound})"


InvarianceVerdict = NotInvariant | InvariantUpTo | Invariant


def _require_plain_order(phi: Formula):
    if not is_sentence(phi):
        raise FormulaError(f"{render(phi)!r} is not a sentence")
    if signature_of(phi).orders - {"leq"}:
        raise FormulaError("formula must use only the plain order <=")


def build_noninv_formula(phi: Formula) -> Formula:
    """``phi[<=/<=0] & !phi[<=/<=1]``: satisfiable iff ``phi`` is not order-invariant."""
    _require_plain_order(phi)
    return And(substitute_order(phi, 0), Not(substitute_order(phi, 1)))


def check_order_invariance(phi: Formula, cap: int, *, jobs: int = 1) -> InvarianceVerdict:
    _require_plain_order(phi)
    nf = normalize(phi)
    result = find_model_up_to(nf, cap, jobs=jobs)
    if result.model is not None:
        m = result.model
        base = m.reduct(signature_of(phi).without_orders())
        base = Structure(base.n, base.unary, base.binary)
        return NotInvariant(Counterexample(base, m.orders["leq0"], m.orders["leq1"], phi))
    if result.complete:
        return Invariant(cap, result.bound)
    return InvariantUpTo(cap, result.bound)


def fresh_marker(sig: Signature) -> str:
    taken = set(sig.arities)
    if "_P" not in taken:
        return "_P"
    k = 0
    while f"_P{k}" in taken:
        k += 1
    return f"_P{k}"


def max_gadget(pred: str) -> Formula:
    """``exists x. (P(x) & forall y. (y <= x))``: the order's maximum carries P."""
    return Exists("x", And(Pred(pred, ("x",)), Forall("y", Leq("y", "x"))))


def has_one_element_model(f: Formula) -> bool:
    """Decide by trying every 1-type as a one-element structure."""
    sig = signature_of(f)
    for t in enumerate_one_types(sig.without_orders()):
        unary = {p: {0} if t.holds(f"{p}(x)") else set() for p in sig.unary}
        binary = {r: {(0, 0)} if t.holds(f"{r}(x,x)") else set() for r in sig.binary}
        if evaluate(Structure(1, unary, binary), f):
            return True
    return False


@dataclass(frozen=True)
class ValidityVerdict:
    valid: bool
    complete: bool
    corner_case: bool
    verdict: InvarianceVerdict | None = None

    def describe(self) -> str:
        if self.corner_case:
            return "not valid: the negation has a one-element model"
        if not self.valid:
            return "not valid: " + self.verdict.describe()
        if self.complete:
            return "valid"
        return f"valid as far as the cap sees ({self.verdict.describe()})"


def reduce_validity(phi: Formula, cap: int, *, jobs: int = 1) -> ValidityVerdict:
    """Decide finite validity of an order-free sentence through an invariance check."""
    if not is_sentence(phi):
        raise FormulaError(f"{render(phi)!r} is not a sentence")
    sig = signature_of(phi)
    if sig.orders:
        raise FormulaError("validity reduction expects a formula without order symbols")
    if has_one_element_model(Not(phi)):
        return ValidityVerdict(False, True, True)
    gadget = max_gadget(fresh_marker(sig))
    verdict = check_order_invariance(Implies(Not(phi), gadget), cap, jobs=jobs)
    return ValidityVerdict(verdict.invariant, verdict.complete, False, verdict)

