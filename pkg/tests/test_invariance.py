import pytest
from oracles import countermodel_exists, disagreement_exists

from oinv2.checker import evaluate
from oinv2.corpus import MAX_GADGET
from oinv2.finder import InternalInvariantError
from oinv2.formula import And, FormulaError, Not, parse, render, signature_of, substitute_order
from oinv2.invariance import (
    Counterexample,
    InvariantUpTo,
    NotInvariant,
    build_noninv_formula,
    check_order_invariance,
    fresh_marker,
    has_one_element_model,
    max_gadget,
    reduce_validity,
)
from oinv2.structures import Structure

GADGET = parse(MAX_GADGET)


def test_noninv_formula():
    f = build_noninv_formula(GADGET)
    assert f == And(substitute_order(GADGET, 0), Not(substitute_order(GADGET, 1)))
    assert render(f) == "(exists x. (P(x) & forall y. (y <=0 x))) & !exists x. (P(x) & forall y. (y <=1 x))"
    plain = parse("forall x. P(x)")
    assert build_noninv_formula(plain) == And(plain, Not(plain))
    with pytest.raises(FormulaError):
        build_noninv_formula(parse("forall x. x <=0 x"))


def test_gadget_counterexample():
    v = check_order_invariance(GADGET, 3)
    assert isinstance(v, NotInvariant) and not v.invariant
    c = v.counterexample
    assert c.n == 2 and c.base.orders == {}
    assert len(c.base.unary["P"]) == 1
    p = next(iter(c.base.unary["P"]))
    assert c.ord0[p] == 1 and c.ord1[p] == 0  # last versus first
    assert evaluate(c.under(c.ord0), GADGET) and not evaluate(c.under(c.ord1), GADGET)
    assert not disagreement_exists(GADGET, 1) and disagreement_exists(GADGET, 2)


def test_counterexample_round_trip_enforced():
    base = Structure(2, {"P": {1}})
    with pytest.raises(InternalInvariantError):
        Counterexample(base, (1, 0), (0, 1), GADGET)


def test_order_tautology():
    v = check_order_invariance(parse("forall x. forall y. (x <= y | y <= x)"), 3)
    assert isinstance(v, InvariantUpTo) and v.cap == 3 and not v.complete
    assert "incomplete" in v.describe()


def test_order_free_is_invariant():
    v = check_order_invariance(parse("forall x. exists y. R(x,y)"), 4)
    assert isinstance(v, InvariantUpTo) and v.cap == 4


def test_rejects_indexed_orders():
    with pytest.raises(FormulaError):
        check_order_invariance(parse("forall x. x <=1 x"), 2)


def test_validity_examples():
    assert reduce_validity(parse("forall x. (P(x) | !P(x))"), 2).valid
    v = reduce_validity(parse("forall x. P(x)"), 3)
    assert not v.valid and v.corner_case
    v = reduce_validity(parse("(exists x. P(x)) -> (exists y. P(y))"), 3)
    assert v.valid and not v.complete and not v.corner_case


def test_validity_beyond_corner_case():
    # every one-element structure satisfies it, a two-element one without P does not
    phi = parse("(exists x. forall y. x = y) | exists x. P(x)")
    assert not has_one_element_model(Not(phi))
    v = reduce_validity(phi, 3)
    assert not v.valid and not v.corner_case
    assert countermodel_exists(phi, 2)


def test_validity_rejects_orders():
    with pytest.raises(FormulaError):
        reduce_validity(GADGET, 2)


def test_fresh_marker_hygiene():
    assert fresh_marker(signature_of(parse("P(x)"))) == "_P"
    assert fresh_marker(signature_of(parse("_P(x) & _P0(x)"))) == "_P1"
    assert signature_of(max_gadget("_P")).arities == {"_P": 1}
