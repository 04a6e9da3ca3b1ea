import json
import random

import pytest
from oracles import random_structure

from oinv2.checker import evaluate
from oinv2.formula import Signature, parse
from oinv2.structures import (
    Structure,
    StructureError,
    count_one_types,
    enumerate_one_types,
    one_type_of,
    restrict,
    two_type_of,
    validate,
)


def test_validate_ok():
    validate(Structure(1, {"P": {0}}), Signature.of({"P": 1}))


def test_validate_bad_ranking():
    with pytest.raises(StructureError, match="not a bijection"):
        validate(Structure(2, orders={"leq0": (0, 0)}))


def test_validate_out_of_range():
    with pytest.raises(StructureError, match="out of range"):
        validate(Structure(2, binary={"R": {(0, 5)}}))


def test_validate_reports_each_problem():
    s = Structure(2, {"Q": {3}}, orders={"leq1": (1, 1)})
    with pytest.raises(StructureError) as err:
        validate(s, Signature.of({"P": 1}, {"leq0"}))
    text = " | ".join(err.value.problems)
    for needle in ("out of range", "not a bijection", "missing predicate P", "extra predicate Q",
                   "missing order leq0", "extra order leq1"):
        assert needle in text


def test_json_round_trip_and_format():
    s = Structure(2, {"P": {0}}, {"R": {(0, 1)}}, {"leq1": (1, 0), "leq0": (0, 1)})
    text = s.to_json()
    assert text == '{"n": 2, "unary": {"P": [0]}, "binary": {"R": [[0, 1]]}, "orders": {"leq0": [0, 1], "leq1": [1, 0]}}'
    assert Structure.from_json(text) == s
    assert "orders" not in json.loads(Structure(1).to_json())


def test_one_type_examples():
    s = Structure(2, {"P": {0}})
    assert one_type_of(s, 0).literals() == ["P(x)"]
    assert one_type_of(s, 1).literals() == ["!P(x)"]
    t = one_type_of(s.with_orders({"leq0": (1, 0)}), 1)
    assert t.holds("leq0(x,x)")


def test_one_type_out_of_range():
    with pytest.raises(StructureError):
        one_type_of(Structure(1), 3)


def test_two_type_examples():
    s = Structure(2, orders={"leq0": (0, 1)})
    t = two_type_of(s, 0, 1)
    assert t.holds("leq0(x,y)") and not t.holds("leq0(y,x)")
    assert not t.holds("x = y")
    sym = Structure(2, binary={"R": {(0, 1), (1, 0)}})
    t = two_type_of(sym, 0, 1)
    assert t.holds("R(x,y)") and t.holds("R(y,x)")
    with pytest.raises(StructureError, match="2-types require distinct elements"):
        two_type_of(s, 0, 0)


def test_two_type_consistency():
    rng = random.Random(3)
    for _ in range(30):
        s = random_structure(rng, 4)
        for d in range(4):
            for e in range(4):
                if d == e:
                    continue
                t, u = two_type_of(s, d, e), two_type_of(s, e, d)
                assert t.x == one_type_of(s, d) and t.y == one_type_of(s, e)
                assert u.x == t.y and u.y == t.x
                for atom in t.atoms:
                    swapped = atom.replace("x", "#").replace("y", "x").replace("#", "y")
                    assert t.holds(atom) == u.holds(swapped)


def test_restrict_examples():
    s = Structure(3, {"P": {0, 2}}, {"R": {(0, 2), (1, 2)}}, {"leq0": (2, 0, 1)})
    assert restrict(s, range(3)) == s
    r = restrict(s, {0, 2})
    assert r.orders["leq0"] == (1, 0)
    assert r.unary["P"] == {0, 1} and r.binary["R"] == {(0, 1)}
    # order relations preserved pairwise
    for a, b in [(0, 2), (2, 0)]:
        na, nb = {0: 0, 2: 1}[a], {0: 0, 2: 1}[b]
        assert s.leq("leq0", a, b) == r.leq("leq0", na, nb)
    with pytest.raises(StructureError):
        restrict(s, [])


def test_restrict_commutes_with_two_types():
    rng = random.Random(5)
    for _ in range(20):
        s = random_structure(rng, 5)
        keep = sorted(rng.sample(range(5), 3))
        r = restrict(s, keep)
        for i, d in enumerate(keep):
            for j, e in enumerate(keep):
                if i != j:
                    assert two_type_of(r, i, j) == two_type_of(s, d, e)


def test_universal_sentences_survive_restriction():
    rng = random.Random(8)
    chis = [parse(t) for t in (
        "forall x. forall y. (R(x,y) -> x <=0 y)",
        "forall x. forall y. (P(x) & R(x,y) -> !Q(y))",
        "forall x. forall y. (x <=1 y | R(y,x))",
    )]
    checked = 0
    for _ in range(300):
        s = random_structure(rng, 5)
        for chi in chis:
            if evaluate(s, chi):
                keep = rng.sample(range(5), rng.randint(1, 4))
                assert evaluate(restrict(s, keep), chi)
                checked += 1
    assert checked > 20


@pytest.mark.parametrize("u,b,orders", [(0, 0, ()), (1, 0, ("leq0",)), (2, 1, ()), (1, 2, ("leq0", "leq1")), (3, 1, ("leq",))])
def test_one_type_count(u, b, orders):
    preds = {f"U{i}": 1 for i in range(u)} | {f"B{i}": 2 for i in range(b)}
    sig = Signature.of(preds, orders)
    types = enumerate_one_types(sig)
    assert len(types) == len(set(types)) == count_one_types(sig) == 2 ** (u + b)
    for t in types:
        assert all(t.holds(f"{o}(x,x)") for o in orders)
