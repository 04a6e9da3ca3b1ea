import json

import numpy as np
import pytest

from oinv2.checker import evaluate, truth_matrix
from oinv2.generators import FAMILIES, predecessor_model, predecessor_nf, successor_model, successor_nf
from oinv2.shrinker import ShrinkError, classify_rare, shrink
from oinv2.structures import Structure, one_type_codes


def audit(report, nf):
    """Assert the size accounting and bookkeeping invariants of one run."""
    W0, W1, W2, W3 = report.W
    M, alpha = report.M, report.alpha
    for i in range(4):
        for j in range(i + 1, 4):
            assert not report.W[i] & report.W[j]
    assert len(W0 | W1) <= 32 * M * alpha
    assert len(W2) <= 2 * M * len(W0 | W1)
    assert len(W3) <= 2 * M * len(W2)
    assert report.output_size <= report.bound
    by_type = {}
    for (code, k), pool in report.pools.items():
        assert len(pool) == M and set(pool) <= W1
        by_type.setdefault(code, []).extend(pool)
    for pools in by_type.values():
        assert len(pools) == len(set(pools)) == 4 * M
    touched = [frozenset((r.element, r.new_witness)) for r in report.rewired]
    assert len(touched) == len(set(touched))
    assert all(r.element in W3 for r in report.rewired)
    assert report.verified and evaluate(report.output, nf.sentence())


def test_large_successor_model():
    nf = successor_nf()
    s = successor_model(1000, np.random.default_rng(0))
    r = shrink(s, nf)
    assert r.shrunk and r.alpha == 2 and r.bound == 448
    assert r.output_size <= 448
    audit(r, nf)


def test_small_model_returned_unchanged():
    nf = successor_nf()
    s = successor_model(40, np.random.default_rng(1))
    r = shrink(s, nf)
    assert not r.shrunk and r.output == s and r.verified


def test_predecessor_uses_k0_pools():
    nf = predecessor_nf()
    s = predecessor_model(800, np.random.default_rng(2))
    r = shrink(s, nf)
    audit(r, nf)
    assert r.rewired
    _, codes = one_type_codes(s)
    for rw in r.rewired:
        assert rw.new_witness in r.pools[(int(codes[rw.old_witness]), 0)]


def test_untouched_elements_keep_their_witnesses():
    nf = successor_nf()
    s = successor_model(900, np.random.default_rng(3))
    r = shrink(s, nf)
    kept = np.zeros(s.n, bool)
    kept[r.kept] = True
    w = truth_matrix(s, nf.gammas[0][0])
    for d in set(r.kept) - r.W[3]:
        assert (w[d] & kept).any()


@pytest.mark.parametrize("family", FAMILIES, ids=lambda f: f.name)
@pytest.mark.parametrize("n", [120, 700])
def test_forced_runs_verify(family, n):
    nf = family.nf()
    r = shrink(family.model(n, np.random.default_rng(n)), nf, force=True)
    audit(r, nf)


def test_classify_rare_threshold():
    nf = successor_nf()  # M = 1
    # 32 self-loop elements, the rest successor edges to 0
    n = 100
    edges = {(a, a) for a in range(32)} | {(a, 0) for a in range(32, n)}
    s = Structure(n, {}, {"R": edges}, {"leq0": tuple(range(n)), "leq1": tuple(range(n))})
    rare = classify_rare(s, nf)
    assert len(rare) == 2
    by_loop = {t.holds("R(x,x)"): v for t, v in rare.items()}
    assert by_loop == {True: True, False: False}
    edges.add((32, 32))
    edges.discard((32, 0))
    s33 = Structure(n, {}, {"R": edges}, s.orders)
    assert {t.holds("R(x,x)"): v for t, v in classify_rare(s33, nf).items()} == {True: False, False: False}


def test_unrealised_types_are_rare():
    nf = successor_nf()
    n = 1000
    s = Structure(n, {}, {"R": {(a, (a + 1) % n) for a in range(n)}}, {"leq0": tuple(range(n)), "leq1": tuple(range(n))})
    rare = classify_rare(s, nf)
    assert {t.holds("R(x,x)"): v for t, v in rare.items()} == {True: True, False: False}


def test_rejects_non_models():
    nf = successor_nf()
    s = Structure(3, {}, {"R": set()}, {"leq0": (0, 1, 2), "leq1": (0, 1, 2)})
    with pytest.raises(ShrinkError):
        shrink(s, nf)
    with pytest.raises(ShrinkError):
        classify_rare(s, nf)


def test_report_serialises():
    nf = predecessor_nf()
    r = shrink(predecessor_model(500, np.random.default_rng(4)), nf)
    d = json.loads(json.dumps(r.to_dict()))
    assert d["n"] == r.output_size and d["report"]["verified"] is True
    assert len(d["report"]["W"]) == 4
    assert Structure.from_dict(d) == r.output
