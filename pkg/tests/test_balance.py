import random
import warnings

import pytest

from speiser import GraphBuilder
from speiser.balance import (check_hall_certificate, check_koch_lei_certificate,
                             check_tomasini_certificate, collapse_digons, conjecture_harness,
                             hall_check, koch_lei_check, runnable, skeleton_of_tgraph,
                             tomasini_balance, tomasini_skeleton, tri_verdict)
from speiser.duality import Color, primal
from speiser.errors import NotHomogeneous
from speiser.fixtures import exp_ladder, no_local_balance, thurston_fig10
from speiser.generate import bipartite_graphs, random_graph


@pytest.fixture(scope="module")
def nlb():
    g = collapse_digons(no_local_balance())
    return g, primal(g)


def single_edge():
    b = GraphBuilder()
    b.vertex("o", "circle").vertex("x", "cross")
    b.bundle("o", "x", 1)
    return b.build()


def test_lone_tile_pair_is_balanced():
    t = primal(single_edge())
    sk = skeleton_of_tgraph(t)
    assert len(sk.black) == 1 and not sk.red and not sk.edges
    assert tomasini_balance(sk).balanced
    assert koch_lei_check(t).balanced


def test_one_black_per_blue_tile(nlb):
    _, t = nlb
    sk = skeleton_of_tgraph(t)
    assert len(sk.black) == len(t.tiles(Color.BLUE))
    assert len(sk.black) == sk.num_faces


def test_red_leaves_are_erased(nlb):
    _, t = nlb
    sk = skeleton_of_tgraph(t)
    deg = {}
    for _, r in sk.edges:
        deg[r] = deg.get(r, 0) + 1
    assert min(deg.values()) >= 2


def test_labelled_skeleton_needs_homogeneous_map(corpus):
    e = corpus["thurston-fig10-q5"]
    t = primal(e.graph(), e.labels())
    assert tomasini_skeleton(t).black
    with pytest.raises(NotHomogeneous):
        tomasini_skeleton(primal(e.graph()))


def test_gadget_violates_all_three(nlb):
    g, t = nlb
    row = tri_verdict(no_local_balance())
    assert row.agree and not row.hall.balanced
    assert row.hall.global_ok and row.koch_lei.global_ok and row.tomasini.global_ok
    assert check_hall_certificate(g, row.hall.certificate)
    assert check_koch_lei_certificate(t, row.koch_lei.certificate)
    assert check_tomasini_certificate(skeleton_of_tgraph(t), row.tomasini.certificate)


def test_tampered_certificates_fail(nlb):
    g, t = nlb
    row = tri_verdict(no_local_balance())
    kl = dict(row.koch_lei.certificate, blue=row.koch_lei.certificate["blue"] + 5)
    assert not check_koch_lei_certificate(t, kl)
    tm = dict(row.tomasini.certificate, faces=0)
    assert not check_tomasini_certificate(skeleton_of_tgraph(t), tm)


def test_fig10_balanced():
    row = tri_verdict(thurston_fig10())
    assert row.hall.balanced and row.koch_lei.balanced and row.tomasini.balanced


def test_regular_graphs_balance_after_collapse(corpus):
    for eid in ("thurston-fig10-q5", "thurston-fig10-q6", "thurston-fig10-amap"):
        g = corpus[eid].graph()
        h = collapse_digons(g)
        assert not any(f.is_digon for f in h.faces)
        assert runnable(g) is None
        assert tri_verdict(g).hall.balanced


def test_not_runnable_reasons():
    assert runnable(exp_ladder()) == "not finite"
    assert runnable(single_edge()) == "valence below 2"


def test_hall_on_fig10_reports_q():
    v = hall_check(thurston_fig10())
    assert v.balanced and v.parameters["q"] == 5


def test_small_bounds_warn_and_flag(nlb):
    _, t = nlb
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        v = tomasini_balance(skeleton_of_tgraph(t), max_subgraph_size=1)
    assert v.truncated
    assert v.certificate is None or "black" not in v.certificate


def test_harness_exhaustive_small():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        res = conjecture_harness((g.meta.get("name", ""), g) for g in bipartite_graphs(3))
    assert res["rows"] and not res["disagreements"]


def test_harness_random():
    rng = random.Random(7)
    gs = [(f"r{i}", random_graph(rng)) for i in range(400)]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        res = conjecture_harness(gs)
    assert len(res["rows"]) > 20
    assert not res["disagreements"]
