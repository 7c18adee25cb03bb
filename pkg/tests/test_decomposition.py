import pytest

from speiser import GraphBuilder, is_isomorphic
from speiser.decomposition import (ALGEBRAIC, LOGARITHMIC, ORDINARY, branch_divisor, classify_faces,
                                   decompose, find_log_ends, maximize_ends, nucleus, reassemble,
                                   unroll_end, verify_ends)
from speiser.errors import EndConditionViolated
from speiser.fixtures import (airy, all_fixtures, eph, exp_ladder, exp_sin, fig4_a, fig4_b, fig4_c,
                              sin_exp_sin, unrolled, w4)
from speiser.graph import EndDescriptor, Kind
from speiser.labelling import construct_labelling


def four_cycle():
    b = GraphBuilder()
    for v, k in (("o1", "circle"), ("x1", "cross"), ("o2", "circle"), ("x2", "cross")):
        b.vertex(v, k)
    for u, w in (("o1", "x1"), ("x1", "o2"), ("o2", "x2"), ("x2", "o1")):
        b.bundle(u, w, 1)
    return b.build()



def test_ladder_faces():
    cs = classify_faces(exp_ladder())
    assert [c.kind for c in cs] == [LOGARITHMIC, LOGARITHMIC]


def test_exp_sin_faces():
    cs = classify_faces(exp_sin())
    assert {c.kind for c in cs} == {LOGARITHMIC, ALGEBRAIC}
    assert {c.m for c in cs if c.kind == ALGEBRAIC} == {2}
    assert all(c.periodic for c in cs)


def test_sin_exp_sin_faces():
    cs = classify_faces(sin_exp_sin())
    assert {c.m for c in cs if c.kind == ALGEBRAIC} == {2, 4}
    assert any(c.kind == ORDINARY for c in cs)


def test_square_faces_ramify_twice():
    g = four_cycle()
    entries, counts = branch_divisor(g)
    assert counts["r"] == 2 and counts["p"] == 0
    assert {e["m"] for e in entries} == {2}


@pytest.mark.parametrize("make,n_ends,n_core", [
    (exp_ladder, 2, 0), (airy, 3, 1), (w4, 4, 10), (fig4_a, 4, 1), (fig4_b, 4, 2), (fig4_c, 4, 3),
])
def test_end_and_nucleus_counts(make, n_ends, n_core):
    h, ends = find_log_ends(make())
    assert len(ends) == n_ends
    assert nucleus(h, ends).num_vertices == n_core


def test_w4_loose_darts():
    h, ends = find_log_ends(w4())
    assert len(nucleus(h, ends).loose) == 4


def test_eph_one_end():
    rep = decompose(eph())
    assert rep.counts["ends"] == 1
    assert rep.tags == {"Unknown"}


def test_ladder_divisor_and_tags():
    g = exp_ladder()
    rep = decompose(g, construct_labelling(g, 2).labelling)
    assert (rep.counts["p"], rep.counts["r"]) == (2, 0)
    assert all(e["m"] == "inf" for e in rep.divisor)
    assert rep.tags == {"N-function", "FiniteSpeiser", "Parabolic"}
    assert {e.tower for e in rep.ends} == {"exponential"}


def test_w4_label_multiplicity():
    g = w4()
    L = construct_labelling(g, 3).labelling.shifted(1)
    rep = decompose(g, L)
    assert rep.counts["p"] == 4
    assert rep.counts["by_label"] == {"0": 2, "1": 1, "2": 1}


def test_polynomial_tag():
    g = four_cycle()
    rep = decompose(g, construct_labelling(g, 2).labelling)
    assert rep.tags == {"Rational", "Elliptic", "Polynomial"}


def test_periodic_motif_is_not_finite_speiser():
    assert "FiniteSpeiser" not in decompose(exp_sin()).tags


def test_single_end_warning():
    b = GraphBuilder()
    b.vertex("o", "circle").vertex("x", "cross")
    b.bundle("o", "x", 2)
    b.end("o", 1, 2)
    rep = decompose(b.build())
    assert rep.warnings


@pytest.mark.parametrize("name", sorted(all_fixtures()))
def test_unroll_then_maximize(name):
    g = all_fixtures()[name]()
    if not g.ends:
        return
    assert is_isomorphic(maximize_ends(unrolled(g, 2)), maximize_ends(g))


def test_unroll_single_end_adds_a_rung():
    g = airy()
    h = unroll_end(g, g.ends[0].attach)
    assert h.num_vertices == 2 and len(h.ends) == 3


@pytest.mark.parametrize("make", [airy, w4, fig4_b, fig4_c])
def test_reassembly(make):
    g = make()
    h, ends = find_log_ends(g)
    assert is_isomorphic(reassemble(nucleus(h, ends), ends, h), h)


def test_end_widths_sum_to_q():
    for make, q in ((exp_ladder, 2), (airy, 3), (w4, 3), (fig4_a, 4), (fig4_b, 4)):
        _, ends = find_log_ends(make())
        assert {e.rho1 + e.rho2 for e in ends} == {q}


def test_bad_end_rejected():
    g = airy()
    e = g.ends[0]
    bad = g.replace(ends=[EndDescriptor(e.attach, 2, 2, Kind.CROSS)] + list(g.ends[1:]))
    with pytest.raises(EndConditionViolated):
        verify_ends(bad)
