import pytest

from speiser import GraphBuilder, RotationGraph, is_isomorphic
from speiser.errors import LabelHasNonDigonFace, NotRegular, PropagationConflict, ValenceTooSmall
from speiser.fixtures import airy, exp_ladder, fig4_d, thurston_fig10, trivial, w4
from speiser.labelling import (Labelling, construct_labelling, face_label_map, forget_digon_label,
                               insert_digon_label, minimality_descent, propagate, q_bounds,
                               verify_labelling)


def double_path():
    """o = x = o with doubled edges: one 4-sided outer face, two digons."""
    b = GraphBuilder()
    b.vertex("a", "circle").vertex("x", "cross").vertex("c", "circle")
    b.bundle("a", "x", 2)
    b.bundle("x", "c", 2)
    return b.build()


def test_figure10_bounds():
    qb = q_bounds(thurston_fig10())
    assert (qb.q_min, qb.q_max) == (5, 6)
    assert qb.admissible == [5, 6]


def test_regular_bounds_collapse():
    qb = q_bounds(trivial(3))
    assert qb.q_min == 3


def test_single_branch_face_has_no_admissible_q():
    qb = q_bounds(double_path())
    assert qb.q_max == 1 < qb.q_min
    assert qb.admissible == []


def test_valence_one_rejected():
    b = GraphBuilder()
    b.vertex("o", "circle").vertex("x", "cross")
    b.edge("o", "x")
    with pytest.raises(ValenceTooSmall):
        q_bounds(b.build())


def test_ladder_labels_alternate():
    rep = construct_labelling(exp_ladder(), 2)
    assert rep.ok
    assert sorted(set(rep.labelling.labels.values())) == [0, 1]


def test_not_regular():
    with pytest.raises(NotRegular):
        construct_labelling(thurston_fig10(), 6)


def test_seed_changes_only_a_shift():
    g = airy()
    base = propagate(g, 3, g.darts[0])
    for d in g.darts:
        other = propagate(g, 3, d)
        shifts = {(other[x] - base[x]) % 3 for x in g.darts}
        assert len(shifts) == 1


def test_repeated_label_at_vertex_fails():
    g = trivial(3)
    L = construct_labelling(g, 3).labelling
    bad = Labelling(3, {d: 0 for d in L.labels})
    v = verify_labelling(g, bad)
    assert not v.consistent and v.vertex_violations


def test_digon_face_label():
    g = trivial(2)
    L = Labelling(2, {0: 0, 1: 0, 2: 1, 3: 1})
    labels = face_label_map(g, L)
    walk = {f.darts: labels[f.index] for f in g.faces}
    assert walk[(0, 3)] == 1


def test_airy_unbounded_faces_take_every_label():
    g = airy()
    L = construct_labelling(g, 3).labelling
    labels = face_label_map(g, L)
    assert sorted(labels.values()) == [0, 1, 2]


def test_every_face_labelled_once():
    g = w4()
    L = construct_labelling(g, 3).labelling
    labels = face_label_map(g, L)
    assert set(labels) == {f.index for f in g.faces}


def test_w4_has_one_double_label():
    g = w4()
    L = construct_labelling(g, 3).labelling
    unbounded = [lab for i, lab in face_label_map(g, L).items() if not g.faces[i].bounded]
    assert len(unbounded) == 4 and len(set(unbounded)) == 3


def test_insert_then_forget_round_trip():
    g = fig4_d()
    L = construct_labelling(g, 3).labelling
    e, Le = insert_digon_label(g, L, 3)
    assert Le.q == 4
    v = verify_labelling(e, Le)
    assert v.consistent and v.failing_labels == [3]
    back, Lb = forget_digon_label(e, Le, 3)
    assert Lb.q == 3
    assert is_isomorphic(back, g, Lb.labels, L.labels)


def test_descent_reaches_q3():
    g = fig4_d()
    L = construct_labelling(g, 3).labelling
    e, Le = insert_digon_label(g, L, 3)
    h, L0, forgotten = minimality_descent(e, Le)
    assert (L0.q, forgotten) == (3, [3])
    assert verify_labelling(h, L0).ok


def test_forget_needs_digon_faces():
    g = airy()
    L = construct_labelling(g, 3).labelling
    with pytest.raises(LabelHasNonDigonFace):
        forget_digon_label(g, L, 0)


def test_construct_reports_descent():
    g = fig4_d()
    L = construct_labelling(g, 3).labelling
    e, _ = insert_digon_label(g, L, 3)
    rep = construct_labelling(e, 4)
    assert not rep.ok and rep.reduced_q == 3


def test_conflicting_cycle_detected():
    # a periodic motif whose links force two labels on one dart at q=3
    g = RotationGraph({"o": "circle", "x": "cross"}, {"o": [0, 1, 2], "x": [10, 11, 12]},
                      {0: 10, 10: 0}, links=[(11, 1), (12, 2)])
    with pytest.raises(PropagationConflict):
        propagate(g, 3)


def test_non_planar_rotation_rejected():
    from speiser.errors import BadRotation

    rot = {"o1": [0, 2, 4], "o2": [6, 8, 10], "o3": [12, 14, 16],
           "x1": [1, 7, 13], "x2": [3, 9, 15], "x3": [5, 17, 11]}
    kinds = {v: ("circle" if v[0] == "o" else "cross") for v in rot}
    twins = {d: d ^ 1 for d in range(18)}
    with pytest.raises(BadRotation):
        RotationGraph(kinds, rot, twins)
