import pytest

from speiser import is_isomorphic
from speiser.duality import (Color, TGraph, add_digons, commuting_square, digon_gaps, dual,
                             forget_valence2, labelling_from_tessellation, primal, subdivide_edges,
                             tgraph_from_dict)
from speiser.errors import (LabellingInconsistent, NotTwoColorable, UnsupportedInfinite,
                            WouldCreateLoop)
from speiser.extension import apply_extension, solve_extension
from speiser.fixtures import airy, no_local_balance, thurston_fig10, trivial
from speiser.graph import CombinatorialMap, Kind
from speiser.labelling import verify_labelling


def euler(m: CombinatorialMap) -> int:
    return m.num_vertices - m.num_edges + len(m.faces)


def labelled_extension(q):
    g = thurston_fig10()
    res = apply_extension(g, solve_extension(g, q, prefer_minimal=True))
    return res.graph, res.labelling.labelling


def tgraph(q):
    s, L = labelled_extension(q)
    return forget_valence2(primal(s, L))


@pytest.mark.parametrize("make", [thurston_fig10, no_local_balance, lambda: trivial(3)])
def test_dual_of_primal(make):
    g = make()
    t = primal(g)
    back, refs = dual(t)
    assert is_isomorphic(g, back)
    assert euler(t) == 2
    assert set(refs["vertex_of_tile"]) == {f.index for f in t.faces}


def test_tiles_are_coloured_by_kind():
    t = primal(thurston_fig10())
    blue = len(t.tiles(Color.BLUE))
    assert blue == len(thurston_fig10().vertices_of_kind(Kind.CIRCLE))


def test_valence_matches_face_sides():
    g = no_local_balance()
    t = primal(g)
    back, refs = dual(t)
    for v, face in refs["face_of_vertex"].items():
        assert t.degree(v) == len(back.faces[face].darts)
    assert sorted(t.degree(v) for v in t.rotations) == sorted(len(f.darts) for f in g.faces)


def test_primal_rejects_ends():
    with pytest.raises(UnsupportedInfinite):
        primal(airy())


def test_subdivision_homogenizes():
    for q in (5, 6):
        t = tgraph(q)
        a = subdivide_edges(t)
        assert a.is_homogeneous(q)
        assert a.kind() == "A-map"
        assert euler(a) == 2


def test_unit_gaps_are_left_alone():
    s, L = labelled_extension(5)
    a = primal(s, L)
    again = subdivide_edges(a)
    assert again.num_vertices == a.num_vertices


def test_forget_undoes_subdivide():
    t = tgraph(6)
    back = forget_valence2(subdivide_edges(t))
    assert is_isomorphic(t, back, t.label_data(), back.label_data())


def test_forget_would_loop():
    t = primal(trivial(2))
    with pytest.raises(WouldCreateLoop):
        forget_valence2(t)


def test_zero_gap_rejected():
    t = tgraph(5)
    labels = {v: 0 for v in t.rotations}
    with pytest.raises(LabellingInconsistent):
        subdivide_edges(t, 5, labels)


def test_odd_vertex_not_two_colourable():
    # K4 drawn in the plane: every vertex has valence 3
    rot = {0: [0, 1, 2], 1: [3, 5, 4], 2: [6, 8, 7], 3: [9, 11, 10]}
    twins = [[0, 3], [1, 6], [2, 9], [4, 7], [5, 10], [8, 11]]
    spec = {"vertices": [{"id": v, "rotation": r} for v, r in rot.items()], "twins": twins}
    with pytest.raises(NotTwoColorable):
        tgraph_from_dict(spec)


@pytest.mark.parametrize("q", [5, 6])
def test_commuting_square(q):
    assert commuting_square(tgraph(q))


def test_add_digons_counts():
    t = tgraph(6)
    s, _ = dual(t)
    gaps = digon_gaps(t)
    h = add_digons(s, gaps)
    assert h.num_edges == s.num_edges + sum(gaps.values())
    assert set(h.valences().values()) == {6}


def test_labelling_transport():
    t = tgraph(5)
    a = subdivide_edges(t)
    s, _ = dual(a)
    L = labelling_from_tessellation(a, s)
    assert verify_labelling(s, L).ok


def test_tgraph_round_trips_through_dict():
    t = tgraph(5)
    u = tgraph_from_dict(t.to_dict())
    assert isinstance(u, TGraph)
    assert is_isomorphic(t, u, t.label_data(), u.label_data())
