"""Structural invariants after every operation, checked by a face walk written
here from scratch rather than through the library's own face cache."""

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from speiser import build_graph, is_isomorphic
from speiser.balance import collapse_digons
from speiser.duality import add_digons, dual, forget_valence2, primal
from speiser.extension import apply_extension, brute_force_feasibility, check_witness, solve_extension
from speiser.generate import random_graph, random_mutation
from speiser.labelling import construct_labelling, q_bounds, verify_labelling


def walk_faces(rotations, twins):
    where = {d: (v, i) for v, r in rotations.items() for i, d in enumerate(r)}
    seen, faces = set(), []
    for d0 in where:
        if d0 in seen:
            continue
        face, d = [], d0
        while d not in seen:
            seen.add(d)
            face.append(d)
            v, i = where[twins[d]]
            d = rotations[v][i - 1]
        faces.append(face)
    return where, faces


def check_map(rotations, twins):
    darts = [d for r in rotations.values() for d in r]
    assert len(darts) == len(set(darts)), "rotations must partition the darts"
    assert set(twins) == set(darts)
    assert all(twins[twins[d]] == d != twins[d] for d in darts)
    where, faces = walk_faces(rotations, twins)
    assert len(rotations) - len(darts) // 2 + len(faces) == 2
    return where, faces


def check_graph(g):
    where, faces = check_map(g.rotations, g.twins)
    kind = {d: g.kinds[where[d][0]] for d in where}
    assert all(kind[d] != kind[g.twins[d]] for d in where)
    for f in faces:
        assert len(f) % 2 == 0
        assert all(kind[a] != kind[b] for a, b in zip(f, f[1:] + f[:1]))


def check_tgraph(t):
    check_map(t.rotations, t.twins)
    for d in t.darts:
        assert t.color_of_dart(d) is not t.color_of_dart(t.twins[d])


def chain(seed, steps):
    rng = random.Random(seed)
    g = random_graph(rng, max_side=2, max_extra=1)
    out = [g]
    for _ in range(steps):
        g = random_mutation(rng, g)
        out.append(g)
    return out


def pre_speiser(seed, steps):
    """Last graph of a chain, with every pendant edge doubled so valences are >= 2."""
    g = chain(seed, steps)[-1]
    pend = {}
    for v, r in g.rotations.items():
        if len(r) == 1:
            a = r[0]
            pend[min(a, g.twins[a])] = 1
    return add_digons(g, pend)


def test_thousand_mutations():
    n = 0
    for seed in range(50):
        for g in chain(seed, 20):
            check_graph(g)
            n += 1
    assert n >= 1000


seeds = st.integers(0, 10 ** 6)


@given(seeds, st.integers(1, 12))
def test_mutations_keep_invariants(seed, steps):
    for g in chain(seed, steps):
        check_graph(g)


@given(seeds)
def test_serialization_roundtrip(seed):
    g = chain(seed, 6)[-1]
    h = build_graph(g.to_dict())
    assert is_isomorphic(g, h)


@given(seeds)
def test_duality_operations(seed):
    g = chain(seed, 8)[-1]
    t = primal(g)
    check_tgraph(t)
    back, _ = dual(t)
    check_graph(back)
    assert is_isomorphic(g, back)
    check_tgraph(forget_valence2(t)) if all(len(r) != 2 for r in t.rotations.values()) else None


@given(seeds, st.integers(1, 3))
def test_add_digons_and_collapse(seed, k):
    g = chain(seed, 6)[-1]
    d = min(a for a, _ in g.edges())
    h = add_digons(g, {d: k})
    check_graph(h)
    assert h.num_edges == g.num_edges + k
    check_graph(collapse_digons(h))


@settings(max_examples=60)
@given(seeds)
def test_extension_output(seed):
    g = pre_speiser(seed, 5)
    qb = q_bounds(g)
    q = qb.q_min
    plan = solve_extension(g, q)
    if plan.feasible:
        res = apply_extension(g, plan)
        h = res.graph
        check_graph(h)
        assert set(h.valences().values()) == {q}
        assert len(h.vertices_of_kind(h.kinds[h.vertices[0]])) * 2 == h.num_vertices
        for a, b in g.edges():
            assert h.vertex_of(a) == g.vertex_of(a)
    else:
        assert plan.witness is None or check_witness(g, q, plan.witness)
    if g.num_edges <= 8:
        assert brute_force_feasibility(g, q).feasible == plan.feasible


@settings(max_examples=40)
@given(seeds, seeds)
def test_labelling_seed_is_a_shift(seed, s):
    g = pre_speiser(seed, 5)
    q = q_bounds(g).q_min
    plan = solve_extension(g, q)
    if not plan.feasible:
        return
    h = apply_extension(g, plan, label=False).graph
    a = construct_labelling(h, q).labelling
    darts = sorted(h.darts)
    b = construct_labelling(h, q, seed=darts[s % len(darts)]).labelling
    shift = (b[darts[0]] - a[darts[0]]) % q
    assert all((b[d] - a[d]) % q == shift for d in darts)
    assert verify_labelling(h, a).consistent


@given(seeds)
def test_parallel_edge_never_loosens_bounds(seed):
    g = pre_speiser(seed, 6)
    h = add_digons(g, {min(a for a, _ in g.edges()): 1})
    before, after = q_bounds(g), q_bounds(h)
    assert after.q_min >= before.q_min
    assert after.q_max <= before.q_max


def test_extension_sweep():
    hits = 0
    for seed in range(300):
        g = pre_speiser(seed, 5)
        q = q_bounds(g).q_min
        plan = solve_extension(g, q)
        if not plan.feasible:
            continue
        hits += 1
        res = apply_extension(g, plan)
        check_graph(res.graph)
        assert set(res.graph.valences().values()) == {q}
        assert res.labelling is None or verify_labelling(res.graph, res.labelling.labelling).consistent
    assert hits >= 20
