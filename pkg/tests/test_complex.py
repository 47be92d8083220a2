"""Vertices, the initial-subset order, cubes and ball enumeration."""

import random

import pytest

from squier.complex import (
    ComplexError,
    Vertex,
    _downsets,
    ball,
    base_vertex,
    bfs_distance,
    cubes_at,
    edge_distance,
    export_dot,
    initial_subsets,
    lub,
    neighbors,
    vertex_leq,
    vertex_of,
)
from squier.complex import _attachments
from squier.picture import (
    BRAIDED,
    CYCLIC,
    PLANAR,
    PRES_XX,
    attach_transistor,
    creates_dipole_with_upper,
    identity_picture,
    make_picture,
    sub_picture,
)
from squier.thompson import f_generator, grid_tree
from squier.trees import full_carets, tree_picture
from squier.verify import random_picture

STAR = base_vertex("x")


def tv(carets, variant=PLANAR):
    return vertex_of(tree_picture(frozenset(carets), variant))


def test_vertex_of_base_and_caret():
    assert vertex_of(identity_picture(PRES_XX, "x")) == STAR
    assert STAR.transistor_count() == 0
    t1 = tv({""})
    assert t1.bracket == "(. .)"
    assert t1.transistor_count() == 1


def test_vertex_reduces_first():
    x0 = f_generator(0)
    from squier.picture import concatenate, invert_picture

    q = concatenate(x0.picture, invert_picture(x0.picture))
    assert vertex_of(q) == STAR


def test_braided_vertices_quotient_bottom_permutations():
    base = tree_picture({"", "1"}, BRAIDED)
    # same tree with the three dangling ends cyclically permuted
    permuted = make_picture(
        base.pres,
        BRAIDED,
        "x",
        base.transistors,
        [
            (s, ("B", (d[1] + 1) % 3) if d[0] == "B" else d)
            for s, d in base.wires
        ],
    )
    assert Vertex(base) == Vertex(permuted)
    # an internally crossed wiring is a genuinely different vertex
    crossed = make_picture(
        base.pres,
        BRAIDED,
        "x",
        [(0, True), (0, False)],
        [
            (("T", 0), ("t", 0, 0)),
            (("b", 0, 0), ("t", 1, 1)),
            (("b", 0, 1), ("t", 1, 0)),
            (("b", 1, 0), ("B", 0)),
        ],
    )
    assert Vertex(crossed) != Vertex(base)


def test_cyclic_vertices_quotient_rotations_only():
    base = tree_picture({"", "1"}, CYCLIC)
    rotated = make_picture(
        base.pres,
        CYCLIC,
        "x",
        base.transistors,
        [
            (s, ("B", (d[1] + 1) % 3) if d[0] == "B" else d)
            for s, d in base.wires
        ],
    )
    assert Vertex(base) == Vertex(rotated)


def test_vertex_leq_examples():
    t1, t2 = tv({""}), tv({"", "0", "1"})
    assert vertex_leq(STAR, t1) and vertex_leq(STAR, t2)
    assert vertex_leq(t1, t2)
    assert not vertex_leq(t2, t1)


def test_vertex_leq_is_a_partial_order_on_ball3():
    g = ball("x", 3, PLANAR)
    vs = g.vertices
    for a in vs:
        assert vertex_leq(a, a)
        for b in vs:
            if vertex_leq(a, b) and vertex_leq(b, a):
                assert a == b
            for c in vs:
                if vertex_leq(a, b) and vertex_leq(b, c):
                    assert vertex_leq(a, c)


def test_initial_subsets_examples():
    assert len(initial_subsets(tv({""}))) == 2
    subs = initial_subsets(tv({"", "0", "1"}))
    assert len(subs) == 5
    assert STAR in subs


def test_initial_subsets_counts_match_downset_oracle():
    rng = random.Random(99)
    for _ in range(50):
        p = random_picture(
            PRES_XX, "x", rng.choice((PLANAR, BRAIDED)), rng.randint(0, 4), rng
        )
        v = vertex_of(p)
        q = v.picture
        n = len(q.transistors)
        # brute-force filter over all subsets
        count = 0
        for mask in range(1 << n):
            s = {k for k in range(n) if mask >> k & 1}
            if all(par in s for k in s for par in q.parents[k]):
                count += 1
        subs = initial_subsets(v)
        assert len(subs) == count
        assert all(vertex_leq(u, v) for u in subs)


def test_lub_identity_and_join():
    t1, t2 = tv({""}), tv({"", "0", "1"})
    assert lub(t2, STAR) == t2
    assert lub(STAR, t2) == t2
    assert lub(tv({"", "0"}), tv({"", "1"})) == t2


def _upward(v, depth):
    seen = {v.key: v}
    frontier = [v]
    for _ in range(depth):
        nxt = []
        for u in frontier:
            p = u.picture
            for rel, fwd, pos in _attachments(p):
                q = attach_transistor(p, rel, fwd, pos)
                if creates_dipole_with_upper(q, len(q.transistors) - 1):
                    continue
                w = Vertex(q)
                if w.key not in seen:
                    seen[w.key] = w
                    nxt.append(w)
        frontier = nxt
    return list(seen.values())


def test_lub_agrees_with_dominator_search_on_ball3():
    g = ball("x", 3, PLANAR)
    for a in g.vertices:
        ups = _upward(a, 3)
        for b in g.vertices:
            dominators = [u for u in ups if vertex_leq(b, u)]
            got = lub(a, b)
            if not dominators:
                assert got is None
            else:
                least = [
                    u
                    for u in dominators
                    if all(vertex_leq(u, w) for w in dominators)
                ]
                assert len(least) == 1
                assert got == least[0]


def test_neighbors_examples():
    assert [w.bracket for w in neighbors(STAR)] == ["(. .)"]
    assert len(neighbors(tv({""}))) == 3
    assert len(neighbors(tv({""}, BRAIDED))) == 4


def test_ball_counts():
    assert len(ball("x", 1, PLANAR).vertices) == 2
    assert len(ball("x", 1, PLANAR).edges) == 1
    assert len(ball("x", 2, PLANAR).vertices) == 4
    assert len(ball("x", 2, BRAIDED).vertices) == 5


def test_ball_monotone():
    for variant in (PLANAR, BRAIDED):
        prev = set()
        for r in range(4):
            cur = {v.key for v in ball("x", r, variant).vertices}
            assert prev <= cur
            prev = cur


def test_ball_radius_cap():
    with pytest.raises(ComplexError):
        ball("x", 7, PLANAR)


def test_cubes_at_base():
    cubes = cubes_at(STAR)
    assert len(cubes) == 1
    assert cubes[0].dimension == 1
    assert cubes[0].max_corner() == tv({""})


def test_four_cube_between_t2_and_t3():
    t2 = tv({"", "0", "1"})
    t3 = tv(full_carets(3))
    hits = [
        c
        for c in cubes_at(t2)
        if c.dimension == 4 and c.min_corner() == t2 and c.max_corner() == t3
    ]
    assert len(hits) == 1


def test_two_cube_corners_follow_the_shading():
    t2 = tv({"", "0", "1"})
    for cube in cubes_at(t2, max_dim=2):
        if cube.dimension != 2:
            continue
        corners = cube.corners()
        assert len(corners) == 4
        sizes = sorted(len(u.picture.transistors) for _s, u in corners)
        n = len(cube.picture.transistors)
        assert sizes == [n - 2, n - 1, n - 1, n]
        for shaded, u in corners:
            assert vertex_leq(u, cube.max_corner())
            assert vertex_leq(cube.min_corner(), u)


def test_two_cube_opposite_edges_differ_by_one_maximal():
    # opposite edges of any 2-face come from removing the same white
    t2 = tv({"", "0", "1"})
    for cube in cubes_at(t2, max_dim=2):
        if cube.dimension != 2:
            continue
        w1, w2 = sorted(cube.whites)
        c00 = cube.corner(frozenset())
        c10 = cube.corner(frozenset({w1}))
        c01 = cube.corner(frozenset({w2}))
        c11 = cube.corner(frozenset({w1, w2}))
        assert edge_distance(c00, c10) == 1
        assert edge_distance(c01, c11) == 1
        assert edge_distance(c00, c01) == 1
        assert edge_distance(c10, c11) == 1
        assert edge_distance(c00, c11) == 2


def test_edge_distance_to_base_counts_transistors():
    g = ball("x", 3, PLANAR)
    for v in g.vertices:
        assert edge_distance(STAR, v) == len(v.picture.transistors)


def test_edge_distance_matches_bfs_on_ball4():
    g = ball("x", 4, PLANAR)
    for a in g.vertices:
        for b in g.vertices:
            d = bfs_distance(g, a, b)
            if d is not None:
                assert d == edge_distance(a, b)


def test_grid_translate_distance():
    for m in range(2, 6):
        for n in range(2, 6):
            t = grid_tree(m, n)
            moved = grid_tree(m + 1, n - 1)
            assert edge_distance(t, moved) == 2


def test_lemma_3_1_order_preservation_on_ball4():
    g = ball("x", 4, PLANAR)
    for v in g.vertices:
        p = v.picture
        downs = _downsets(len(p.transistors), p.parents, p.children)
        images = {}
        for s in downs:
            q, _prov = sub_picture(p, s)
            images[s] = Vertex(q)
        assert len({u.key for u in images.values()}) == len(downs)
        for s1 in downs:
            for s2 in downs:
                assert (s1 <= s2) == vertex_leq(images[s1], images[s2])


def test_export_dot():
    g0 = ball("x", 0, PLANAR)
    text = export_dot(g0)
    assert text.count("label=") == 1
    g2 = ball("x", 2, PLANAR)
    text2 = export_dot(g2)
    assert text2.count("label=") == 4
    assert text2.count(" -- ") == 3
    assert export_dot(ball("x", 2, PLANAR)) == text2


def test_serialize_ball_deterministic():
    a = ball("x", 2, BRAIDED).serialize()
    b = ball("x", 2, BRAIDED).serialize()
    assert a == b
    assert a.startswith("ball word=x radius=2 variant=braided\n")
