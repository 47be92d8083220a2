"""The acceptance battery behind `squier verify-all` and the test suite.

Each criterion is a function returning (ok, detail).  Randomized checks
use fixed seeds so that runs are reproducible; every expected value is
either pinned exactly or recomputed by an independent oracle inside the
criterion itself.
"""

import math
import random
import time
from dataclasses import dataclass

from squier.complex import (
    BallGraph,
    Vertex,
    _attachments,
    _downsets,
    ball,
    base_vertex,
    bfs_distance,
    cubes_at,
    edge_distance,
    initial_subsets,
    lub,
    vertex_leq,
    vertex_of,
)
from squier.embed import (
    LabelledTree,
    displacement_decomposition,
    displacement_squared,
    displacement_squared_by_zones,
    l2_distance_squared,
    labelled_tree_of_vertex,
    rho_vertex,
    search_low_displacement,
    x0_action_tree,
)
from squier.hyperplane import (
    halfspace_leq,
    halfspaces_intersect,
    hyperplanes_below,
    separates,
)
from squier.picture import (
    BRAIDED,
    CYCLIC,
    PLANAR,
    PRES_ABCD,
    PRES_XX,
    PictureError,
    attach_transistor,
    canonical_serialize,
    creates_dipole_with_upper,
    find_dipoles,
    identity_picture,
    insert_dipole,
    make_picture,
    reduce_picture,
    remove_dipole,
    sub_picture,
)
from squier.profile import (
    PROFILE_KINDS,
    SOLID,
    OPEN,
    TruncatedProfile,
    act_profile,
    canonical_profile,
    is_fixed_to_depth,
    make_tree_profile,
    profiles_equal_to_depth,
    validate_profile,
)
from squier.thompson import (
    GroupElement,
    TreePair,
    check_relation,
    element_from_tree_pair,
    f_generator,
    full_tree,
    grid_tree,
    grid_tree_hat,
    group_identity,
    link_condition_check,
    t_rotation,
    act,
)
from squier.trees import caret_address_map, full_carets, leaves_of, tree_picture, vine


@dataclass
class CriterionResult:
    number: int
    name: str
    ok: bool
    detail: str
    seconds: float

    def line(self):
        mark = "PASS" if self.ok else "FAIL"
        return "%s  %2d. %-28s %s (%.1fs)" % (
            mark,
            self.number,
            self.name,
            self.detail,
            self.seconds,
        )


# ---------------------------------------------------------------------------
# random generators


def random_word(pres, rng, max_len=4):
    n = rng.randint(1, max_len)
    return "".join(rng.choice(pres.alphabet) for _ in range(n))


def random_picture(pres, word, variant, n_insertions, rng):
    """A random picture grown from the identity by dipole insertions."""
    p = identity_picture(pres, word, variant)
    sides = [
        (rel, fwd)
        for rel in range(len(pres.relations))
        for fwd in (True, False)
    ]
    for _ in range(n_insertions):
        wires = [s for s, _d in p.wires]
        rng.shuffle(wires)
        rng.shuffle(sides)
        done = False
        for w in wires:
            for rel, fwd in sides:
                try:
                    p = insert_dipole(p, w, rel, fwd)
                    done = True
                    break
                except PictureError:
                    continue
            if done:
                break
    return p


def reduce_random_order(p, rng):
    """Remove dipoles in a random order until none remain."""
    while True:
        occs = find_dipoles(p)
        if not occs:
            return p
        p = remove_dipole(p, rng.choice(occs))


def random_caret_set(rng, n_carets):
    s = set()
    if n_carets:
        s.add("")
    while len(s) < n_carets:
        a = rng.choice(sorted(s))
        b = rng.choice("01")
        s.add(a + b)
    return frozenset(s)


def random_tree_pair(rng, max_carets=4, permuted=False):
    n = rng.randint(1, max_carets)
    dom = random_caret_set(rng, n)
    rng2 = random_caret_set(rng, n)
    while len(leaves_of(rng2)) != len(leaves_of(dom)):
        rng2 = random_caret_set(rng, n)
    leaf_map = list(range(len(leaves_of(dom))))
    if permuted:
        rng.shuffle(leaf_map)
    return TreePair(dom, rng2, tuple(leaf_map))


def random_f_element(rng, max_carets=4):
    return element_from_tree_pair(random_tree_pair(rng, max_carets), PLANAR)


def random_v_element(rng, max_carets=4):
    return element_from_tree_pair(
        random_tree_pair(rng, max_carets, permuted=True), BRAIDED
    )


def random_tree_vertex(rng, max_carets=6, variant=PLANAR):
    return vertex_of(tree_picture(random_caret_set(rng, rng.randint(0, max_carets)), variant))


def random_all_ones_tree(rng, max_extra=14):
    """All-ones labelled tree with carets below both 10 and 11."""
    s = {"", "1", "10", "11"}
    for _ in range(rng.randint(0, max_extra)):
        a = rng.choice(sorted(s))
        s.add(a + rng.choice("01"))
    return LabelledTree.from_dict({a: 1.0 for a in s})


def all_caret_sets(max_carets):
    """Every binary tree with at most max_carets carets."""
    out = {frozenset()}
    frontier = {frozenset()}
    for _ in range(max_carets):
        nxt = set()
        for s in frontier:
            slots = {""} if not s else {
                a + b for a in s for b in "01" if a + b not in s
            }
            for slot in slots:
                nxt.add(s | {slot})
        out |= nxt
        frontier = nxt
    return sorted(out, key=lambda s: (len(s), sorted(s)))


# ---------------------------------------------------------------------------
# spot-check profiles reconstructed from the fixed-profile case analysis


def case2_profile(depth):
    """Right-vine profile whose wire below the second vine caret attaches.

    The left wire of the root does not attach, but after the left shift
    acts the corresponding wire does, so the profile moves.
    """
    carets = vine("R", depth)
    marks = {leaf: OPEN for leaf in leaves_of(carets)}
    marks["1" * (depth + 1)] = SOLID
    marks["110"] = SOLID
    return make_tree_profile(carets, marks, depth)


def tent_profile(depth):
    """A full level-two top whose two middle leaves feed a common merge.

    Acting by the second generator forces a forward/reverse transistor
    mismatch against the original, so the profile moves.
    """
    if depth < 4:
        raise ValueError("tent needs depth >= 4")
    transistors = [(0, True), (0, True), (0, True), (0, False)]
    wires = [
        (("T", 0), ("t", 0, 0)),
        (("b", 0, 0), ("t", 1, 0)),  # caret at 0
        (("b", 0, 1), ("t", 2, 0)),  # caret at 1
        (("b", 1, 1), ("t", 3, 0)),  # @01 into the merge
        (("b", 2, 0), ("t", 3, 1)),  # @10 into the merge
    ]
    marks = {}
    fb = 0
    wires.append((("b", 1, 0), ("B", fb)))  # @00
    marks[fb] = OPEN
    fb += 1
    # vine of carets hanging below the merge, heights 4..depth
    prev = ("b", 3, 0)
    k = 4
    for _level in range(depth - 3):
        transistors.append((0, True))
        wires.append((prev, ("t", k, 0)))
        wires.append((("b", k, 0), ("B", fb)))
        marks[fb] = OPEN
        fb += 1
        prev = ("b", k, 1)
        k += 1
    wires.append((prev, ("B", fb)))
    marks[fb] = SOLID
    fb += 1
    wires.append((("b", 2, 1), ("B", fb)))  # @11
    marks[fb] = OPEN
    fb += 1
    pic = make_picture(PRES_XX, PLANAR, "x", transistors, wires)
    return TruncatedProfile(pic, tuple(marks[i] for i in range(fb)), depth)


def impossible_solid_profile():
    """A merge whose lone solid wire admits no dipole-free attachment."""
    pic = make_picture(
        PRES_XX,
        PLANAR,
        "x",
        [(0, True), (0, True), (0, False)],
        [
            (("T", 0), ("t", 0, 0)),
            (("b", 0, 0), ("t", 1, 0)),  # caret at 0
            (("b", 1, 0), ("B", 0)),  # @00 open
            (("b", 1, 1), ("t", 2, 0)),  # @01 into the merge
            (("b", 0, 1), ("t", 2, 1)),  # @1 into the merge
            (("b", 2, 0), ("B", 1)),  # merge output: solid
        ],
    )
    return TruncatedProfile(pic, (OPEN, SOLID), 2)


# ---------------------------------------------------------------------------
# criteria


def criterion_1_confluence(n_pictures=200, n_orders=10, seed=101):
    rng = random.Random(seed)
    checked = 0
    for i in range(n_pictures):
        pres = PRES_XX if i % 2 == 0 else PRES_ABCD
        word = random_word(pres, rng)
        variant = rng.choice((PLANAR, CYCLIC, BRAIDED))
        p = random_picture(pres, word, variant, rng.randint(2, 8), rng)
        want = canonical_serialize(reduce_picture(p))
        for _ in range(n_orders):
            got = canonical_serialize(reduce_random_order(p, rng))
            if got != want:
                return False, "order-dependent reduction on picture %d" % i
            checked += 1
    return True, "%d pictures x %d orders" % (n_pictures, n_orders)


def criterion_2_group_structure(n_f=50, n_v=20, seed=202):
    rng = random.Random(seed)
    f_pool = [random_f_element(rng) for _ in range(n_f)]
    v_pool = [random_v_element(rng) for _ in range(n_v)]
    if any(g.transistor_count() > 8 for g in f_pool + v_pool):
        return False, "pool element exceeds 8 transistors"
    for g in f_pool + v_pool:
        if not (g * g.inverse()).is_identity() or not (g.inverse() * g).is_identity():
            return False, "two-sided inverse fails"
    triples = 0
    for pool in (f_pool, v_pool):
        n = len(pool)
        left = {}
        right = {}
        for i in range(n):
            for j in range(n):
                left[i, j] = pool[i] * pool[j]
        for i in range(n):
            for j in range(n):
                ab = left[i, j]
                for k in range(n):
                    if ab * pool[k] != pool[i] * left[j, k]:
                        return False, "associativity fails at (%d,%d,%d)" % (i, j, k)
                    triples += 1
    for word, want in (
        ("x0 x0^-1", True),
        ("pi1 pi1", True),
        ("x1 x0^-1 x0^-1 x1^-1 x0 x0 x1^-1 x0^-1 x1 x0", True),
    ):
        if check_relation(word) != want:
            return False, "relation check %r" % word
    return True, "%d triples, inverses, relator words" % triples


def _lemma_3_1_suite(g):
    for v in g.vertices:
        p = v.picture
        downs = _downsets(len(p.transistors), p.parents, p.children)
        images = {}
        for s in downs:
            q, _prov = sub_picture(p, s)
            images[s] = Vertex(q)
        if len({u.key for u in images.values()}) != len(downs):
            return "downset map not injective at %s" % v.key_text
        for s, u in images.items():
            if not vertex_leq(u, v):
                return "downset image not below the vertex"
        for s1 in downs:
            for s2 in downs:
                if (s1 <= s2) != vertex_leq(images[s1], images[s2]):
                    return "order preservation fails at %s" % v.key_text
        if len(initial_subsets(v)) != len(downs):
            return "initial subset count mismatch"
    return None


def criterion_3_order_and_metric():
    for variant, radius in ((PLANAR, 4), (BRAIDED, 3)):
        g = ball("x", radius, variant)
        base = base_vertex("x", variant)
        bad = _lemma_3_1_suite(g)
        if bad:
            return False, "%s: %s" % (variant, bad)
        for v in g.vertices:
            if edge_distance(base, v) != len(v.picture.transistors):
                return False, "%s: distance to base is not the size" % variant
        for v in g.vertices:
            for w in g.vertices:
                bd = bfs_distance(g, v, w)
                if bd is not None and bd != edge_distance(v, w):
                    return False, "%s: BFS and hyperplane metric differ" % variant
    return True, "ball(x,4) planar and ball(x,3) braided"


def _upward_vertices(v, depth):
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


def criterion_4_halfspaces():
    g = ball("x", 4, PLANAR)
    hyps = {}
    for v in g.vertices:
        for h in hyperplanes_below(v):
            hyps[h.key] = h
    hyps = [hyps[k] for k in sorted(hyps)]
    up_keys = {}
    for h in hyps:
        union = set()
        for u in _upward_vertices(h.min_vertex, 4):
            union |= u.hyperplane_keys
        up_keys[h.key] = union
    for h1 in hyps:
        for h2 in hyps:
            want_leq = all(
                separates(h1, v) for v in g.vertices if separates(h2, v)
            ) and separates(h1, h2.min_vertex)
            if halfspace_leq(h1, h2) != want_leq:
                return False, "half-space order disagrees with the ball oracle"
            want_meet = h1.key in up_keys[h2.key]
            got_meet = halfspaces_intersect(h1, h2)
            if got_meet != want_meet:
                return False, "half-space intersection disagrees with the oracle"
            if got_meet:
                w = lub(h1.min_vertex, h2.min_vertex)
                if w is None or not (separates(h1, w) and separates(h2, w)):
                    return False, "intersection without a separated witness"
    return True, "%d hyperplanes, all pairs" % len(hyps)


def criterion_5_grid_identities():
    x0, x1 = f_generator(0), f_generator(1)
    for m in range(2, 7):
        for n in range(2, 7):
            t = grid_tree(m, n)
            if act(x0, t) != grid_tree(m + 1, n - 1):
                return False, "x0 moves T_{%d,%d} incorrectly" % (m, n)
            if act(x1, t) != grid_tree_hat(m, n - 1):
                return False, "x1 moves T_{%d,%d} incorrectly" % (m, n)
            if edge_distance(t, act(x0, t)) != 2 or edge_distance(t, act(x1, t)) != 2:
                return False, "translate not at distance 2 from T_{%d,%d}" % (m, n)
    for m in range(1, 5):
        for n in range(1, 5):
            if not link_condition_check(m, n):
                return False, "link condition fails at (%d,%d)" % (m, n)
    return True, "2<=m,n<=6 identities; links 1<=m,n<=4"


def criterion_6_fixed_profiles(depth=12):
    x0, x1 = f_generator(0), f_generator(1)
    for g, name in ((x0, "x0"), (x1, "x1")):
        for kind in PROFILE_KINDS:
            if not is_fixed_to_depth(g, kind, depth):
                return False, "%s does not fix %s at depth %d" % (name, kind, depth)
    case2 = case2_profile(depth)
    moved = act_profile(x0, case2)
    if profiles_equal_to_depth(moved, case2, 3):
        return False, "the attached-right-vine pattern is not moved by x0"
    tent = tent_profile(depth)
    moved = act_profile(x1, tent)
    if profiles_equal_to_depth(moved, tent, 3):
        return False, "the merge-tent pattern is not moved by x1"
    if validate_profile(impossible_solid_profile()).ok:
        return False, "the blocked-solid pattern validates"
    return True, "four kinds fixed by x0,x1 at depth %d; eliminations move" % depth


def criterion_7_rotation_profiles(depth=12):
    pi1, pi2 = t_rotation(1), t_rotation(2)
    for kind in ("L", "R", "LR"):
        if is_fixed_to_depth(pi1, kind, depth):
            return False, "pi1 should move %s" % kind
    if not is_fixed_to_depth(pi1, "INF", depth):
        return False, "pi1 should fix INF"
    if not is_fixed_to_depth(pi2, "INF", depth):
        return False, "pi2 should fix INF"
    return True, "pi1 moves L,R,LR and fixes INF; pi2 fixes INF (depth %d)" % depth


def criterion_8_stabilizers():
    pi1, pi2 = t_rotation(1), t_rotation(2)
    for variant in (CYCLIC, BRAIDED):
        t1 = full_tree(1, variant)
        if act(pi1, t1) != t1:
            return False, "pi1 does not stabilize T1 in %s" % variant
        t2 = full_tree(2, variant)
        if act(pi2, t2) != t2:
            return False, "pi2 does not stabilize T2 in %s" % variant
    t2 = full_tree(2, CYCLIC)
    t3 = full_tree(3, CYCLIC)
    cubes = [
        c
        for c in cubes_at(t2)
        if c.dimension == 4 and c.min_corner() == t2 and c.max_corner() == t3
    ]
    if len(cubes) != 1:
        return False, "expected a unique 4-cube between T2 and T3"
    cube = cubes[0]
    addr = caret_address_map(cube.picture)
    perm = {}
    for w in cube.whites:
        corner = cube.corner(cube.whites - {w})
        image = act(pi2, corner)
        missing = full_carets(3) - image.picture.caret_addresses
        if len(missing) != 1:
            return False, "white corner image is not a corner"
        perm[addr[w]] = next(iter(missing))
    seen = set()
    a = min(perm)
    for _ in range(4):
        seen.add(a)
        a = perm[a]
    if len(seen) != 4 or a != min(perm):
        return False, "pi2 does not 4-cycle the white transistors"
    return True, "pi1.T1=T1, pi2.T2=T2, 4-cube T2->T3, whites 4-cycled"


def criterion_9_decomposition(n_trees=200, seed=909):
    rng = random.Random(seed)
    for i in range(n_trees):
        t = random_all_ones_tree(rng)
        a, b, c, total = displacement_decomposition(t)
        direct = displacement_squared(t)
        if total != direct:
            return False, "decomposition differs from the direct route at %d" % i
        if not (a >= 2 and c >= 1 and total >= 3):
            return False, "lower bounds fail at %d" % i
    return True, "%d all-ones trees, exact agreement" % n_trees


def criterion_10_search():
    limit = math.sqrt(2)
    for m in (1, 2, 3, 4):
        t = search_low_displacement(m, limit)
        if t is None:
            return False, "no witness found for m=%d" % m
        d2 = displacement_squared(t)
        z2 = displacement_squared_by_zones(t)
        if abs(d2 - z2) > 1e-12:
            return False, "the two displacement routes disagree at m=%d" % m
        if math.sqrt(d2) > limit + 1e-12:
            return False, "witness exceeds the bound at m=%d" % m
        if m == 1 and d2 > 1.5 + 1e-12:
            return False, "m=1 witness above sqrt(3/2)"
    return True, "witnesses for m=1..4, dual-route verified"


def criterion_11_embedding():
    g = ball("x", 4, PLANAR)
    base = base_vertex("x")
    if rho_vertex(base).entries != ():
        return False, "the base vertex does not map to zero"
    for v in g.vertices:
        for w in g.vertices:
            d2 = l2_distance_squared(rho_vertex(v), rho_vertex(w))
            if abs(d2 - edge_distance(v, w)) > 1e-12:
                return False, "embedding norm disagrees with the separation count"
    x0 = f_generator(0)
    checked = 0
    for carets in all_caret_sets(5):
        if "" not in carets or "1" not in carets:
            continue
        v = vertex_of(tree_picture(carets))
        t = labelled_tree_of_vertex(v)
        lhs = rho_vertex(act(x0, v)).as_dict
        rhs = x0_action_tree(t).vector().as_dict
        if lhs != rhs:
            return False, "x0-naturality fails on %s" % sorted(carets)
        checked += 1
    return True, "ball(x,4) isometry; x0-naturality on %d tree vertices" % checked


CRITERIA = (
    ("confluent normal forms", criterion_1_confluence),
    ("group structure", criterion_2_group_structure),
    ("order and metric", criterion_3_order_and_metric),
    ("half-space combinatorics", criterion_4_halfspaces),
    ("grid identities and links", criterion_5_grid_identities),
    ("fixed profiles", criterion_6_fixed_profiles),
    ("rotation profiles", criterion_7_rotation_profiles),
    ("stabilizers and the 4-cube", criterion_8_stabilizers),
    ("displacement decomposition", criterion_9_decomposition),
    ("low-displacement search", criterion_10_search),
    ("embedding consistency", criterion_11_embedding),
)


def run_all(depth=12, report=print):
    results = []
    for i, (name, func) in enumerate(CRITERIA, start=1):
        t0 = time.time()
        if func in (criterion_6_fixed_profiles, criterion_7_rotation_profiles):
            ok, detail = func(depth)
        else:
            ok, detail = func()
        res = CriterionResult(i, name, ok, detail, time.time() - t0)
        results.append(res)
        if report:
            report(res.line())
    return results
