"""Core picture calculus: construction, concatenation, dipoles, reduction."""

import random

import pytest

from squier.picture import (
    BRAIDED,
    CYCLIC,
    PLANAR,
    PRES_ABCD,
    PRES_XX,
    FrameMismatchError,
    PictureError,
    canonical_serialize,
    concatenate,
    equal_mod_dipoles,
    find_dipoles,
    identity_picture,
    insert_dipole,
    invert_picture,
    make_picture,
    parse_picture,
    promote_variant,
    reduce_picture,
    remove_dipole,
    reduce_picture_traced,
)
from squier.thompson import f_generator, t_rotation
from squier.trees import tree_picture


def caret():
    return tree_picture({""})


def test_identity_pictures():
    p = identity_picture(PRES_XX, "x")
    assert len(p.transistors) == 0
    assert len(p.wires) == 1
    assert p.top == p.bottom == "x"

    p3 = identity_picture(PRES_XX, "xxx")
    assert len(p3.transistors) == 0
    assert len(p3.wires) == 3

    pa = identity_picture(PRES_ABCD, "acbd")
    assert len(pa.wires) == 4
    assert pa.bottom == "acbd"


def test_identity_rejects_bad_symbols():
    with pytest.raises(PictureError):
        identity_picture(PRES_XX, "xy")
    with pytest.raises(PictureError):
        identity_picture(PRES_XX, "")


def test_concatenate_splits_then_merges():
    # an (x, xxx)-picture over an (xxx, x)-picture gives an (x, x)-picture
    split2 = tree_picture({"", "1"})
    merge2 = invert_picture(split2)
    q = concatenate(split2, merge2)
    assert (q.top, q.bottom) == ("x", "x")
    assert len(q.transistors) == len(split2.transistors) + len(merge2.transistors)


def test_concatenate_identity_is_neutral():
    p = tree_picture({"", "0"})
    assert concatenate(identity_picture(PRES_XX, "x"), p) == p
    assert concatenate(p, identity_picture(PRES_XX, p.bottom)) == p


def test_concatenate_frame_mismatch():
    with pytest.raises(FrameMismatchError):
        concatenate(caret(), caret())


def test_generator_times_inverse_has_eight_transistors():
    x0 = f_generator(0)
    q = concatenate(x0.picture, invert_picture(x0.picture))
    assert len(q.transistors) == 8
    assert reduce_picture(q) == identity_picture(PRES_XX, "x")


def test_invert_identity_and_caret():
    ident = identity_picture(PRES_XX, "x")
    assert invert_picture(ident) == ident
    c = caret()
    ic = invert_picture(c)
    assert (ic.top, ic.bottom) == ("xx", "x")
    assert ic.transistors == ((0, False),)
    assert invert_picture(ic) == c


def test_find_dipoles_identity_empty():
    assert find_dipoles(identity_picture(PRES_XX, "xx")) == []


def test_find_dipoles_smallest():
    q = concatenate(caret(), invert_picture(caret()))
    occs = find_dipoles(q)
    assert len(occs) == 1
    assert reduce_picture(q) == identity_picture(PRES_XX, "x")


def test_crossed_pairing_is_not_a_dipole():
    crossed = make_picture(
        PRES_XX,
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
    assert find_dipoles(crossed) == []
    assert crossed.is_reduced


def multi_relation_scene():
    """An (acbd, abba)-picture whose lower pair is wired but cancels nothing.

    The lower two transistors have top label cd over bottom label ba, so
    they fail the dipole label condition even though they are fully wired
    in order.
    """
    return make_picture(
        PRES_ABCD,
        PLANAR,
        "acbd",
        [(1, True), (0, False), (2, True)],
        [
            (("T", 0), ("B", 0)),
            (("T", 1), ("t", 0, 0)),
            (("T", 2), ("t", 0, 1)),
            (("b", 0, 0), ("B", 1)),
            (("b", 0, 1), ("t", 1, 0)),
            (("T", 3), ("t", 1, 1)),
            (("b", 1, 0), ("t", 2, 0)),
            (("b", 1, 1), ("t", 2, 1)),
            (("b", 2, 0), ("B", 2)),
            (("b", 2, 1), ("B", 3)),
        ],
    )


def test_reduce_keeps_wired_non_dipole_pair():
    target = multi_relation_scene()
    assert find_dipoles(target) == []
    grown = insert_dipole(target, ("T", 1), 1, True)
    assert len(find_dipoles(grown)) >= 1
    assert reduce_picture(grown) == target
    # the cd-over-ba pair survives
    reduced = reduce_picture(grown)
    kinds = sorted(reduced.transistors)
    assert (0, False) in kinds and (2, True) in kinds


def test_reduce_idempotent_on_identity():
    ident = identity_picture(PRES_XX, "xx")
    assert reduce_picture(ident) == ident


def test_insert_dipole_examples():
    ident = identity_picture(PRES_XX, "x")
    q = insert_dipole(ident, ("T", 0), 0, True)
    assert len(q.transistors) == 2
    assert len(find_dipoles(q)) >= 1
    assert reduce_picture(q) == ident


def test_insert_dipole_label_mismatch():
    ident = identity_picture(PRES_ABCD, "a")
    with pytest.raises(PictureError):
        insert_dipole(ident, ("T", 0), 1, True)  # needs top word cb


def random_picture(pres, word, variant, k, rng):
    p = identity_picture(pres, word, variant)
    sides = [(r, f) for r in range(len(pres.relations)) for f in (True, False)]
    for _ in range(k):
        wires = [s for s, _d in p.wires]
        rng.shuffle(wires)
        rng.shuffle(sides)
        placed = False
        for w in wires:
            for rel, fwd in sides:
                try:
                    p = insert_dipole(p, w, rel, fwd)
                    placed = True
                    break
                except PictureError:
                    continue
            if placed:
                break
    return p


def test_insert_then_reduce_round_trips():
    rng = random.Random(5)
    for i in range(100):
        pres = PRES_XX if i % 2 else PRES_ABCD
        word = "".join(rng.choice(pres.alphabet) for _ in range(rng.randint(1, 3)))
        variant = rng.choice((PLANAR, CYCLIC, BRAIDED))
        p = random_picture(pres, word, variant, rng.randint(1, 5), rng)
        base = reduce_picture(p)
        wires = [s for s, _d in p.wires]
        w = rng.choice(wires)
        for rel in range(len(pres.relations)):
            for fwd in (True, False):
                try:
                    q = insert_dipole(p, w, rel, fwd)
                except PictureError:
                    continue
                assert reduce_picture(q) == base


def test_canonical_serialize_identity_fixed_form():
    text = canonical_serialize(identity_picture(PRES_XX, "x"))
    assert text == (
        "picture v1\n"
        "presentation: x ; x=xx\n"
        "variant: planar\n"
        "top: x\n"
        "wire x frame.top.1 -> frame.bot.1\n"
    )


def test_canonical_serialize_ignores_transistor_relabeling():
    p = tree_picture({"", "0", "1"})
    # rebuild with transistor ids permuted
    perm = {0: 2, 1: 0, 2: 1}

    def remap(port):
        if port[0] in ("t", "b"):
            return (port[0], perm[port[1]], port[2])
        return port

    q = make_picture(
        p.pres,
        p.variant,
        p.top,
        [p.transistors[k] for k in sorted(perm, key=perm.get)],
        [(remap(s), remap(d)) for s, d in p.wires],
    )
    assert canonical_serialize(p) == canonical_serialize(q)
    assert p == q


def test_distinct_reduced_pictures_serialize_differently():
    a = multi_relation_scene()
    b = reduce_picture(
        make_picture(
            PRES_ABCD,
            PLANAR,
            "acbd",
            [(1, True), (0, False)],
            [
                (("T", 0), ("B", 0)),
                (("T", 1), ("t", 0, 0)),
                (("T", 2), ("t", 0, 1)),
                (("b", 0, 0), ("B", 1)),
                (("b", 0, 1), ("t", 1, 0)),
                (("T", 3), ("t", 1, 1)),
                (("b", 1, 0), ("B", 2)),
                (("b", 1, 1), ("B", 3)),
            ],
        )
    )
    assert a.bottom != b.bottom or canonical_serialize(a) != canonical_serialize(b)


def test_parse_round_trip():
    rng = random.Random(11)
    for _ in range(20):
        p = random_picture(PRES_ABCD, "ab", PLANAR, rng.randint(0, 4), rng)
        assert parse_picture(canonical_serialize(p)) == p


def test_equal_mod_dipoles():
    p = tree_picture({"", "1"})
    q = insert_dipole(p, ("T", 0), 0, True)
    assert equal_mod_dipoles(p, q)

    x0, x1 = f_generator(0), f_generator(1)
    ab = concatenate(x0.picture, x1.picture)
    ba = concatenate(x1.picture, x0.picture)
    assert not equal_mod_dipoles(ab, ba)

    pi1 = t_rotation(1)
    square = concatenate(pi1.picture, pi1.picture)
    ident = identity_picture(PRES_XX, "x", CYCLIC)
    assert equal_mod_dipoles(square, ident)


def test_equal_mod_dipoles_frame_mismatch():
    with pytest.raises(FrameMismatchError):
        equal_mod_dipoles(caret(), identity_picture(PRES_XX, "x"))


def test_confluence_random_orders():
    rng = random.Random(77)
    for i in range(60):
        pres = PRES_XX if i % 2 else PRES_ABCD
        word = "".join(rng.choice(pres.alphabet) for _ in range(rng.randint(1, 3)))
        p = random_picture(pres, word, PLANAR, rng.randint(2, 7), rng)
        want = canonical_serialize(reduce_picture(p))
        for _ in range(6):
            q = p
            while True:
                occs = find_dipoles(q)
                if not occs:
                    break
                q = remove_dipole(q, rng.choice(occs))
            assert canonical_serialize(q) == want


def test_reduce_monotone_size():
    rng = random.Random(13)
    for _ in range(30):
        p = random_picture(PRES_XX, "x", PLANAR, rng.randint(1, 6), rng)
        q = p
        while True:
            occs = find_dipoles(q)
            if not occs:
                break
            r = remove_dipole(q, occs[0])
            assert len(r.transistors) == len(q.transistors) - 2
            q = r
        assert len(q.transistors) <= len(p.transistors)


def test_transistor_order_is_acyclic_everywhere():
    rng = random.Random(23)
    for _ in range(40):
        p = random_picture(PRES_ABCD, "cb", rng.choice((PLANAR, BRAIDED)), 4, rng)
        h = p.heights  # raises on a cycle
        for k in range(len(p.transistors)):
            assert k not in p.parents[k]
            assert h[k] >= 1


def test_dipole_locality():
    # removing a dipole preserves the order relation among the survivors
    rng = random.Random(31)
    for _ in range(40):
        p = random_picture(PRES_XX, "x", PLANAR, rng.randint(2, 6), rng)
        occs = find_dipoles(p)
        if not occs:
            continue
        occ = occs[0]
        dead = {occ.upper, occ.lower}

        def renum(k):
            return k - (k > occ.upper) - (k > occ.lower)

        q = remove_dipole(p, occ)
        for t in range(len(p.transistors)):
            if t in dead:
                continue
            down_before = {renum(s) for s in p.downset(t) if s not in dead}
            assert down_before == set(q.downset(renum(t)))


def test_variant_promotion():
    c = caret()
    cc = promote_variant(c, CYCLIC)
    assert cc.variant == CYCLIC
    with pytest.raises(PictureError):
        promote_variant(cc, PLANAR)


def test_traced_reduce_reports_survivors():
    x0 = f_generator(0)
    q = concatenate(x0.picture, invert_picture(x0.picture))
    reduced, survivors = reduce_picture_traced(q)
    assert len(reduced.transistors) == len(survivors) == 0
