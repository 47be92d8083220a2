"""Group elements, the action on vertices, grid trees, link conditions."""

import random

import pytest

from squier.complex import edge_distance, vertex_of
from squier.picture import (
    BRAIDED,
    CYCLIC,
    PLANAR,
    PRES_XX,
    concatenate,
    identity_picture,
    invert_picture,
    promote_variant,
    reduce_picture,
)
from squier.thompson import (
    GroupElement,
    ThompsonError,
    TreePair,
    act,
    check_relation,
    compose_tree_pairs,
    element_from_tree_pair,
    evaluate_word,
    f_generator,
    full_tree,
    grid_tree,
    grid_tree_hat,
    group_identity,
    identity_pair,
    link_condition_check,
    t_rotation,
    v_element,
)
from squier.trees import full_carets, leaves_of
from squier.verify import random_tree_pair


def test_generator_shapes():
    assert f_generator(0).transistor_count() == 4
    assert f_generator(1).transistor_count() == 6
    assert f_generator(0).variant == PLANAR


def test_generator_inverses():
    for i in (0, 1):
        g = f_generator(i)
        assert (g * g.inverse()).is_identity()
        assert (g.inverse() * g).is_identity()


def test_grid_action_of_x0():
    x0 = f_generator(0)
    assert act(x0, grid_tree(2, 2)) == grid_tree(3, 1)
    assert act(x0, grid_tree(4, 3)) == grid_tree(5, 2)
    for m in range(2, 7):
        for n in range(2, 7):
            assert act(x0, grid_tree(m, n)) == grid_tree(m + 1, n - 1)


def test_grid_action_of_x1():
    x1 = f_generator(1)
    assert act(x1, grid_tree(2, 2)) == grid_tree_hat(2, 1)
    for m in range(2, 7):
        for n in range(2, 7):
            assert act(x1, grid_tree(m, n)) == grid_tree_hat(m, n - 1)


def test_x1_adds_the_caret_at_10():
    x1 = f_generator(1)
    for m in range(2, 6):
        for n in range(2, 6):
            moved = act(x1, grid_tree(m, n))
            want = frozenset(grid_tree(m, n - 1).picture.caret_addresses) | {"10"}
            assert moved.picture.caret_addresses == want


def test_translate_is_two_away():
    for g in (f_generator(0), f_generator(1)):
        for m in range(2, 7):
            for n in range(2, 7):
                t = grid_tree(m, n)
                assert edge_distance(t, act(g, t)) == 2


def test_caret_sets_differ_by_two_under_x0():
    for m in range(2, 6):
        for n in range(2, 6):
            before = grid_tree(m, n).picture.caret_addresses
            after = grid_tree(m + 1, n - 1).picture.caret_addresses
            assert before ^ after == {"0" * (m + 1), "1" * n}


def test_rotation_orders():
    for k in range(1, 5):
        pi = t_rotation(k)
        power = pi
        for step in range(1, 2 ** k):
            assert not power.is_identity(), (k, step)
            power = power * pi
        assert power.is_identity()


def test_rotation_stabilizers():
    pi1, pi2 = t_rotation(1), t_rotation(2)
    for variant in (CYCLIC, BRAIDED):
        t1 = full_tree(1, variant)
        t2 = full_tree(2, variant)
        assert act(pi1, t1) == t1
        assert act(pi2, t2) == t2


def test_pi1_squared_is_identity_and_reduces():
    pi1 = t_rotation(1)
    square = reduce_picture(concatenate(pi1.picture, pi1.picture))
    assert square == identity_picture(PRES_XX, "x", CYCLIC)


def test_v_element_examples():
    assert v_element(identity_pair()).is_identity()
    swap = TreePair(frozenset({""}), frozenset({""}), (1, 0))
    included = GroupElement(promote_variant(t_rotation(1).picture, BRAIDED))
    assert v_element(swap) == included


def test_tree_pair_constraints():
    with pytest.raises(ThompsonError):
        TreePair(frozenset({""}), frozenset(), (0,))
    with pytest.raises(ThompsonError):
        element_from_tree_pair(
            TreePair(frozenset({""}), frozenset({""}), (1, 0)), PLANAR
        )


def test_tree_pair_composition_matches_picture_route():
    rng = random.Random(404)
    for _ in range(100):
        tp1 = random_tree_pair(rng, permuted=True)
        tp2 = random_tree_pair(rng, permuted=True)
        direct = v_element(compose_tree_pairs(tp1, tp2))
        via_pictures = v_element(tp1) * v_element(tp2)
        assert direct == via_pictures


def test_act_identity_and_compatibility():
    rng = random.Random(505)
    from squier.verify import random_f_element, random_tree_vertex

    for _ in range(100):
        g = random_f_element(rng)
        h = random_f_element(rng)
        v = random_tree_vertex(rng)
        assert act(group_identity(), v) == v
        assert act(g, act(h, v)) == act(g * h, v)


def test_act_promotes_variants():
    pi1 = t_rotation(1)
    vb = full_tree(1, BRAIDED)
    out = act(pi1, vb)
    assert out.variant == BRAIDED


def test_word_parsing_and_relations():
    assert check_relation("x0 x0^-1")
    assert check_relation("pi1 pi1")
    assert not check_relation("x0")
    assert not check_relation("x0 x1")
    # [x0 x1^-1, x0^-1 x1 x0] written out in full
    comm = "x1 x0^-1 x0^-1 x1^-1 x0 x0 x1^-1 x0^-1 x1 x0"
    assert check_relation(comm)
    assert evaluate_word("").is_identity()
    with pytest.raises(ThompsonError):
        evaluate_word("zz")


def test_full_tree_counts():
    assert full_tree(0).transistor_count() == 0
    assert full_tree(1).transistor_count() == 1
    assert full_tree(3).transistor_count() == 7
    assert full_tree(3).picture.caret_addresses == full_carets(3)


def test_grid_tree_base_cases():
    assert grid_tree(0, 0).picture.caret_addresses == {""}
    assert grid_tree(2, 0).picture.caret_addresses == {"", "0", "00"}
    with pytest.raises(ThompsonError):
        grid_tree_hat(1, 0)


def test_link_condition():
    assert link_condition_check(2, 2)
    assert link_condition_check(1, 3)
    for m in range(1, 5):
        for n in range(1, 5):
            assert link_condition_check(m, n)
