"""Truncated profiles: canonical families, validity, the action, fixedness."""

import pytest

from squier.complex import lub
from squier.profile import (
    FREE,
    OPEN,
    SOLID,
    DepthMarginError,
    act_profile,
    canonical_profile,
    hyperplanes_of_profile,
    is_fixed_to_depth,
    make_tree_profile,
    parse_profile_bracket,
    profile_bracket,
    profiles_equal_to_depth,
    solid_extension_feasible,
    truncate_profile,
    validate_profile,
    PROFILE_KINDS,
)
from squier.thompson import f_generator, t_rotation
from squier.trees import leaves_of, vine
from squier.verify import case2_profile, impossible_solid_profile, tent_profile


def marker_of(tp, leaf):
    from squier.profile import _bottom_sources
    from squier.trees import caret_address_map

    addr = caret_address_map(tp.picture)
    for i, src in enumerate(_bottom_sources(tp.picture)):
        a = "" if src[0] == "T" else addr[src[1]] + str(src[2])
        if a == leaf:
            return tp.markers[i]
    raise KeyError(leaf)


def test_right_vine_profile_markers():
    tp = canonical_profile("R", 2)
    assert tp.picture.caret_addresses == {"", "1", "11"}
    assert marker_of(tp, "0") == OPEN
    assert marker_of(tp, "10") == OPEN
    assert marker_of(tp, "110") == OPEN
    assert marker_of(tp, "111") == SOLID
    assert profile_bracket(tp) == "(o (o (o s)))"


def test_double_vine_profile_at_depth_one():
    tp = canonical_profile("LR", 1)
    assert tp.picture.caret_addresses == {"", "0", "1"}
    assert marker_of(tp, "00") == SOLID
    assert marker_of(tp, "11") == SOLID
    assert marker_of(tp, "01") == OPEN
    assert marker_of(tp, "10") == OPEN


def test_full_profile_counts():
    tp = canonical_profile("INF", 3)
    assert tp.transistor_count() == 15
    assert all(m == SOLID for m in tp.markers)


def test_validate_canonical_profiles():
    for kind in PROFILE_KINDS:
        assert validate_profile(canonical_profile(kind, 4)).ok


def test_validate_rejects_open_maximal():
    tp = parse_profile_bracket("(o o)")
    rep = validate_profile(tp)
    assert not rep.ok
    assert "maximal" in rep.first()


def test_validate_rejects_blocked_solid_wire():
    rep = validate_profile(impossible_solid_profile())
    assert not rep.ok
    assert any("solid" in msg for msg in rep.failures)


def test_solid_extension_examples():
    assert solid_extension_feasible(canonical_profile("R", 3))
    assert not solid_extension_feasible(impossible_solid_profile())
    vacuous = parse_profile_bracket("(o (o ?))", depth=1)
    assert solid_extension_feasible(vacuous)


def test_act_x0_on_right_vine():
    x0 = f_generator(0)
    for d in (6, 9, 12):
        tp = canonical_profile("R", d)
        moved = act_profile(x0, tp)
        # one exposed caret is stripped, leaving the vine one level short
        assert moved.picture.caret_addresses == vine("R", d - 1)
        assert profiles_equal_to_depth(moved, tp, d - 4)


def test_act_x0_on_full_tree():
    x0 = f_generator(0)
    tp = canonical_profile("INF", 8)
    moved = act_profile(x0, tp)
    assert profiles_equal_to_depth(moved, canonical_profile("INF", 8), 4)


def test_act_pi1_swings_the_vine():
    pi1 = t_rotation(1)
    tp = canonical_profile("R", 8)
    moved = act_profile(pi1, tp)
    bracket = profile_bracket(moved)
    assert bracket is not None and bracket.endswith(" o)")
    assert not profiles_equal_to_depth(moved, tp, 1)


def test_act_depth_margin_errors():
    x1 = f_generator(1)
    with pytest.raises(DepthMarginError):
        act_profile(x1, canonical_profile("R", 6))
    with pytest.raises(DepthMarginError):
        is_fixed_to_depth(x1, "R", 6)


def test_profiles_equal_requires_depth():
    with pytest.raises(DepthMarginError):
        profiles_equal_to_depth(
            canonical_profile("R", 3), canonical_profile("R", 8), 5
        )


def test_truncation_coherence():
    for kind in PROFILE_KINDS:
        deep = canonical_profile(kind, 7)
        for d in (1, 2, 4, 5):
            shallow = canonical_profile(kind, d)
            assert profiles_equal_to_depth(deep, shallow, d)
            cut = truncate_profile(deep, d)
            assert cut.struct_key() == truncate_profile(shallow, d).struct_key()


def test_mirror_profiles_differ_at_the_root():
    assert not profiles_equal_to_depth(
        canonical_profile("L", 5), canonical_profile("R", 5), 1
    )


def test_x1_fixes_left_vine_at_contract_depth():
    x1 = f_generator(1)
    for d in (8, 10, 12):
        tp = canonical_profile("L", d)
        moved = act_profile(x1, tp)
        assert profiles_equal_to_depth(moved, tp, d - 6)


def test_fixedness_of_the_four_profiles():
    x0, x1 = f_generator(0), f_generator(1)
    assert is_fixed_to_depth(x0, "R", 10)
    assert is_fixed_to_depth(x1, "R", 10)
    for kind in PROFILE_KINDS:
        for d in range(7, 17):
            assert is_fixed_to_depth(x0, kind, d)
            assert is_fixed_to_depth(x1, kind, d)


def test_rotations_move_the_vines():
    pi1 = t_rotation(1)
    for kind in ("L", "R", "LR"):
        assert not is_fixed_to_depth(pi1, kind, 12)
        tp = canonical_profile(kind, 12)
        assert not profiles_equal_to_depth(act_profile(pi1, tp), tp, 2)
    assert is_fixed_to_depth(pi1, "INF", 12)
    assert is_fixed_to_depth(t_rotation(2), "INF", 12)


def test_action_compatibility():
    x0, x1 = f_generator(0), f_generator(1)
    pairs = ((x0, x0), (x0, x1), (x1, x0), (x0.inverse(), x0))
    for g, h in pairs:
        gh = g * h
        for kind in ("R", "INF"):
            tp = canonical_profile(kind, 14)
            two_steps = act_profile(g, act_profile(h, tp))
            one_step = act_profile(gh, tp)
            depth = min(two_steps.depth, one_step.depth)
            assert profiles_equal_to_depth(two_steps, one_step, depth)


def test_case2_pattern_moved_by_x0():
    tp = case2_profile(12)
    assert validate_profile(tp).ok
    moved = act_profile(f_generator(0), tp)
    assert not profiles_equal_to_depth(moved, tp, 3)
    # the wire that was open below the root now attaches
    assert marker_of(tp, "0") == OPEN
    assert profile_bracket(moved).startswith("(o ((")


def test_tent_pattern_moved_by_x1():
    tp = tent_profile(12)
    assert validate_profile(tp).ok
    moved = act_profile(f_generator(1), tp)
    assert not profiles_equal_to_depth(moved, tp, 3)
    # the mismatch appears among transistor types at height <= 3:
    # the original has its merge at height 3, the image a caret instead
    orig3 = truncate_profile(tp, 3)
    new3 = truncate_profile(moved, 3)
    count_rev = lambda p: sum(1 for _rel, fwd in p.picture.transistors if not fwd)
    assert count_rev(orig3) != count_rev(new3)


def test_hyperplanes_of_profile_addresses():
    hs = hyperplanes_of_profile(canonical_profile("INF", 2))
    assert sorted(h.address for h in hs) == ["", "0", "00", "01", "1", "10", "11"]
    hs = hyperplanes_of_profile(canonical_profile("R", 3))
    assert sorted(h.address for h in hs) == ["", "1", "11", "111"]


def test_profile_halfspaces_are_pairwise_bounded():
    for kind in PROFILE_KINDS:
        hs = sorted(
            hyperplanes_of_profile(canonical_profile(kind, 3)),
            key=lambda h: h.address,
        )
        for h1 in hs:
            for h2 in hs:
                assert lub(h1.min_vertex, h2.min_vertex) is not None
        # triple meets via iterated least upper bounds
        for h1 in hs:
            for h2 in hs:
                for h3 in hs:
                    w = lub(h1.min_vertex, h2.min_vertex)
                    assert w is not None and lub(w, h3.min_vertex) is not None


def test_bracket_round_trip():
    for kind in PROFILE_KINDS:
        tp = canonical_profile(kind, 3)
        back = parse_profile_bracket(profile_bracket(tp), depth=tp.depth)
        assert back.struct_key() == tp.struct_key()


def test_free_markers_parse_and_guard():
    tp = parse_profile_bracket("(? (o s))")
    assert FREE in tp.markers
    assert tp.depth == 1
