"""Concrete elements of F, T and V as pictures, and their action on vertices.

A group element based at x is a reduced (x,x)-picture.  Tree pairs
(domain tree, range tree, leaf permutation) realize the classical
generators: the picture stacks the range tree of forward carets on top of
the vertically inverted domain tree, leaf wires matched by the
permutation.  The action on a vertex stacks the element above the
vertex's picture and reduces dipoles.
"""

from dataclasses import dataclass
from functools import cached_property, lru_cache

from squier.complex import Vertex, cubes_at, edge_distance, neighbors, vertex_of
from squier.picture import (
    BRAIDED,
    CYCLIC,
    PLANAR,
    PRES_XX,
    PictureError,
    _make_trusted,
    common_variant,
    concatenate,
    identity_picture,
    invert_picture,
    promote_variant,
    reduce_picture,
)
from squier.trees import full_carets, is_caret_set, leaves_of, vine

MAX_ROTATION_DEPTH = 8
MAX_GRID_DEPTH = 64


class ThompsonError(ValueError):
    pass


@dataclass(frozen=True)
class TreePair:
    """A tree pair with a leaf matching: domain tree, range tree, leaf map.

    Trees are caret address sets with equal leaf counts.  leaf_map[i] is
    the domain leaf receiving the wire from range leaf i; it must be the
    identity for F(planar), a rotation for T(cyclic), and may be any
    permutation for V(braided).
    """

    domain: frozenset
    range_: frozenset
    leaf_map: tuple

    def __post_init__(self):
        if not is_caret_set(self.domain) or not is_caret_set(self.range_):
            raise ThompsonError("tree pair sides must be binary trees")
        n = len(leaves_of(self.domain))
        if len(leaves_of(self.range_)) != n:
            raise ThompsonError("leaf counts differ")
        if sorted(self.leaf_map) != list(range(n)):
            raise ThompsonError("leaf map must be a permutation of 0..%d" % (n - 1))

    def n_leaves(self):
        return len(self.leaf_map)


def identity_pair():
    return TreePair(frozenset(), frozenset(), (0,))


def _inverted_tree_wiring(carets, base_id, feed):
    """Wires of the vertically inverted tree built from reverse transistors.

    feed[i] is the source wiring into the i-th leaf (left to right).  The
    root's bottom wire is returned separately for the caller to place.
    """
    carets = frozenset(carets)
    ids = {a: base_id + i for i, a in enumerate(sorted(carets))}
    wires = []
    leaf_iter = iter(range(len(feed)))

    def build(addr):
        # returns the source port producing the single wire out of `addr`
        if addr in carets:
            k = ids[addr]
            left = build(addr + "0")
            right = build(addr + "1")
            wires.append((left, ("t", k, 0)))
            wires.append((right, ("t", k, 1)))
            return ("b", k, 0)
        return feed[next(leaf_iter)]

    root_src = build("")
    return wires, root_src, len(carets)


def element_from_tree_pair(pair, variant):
    """Assemble the (x,x)-picture of a tree pair and reduce it."""
    n = pair.n_leaves()
    rng = frozenset(pair.range_)
    dom = frozenset(pair.domain)
    if variant == PLANAR and pair.leaf_map != tuple(range(n)):
        raise ThompsonError("planar elements need the identity leaf map")
    if variant == CYCLIC:
        base = pair.leaf_map[0]
        if pair.leaf_map != tuple((base + i) % n for i in range(n)):
            raise ThompsonError("cyclic elements need a rotation leaf map")
    # range tree of forward carets
    rng_ids = {a: i for i, a in enumerate(sorted(rng))}
    wires = []

    def src_of(addr):
        if addr == "":
            return ("T", 0)
        return ("b", rng_ids[addr[:-1]], int(addr[-1]))

    for a in sorted(rng):
        wires.append((src_of(a), ("t", rng_ids[a], 0)))
    range_leaf_src = [src_of(leaf) for leaf in leaves_of(rng)]
    # wire range leaf i into domain leaf leaf_map[i]
    feed = [None] * n
    for i in range(n):
        feed[pair.leaf_map[i]] = range_leaf_src[i]
    if dom:
        inv_wires, root_src, n_dom = _inverted_tree_wiring(dom, len(rng), feed)
        wires.extend(inv_wires)
        wires.append((root_src, ("B", 0)))
    else:
        wires.append((feed[0], ("B", 0)))
    transistors = tuple((0, True) for _ in rng) + tuple((0, False) for _ in dom)
    pic = _make_trusted(PRES_XX, variant, "x", transistors, wires)
    return GroupElement(reduce_picture(pic))


@dataclass(frozen=True, eq=False)
class GroupElement:
    """A reduced (x,x)-picture under concatenation."""

    picture: object

    def __post_init__(self):
        if self.picture.top != "x" or self.picture.bottom != "x":
            raise ThompsonError("group elements are (x,x)-pictures")

    @property
    def variant(self):
        return self.picture.variant

    @cached_property
    def key(self):
        return self.picture.canonical_key()

    def __mul__(self, other):
        a, b = _promote_pair(self.picture, other.picture)
        return GroupElement(reduce_picture(concatenate(a, b)))

    def inverse(self):
        return GroupElement(invert_picture(self.picture))

    def is_identity(self):
        return not self.picture.transistors

    def transistor_count(self):
        return len(self.picture.transistors)

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        a, b = _promote_pair(self.picture, other.picture)
        return a.canonical_key() == b.canonical_key()

    def __hash__(self):
        return hash(self.picture.canonical_key("cut"))

    def __repr__(self):
        return "<GroupElement %d transistors %s>" % (
            len(self.picture.transistors),
            self.variant,
        )


def _promote_pair(p, q):
    target = common_variant(p, q)
    return promote_variant(p, target), promote_variant(q, target)


def group_identity(variant=PLANAR):
    return GroupElement(identity_picture(PRES_XX, "x", variant))


@lru_cache(maxsize=None)
def f_generator(i):
    """The standard generators of F as planar (x,x)-pictures.

    x0 has domain (. (. .)) and range ((. .) .); x1 has domain
    (. (. (. .))) and range (. ((. .) .)); both carry the identity leaf
    matching.
    """
    if i == 0:
        dom = frozenset({"", "1"})
        rng = frozenset({"", "0"})
        return element_from_tree_pair(TreePair(dom, rng, (0, 1, 2)), PLANAR)
    if i == 1:
        dom = frozenset({"", "1", "11"})
        rng = frozenset({"", "1", "10"})
        return element_from_tree_pair(TreePair(dom, rng, (0, 1, 2, 3)), PLANAR)
    raise ThompsonError("F generators are x0 and x1")


@lru_cache(maxsize=None)
def t_rotation(k):
    """The one-step rotation on 2^k leaves: a full tree over itself, shifted."""
    if not 1 <= k <= MAX_ROTATION_DEPTH:
        raise ThompsonError("rotation depth %d out of range" % k)
    tree = full_carets(k)
    n = 2 ** k
    shift = tuple((i + 1) % n for i in range(n))
    return element_from_tree_pair(TreePair(tree, tree, shift), CYCLIC)


def v_element(pair):
    """The braided element of a tree pair with an arbitrary leaf matching."""
    return element_from_tree_pair(pair, BRAIDED)


def compose_tree_pairs(p1, p2):
    """Tree-pair composition by common refinement (independent of pictures).

    The result represents the stacked product p1 * p2 and is not reduced;
    building its picture and reducing gives the product element.
    """
    a = p1
    b = p2
    # expand until a.domain == b.range_
    while True:
        target = frozenset(a.domain) | frozenset(b.range_)
        if frozenset(a.domain) == target and frozenset(b.range_) == target:
            break
        for addr in sorted(target):
            if addr not in a.domain:
                a = _expand_domain(a, addr)
            if addr not in b.range_:
                b = _expand_range(b, addr)
    lm = tuple(b.leaf_map[a.leaf_map[i]] for i in range(a.n_leaves()))
    return TreePair(b.domain, a.range_, lm)


def _leaf_index(carets, addr):
    return leaves_of(carets).index(addr)


def _expand_domain(pair, addr):
    """Insert a caret at a domain leaf and the matching range leaf."""
    d = _leaf_index(pair.domain, addr)
    i = pair.leaf_map.index(d)
    r_addr = leaves_of(pair.range_)[i]
    return _expand_at(pair, addr, r_addr)


def _expand_range(pair, addr):
    i = _leaf_index(pair.range_, addr)
    d_addr = leaves_of(pair.domain)[pair.leaf_map[i]]
    return _expand_at(pair, d_addr, addr)


def _expand_at(pair, d_addr, r_addr):
    dom = frozenset(pair.domain) | {d_addr}
    rng = frozenset(pair.range_) | {r_addr}
    d = _leaf_index(pair.domain, d_addr)
    i = pair.leaf_map.index(d)
    lm = []
    for j in range(pair.n_leaves()):
        if j == i:
            continue
        old = pair.leaf_map[j]
        lm.append((j if j < i else j + 1, old if old < d else old + 1))
    lm.append((i, d))
    lm.append((i + 1, d + 1))
    out = [None] * (pair.n_leaves() + 1)
    for j, v in lm:
        out[j] = v
    return TreePair(dom, rng, tuple(out))


# ---------------------------------------------------------------------------
# grid trees and the action


def grid_tree(m, n, variant=PLANAR):
    """Vertex of the tree with a root caret, m left and n right dangling carets."""
    if not (0 <= m <= MAX_GRID_DEPTH and 0 <= n <= MAX_GRID_DEPTH):
        raise ThompsonError("grid parameters out of range")
    carets = {""} | {"0" * i for i in range(1, m + 1)} | {"1" * j for j in range(1, n + 1)}
    from squier.trees import tree_picture

    return vertex_of(tree_picture(carets, variant))


def grid_tree_hat(m, n, variant=PLANAR):
    """grid_tree(m, n) with one extra caret at address 10."""
    if n < 1:
        raise ThompsonError("the extra caret needs the right vine nonempty")
    carets = {""} | {"0" * i for i in range(1, m + 1)} | {"1" * j for j in range(1, n + 1)}
    carets.add("10")
    from squier.trees import tree_picture

    return vertex_of(tree_picture(carets, variant))


def full_tree(m, variant=PLANAR):
    """Vertex of the full binary tree with 2^m - 1 carets."""
    if not 0 <= m <= 20:
        raise ThompsonError("full tree depth out of range")
    from squier.trees import tree_picture

    return vertex_of(tree_picture(full_carets(m), variant))


def act(g, v):
    """Stack g above v and reduce: the group action on vertices."""
    gp = g.picture
    vp = v.picture
    target = common_variant(gp, vp)
    gp = promote_variant(gp, target)
    vp = promote_variant(vp, target)
    return vertex_of(concatenate(gp, vp))


GENERATORS = ("x0", "x1", "pi1", "pi2", "pi3")


def parse_generator_word(text):
    """Parse a whitespace-separated word in x0 x1 pi1 pi2 pi3 with ^-1 suffixes."""
    out = []
    for token in text.split():
        inv = token.endswith("^-1")
        name = token[:-3] if inv else token
        if name == "x0":
            g = f_generator(0)
        elif name == "x1":
            g = f_generator(1)
        elif name.startswith("pi") and name[2:].isdigit():
            g = t_rotation(int(name[2:]))
        else:
            raise ThompsonError("unknown generator token %r" % token)
        out.append(g.inverse() if inv else g)
    return out


def evaluate_word(text):
    """The product of a generator word, applied left to right as stacked."""
    gs = parse_generator_word(text)
    if not gs:
        return group_identity()
    acc = gs[0]
    for g in gs[1:]:
        acc = acc * g
    return acc


def check_relation(text):
    """Whether a generator word reduces to the identity picture."""
    return evaluate_word(text).is_identity()


def link_condition_check(m, n):
    """No 2-cube joins opposite grid neighbors across grid_tree(m, n).

    Enumerates every 2-cube incident to the closed star of the grid tree
    and verifies that none contains both grid_tree(m, n-1) and
    grid_tree(m, n+1) among its corners, nor both grid_tree(m-1, n) and
    grid_tree(m+1, n).
    """
    if m < 1 or n < 1:
        raise ThompsonError("link check needs m, n >= 1")
    center = grid_tree(m, n)
    star = [center] + list(neighbors(center))
    seen = {}
    for v in star:
        for c in cubes_at(v, max_dim=2):
            if c.dimension == 2:
                seen.setdefault(c.key, c)
    pairs = (
        (grid_tree(m, n - 1), grid_tree(m, n + 1)),
        (grid_tree(m - 1, n), grid_tree(m + 1, n)),
    )
    for cube in seen.values():
        corner_keys = {u.key for _shaded, u in cube.corners()}
        for a, b in pairs:
            if a.key in corner_keys and b.key in corner_keys:
                return False
    return True
