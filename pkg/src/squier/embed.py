"""Sparse Hilbert-space embedding of the complex and the labelled-tree calculus.

A vertex maps to the 0/1 indicator of the hyperplanes separating it from
the base vertex; a point inside a cube additionally gives each white
transistor's hyperplane a coordinate in (0,1].  Over <x|x=xx> these
images are labelled binary trees: coefficient 1 on interior carets,
anything in (0,1] on maximal carets.  The generator x0 acts on labelled
trees by regrafting the three subtrees at addresses 0, 10 and 11.
"""

import math
from dataclasses import dataclass
from functools import cached_property

from squier.complex import Vertex
from squier.hyperplane import hyperplanes_below
from squier.trees import is_caret_set


class EmbedError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SparseVector:
    """Finitely supported map from hyperplane keys to reals in (0, 1]."""

    entries: tuple  # sorted ((key, coefficient), ...)

    @classmethod
    def from_dict(cls, d):
        items = []
        for key, val in d.items():
            if val == 0:
                continue
            if not 0 < val <= 1:
                raise EmbedError("coefficient %r outside (0, 1]" % val)
            items.append((key, float(val)))
        return cls(tuple(sorted(items)))

    @cached_property
    def as_dict(self):
        return dict(self.entries)

    def norm_squared(self):
        return sum(v * v for _k, v in self.entries)

    def __eq__(self, other):
        if not isinstance(other, SparseVector):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def render(self):
        def name(key):
            return "@%s" % key[1] if key[0] == "@" else str(key)

        return "[" + ", ".join("(%s, %g)" % (name(k), v) for k, v in self.entries) + "]"

    def __repr__(self):
        return "<SparseVector %d entries>" % len(self.entries)


def l2_distance_squared(a, b):
    da, db = a.as_dict, b.as_dict
    total = 0.0
    for k in da.keys() | db.keys():
        diff = da.get(k, 0.0) - db.get(k, 0.0)
        total += diff * diff
    return total


def l2_distance(a, b):
    """Euclidean distance between two sparse vectors."""
    return math.sqrt(l2_distance_squared(a, b))


def rho_vertex(v):
    """Indicator vector of the hyperplanes separating v from the base vertex."""
    return SparseVector.from_dict({key: 1.0 for key in v.hyperplane_keys})


def rho_cube_point(cube, coords):
    """Image of a cube point: shaded transistors weigh 1, whites their coordinate."""
    if set(coords) != set(cube.whites):
        raise EmbedError("coordinates must be keyed by the white transistors")
    from squier.complex import min_vertex_key
    from squier.picture import sub_picture

    p = cube.picture
    out = {}
    for k in range(len(p.transistors)):
        q, _prov = sub_picture(p, p.downset(k))
        key = min_vertex_key(q)
        if k in cube.whites:
            val = coords[k]
            if not 0 < val <= 1:
                raise EmbedError("cube coordinates lie in (0, 1]")
            out[key] = float(val)
        else:
            out[key] = 1.0
    return SparseVector.from_dict(out)


# ---------------------------------------------------------------------------
# labelled trees


@dataclass(frozen=True, eq=False)
class LabelledTree:
    """Binary tree with coefficients: 1 on interior carets, (0,1] on maximal."""

    coeffs: tuple  # sorted ((address, coefficient), ...)

    @classmethod
    def from_dict(cls, d):
        support = set(d)
        if not is_caret_set(support):
            raise EmbedError("support must be a downward-closed caret set")
        for a, val in d.items():
            if not 0 < val <= 1:
                raise EmbedError("coefficient %r outside (0, 1]" % val)
            maximal = (a + "0") not in support and (a + "1") not in support
            if not maximal and val != 1:
                raise EmbedError("interior caret %r must carry coefficient 1" % a)
        return cls(tuple(sorted((a, float(v)) for a, v in d.items())))

    @cached_property
    def as_dict(self):
        return dict(self.coeffs)

    def support(self):
        return frozenset(a for a, _v in self.coeffs)

    def is_all_ones(self):
        return all(v == 1.0 for _a, v in self.coeffs)

    def vector(self):
        return SparseVector.from_dict({("@", a): v for a, v in self.coeffs})

    def __eq__(self, other):
        if not isinstance(other, LabelledTree):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    @cached_property
    def bracket(self):
        d = self.as_dict

        def render(addr):
            if addr not in d:
                return "."
            body = "(%s %s)" % (render(addr + "0"), render(addr + "1"))
            if d[addr] != 1.0:
                body += "@%g" % d[addr]
            return body

        return render("")

    def __repr__(self):
        return "<LabelledTree %s>" % self.bracket


EMPTY_TREE = LabelledTree(())


def parse_labelled_bracket(text):
    """Parse '(L R)@coeff' bracket shorthand into a labelled tree."""
    text = "".join(text.split())
    pos = 0
    coeffs = {}

    def parse(addr):
        nonlocal pos
        if pos >= len(text):
            raise EmbedError("unexpected end of labelled bracket")
        if text[pos] == ".":
            pos += 1
            return
        if text[pos] != "(":
            raise EmbedError("expected '.' or '(' at %d" % pos)
        pos += 1
        parse(addr + "0")
        parse(addr + "1")
        if pos >= len(text) or text[pos] != ")":
            raise EmbedError("expected ')' at %d" % pos)
        pos += 1
        val = 1.0
        if pos < len(text) and text[pos] == "@":
            pos += 1
            start = pos
            while pos < len(text) and (text[pos].isdigit() or text[pos] in ".e+-"):
                nxt = text[pos]
                if nxt in "+-" and text[pos - 1] not in "eE":
                    break
                pos += 1
            val = float(text[start:pos])
        coeffs[addr] = val

    parse("")
    if pos != len(text):
        raise EmbedError("trailing text after labelled bracket")
    return LabelledTree.from_dict(coeffs)


def labelled_tree_of_vertex(v):
    """The all-ones labelled tree of a positive tree vertex."""
    carets = v.picture.caret_addresses
    if carets is None:
        raise EmbedError("vertex is not a positive tree picture")
    return LabelledTree.from_dict({a: 1.0 for a in carets})


def tree_distance_squared(t1, t2):
    d1, d2 = t1.as_dict, t2.as_dict
    total = 0.0
    for a in d1.keys() | d2.keys():
        diff = d1.get(a, 0.0) - d2.get(a, 0.0)
        total += diff * diff
    return total


def subtree_at(t, bin_addr):
    """The labelled subtree rooted at a binary address, re-rooted."""
    n = len(bin_addr)
    return LabelledTree(
        tuple(
            sorted((a[n:], v) for a, v in t.coeffs if a.startswith(bin_addr))
        )
    )


def split(t):
    """Remove the root caret, leaving the ordered pair of child subtrees."""
    d = t.as_dict
    if "" not in d:
        raise EmbedError("cannot split an empty tree")
    if d[""] != 1.0:
        raise EmbedError("cannot split below a fractional root")
    return subtree_at(t, "0"), subtree_at(t, "1")


def wedge(t1, t2):
    """Join two labelled trees under a new root caret with coefficient 1."""
    coeffs = [("", 1.0)]
    coeffs += [("0" + a, v) for a, v in t1.coeffs]
    coeffs += [("1" + a, v) for a, v in t2.coeffs]
    return LabelledTree(tuple(sorted(coeffs)))


def x0_action_tree(t):
    """The left-shift action on labelled trees: (T0,(T10,T11)) -> ((T0,T10),T11).

    Requires coefficient exactly 1 at the root and at address 1, so that
    both reverse transistors of the acting element cancel cleanly.
    """
    d = t.as_dict
    if d.get("") != 1.0 or d.get("1") != 1.0:
        raise EmbedError("action needs coefficient 1 at the root and at address 1")
    return wedge(wedge(subtree_at(t, "0"), subtree_at(t, "10")), subtree_at(t, "11"))


def displacement_squared(t):
    """Direct address-by-address squared distance between t and its x0-shift."""
    return tree_distance_squared(t, x0_action_tree(t))


def displacement_squared_by_zones(t):
    """The same squared displacement computed zonewise, without the shift.

    Splitting the address space at the first letter gives
    |T0 - T0^T10|^2 + |T10^T11 - T11|^2 where ^ is the wedge; independent
    of the address-by-address route.
    """
    d = t.as_dict
    if d.get("") != 1.0 or d.get("1") != 1.0:
        raise EmbedError("action needs coefficient 1 at the root and at address 1")
    t0 = subtree_at(t, "0")
    t10 = subtree_at(t, "10")
    t11 = subtree_at(t, "11")
    left = tree_distance_squared(t0, wedge(t0, t10))
    right = tree_distance_squared(wedge(t10, t11), t11)
    return left + right


def displacement_decomposition(t):
    """The three-term split of the squared displacement for all-ones trees.

    Returns (a, b, c, total) with a = |T0 - T0^T10|^2, b = |T10 - pi1 T11|^2,
    c = |T11 - pi2 T11|^2; requires T10 and T11 nonempty, whence a >= 2 and
    c >= 1, so the total is at least 3.
    """
    if not t.is_all_ones():
        raise EmbedError("decomposition applies to all-ones trees")
    t10 = subtree_at(t, "10")
    t11 = subtree_at(t, "11")
    if not t10.coeffs or not t11.coeffs:
        raise EmbedError("subtrees at 10 and 11 must both contain a caret")
    t0 = subtree_at(t, "0")
    a = tree_distance_squared(t0, wedge(t0, t10))
    b = tree_distance_squared(t10, subtree_at(t11, "0"))
    c = tree_distance_squared(t11, subtree_at(t11, "1"))
    return a, b, c, a + b + c


# ---------------------------------------------------------------------------
# low-displacement search


COEFF_CHOICES = (0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0)
BEAM_WIDTH = 64
BEAM_ROUNDS = 40


def _grid_carets(m):
    return frozenset(
        {""}
        | {"0" * i for i in range(1, m + 1)}
        | {"1" * j for j in range(1, m + 1)}
    )


def _maximal_of(support):
    return sorted(a for a in support if a + "0" not in support and a + "1" not in support)


def _admissible(support, coeff_map):
    tree = {a: 1.0 for a in support}
    tree.update(coeff_map)
    if tree.get("") != 1.0 or tree.get("1") != 1.0:
        return None
    return LabelledTree.from_dict(tree)


def _shapes(m):
    """Support sets searched: the grid tree plus subsets of the tip children."""
    grid = _grid_carets(m)
    tips = ["0" * m, "1" * m]
    extras = sorted(t + b for t in tips for b in "01")
    shapes = []
    for mask in range(1 << len(extras)):
        extra = frozenset(e for i, e in enumerate(extras) if mask >> i & 1)
        shapes.append(grid | extra)
    shapes.sort(key=sorted)
    return shapes


def _seed_candidates(m):
    """Half-label heuristics evaluated before the systematic scan."""
    grid = _grid_carets(m)
    seeds = []
    tips = ("0" * m, "1" * m)
    seeds.append({a: (0.5 if a in tips else 1.0) for a in grid})
    for tip in tips:
        seeds.append({a: (0.5 if a == tip else 1.0) for a in grid})
    extra = grid | {"1" * m + "1"}
    seeds.append({a: (0.5 if a == "1" * m + "1" else 1.0) for a in extra})
    out = []
    for d in seeds:
        support = frozenset(d)
        if not is_caret_set(support):
            continue
        coeff = {a: v for a, v in d.items() if v != 1.0}
        t = _admissible(support, coeff)
        if t is not None:
            out.append(t)
    return out


def _scan_shape(support, best):
    """Exhaustive scan over coefficient assignments of one support shape.

    Only maximal carets admit fractional labels and the root and the caret
    at address 1 are pinned to 1, so at most a handful of addresses vary.
    best is (displacement_squared, tree) or None; returns the improved best,
    ties broken by the bracket rendering.
    """
    maximal = _maximal_of(support)
    fixed = {a: 1.0 for a in support if a not in maximal}
    choice_addrs = [a for a in maximal if a not in ("", "1")]
    for pinned in ("", "1"):
        if pinned in maximal:
            fixed[pinned] = 1.0

    def displacement_of(assign):
        tree = dict(fixed)
        tree.update(assign)
        t = LabelledTree.from_dict(tree)
        return displacement_squared(t), t

    def rec(i, assign, best):
        if i == len(choice_addrs):
            d2, t = displacement_of(assign)
            if best is None or (d2, t.bracket) < (best[0], best[1].bracket):
                return (d2, t)
            return best
        for val in COEFF_CHOICES:
            assign[choice_addrs[i]] = val
            best = rec(i + 1, assign, best)
        del assign[choice_addrs[i]]
        return best

    return rec(0, {}, best)


def search_low_displacement(m, bound):
    """Search the default family for a tree moved at most `bound` by x0.

    The family consists of labelled trees containing the all-ones grid
    tree T_{m,m}, with optional extra carets under the two vine tips and
    coefficients from eighths on the maximal carets.  m <= 2 is scanned
    exhaustively; larger m uses the seeded heuristics plus a beam search
    over coefficient perturbations.  Returns the best tree found if its
    displacement is within the bound, else None.
    """
    if m < 1:
        raise EmbedError("m must be >= 1")
    if bound <= 0:
        raise EmbedError("bound must be positive")
    best = None
    for t in _seed_candidates(m):
        d2 = displacement_squared(t)
        if best is None or (d2, t.bracket) < (best[0], best[1].bracket):
            best = (d2, t)
    if m <= 2:
        for support in _shapes(m):
            best = _scan_shape(support, best)
    else:
        best = _beam(m, best)
    if best is not None and math.sqrt(best[0]) <= bound + 1e-12:
        return best[1]
    return None


def _beam(m, best):
    seeds = [t for t in _seed_candidates(m)]
    grid = _grid_carets(m)
    ones = _admissible(grid, {})
    if ones is not None:
        seeds.append(ones)
    beam = []
    seen = set()
    for t in seeds:
        if t.coeffs in seen:
            continue
        seen.add(t.coeffs)
        beam.append((displacement_squared(t), t))
        if best is None or beam[-1][0] < best[0]:
            best = beam[-1]
    for _ in range(BEAM_ROUNDS):
        beam.sort(key=lambda item: (item[0], item[1].bracket))
        beam = beam[:BEAM_WIDTH]
        improved = False
        nxt = list(beam)
        for _d2, t in beam:
            support = t.support()
            for a in _maximal_of(support):
                if a in ("", "1"):
                    continue
                for val in COEFF_CHOICES:
                    d = dict(t.as_dict)
                    if d[a] == val:
                        continue
                    d[a] = val
                    t2 = LabelledTree.from_dict(d)
                    if t2.coeffs in seen:
                        continue
                    seen.add(t2.coeffs)
                    cand = (displacement_squared(t2), t2)
                    nxt.append(cand)
                    if cand[0] < best[0]:
                        best = cand
                        improved = True
        beam = nxt
        if not improved:
            break
    return best
