"""Local combinatorics of the diagram complex.

Vertices are reduced (w,*)-pictures with their bottom wires cut, taken
modulo the variant's bottom equivalence (nothing for planar, rotation for
cyclic, arbitrary permutation for braided).  Edges add or remove one
maximal transistor; an n-cube is a picture with n of its maximal
transistors painted white.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import permutations

from squier.picture import (
    BRAIDED,
    CYCLIC,
    PLANAR,
    PictureError,
    attach_transistor,
    canonical_serialize,
    creates_dipole_with_upper,
    identity_picture,
    reduce_picture,
    remove_maximal_transistor,
    sub_picture,
    _port_symbol,
    _topo_order,
)

_BOTTOM_MODE = {PLANAR: "indexed", CYCLIC: "rotated", BRAIDED: "cut"}

MAX_BALL_RADIUS = 6
MAX_BALL_VERTICES = 10 ** 6


class ComplexError(ValueError):
    pass


def _key_text(key):
    """One-line, space-free rendering of a canonical key (the vertex name)."""
    pres, variant, top, trans, wires = key
    pres = pres.replace(" ", "")
    tparts = ["%d%s" % (rel, "f" if fwd else "r") for rel, fwd in trans]

    def pt(p):
        if p[0] == "T":
            return "T%d" % p[1]
        if p[0] == "B":
            return "B%d" % p[1] if len(p) > 1 else "B*"
        return "%s%d.%d" % (p[0], p[1], p[2])

    wparts = ["%s>%s" % (pt(s), pt(d)) for s, d in wires]
    return "%s|%s|%s|%s|%s" % (pres, variant, top, ",".join(tparts), ",".join(wparts))


@dataclass(frozen=True, eq=False)
class Vertex:
    """A reduced (w,*)-picture modulo the variant's bottom equivalence.

    The stored picture keeps a concrete frame-bottom numbering (a lift of
    the dangling wires); identity is decided by the canonical key alone.
    """

    picture: object

    @property
    def variant(self):
        return self.picture.variant

    @property
    def word(self):
        return self.picture.top

    @cached_property
    def key(self):
        return self.picture.canonical_key(_BOTTOM_MODE[self.variant])

    @cached_property
    def key_text(self):
        return _key_text(self.key)

    @cached_property
    def bracket(self):
        """Bracket shorthand if this is a positive tree vertex, else None."""
        from squier.trees import to_bracket

        carets = self.picture.caret_addresses
        return None if carets is None else to_bracket(carets)

    @cached_property
    def hyperplane_keys(self):
        """Keys of the hyperplanes separating this vertex from the base."""
        carets = self.picture.caret_addresses
        if carets is not None:
            return frozenset(("@", a) for a in carets)
        out = set()
        for k in range(len(self.picture.transistors)):
            q, _prov = sub_picture(self.picture, self.picture.downset(k))
            out.add(min_vertex_key(q))
        return frozenset(out)

    def transistor_count(self):
        return len(self.picture.transistors)

    def serialize(self):
        return canonical_serialize(self.picture, _BOTTOM_MODE[self.variant])

    def __eq__(self, other):
        if not isinstance(other, Vertex):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        if self.bracket is not None:
            return "<Vertex %s %s>" % (self.bracket, self.variant)
        return "<Vertex %d transistors %s>" % (len(self.picture.transistors), self.variant)


def min_vertex_key(q):
    """Hyperplane key of the vertex q (assumed to have a unique maximal)."""
    carets = q.caret_addresses
    if carets is not None:
        maximal = [a for a in carets if (a + "0") not in carets and (a + "1") not in carets]
        if len(maximal) == 1:
            return ("@", maximal[0])
    return Vertex(q).key


def vertex_of(p):
    """Cut the bottom wires of (the reduction of) p and canonicalize."""
    return Vertex(reduce_picture(p))


def base_vertex(word, variant=PLANAR, pres=None):
    from squier.picture import PRES_XX

    return Vertex(identity_picture(PRES_XX if pres is None else pres, word, variant))


def _check_comparable(v1, v2):
    if v1.variant != v2.variant or v1.word != v2.word or v1.picture.pres != v2.picture.pres:
        raise ComplexError("vertices live in different complexes")


def vertex_leq(v1, v2):
    """Whether v1's picture embeds into v2's as an initial transistor subset.

    The embedding is forced wire by wire from the frame top down, so a
    single deterministic walk decides the order relation.
    """
    _check_comparable(v1, v2)
    p1, p2 = v1.picture, v2.picture
    if len(p1.transistors) > len(p2.transistors):
        return False
    fmap = {}
    rmap = {}
    pairs = [(("T", i), ("T", i)) for i in range(len(p1.top))]
    while pairs:
        s1, s2 = pairs.pop()
        d1 = p1.src2dst[s1]
        d2 = p2.src2dst[s2]
        if d1[0] == "B":
            continue
        if d2[0] == "B":
            return False
        k1, j1 = d1[1], d1[2]
        k2, j2 = d2[1], d2[2]
        if j1 != j2:
            return False
        if k1 in fmap:
            if fmap[k1] != k2:
                return False
            continue
        if k2 in rmap:
            return False
        if p1.transistors[k1] != p2.transistors[k2]:
            return False
        fmap[k1] = k2
        rmap[k2] = k1
        for j in range(len(p1.bottom_label(k1))):
            pairs.append((("b", k1, j), ("b", k2, j)))
    return True


def _downsets(n, parents, children):
    """All downward-closed subsets of the transistor order."""
    order = _topo_order(n, parents, children)
    out = []
    chosen = set()

    def rec(i):
        if i == len(order):
            out.append(frozenset(chosen))
            return
        k = order[i]
        rec(i + 1)
        if all(par in chosen for par in parents[k]):
            chosen.add(k)
            rec(i + 1)
            chosen.remove(k)

    rec(0)
    return out

def initial_subsets(v):
    """All vertices u <= v, one per downward-closed transistor subset."""
    p = v.picture
    out = []
    for keep in _downsets(len(p.transistors), p.parents, p.children):
        q, _prov = sub_picture(p, keep)
        out.append(Vertex(q))
    out.sort(key=lambda u: u.key_text)
    return out


def lub(v1, v2):
    """Least upper bound of two vertices, or None when unbounded.

    v2's picture is pushed transistor by transistor into a growing copy of
    v1's: a transistor either lands on an existing one (all top wires must
    agree) or is attached to dangling wires.  Any obstruction (mixed
    landing, inadmissible wiring, a dipole) certifies that no common upper
    bound exists.
    """
    _check_comparable(v1, v2)
    u = v1.picture
    p2 = v2.picture
    phi = {("T", i): ("T", i) for i in range(len(p2.top))}
    for k2 in _topo_order(len(p2.transistors), p2.parents, p2.children):
        m = len(p2.top_label(k2))
        srcs2 = [p2.dst2src[("t", k2, j)] for j in range(m)]
        imgs = [phi[s] for s in srcs2]
        dsts = [u.src2dst[img] for img in imgs]
        kinds = {d[0] for d in dsts}
        if kinds == {"t"}:
            ku = dsts[0][1]
            if u.transistors[ku] != p2.transistors[k2]:
                return None
            if any(d != ("t", ku, j) for j, d in enumerate(dsts)):
                return None
        elif kinds == {"B"}:
            positions = [d[1] for d in dsts]
            rel, fwd = p2.transistors[k2]
            try:
                u = attach_transistor(u, rel, fwd, positions)
            except PictureError:
                return None
            ku = len(u.transistors) - 1
            if creates_dipole_with_upper(u, ku):
                return None
        else:
            return None
        for j in range(len(p2.bottom_label(k2))):
            phi[("b", k2, j)] = ("b", ku, j)
    return Vertex(u)


def _attachments(p, max_injections=20000):
    """All ways to attach one new maximal transistor to the dangling wires.

    Yields (rel, fwd, positions).  Positions follow the variant's wiring
    rule: consecutive runs for planar, cyclic runs for cyclic, arbitrary
    injections for braided.
    """
    n = p.n_bottom
    labels = p.bottom
    for rel in range(len(p.pres.relations)):
        for fwd in (True, False):
            s_top = p.pres.side(rel, fwd, top=True)
            m = len(s_top)
            if m > n:
                continue
            if p.variant == PLANAR:
                for i in range(n - m + 1):
                    if labels[i : i + m] == s_top:
                        yield rel, fwd, list(range(i, i + m))
            elif p.variant == CYCLIC:
                seen = set()
                for i in range(n):
                    pos = [(i + d) % n for d in range(m)]
                    if tuple(pos) in seen:
                        continue
                    seen.add(tuple(pos))
                    if all(labels[q] == s_top[d] for d, q in enumerate(pos)):
                        yield rel, fwd, pos
            else:
                candidates = [i for i in range(n) if labels[i] in set(s_top)]
                count = 0
                for pos in permutations(candidates, m):
                    if all(labels[q] == s_top[d] for d, q in enumerate(pos)):
                        count += 1
                        if count > max_injections:
                            raise ComplexError("too many braided attachments")
                        yield rel, fwd, list(pos)


def neighbors(v):
    """All vertices one edge away: drop or add one maximal transistor."""
    p = v.picture
    found = {}
    for k in sorted(p.maximal_transistors):
        q, _prov = remove_maximal_transistor(p, k)
        w = Vertex(q)
        found[w.key] = w
    for rel, fwd, positions in _attachments(p):
        q = attach_transistor(p, rel, fwd, positions)
        if creates_dipole_with_upper(q, len(q.transistors) - 1):
            continue
        w = Vertex(q)
        found.setdefault(w.key, w)
    return sorted(found.values(), key=lambda w: w.key_text)


@dataclass(frozen=True, eq=False)
class Cube:
    """A cube of the complex: a vertex picture with white maximal transistors.

    The picture is that of the cube's maximal vertex; whites is the set of
    transistor ids painted white.  Corners arise by deleting subsets of the
    white transistors.
    """

    picture: object
    whites: frozenset

    @property
    def dimension(self):
        return len(self.whites)

    @property
    def variant(self):
        return self.picture.variant

    @cached_property
    def key(self):
        num, _ = self.picture._dfs
        vkey = Vertex(self.picture).key
        return (vkey, tuple(sorted(num[k] for k in self.whites)))

    def corner(self, shaded):
        """The corner keeping only the given subset of white transistors."""
        shaded = frozenset(shaded)
        if not shaded <= self.whites:
            raise ComplexError("corner must shade a subset of the whites")
        keep = frozenset(range(len(self.picture.transistors))) - (self.whites - shaded)
        q, _prov = sub_picture(self.picture, keep)
        return Vertex(q)

    def corners(self):
        whites = sorted(self.whites)
        out = []
        for mask in range(1 << len(whites)):
            shaded = frozenset(w for i, w in enumerate(whites) if mask >> i & 1)
            out.append((shaded, self.corner(shaded)))
        return out

    def min_corner(self):
        return self.corner(frozenset())

    def max_corner(self):
        return Vertex(self.picture)

    def __eq__(self, other):
        if not isinstance(other, Cube):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return "<Cube dim=%d on %d transistors>" % (
            self.dimension,
            len(self.picture.transistors),
        )


def cubes_at(v, max_dim=None):
    """All cubes (of dimension >= 1) having v among their corners."""
    from squier.picture import bottom_order

    p = v.picture
    atts = []
    for rel, fwd, positions in _attachments(p):
        q = attach_transistor(p, rel, fwd, positions)
        if creates_dipole_with_upper(q, len(q.transistors) - 1):
            continue
        atts.append((rel, fwd, tuple(positions)))
    atts.sort()
    found = {}
    orig_sources = bottom_order(p)

    def build(chosen):
        # attachments consume disjoint dangling wires, so replaying them in
        # sequence only needs the current position of each original wire
        u = p
        new_ids = []
        for rel, fwd, orig_positions in chosen:
            cur_index = {src: i for i, src in enumerate(bottom_order(u))}
            positions = [cur_index[orig_sources[i]] for i in orig_positions]
            u = attach_transistor(u, rel, fwd, positions)
            new_ids.append(len(u.transistors) - 1)
        return u, frozenset(new_ids)

    def rec(i, chosen, used):
        if max_dim is not None and len(chosen) > max_dim:
            return
        u, new_ids = build(chosen)
        free = [k for k in sorted(u.maximal_transistors) if k not in new_ids]
        for extra_mask in range(1 << len(free)):
            whites = set(new_ids)
            for b, k in enumerate(free):
                if extra_mask >> b & 1:
                    whites.add(k)
            if not whites or (max_dim is not None and len(whites) > max_dim):
                continue
            cube = Cube(u, frozenset(whites))
            found.setdefault(cube.key, cube)
        for j in range(i, len(atts)):
            rel, fwd, positions = atts[j]
            if used & set(positions):
                continue
            rec(j + 1, chosen + [atts[j]], used | set(positions))

    rec(0, [], set())
    return sorted(found.values(), key=lambda c: (c.dimension, c.key))


def edge_distance(v1, v2):
    """Number of hyperplanes separating two vertices (the edge metric)."""
    _check_comparable(v1, v2)
    return len(v1.hyperplane_keys ^ v2.hyperplane_keys)


@dataclass(frozen=True)
class BallGraph:
    """All vertices within an edge-distance radius of the base vertex."""

    word: str
    radius: int
    variant: str
    vertices: tuple
    edges: tuple  # pairs of key_text strings, lexicographically sorted

    def vertex_keys(self):
        return [v.key_text for v in self.vertices]

    def serialize(self):
        lines = ["ball word=%s radius=%d variant=%s" % (self.word, self.radius, self.variant)]
        lines += ["vertex %s" % v.key_text for v in self.vertices]
        lines += ["edge %s %s" % e for e in self.edges]
        return "\n".join(lines) + "\n"


def ball(word, radius, variant=PLANAR, pres=None):
    """Breadth-first enumeration of the radius-ball around the base vertex."""
    if radius > MAX_BALL_RADIUS:
        raise ComplexError("radius %d exceeds the cap %d" % (radius, MAX_BALL_RADIUS))
    base = base_vertex(word, variant, pres)
    seen = {base.key: base}
    nbrs = {}
    frontier = [base]
    for _ in range(radius):
        nxt = []
        for v in frontier:
            ns = neighbors(v)
            nbrs[v.key] = ns
            for w in ns:
                if w.key not in seen:
                    if len(seen) >= MAX_BALL_VERTICES:
                        raise ComplexError("ball exceeds vertex cap")
                    seen[w.key] = w
                    nxt.append(w)
        frontier = nxt
    edges = set()
    for v in seen.values():
        ns = nbrs.get(v.key)
        if ns is None:
            ns = neighbors(v)
        for w in ns:
            if w.key in seen:
                a, b = sorted((v.key_text, w.key_text))
                edges.add((a, b))
    vertices = tuple(sorted(seen.values(), key=lambda v: v.key_text))
    return BallGraph(word, radius, variant, vertices, tuple(sorted(edges)))


def bfs_distance(g, v1, v2):
    """Edge-path distance inside a ball graph (test oracle)."""
    adj = {}
    for a, b in g.edges:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    start, goal = v1.key_text, v2.key_text
    if start == goal:
        return 0
    dist = {start: 0}
    frontier = [start]
    while frontier:
        nxt = []
        for a in frontier:
            for b in adj.get(a, ()):
                if b not in dist:
                    dist[b] = dist[a] + 1
                    if b == goal:
                        return dist[b]
                    nxt.append(b)
        frontier = nxt
    return None


def export_dot(g):
    """Render a ball graph in the DOT graph-description language."""
    ids = {v.key_text: "v%d" % i for i, v in enumerate(g.vertices)}
    lines = ["graph ball {"]
    for v in g.vertices:
        label = v.bracket if v.bracket is not None else v.key_text
        lines.append('  %s [label="%s"];' % (ids[v.key_text], label.replace('"', "'")))
    for a, b in g.edges:
        lines.append("  %s -- %s;" % (ids[a], ids[b]))
    lines.append("}")
    return "\n".join(lines) + "\n"
