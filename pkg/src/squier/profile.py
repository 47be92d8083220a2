"""Truncated boundary profiles and the group action on them.

An infinite reduced (w,*)-picture with no frame-bottom wires, finite
downsets and no maximal transistors encodes a region of the visual
boundary of the diagram complex.  Here such objects are handled through
finite truncations: a reduced picture whose dangling wire ends carry
markers saying whether the wire attaches to a transistor further down
(solid), never attaches (open), or is undecided (free).

Acting by a group element stacks its picture on top, removes dipoles,
then strips transistors that are provably maximal (all wires open); the
declared faithful depth drops by the transistor count of the acting
element, which over-approximates how deep a dipole cascade can reach.
"""

from dataclasses import dataclass

from squier.complex import Vertex
from squier.hyperplane import Hyperplane
from squier.picture import (
    CYCLIC,
    PLANAR,
    PictureError,
    common_variant,
    concatenate,
    find_dipoles,
    promote_variant,
    reduce_picture_traced,
    remove_maximal_transistor,
    sub_picture,
)
from squier.trees import full_carets, leaves_of, tree_picture, vine

OPEN = "o"
SOLID = "s"
FREE = "?"
MARKERS = (OPEN, SOLID, FREE)

PROFILE_KINDS = ("L", "R", "LR", "INF")


class ProfileError(ValueError):
    pass


class DepthMarginError(ProfileError):
    """The requested computation would depend on the undecided frontier."""


@dataclass(frozen=True)
class TruncatedProfile:
    """A depth-d approximation of an infinite picture.

    picture keeps the dangling ends as frame-bottom ports; markers[i] is
    the marker of frame-bottom end i; every transistor of height <= depth
    is present and every marker at height <= depth is decided (not free).
    """

    picture: object
    markers: tuple
    depth: int

    def __post_init__(self):
        if len(self.markers) != self.picture.n_bottom:
            raise ProfileError("need one marker per dangling end")
        for m in self.markers:
            if m not in MARKERS:
                raise ProfileError("unknown marker %r" % m)

    @property
    def variant(self):
        return self.picture.variant

    def end_heights(self):
        """Height of each dangling end (1 + height of its source transistor)."""
        h = self.picture.heights
        out = []
        for src in _bottom_sources(self.picture):
            out.append(1 if src[0] == "T" else h[src[1]] + 1)
        return out

    def struct_key(self):
        """Canonical form with markers; variant-blind and lift-independent."""
        p = self.picture
        num, _ = p._dfs
        inv = sorted(num, key=num.get)
        marks = self.markers
        return (
            p.pres.text,
            p.top,
            tuple(p.transistors[k] for k in inv),
            p._canonical_wires(lambda i: ("M", marks[i])),
        )

    def transistor_count(self):
        return len(self.picture.transistors)

    def __repr__(self):
        return "<TruncatedProfile %d transistors depth %d>" % (
            len(self.picture.transistors),
            self.depth,
        )


def _bottom_sources(p):
    out = [None] * p.n_bottom
    for s, d in p.wires:
        if d[0] == "B":
            out[d[1]] = s
    return out


def make_tree_profile(carets, marker_by_leaf, depth, variant=PLANAR):
    """Profile truncation of a positive tree; markers keyed by leaf address."""
    pic = tree_picture(carets, variant)
    marks = tuple(marker_by_leaf[leaf] for leaf in leaves_of(carets))
    return TruncatedProfile(pic, marks, depth)


def canonical_profile(kind, depth):
    """The four tree profiles fixed by the generator pair: L, R, LR, INF."""
    if depth < 1:
        raise ProfileError("depth must be >= 1")
    if kind == "R":
        carets = vine("R", depth)
        marks = {leaf: OPEN for leaf in leaves_of(carets)}
        marks["1" * (depth + 1)] = SOLID
    elif kind == "L":
        carets = vine("L", depth)
        marks = {leaf: OPEN for leaf in leaves_of(carets)}
        marks["0" * (depth + 1)] = SOLID
    elif kind == "LR":
        carets = vine("L", depth) | vine("R", depth)
        marks = {leaf: OPEN for leaf in leaves_of(carets)}
        marks["0" * (depth + 1)] = SOLID
        marks["1" * (depth + 1)] = SOLID
    elif kind == "INF":
        carets = full_carets(depth + 1)
        marks = {leaf: SOLID for leaf in leaves_of(carets)}
    else:
        raise ProfileError("unknown profile kind %r" % kind)
    return make_tree_profile(carets, marks, depth)


@dataclass(frozen=True)
class ProfileReport:
    ok: bool
    failures: tuple

    def first(self):
        return self.failures[0] if self.failures else None


def validate_profile(tp):
    """Check the truncation against the defining conditions of a profile."""
    failures = []
    p = tp.picture
    if find_dipoles(p):
        failures.append("picture is not reduced")
    sources = _bottom_sources(p)
    by_transistor = {}
    for i, src in enumerate(sources):
        if src[0] == "b":
            by_transistor.setdefault(src[1], []).append(i)
    for k in sorted(p.maximal_transistors):
        ends = by_transistor.get(k, [])
        if len(ends) == len(p.bottom_label(k)):
            if all(tp.markers[i] == OPEN for i in ends):
                failures.append(
                    "transistor %d would be maximal: all wires open" % k
                )
    heights = tp.end_heights()
    for i, m in enumerate(tp.markers):
        if m == FREE and heights[i] <= tp.depth:
            failures.append("free marker at height %d <= depth" % heights[i])
    if not solid_extension_feasible(tp):
        failures.append("a solid wire admits no dipole-free attachment")
    return ProfileReport(not failures, tuple(failures))


def _attachment_makes_dipole(p, consumed_sources, rel, fwd):
    """Would attaching (rel, fwd) on these wires (in port order) cancel?"""
    first = consumed_sources[0]
    if first[0] != "b":
        return False
    k1 = first[1]
    if first[2] != 0:
        return False
    m = len(consumed_sources)
    if len(p.bottom_label(k1)) != m:
        return False
    for j, src in enumerate(consumed_sources):
        if src != ("b", k1, j):
            return False
    return p.top_label(k1) == p.pres.side(rel, fwd, top=False)


def solid_extension_feasible(tp):
    """Every solid wire admits at least one attachment creating no dipole.

    Candidate attachments consume the wire alone (one-letter relation
    side) or together with adjacent available dangling wires, following
    the variant's wiring rule; available means dangling and not open.
    """
    p = tp.picture
    sources = _bottom_sources(p)
    labels = p.bottom
    n = p.n_bottom
    available = [m != OPEN for m in tp.markers]
    sides = []
    for rel in range(len(p.pres.relations)):
        for fwd in (True, False):
            sides.append((rel, fwd, p.pres.side(rel, fwd, top=True)))
    for i, mark in enumerate(tp.markers):
        if mark != SOLID:
            continue
        if _solid_end_feasible(p, sources, labels, available, n, sides, i):
            continue
        return False
    return True


def _solid_end_feasible(p, sources, labels, available, n, sides, i):
    for rel, fwd, s_top in sides:
        m = len(s_top)
        for pos in range(m):
            if s_top[pos] != labels[i]:
                continue
            if p.variant == PLANAR:
                lo = i - pos
                run = list(range(lo, lo + m))
                if lo < 0 or lo + m > n:
                    continue
                if _run_attachable(p, sources, labels, available, run, s_top, rel, fwd, i):
                    return True
            elif p.variant == CYCLIC:
                run = [(i - pos + d) % n for d in range(m)]
                if len(set(run)) != m:
                    continue
                if _run_attachable(p, sources, labels, available, run, s_top, rel, fwd, i):
                    return True
            else:
                others = [
                    j
                    for j in range(n)
                    if j != i and available[j]
                ]
                if _braided_attachable(p, sources, labels, others, s_top, pos, rel, fwd, i):
                    return True
    return False


def _run_attachable(p, sources, labels, available, run, s_top, rel, fwd, i):
    for d, j in enumerate(run):
        if labels[j] != s_top[d]:
            return False
        if j != i and not available[j]:
            return False
    consumed = [sources[j] for j in run]
    return not _attachment_makes_dipole(p, consumed, rel, fwd)


def _braided_attachable(p, sources, labels, others, s_top, pos, rel, fwd, i, cap=2000):
    from itertools import permutations

    need = list(s_top[:pos] + s_top[pos + 1 :])
    candidates = [j for j in others if labels[j] in set(need)]
    count = 0
    for picks in permutations(candidates, len(need)):
        if [labels[j] for j in picks] != need:
            continue
        count += 1
        if count > cap:
            return False
        run = list(picks[:pos]) + [i] + list(picks[pos:])
        consumed = [sources[j] for j in run]
        if not _attachment_makes_dipole(p, consumed, rel, fwd):
            return True
    return False


def act_profile(g, tp):
    """Stack a group element above a truncated profile and normalize.

    Dipoles are removed, then transistors whose wires are all open are
    stripped (they would eventually die in the infinite computation).  The
    output depth is tp.depth minus the element's transistor count; the
    action refuses to guess whenever a dipole decision could involve the
    undecided frontier.
    """
    height = g.transistor_count()
    if tp.depth - height < 1:
        raise DepthMarginError(
            "depth %d cannot absorb an element of height %d" % (tp.depth, height)
        )
    target = common_variant(g.picture, tp.picture)
    gp = promote_variant(g.picture, target)
    pp = promote_variant(tp.picture, target)
    q = concatenate(gp, pp)
    reduced, survivors = reduce_picture_traced(q)
    marks = list(tp.markers)
    n_g = len(gp.transistors)
    for new_id, orig in enumerate(survivors):
        if orig >= n_g:
            continue
        dsts = [
            reduced.src2dst[("b", new_id, j)]
            for j in range(len(reduced.bottom_label(new_id)))
        ]
        if dsts and all(d[0] == "B" and marks[d[1]] != OPEN for d in dsts):
            raise DepthMarginError(
                "an acting transistor rests on the undecided frontier"
            )
    pic = reduced
    while True:
        strip = None
        for k in sorted(pic.maximal_transistors):
            dsts = [
                pic.src2dst[("b", k, j)] for j in range(len(pic.bottom_label(k)))
            ]
            if all(d[0] == "B" and marks[d[1]] == OPEN for d in dsts):
                strip = k
                break
        if strip is None:
            break
        pic, prov = remove_maximal_transistor(pic, strip)
        marks = [marks[ref] if tag == "kept" else OPEN for tag, ref in prov]
    return TruncatedProfile(pic, tuple(marks), tp.depth - height)


def truncate_profile(tp, depth):
    """Forget everything of height > depth; cut wires become solid."""
    p = tp.picture
    heights = p.heights
    keep = frozenset(k for k in range(len(p.transistors)) if heights[k] <= depth)
    q, prov = sub_picture(p, keep)
    marks = []
    for tag, ref in prov:
        marks.append(tp.markers[ref] if tag == "fb" else SOLID)
    return TruncatedProfile(q, tuple(marks), min(tp.depth, depth))


def profiles_equal_to_depth(tp1, tp2, depth):
    """Whether two truncations agree on everything of height <= depth."""
    if tp1.depth < depth or tp2.depth < depth:
        raise DepthMarginError("both profiles must be faithful to depth %d" % depth)
    a = truncate_profile(tp1, depth)
    b = truncate_profile(tp2, depth)
    return a.struct_key() == b.struct_key()


def is_fixed_to_depth(g, kind, depth):
    """Whether the canonical profile is fixed by g, checked at finite depth."""
    height = g.transistor_count()
    if depth < height + 1:
        raise DepthMarginError("need depth >= %d" % (height + 1))
    tp = canonical_profile(kind, depth)
    moved = act_profile(g, tp)
    return profiles_equal_to_depth(moved, tp, depth - height)


def hyperplanes_of_profile(tp):
    """One hyperplane per transistor, via the downset's minimal vertex."""
    p = tp.picture
    out = set()
    for k in range(len(p.transistors)):
        q, _prov = sub_picture(p, p.downset(k))
        out.add(Hyperplane(Vertex(q)))
    return frozenset(out)


# ---------------------------------------------------------------------------
# bracket shorthand with markers: 'o' open, 's' solid, '?' free leaves


def profile_bracket(tp):
    """Bracket shorthand for tree profiles; None for non-tree pictures."""
    from squier.trees import caret_address_map

    carets = tp.picture.caret_addresses
    if carets is None:
        return None
    addr_of = caret_address_map(tp.picture)
    leaf_marks = {}
    for i, src in enumerate(_bottom_sources(tp.picture)):
        leaf = "" if src[0] == "T" else addr_of[src[1]] + str(src[2])
        leaf_marks[leaf] = tp.markers[i]

    def render(addr):
        if addr in carets:
            return "(%s %s)" % (render(addr + "0"), render(addr + "1"))
        return leaf_marks[addr]

    return render("")


def parse_profile_bracket(text, depth=None):
    """Parse marker bracket shorthand into a truncated tree profile."""
    text = "".join(text.split())
    pos = 0
    carets = []
    marks = {}

    def parse(addr):
        nonlocal pos
        if pos >= len(text):
            raise ProfileError("unexpected end of profile expression")
        ch = text[pos]
        if ch in MARKERS:
            pos += 1
            marks[addr] = ch
            return
        if ch != "(":
            raise ProfileError("expected a marker or '(' at %d" % pos)
        pos += 1
        carets.append(addr)
        parse(addr + "0")
        parse(addr + "1")
        if pos >= len(text) or text[pos] != ")":
            raise ProfileError("expected ')' at %d" % pos)
        pos += 1

    parse("")
    if pos != len(text):
        raise ProfileError("trailing text after profile expression")
    caret_set = frozenset(carets)
    if depth is None:
        undecided = [len(a) + 1 for a, m in marks.items() if m != OPEN]
        depth = max(1, min(undecided) - 1) if undecided else max(
            (len(a) + 1 for a in caret_set), default=1
        )
    return make_tree_profile(caret_set, marks, depth)
