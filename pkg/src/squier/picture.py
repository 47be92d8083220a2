"""Semigroup pictures and the dipole rewriting calculus.

A picture over a presentation ``<alphabet | relations>`` is a frame with a
top word and a bottom word, a finite set of transistors (each an oriented
instance of a defining relation), and labelled wires joining bottom ports
(frame top or transistor bottoms) to top ports (frame bottom or transistor
tops).  Removing a dipole (a cancelling forward/reverse pair wired in
order) is the rewriting step; every picture has a unique reduced form.

Ports are encoded as tuples:

    ('T', i)     frame top position i         (wire source)
    ('B', i)     frame bottom position i      (wire sink)
    ('b', k, j)  bottom port j of transistor k (wire source)
    ('t', k, j)  top port j of transistor k    (wire sink)

All positions are 0-based internally; the text format is 1-based.
"""

from dataclasses import dataclass
from functools import cached_property

PLANAR = "planar"
CYCLIC = "cyclic"
BRAIDED = "braided"
VARIANTS = (PLANAR, CYCLIC, BRAIDED)

# widening order for variant promotion: every planar picture is cyclic, etc.
_VARIANT_RANK = {PLANAR: 0, CYCLIC: 1, BRAIDED: 2}

MAX_WORD = 2 ** 16
MAX_TRANSISTORS = 2 ** 20


class PictureError(ValueError):
    pass


class FrameMismatchError(PictureError):
    pass


class LimitExceededError(PictureError):
    pass


@dataclass(frozen=True)
class Presentation:
    """A semigroup presentation with single-character generator symbols."""

    alphabet: str
    relations: tuple

    def __post_init__(self):
        if len(set(self.alphabet)) != len(self.alphabet) or not self.alphabet:
            raise PictureError("alphabet must be a nonempty set of distinct symbols")
        rels = tuple((str(l), str(r)) for l, r in self.relations)
        object.__setattr__(self, "relations", rels)
        for lhs, rhs in rels:
            if not lhs or not rhs:
                raise PictureError("relation sides must be nonempty words")
            if lhs == rhs:
                raise PictureError("relations of the form (w, w) are not allowed")
            for ch in lhs + rhs:
                if ch not in self.alphabet:
                    raise PictureError("relation symbol %r outside alphabet" % ch)

    def check_word(self, word):
        if not word:
            raise PictureError("words must be nonempty")
        if len(word) > MAX_WORD:
            raise LimitExceededError("word longer than %d" % MAX_WORD)
        for ch in word:
            if ch not in self.alphabet:
                raise PictureError("symbol %r outside alphabet" % ch)

    @cached_property
    def text(self):
        rels = ", ".join("%s=%s" % lr for lr in self.relations)
        return "%s ; %s" % (" ".join(self.alphabet), rels)

    def side(self, rel_idx, fwd, top):
        """Label of the top (top=True) or bottom side of an oriented relation."""
        lhs, rhs = self.relations[rel_idx]
        if fwd:
            return lhs if top else rhs
        return rhs if top else lhs


# the presentation whose planar/annular/braided picture groups are F, T, V
PRES_XX = Presentation("x", (("x", "xx"),))

# the four-letter presentation used for multi-relation rewriting tests
PRES_ABCD = Presentation("abcd", (("ab", "cd"), ("cb", "bc"), ("ab", "ba")))


@dataclass(frozen=True)
class DipoleOccurrence:
    upper: int
    lower: int


def _port_symbol(pres, top, transistors, port):
    kind = port[0]
    if kind == "T":
        return top[port[1]]
    if kind == "b":
        rel, fwd = transistors[port[1]]
        return pres.side(rel, fwd, top=False)[port[2]]
    if kind == "t":
        rel, fwd = transistors[port[1]]
        return pres.side(rel, fwd, top=True)[port[2]]
    raise PictureError("sink port %r carries no source symbol" % (port,))


@dataclass(frozen=True, eq=False)
class Picture:
    """An immutable picture; equality and hashing are by isomorphism class."""

    pres: Presentation
    variant: str
    top: str
    transistors: tuple  # ((relation index, forward: bool), ...)
    wires: tuple  # ((source port, sink port), ...)

    # -- basic structure ------------------------------------------------

    @cached_property
    def src2dst(self):
        return dict(self.wires)

    @cached_property
    def dst2src(self):
        return {d: s for s, d in self.wires}

    def top_label(self, k):
        rel, fwd = self.transistors[k]
        return self.pres.side(rel, fwd, top=True)

    def bottom_label(self, k):
        rel, fwd = self.transistors[k]
        return self.pres.side(rel, fwd, top=False)

    @cached_property
    def n_bottom(self):
        return sum(1 for _, d in self.wires if d[0] == "B")

    @cached_property
    def bottom(self):
        """The word read across the frame bottom."""
        syms = [None] * self.n_bottom
        for s, d in self.wires:
            if d[0] == "B":
                syms[d[1]] = _port_symbol(self.pres, self.top, self.transistors, s)
        return "".join(syms)

    @cached_property
    def parents(self):
        """parents[k] = set of transistors with a wire into k's top."""
        par = [set() for _ in self.transistors]
        for s, d in self.wires:
            if d[0] == "t" and s[0] == "b":
                par[d[1]].add(s[1])
        return par

    @cached_property
    def children(self):
        ch = [set() for _ in self.transistors]
        for s, d in self.wires:
            if d[0] == "t" and s[0] == "b":
                ch[s[1]].add(d[1])
        return ch

    @cached_property
    def maximal_transistors(self):
        """Transistors all of whose bottom wires reach the frame bottom."""
        return frozenset(k for k in range(len(self.transistors)) if not self.children[k])

    @cached_property
    def heights(self):
        """heights[k] = length of the longest chain of transistors ending at k."""
        n = len(self.transistors)
        order = _topo_order(n, self.parents, self.children)
        h = [0] * n
        for k in order:
            h[k] = 1 + max((h[p] for p in self.parents[k]), default=0)
        return tuple(h)

    def downset(self, k):
        """All transistors <= k in the transistor order."""
        seen = {k}
        stack = [k]
        while stack:
            for p in self.parents[stack.pop()]:
                if p not in seen:
                    seen.add(p)
                    stack.append(p)
        return frozenset(seen)

    # -- tree pictures over <x | x = xx> --------------------------------

    @cached_property
    def caret_addresses(self):
        """Binary addresses of carets if this is a positive tree picture, else None.

        A positive tree picture is a planar-shaped picture over <x|x=xx>
        consisting solely of forward transistors, each hanging from its
        parent's wire; such pictures are in bijection with finite binary
        trees, carets addressed by 0/1 strings from the root.
        """
        if self.pres != PRES_XX:
            return None
        if self.top != "x":
            return None
        if any(not fwd or rel != 0 for rel, fwd in self.transistors):
            return None
        addr = {}
        root = self.src2dst[("T", 0)]
        if root[0] == "t":
            addr[root[1]] = ""
        elif self.transistors:
            return None
        stack = list(addr)
        while stack:
            k = stack.pop()
            for j in (0, 1):
                d = self.src2dst[("b", k, j)]
                if d[0] == "t":
                    if d[2] != 0:
                        return None
                    addr[d[1]] = addr[k] + str(j)
                    stack.append(d[1])
        if len(addr) != len(self.transistors):
            return None
        return frozenset(addr.values())

    # -- canonical form ---------------------------------------------------

    @cached_property
    def _dfs(self):
        """(numbering dict, source visit order) from the canonical traversal.

        Depth-first from the leftmost frame-top port; a transistor's bottom
        ports are explored left to right immediately at first visit.  The
        traversal covers every wire exactly once.
        """
        num = {}
        visit = []
        src2dst = self.src2dst
        bot_len = [len(self.bottom_label(k)) for k in range(len(self.transistors))]
        stack = [("T", i) for i in reversed(range(len(self.top)))]
        while stack:
            src = stack.pop()
            visit.append(src)
            dst = src2dst[src]
            if dst[0] == "t":
                k = dst[1]
                if k not in num:
                    num[k] = len(num)
                    stack.extend(("b", k, j) for j in reversed(range(bot_len[k])))
        return num, tuple(visit)

    def _canonical_wires(self, fb_token):
        """Wire entries in canonical order with canonical transistor ids."""
        num, visit = self._dfs
        src2dst = self.src2dst
        out = []
        for src in visit:
            dst = src2dst[src]
            if src[0] == "b":
                csrc = ("b", num[src[1]], src[2])
            else:
                csrc = src
            if dst[0] == "t":
                cdst = ("t", num[dst[1]], dst[2])
            else:
                cdst = fb_token(dst[1])
            out.append((csrc, cdst))
        out.sort()
        return tuple(out)

    def canonical_key(self, bottom_mode="indexed"):
        """Hashable canonical form; equal keys mean isomorphic pictures.

        bottom_mode 'indexed' keeps frame-bottom positions, 'cut' forgets
        them (vertex key in the braided complex), 'rotated' minimizes over
        cyclic rotations of the bottom positions (cyclic complex).
        """
        num, _ = self._dfs
        inv = sorted(num, key=num.get)
        trans = tuple(self.transistors[k] for k in inv)
        head = (self.pres.text, self.variant, self.top, trans)
        if bottom_mode == "indexed":
            return head + (self._canonical_wires(lambda i: ("B", i)),)
        if bottom_mode == "cut":
            return head + (self._canonical_wires(lambda i: ("B",)),)
        if bottom_mode == "rotated":
            n = self.n_bottom
            return min(
                head + (self._canonical_wires(lambda i, r=r: ("B", (i + r) % n)),)
                for r in range(max(n, 1))
            )
        raise PictureError("unknown bottom mode %r" % bottom_mode)

    @cached_property
    def _key(self):
        return self.canonical_key("indexed")

    def __eq__(self, other):
        if not isinstance(other, Picture):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    @cached_property
    def is_reduced(self):
        return not find_dipoles(self)

    def __repr__(self):
        return "<Picture (%s,%s) %d transistors %s>" % (
            self.top,
            self.bottom,
            len(self.transistors),
            self.variant,
        )


def _topo_order(n, parents, children):
    indeg = [len(parents[k]) for k in range(n)]
    order = [k for k in range(n) if indeg[k] == 0]
    i = 0
    while i < len(order):
        for c in children[order[i]]:
            indeg[c] -= 1
            if indeg[c] == 0:
                order.append(c)
        i += 1
    if len(order) != n:
        raise PictureError("transistor order contains a cycle")
    return order


# ---------------------------------------------------------------------------
# construction and validation


def _make_trusted(pres, variant, top, transistors, wires):
    """Build a Picture from data already known to be structurally valid."""
    return Picture(pres, variant, top, tuple(transistors), tuple(sorted(wires)))


def make_picture(pres, variant, top, transistors, wires):
    """Build and fully validate a picture."""
    if variant not in VARIANTS:
        raise PictureError("unknown variant %r" % variant)
    pres.check_word(top)
    transistors = tuple(transistors)
    if len(transistors) > MAX_TRANSISTORS:
        raise LimitExceededError("more than %d transistors" % MAX_TRANSISTORS)
    for rel, fwd in transistors:
        if not 0 <= rel < len(pres.relations):
            raise PictureError("relation index %d out of range" % rel)
        if not isinstance(fwd, bool):
            raise PictureError("orientation must be a bool")
    p = _make_trusted(pres, variant, top, transistors, wires)
    _validate_structure(p)
    if variant in (PLANAR, CYCLIC):
        _check_admissible(p)
    return p


def _validate_structure(p):
    sources = set()
    sinks = set()
    n_fb = 0
    for s, d in p.wires:
        if s[0] not in ("T", "b") or d[0] not in ("B", "t"):
            raise PictureError("wire %r -> %r joins the wrong port kinds" % (s, d))
        if s in sources:
            raise PictureError("source port %r used twice" % (s,))
        if d in sinks:
            raise PictureError("sink port %r used twice" % (d,))
        sources.add(s)
        sinks.add(d)
        if d[0] == "B":
            n_fb += 1
    # every port is used exactly once
    want_sources = {("T", i) for i in range(len(p.top))}
    want_sinks = set()
    for k in range(len(p.transistors)):
        want_sources.update(("b", k, j) for j in range(len(p.bottom_label(k))))
        want_sinks.update(("t", k, j) for j in range(len(p.top_label(k))))
    want_sinks.update(("B", i) for i in range(n_fb))
    if sources != want_sources:
        raise PictureError("frame-top/transistor-bottom ports not perfectly matched")
    if sinks != want_sinks:
        raise PictureError("frame-bottom/transistor-top ports not perfectly matched")
    # labels agree at both endpoints of every wire
    for s, d in p.wires:
        if _port_symbol(p.pres, p.top, p.transistors, s) != _sink_symbol(p, d):
            raise PictureError("wire %r -> %r changes its label" % (s, d))
    # the transistor relation is a strict partial order
    _topo_order(len(p.transistors), p.parents, p.children)
    if len(p.bottom) > MAX_WORD:
        raise LimitExceededError("bottom word longer than %d" % MAX_WORD)


def _sink_symbol(p, port):
    if port[0] == "B":
        s = p.dst2src[port]
        return _port_symbol(p.pres, p.top, p.transistors, s)
    return _port_symbol(p.pres, p.top, p.transistors, port)


def _sweep_states(p):
    """Greedy layered sweep; yields (frontier, remaining) before each step.

    The frontier is the list of wire sources currently cut by the sweep
    line.  A transistor is ready when its top wires occupy consecutive
    frontier positions in port order (cyclically consecutive for the
    cyclic variant, any positions for braided).  Readiness is confluent,
    so the greedy order visits a complete set of states whenever the
    picture is admissible for its variant.
    """
    tops = []
    for k in range(len(p.transistors)):
        tops.append(tuple(p.dst2src[("t", k, j)] for j in range(len(p.top_label(k)))))
    frontier = [("T", i) for i in range(len(p.top))]
    remaining = set(range(len(p.transistors)))
    cyclic = p.variant == CYCLIC
    braided = p.variant == BRAIDED
    while True:
        yield frontier, remaining
        if not remaining:
            return
        pos = {w: i for i, w in enumerate(frontier)}
        n = len(frontier)
        ready = None
        for k in sorted(remaining):
            want = tops[k]
            if any(w not in pos for w in want):
                continue
            if braided:
                ready = k
                cut = sorted((pos[w] for w in want), reverse=True)
                at = min(cut)
                break
            i0 = pos[want[0]]
            if cyclic:
                if all(frontier[(i0 + d) % n] == want[d] for d in range(len(want))):
                    ready = k
                    cut = sorted(((i0 + d) % n for d in range(len(want))), reverse=True)
                    at = i0
                    break
            else:
                if i0 + len(want) <= n and all(
                    frontier[i0 + d] == want[d] for d in range(len(want))
                ):
                    ready = k
                    cut = list(range(i0 + len(want) - 1, i0 - 1, -1))
                    at = i0
                    break
        if ready is None:
            return
        k = ready
        frontier = list(frontier)
        wrapped = cyclic and max(cut) - min(cut) + 1 != len(cut)
        for i in cut:
            del frontier[i]
        bottoms = [("b", k, j) for j in range(len(p.bottom_label(k)))]
        if wrapped:
            frontier.extend(bottoms)
        else:
            insert_at = min(at, len(frontier))
            frontier[insert_at:insert_at] = bottoms
        remaining = remaining - {k}


def _check_admissible(p):
    """Check the planar/cyclic wiring condition by layered sweep."""
    last_frontier = None
    for frontier, remaining in _sweep_states(p):
        last_frontier = frontier
        last_remaining = remaining
    if last_remaining:
        raise PictureError("picture is not %s: stuck layered sweep" % p.variant)
    idx = [p.src2dst[w][1] for w in last_frontier]
    n = len(idx)
    if p.variant == PLANAR:
        if idx != list(range(n)):
            raise PictureError("picture is not planar: crossed frame-bottom wires")
    else:
        if n and idx != [(idx[0] + d) % n for d in range(n)]:
            raise PictureError("picture is not cyclic: bottom order is not a rotation")


# ---------------------------------------------------------------------------
# the operations of the calculus


def identity_picture(pres, word, variant=PLANAR):
    """The transistor-free (word, word)-picture; neutral for concatenation."""
    pres.check_word(word)
    if variant not in VARIANTS:
        raise PictureError("unknown variant %r" % variant)
    wires = tuple((("T", i), ("B", i)) for i in range(len(word)))
    return _make_trusted(pres, variant, word, (), wires)


def promote_variant(p, variant):
    """Re-tag a picture into a wider variant (planar < cyclic < braided)."""
    if _VARIANT_RANK[variant] < _VARIANT_RANK[p.variant]:
        raise PictureError("cannot narrow %s picture to %s" % (p.variant, variant))
    if variant == p.variant:
        return p
    return _make_trusted(p.pres, variant, p.top, p.transistors, p.wires)


def common_variant(*pictures):
    return max((q.variant for q in pictures), key=_VARIANT_RANK.get)


def concatenate(p1, p2):
    """Splice p1's bottom-frame wires to p2's top-frame wires in order."""
    if p1.pres != p2.pres:
        raise FrameMismatchError("presentations differ")
    if p1.variant != p2.variant:
        raise FrameMismatchError("variants differ (promote first)")
    if p1.bottom != p2.top:
        raise FrameMismatchError(
            "cannot concatenate: %r != %r" % (p1.bottom, p2.top)
        )
    n1 = len(p1.transistors)
    if n1 + len(p2.transistors) > MAX_TRANSISTORS:
        raise LimitExceededError("concatenation exceeds transistor limit")

    def shift(port):
        kind = port[0]
        if kind in ("t", "b"):
            return (kind, port[1] + n1, port[2])
        return port

    glue_src = {}  # frame-bottom index of p1 -> source feeding it
    wires = []
    for s, d in p1.wires:
        if d[0] == "B":
            glue_src[d[1]] = s
        else:
            wires.append((s, d))
    for s, d in p2.wires:
        s2 = glue_src[s[1]] if s[0] == "T" else shift(s)
        wires.append((s2, shift(d)))
    return _make_trusted(
        p1.pres, p1.variant, p1.top, p1.transistors + p2.transistors, wires
    )


def invert_picture(p):
    """Vertical reflection: swap top and bottom everywhere, reverse wires."""
    flip = {"T": "B", "B": "T", "t": "b", "b": "t"}

    def mirror(port):
        if port[0] in ("T", "B"):
            return (flip[port[0]], port[1])
        return (flip[port[0]], port[1], port[2])

    transistors = tuple((rel, not fwd) for rel, fwd in p.transistors)
    wires = tuple((mirror(d), mirror(s)) for s, d in p.wires)
    return _make_trusted(p.pres, p.variant, p.bottom, transistors, wires)


def _dipole_at(transistors, pres, src2dst, dst2src, bot_len, top_len, k2):
    """Return the upper partner if some transistor forms a dipole over k2."""
    s0 = dst2src[("t", k2, 0)]
    if s0[0] != "b" or s0[2] != 0:
        return None
    k1 = s0[1]
    m = top_len[k2]
    if bot_len[k1] != m:
        return None
    for j in range(1, m):
        s = dst2src[("t", k2, j)]
        if s[0] != "b" or s[1] != k1 or s[2] != j:
            return None
    r1, f1 = transistors[k1]
    r2, f2 = transistors[k2]
    if pres.side(r1, f1, top=True) != pres.side(r2, f2, top=False):
        return None
    return k1


def find_dipoles(p):
    """All dipole occurrences, listed in canonical serialization order."""
    bot_len = [len(p.bottom_label(k)) for k in range(len(p.transistors))]
    top_len = [len(p.top_label(k)) for k in range(len(p.transistors))]
    found = []
    for k2 in range(len(p.transistors)):
        k1 = _dipole_at(p.transistors, p.pres, p.src2dst, p.dst2src, bot_len, top_len, k2)
        if k1 is not None:
            found.append((k1, k2))
    num, _ = p._dfs
    found.sort(key=lambda pair: (num[pair[0]], num[pair[1]]))
    return [DipoleOccurrence(a, b) for a, b in found]


def remove_dipole(p, occ):
    """Delete the dipole pair and splice the surviving wires in order."""
    k1, k2 = occ.upper, occ.lower
    if _dipole_at(
        p.transistors,
        p.pres,
        p.src2dst,
        p.dst2src,
        [len(p.bottom_label(k)) for k in range(len(p.transistors))],
        [len(p.top_label(k)) for k in range(len(p.transistors))],
        k2,
    ) != k1:
        raise PictureError("(%d, %d) is not a dipole" % (k1, k2))
    dead = {k1, k2}

    def renum(port):
        if port[0] in ("t", "b"):
            k = port[1]
            return (port[0], k - (k > k1) - (k > k2), port[2])
        return port

    wires = []
    for j in range(len(p.top_label(k1))):
        s = p.dst2src[("t", k1, j)]
        d = p.src2dst[("b", k2, j)]
        wires.append((renum(s), renum(d)))
    for s, d in p.wires:
        ks = s[1] if s[0] == "b" else None
        kd = d[1] if d[0] == "t" else None
        if ks in dead or kd in dead:
            continue
        wires.append((renum(s), renum(d)))
    transistors = tuple(t for k, t in enumerate(p.transistors) if k not in dead)
    return _make_trusted(p.pres, p.variant, p.top, transistors, wires)


def _reduce_raw(transistors, pres, src2dst, dst2src):
    """In-place dipole elimination on mutable wire maps.

    transistors is a dict id -> (rel, fwd) whose keys are stable; returns
    the set of surviving ids.  Worklist-driven so that reduction of a
    picture with d dipole removals costs O(size + d * degree).
    """
    alive = set(transistors)
    bot_len = {}
    top_len = {}
    for k, (rel, fwd) in transistors.items():
        bot_len[k] = len(pres.side(rel, fwd, top=False))
        top_len[k] = len(pres.side(rel, fwd, top=True))

    def upper_of(k2):
        s0 = dst2src[("t", k2, 0)]
        if s0[0] != "b" or s0[2] != 0:
            return None
        k1 = s0[1]
        m = top_len[k2]
        if bot_len[k1] != m:
            return None
        for j in range(1, m):
            s = dst2src[("t", k2, j)]
            if s[0] != "b" or s[1] != k1 or s[2] != j:
                return None
        r1, f1 = transistors[k1]
        r2, f2 = transistors[k2]
        if pres.side(r1, f1, top=True) != pres.side(r2, f2, top=False):
            return None
        return k1

    work = sorted(alive)
    while work:
        batch = work
        work = []
        for k2 in batch:
            if k2 not in alive:
                continue
            k1 = upper_of(k2)
            if k1 is None:
                continue
            touched = set()
            for j in range(top_len[k1]):
                s = dst2src.pop(("t", k1, j))
                d = src2dst.pop(("b", k2, j))
                src2dst[s] = d
                dst2src[d] = s
                if s[0] == "b":
                    touched.add(s[1])
                if d[0] == "t":
                    touched.add(d[1])
            for j in range(bot_len[k1]):
                d = src2dst.pop(("b", k1, j))
                dst2src.pop(d, None)
            for j in range(top_len[k2]):
                dst2src.pop(("t", k2, j), None)
            alive.discard(k1)
            alive.discard(k2)
            for k in touched:
                if k in alive:
                    work.append(k)
    return alive


def _reduce_with_survivors(p):
    transistors = dict(enumerate(p.transistors))
    src2dst = dict(p.wires)
    dst2src = {d: s for s, d in p.wires}
    alive = _reduce_raw(transistors, p.pres, src2dst, dst2src)
    survivors = sorted(alive)
    renum = {k: i for i, k in enumerate(survivors)}

    def remap(port):
        if port[0] in ("t", "b"):
            return (port[0], renum[port[1]], port[2])
        return port

    wires = tuple(
        (remap(s), remap(d))
        for s, d in src2dst.items()
        if s[0] == "T" or s[1] in alive
    )
    out = _make_trusted(
        p.pres, p.variant, p.top, tuple(p.transistors[k] for k in survivors), wires
    )
    return out, tuple(survivors)


def reduce_picture(p):
    """Remove dipoles until none remain; the result is order-independent."""
    out, _ = _reduce_with_survivors(p)
    return out


def reduce_picture_traced(p):
    """Like reduce_picture but also reports which original transistors survive."""
    return _reduce_with_survivors(p)


def insert_dipole(p, wire_src, rel_idx, fwd_upper):
    """Insert a cancelling transistor pair straddling the given wire.

    wire_src identifies the wire by its source port and becomes the leftmost
    wire consumed by the new upper transistor; further wires (for relation
    sides longer than one letter) are taken from the sweep frontier to its
    right.  reduce(insert_dipole(p, ...)) == reduce(p).
    """
    if wire_src not in p.src2dst:
        raise PictureError("no wire with source %r" % (wire_src,))
    s1 = p.pres.side(rel_idx, fwd_upper, top=True)
    s2 = p.pres.side(rel_idx, fwd_upper, top=False)
    k = len(s1)
    consumed = None
    for frontier, _remaining in _sweep_states(p):
        if wire_src not in frontier:
            continue
        pos = frontier.index(wire_src)
        n = len(frontier)
        labels = [
            _port_symbol(p.pres, p.top, p.transistors, w) for w in frontier
        ]
        if p.variant == PLANAR:
            if pos + k <= n and all(labels[pos + d] == s1[d] for d in range(k)):
                consumed = [frontier[pos + d] for d in range(k)]
        elif p.variant == CYCLIC:
            if k <= n and all(labels[(pos + d) % n] == s1[d] for d in range(k)):
                consumed = [frontier[(pos + d) % n] for d in range(k)]
        else:
            picks = [wire_src]
            scan = [(pos + d) % n for d in range(1, n)]
            for want in s1[1:]:
                for i in scan:
                    if frontier[i] not in picks and labels[i] == want:
                        picks.append(frontier[i])
                        break
                else:
                    picks = None
                    break
            if picks is not None and len(picks) == k:
                consumed = picks
        if consumed:
            break
    if not consumed:
        raise PictureError(
            "relation side %r does not match the context of wire %r" % (s1, wire_src)
        )
    n_old = len(p.transistors)
    ku, kl = n_old, n_old + 1
    new_wires = []
    for s, d in p.wires:
        if s in consumed:
            i = consumed.index(s)
            new_wires.append((s, ("t", ku, i)))
            new_wires.append((("b", kl, i), d))
        else:
            new_wires.append((s, d))
    for j in range(len(s2)):
        new_wires.append((("b", ku, j), ("t", kl, j)))
    transistors = p.transistors + ((rel_idx, fwd_upper), (rel_idx, not fwd_upper))
    out = _make_trusted(p.pres, p.variant, p.top, transistors, new_wires)
    _validate_structure(out)
    return out


def canonical_serialize(p, bottom_mode="indexed"):
    """Deterministic text form; isomorphic pictures serialize identically."""
    key = p.canonical_key(bottom_mode)
    _pres, variant, top, trans, wires = key

    def port_text(port):
        if port[0] == "T":
            return "frame.top.%d" % (port[1] + 1)
        if port[0] == "B":
            return "frame.bot.%d" % (port[1] + 1) if len(port) > 1 else "frame.bot.cut"
        kind = "top" if port[0] == "t" else "bot"
        return "%d.%s.%d" % (port[1] + 1, kind, port[2] + 1)

    lines = [
        "picture v1",
        "presentation: %s" % p.pres.text,
        "variant: %s" % variant,
        "top: %s" % top,
    ]
    for i, (rel, fwd) in enumerate(trans):
        lines.append("transistor %d rel=%d dir=%s" % (i + 1, rel + 1, "f" if fwd else "r"))
    trans_list = list(trans)
    for s, d in wires:
        if s[0] == "T":
            sym = top[s[1]]
        else:
            rel, fwd = trans_list[s[1]]
            sym = p.pres.side(rel, fwd, top=False)[s[2]]
        lines.append("wire %s %s -> %s" % (sym, port_text(s), port_text(d)))
    return "\n".join(lines) + "\n"


def parse_picture(text):
    """Parse the line-oriented picture format back into a Picture."""
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or lines[0] != "picture v1":
        raise PictureError("missing 'picture v1' header")
    body = {}
    transistors = []
    wires = []
    for ln in lines[1:]:
        if ln.startswith("presentation:"):
            body["pres"] = ln.split(":", 1)[1].strip()
        elif ln.startswith("variant:"):
            body["variant"] = ln.split(":", 1)[1].strip()
        elif ln.startswith("top:"):
            body["top"] = ln.split(":", 1)[1].strip()
        elif ln.startswith("transistor "):
            parts = ln.split()
            idx = int(parts[1]) - 1
            if idx != len(transistors):
                raise PictureError("transistor ids must be consecutive from 1")
            rel = fwd = None
            for part in parts[2:]:
                if part.startswith("rel="):
                    rel = int(part[4:]) - 1
                elif part.startswith("dir="):
                    fwd = part[4:] == "f"
            if rel is None or fwd is None:
                raise PictureError("transistor line missing rel=/dir=: %r" % ln)
            transistors.append((rel, fwd))
        elif ln.startswith("wire "):
            parts = ln.split()
            if len(parts) != 5 or parts[3] != "->":
                raise PictureError("malformed wire line: %r" % ln)
            wires.append((parts[1], _parse_port(parts[2]), _parse_port(parts[4])))
        else:
            raise PictureError("unrecognized line: %r" % ln)
    for field in ("pres", "variant", "top"):
        if field not in body:
            raise PictureError("missing %s line" % field)
    sym_part, _, rel_part = body["pres"].partition(";")
    alphabet = "".join(sym_part.split())
    rels = []
    for chunk in rel_part.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        lhs, _, rhs = chunk.partition("=")
        rels.append((lhs.strip(), rhs.strip()))
    pres = Presentation(alphabet, tuple(rels))
    plain = []
    for sym, s, d in wires:
        plain.append((s, d))
    p = make_picture(pres, body["variant"], body["top"], transistors, plain)
    for sym, s, d in wires:
        if _port_symbol(pres, body["top"], p.transistors, s) != sym:
            raise PictureError("wire label %r does not match its ports" % sym)
    return p


def _parse_port(text):
    parts = text.split(".")
    if parts[0] == "frame":
        if len(parts) != 3 or parts[1] not in ("top", "bot"):
            raise PictureError("bad frame port %r" % text)
        return ("T" if parts[1] == "top" else "B", int(parts[2]) - 1)
    if len(parts) != 3 or parts[1] not in ("top", "bot"):
        raise PictureError("bad transistor port %r" % text)
    return ("t" if parts[1] == "top" else "b", int(parts[0]) - 1, int(parts[2]) - 1)


def equal_mod_dipoles(p1, p2):
    """Whether two pictures with the same frame have the same reduced form."""
    if p1.pres != p2.pres or p1.variant != p2.variant:
        raise FrameMismatchError("presentation/variant mismatch")
    if p1.top != p2.top or p1.bottom != p2.bottom:
        raise FrameMismatchError("frame words differ")
    return reduce_picture(p1)._key == reduce_picture(p2)._key


# ---------------------------------------------------------------------------
# surgery used by the complex: removing/attaching maximal transistors


def bottom_order(p):
    """Frame-bottom sources listed left to right."""
    out = [None] * p.n_bottom
    for s, d in p.wires:
        if d[0] == "B":
            out[d[1]] = s
    return out


def remove_maximal_transistor(p, k):
    """Remove a maximal transistor; its top wires drop to the frame bottom.

    Returns (picture, provenance) where provenance[i] tells where new
    frame-bottom position i came from: ('kept', old_index) or
    ('exposed', j) for the j-th top port of the removed transistor.
    """
    if p.children[k]:
        raise PictureError("transistor %d is not maximal" % k)
    order = bottom_order(p)
    mine = [i for i, s in enumerate(order) if s[0] == "b" and s[1] == k]
    n = len(order)
    m = len(mine)
    tokens = [("kept", i) for i in range(n)]
    exposed = [("exposed", j) for j in range(len(p.top_label(k)))]
    if p.variant == PLANAR:
        if mine != list(range(mine[0], mine[0] + m)):
            raise PictureError("planar maximal transistor with split bottom run")
        if [order[i][2] for i in mine] != list(range(m)):
            raise PictureError("planar maximal transistor with twisted bottom run")
        tokens[mine[0] : mine[0] + m] = exposed
    elif p.variant == CYCLIC:
        start = None
        for i in mine:
            if order[i][2] == 0:
                start = i
        if start is None or any(
            order[(start + d) % n] != ("b", k, d) for d in range(m)
        ):
            raise PictureError("cyclic maximal transistor with split bottom run")
        if start + m <= n:
            tokens[start : start + m] = exposed
        else:
            head = (start + m) % n
            tokens = tokens[head:start] + exposed
    else:
        at = min(mine)
        mine_set = set(mine)
        kept = [t for i, t in enumerate(tokens) if i not in mine_set]
        tokens = kept[:at] + exposed + kept[at:]

    def renum(port):
        if port[0] in ("t", "b"):
            kk = port[1]
            return (port[0], kk - (kk > k), port[2])
        return port

    slot = {tok: i for i, tok in enumerate(tokens)}
    wires = []
    for s, d in p.wires:
        if s[0] == "b" and s[1] == k:
            continue
        if d[0] == "t" and d[1] == k:
            wires.append((renum(s), ("B", slot[("exposed", d[2])])))
        elif d[0] == "B":
            wires.append((renum(s), ("B", slot[("kept", d[1])])))
        else:
            wires.append((renum(s), renum(d)))
    transistors = tuple(t for i, t in enumerate(p.transistors) if i != k)
    out = _make_trusted(p.pres, p.variant, p.top, transistors, wires)
    return out, tokens


def attach_transistor(p, rel_idx, fwd, fb_positions):
    """Attach a new maximal transistor consuming the given frame-bottom slots.

    fb_positions lists the frame-bottom indices consumed by the new
    transistor's top ports, in port order.  For the planar variant they
    must be consecutive ascending, for cyclic consecutive modulo the
    bottom length; braided accepts any distinct positions.  The new bottom
    wires take the place of the consumed run.
    """
    s_top = p.pres.side(rel_idx, fwd, top=True)
    s_bot = p.pres.side(rel_idx, fwd, top=False)
    m = len(s_top)
    if len(fb_positions) != m or len(set(fb_positions)) != m:
        raise PictureError("need %d distinct frame-bottom positions" % m)
    n = p.n_bottom
    order = bottom_order(p)
    for j, i in enumerate(fb_positions):
        sym = _port_symbol(p.pres, p.top, p.transistors, order[i])
        if sym != s_top[j]:
            raise PictureError("label mismatch at frame-bottom %d" % i)
    if p.variant == PLANAR:
        first = fb_positions[0]
        if list(fb_positions) != list(range(first, first + m)):
            raise PictureError("planar attachment must consume a consecutive run")
    elif p.variant == CYCLIC:
        first = fb_positions[0]
        if list(fb_positions) != [(first + d) % n for d in range(m)]:
            raise PictureError("cyclic attachment must consume a cyclic run")
    k = len(p.transistors)
    consumed = set(fb_positions)
    kept = [("kept", i) for i in range(n) if i not in consumed]
    new = [("new", j) for j in range(len(s_bot))]
    first = fb_positions[0]
    if p.variant == CYCLIC and first + m > n:
        tokens = kept + new
    else:
        at = sum(1 for i in range(first) if i not in consumed)
        tokens = kept[:at] + new + kept[at:]
    slot = {tok: i for i, tok in enumerate(tokens)}
    wires = []
    for s, d in p.wires:
        if d[0] == "B":
            if d[1] in consumed:
                wires.append((s, ("t", k, fb_positions.index(d[1]))))
            else:
                wires.append((s, ("B", slot[("kept", d[1])])))
        else:
            wires.append((s, d))
    for j in range(len(s_bot)):
        wires.append((("b", k, j), ("B", slot[("new", j)])))
    transistors = p.transistors + ((rel_idx, fwd),)
    return _make_trusted(p.pres, p.variant, p.top, transistors, wires)


def creates_dipole_with_upper(p, k):
    """Whether transistor k is the lower half of a dipole in p."""
    bot_len = [len(p.bottom_label(i)) for i in range(len(p.transistors))]
    top_len = [len(p.top_label(i)) for i in range(len(p.transistors))]
    return (
        _dipole_at(p.transistors, p.pres, p.src2dst, p.dst2src, bot_len, top_len, k)
        is not None
    )


def sub_picture(p, keep):
    """The picture spanned by a downward-closed transistor subset.

    Removed transistors take their bottom wires with them; wires that fed
    them become frame-bottom wires of the result, ordered by the canonical
    traversal.  Returns (picture, provenance) with provenance[i] one of
    ('fb', old_frame_bottom_index) or ('cut', old_top_port).
    """
    keep = frozenset(keep)
    for k in keep:
        for parent in p.parents[k]:
            if parent not in keep:
                raise PictureError("subset is not downward closed")
    survivors = sorted(keep)
    renum = {k: i for i, k in enumerate(survivors)}
    src2dst = {}
    dangling = {}
    for s, d in p.wires:
        if s[0] == "b" and s[1] not in keep:
            continue
        s2 = ("b", renum[s[1]], s[2]) if s[0] == "b" else s
        if d[0] == "t":
            if d[1] in keep:
                src2dst[s2] = ("t", renum[d[1]], d[2])
            else:
                src2dst[s2] = None
                dangling[s2] = ("cut", d)
        else:
            src2dst[s2] = None
            dangling[s2] = ("fb", d[1])
    transistors = tuple(p.transistors[k] for k in survivors)
    bot_len = {}
    for i, (rel, fwd) in enumerate(transistors):
        bot_len[i] = len(p.pres.side(rel, fwd, top=False))
    # canonical traversal fixes the new bottom order
    provenance = []
    wires = []
    num = {}
    stack = [("T", i) for i in reversed(range(len(p.top)))]
    while stack:
        src = stack.pop()
        dst = src2dst[src]
        if dst is None:
            wires.append((src, ("B", len(provenance))))
            provenance.append(dangling[src])
        else:
            wires.append((src, dst))
            k = dst[1]
            if k not in num:
                num[k] = True
                stack.extend(("b", k, j) for j in reversed(range(bot_len[k])))
    out = _make_trusted(p.pres, p.variant, p.top, transistors, wires)
    return out, provenance
