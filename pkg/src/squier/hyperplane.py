"""Hyperplanes of the diagram complex via their minimal vertices.

A hyperplane is the square-equivalence class of an edge; it is encoded by
its minimal vertex, the unique vertex below the edge having exactly one
maximal transistor.  Separation from the base vertex, the half-space
order and half-space intersection all reduce to the vertex order.
"""

from dataclasses import dataclass
from functools import cached_property

from squier.complex import Vertex, lub, min_vertex_key, vertex_leq
from squier.picture import sub_picture
from squier.trees import tree_picture


class HyperplaneError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Hyperplane:
    """A hyperplane, represented by its minimal vertex."""

    min_vertex: Vertex

    def __post_init__(self):
        p = self.min_vertex.picture
        if len(p.maximal_transistors) != 1:
            raise HyperplaneError(
                "a minimal vertex has exactly one maximal transistor"
            )

    @cached_property
    def key(self):
        return min_vertex_key(self.min_vertex.picture)

    @cached_property
    def address(self):
        """Binary caret address when the minimal vertex is a tree, else None."""
        return self.key[1] if self.key[0] == "@" else None

    @property
    def variant(self):
        return self.min_vertex.variant

    def __eq__(self, other):
        if not isinstance(other, Hyperplane):
            return NotImplemented
        return self.key == other.key and self.variant == other.variant

    def __hash__(self):
        return hash((self.key, self.variant))

    def __repr__(self):
        if self.address is not None:
            return "@%s" % self.address
        return "<Hyperplane %s>" % self.min_vertex.key_text


def hyperplane_at_address(address, variant="planar"):
    """The hyperplane of the caret at a binary address (tree pictures)."""
    carets = {address[:i] for i in range(len(address) + 1)}
    return Hyperplane(Vertex(tree_picture(carets, variant)))


def min_vertex(v, t):
    """The hyperplane dual to transistor t of vertex v."""
    p = v.picture
    if not 0 <= t < len(p.transistors):
        raise HyperplaneError("unknown transistor id %d" % t)
    q, _prov = sub_picture(p, p.downset(t))
    return Hyperplane(Vertex(q))


def hyperplanes_below(v):
    """The hyperplanes separating v from the base vertex, one per transistor."""
    return frozenset(min_vertex(v, t) for t in range(len(v.picture.transistors)))


def separates(h, v):
    """Whether v and the base vertex lie on opposite sides of h."""
    return vertex_leq(h.min_vertex, v)


def halfspace_leq(h1, h2):
    """The order on positive half-spaces: h1+ <= h2+ iff h2+ is contained in h1+."""
    return vertex_leq(h1.min_vertex, h2.min_vertex)


def halfspaces_intersect(h1, h2):
    """Whether the two positive half-spaces meet (a common upper bound exists)."""
    return lub(h1.min_vertex, h2.min_vertex) is not None
