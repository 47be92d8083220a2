"""Semigroup pictures, diagram complexes, and their boundary combinatorics.

The calculus implemented here is the one underlying Thompson's groups
F, T and V: pictures over a semigroup presentation, dipole rewriting to
canonical forms, the cubical complexes the groups act on, hyperplane and
half-space combinatorics, truncated boundary profiles, and a sparse
Hilbert-space embedding of the vertex set.
"""

from squier.picture import (
    PLANAR,
    CYCLIC,
    BRAIDED,
    Presentation,
    Picture,
    DipoleOccurrence,
    PictureError,
    identity_picture,
    concatenate,
    invert_picture,
    find_dipoles,
    reduce_picture,
    insert_dipole,
    canonical_serialize,
    equal_mod_dipoles,
    parse_picture,
    PRES_XX,
)

__all__ = [
    "PLANAR",
    "CYCLIC",
    "BRAIDED",
    "Presentation",
    "Picture",
    "DipoleOccurrence",
    "PictureError",
    "identity_picture",
    "concatenate",
    "invert_picture",
    "find_dipoles",
    "reduce_picture",
    "insert_dipole",
    "canonical_serialize",
    "equal_mod_dipoles",
    "parse_picture",
    "PRES_XX",
]
