"""Tree pictures over <x | x = xx> and their bracket shorthand.

A positive tree picture is a picture consisting only of forward
transistors (carets); it is the same data as a finite binary tree whose
carets are addressed by 0/1 strings from the root.  The bracket shorthand
writes a leaf as ``.`` and a caret as ``(L R)``.
"""

from squier.picture import (
    BRAIDED,
    CYCLIC,
    PLANAR,
    PRES_XX,
    PictureError,
    _make_trusted,
    identity_picture,
)


def is_caret_set(addresses):
    """Downward-closed set of binary addresses (i.e. a binary tree)."""
    s = set(addresses)
    for a in s:
        if a and a[:-1] not in s:
            return False
        if any(ch not in "01" for ch in a):
            return False
    return (not s) or ("" in s)


def leaves_of(carets):
    """Leaf addresses of a caret set, in left-to-right order."""
    s = set(carets)
    if not s:
        return [""]
    out = []

    def walk(a):
        if a in s:
            walk(a + "0")
            walk(a + "1")
        else:
            out.append(a)

    walk("")
    return out


def tree_picture(carets, variant=PLANAR):
    """The positive tree picture with the given caret address set.

    The dangling wires are attached to the frame bottom in leaf order, so
    the result is an (x, x^k)-picture with k = number of leaves.
    """
    carets = frozenset(carets)
    if not is_caret_set(carets):
        raise PictureError("caret addresses must be downward closed over {0,1}")
    if not carets:
        return identity_picture(PRES_XX, "x", variant)
    ids = {a: i for i, a in enumerate(sorted(carets))}
    wires = []
    leaf_count = 0

    def source_of(a):
        # wire source feeding address a: the parent caret's port, or frame top
        if a == "":
            return ("T", 0)
        return ("b", ids[a[:-1]], int(a[-1]))

    for a in sorted(carets):
        wires.append((source_of(a), ("t", ids[a], 0)))
    for leaf in leaves_of(carets):
        wires.append((source_of(leaf), ("B", leaf_count)))
        leaf_count += 1
    transistors = tuple((0, True) for _ in range(len(carets)))
    return _make_trusted(PRES_XX, variant, "x", transistors, wires)


def parse_bracket(text):
    """Parse '.'/'(L R)' bracket shorthand into a caret address set."""
    text = "".join(text.split())
    pos = 0

    def parse(addr):
        nonlocal pos
        if pos >= len(text):
            raise PictureError("unexpected end of bracket expression")
        ch = text[pos]
        if ch == ".":
            pos += 1
            return []
        if ch != "(":
            raise PictureError("expected '.' or '(' at %d" % pos)
        pos += 1
        left = parse(addr + "0")
        right = parse(addr + "1")
        if pos >= len(text) or text[pos] != ")":
            raise PictureError("expected ')' at %d" % pos)
        pos += 1
        return [addr] + left + right

    carets = parse("")
    if pos != len(text):
        raise PictureError("trailing text after bracket expression")
    return frozenset(carets)


def to_bracket(carets):
    carets = set(carets)

    def render(addr):
        if addr in carets:
            return "(%s %s)" % (render(addr + "0"), render(addr + "1"))
        return "."

    return render("")


def vine(side, length):
    """Caret set of a vine: root plus `length` carets descending one way."""
    ch = "0" if side == "L" else "1"
    return frozenset([""] + [ch * i for i in range(1, length + 1)])


def full_carets(depth):
    """Caret set of the full binary tree with 2^depth leaves."""
    out = set()
    level = [""]
    for _ in range(depth):
        out.update(level)
        level = [a + b for a in level for b in "01"]
    return frozenset(out)


def caret_address_map(picture):
    """Transistor id -> binary address for a positive tree picture, else None."""
    if picture.caret_addresses is None:
        return None
    addr = {}
    root = picture.src2dst[("T", 0)]
    if root[0] == "t":
        addr[root[1]] = ""
        stack = [root[1]]
        while stack:
            k = stack.pop()
            for j in (0, 1):
                d = picture.src2dst[("b", k, j)]
                if d[0] == "t":
                    addr[d[1]] = addr[k] + str(j)
                    stack.append(d[1])
    return addr
