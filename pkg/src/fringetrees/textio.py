"""Text and binary serialization of trees.

Text grammar: ``Tree ::= "L" | "(" Tree Tree ")"``.  Whitespace between
tokens is ignored on input and never produced on output.

The binary framing is the pre-order shape as a bit sequence (1 = internal,
0 = leaf), prefixed by its bit length as a little-endian uint64.
"""

import struct

import numpy as np

from .tree import LEAF, Tree


class TreeParseError(ValueError):
    def __init__(self, message, pos):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


def parse_tree(text: str) -> Tree:
    left, right = [], []
    done = []      # node ids of finished subtrees awaiting a parent
    opens = []     # len(done) when each "(" was read
    seen_root = False
    for pos, ch in enumerate(text):
        if ch.isspace():
            continue
        if seen_root:
            raise TreeParseError("trailing input after complete tree", pos)
        if ch == "L":
            left.append(LEAF)
            right.append(LEAF)
            done.append(len(left) - 1)
        elif ch == "(":
            opens.append(len(done))
        elif ch == ")":
            if not opens:
                raise TreeParseError("unmatched ')'", pos)
            base = opens.pop()
            if len(done) - base != 2:
                raise TreeParseError(
                    f"internal node needs exactly 2 children, got {len(done) - base}", pos)
            r = done.pop()
            lch = done.pop()
            left.append(lch)
            right.append(r)
            done.append(len(left) - 1)
        else:
            raise TreeParseError(f"unexpected character {ch!r}", pos)
        if not opens and done:
            seen_root = True
    if opens:
        raise TreeParseError("unbalanced '(' at end of input", len(text))
    if not done:
        raise TreeParseError("empty input", len(text))
    return Tree(left, right, _trusted=True)


def format_tree(t: Tree) -> str:
    left, right = t.left.tolist(), t.right.tolist()
    out = []
    stack = [t.root]
    while stack:
        v = stack.pop()
        if v < 0:
            out.append(")")
        elif left[v] < 0:
            out.append("L")
        else:
            out.append("(")
            stack.append(-1)
            stack.append(right[v])
            stack.append(left[v])
    return "".join(out)


def preorder_bits(t: Tree) -> np.ndarray:
    """Pre-order shape bits (uint8 0/1)."""
    text = np.frombuffer(format_tree(t).encode("ascii"), dtype=np.uint8)
    keep = text != ord(")")
    return (text[keep] == ord("(")).astype(np.uint8)


def encode_binary(t: Tree) -> bytes:
    bits = preorder_bits(t)
    return struct.pack("<Q", len(bits)) + np.packbits(bits).tobytes()


def decode_binary(data: bytes) -> tuple[Tree, int]:
    """Decode one framed tree; returns the tree and bytes consumed."""
    if len(data) < 8:
        raise ValueError("truncated binary tree header")
    (nbits,) = struct.unpack_from("<Q", data)
    nbytes = (nbits + 7) // 8
    if len(data) < 8 + nbytes:
        raise ValueError("truncated binary tree payload")
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8, count=nbytes, offset=8))[:nbits]
    text = "".join("(" if b else "L" for b in bits.tolist())
    # re-insert closing brackets via a counting pass
    out = []
    pending = []
    for ch in text:
        out.append(ch)
        if ch == "(":
            pending.append(0)
            continue
        while pending:
            pending[-1] += 1
            if pending[-1] < 2:
                break
            pending.pop()
            out.append(")")
    if pending:
        raise ValueError("binary shape is not a complete tree")
    return parse_tree("".join(out)), 8 + nbytes
