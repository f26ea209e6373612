"""Injective string encodings for derived state and action ids.

Products, coproducts, cylinders and quotients all manufacture new ids out of
old ones.  Ids are plain strings, so composite ids are built as a
parenthesised, comma separated tuple in which the reserved characters of
each component are backslash-escaped.  Distinct tuples always give distinct
strings.
"""

from __future__ import annotations

_RESERVED = "\\,()"


def escape(part: str) -> str:
    out = []
    for ch in part:
        if ch in _RESERVED:
            out.append("\\")
        out.append(ch)
    return "".join(out)


def join_id(*parts: object) -> str:
    """Encode a tuple of ids as a single id, e.g. ``join_id("a", "0") == "(a,0)"``."""
    return "(" + ",".join(escape(str(p)) for p in parts) + ")"


def split_id(text: str) -> tuple[str, ...]:
    """Inverse of :func:`join_id`."""
    if len(text) < 2 or text[0] != "(" or text[-1] != ")":
        raise ValueError(f"not a composite id: {text!r}")
    parts: list[str] = []
    cur: list[str] = []
    body = text[1:-1]
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == "\\" and i + 1 < len(body):
            cur.append(body[i + 1])
            i += 2
            continue
        if ch == ",":
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
        i += 1
    parts.append("".join(cur))
    return tuple(parts)
