"""Bitmask helpers for subsets of variable indices {1..k}.

A subset is an int whose bit i-1 is set iff variable i is in the subset, so
masks range over 1..2^k - 1 for nonempty subsets and numeric order is the
canonical subset order used everywhere (serialization, reports, vectors).
"""

from __future__ import annotations

from typing import Iterator


def mask_of(indices) -> int:
    m = 0
    for i in indices:
        if i < 1:
            raise ValueError(f"variable indices are 1-based, got {i}")
        m |= 1 << (i - 1)
    return m


def indices_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def nonempty_masks(k: int) -> Iterator[int]:
    return iter(range(1, 1 << k))


def mask_label(mask: int) -> str:
    """Human-readable subset, e.g. {1,3}."""

    return "{" + ",".join(str(i) for i in indices_of(mask)) + "}"
