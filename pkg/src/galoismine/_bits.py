"""Bitmask helpers shared by the mining modules."""
from __future__ import annotations

from typing import Iterable


def to_mask(items: Iterable[int]) -> int:
    mask = 0
    for i in items:
        mask |= 1 << i
    return mask


def from_mask(mask: int) -> frozenset:
    return frozenset(iter_bits(mask))


def iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def sort_key(itemset) -> tuple:
    """Size first, then the sorted tuple of ids."""
    s = tuple(sorted(itemset))
    return (len(s), s)


def _label_key(label: str):
    s = str(label)
    if s.lstrip("-").isdigit():
        return (0, int(s), "")
    return (1, 0, s)


def labelled(labels, itemset) -> list:
    """Labels of ``itemset`` in label order (numeric labels numerically)."""
    return sorted((labels[i] for i in itemset), key=_label_key)


def label_sort_key(labels, itemset) -> tuple:
    """Size first, then the labels in label order."""
    return (len(itemset), [_label_key(x) for x in labelled(labels, itemset)])
