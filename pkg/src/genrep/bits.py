"""Python-int bitsets over element indices."""

from __future__ import annotations

import numpy as np


def from_indices(idx) -> int:
    idx = np.asarray(idx, dtype=np.int64).ravel()
    if idx.size == 0:
        return 0
    flags = np.zeros(int(idx.max()) + 1, dtype=bool)
    flags[idx] = True
    return int.from_bytes(np.packbits(flags, bitorder="little").tobytes(), "little")


def to_indices(mask: int) -> np.ndarray:
    if mask == 0:
        return np.zeros(0, dtype=np.int64)
    nbytes = (mask.bit_length() + 7) // 8
    flags = np.unpackbits(np.frombuffer(mask.to_bytes(nbytes, "little"), dtype=np.uint8),
                          bitorder="little")
    return np.nonzero(flags)[0].astype(np.int64)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def subset(a: int, b: int) -> bool:
    return a & ~b == 0
