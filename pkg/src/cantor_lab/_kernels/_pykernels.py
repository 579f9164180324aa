"""Reference implementations of the hot loops (numpy, no compiled code)."""

from __future__ import annotations

import numpy as np

P_REFLEXIVE, P_IRREFLEXIVE, P_SYMMETRIC, P_ANTISYMMETRIC, P_TRANSITIVE = range(5)


def ruler_word(gamma: bytes, n: int) -> bytes:
    """First n letters of i -> gamma[v2(i+1)] as a bytes object of 0/1 values."""
    if n <= 0:
        return b""
    if n.bit_length() > len(gamma):
        raise ValueError("gamma too short for the requested length")
    i = np.arange(1, n + 1, dtype=np.int64)
    low = i & -i
    # exact: low is a power of two well inside float precision
    val = np.log2(low.astype(np.float64)).astype(np.int64)
    table = np.frombuffer(gamma, dtype=np.uint8)
    return table[val].tobytes()


def rewrite_grid(stages, depth: int) -> np.ndarray:
    """Push every word of length ``depth`` through a sequence of rewrite stages.

    Words are integers with bit j holding letter j.  Each stage is a list of
    ``(src, src_len, dst)`` triples; a word is rewritten by the rule whose
    source it extends, and becomes undefined (-1) if no rule applies.
    """
    x = np.arange(1 << depth, dtype=np.int64)
    alive = np.ones(x.shape, dtype=bool)
    for rules in stages:
        out = np.full(x.shape, -1, dtype=np.int64)
        hit = np.zeros(x.shape, dtype=bool)
        for src, ln, dst in rules:
            if ln > depth:
                continue
            mask = (1 << ln) - 1
            m = alive & ((x & mask) == src)
            out[m] = (x[m] & ~mask) | dst
            hit |= m
        alive &= hit
        x = np.where(alive, out, -1)
    return x


def _bit(masks: np.ndarray, idx: int) -> np.ndarray:
    return (masks >> np.uint64(idx)) & np.uint64(1)


def relation_profiles(masks, n: int) -> np.ndarray:
    """Property bitmask (reflexive .. transitive) for each relation mask."""
    masks = np.asarray(masks, dtype=np.uint64)
    ok = [np.ones(masks.shape, dtype=bool) for _ in range(5)]
    for a in range(n):
        d = _bit(masks, a * n + a).astype(bool)
        ok[P_REFLEXIVE] &= d
        ok[P_IRREFLEXIVE] &= ~d
    for a in range(n):
        for b in range(n):
            ab = _bit(masks, a * n + b).astype(bool)
            ba = _bit(masks, b * n + a).astype(bool)
            ok[P_SYMMETRIC] &= ~ab | ba
            if a != b:
                ok[P_ANTISYMMETRIC] &= ~(ab & ba)
            for c in range(n):
                bc = _bit(masks, b * n + c).astype(bool)
                ac = _bit(masks, a * n + c).astype(bool)
                ok[P_TRANSITIVE] &= ~(ab & bc) | ac
    out = np.zeros(masks.shape, dtype=np.uint8)
    for j in range(5):
        out |= ok[j].astype(np.uint8) << j
    return out


KINDS = ("r", "rp", "s", "sp")


def transform_relations(masks, n: int, kind: str) -> np.ndarray:
    """Doubled relations on n*2 points; point (x, i) has index x + n*i."""
    if kind not in KINDS:
        raise ValueError(f"unknown transform kind {kind!r}")
    if 2 * n * 2 * n > 64:
        raise ValueError("doubled relation does not fit in 64 bits")
    masks = np.asarray(masks, dtype=np.uint64)
    m = 2 * n
    out = np.zeros(masks.shape, dtype=np.uint64)
    if kind in ("r", "s"):
        for p in range(m):
            out |= np.uint64(1 << (p * m + p))
    for x in range(n):
        for y in range(n):
            b = _bit(masks, x * n + y)
            src, dst = x, y + n
            out |= b << np.uint64(src * m + dst)
            if kind in ("s", "sp"):
                out |= b << np.uint64(dst * m + src)
    return out
