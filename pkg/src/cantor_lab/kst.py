"""Shift-graph rearrangement maps built from nested index sets.

A family fixes S_0 ⊇ S_1 ⊇ ... and injections f_n: S_n -> S_n minus S_{n+1}.
The map g_n reads α at f_n(k) for k in S_n and leaves other coordinates alone.
Words are truncated at a horizon N; a coordinate whose source lies beyond the
horizon (or is itself unknown) is written ``?``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .report import PASS, REFUTED, Report

__all__ = [
    "UNKNOWN",
    "NestedFamily",
    "Pow2Family",
    "POW2",
    "family_check",
    "g_eval",
    "composition_law_check",
    "triple_law_check",
    "cylinder_stability_check",
    "random_words",
]

UNKNOWN = "?"


class NestedFamily:
    name = "family"

    def member(self, n: int, k: int) -> bool:
        raise NotImplementedError

    def f(self, n: int, k: int) -> int:
        raise NotImplementedError

    def members(self, n: int, N: int) -> list[int]:
        return [k for k in range(N) if self.member(n, k)]


@dataclass(frozen=True)
class Pow2Family(NestedFamily):
    """S_n = positive multiples of 2^n, f_n(2^n m) = 2^n (2m - 1)."""

    name = "pow2"

    def member(self, n: int, k: int) -> bool:
        return k > 0 and k % (1 << n) == 0

    def f(self, n: int, k: int) -> int:
        if not self.member(n, k):
            raise ValueError(f"{k} is not in S_{n}")
        m = k >> n
        return (2 * m - 1) << n

    def members(self, n: int, N: int) -> list[int]:
        return list(range(1 << n, N, 1 << n))


POW2 = Pow2Family()
FAMILIES = {"pow2": POW2}


def family_check(fam: NestedFamily, n_max: int = 8, horizon: int = 1 << 12) -> Report:
    params = {"family": fam.name, "n_max": n_max, "horizon": horizon}
    sets = [set(fam.members(n, horizon + 1)) for n in range(n_max + 2)]
    for n in range(n_max + 1):
        if not sets[n + 1] <= sets[n]:
            return Report("kst.family", REFUTED, params, {"reason": "not nested", "n": n})
        layer = sets[n] - sets[n + 1]
        if len(layer) < 2:
            return Report("kst.family", REFUTED, params, {"reason": "thin layer", "n": n, "size": len(layer)})
        images = [fam.f(n, k) for k in sorted(sets[n])]
        if len(set(images)) != len(images):
            return Report("kst.family", REFUTED, params, {"reason": "f not injective", "n": n})
        for k, v in zip(sorted(sets[n]), images):
            if not fam.member(n, v) or fam.member(n + 1, v):
                return Report("kst.family", REFUTED, params, {"reason": "f leaves layer", "n": n, "k": k})
    # no horizon point lies in every S_n
    n = 0
    while sets_n := fam.members(n, horizon + 1):
        n += 1
        if n > horizon + 1:
            return Report("kst.family", REFUTED, params, {"reason": "intersection nonempty", "points": sets_n[:4]})
    return Report("kst.family", PASS, params, {"empty_from": n})


def g_eval(fam: NestedFamily, n: int, alpha: str, N: int | None = None) -> str:
    """g_n on the first N letters of α; sources at or past N come out as ``?``."""
    N = len(alpha) if N is None else N
    if len(alpha) != N:
        raise ValueError("word length must equal the horizon")
    out = list(alpha)
    for k in fam.members(n, N):
        src = fam.f(n, k)
        out[k] = alpha[src] if src < N else UNKNOWN
    return "".join(out)


def _agree(u: str, v: str) -> tuple[int, int | None]:
    """Number of positions known on both sides, and the first disagreement among them."""
    known = 0
    for i, (a, b) in enumerate(zip(u, v)):
        if a == UNKNOWN or b == UNKNOWN:
            continue
        known += 1
        if a != b:
            return known, i
    return known, None


def random_words(N: int, count: int, seed: int) -> list[str]:
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=(count, N), dtype=np.uint8)
    return ["".join("01"[b] for b in row) for row in bits]


def composition_law_check(
    fam: NestedFamily, m: int, n: int, N: int = 256, samples: int = 100, seed: int = 0
) -> Report:
    """g_m(g_n(α)) = g_m(α) wherever both sides are determined."""
    if not m < n:
        raise ValueError("composition law needs m < n")
    params = {"family": fam.name, "m": m, "n": n, "N": N, "samples": samples, "seed": seed}
    determined = 0
    for alpha in random_words(N, samples, seed):
        lhs = g_eval(fam, m, g_eval(fam, n, alpha))
        rhs = g_eval(fam, m, alpha)
        known, bad = _agree(lhs, rhs)
        determined += known
        if bad is not None:
            return Report("kst.composition", REFUTED, params, {"word": alpha, "position": bad})
    return Report("kst.composition", PASS, params, {"determined": determined})


def triple_law_check(
    fam: NestedFamily, m: int, n: int, p: int, N: int = 256, samples: int = 100, seed: int = 0
) -> Report:
    """g_m(g_n(g_p(α))) = g_m(α) for m < n and m < p."""
    if not (m < n and m < p):
        raise ValueError("triple law needs m < n and m < p")
    params = {"family": fam.name, "m": m, "n": n, "p": p, "N": N, "samples": samples, "seed": seed}
    for alpha in random_words(N, samples, seed):
        lhs = g_eval(fam, m, g_eval(fam, n, g_eval(fam, p, alpha)))
        _, bad = _agree(lhs, g_eval(fam, m, alpha))
        if bad is not None:
            return Report("kst.triple", REFUTED, params, {"word": alpha, "position": bad})
    return Report("kst.triple", PASS, params, {})


def cylinder_stability_check(
    fam: NestedFamily, n: int, s: str, N: int = 256, samples: int = 100, seed: int = 0
) -> Report:
    """g_n maps extensions of s to extensions of s, provided s is shorter than min S_n."""
    low = fam.members(n, N)
    if low and not len(s) < low[0]:
        raise ValueError(f"|s| = {len(s)} is not below min S_{n} = {low[0]}")
    if len(s) > N:
        raise ValueError("s is longer than the horizon")
    params = {"family": fam.name, "n": n, "s": s, "N": N, "samples": samples, "seed": seed}
    for tail in random_words(N - len(s), samples, seed):
        image = g_eval(fam, n, s + tail)
        head = image[: len(s)]
        if any(a != UNKNOWN and a != b for a, b in zip(head, s)):
            return Report("kst.stability", REFUTED, params, {"word": s + tail})
    return Report("kst.stability", PASS, params, {})
