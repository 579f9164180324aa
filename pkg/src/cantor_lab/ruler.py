"""Ruler sequences, the Louveau family and finitely described index sets.

Index sets are infinite subsets of the naturals containing 0.  Two shapes are
supported: residue classes (:class:`Modular`) and partial-sum sets
``{sum_{i<l} (1 + beta(i)) : l}`` of a described sequence beta (:class:`SBeta`).
"""

from __future__ import annotations

import random
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Any, Iterable

import numpy as np

from ._kernels import ruler_word
from .report import PASS, REFUTED, Report
from .words import DescribedPoint

AlphaSpec = DescribedPoint

__all__ = [
    "check_ruler_periodicity",
    "check_palindromes",
    "random_alpha",
    "AlphaSpec",
    "ruler_val",
    "gamma_alpha",
    "beta_alpha",
    "gamma_bytes",
    "beta_bytes",
    "beta_word",
    "BetaSpec",
    "Periodic",
    "Louveau",
    "Shift",
    "IndexSet",
    "SBeta",
    "Modular",
    "OMEGA",
    "s_beta_member",
    "modular_member",
    "sspec_from_json",
    "alpha_from_json",
    "alpha_to_json",
]


def ruler_val(i: int) -> int:
    """2-adic valuation of i+1."""
    if i < 0:
        raise ValueError("ruler_val is defined on naturals")
    k = i + 1
    return (k & -k).bit_length() - 1


def gamma_alpha(alpha: DescribedPoint, n: int) -> int:
    if n % 2 == 0:
        return (n // 2) % 2
    return alpha.bit((n - 1) // 2)


def beta_alpha(alpha: DescribedPoint, i: int) -> int:
    return gamma_alpha(alpha, ruler_val(i))


def gamma_bytes(alpha: DescribedPoint, length: int) -> bytes:
    return bytes(gamma_alpha(alpha, n) for n in range(length))


def beta_bytes(alpha: DescribedPoint, n: int) -> bytes:
    """beta_alpha restricted to [0, n) as bytes of 0/1 values."""
    return ruler_word(gamma_bytes(alpha, max(1, n.bit_length()) + 1), n)


def beta_word(alpha: DescribedPoint, n: int) -> str:
    return beta_bytes(alpha, n).translate(_TO_ASCII).decode("ascii")


_TO_ASCII = bytes.maketrans(b"\x00\x01", b"01")


# sequences beta: N -> N


class BetaSpec:
    def value(self, i: int) -> int:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Periodic(BetaSpec):
    pre: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "pre", tuple(int(v) for v in self.pre))
        object.__setattr__(self, "period", tuple(int(v) for v in self.period))
        if not self.period:
            raise ValueError("period must be nonempty")
        if any(v < 0 for v in self.pre + self.period):
            raise ValueError("beta takes natural values")

    def value(self, i: int) -> int:
        if i < len(self.pre):
            return self.pre[i]
        return self.period[(i - len(self.pre)) % len(self.period)]

    def to_json(self) -> dict:
        return {"kind": "periodic", "pre": list(self.pre), "period": list(self.period)}


@dataclass(frozen=True)
class Louveau(BetaSpec):
    alpha: DescribedPoint

    def value(self, i: int) -> int:
        return beta_alpha(self.alpha, i)

    def to_json(self) -> dict:
        return {"kind": "louveau", "alpha": alpha_to_json(self.alpha)}


@dataclass(frozen=True)
class Shift(BetaSpec):
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("shift must be a natural")

    def value(self, i: int) -> int:
        return i + self.n

    def to_json(self) -> dict:
        return {"kind": "shift", "n": self.n}


# index sets


class IndexSet:
    """An infinite set of naturals containing 0, with decidable membership."""

    def member(self, n: int) -> bool:
        raise NotImplementedError

    def indicator(self, upto: int) -> bytes:
        """Byte i is 1 iff i is a member, for i <= upto."""
        return bytes(1 if self.member(i) else 0 for i in range(upto + 1))

    def members_upto(self, upto: int) -> list[int]:
        ind = self.indicator(upto)
        return [i for i, b in enumerate(ind) if b]

    def __contains__(self, n: int) -> bool:
        return n >= 0 and self.member(n)

    def to_json(self) -> dict:
        raise NotImplementedError

    def label(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Modular(IndexSet):
    """``{n : n mod m in {0} ∪ F}``."""

    m: int
    F: frozenset = frozenset()

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 1:
            raise ValueError("modulus must be at least 1")
        F = frozenset(int(v) for v in self.F)
        if any(v < 1 or v >= self.m for v in F):
            raise ValueError("residues must lie in 1..m-1")
        object.__setattr__(self, "F", F)

    def member(self, n: int) -> bool:
        r = n % self.m
        return r == 0 or r in self.F

    def indicator(self, upto: int) -> bytes:
        row = bytes(1 if (r == 0 or r in self.F) else 0 for r in range(self.m))
        reps = upto // self.m + 1
        return (row * reps)[: upto + 1]

    def to_json(self) -> dict:
        if self.m == 1:
            return {"kind": "omega"}
        return {"kind": "modular", "m": self.m, "F": sorted(self.F)}

    def label(self) -> str:
        if self.m == 1:
            return "omega"
        return f"mod({self.m},{{{','.join(map(str, sorted(self.F)))}}})"


OMEGA = Modular(1)


@dataclass(frozen=True, eq=False)
class SBeta(IndexSet):
    """Partial sums of 1 + beta(i); the sums are cached as they are needed."""

    beta: BetaSpec
    _sums: list = field(default_factory=lambda: [0], repr=False, compare=False)

    def __eq__(self, other):
        return isinstance(other, SBeta) and self.beta == other.beta

    def __hash__(self):
        return hash(("sbeta", self.beta))

    def _extend(self, upto: int) -> None:
        sums = self._sums
        while sums[-1] <= upto:
            sums.append(sums[-1] + 1 + self.beta.value(len(sums) - 1))

    def member(self, n: int) -> bool:
        self._extend(n)
        k = bisect_left(self._sums, n)
        return self._sums[k] == n

    def indicator(self, upto: int) -> bytes:
        self._extend(upto)
        out = bytearray(upto + 1)
        for v in self._sums:
            if v > upto:
                break
            out[v] = 1
        return bytes(out)

    def partial_sum(self, l: int) -> int:
        """sum_{i<l} (1 + beta(i))."""
        while len(self._sums) <= l:
            self._extend(self._sums[-1])
        return self._sums[l]

    def elements(self, count: int) -> list[int]:
        self.partial_sum(count - 1)
        return self._sums[:count]

    def to_json(self) -> dict:
        return self.beta.to_json()

    def label(self) -> str:
        b = self.beta
        if isinstance(b, Shift):
            return f"shift({b.n})"
        if isinstance(b, Louveau):
            return f"louveau({b.alpha})"
        return f"periodic({list(b.pre)},{list(b.period)})"


def s_beta_member(beta: BetaSpec, n: int) -> bool:
    """Scan partial sums of 1 + beta(i) until they reach n."""
    total, i = 0, 0
    while total < n:
        total += 1 + beta.value(i)
        i += 1
    return total == n


def modular_member(m: int, F: Iterable[int], n: int) -> bool:
    if m == 0:
        raise ValueError("modulus must be at least 1")
    return Modular(m, frozenset(F)).member(n)


def alpha_to_json(alpha: DescribedPoint) -> dict:
    return {"pre": alpha.pre, "period": alpha.period}


def alpha_from_json(obj: Any) -> DescribedPoint:
    if isinstance(obj, str):
        return DescribedPoint.parse(obj)
    if isinstance(obj, dict) and "period" in obj:
        return DescribedPoint(str(obj.get("pre", "")), str(obj["period"]))
    raise ValueError(f"cannot read an alpha description from {obj!r}")


def sspec_from_json(obj: Any) -> IndexSet:
    """Decode the JSON description of an index set."""
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError(f"index set description must be an object with 'kind': {obj!r}")
    kind = obj["kind"]
    try:
        if kind == "omega":
            return OMEGA
        if kind == "modular":
            return Modular(int(obj["m"]), frozenset(int(v) for v in obj.get("F", [])))
        if kind == "shift":
            return SBeta(Shift(int(obj["n"])))
        if kind == "louveau":
            return SBeta(Louveau(alpha_from_json(obj["alpha"])))
        if kind == "periodic":
            return SBeta(Periodic(tuple(obj.get("pre", [])), tuple(obj["period"])))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed index set description {obj!r}") from exc
    raise ValueError(f"unknown index set kind {kind!r}")


def check_ruler_periodicity(n_max: int = 12, l_max: int = 64) -> Report:
    """ruler_val(2^n l + i) = ruler_val(i) for i < 2^n - 1."""
    params = {"n_max": n_max, "l_max": l_max}
    checked = 0
    for n in range(n_max + 1):
        i = np.arange((1 << n) - 1, dtype=np.int64)
        if i.size == 0:
            continue
        base = _v2(i + 1)
        for l in range(l_max + 1):
            bad = np.nonzero(_v2((l << n) + i + 1) != base)[0]
            if bad.size:
                return Report("ruler.periodicity", REFUTED, params, {"n": n, "l": l, "i": int(bad[0])})
            checked += i.size
    return Report("ruler.periodicity", PASS, params, {"checked": checked})


def _v2(x: np.ndarray) -> np.ndarray:
    low = x & -x
    return np.log2(low.astype(np.float64)).astype(np.int64)


def random_alpha(rng) -> DescribedPoint:
    pre = "".join(rng.choice("01") for _ in range(rng.randint(0, 8)))
    period = "".join(rng.choice("01") for _ in range(rng.randint(1, 4)))
    return DescribedPoint(pre, period)


def check_palindromes(n_max: int = 14, samples: int = 50, seed: int = 0) -> Report:
    """β_α of length 2^n - 1 reads the same backwards."""
    rng = random.Random(f"palindromes-{seed}")
    params = {"n_max": n_max, "samples": samples, "seed": seed}
    for _ in range(samples):
        alpha = random_alpha(rng)
        full = beta_bytes(alpha, (1 << n_max) - 1)
        for n in range(n_max + 1):
            w = full[: (1 << n) - 1]
            if w != w[::-1]:
                return Report("ruler.palindromes", REFUTED, params, {"alpha": str(alpha), "n": n})
    return Report("ruler.palindromes", PASS, params, {})
