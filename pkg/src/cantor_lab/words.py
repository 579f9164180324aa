"""Finite binary words and eventually periodic infinite words.

A finite word is a plain ``str`` over ``'0'``/``'1'``; the empty word is ``""``.
Infinite words are only ever handled through :class:`DescribedPoint`, which
stores ``u·v^ω`` exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterator, Optional

from .report import PASS, REFUTED, Report

__all__ = [
    "PSI_LISTED",
    "check_psi",
    "check_word",
    "all_words",
    "psi",
    "psi_inv",
    "s_seq",
    "density_witness",
    "card",
    "reverse",
    "is_symmetric",
    "factor_occurs",
    "common_prefix_len",
    "DescribedPoint",
]


def check_word(w: str) -> str:
    if not isinstance(w, str) or w.strip("01"):
        raise ValueError(f"not a binary word: {w!r}")
    return w


def all_words(n: int) -> Iterator[str]:
    """Words of length ``n`` in lexicographic order."""
    if n == 0:
        yield ""
        return
    for i in range(1 << n):
        yield format(i, f"0{n}b")


def psi(n: int) -> str:
    """The n-th word when 2^{<ω} is listed by length, then lexicographically."""
    if n < 0:
        raise ValueError("psi is defined on naturals")
    length = (n + 1).bit_length() - 1
    offset = n - ((1 << length) - 1)
    return format(offset, f"0{length}b") if length else ""


def psi_inv(w: str) -> int:
    check_word(w)
    return (1 << len(w)) - 1 + (int(w, 2) if w else 0)


@lru_cache(maxsize=4096)
def s_seq(n: int) -> str:
    """The dense sequence: psi(n) padded with zeros to length n."""
    w = psi(n)
    return w + "0" * (n - len(w))


def density_witness(t: str) -> int:
    """An index n with t a prefix of s_seq(n); canonically psi_inv(t)."""
    return psi_inv(t)


def card(s: str) -> int:
    return s.count("1")


def reverse(s: str) -> str:
    return s[::-1]


def is_symmetric(s: str) -> bool:
    return s == s[::-1]


def factor_occurs(s: str, t: str) -> Optional[int]:
    """Least l such that s is a prefix of t with its first l letters dropped."""
    idx = t.find(s)
    return None if idx < 0 else idx


def common_prefix_len(a: str, b: str) -> int:
    n = min(len(a), len(b))
    i = 0
    while i < n and a[i] == b[i]:
        i += 1
    return i


def _primitive_root(v: str) -> str:
    n = len(v)
    for d in range(1, n + 1):
        if n % d == 0 and v[:d] * (n // d) == v:
            return v[:d]
    return v


@dataclass(frozen=True, order=True)
class DescribedPoint:
    """The infinite binary word ``pre · period^ω``, kept in canonical form.

    Canonical form has a primitive period and the shortest possible preperiod,
    so structural equality coincides with equality of the infinite words.
    """

    pre: str
    period: str

    def __post_init__(self):
        check_word(self.pre)
        check_word(self.period)
        if not self.period:
            raise ValueError("period must be nonempty")
        pre, period = self.pre, _primitive_root(self.period)
        while pre and pre[-1] == period[-1]:
            pre = pre[:-1]
            period = period[-1] + period[:-1]
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "period", period)

    @classmethod
    def parse(cls, text: str) -> "DescribedPoint":
        """Parse the ``"pre|period"`` form, e.g. ``"01|0"`` for 010^ω."""
        if "|" not in text:
            raise ValueError(f"described point needs 'pre|period': {text!r}")
        pre, period = text.split("|", 1)
        return cls(pre, period)

    @classmethod
    def finite(cls, w: str, tail: str = "0") -> "DescribedPoint":
        return cls(w, tail)

    def __str__(self) -> str:
        return f"{self.pre}|{self.period}"

    def __getitem__(self, i: int) -> str:
        if i < 0:
            raise IndexError(i)
        if i < len(self.pre):
            return self.pre[i]
        return self.period[(i - len(self.pre)) % len(self.period)]

    def bit(self, i: int) -> int:
        return 1 if self[i] == "1" else 0

    def prefix(self, n: int) -> str:
        if n <= len(self.pre):
            return self.pre[:n]
        k = n - len(self.pre)
        reps = -(-k // len(self.period))
        return self.pre + (self.period * reps)[:k]

    def drop(self, n: int) -> "DescribedPoint":
        """The shifted word with its first n letters removed."""
        if n <= len(self.pre):
            return DescribedPoint(self.pre[n:], self.period)
        k = (n - len(self.pre)) % len(self.period)
        return DescribedPoint("", self.period[k:] + self.period[:k])

    def with_prefix(self, w: str) -> "DescribedPoint":
        return DescribedPoint(w + self.pre, self.period)

    def replace_prefix(self, old_len: int, new: str) -> "DescribedPoint":
        """Drop the first ``old_len`` letters and put ``new`` in front."""
        return self.drop(old_len).with_prefix(new)

    def flip(self, i: int) -> "DescribedPoint":
        head = self.prefix(i + 1)
        head = head[:i] + ("0" if head[i] == "1" else "1")
        return self.replace_prefix(i + 1, head)

    def horizon(self, other: "DescribedPoint") -> tuple[int, int]:
        """``(start, span)``: from ``start`` on, both words repeat with period ``span``."""
        start = max(len(self.pre), len(other.pre))
        a, b = len(self.period), len(other.period)
        return start, a * b // gcd(a, b)

    def diff_positions(self, other: "DescribedPoint") -> tuple[list[int], bool]:
        """Positions where the words differ before the periodic zone, and
        whether they also differ somewhere in it (hence infinitely often)."""
        start, span = self.horizon(other)
        diffs = [i for i in range(start) if self[i] != other[i]]
        tail = any(self[i] != other[i] for i in range(start, start + span))
        return diffs, tail

    def eventually_zero(self) -> bool:
        return self.period == "0"


PSI_LISTED = ("", "0", "1", "00", "01", "10", "11")


def check_psi(max_len: int = 14, seq_max: int = 1 << 15, density_len: int = 10) -> Report:
    """Bijectivity on short words, lengths of s_n, density and the listed values."""
    params = {"max_len": max_len, "seq_max": seq_max, "density_len": density_len}
    top = (1 << (max_len + 1)) - 1
    seen = set()
    for n in range(top):
        w = psi(n)
        if len(w) > max_len or w in seen or psi_inv(w) != n:
            return Report("words.psi", REFUTED, params, {"reason": "bijection", "n": n})
        seen.add(w)
    if len(seen) != top:
        return Report("words.psi", REFUTED, params, {"reason": "not onto"})
    for n in range(seq_max + 1):
        if len(s_seq(n)) != n:
            return Report("words.psi", REFUTED, params, {"reason": "length", "n": n})
    for L in range(density_len + 1):
        for t in all_words(L):
            if not s_seq(density_witness(t)).startswith(t):
                return Report("words.psi", REFUTED, params, {"reason": "density", "word": t})
    listed = [psi(n) for n in range(len(PSI_LISTED))]
    if tuple(listed) != PSI_LISTED:
        return Report("words.psi", REFUTED, params, {"reason": "listed values", "got": listed})
    return Report("words.psi", PASS, params, {"words": top})
