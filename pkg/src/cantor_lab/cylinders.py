"""Clopen subsets of Cantor space, prefix-rewrite maps and exact relation deciders.

Clopen sets are finite antichains of cylinder addresses.  Maps are finite sets
of equal-length prefix substitutions ``src -> dst``; the three families of
single-coordinate flips used throughout are exposed both as explicit rule sets
and as fast evaluators on deep cylinders and described points.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _kernels
from .report import PASS, REFUTED, Report
from .ruler import IndexSet
from .words import DescribedPoint, all_words, card, check_word, psi, s_seq

AlphaSpec = DescribedPoint

__all__ = [
    "AlphaSpec",
    "DescribedPoint",
    "ClopenSet",
    "PrefixRewriteMap",
    "FlipFamily",
    "FS",
    "F1",
    "GFlip",
    "build_fS",
    "build_f1",
    "build_gflip",
    "build_gprime",
    "gprime_support",
    "compose",
    "compose_path",
    "decide_relation",
    "RELATIONS",
    "is_reduced",
    "lemma27_check",
    "lemma27_sweep",
    "composition_domain_size",
    "commuting_check",
    "c1_graph_union_check",
    "closure_a1_check",
    "words_to_ints",
]


# clopen sets


def _canonical(addresses: Iterable[str]) -> tuple[str, ...]:
    addrs = sorted(set(addresses), key=lambda w: (len(w), w))
    kept: list[str] = []
    for w in addrs:
        if not any(w.startswith(v) for v in kept):
            kept.append(w)
    pool = set(kept)
    merged = True
    while merged:
        merged = False
        for w in sorted(pool, key=len, reverse=True):
            if w and w[-1] == "0" and w[:-1] + "1" in pool:
                pool -= {w, w[:-1] + "1"}
                pool.add(w[:-1])
                merged = True
                break
    return tuple(sorted(pool))


@dataclass(frozen=True)
class ClopenSet:
    """A finite union of cylinders in canonical form (sorted, merged antichain)."""

    addresses: tuple[str, ...] = ()

    def __post_init__(self):
        for w in self.addresses:
            check_word(w)
        object.__setattr__(self, "addresses", _canonical(self.addresses))

    @classmethod
    def of(cls, *addresses: str) -> "ClopenSet":
        return cls(tuple(addresses))

    @classmethod
    def full(cls) -> "ClopenSet":
        return cls(("",))

    @classmethod
    def empty(cls) -> "ClopenSet":
        return cls(())

    def is_empty(self) -> bool:
        return not self.addresses

    def is_cylinder(self) -> bool:
        return len(self.addresses) == 1

    def depth(self) -> int:
        return max((len(w) for w in self.addresses), default=0)

    def __or__(self, other: "ClopenSet") -> "ClopenSet":
        return ClopenSet(self.addresses + other.addresses)

    def __and__(self, other: "ClopenSet") -> "ClopenSet":
        out = []
        for a in self.addresses:
            for b in other.addresses:
                if a.startswith(b):
                    out.append(a)
                elif b.startswith(a):
                    out.append(b)
        return ClopenSet(tuple(out))

    def complement(self) -> "ClopenSet":
        out = []
        stack = [""]
        addrs = self.addresses
        while stack:
            w = stack.pop()
            if any(w.startswith(a) for a in addrs):
                continue
            if not any(a.startswith(w) for a in addrs):
                out.append(w)
                continue
            stack.extend((w + "0", w + "1"))
        return ClopenSet(tuple(out))

    def __sub__(self, other: "ClopenSet") -> "ClopenSet":
        return self & other.complement()

    def __le__(self, other: "ClopenSet") -> bool:
        return (self - other).is_empty()

    def contains_point(self, x: DescribedPoint) -> bool:
        return any(x.prefix(len(a)) == a for a in self.addresses)

    def refine(self, depth: int) -> list[str]:
        """All words of the given length whose cylinder lies in the set."""
        out = []
        for a in self.addresses:
            if len(a) > depth:
                raise ValueError("refinement depth below an address length")
            out.extend(a + w for w in all_words(depth - len(a)))
        return sorted(out)

    def __str__(self) -> str:
        if not self.addresses:
            return "{}"
        return " ∪ ".join(f"N[{a}]" for a in self.addresses)


# prefix rewrite maps


@dataclass(frozen=True)
class PrefixRewriteMap:
    """The partial injection ``src·γ -> dst·γ`` given by finitely many rules."""

    rules: tuple[tuple[str, str], ...]

    def __post_init__(self):
        rules = tuple(sorted((check_word(a), check_word(b)) for a, b in self.rules))
        for a, b in rules:
            if len(a) != len(b):
                raise ValueError(f"rule {a}->{b} changes length")
        srcs = [a for a, _ in rules]
        dsts = [b for _, b in rules]
        for side, ws in (("sources", srcs), ("targets", dsts)):
            for i, u in enumerate(ws):
                for v in ws[i + 1 :]:
                    if u.startswith(v) or v.startswith(u):
                        raise ValueError(f"rule {side} {u!r} and {v!r} are prefix-comparable")
        object.__setattr__(self, "rules", rules)

    def inverse(self) -> "PrefixRewriteMap":
        return PrefixRewriteMap(tuple((b, a) for a, b in self.rules))

    def domain(self) -> ClopenSet:
        return ClopenSet(tuple(a for a, _ in self.rules))

    def range(self) -> ClopenSet:
        return ClopenSet(tuple(b for _, b in self.rules))

    def image_of_cylinder(self, w: str) -> ClopenSet:
        out = []
        for a, b in self.rules:
            if w.startswith(a):
                out.append(b + w[len(a) :])
            elif a.startswith(w):
                out.append(b)
        return ClopenSet(tuple(out))

    def apply(self, x: ClopenSet) -> ClopenSet:
        out: tuple[str, ...] = ()
        for w in x.addresses:
            out += self.image_of_cylinder(w).addresses
        return ClopenSet(out)

    def preimage(self, x: ClopenSet) -> ClopenSet:
        return self.inverse().apply(x)

    def apply_point(self, x: DescribedPoint) -> Optional[DescribedPoint]:
        for a, b in self.rules:
            if x.prefix(len(a)) == a:
                return x.replace_prefix(len(a), b)
        return None

    def restrict(self, c: ClopenSet) -> "PrefixRewriteMap":
        """The restriction to ``c ∩ f^{-1}(c)``."""
        dom = self.domain() & self.preimage(c) & c
        rules = []
        for w in dom.addresses:
            for a, b in self.rules:
                if w.startswith(a):
                    rules.append((w, b + w[len(a) :]))
                elif a.startswith(w):
                    # N_w lies in the domain, so every finer rule under it survives whole
                    rules.append((a, b))
        return PrefixRewriteMap(tuple(rules))


def compose(g: PrefixRewriteMap, f: PrefixRewriteMap) -> PrefixRewriteMap:
    """Exact rule set for g∘f (f applied first)."""
    rules = []
    for a, b in f.rules:
        for c, d in g.rules:
            if b.startswith(c):
                rules.append((a, d + b[len(c) :]))
            elif c.startswith(b):
                rules.append((a + c[len(b) :], d))
    return PrefixRewriteMap(tuple(rules))


# single-coordinate flip families


class FlipFamily:
    """Maps f_n acting on coordinate n; ``allows(n, s)`` is the domain test on s = x[:n]."""

    name = "family"
    #: an involution flips in both directions and has no inverse of its own
    involution = False

    def allows(self, n: int, s: str) -> bool:
        raise NotImplementedError

    def rewrite_map(self, n: int) -> PrefixRewriteMap:
        if self.involution:
            return PrefixRewriteMap(
                tuple((s + "0", s + "1") for s in all_words(n)) + tuple((s + "1", s + "0") for s in all_words(n))
            )
        return PrefixRewriteMap(tuple((s + "0", s + "1") for s in self.prefixes(n)))

    def prefixes(self, n: int) -> list[str]:
        return [s for s in all_words(n) if self.allows(n, s)]

    def _bit_ok(self, bit: str, inverse: bool) -> bool:
        return self.involution or bit == ("1" if inverse else "0")

    def cylinder(self, n: int, w: str, inverse: bool = False) -> Optional[str]:
        """Image (or preimage) of N_w for |w| > n, or None when N_w misses the domain."""
        if len(w) <= n:
            raise ValueError(f"cylinder {w!r} is not deeper than coordinate {n}")
        if not self._bit_ok(w[n], inverse) or not self.allows(n, w[:n]):
            return None
        return w[:n] + ("1" if w[n] == "0" else "0") + w[n + 1 :]

    def point(self, n: int, x: DescribedPoint, inverse: bool = False) -> Optional[DescribedPoint]:
        if not self._bit_ok(x[n], inverse) or not self.allows(n, x.prefix(n)):
            return None
        return x.flip(n)

    def stage(self, n: int, inverse: bool = False) -> list[tuple[int, int, int]]:
        """Rules as (src, len, dst) integers with bit j = letter j, for the kernels."""
        f = self.rewrite_map(n)
        if inverse:
            f = f.inverse()
        return [(_word_int(a), len(a), _word_int(b)) for a, b in f.rules]


def _word_int(w: str) -> int:
    return int(w[::-1], 2) if w else 0


def words_to_ints(words: Sequence[str]) -> np.ndarray:
    return np.array([_word_int(w) for w in words], dtype=np.int64)


def _int_word(x: int, n: int) -> str:
    return format(x, f"0{n}b")[::-1] if n else ""


@dataclass(frozen=True)
class FS(FlipFamily):
    """f^S_n: s0γ -> s1γ when card(s) is in S."""

    S: IndexSet

    @property
    def name(self) -> str:
        return f"fS[{self.S.label()}]"

    def allows(self, n: int, s: str) -> bool:
        return card(s) in self.S


@dataclass(frozen=True)
class F1(FlipFamily):
    """f^1_n: s_n 0γ -> s_n 1γ for the dense sequence s_n."""

    name = "f1"

    def allows(self, n: int, s: str) -> bool:
        return s == s_seq(n)

    def prefixes(self, n: int) -> list[str]:
        return [s_seq(n)]


@dataclass(frozen=True)
class GFlip(FlipFamily):
    """g_n: flip coordinate n everywhere."""

    name = "gflip"
    involution = True

    def allows(self, n: int, s: str) -> bool:
        return True


def build_fS(S: IndexSet, n: int) -> PrefixRewriteMap:
    return FS(S).rewrite_map(n)


def build_f1(n: int) -> PrefixRewriteMap:
    return F1().rewrite_map(n)


def build_gflip(n: int) -> PrefixRewriteMap:
    return GFlip().rewrite_map(n)


def gprime_support(n: int) -> str:
    """n-th nonzero finitely supported word, listed in ψ order of words ending in 1."""
    k = -1
    i = 0
    while True:
        w = psi(i)
        if w.endswith("1"):
            k += 1
            if k == n:
                return w
        i += 1


def build_gprime(n: int) -> PrefixRewriteMap:
    """Set every coordinate in the n-th support to 1, where all of them are 0."""
    sup = gprime_support(n)
    rules = []
    for w in all_words(len(sup)):
        if all(not (a == "1" and b == "1") for a, b in zip(sup, w)):
            rules.append((w, "".join("1" if a == "1" else b for a, b in zip(sup, w))))
    return PrefixRewriteMap(tuple(rules))


# compositions at described points


def compose_path(
    S: IndexSet | FlipFamily,
    t: Sequence[int],
    eps: Sequence[int],
    x: DescribedPoint,
) -> Optional[DescribedPoint]:
    """f_{t(0)}^{eps(0)} ... f_{t(-1)}^{eps(-1)} (x); the rightmost map acts first."""
    if not t:
        raise ValueError("empty composition")
    if len(eps) != len(t):
        raise ValueError("one sign per index is needed")
    fam = S if isinstance(S, FlipFamily) else FS(S)
    y: Optional[DescribedPoint] = x
    for n, e in zip(reversed(t), reversed(eps)):
        y = fam.point(n, y, inverse=e < 0)
        if y is None:
            return None
    return y


# relations on described points

RELATIONS = ("AS", "A1", "C1", "E0", "L0", "Delta", "Pf", "L0prime")


def _single_split(x: DescribedPoint, y: DescribedPoint) -> Optional[int]:
    diffs, tail = x.diff_positions(y)
    if tail or len(diffs) != 1:
        return None
    k = diffs[0]
    return k if x[k] == "0" else None


def decide_relation(rel: str, x: DescribedPoint, y: Optional[DescribedPoint] = None, S: IndexSet | None = None) -> bool:
    """Exact membership of (x, y) in a named relation (of x alone for Pf)."""
    if rel == "Pf":
        return x.eventually_zero()
    if y is None:
        raise ValueError(f"relation {rel} needs two points")
    if rel == "Delta":
        return x == y
    if rel == "E0":
        return not x.diff_positions(y)[1]
    if rel == "L0":
        if x == y:
            return False
        i = 0
        while x[i] == y[i]:
            i += 1
        return x[i] == "0"
    if rel == "L0prime":
        start, span = x.horizon(y)
        return x != y and all(not (x[i] == "1" and y[i] == "0") for i in range(start + span))
    if rel in ("AS", "A1", "C1"):
        k = _single_split(x, y)
        if k is None:
            return False
        if rel == "C1":
            return True
        if rel == "A1":
            return x.prefix(k) == s_seq(k)
        if S is None:
            raise ValueError("AS needs an index set")
        return card(x.prefix(k)) in S
    raise ValueError(f"unknown relation {rel!r}")


# fixed points of reduced compositions


def is_reduced(v: Sequence[int], eps: Sequence[int]) -> bool:
    return all(v[i] != v[i + 1] or eps[i] != -eps[i + 1] for i in range(len(v) - 1))


def lemma27_check(v: Sequence[int], eps: Sequence[int], depth: int, family: FlipFamily | None = None) -> Report:
    """No depth-``depth`` cylinder in the domain of f_v^eps (v(0) first) is mapped to itself."""
    fam = family or F1()
    params = {"v": list(v), "eps": list(eps), "depth": depth, "family": fam.name}
    if not v or len(eps) != len(v):
        raise ValueError("v must be nonempty with one sign per entry")
    if not is_reduced(v, eps):
        raise ValueError(f"composition {list(v)} with signs {list(eps)} is not reduced")
    if depth <= max(v):
        raise ValueError("depth must exceed every index in v")
    stages = [fam.stage(n, inverse=e < 0) for n, e in zip(v, eps)]
    img = _kernels.rewrite_grid(stages, depth)
    src = np.arange(img.shape[0], dtype=np.int64)
    defined = img >= 0
    fixed = np.nonzero(defined & (img == src))[0]
    details = {"domain_size": int(defined.sum())}
    if fixed.size:
        details["fixed_cylinder"] = _int_word(int(fixed[0]), depth)
        return Report("cyl.lemma27", REFUTED, params, details)
    return Report("cyl.lemma27", PASS, params, details)


def composition_domain_size(v: Sequence[int], eps: Sequence[int], depth: int, family: FlipFamily | None = None) -> int:
    """Number of depth-``depth`` cylinders on which f_v^eps (v(0) first) is defined."""
    fam = family or F1()
    stages = [fam.stage(n, inverse=e < 0) for n, e in zip(v, eps)]
    return int((_kernels.rewrite_grid(stages, depth) >= 0).sum())


def lemma27_sweep(max_len: int = 4, max_index: int = 4, depth: int = 12, family: FlipFamily | None = None) -> Report:
    """lemma27_check over every reduced (v, eps) with |v| <= max_len and entries < max_index."""
    fam = family or F1()
    params = {"max_len": max_len, "max_index": max_index, "depth": depth, "family": fam.name}
    checked = 0
    for L in range(1, max_len + 1):
        for v in product(range(max_index), repeat=L):
            for eps in product((1, -1), repeat=L):
                if not is_reduced(v, eps):
                    continue
                r = lemma27_check(v, eps, depth, fam)
                checked += 1
                if not r.ok:
                    return Report("cyl.lemma27", REFUTED, params, dict(r.details, v=list(v), eps=list(eps)))
    return Report("cyl.lemma27", PASS, params, {"compositions": checked})


def commuting_check(family: FlipFamily, m: int, n: int, depth: int) -> Report:
    """f_m f_n = f_n f_m with matching domains on every depth-``depth`` cylinder."""
    if m == n:
        raise ValueError("commuting check needs m != n")
    if depth <= max(m, n):
        raise ValueError("depth must exceed both indices")
    params = {"family": family.name, "m": m, "n": n, "depth": depth}
    mn = _kernels.rewrite_grid([family.stage(n), family.stage(m)], depth)
    nm = _kernels.rewrite_grid([family.stage(m), family.stage(n)], depth)
    bad_dom = np.nonzero((mn >= 0) != (nm >= 0))[0]
    bad_val = np.nonzero((mn >= 0) & (nm >= 0) & (mn != nm))[0]
    details = {"shared_domain": int(((mn >= 0) & (nm >= 0)).sum())}
    if bad_val.size:
        details["disagreement"] = _int_word(int(bad_val[0]), depth)
        return Report("cyl.commuting", REFUTED, params, details)
    if bad_dom.size:
        details["domain_mismatch"] = _int_word(int(bad_dom[0]), depth)
        return Report("cyl.commuting", REFUTED, params, details)
    return Report("cyl.commuting", PASS, params, details)


def c1_graph_union_check(depth: int) -> Report:
    """Cylinder pairs meeting s(C1) are exactly those meeting some Gr(g_n)."""
    words = list(all_words(depth))

    def meets_sc1(x: str, y: str) -> bool:
        if x == y:
            return True  # split beyond the depth
        for k in range(depth):
            if x[:k] == y[:k] and x[k] != y[k] and x[k + 1 :] == y[k + 1 :]:
                return True
        return False

    graphs = set((w, w) for w in words)  # g_n with n >= depth
    for n in range(depth):
        g = build_gflip(n)
        for w in words:
            (img,) = g.image_of_cylinder(w).addresses
            graphs.add((w, img))
    for x, y in product(words, repeat=2):
        if meets_sc1(x, y) != ((x, y) in graphs):
            return Report("cyl.c1_union", REFUTED, {"depth": depth}, {"pair": [x, y]})
    return Report("cyl.c1_union", PASS, {"depth": depth}, {"pairs": len(words) ** 2})


def closure_a1_check(depth: int, points: Iterable[DescribedPoint] = ()) -> Report:
    """Cylinder pairs meeting A1 are the A1 splits plus the diagonal; on described
    pairs, meeting A1 at every depth up to the periodic horizon means A1 or equality."""
    params = {"depth": depth}
    words = list(all_words(depth))
    for x, y in product(words, repeat=2):
        meets = x == y or any(
            x[:k] == y[:k] == s_seq(k) and x[k] == "0" and y[k] == "1" and x[k + 1 :] == y[k + 1 :]
            for k in range(depth)
        )
        # brute force over split points; equal words need a split beyond the depth
        direct = any(
            x[:k] == s_seq(k) and y[:k] == s_seq(k) and x[k] == "0" and y[k] == "1" and x[k + 1 :] == y[k + 1 :]
            for k in range(depth)
        )
        if x == y:
            direct = any(s_seq(k).startswith(x) for k in range(depth, 1 << (depth + 1)))
        if meets != direct:
            return Report("cyl.closure_a1", REFUTED, params, {"pair": [x, y]})
    pts = list(points)
    for x in pts:
        for y in pts:
            start, span = x.horizon(y)
            # a periodic difference shows up twice within two periods
            d = start + 2 * span
            consistent = all(_meets_a1(x.prefix(r), y.prefix(r)) for r in range(d + 1))
            if consistent != (x == y or decide_relation("A1", x, y)):
                return Report("cyl.closure_a1", REFUTED, params, {"points": [str(x), str(y)]})
    return Report("cyl.closure_a1", PASS, params, {"pairs": len(words) ** 2, "points": len(pts)})


def _meets_a1(x: str, y: str) -> bool:
    if x == y:
        return True
    diff = [i for i in range(len(x)) if x[i] != y[i]]
    if len(diff) != 1:
        return False
    k = diff[0]
    return x[k] == "0" and x[:k] == s_seq(k)
