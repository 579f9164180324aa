"""Doubling transforms of finite relations and the property-class split.

A relation on {0..n-1} is a set of ordered pairs; as a bitmask, pair (a, b)
is bit a*n + b.  The doubled ground set {0..n-1} x {0, 1} puts (x, i) at index
x + n*i.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from . import _kernels
from .report import PASS, REFUTED, Report

__all__ = [
    "PROPERTY_NAMES",
    "KINDS",
    "FiniteRelation",
    "transform",
    "check_properties",
    "classify_sigma",
    "confirm_sigma",
    "sigma_table",
    "transform_sweep",
    "EMPTY",
    "DIAGONAL",
    "EQUIVALENCE",
    "ADMISSIBLE",
]

PROPERTY_NAMES = ("reflexive", "irreflexive", "symmetric", "antisymmetric", "transitive")
KINDS = ("r", "rp", "s", "sp")

EMPTY = "empty-class"
DIAGONAL = "diagonal-only"
EQUIVALENCE = "equivalence-reducible"
ADMISSIBLE = "admissible"

# properties every transform must have, whatever A is
REQUIRED = {
    "r": frozenset({0, 3, 4}),
    "rp": frozenset({1, 3, 4}),
    "s": frozenset({0, 2}),
    "sp": frozenset({1, 2}),
}


@dataclass(frozen=True)
class FiniteRelation:
    n: int
    pairs: frozenset

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("ground set size must be a natural")
        pairs = frozenset((int(a), int(b)) for a, b in self.pairs)
        for a, b in pairs:
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise ValueError(f"pair {(a, b)} outside ground set of size {self.n}")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def of(cls, n: int, pairs) -> "FiniteRelation":
        return cls(n, frozenset(map(tuple, pairs)))

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "FiniteRelation":
        return cls(n, frozenset((a, b) for a in range(n) for b in range(n) if mask >> (a * n + b) & 1))

    @property
    def mask(self) -> int:
        return sum(1 << (a * self.n + b) for a, b in self.pairs)

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.pairs

    def to_json(self) -> dict:
        return {"n": self.n, "pairs": sorted([a, b] for a, b in self.pairs)}

    @classmethod
    def from_json(cls, obj) -> "FiniteRelation":
        if isinstance(obj, list):
            pairs = [tuple(p) for p in obj]
            n = 1 + max((max(p) for p in pairs), default=-1)
            return cls.of(n, pairs)
        return cls.of(int(obj["n"]), obj.get("pairs", []))


def _doubled(x: int, i: int, n: int) -> int:
    return x + n * i


def transform(kind: str, A: FiniteRelation) -> FiniteRelation:
    """R_A, R'_A, S_A or S'_A on the doubled ground set."""
    if kind not in KINDS:
        raise ValueError(f"unknown transform kind {kind!r}")
    n = A.n
    out = set()
    if kind in ("r", "s"):
        out.update((p, p) for p in range(2 * n))
    for x, y in A.pairs:
        u, v = _doubled(x, 0, n), _doubled(y, 1, n)
        out.add((u, v))
        if kind in ("s", "sp"):
            out.add((v, u))
    return FiniteRelation(2 * n, frozenset(out))


def check_properties(A: FiniteRelation) -> frozenset:
    """Indices of the properties A has, by a full pair and triple scan."""
    pts = range(A.n)
    R = A.pairs
    props = set()
    if all((a, a) in R for a in pts):
        props.add(0)
    if all((a, a) not in R for a in pts):
        props.add(1)
    if all((b, a) in R for a, b in R):
        props.add(2)
    if all(a == b or (b, a) not in R for a, b in R):
        props.add(3)
    if all((a, c) in R for a, b in R for b2, c in R if b == b2):
        props.add(4)
    return frozenset(props)


def classify_sigma(sigma) -> str:
    sigma = frozenset(sigma)
    if not sigma <= set(range(5)):
        raise ValueError("σ must be a subset of {0,1,2,3,4}")
    if {0, 1} <= sigma or sigma == {1, 2, 4}:
        return EMPTY
    if {2, 3} <= sigma:
        return DIAGONAL
    if sigma in ({0, 2, 4}, {2, 4}):
        return EQUIVALENCE
    return ADMISSIBLE


def _profiles_upto(max_n: int) -> list[tuple[int, np.ndarray, np.ndarray]]:
    out = []
    for n in range(1, max_n + 1):
        masks = np.arange(1 << (n * n), dtype=np.uint64)
        out.append((n, masks, _kernels.relation_profiles(masks, n)))
    return out


def confirm_sigma(sigma, max_n: int = 3) -> Report:
    """Exhaustive check of a syntactic verdict on all relations with at most max_n points.

    Empty and diagonal verdicts must hold for every relation with all the σ
    properties; an admissible verdict is backed by a nonempty relation off the
    diagonal."""
    sigma = frozenset(sigma)
    verdict = classify_sigma(sigma)
    need = sum(1 << j for j in sigma)
    params = {"sigma": sorted(sigma), "max_n": max_n}
    witness = None
    for n, masks, prof in _profiles_upto(max_n):
        sat = masks[(prof & need) == need]
        diag = np.uint64(sum(1 << (a * n + a) for a in range(n)))
        if verdict == EMPTY and np.any(sat != 0):
            bad = FiniteRelation.from_mask(n, int(sat[sat != 0][0]))
            return Report("struct.sigma", REFUTED, params, {"verdict": verdict, "counterexample": bad.to_json()})
        if verdict == DIAGONAL and np.any(sat & ~diag):
            bad = FiniteRelation.from_mask(n, int(sat[(sat & ~diag) != 0][0]))
            return Report("struct.sigma", REFUTED, params, {"verdict": verdict, "counterexample": bad.to_json()})
        if witness is None:
            off = sat[(sat & ~diag) != 0]
            if off.size:
                witness = FiniteRelation.from_mask(n, int(off[0]))
    if verdict in (ADMISSIBLE, EQUIVALENCE) and witness is None:
        return Report("struct.sigma", REFUTED, params, {"verdict": verdict, "reason": "no off-diagonal relation"})
    details = {"verdict": verdict}
    if witness is not None and verdict not in (EMPTY, DIAGONAL):
        details["witness"] = witness.to_json()
    return Report("struct.sigma", PASS, params, details)


def sigma_table() -> dict[str, str]:
    """Verdict for each of the 32 σ, keyed by the sorted member list."""
    out = {}
    for r in range(6):
        for sigma in combinations(range(5), r):
            out[",".join(map(str, sigma))] = classify_sigma(sigma)
    return out


def transform_sweep(n: int, backend: str | None = None, chunk: int = 1 << 14) -> Report:
    """Every relation on n points: required properties of each transform and the
    embedding (x, y) in A iff ((x,0), (y,1)) in T_A."""
    k = _kernels.get_backend(backend)
    total = 1 << (n * n)
    m = 2 * n
    params = {"n": n}
    for start in range(0, total, chunk):
        masks = np.arange(start, min(total, start + chunk), dtype=np.uint64)
        for kind in KINDS:
            T = k.transform_relations(masks, n, kind)
            prof = k.relation_profiles(T, m)
            need = sum(1 << j for j in REQUIRED[kind])
            bad = np.nonzero((prof & need) != need)[0]
            if bad.size:
                A = FiniteRelation.from_mask(n, int(masks[bad[0]]))
                return Report("struct.transforms", REFUTED, params, {"kind": kind, "A": A.to_json(), "reason": "profile"})
            for x, y in product(range(n), repeat=2):
                inA = (masks >> np.uint64(x * n + y)) & np.uint64(1)
                inT = (T >> np.uint64(_doubled(x, 0, n) * m + _doubled(y, 1, n))) & np.uint64(1)
                bad = np.nonzero(inA != inT)[0]
                if bad.size:
                    A = FiniteRelation.from_mask(n, int(masks[bad[0]]))
                    return Report(
                        "struct.transforms", REFUTED, params, {"kind": kind, "A": A.to_json(), "reason": "embedding"}
                    )
    return Report("struct.transforms", PASS, params, {"relations": total})
