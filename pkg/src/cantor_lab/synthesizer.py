"""Level-by-level construction of reduction tables.

A table assigns to every word s of length <= d a cylinder U_s inside the
restriction cylinder B, together with the indices φ(p) (and, for index-set
families, the card offsets θ(p)).  Level p+1 is built from level p: the words of
length p+1 are ordered by distance from θ_p 0 in the level tree, a fresh flip
index φ(p) is chosen, the root gets the cylinder of a witness γ, and every
other word receives the image of the root along its tree path.

All sets are single cylinders, so images are exact and the construction is
deterministic.  Failure to find φ(p) within the search bound yields a partial
table marked inconclusive.
"""

from __future__ import annotations

import hashlib
import json
from bisect import bisect_left
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Optional

from .conditions import window_identity
from .cylinders import F1, FS, FlipFamily
from .level_graph import Theta, level_ordering, neighbours, related
from .report import INCONCLUSIVE, PASS, TABLE_SCHEMA
from .ruler import IndexSet, sspec_from_json
from .words import card, check_word, psi_inv, s_seq

__all__ = [
    "SynthesisInstance",
    "ReductionTable",
    "InvariantViolation",
    "synthesize",
    "extract_u",
    "least_dense_index",
]


class InvariantViolation(AssertionError):
    """The construction reached a state its invariants rule out."""


@dataclass(frozen=True)
class SynthesisInstance:
    family: str
    depth: int
    S: Optional[IndexSet] = None
    B: str = ""
    phi_max: int = 1 << 20

    def __post_init__(self):
        if self.family not in ("as", "a1"):
            raise ValueError("family must be 'as' or 'a1'")
        if self.family == "as" and self.S is None:
            raise ValueError("the index-set family needs S")
        if self.family == "a1" and self.S is not None:
            raise ValueError("the dense family takes no index set")
        if self.depth < 0:
            raise ValueError("depth must be a natural")
        check_word(self.B)

    @property
    def theta(self) -> Theta:
        return Theta.ZEROS if self.family == "as" else Theta.DENSE

    def flips(self) -> FlipFamily:
        return FS(self.S) if self.family == "as" else F1()

    def to_json(self) -> dict:
        out = {"family": self.family, "depth": self.depth, "B": self.B, "phi_max": self.phi_max}
        if self.S is not None:
            out["S"] = self.S.to_json()
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "SynthesisInstance":
        S = sspec_from_json(obj["S"]) if obj.get("S") is not None else None
        return cls(obj["family"], int(obj["depth"]), S, obj.get("B", ""), int(obj.get("phi_max", 1 << 20)))


@dataclass
class ReductionTable:
    instance: SynthesisInstance
    U: dict[str, str]
    phi: list[int]
    theta: Optional[list[int]]
    complete_level: int
    status: str = PASS
    notes: dict = field(default_factory=dict)

    def digest(self) -> str:
        body = json.dumps({"U": self.U, "phi": self.phi, "theta": self.theta}, sort_keys=True)
        return hashlib.sha256(body.encode()).hexdigest()

    def to_json(self) -> dict:
        return {
            "schema": TABLE_SCHEMA,
            "instance": self.instance.to_json(),
            "U": dict(sorted(self.U.items(), key=lambda kv: (len(kv[0]), kv[0]))),
            "phi": list(self.phi),
            "theta": None if self.theta is None else list(self.theta),
            "complete_level": self.complete_level,
            "status": self.status,
            "notes": self.notes,
            "digest": self.digest(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ReductionTable":
        return cls(
            SynthesisInstance.from_json(obj["instance"]),
            dict(obj["U"]),
            list(obj["phi"]),
            None if obj.get("theta") is None else list(obj["theta"]),
            int(obj["complete_level"]),
            obj.get("status", PASS),
            dict(obj.get("notes", {})),
        )


def extract_u(table: ReductionTable, x: str) -> str:
    """Address of U_x: the depth-|x| approximation of the reduction map."""
    return table.U[x]


# choosing φ(p)


def least_dense_index(c: str, lo: int) -> int:
    """Least n >= max(lo, |c|) such that c is a prefix of s_n."""
    lo = max(lo, len(c))
    best = None
    t = len(c.rstrip("0"))
    # psi_inv grows with every appended letter, so the first prefix length
    # reaching lo is the best of the short candidates
    v = psi_inv(c[:t])
    for ell in range(t, len(c) + 1):
        if v >= lo:
            best = v
            break
        if ell < len(c):
            v = 2 * v + 1
    ell = len(c) + 1
    while True:
        pad = ell - len(c)
        n_min = psi_inv(c + "0" * pad)
        n_max = psi_inv(c + "1" * pad)
        if n_max >= lo:
            n = max(n_min, lo)
            return n if best is None else min(best, n)
        ell += 1


def _choose_as(S: IndexSet, c: str, lo: int, p: int, phi_max: int) -> Optional[tuple[int, str, int]]:
    lo = max(lo, len(c))
    base = card(c)
    for n0 in range(lo, phi_max + 1):
        free = n0 - len(c)
        # card(c) + free is the only new option at this n0
        for j in range(free + 1):
            x = base + j
            if x in S and window_identity(S, x, p):
                return n0, c + "0" * (free - j) + "1" * j + "0", x
    return None


def _choose_a1(c: str, lo: int, phi_max: int) -> Optional[tuple[int, str, None]]:
    n0 = least_dense_index(c, lo)
    if n0 > phi_max:
        return None
    return n0, s_seq(n0) + "0", None


# propagation along the level tree


def _flip_index(a: str, b: str) -> int:
    (k,) = [i for i in range(len(a)) if a[i] != b[i]]
    return k


def _propagate(
    theta: Theta,
    fam: FlipFamily,
    phi: list[int],
    order: list[str],
    root: int,
    root_addr: str,
    members: set[int],
) -> dict[int, str]:
    """Cylinders for every vertex in ``members`` by pushing the root's cylinder
    along tree edges: forward along a directed edge, backward against it."""
    pos = {t: i for i, t in enumerate(order)}
    out = {root: root_addr}
    queue = deque([root])
    while queue:
        m = queue.popleft()
        tm = order[m]
        for tq in neighbours(theta, tm):
            q = pos[tq]
            if q in out or q not in members:
                continue
            k = _flip_index(tm, tq)
            forward = related(theta, tm, tq)
            img = fam.cylinder(phi[k], out[m], inverse=not forward)
            if img is None:
                raise InvariantViolation(f"f_{phi[k]} undefined on U[{tm}] while propagating to {tq}")
            out[q] = img
            queue.append(q)
    return out


def _extends(a: str, b: str) -> bool:
    return a.startswith(b)


# fixed-point separation for the dense family


def _comparable_in(addr: str, pool: list[str], lengths: list[int], members: dict[str, int]) -> Optional[int]:
    """Index of some member comparable with addr (one prefixes the other), if any."""
    for ln in lengths:
        if ln <= len(addr) and addr[:ln] in members:
            return members[addr[:ln]]
    i = bisect_left(pool, addr)
    if i < len(pool) and pool[i].startswith(addr):
        return members[pool[i]]
    return None


def _level_conflict(theta: Theta, fam: FlipFamily, phi: list[int], order: list[str], cur: dict[int, str], B: str):
    """First pair (k, l) of unrelated words whose cylinders meet the diagonal or a
    graph f_q with q <= p; None when the level is clean."""
    p = len(order[0]) - 1
    members: dict[str, int] = {}
    for k in range(len(order)):
        if cur[k] in members:
            return members[cur[k]], k
        members[cur[k]] = k
    pool = sorted(members)
    lengths = sorted({len(a) for a in pool})
    # in a sorted list a prefix is followed by one of its extensions
    for a, b in zip(pool, pool[1:]):
        if b.startswith(a):
            return members[a], members[b]
    for k, tk in enumerate(order):
        a = cur[k]
        for q in range(min(p + 1, len(a))):
            if a[q] != "0" or not fam.allows(q, a[:q]):
                continue
            l = _comparable_in(a[:q] + "1" + a[q + 1 :], pool, lengths, members)
            if l is not None and l != k and not related(theta, tk, order[l]):
                return k, l
    return None


def _separate(
    theta: Theta,
    fam: FlipFamily,
    phi: list[int],
    order: list[str],
    cur: dict[int, str],
    B: str,
    conflict: Callable = _level_conflict,
    max_rounds: int = 64,
) -> tuple[dict[int, str], int]:
    """Shrink cylinders until no unrelated pair meets the diagonal or a low graph."""
    rounds = 0
    everyone = set(range(len(order)))
    while True:
        hit = conflict(theta, fam, phi, order, cur, B)
        if hit is None:
            return cur, rounds
        rounds += 1
        if rounds > max_rounds:
            raise InvariantViolation("fixed-point separation did not terminate")
        k, _ = hit
        best = None
        for bit in "01":
            trial = _propagate(theta, fam, phi, order, k, cur[k] + bit, everyone)
            if conflict(theta, fam, phi, order, trial, B) != hit:
                best = trial
                break
        cur = best if best is not None else _propagate(theta, fam, phi, order, k, cur[k] + "0", everyone)


# the construction


def synthesize(inst: SynthesisInstance, conflict: Callable | None = None) -> ReductionTable:
    theta = inst.theta
    fam = inst.flips()
    U: dict[str, str] = {"": inst.B}
    phi: list[int] = []
    thetas: Optional[list[int]] = [] if inst.family == "as" else None
    notes: dict = {"shrink_rounds": 0}
    for p in range(inst.depth):
        order = level_ordering(theta, p)
        c = U[order[0][:p]]
        lo = phi[-1] + 1 if phi else 0
        if inst.family == "as":
            pick = _choose_as(inst.S, c, lo, p, inst.phi_max)
        else:
            pick = _choose_a1(c, lo, inst.phi_max)
        if pick is None:
            notes["stuck_at_level"] = p
            return ReductionTable(inst, U, phi, thetas, p, INCONCLUSIVE, notes)
        n0, u00, th = pick
        phi.append(n0)
        if thetas is not None:
            thetas.append(th)
        if len(u00) < p + 1:
            u00 = u00 + "0" * (p + 1 - len(u00))
        cur = {0: u00}
        dist = _distances(theta, order[0])
        pos = {t: i for i, t in enumerate(order)}
        for n in range(1, len(order)):
            tn = order[n]
            # next vertex from t_n towards t_0
            r = min(pos[tq] for tq in neighbours(theta, tn) if dist[tq] == dist[tn] - 1)
            tr = order[r]
            if tn[:p] == tr[:p]:
                if n != 1 or r != 0:
                    raise InvariantViolation("top-coordinate edge away from the root")
                img = fam.cylinder(n0, cur[0])
                if img is None:
                    raise InvariantViolation("root cylinder outside the domain of f_φ(p)")
                cur = {1: img, 0: fam.cylinder(n0, img, inverse=True)}
                continue
            k = _flip_index(tr, tn)
            if related(theta, tr, tn):
                un = fam.cylinder(phi[k], cur[r])
            elif related(theta, tn, tr):
                if inst.family == "as":
                    raise InvariantViolation("backward edge towards the root in the zeros tree")
                un = fam.cylinder(phi[k], cur[r], inverse=True)
            else:
                raise InvariantViolation("path step is not an edge")
            if un is None:
                raise InvariantViolation(f"f_{phi[k]} undefined on U[{tr}]")
            back = fam.cylinder(phi[k], un, inverse=related(theta, tr, tn))
            if back == cur[r]:
                # maps along tree edges are bijections between cylinders, so
                # pushing U_n back reproduces every earlier set unchanged
                cur[n] = un
                continue
            new = _propagate(theta, fam, phi, order, n, un, set(range(n + 1)))
            for q, addr in cur.items():
                if not _extends(new[q], addr):
                    raise InvariantViolation(f"cylinder for {order[q]} grew while propagating")
            cur = new
        if inst.family == "a1" or conflict is not None:
            cur, rounds = _separate(theta, fam, phi, order, cur, inst.B, conflict or _level_conflict)
            notes["shrink_rounds"] += rounds
        for q, t in enumerate(order):
            if not _extends(cur[q], U[t[:p]]):
                raise InvariantViolation(f"U[{t}] escapes U[{t[:p]}]")
            U[t] = cur[q]
    return ReductionTable(inst, U, phi, thetas, inst.depth, PASS, notes)


_dist_cache: dict[tuple[Theta, str], dict[str, int]] = {}


def _distances(theta: Theta, root: str) -> dict[str, int]:
    key = (theta, root)
    if key not in _dist_cache:
        from .level_graph import bfs_layers

        _dist_cache[key] = bfs_layers(theta, root)
    return _dist_cache[key]
