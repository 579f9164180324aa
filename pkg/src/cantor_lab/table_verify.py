"""Independent checker for reduction tables.

Nothing here is shared with the construction: relations, flips, the dense
sequence and graph intersections are recomputed from their definitions.  Every
violation is listed, not just the first.
"""

from __future__ import annotations

from itertools import product
from typing import Optional

import numpy as np

from .report import PASS, REFUTED, Report
from .ruler import IndexSet

__all__ = ["verify_table", "table_relation", "graph_meets"]


def _dense(n: int) -> str:
    # length-lex enumeration of finite words, padded with zeros to length n
    length = (n + 1).bit_length() - 1
    w = format(n - (1 << length) + 1, f"0{length}b") if length else ""
    return w + "0" * (n - length)


def _ones(w: str) -> int:
    return w.count("1")


def _domain_ok(family: str, S: Optional[IndexSet], q: int, prefix: str) -> bool:
    if family == "as":
        return S.member(_ones(prefix))
    return prefix == _dense(q)


def table_relation(family: str, S: Optional[IndexSet], s: str, t: str) -> bool:
    """s ℜ t on words of equal length: equal, or t is s with one 0 raised at an allowed k."""
    if s == t:
        return True
    diff = [i for i, (a, b) in enumerate(zip(s, t)) if a != b]
    if len(diff) != 1:
        return False
    k = diff[0]
    return s[k] == "0" and _domain_ok(family, S, k, s[:k])


def graph_meets(family: str, S: Optional[IndexSet], B: str, a: str, b: str, q: int) -> bool:
    """Is there α in N_a ∩ B with α(q) = 0, the domain test passing on α[:q], and the
    raised point β in N_b ∩ B?"""
    if len(B) > q:
        # α and β differ at q, so they cannot both extend B
        return False
    if len(b) > q:
        if b[q] != "1":
            return False
        b = b[:q] + "0" + b[q + 1 :]
    words = sorted((a, B, b), key=len)
    merged = words[-1]
    if not all(merged.startswith(w) for w in words[:-1]):
        return False
    if len(merged) > q and merged[q] != "0":
        return False
    head = merged[:q]
    if family == "as":
        K = _ones(head)
        F = q - len(head)
        return any(S.member(x) for x in range(K, K + F + 1))
    return _dense(q).startswith(head)


def _window(S: IndexSet, c: int, p: int) -> bool:
    return all(S.member(j) == S.member(c + j) for j in range(p + 1))


def _raise(a: str, n: int) -> Optional[str]:
    if len(a) <= n or a[n] != "0":
        return None
    return a[:n] + "1" + a[n + 1 :]


def _as_matrix(addrs: list[str]) -> tuple[np.ndarray, np.ndarray]:
    L = max((len(a) for a in addrs), default=0)
    M = np.zeros((len(addrs), max(L, 1)), dtype=np.uint8)
    for i, a in enumerate(addrs):
        if a:
            M[i, : len(a)] = np.frombuffer(a.encode(), dtype=np.uint8) - 48
    return M, np.array([len(a) for a in addrs], dtype=np.int64)


def verify_table(table, max_violations: int = 10_000) -> Report:
    """Check the defining conditions of a reduction table up to its complete level.

    ``table`` needs attributes ``instance`` (family, S, B), ``U``, ``phi``,
    ``theta`` and ``complete_level``.
    """
    inst = table.instance
    family, S, B = inst.family, inst.S, inst.B
    U, phi, thetas = table.U, list(table.phi), table.theta
    depth = table.complete_level
    params = {"family": family, "B": B, "depth": depth}
    bad: list[dict] = []

    def flag(kind: str, **info) -> None:
        if len(bad) < max_violations:
            bad.append({"kind": kind, **info})

    if any(b <= a for a, b in zip(phi, phi[1:])) or any(v < 0 for v in phi):
        # the remaining conditions presuppose a strictly increasing φ
        flag("phi-monotone", phi=phi)
        return Report("synth.verify", REFUTED, params, {"violations": bad, "count": 1})
    if len(phi) < depth:
        flag("phi-length", phi=phi)
        depth = len(phi)
    if family == "as" and (thetas is None or len(thetas) < depth):
        flag("theta-length")
        depth = 0
    if U.get("") != B:
        flag("root", got=U.get(""))
    for j in range(depth):
        if family == "as":
            th = thetas[j]
            if not (S.member(th) and _window(S, th, j)):
                flag("window", level=j, theta=th)

    for L in range(1, depth + 1):
        words = ["".join(w) for w in product("01", repeat=L)]
        missing = [s for s in words if s not in U]
        for s in missing:
            flag("missing", word=s)
        if missing:
            continue
        for s in words:
            a = U[s]
            if not a.startswith(U[s[:-1]]):
                flag("i", word=s)
            if len(a) < L:
                flag("ii", word=s)
            if not a.startswith(B):
                flag("inside-B", word=s)
        # (iii) along every related pair
        for s in words:
            for k in range(L):
                if s[k] != "0" or not _domain_ok(family, S, k, s[:k]):
                    continue
                t = s[:k] + "1" + s[k + 1 :]
                a, b = U[s], U[t]
                n = phi[k]
                if len(a) <= n:
                    flag("iii-depth", pair=[s, t])
                    continue
                if not _domain_ok(family, S, n, a[:n]):
                    flag("iii-domain", pair=[s, t])
                img = _raise(a, n)
                if img is None or img != b or not img.startswith(B):
                    flag("iii", pair=[s, t])
                if family == "as" and _ones(a[:n]) != thetas[k] + _ones(s[:k]):
                    flag("plus", pair=[s, t])
        # (iv): unrelated pairs are disjoint and stay off the graphs
        addrs = [U[s] for s in words]
        M, lens = _as_matrix(addrs)
        cols = np.arange(M.shape[1])
        for i, s in enumerate(words):
            common = np.minimum(lens, lens[i])
            mism = (M != M[i]) & (cols[None, :] < common[:, None])
            counts = mism.sum(axis=1)
            for l in np.nonzero(counts <= 1)[0]:
                l = int(l)
                if l == i:
                    continue
                t = words[l]
                if table_relation(family, S, s, t):
                    continue
                if counts[l] == 0:
                    if i < l or table_relation(family, S, t, s):
                        flag("iv-diagonal", pair=[s, t])
                    continue
                q = int(np.argmax(mism[l]))
                if graph_meets(family, S, B, addrs[i], addrs[l], q):
                    flag("iv" if q < L else "iv-strong", pair=[s, t], q=q)
    status = PASS if not bad else REFUTED
    return Report("synth.verify", status, params, {"violations": bad, "count": len(bad)})
