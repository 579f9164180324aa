import json
import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cantor_lab.cylinders import decide_relation
from cantor_lab.report import INCONCLUSIVE, PASS, REFUTED
from cantor_lab.ruler import OMEGA, Louveau, Modular, SBeta
from cantor_lab.synthesizer import (
    ReductionTable,
    SynthesisInstance,
    extract_u,
    least_dense_index,
    synthesize,
)
from cantor_lab.table_verify import verify_table
from cantor_lab.words import DescribedPoint, s_seq

MATRIX_S = [OMEGA, Modular(2), Modular(3, frozenset({1})), SBeta(Louveau(DescribedPoint.parse("|0")))]


def words(L):
    return ["".join(w) for w in product("01", repeat=L)]


def kinds(report):
    return {v["kind"] for v in report.details["violations"]}


def copy(table):
    return ReductionTable.from_json(json.loads(json.dumps(table.to_json())))


# instances


def test_instance_validation():
    with pytest.raises(ValueError):
        SynthesisInstance("as", 2)
    with pytest.raises(ValueError):
        SynthesisInstance("a1", 2, OMEGA)
    with pytest.raises(ValueError):
        SynthesisInstance("xx", 2, OMEGA)
    with pytest.raises(ValueError):
        SynthesisInstance("as", -1, OMEGA)
    with pytest.raises(ValueError):
        SynthesisInstance("as", 1, OMEGA, "12")


def test_instance_json_round_trip():
    for inst in (SynthesisInstance("as", 3, Modular(3, frozenset({1})), "11"), SynthesisInstance("a1", 2, B="0")):
        assert SynthesisInstance.from_json(inst.to_json()) == inst


# expected tables


@pytest.mark.parametrize(
    "S,B,shift",
    [(OMEGA, "", 0), (OMEGA, "1", 1), (Modular(2), "11", 2)],
)
def test_expected_tables(S, B, shift):
    d = 2
    t = synthesize(SynthesisInstance("as", d, S, B))
    assert t.status == PASS
    assert t.phi == [n + shift for n in range(d)]
    assert t.theta == [shift] * d
    for L in range(d + 1):
        for s in words(L):
            assert t.U[s] == B + s
    assert verify_table(t).ok


def test_extract_u_examples():
    ident = synthesize(SynthesisInstance("as", 2, OMEGA))
    assert extract_u(ident, "01") == "01"
    one = synthesize(SynthesisInstance("as", 2, OMEGA, "1"))
    assert extract_u(one, "01") == "101"
    for x in words(2):
        assert extract_u(one, x).startswith(extract_u(one, x[:1]))


# φ choice in the dense family


def least_dense_oracle(c, lo):
    n = max(lo, len(c))
    while not s_seq(n).startswith(c):
        n += 1
    return n


@settings(max_examples=200)
@given(st.text(alphabet="01", max_size=9), st.integers(min_value=0, max_value=300))
def test_least_dense_index_matches_scan(c, lo):
    assert least_dense_index(c, lo) == least_dense_oracle(c, lo)


# round trip over the instance matrix


@pytest.mark.parametrize("S", MATRIX_S, ids=lambda S: json.dumps(S.to_json(), sort_keys=True))
@pytest.mark.parametrize("B", ["", "1", "11"])
def test_round_trip_as(S, B):
    t = synthesize(SynthesisInstance("as", 8, S, B))
    assert t.status == PASS and t.complete_level == 8
    assert all(b > a for a, b in zip(t.phi, t.phi[1:]))
    r = verify_table(t)
    assert r.ok, r.details["violations"][:3]


@pytest.mark.parametrize("B", ["", "0"])
def test_round_trip_a1(B):
    t = synthesize(SynthesisInstance("a1", 6, B=B))
    assert t.status == PASS and t.theta is None
    assert verify_table(t).ok


def test_a1_phi_values():
    assert synthesize(SynthesisInstance("a1", 8, B="0")).phi == [1, 3, 4, 7, 16, 19, 20, 31]


# reduction soundness against the relation decider


def sound(table, rel, S, d, tails):
    """Related source pairs map to related points; unrelated ones only meet graphs of index >= d."""

    def dec(a, b):
        return decide_relation(rel, a, b, S) if S is not None else decide_relation(rel, a, b)

    for x in words(d):
        for y in words(d):
            if x == y:
                continue
            ux, uy = extract_u(table, x), extract_u(table, y)
            pad = max(len(ux), len(uy))
            ux, uy = ux.ljust(pad, "0"), uy.ljust(pad, "0")
            for z in tails:
                src = dec(DescribedPoint(x + z, "0"), DescribedPoint(y + z, "0"))
                a, b = DescribedPoint(ux + z, "0"), DescribedPoint(uy + z, "0")
                assert a != b
                if src:
                    assert dec(a, b), (x, y, z)
                elif dec(a, b):
                    (q,) = [i for i in range(pad) if ux[i] != uy[i]]
                    assert q >= d, (x, y, z)


@pytest.mark.parametrize("S", MATRIX_S[:3], ids=["omega", "mod2", "mod3"])
def test_soundness_as(S):
    t = synthesize(SynthesisInstance("as", 4, S, "1"))
    sound(t, "AS", S, 4, ["", "1", "0110"])


def test_soundness_a1():
    t = synthesize(SynthesisInstance("a1", 4, B="0"))
    sound(t, "A1", None, 4, ["", "1", "0110"])


def test_a1_cylinders_disjoint():
    t = synthesize(SynthesisInstance("a1", 6))
    for L in range(1, 7):
        ws = words(L)
        for i, x in enumerate(ws):
            for y in ws[i + 1 :]:
                ux, uy = t.U[x], t.U[y]
                assert not ux.startswith(uy) and not uy.startswith(ux)


# verifier negative controls


def test_identity_table_passes():
    assert verify_table(synthesize(SynthesisInstance("as", 3, OMEGA))).ok


def test_iii_violation():
    t = synthesize(SynthesisInstance("as", 2, OMEGA, "1"))
    t.U["1"] = "100"
    r = verify_table(t)
    assert r.status == REFUTED and "iii" in kinds(r)


def test_non_increasing_phi_rejected_first():
    t = synthesize(SynthesisInstance("as", 2, OMEGA, "1"))
    t.phi = [2, 2]
    r = verify_table(t)
    assert r.status == REFUTED and kinds(r) == {"phi-monotone"}


@pytest.mark.parametrize(
    "inst",
    [SynthesisInstance("as", 3, OMEGA, "1"), SynthesisInstance("as", 3, Modular(2)), SynthesisInstance("a1", 3)],
    ids=["omega", "mod2", "a1"],
)
def test_every_bit_flip_detected(inst):
    base = synthesize(inst)
    for s, addr in base.to_json()["U"].items():
        for i in range(len(addr)):
            t = copy(base)
            t.U[s] = addr[:i] + ("1" if addr[i] == "0" else "0") + addr[i + 1 :]
            assert not verify_table(t).ok, (s, i)


def test_phi_and_theta_mutations_detected():
    base = synthesize(SynthesisInstance("as", 4, Modular(2), "1"))
    for j in range(4):
        for delta in (-1, 1):
            t = copy(base)
            t.phi[j] += delta
            assert not verify_table(t).ok
        t = copy(base)
        t.theta[j] += 1
        assert not verify_table(t).ok


def test_missing_entry_detected():
    t = synthesize(SynthesisInstance("as", 2, OMEGA))
    del t.U["01"]
    assert "missing" in kinds(verify_table(t))


# bounds and the shrink loop


def test_phi_bound_gives_partial_table():
    t = synthesize(SynthesisInstance("a1", 6, B="01", phi_max=100))
    assert t.status == INCONCLUSIVE
    assert t.complete_level == 4 == t.notes["stuck_at_level"]
    assert t.phi == [4, 9, 40, 79]
    assert verify_table(t).ok


def test_forced_shrink_rounds():
    def force(theta, fam, phi, order, cur, B):
        if len(order) == 4 and len(cur[1]) < 6:
            return (1, 0)
        return None

    t = synthesize(SynthesisInstance("a1", 3), conflict=force)
    assert t.notes["shrink_rounds"] > 0
    assert t.status == PASS and verify_table(t).ok


# serialisation


def test_table_json_round_trip():
    t = synthesize(SynthesisInstance("as", 4, Modular(3, frozenset({1})), "1"))
    doc = t.to_json()
    again = ReductionTable.from_json(json.loads(json.dumps(doc)))
    assert again.to_json() == doc
    assert again.digest() == t.digest()


def test_synthesis_deterministic():
    inst = SynthesisInstance("a1", 5, B="0")
    assert synthesize(inst).digest() == synthesize(inst).digest()
    rng = random.Random(0)
    d = rng.randint(1, 5)
    assert synthesize(SynthesisInstance("as", d, OMEGA)).to_json() == synthesize(SynthesisInstance("as", d, OMEGA)).to_json()
