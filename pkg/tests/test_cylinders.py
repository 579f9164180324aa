from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cantor_lab.cylinders import (
    F1,
    FS,
    ClopenSet,
    GFlip,
    PrefixRewriteMap,
    build_f1,
    build_fS,
    build_gflip,
    build_gprime,
    c1_graph_union_check,
    closure_a1_check,
    commuting_check,
    compose,
    compose_path,
    composition_domain_size,
    decide_relation,
    gprime_support,
    is_reduced,
    lemma27_check,
    lemma27_sweep,
    words_to_ints,
)
from cantor_lab.ruler import OMEGA, Louveau, Modular, SBeta
from cantor_lab.words import DescribedPoint, all_words, s_seq

P = DescribedPoint.parse
NO_ONE = Modular(2)  # evens: 1 is missing
addrs = st.lists(st.text(alphabet="01", max_size=5), max_size=5)


def point_set(c: ClopenSet, depth: int) -> set:
    """Oracle: the depth-``depth`` words inside c."""
    return {w for w in all_words(depth) if any(w.startswith(a) for a in c.addresses)}


# clopen sets


@given(addrs, addrs)
def test_set_algebra_matches_oracle(a, b):
    A, B = ClopenSet.of(*a), ClopenSet.of(*b)
    d = 6
    assert point_set(A | B, d) == point_set(A, d) | point_set(B, d)
    assert point_set(A & B, d) == point_set(A, d) & point_set(B, d)
    assert point_set(A - B, d) == point_set(A, d) - point_set(B, d)
    assert point_set(A.complement(), d) == set(all_words(d)) - point_set(A, d)
    assert (A <= B) == (point_set(A, d) <= point_set(B, d))


@given(addrs)
def test_canonical_form_unique(a):
    A = ClopenSet.of(*a)
    assert ClopenSet.of(*A.refine(6)) == A


def test_full_and_empty():
    assert ClopenSet.of("0", "1") == ClopenSet.full()
    assert ClopenSet.empty().is_empty()
    assert ClopenSet.of("01").is_cylinder() and ClopenSet.of("01").depth() == 2


# flip maps


def test_build_examples():
    assert set(build_fS(OMEGA, 1).rules) == {("00", "01"), ("10", "11")}
    assert set(build_fS(NO_ONE, 1).rules) == {("00", "01")}
    for S in (OMEGA, NO_ONE, SBeta(Louveau(P("|0")))):
        assert set(build_fS(S, 0).rules) == {("0", "1")}
    assert set(build_f1(3).rules) == {(s_seq(3) + "0", s_seq(3) + "1")}
    assert len(build_gflip(2).rules) == 8


def test_apply_examples():
    assert build_f1(0).apply(ClopenSet.of("00")) == ClopenSet.of("10")
    assert build_fS(OMEGA, 1).apply(ClopenSet.empty()).is_empty()
    assert build_fS(OMEGA, 1).preimage(ClopenSet.of("111")) == ClopenSet.of("101")


def test_rewrite_map_rejects_overlapping_rules():
    with pytest.raises(ValueError):
        PrefixRewriteMap((("0", "1"), ("01", "11")))


@pytest.mark.parametrize("S", [OMEGA, NO_ONE, Modular(3, frozenset({1})), SBeta(Louveau(P("|0")))])
def test_domain_range_disjoint(S):
    for n in range(7):
        f = build_fS(S, n)
        assert (f.domain() & f.range()).is_empty()


@settings(max_examples=50)
@given(st.integers(min_value=0, max_value=4), addrs)
def test_preimage_inverts_apply(n, a):
    f = build_fS(Modular(3, frozenset({1})), n)
    X = ClopenSet.of(*a) & f.domain()
    assert f.preimage(f.apply(X)) == X


@pytest.mark.parametrize("depth", [4, 6, 8])
def test_injective_on_cylinders(depth):
    f = build_fS(OMEGA, 2)
    images = [f.image_of_cylinder(w) for w in all_words(depth)]
    seen = set()
    for img in images:
        for w in point_set(img, depth):
            assert w not in seen
            seen.add(w)


def test_compose_matches_sequential():
    f, g = build_fS(OMEGA, 0), build_fS(OMEGA, 1)
    gf = compose(g, f)
    for w in all_words(5):
        C = ClopenSet.of(w)
        assert gf.apply(C) == g.apply(f.apply(C))


def test_restrict():
    f = build_fS(OMEGA, 1).restrict(ClopenSet.of("0"))
    assert f.domain() == ClopenSet.of("00")


def test_compose_path_examples():
    assert compose_path(OMEGA, (0, 1), (1, 1), P("|0")) == P("11|0")
    assert compose_path(OMEGA, (1, 0), (1, 1), P("|0")) == P("11|0")
    assert compose_path(NO_ONE, (0, 0), (1, 1), P("|0")) is None
    with pytest.raises(ValueError):
        compose_path(OMEGA, (), (), P("|0"))


# relations


def test_relation_examples():
    for S in (OMEGA, NO_ONE):
        assert decide_relation("AS", P("|0"), P("1|0"), S)
    s4 = s_seq(4)
    assert decide_relation("A1", P(s4 + "0|0"), P(s4 + "1|0"))
    assert not decide_relation("AS", P("01|0"), P("011|0"), NO_ONE)
    assert decide_relation("Pf", P("0110|0"))
    assert not decide_relation("Pf", P("|01"))
    assert decide_relation("E0", P("1|0"), P("0|0"))
    assert decide_relation("L0", P("01|0"), P("1|0"))


def test_relation_needs_index_set():
    with pytest.raises(ValueError):
        decide_relation("AS", P("|0"), P("1|0"))
    with pytest.raises(ValueError):
        decide_relation("XX", P("|0"), P("1|0"))


points = st.builds(DescribedPoint, st.text(alphabet="01", max_size=6), st.sampled_from(["0", "1", "01", "001"]))


@given(points, points)
def test_as_pairs_increase_lexicographically(x, y):
    if decide_relation("AS", x, y, OMEGA):
        assert x < y or x.prefix(30) < y.prefix(30)


@given(points, st.integers(min_value=0, max_value=8))
def test_flip_family_agrees_with_relation(x, n):
    for fam, rel, S in ((FS(OMEGA), "AS", OMEGA), (FS(NO_ONE), "AS", NO_ONE), (F1(), "A1", None)):
        y = fam.point(n, x)
        if y is not None:
            assert decide_relation(rel, x, y, S)


# fixed points of compositions


def test_fixed_point_examples():
    assert lemma27_check((0,), (1,), 3).ok
    assert lemma27_check((0, 1), (1, -1), 6).ok
    assert lemma27_check((0, 0), (1, 1), 3).details["domain_size"] == 0
    assert is_reduced((0, 0), (1, 1))
    assert not is_reduced((0, 0), (1, -1))
    with pytest.raises(ValueError):
        lemma27_check((1, 1), (1, -1), 4)


def test_fixed_point_check_catches_involution():
    # the bit flip is an involution, so g_0 g_0 fixes every point
    g = GFlip()
    assert composition_domain_size((0, 0), (1, 1), 4, g) == 16
    r = lemma27_check((0, 0), (1, 1), 4, g)
    assert r.status == "refuted" and "fixed_cylinder" in r.details


def test_fixed_point_sweep_small():
    assert lemma27_sweep(max_len=3, max_index=3, depth=8).ok


def test_commuting_examples():
    assert commuting_check(GFlip(), 0, 1, 4).ok
    assert commuting_check(FS(OMEGA), 0, 1, 4).ok
    assert c1_graph_union_check(5).ok


def test_closure_a1():
    pts = [P(t) for t in ("|0", "|1", "0|1", "|01", "1|0")]
    assert closure_a1_check(5, pts).ok


def test_gprime_support_order():
    assert [gprime_support(n) for n in range(4)] == ["1", "01", "11", "001"]
    f = build_gprime(0)
    assert f.apply(ClopenSet.of("00")) == ClopenSet.of("10")


def test_words_to_ints_bit_order():
    assert list(words_to_ints(["1", "01", "001", ""])) == [1, 2, 4, 0]
    assert words_to_ints([]).dtype == np.int64
