import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cantor_lab.kst import (
    POW2,
    UNKNOWN,
    NestedFamily,
    composition_law_check,
    cylinder_stability_check,
    family_check,
    g_eval,
    random_words,
    triple_law_check,
)
from cantor_lab.report import REFUTED


def g_oracle(n, alpha):
    """Positive multiples k of 2^n read from 2k - 2^n."""
    N = len(alpha)
    out = []
    for k, a in enumerate(alpha):
        if k > 0 and k % (1 << n) == 0:
            src = 2 * k - (1 << n)
            out.append(alpha[src] if src < N else UNKNOWN)
        else:
            out.append(a)
    return "".join(out)


class Shifted(NestedFamily):
    """f_n(k) = k + 2^n stays inside S_n but lands in S_{n+1} half the time."""

    name = "shifted"

    def member(self, n, k):
        return k > 0 and k % (1 << n) == 0

    def f(self, n, k):
        return k + (1 << n)


def test_g_examples():
    alpha = "01000000"
    out = g_eval(POW2, 0, alpha)
    # every k >= 1 reads position 2k - 1
    assert out[0] == "0" and out[1] == alpha[1] and out[2] == alpha[3] and out[3] == alpha[5]
    assert out[4] == alpha[7] and out[5:] == UNKNOWN * 3
    assert g_eval(POW2, 4, "10110101") == "10110101"
    assert g_eval(POW2, 2, "0" * 64).replace(UNKNOWN, "0") == "0" * 64


def test_g_length_mismatch():
    with pytest.raises(ValueError):
        g_eval(POW2, 0, "0101", 8)


@given(st.integers(0, 6), st.text("01", min_size=0, max_size=80))
def test_g_matches_oracle(n, alpha):
    assert g_eval(POW2, n, alpha) == g_oracle(n, alpha)


def test_family_invariants():
    r = family_check(POW2, n_max=8, horizon=1 << 12)
    assert r.ok and r.details["empty_from"] == 13


def test_family_check_negative():
    assert family_check(Shifted(), n_max=4, horizon=256).status == REFUTED


def test_composition_examples():
    assert composition_law_check(POW2, 0, 1).ok
    assert composition_law_check(POW2, 1, 3).ok
    with pytest.raises(ValueError):
        composition_law_check(POW2, 2, 2)


@pytest.mark.parametrize("n", range(1, 7))
def test_composition_all_pairs(n):
    for m in range(n):
        r = composition_law_check(POW2, m, n, N=256, samples=100)
        assert r.ok and r.details["determined"] > 0


def test_composition_fails_for_shifted_family():
    assert composition_law_check(Shifted(), 0, 1, N=64, samples=20).status == REFUTED


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 3), st.integers(1, 5), st.integers(1, 5))
def test_triple_law(m, dn, dp):
    assert triple_law_check(POW2, m, m + dn, m + dp, N=128, samples=20).ok


def test_triple_law_precondition():
    with pytest.raises(ValueError):
        triple_law_check(POW2, 2, 3, 1)


def test_stability_examples():
    assert cylinder_stability_check(POW2, 2, "101").ok
    assert cylinder_stability_check(POW2, 0, "").ok
    with pytest.raises(ValueError):
        cylinder_stability_check(POW2, 0, "1")


def test_random_words_seeded():
    assert random_words(16, 3, 7) == random_words(16, 3, 7)
    assert random_words(16, 3, 7) != random_words(16, 3, 8)
