import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cantor_lab.ruler import (
    OMEGA,
    Louveau,
    Modular,
    Periodic,
    SBeta,
    Shift,
    alpha_from_json,
    beta_alpha,
    beta_bytes,
    beta_word,
    check_palindromes,
    check_ruler_periodicity,
    gamma_alpha,
    gamma_bytes,
    modular_member,
    random_alpha,
    ruler_val,
    s_beta_member,
    sspec_from_json,
)
from cantor_lab.words import DescribedPoint

ZEROS = DescribedPoint.parse("|0")
ONES = DescribedPoint.parse("|1")
alphas = st.builds(DescribedPoint, st.text(alphabet="01", max_size=6), st.text(alphabet="01", min_size=1, max_size=4))


def v2_oracle(x):
    k = 0
    while x % 2 == 0:
        x //= 2
        k += 1
    return k


def test_ruler_examples():
    assert [ruler_val(0), ruler_val(3), ruler_val(7)] == [0, 2, 3]


@given(st.integers(min_value=0, max_value=10**9))
def test_ruler_matches_division(i):
    assert ruler_val(i) == v2_oracle(i + 1)


def test_gamma_examples():
    assert gamma_alpha(ONES, 0) == 0
    assert gamma_alpha(ZEROS, 2) == 1
    assert gamma_alpha(ZEROS, 5) == 0


def test_beta_examples():
    assert beta_alpha(ZEROS, 3) == 1
    assert beta_alpha(ONES, 0) == 0
    assert beta_alpha(ONES, 1) == 1


@given(alphas, st.integers(min_value=1, max_value=300))
def test_beta_bytes_match_pointwise(alpha, n):
    assert beta_word(alpha, n) == "".join(str(beta_alpha(alpha, i)) for i in range(n))
    assert list(gamma_bytes(alpha, 20)) == [gamma_alpha(alpha, k) for k in range(20)]


@given(alphas, st.integers(min_value=0, max_value=11))
def test_palindromic_prefix(alpha, n):
    w = beta_bytes(alpha, (1 << n) - 1)
    assert w == w[::-1]


def test_member_examples():
    assert s_beta_member(Shift(0), 6)
    assert not s_beta_member(Shift(0), 4)
    assert s_beta_member(Louveau(ZEROS), 0)
    assert modular_member(3, {1}, 4)
    assert not modular_member(3, {1}, 2)
    assert modular_member(5, {2}, 0)
    with pytest.raises(ValueError):
        modular_member(0, set(), 3)


def test_modular_validation():
    with pytest.raises(ValueError):
        Modular(3, frozenset({3}))
    with pytest.raises(ValueError):
        Modular(0)


@given(st.integers(min_value=1, max_value=7), st.data())
def test_modular_indicator(m, data):
    F = frozenset(data.draw(st.sets(st.integers(min_value=1, max_value=max(1, m - 1)))) if m > 1 else set())
    F = frozenset(v for v in F if v < m)
    S = Modular(m, F)
    assert list(S.indicator(50)) == [int(n % m == 0 or n % m in F) for n in range(51)]


@given(alphas, st.integers(min_value=0, max_value=400))
def test_sbeta_cached_matches_scan(alpha, n):
    S = SBeta(Louveau(alpha))
    assert S.member(n) == s_beta_member(Louveau(alpha), n)


def test_shift_elements():
    assert SBeta(Shift(1)).elements(5) == [0, 2, 5, 9, 14]
    assert SBeta(Periodic((), (0,))).members_upto(5) == [0, 1, 2, 3, 4, 5]


def test_json_round_trip():
    for S in (OMEGA, Modular(3, frozenset({1})), SBeta(Shift(2)), SBeta(Louveau(DescribedPoint.parse("01|0")))):
        again = sspec_from_json(S.to_json())
        assert again.members_upto(60) == S.members_upto(60)
    assert alpha_from_json("1|0") == DescribedPoint("1", "0")


@pytest.mark.parametrize("bad", [{}, {"kind": "nope"}, {"kind": "modular"}, [1, 2], "omega"])
def test_malformed_sspec(bad):
    with pytest.raises(ValueError):
        sspec_from_json(bad)


def test_periodicity_and_palindrome_checks():
    assert check_ruler_periodicity(n_max=8, l_max=16).ok
    assert check_palindromes(n_max=10, samples=10).ok


def test_random_alpha_deterministic():
    a = [random_alpha(random.Random(3)) for _ in range(2)]
    assert a[0] == a[1]
