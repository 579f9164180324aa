from collections import Counter
from itertools import combinations, product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cantor_lab.structures import (
    ADMISSIBLE,
    DIAGONAL,
    EMPTY,
    EQUIVALENCE,
    KINDS,
    FiniteRelation,
    check_properties,
    classify_sigma,
    confirm_sigma,
    sigma_table,
    transform,
    transform_sweep,
)


def props_oracle(n, R):
    """Property profile from the adjacency matrix."""
    M = np.zeros((n, n), dtype=bool)
    for a, b in R:
        M[a, b] = True
    out = set()
    if n == 0 or M.diagonal().all():
        out.add(0)
    if not M.diagonal().any():
        out.add(1)
    if (M == M.T).all():
        out.add(2)
    if not (M & M.T & ~np.eye(n, dtype=bool)).any():
        out.add(3)
    sq = (M.astype(int) @ M.astype(int)) > 0
    if not (sq & ~M).any():
        out.add(4)
    return frozenset(out)


relations = st.integers(min_value=0, max_value=4).flatmap(
    lambda n: st.builds(
        lambda pairs: FiniteRelation(n, frozenset(pairs)),
        st.sets(st.tuples(st.integers(0, max(0, n - 1)), st.integers(0, max(0, n - 1))) if n else st.nothing()),
    )
)


def test_transform_examples():
    A = FiniteRelation.of(2, [(0, 1)])
    # (x, i) is encoded as x + n*i
    R = transform("r", A)
    assert R.pairs == {(p, p) for p in range(4)} | {(0, 3)}
    assert transform("rp", FiniteRelation.of(2, [])).pairs == frozenset()
    assert transform("sp", A).pairs == {(0, 3), (3, 0)}


def test_transform_rejects_kind():
    with pytest.raises(ValueError):
        transform("t", FiniteRelation.of(1, []))


def test_property_examples():
    assert check_properties(FiniteRelation.of(3, [(i, i) for i in range(3)])) == {0, 2, 3, 4}
    assert check_properties(FiniteRelation.of(3, [(0, 1), (0, 2), (1, 2)])) == {1, 3, 4}
    assert check_properties(FiniteRelation.of(2, list(product(range(2), repeat=2)))) == {0, 2, 4}


@given(relations)
def test_properties_match_matrix_oracle(A):
    assert check_properties(A) == props_oracle(A.n, A.pairs)


@given(relations)
def test_transform_profiles_and_embedding(A):
    need = {"r": {0, 3, 4}, "rp": {1, 3, 4}, "s": {0, 2}, "sp": {1, 2}}
    for kind in KINDS:
        T = transform(kind, A)
        assert T.n == 2 * A.n
        assert need[kind] <= props_oracle(T.n, T.pairs)
        for x, y in product(range(A.n), repeat=2):
            assert ((x, y) in A) == ((x, A.n + y) in T)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_transform_sweep_exhaustive(n):
    r = transform_sweep(n)
    assert r.ok and r.details["relations"] == 1 << (n * n)


def test_relation_validation_and_json():
    with pytest.raises(ValueError):
        FiniteRelation.of(2, [(0, 2)])
    A = FiniteRelation.of(3, [(2, 0), (1, 1)])
    assert FiniteRelation.from_json(A.to_json()) == A
    assert FiniteRelation.from_json([[0, 2]]).n == 3
    assert FiniteRelation.from_mask(3, A.mask) == A


# σ classes


def test_sigma_examples():
    assert classify_sigma({0, 1}) == EMPTY
    assert classify_sigma({2, 3}) == DIAGONAL
    assert classify_sigma({3, 4}) == ADMISSIBLE
    w = confirm_sigma({3, 4}).details["witness"]
    W = FiniteRelation.from_json(w)
    assert W.pairs and any(a != b for a, b in W.pairs)
    assert {3, 4} <= check_properties(W)


def test_sigma_rejects_out_of_range():
    with pytest.raises(ValueError):
        classify_sigma({5})


def all_relations(max_n):
    for n in range(1, max_n + 1):
        for pairs_mask in range(1 << (n * n)):
            yield FiniteRelation.from_mask(n, pairs_mask)


PROFILES = [(A, check_properties(A)) for A in all_relations(3)]


@pytest.mark.parametrize("sigma", [frozenset(c) for r in range(6) for c in combinations(range(5), r)], ids=str)
def test_sigma_verdicts_exhaustive(sigma):
    verdict = classify_sigma(sigma)
    sat = [A for A, prof in PROFILES if sigma <= prof]
    if verdict == EMPTY:
        assert all(not A.pairs for A in sat)
    elif verdict == DIAGONAL:
        assert all(a == b for A in sat for a, b in A.pairs)
    else:
        assert any(a != b for A in sat for a, b in A.pairs)
    assert confirm_sigma(sigma).ok


def test_sigma_table_counts():
    table = sigma_table()
    assert len(table) == 32
    assert Counter(table.values()) == {ADMISSIBLE: 15, EMPTY: 9, DIAGONAL: 6, EQUIVALENCE: 2}
