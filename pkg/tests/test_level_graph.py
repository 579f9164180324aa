from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cantor_lab.level_graph import (
    Theta,
    bfs_layers,
    check_prop18,
    check_tree,
    dfs_path,
    edge_level,
    edges,
    is_connected,
    level_ordering,
    neighbours,
    related,
    unique_path,
)


def test_related_examples():
    assert related(Theta.ZEROS, "00", "01")
    assert not related(Theta.ZEROS, "10", "01")
    for w in ("", "0", "101"):
        assert related(Theta.DENSE, w, w)


def test_related_needs_equal_lengths():
    with pytest.raises(ValueError):
        edge_level(Theta.ZEROS, "0", "01")


def test_path_examples():
    assert unique_path(Theta.ZEROS, "10", "11") == ["10", "00", "01", "11"]
    assert unique_path(Theta.DENSE, "101", "101") == ["101"]
    assert unique_path(Theta.ZEROS, "00", "01") == ["00", "01"]


def test_theta_parse():
    assert Theta.parse("dense") is Theta.DENSE
    with pytest.raises(ValueError):
        Theta.parse("ones")


def edges_oracle(theta, n):
    """Direct scan over all ordered pairs."""
    out = set()
    for e in product("01", repeat=n):
        for f in product("01", repeat=n):
            e_, f_ = "".join(e), "".join(f)
            diff = [i for i in range(n) if e_[i] != f_[i]]
            if len(diff) == 1 and e_[diff[0]] == "0" and e_[: diff[0]] == theta.word(diff[0]):
                out.add((e_, f_))
    return out


@pytest.mark.parametrize("theta", list(Theta))
@pytest.mark.parametrize("n", range(0, 6))
def test_edges_match_oracle(theta, n):
    got = list(edges(theta, n))
    assert len(got) == len(set(got)) == (1 << n) - 1
    assert set(got) == edges_oracle(theta, n)


@pytest.mark.parametrize("theta", list(Theta))
def test_level_tree_small(theta):
    for n in range(0, 6):
        assert check_prop18(theta, n).ok
    for n in range(6, 11):
        assert check_tree(theta, n).ok
        assert is_connected(theta, n)


@settings(max_examples=60)
@given(st.sampled_from(list(Theta)), st.integers(min_value=1, max_value=8), st.data())
def test_bfs_and_dfs_paths_agree(theta, n, data):
    e = data.draw(st.text(alphabet="01", min_size=n, max_size=n))
    f = data.draw(st.text(alphabet="01", min_size=n, max_size=n))
    p = unique_path(theta, e, f)
    assert p == dfs_path(theta, e, f)
    for a, b in zip(p, p[1:]):
        assert related(theta, a, b) or related(theta, b, a)


def test_ordering_examples():
    assert level_ordering(Theta.ZEROS, 1) == ["00", "01", "10", "11"]
    assert level_ordering(Theta.ZEROS, 0) == ["0", "1"]
    assert level_ordering(Theta.DENSE, 1)[:2] == ["00", "01"]


@pytest.mark.parametrize("theta", list(Theta))
@pytest.mark.parametrize("p", range(0, 7))
def test_ordering_prefixes_connected(theta, p):
    order = level_ordering(theta, p)
    assert sorted(order) == sorted("".join(w) for w in product("01", repeat=p + 1))
    assert order[0] == theta.word(p) + "0" and order[1] == theta.word(p) + "1"
    dist = bfs_layers(theta, order[0])
    assert [dist[w] for w in order] == sorted(dist[w] for w in order)
    seen = {order[0]}
    for w in order[1:]:
        assert any(u in seen for u in neighbours(theta, w))
        seen.add(w)
