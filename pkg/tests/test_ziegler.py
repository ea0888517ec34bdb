import pytest
from hypothesis import given
from hypothesis import strategies as st

from kinj.anmod import hom_k_dim
from kinj.classify import NEG_INF, POS_INF, CanonLabel, realize_label
from kinj.ziegler import (bounded_probe_grid, cover_analysis, endofinite_certificate, format_table,
                          hom_table, hom_table_json, label_hom, open_set_membership)

INF = CanonLabel(NEG_INF, POS_INF, 1, 1)


def L(s, e, a=1, n=1):
    return CanonLabel(s, e, a, n)


def test_table_examples():
    assert [[c.dim for c in row] for row in hom_table([L(0, 0)])] == [[2]]
    t = hom_table([L(0, 0), INF])
    assert [[c.dim for c in row] for row in t] == [[2, 0], [0, 1]]
    assert label_hom(L(-6, -5), L(5, 6)).dim == 0
    assert label_hom(L(5, 6), L(-6, -5)).dim == 0
    js = hom_table_json([L(0, 0), INF], t)
    assert js["labels"] == ["0,0,1", "-inf,+inf,1"]
    assert "-inf,+inf,1" in format_table([L(0, 0), INF], t)


def test_table_matches_direct_hom():
    labels = [L(0, 1, 1, 2), L(1, 2, 2, 2), L(0, POS_INF, 1, 2)]
    t = hom_table(labels)
    for a, row in zip(labels, t):
        for b, cell in zip(labels, row):
            assert cell.dim == hom_k_dim(realize_label(a), realize_label(b)).dim


def test_probe_grid():
    grid = bounded_probe_grid(2, -1, 1)
    assert len(grid) == 6 * 2
    assert all(p.bounded and -1 <= p.start <= p.end <= 1 for p in grid)


def test_endofinite_examples():
    cert = endofinite_certificate(INF, bounded_probe_grid(1, -2, 2))
    assert cert.ok and all(r.dim == 0 for _, r in cert.entries)
    assert endofinite_certificate(L(0, 1), bounded_probe_grid(1, -2, 2)).ok
    half = endofinite_certificate(L(0, POS_INF), [L(0, 0)])
    assert half.ok and half.entries[0][1].stable
    with pytest.raises(ValueError):
        endofinite_certificate(INF, [INF])


def test_endofinite_failure_is_reported():
    cert = endofinite_certificate(INF, [L(0, 0)], cap=1)
    assert not cert.ok
    assert cert.to_json()["ok"] is False


def test_membership_examples():
    for c in (L(0, 0), L(-1, 2), L(0, 1, 2, 3)):
        assert open_set_membership(c, c)
    assert not open_set_membership(L(0, 0), INF)
    # computed: a nonzero map from the two-term complex onto the half-infinite one
    assert open_set_membership(L(0, 1), L(0, POS_INF)) == (label_hom(L(0, 1), L(0, POS_INF)).dim > 0)
    with pytest.raises(ValueError):
        open_set_membership(INF, L(0, 0))


@given(st.integers(-3, 3), st.integers(0, 2), st.integers(-3, 3), st.integers(0, 2), st.integers(-4, 4),
       st.integers(1, 3), st.integers(1, 3))
def test_membership_shift_invariant(s1, w1, s2, w2, r, a1, a2):
    n = 3
    c, m = L(s1, s1 + w1, a1, n), L(s2, s2 + w2, a2, n)
    assert open_set_membership(c, m) == open_set_membership(c.shifted(r), m.shifted(r))


def test_cover_examples():
    pool = bounded_probe_grid(1, -5, 5)
    opens = [L(g, POS_INF) for g in range(-5, 6)]
    rep = cover_analysis(opens, pool, subfamilies=[[L(0, POS_INF)], []])
    assert rep["covered"] and rep["no_finite_subcover"]
    single, empty = rep["finite_subfamilies"]
    assert single["point"] == "-3,-2,1" and single["escapes"]
    assert empty["escapes"]
    assert all(p["escaping_point"] is not None for p in rep["maximal_proper_subfamilies"])


def test_open_set_of_half_infinite_is_computed():
    pool = bounded_probe_grid(1, -4, 4)
    rep = cover_analysis([L(0, POS_INF)], pool, subfamilies=[])
    members = set(rep["members"]["0,+inf,1"])
    expected = {str(p) for p in pool if p.start <= 0 <= p.end}
    assert members == expected
