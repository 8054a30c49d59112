import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from levelone.affine import alcove
from levelone.rootsys import build
from levelone.verlinde import (
    Precision,
    VerlindeError,
    FusionQuery,
    charge_conjugation,
    check_unitary,
    factorization_check,
    fusion_dim,
    fusion_value,
    g2f4_closed_form,
    s_matrix,
    strange_duality_dims,
    center_power,
)


def su2_verlinde(k, g):
    """Closed form for SU(2) at level k without insertions."""
    K = k + 2
    return (K / 2) ** (g - 1) * sum(math.sin(math.pi * j / K) ** (2 - 2 * g) for j in range(1, K))


def su2_s(k):
    """The SU(2) level-k S-matrix from its closed form."""
    K = k + 2
    return np.array([[math.sqrt(2 / K) * math.sin(math.pi * (a + 1) * (b + 1) / K) for b in range(k + 1)] for a in range(k + 1)])


@pytest.mark.parametrize("k", range(1, 7))
def test_su2_s_matrix_closed_form(k):
    assert np.allclose(s_matrix("A1", k).as_array(), su2_s(k), atol=1e-12)


@pytest.mark.parametrize("k, g", [(k, g) for k in range(1, 6) for g in range(0, 5)])
def test_su2_verlinde_closed_form(k, g):
    assert fusion_dim("A1", k, FusionQuery(g)) == round(su2_verlinde(k, g))


@pytest.mark.parametrize(
    "t, g, expected",
    [("A8", 3, 729), ("E8", 5, 1), ("A1", 2, 4), ("D8", 2, 16), ("A4", 2, 25), ("E7", 3, 8), ("E6", 2, 9)],
)
def test_level_one_examples(t, g, expected):
    assert fusion_dim(t, 1, FusionQuery(g)) == expected


def test_su2_level_one_genus_zero_insertions():
    assert fusion_dim("A1", 1, FusionQuery(0, ((1,), (1,)))) == 1
    assert fusion_dim("A1", 1, FusionQuery(0, ((1,),))) == 0
    assert fusion_dim("A1", 2, FusionQuery(0, ((1,), (1,), (1,), (1,)))) == 2


@pytest.mark.parametrize("t", ["A1", "A2", "A4", "A8", "D4", "D8", "E6", "E7", "E8", "G2", "F4"])
def test_center_power_matches_verlinde_on_simply_laced(t):
    rs = build(t)
    for g in range(4):
        val = fusion_dim(rs, 1, FusionQuery(g))
        if all(s in "ADE" for s, _ in rs.components):
            assert val == center_power(t, g)


def test_center_power_rejects_non_simply_laced():
    with pytest.raises(ValueError):
        center_power("G2", 2)


@pytest.mark.parametrize("t, k", [("A2", 2), ("B2", 2), ("G2", 2), ("C3", 1), ("A3", 2), ("B3", 1), ("D4", 2)])
def test_routes_agree(t, k):
    a = s_matrix(t, k, route="orbit").as_array()
    b = s_matrix(t, k, route="character").as_array()
    assert np.allclose(a, b, atol=1e-12)


def test_large_weyl_group_uses_character_route():
    sm = s_matrix("E8", 2)
    assert len(sm) == 3
    check_unitary(sm)
    # E8 level two fusion ring: Ising-like
    assert [fusion_dim("E8", 2, FusionQuery(g)) for g in range(3)] == [1, 3, 10]


def test_semisimple_is_kronecker():
    a = s_matrix("A1+A2", (1, 1)).as_array()
    b = np.kron(s_matrix("A1", 1).as_array(), s_matrix("A2", 1).as_array())
    assert np.allclose(a, b)
    assert fusion_dim("A4+A4", 1, FusionQuery(2)) == 625


@pytest.mark.parametrize("t, k", [("A1", 3), ("A2", 3), ("A3", 1), ("D5", 1), ("E6", 1), ("G2", 1), ("F4", 2)])
def test_s_squared_is_charge_conjugation(t, k):
    sm = s_matrix(t, k)
    a = sm.as_array()
    c = charge_conjugation(sm)
    assert np.allclose(a @ a, np.eye(len(a))[c], atol=1e-10)
    assert sorted(c) == list(range(len(a)))


def test_high_precision_matches_double():
    hp = Precision.parse("high:40")
    assert hp.digits == 40 and hp.high
    for g in range(4):
        assert fusion_dim("G2", 1, FusionQuery(g), precision=hp) == fusion_dim("G2", 1, FusionQuery(g))
    with pytest.raises(ValueError):
        Precision(10)
    assert not Precision.parse("double").high


def test_errors():
    with pytest.raises(VerlindeError):
        s_matrix("A2", 40, max_alcove=100)
    with pytest.raises(ValueError):
        FusionQuery(-1)
    with pytest.raises(ValueError):
        fusion_dim("A1", 1, FusionQuery(0, ((3,),)))
    with pytest.raises(VerlindeError):
        s_matrix("A1", 1).index((5,))


def test_disk_cache(tmp_path):
    first = s_matrix("A2", 2, cache_dir=tmp_path)
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    text = files[0].read_text()
    again = s_matrix("A2", 2, cache_dir=tmp_path)
    assert files[0].read_text() == text
    assert np.allclose(first.as_array(), again.as_array(), atol=1e-11)


@pytest.mark.parametrize("g", range(5))
def test_g2_f4_strange_duality(g):
    rep = strange_duality_dims("G2:F4", g)
    assert rep["equal"] and rep["closed_form_ok"]
    assert rep["dim_a"] == round(g2f4_closed_form(g))


@pytest.mark.parametrize("pair", ["SL5:SL5", "SL3:E6", "SL2:E7", "SPIN8:SPIN8"])
def test_strange_duality_pairs(pair):
    for g in range(4):
        assert strange_duality_dims(pair, g)["equal"]


def test_strange_duality_rejects_unknown_pair():
    with pytest.raises(ValueError):
        strange_duality_dims("SL2:E8", 1)


@given(st.sampled_from([("A1", 2), ("A2", 1), ("A2", 2), ("G2", 1), ("B2", 1), ("A1+A1", (1, 2))]),
       st.integers(1, 3), st.data())
def test_factorization_property(tk, g, data):
    t, k = tk
    rs = build(t)
    lws = alcove(rs, k)
    labels = data.draw(st.lists(st.sampled_from(lws), max_size=2))
    rep = factorization_check(rs, k, g, [lw.weight for lw in labels])
    assert rep.ok


@given(st.sampled_from([("A1", 3), ("A2", 2), ("G2", 2)]), st.data())
def test_fusion_is_symmetric(tk, data):
    t, k = tk
    lws = [lw.weight for lw in alcove(build(t), k)]
    labels = data.draw(st.lists(st.sampled_from(lws), min_size=1, max_size=3))
    perm = data.draw(st.permutations(labels))
    sm = s_matrix(t, k)
    a = fusion_value(sm, FusionQuery(0, tuple(labels)))
    b = fusion_value(sm, FusionQuery(0, tuple(perm)))
    assert abs(a - b) < 1e-9
