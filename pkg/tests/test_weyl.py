import itertools
import random

import pytest
from hypothesis import given, strategies as st

from levelone.rootsys import build, fundamental_weight, inner
from levelone.weyl import OrbitTooLarge, dagger, dominant, orbit, orbit_with_signs, reflect, to_dominant

from conftest import ALL_SIMPLE


def test_reflect_examples():
    a1, a2 = build("A1"), build("A2")
    assert reflect(a1, (1,), 1) == (-1,)
    assert reflect(a2, (0, 0), 2) == (0, 0)
    assert reflect(a2, (1, 0), 1) == (-1, 1)
    with pytest.raises(IndexError):
        reflect(a2, (1, 0), 3)
    with pytest.raises(IndexError):
        reflect(a2, (1, 0), 0)


def test_to_dominant_examples():
    a1, a2 = build("A1"), build("A2")
    assert to_dominant(a2, (2, 1)) == ((2, 1), 1, 0)
    assert to_dominant(a1, (-1,)) == ((1,), -1, 1)
    w, sign, length = to_dominant(a2, (-1, -1))
    assert w == (1, 1) and sign == -1 and length == 3


def _a2_group():
    """All six elements of W(A2) as words, by brute force."""
    rs = build("A2")
    words = [()]
    for _ in range(3):
        words += [w + (i,) for w in words for i in (1, 2)]
    return rs, words


def test_to_dominant_agrees_with_brute_force_a2():
    rs, words = _a2_group()
    for x in itertools.product(range(-3, 4), repeat=2):
        images = []
        for w in words:
            v = x
            for i in w:
                v = reflect(rs, v, i)
            images.append((v, (-1) ** len(w)))
        doms = {v for v, _ in images if min(v) >= 0}
        assert len(doms) == 1
        d, sign, _ = to_dominant(rs, x)
        assert {d} == doms
        if 0 in d:
            assert sign == 0
        else:
            signs = {s for v, s in images if v == d}
            assert signs == {sign}


def test_dagger_examples():
    assert dagger(build("E8"), (0,) * 8) == (0,) * 8
    assert dagger(build("A8"), fundamental_weight(build("A8"), 3)) == fundamental_weight(build("A8"), 6)
    d8 = build("D8")
    assert dagger(d8, fundamental_weight(d8, 7)) == fundamental_weight(d8, 7)
    with pytest.raises(ValueError):
        dagger(build("A2"), (-1, 0))


@pytest.mark.parametrize("n", range(2, 10))
def test_dagger_type_a_is_diagram_flip(n):
    rs = build(f"A{n - 1}")
    for i in range(1, n):
        assert dagger(rs, fundamental_weight(rs, i)) == fundamental_weight(rs, n - i)


@pytest.mark.parametrize("t", ["D8", "E7", "E8", "G2", "F4"])
def test_dagger_trivial_when_minus_one_in_weyl_group(t):
    rs = build(t)
    for i in range(1, rs.rank + 1):
        assert dagger(rs, fundamental_weight(rs, i)) == fundamental_weight(rs, i)


@pytest.mark.parametrize("t", ["A4", "D5", "E6", "A2+E6", "B3", "C3", "A1+A3"])
def test_dagger_involution_sampled(t):
    rs = build(t)
    rng = random.Random(t)
    for _ in range(200):
        lam = tuple(rng.randrange(5) for _ in range(rs.rank))
        assert dagger(rs, dagger(rs, lam)) == lam


def test_orbit_examples():
    assert orbit(build("A3"), (0, 0, 0)).size == 1
    assert orbit(build("A1"), (1,)).size == 2
    e8 = build("E8")
    rep = orbit(e8, fundamental_weight(e8, 8))
    assert rep.size == 240
    assert set(rep.elements) == set(e8.roots)
    with pytest.raises(OrbitTooLarge):
        orbit(e8, fundamental_weight(e8, 8), cap=100)
    with pytest.raises(ValueError):
        orbit(e8, (0,) * 8, cap=0)


def test_signed_orbit_is_weyl_torsor():
    for t in ("A2", "B2", "G2", "A3"):
        rs = build(t)
        signed = orbit_with_signs(rs, rs.rho)
        assert len(signed) == rs.weyl_order
        for v, s in signed:
            d, sign, _ = to_dominant(rs, v)
            assert d == rs.rho and sign == s


@given(st.sampled_from(ALL_SIMPLE[:14] + ["G2", "F4"]), st.data())
def test_form_is_weyl_invariant(t, data):
    rs = build(t)
    w = data.draw(st.lists(st.integers(-6, 6), min_size=rs.rank, max_size=rs.rank).map(tuple))
    d = dominant(rs, w)
    assert inner(rs, w, w) == inner(rs, d, d)
    i = data.draw(st.integers(1, rs.rank))
    assert reflect(rs, reflect(rs, w, i), i) == w


@given(st.sampled_from(["A2", "B3", "G2", "A1+A2", "C3"]), st.data())
def test_orbit_size_divides_weyl_order(t, data):
    rs = build(t)
    w = data.draw(st.lists(st.integers(0, 3), min_size=rs.rank, max_size=rs.rank).map(tuple))
    rep = orbit(rs, w)
    assert rs.weyl_order % rep.size == 0
    assert rep.representative == dominant(rs, w)
