import io
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from systolic_atlas.holonomy import (
    EnumerationBudgetError,
    NonHyperbolicError,
    enumerate_geodesics,
    format_word,
    geodesic_length,
    parse_word,
    records_to_csv,
    representation,
    systole_bruteforce,
)
from systolic_atlas.holonomy import mobius as mb
from systolic_atlas.holonomy.tiling import canonical_cyclic_word, cyclic_reduce, reduce_word
from systolic_atlas.surface_models import TreeSpec, c1_closed_form, rot_surface

ACOSH2 = math.acosh(2.0)


@pytest.fixture(scope="module")
def tree3():
    return representation(TreeSpec(3).to_fn_surface())


@pytest.fixture(scope="module")
def rot2():
    return representation(rot_surface(2, 3.0, 0.4))


def test_frame_moves():
    for l in (0.3, 1.0, 4.0):
        assert mb.dist(1j, mb.apply(mb.translation(l), 1j)) == pytest.approx(l, abs=1e-12)
        assert mb.translation_length(mb.translation(l)) == pytest.approx(l, abs=1e-10)
    # four quarter turns are a full turn (-I in SL(2,R))
    full = mb.mul(*[mb.rotation(math.pi / 2)] * 4)
    assert np.allclose(full, -np.eye(2), atol=1e-14)
    with pytest.raises(NonHyperbolicError):
        mb.translation_length(mb.rotation(0.3))


def test_point_to_line_matrix():
    m = mb.mul(mb.rotation(0.7), mb.translation(1.3), mb.inv(mb.rotation(0.7)))
    k = mb.point_to_line_matrix(m)
    local = mb.mul(k, m, mb.inv(k))
    assert abs(local[0, 1]) < 1e-12 and abs(local[1, 0]) < 1e-12
    assert local[0, 0] > 1.0


def test_word_parsing():
    assert parse_word("x3.X1") == (3, -1)
    assert format_word((3, -1)) == "x3.X1"
    assert parse_word("e") == ()
    with pytest.raises(ValueError):
        parse_word("y2")
    assert reduce_word((1, 2, -2, 3)) == (1, 3)
    assert cyclic_reduce((-1, 2, 1)) == (2,)
    w = (2, 3, -1)
    assert canonical_cyclic_word(w) == canonical_cyclic_word((3, -1, 2))
    assert canonical_cyclic_word(w) == canonical_cyclic_word((1, -3, -2))


def test_relators_trivial(rot2, tree3):
    for rep in (rot2, tree3):
        for rel in rep.relators():
            m = rep.word_matrix(rel)
            assert min(np.max(np.abs(m - np.eye(2))), np.max(np.abs(m + np.eye(2)))) < 1e-10


def test_generator_count(rot2, tree3):
    for rep in (rot2, tree3):
        g = rep.surface.genus
        assert rep.n_generators - len(rep.relators()) == 2 * g - 1


def test_cuff_lengths_match_input(tree3, rot2):
    for i in range(len(tree3.surface.gluings)):
        assert geodesic_length(tree3, tree3.cuff_word(i)) == pytest.approx(2 * ACOSH2, abs=1e-10)
        assert geodesic_length(tree3, tree3.cuff_word(i, "b")) == pytest.approx(2 * ACOSH2, abs=1e-10)
    for i in range(3):
        assert geodesic_length(rot2, rot2.cuff_word(i)) == pytest.approx(3.0, abs=1e-10)


def test_identity_word_rejected(tree3):
    with pytest.raises(NonHyperbolicError):
        geodesic_length(tree3, ())


def test_tree_spectrum(tree3):
    short = enumerate_geodesics(tree3, 1.4)
    assert len(short) == 3
    for r in short:
        assert r.length == pytest.approx(ACOSH2, abs=1e-9)
        assert geodesic_length(tree3, r.word) == pytest.approx(r.length, abs=1e-12)
    longer = enumerate_geodesics(tree3, 2.7)
    # three handle curves plus the six cuffs of length 2 arccosh 2
    assert len(longer) == 9
    assert sum(abs(r.length - 2 * ACOSH2) < 1e-9 for r in longer) == 6
    assert enumerate_geodesics(tree3, 0.0) == []


def test_systole_counts_tree(tree3):
    assert systole_bruteforce(tree3, 1.4) == (pytest.approx(ACOSH2, abs=1e-9), 3)


def test_rot_family_at_c1():
    c1 = c1_closed_form(2)
    rep = representation(rot_surface(2, c1, 0.0))
    sys_len, count = systole_bruteforce(rep, 2.8)
    assert sys_len == pytest.approx(c1, abs=1e-9)
    assert count == 6


def test_budget_error(tree3):
    with pytest.raises(EnumerationBudgetError):
        enumerate_geodesics(tree3, 5.0, budget=50)


def test_csv_output(tree3):
    buf = io.StringIO()
    records_to_csv(enumerate_geodesics(tree3, 1.4), buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "word,length"
    assert len(lines) == 4
    assert lines[1].split(",")[1] == f"{ACOSH2:.15g}"[:13] or abs(float(lines[1].split(",")[1]) - ACOSH2) < 1e-9


words = st.lists(st.integers(1, 5).flatmap(lambda g: st.sampled_from([g, -g])), min_size=1, max_size=8)


def _abs_product(rep, word):
    """``|M_1| ... |M_n|``: entrywise bound on the rounding error of the word product, up to ``n eps``."""
    a = np.eye(2)
    for g in word:
        x = rep.generator(abs(g))
        a = a @ np.abs(x if g > 0 else np.linalg.inv(x))
    return a


def _gamma(word):
    return 4 * max(len(word), 1) * np.finfo(float).eps


def _length_error(rep, word):
    """First-order error of ``2 arccosh(|tr|/2)`` given the forward error bound on the trace."""
    word = cyclic_reduce(word)
    a = _abs_product(rep, word)
    m = rep.word_matrix(word)
    tr = abs(m[0, 0] + m[1, 1])
    return 2.0 * _gamma(word) * (a[0, 0] + a[1, 1]) / math.sqrt(max(tr * tr - 4.0, 1e-300))


@settings(max_examples=60, deadline=None)
@given(words, words)
def test_conjugation_and_inverse_invariance(rot2, w, u):
    w = cyclic_reduce(w)
    try:
        base = geodesic_length(rot2, w)
    except NonHyperbolicError:
        return
    conj = reduce_word(tuple(u) + tuple(w) + tuple(-x for x in reversed(u)))
    inverse = tuple(-x for x in reversed(w))
    for other in (conj, inverse):
        tol = 1e-10 * max(1.0, base) + _length_error(rot2, w) + _length_error(rot2, other)
        assert geodesic_length(rot2, other) == pytest.approx(base, abs=tol)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 5).flatmap(lambda g: st.sampled_from([g, -g])), min_size=1, max_size=40))
def test_determinant_drift(rot2, w):
    w = tuple(w)
    m = rot2.word_matrix(w)
    a = _abs_product(rot2, w)
    ad, bc = m[0, 0] * m[1, 1], m[0, 1] * m[1, 0]
    # forward error bound of the product, propagated into ad - bc
    resolution = 2 * _gamma(w) * (a[0, 0] * a[1, 1] + a[0, 1] * a[1, 0])
    assert abs(ad - bc - 1.0) < 1e-9 + resolution


def test_spectrum_contains_word_lengths(rot2):
    """Every closed geodesic given by a short word appears in the enumeration."""
    cutoff = 5.0
    spectrum = np.array([r.length for r in enumerate_geodesics(rot2, cutoff)])
    rng = np.random.default_rng(7)
    n = rot2.n_generators
    checked = 0
    for _ in range(400):
        w = cyclic_reduce(tuple(int(x) * int(s) for x, s in zip(rng.integers(1, n + 1, 4), rng.choice([-1, 1], 4))))
        if not w:
            continue
        try:
            l = geodesic_length(rot2, w)
        except NonHyperbolicError:
            continue
        if l <= cutoff - 1e-6:
            checked += 1
            assert np.min(np.abs(spectrum - l)) < 1e-7
    assert checked > 20


def test_full_twist_marking_invariance():
    c = 3.0
    a = representation(rot_surface(2, c, 0.4))
    surf = rot_surface(2, c, 0.4)
    twists = [gl.twist for gl in surf.gluings]
    twists[1] += c
    b = representation(surf.with_twists(twists))
    la = [r.length for r in enumerate_geodesics(a, 4.0)]
    lb = [r.length for r in enumerate_geodesics(b, 4.0)]
    assert len(la) == len(lb)
    assert np.max(np.abs(np.array(la) - np.array(lb))) < 1e-9
