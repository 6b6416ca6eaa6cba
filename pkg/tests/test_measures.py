import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from graphunc.graph import path
from graphunc.measures import entropy, norm, sparsity, support
from graphunc.spectral import basis_for, gft


def test_norm_examples():
    d = np.eye(5)[0]
    assert support(d) == 1 and norm(d, 2) == 1
    f = np.array([3.0, 4.0])
    assert norm(f, 2) == 5 and norm(f, 1) == 7 and norm(f, math.inf) == 4


def test_support_of_p3_delta_spectrum():
    assert support(gft(basis_for(path(3)), [1, 0, 0])) == 3


def test_support_threshold_is_relative():
    assert support([1.0, 1e-11, 1e-9]) == 2
    assert support(np.zeros(4)) == 0


@pytest.mark.parametrize("p", [1, 4 / 3, 2, 4, math.inf])
def test_sparsity_delta_is_one(p):
    assert sparsity(np.eye(7)[3], p) == pytest.approx(1.0)


def test_sparsity_flat_signal():
    f = np.ones(10) / math.sqrt(10)
    assert round(sparsity(f, 1), 2) == 0.32
    assert round(sparsity(f, 4 / 3), 2) == 0.56
    assert round(sparsity(f, math.inf), 2) == 0.32
    assert sparsity(f, 1) == pytest.approx(10 ** -0.5)


def test_sparsity_zero_rejected():
    with pytest.raises(ValueError):
        sparsity(np.zeros(3), 1)
    with pytest.raises(ValueError):
        norm([1.0], 0.5)


def test_entropy_examples():
    assert entropy(np.eye(4)[1]) == 0
    assert entropy(np.ones(9) / 3) == pytest.approx(math.log(9))
    fh = gft(basis_for(path(3)), [1, 0, 0])
    expect = -(1 / 3) * math.log(1 / 3) - 0.5 * math.log(0.5) - (1 / 6) * math.log(1 / 6)
    assert entropy(fh) == pytest.approx(expect, abs=1e-12)
    assert entropy(fh) == pytest.approx(1.0114, abs=1e-4)


def test_entropy_modes():
    assert entropy([3.0, 4.0]) == pytest.approx(entropy([0.6, 0.8]))
    with pytest.raises(ValueError):
        entropy([3.0, 4.0], strict=True)


@given(st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=1, max_size=30))
def test_sparsity_range_and_s2(xs):
    f = np.array(xs)
    if not np.any(f):
        return
    assert sparsity(f, 2) == pytest.approx(1.0)
    n = f.size
    for p in (1, 3, math.inf):
        s = sparsity(f, p)
        assert n ** -abs(1 / (p if p != math.inf else math.inf) - 0.5) - 1e-12 <= s <= 1 + 1e-12


def test_sparsity_bounds_bulk():
    rng = np.random.default_rng(7)
    for _ in range(10_000):
        n = int(rng.integers(4, 129))
        f = rng.standard_normal(n) * (rng.random(n) < rng.random())
        if not np.any(f):
            continue
        for p in (1, 4 / 3, 4, math.inf):
            lo = n ** -abs((0 if p == math.inf else 1 / p) - 0.5)
            assert lo - 1e-12 <= sparsity(f, p) <= 1 + 1e-12


@given(st.lists(st.floats(-100, 100, allow_nan=False), min_size=2, max_size=20), st.randoms(),
       st.floats(0.01, 100))
def test_permutation_and_scale_invariance(xs, rnd, c):
    f = np.array(xs)
    if not np.any(f):
        return
    g = f.copy()
    rnd.shuffle(g)
    for p in (1, 3, math.inf):
        assert sparsity(g, p) == pytest.approx(sparsity(f, p), rel=1e-12)
        assert sparsity(-c * f, p) == pytest.approx(sparsity(f, p), rel=1e-12)
    assert entropy(g) == pytest.approx(entropy(f), abs=1e-12)
    assert support(g) == support(f)
