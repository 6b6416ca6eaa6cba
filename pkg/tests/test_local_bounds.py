import math

import numpy as np
import pytest
from scipy.linalg import expm

from graphunc.frames import analysis, atom_norms, bank_from_kernels, design_bank, heat, localize, rect, table
from graphunc.graph import modified_path, path, sensor
from graphunc.local_bounds import (
    ambiguity, ambiguity_row_norm, kernel_product_localization, local_bound, local_bounds_all,
    localization_spread_stats, overlap, overlap_direct, tight_equality_gap, tightness_hypotheses,
)
from graphunc.measures import norm, sparsity
from graphunc.spectral import argmax_lowest, basis_for


@pytest.fixture(scope="module")
def sensor100():
    g = sensor(100, seed=0)
    return g, basis_for(g)


def test_kernel_product_dense_oracle():
    g = path(3)
    b = basis_for(g)
    L = np.diag([1.0, 2.0, 1.0]) - (np.eye(3, k=1) + np.eye(3, k=-1))
    E = expm(-L)
    r = kernel_product_localization(b, heat(1.0), heat(1.0), 0, 2)
    # <T_i g, T_j h> = N [h(L) g(L)]_{j, i}
    assert r["value"] == pytest.approx(3 * (E @ E)[2, 0], abs=1e-12)
    assert r["difference"] <= 1e-12


def test_kernel_product_special_cases(sensor100):
    _, b = sensor100
    h = heat(5.0, normalized=True)
    r = kernel_product_localization(b, h, h, 3, 3)
    assert r["value"].real == pytest.approx(norm(localize(b, h, 3), 2) ** 2)
    lo, hi = rect(0, b.lambda_max / 2), rect(b.lambda_max / 2 + 1e-9, b.lambda_max)
    assert abs(kernel_product_localization(b, lo, hi, 3, 9)["value"]) <= 1e-12


def test_ambiguity_examples(sensor100):
    _, b = sensor100
    bank = design_bank(b, "gabor_uniform", 8)
    M = atom_norms(b, bank)
    A = ambiguity(b, bank, 12, 3)
    assert A[12, 3] == pytest.approx(M[12, 3] ** 2)
    one = bank_from_kernels(b, [np.ones(b.n)])
    np.testing.assert_allclose(ambiguity(b, one, 5, 0)[:, 0], b.n * np.eye(b.n)[5], atol=1e-10)
    for p in (1, 3, math.inf):
        direct = norm(A, p)
        assert abs(ambiguity_row_norm(b, bank, 12, 3, p) - direct) <= 1e-9 * max(1, direct)


def test_local_bound_p2(sensor100):
    _, b = sensor100
    bank = design_bank(b, "gabor_uniform", 8)
    r = local_bound(b, bank, 4, 2, 2.0)
    assert r.sp == pytest.approx(1.0) and r.bound_mid == pytest.approx(math.sqrt(bank.B / bank.A))


def test_local_chain_matches_direct_coefficients(sensor100):
    g, b = sensor100
    bank = design_bank(b, "gabor_uniform", 8)
    for p in (1, 4 / 3, 4, math.inf):
        r = local_bound(b, bank, 17, 5, p, g)
        coeffs = analysis(b, bank, localize(b, bank.values[5], 17))
        assert r.sp == pytest.approx(sparsity(coeffs, p), rel=1e-10)
        assert r.chain_holds()


def test_tightness_hypotheses_examples(sensor100):
    _, b = sensor100
    one = bank_from_kernels(b, [np.ones(b.n)])
    for i0 in range(0, b.n, 7):
        assert all(tightness_hypotheses(b, one, i0, 0).values())
    loose = bank_from_kernels(b, [np.linspace(0.5, 1.0, b.n)])
    assert not tightness_hypotheses(b, loose, 0, 0)["tight_frame"]


def test_k_tilde_mostly_equals_k0(sensor100):
    g, b = sensor100
    bank = design_bank(b, "gabor_uniform", 8)
    reps = local_bounds_all(b, bank, math.inf, g)
    frac = np.mean([r.k_tilde == r.k0 for r in reps])
    assert frac > 0.5


def test_tight_equality_where_hypotheses_hold(sensor100):
    _, b = sensor100
    bank = design_bank(b, "gabor_uniform", 8)
    hits = 0
    for i0 in range(b.n):
        for k0 in range(bank.K):
            if atom_norms(b, bank)[i0, k0] == 0:
                continue
            if all(tightness_hypotheses(b, bank, i0, k0).values()):
                hits += 1
                assert tight_equality_gap(b, bank, i0, k0) <= 1e-10
    assert hits > 0


def test_overlap_examples(sensor100):
    _, b = sensor100
    h = heat(10.0, normalized=True)
    for j in (0, 50, 99):
        assert overlap(b, h, j, 2) == pytest.approx(1.0)
        assert overlap(b, np.ones(b.n), j, 1) == pytest.approx(1.0)
        assert overlap(b, np.ones(b.n), j, math.inf) == pytest.approx(1.0)
        t2 = localize(b, h.sample(b) ** 2, j)
        assert overlap(b, h, j, 1) == pytest.approx(math.sqrt(b.n) * h.sample(b)[0] ** 2 / norm(t2, 2))
        for p in (1, 3, math.inf):
            assert overlap(b, h, j, p) == pytest.approx(overlap_direct(b, h, j, p), rel=1e-10)


def test_spread_stats(sensor100):
    g, b = sensor100
    rows = localization_spread_stats(b, g, "heat", dilations=(0.1, 10))
    assert rows[0]["mean_rel_error"] == pytest.approx(0, abs=1e-12)
    assert rows[0]["mean_hop"] == 0 and rows[0]["max_hop"] == 0
    assert rows[1]["max_hop"] <= 6
    w = localization_spread_stats(b, g, "wavelet", dilations=(1,))
    assert w[0]["max_hop"] >= 0
    dc = table(np.eye(b.n)[0])
    with pytest.raises(ValueError):
        localization_spread_stats(b, g, "box")
    # Constant localizations: peak ties resolve to vertex 0.
    T = np.abs(np.column_stack([localize(b, dc, i) for i in range(3)]))
    assert argmax_lowest(T[:, 2]) == 0


def test_modified_path_local_bounds_far_end_stable():
    vals = []
    for d in (1, 11, 81, 1000):
        b = basis_for(modified_path(64, d))
        bank = design_bank(b, "gabor_uniform", 16)
        vals.append(local_bound(b, bank, 63, 0, 1.0).bound_mid)
    assert (max(vals) - min(vals)) / min(vals) < 0.01


@pytest.mark.parametrize("kind,params", [
    ("path", {}), ("modified_path", {"d": 100.0}), ("ring", {}), ("comet", {}),
    ("sensor", {}), ("community", {}), ("erdos_renyi", {}), ("random_regular", {}),
])
def test_sandwich_exhaustive_on_graph_kinds(kind, params):
    from graphunc.graph import generate
    g = generate(kind, 64, seed=0, **params)
    b = basis_for(g)
    bank = design_bank(b, "gabor_uniform", 16)
    for r in local_bounds_all(b, bank, math.inf, g):
        assert r.chain_holds()
        if all(tightness_hypotheses(b, bank, r.i0, r.k0).values()):
            assert abs(r.sp - atom_norms(b, bank)[r.i0, r.k0] / math.sqrt(bank.A)) <= 1e-9
