import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sparsebounds.errors import KernelError
from sparsebounds.kernels import Family, KernelSpec, Provenance, gram, kernel_eval, norm_bounds
from sparsebounds.linalg import jacobi_eigen

ALL_KERNELS = [
    KernelSpec.linear(),
    KernelSpec.polynomial(2, 1.0),
    KernelSpec.polynomial(3, 0.5),
    KernelSpec.exponential(),
    KernelSpec.gaussian(1.0),
    KernelSpec.gaussian(0.3),
]


def direct(k, x, y):
    """Textbook formulas, evaluated in plain Python."""
    dot = sum(a * b for a, b in zip(x, y))
    if k.family is Family.LINEAR:
        return dot
    if k.family is Family.POLYNOMIAL:
        return (dot + k.offset) ** k.degree
    if k.family is Family.EXPONENTIAL:
        return math.exp(dot)
    return math.exp(-sum((a - b) ** 2 for a, b in zip(x, y)) / (2 * k.sigma ** 2))


class TestEval:
    def test_gaussian_self(self):
        assert kernel_eval(KernelSpec.gaussian(1.0), [0.3, -2.0], [0.3, -2.0]) == 1.0

    def test_linear_orthogonal(self):
        assert kernel_eval(KernelSpec.linear(), [1.0, 0.0], [0.0, 1.0]) == 0.0

    def test_polynomial(self):
        assert kernel_eval(KernelSpec.polynomial(2, 1.0), [1.0], [1.0]) == 4.0

    @pytest.mark.parametrize("k", ALL_KERNELS, ids=str)
    def test_matches_formula(self, k, rng):
        for _ in range(20):
            x, y = rng.uniform(-1.5, 1.5, (2, 3))
            assert kernel_eval(k, x, y) == pytest.approx(direct(k, x, y), rel=1e-13, abs=1e-15)

    def test_dimension_mismatch(self):
        with pytest.raises(KernelError):
            kernel_eval(KernelSpec.linear(), [1.0, 2.0], [1.0])

    def test_non_finite(self):
        with pytest.raises(KernelError):
            kernel_eval(KernelSpec.gaussian(), [np.inf, 0.0], [0.0, 0.0])

    def test_exponential_overflow_rejected(self):
        with pytest.raises(KernelError, match="700"):
            kernel_eval(KernelSpec.exponential(), [30.0], [30.0])
        assert math.isfinite(kernel_eval(KernelSpec.exponential(), [26.0], [26.0]))

    @settings(max_examples=60, deadline=None)
    @given(
        k=st.sampled_from(ALL_KERNELS),
        pts=st.lists(st.floats(-3, 3), min_size=4, max_size=4),
    )
    def test_symmetry_and_cauchy_schwarz(self, k, pts):
        x, y = pts[:2], pts[2:]
        kxy = kernel_eval(k, x, y)
        assert kxy == kernel_eval(k, y, x)
        kxx, kyy = kernel_eval(k, x, x), kernel_eval(k, y, y)
        assert kxy ** 2 <= kxx * kyy * (1 + 1e-12) + 1e-12


class TestGram:
    def test_single_gaussian(self):
        np.testing.assert_array_equal(gram(KernelSpec.gaussian(), [[0.2, 0.1]]), [[1.0]])

    def test_identical_linear(self):
        np.testing.assert_array_equal(gram(KernelSpec.linear(), [[1.0, 1.0], [1.0, 1.0]]), [[2.0, 2.0], [2.0, 2.0]])

    @pytest.mark.parametrize("k", ALL_KERNELS, ids=str)
    def test_entries_symmetry_psd(self, k, rng, backend):
        X = rng.uniform(-1, 1, (12, 3))
        G = gram(k, X)
        np.testing.assert_array_equal(G, G.T)
        for i in range(12):
            for j in range(12):
                assert G[i, j] == pytest.approx(direct(k, X[i], X[j]), rel=1e-13, abs=1e-15)
        assert jacobi_eigen(G).values[-1] >= -1e-9 * np.trace(G)

    def test_five_gaussian_points_psd(self, rng):
        G = gram(KernelSpec.gaussian(1.0), rng.standard_normal((5, 2)))
        assert jacobi_eigen(G).values[-1] >= -1e-12

    def test_backends_agree_bitwise(self, rng, monkeypatch):
        from sparsebounds import _backend, _fallback

        X = rng.standard_normal((30, 4))
        before = [gram(k, X) for k in ALL_KERNELS]
        for name in ("sym_dot", "sym_sqdist"):
            monkeypatch.setattr(_backend, name, getattr(_fallback, name))
        after = [gram(k, X) for k in ALL_KERNELS]
        for a, b in zip(before, after):
            assert a.tobytes() == b.tobytes()


class TestNormBounds:
    def test_gaussian_analytic(self):
        nb = norm_bounds(KernelSpec.gaussian(2.0))
        assert (nb.r_sq, nb.R_sq, nb.provenance) == (1.0, 1.0, Provenance.ANALYTIC)
        assert nb.unit

    def test_linear(self):
        nb = norm_bounds(KernelSpec.linear(), [[1.0, 0.0], [2.0, 0.0]])
        assert (nb.r_sq, nb.R_sq, nb.provenance) == (1.0, 4.0, Provenance.EMPIRICAL)

    def test_exponential_scan(self, rng):
        X = rng.uniform(-1, 1, (40, 2))
        nb = norm_bounds(KernelSpec.exponential(), X)
        scan = [math.exp(float(x @ x)) for x in X]
        assert nb.r_sq == pytest.approx(min(scan), rel=1e-14)
        assert nb.R_sq == pytest.approx(max(scan), rel=1e-14)

    def test_requires_points(self):
        with pytest.raises(KernelError):
            norm_bounds(KernelSpec.linear())
        with pytest.raises(KernelError):
            norm_bounds(KernelSpec.polynomial(), [])


class TestSpec:
    @pytest.mark.parametrize(
        "text, expected",
        [
            ("gaussian:sigma=1.0", KernelSpec.gaussian(1.0)),
            ("linear", KernelSpec.linear()),
            ("poly:p=2,c=1", KernelSpec.polynomial(2, 1.0)),
            ("poly:p=3", KernelSpec.polynomial(3, 1.0)),
            ("exp", KernelSpec.exponential()),
            (" Gaussian:sigma=0.25 ", KernelSpec.gaussian(0.25)),
        ],
    )
    def test_parse(self, text, expected):
        assert KernelSpec.parse(text) == expected

    @pytest.mark.parametrize("k", ALL_KERNELS, ids=str)
    def test_round_trip(self, k):
        assert KernelSpec.parse(str(k)) == k

    @pytest.mark.parametrize(
        "text", ["rbf", "gaussian:sigma=0", "gaussian:sigma=-1", "poly:p=0", "poly:p=1.5", "poly:c=-1",
                 "linear:sigma=1", "gaussian:s=1", "gaussian:sigma=abc", "gaussian:sigma"],
    )
    def test_parse_rejects(self, text):
        with pytest.raises(KernelError):
            KernelSpec.parse(text)

    def test_only_gaussian_is_unit_norm(self):
        assert [k.unit_norm for k in ALL_KERNELS] == [False, False, False, False, True, True]
