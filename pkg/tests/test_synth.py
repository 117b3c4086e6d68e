import numpy as np
import pytest

from sparsebounds.synth import XorShift64Star, generate, splitmix64


def test_splitmix_reference_value():
    # first output of the reference splitmix64 generator seeded with 0
    assert splitmix64(0) == 0xE220A8397B1DCDAF


def test_stream_is_reproducible():
    a, b = XorShift64Star(7), XorShift64Star(7)
    assert [a.next_u64() for _ in range(5)] == [b.next_u64() for _ in range(5)]
    assert XorShift64Star(8).next_u64() != XorShift64Star(7).next_u64()


def test_uniform_range():
    g = XorShift64Star(1)
    u = [g.uniform01() for _ in range(2000)]
    assert 0.0 <= min(u) and max(u) < 1.0
    assert abs(np.mean(u) - 0.5) < 0.03


def test_gaussian_moments():
    X = generate(4000, 2, "gaussian", seed=3)
    assert abs(X.mean()) < 0.05
    assert abs(X.std() - 1.0) < 0.05


def test_uniform_cube():
    X = generate(500, 3, "uniform", seed=3)
    assert X.shape == (500, 3)
    assert X.min() >= -1.0 and X.max() < 1.0


def test_generate_is_deterministic():
    assert generate(50, 3, "gaussian", 11).tobytes() == generate(50, 3, "gaussian", 11).tobytes()


@pytest.mark.parametrize("args", [(0, 2, "gaussian", 0), (3, 0, "gaussian", 0), (3, 2, "cauchy", 0)])
def test_generate_rejects(args):
    with pytest.raises(ValueError):
        generate(*args)


def test_negative_seed():
    with pytest.raises(ValueError):
        XorShift64Star(-1)
