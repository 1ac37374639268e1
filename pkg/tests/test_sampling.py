import math

import numpy as np
import pytest

from bosonent.sampling import (
    NET_STREAM,
    RESTART_STREAM,
    RngSpec,
    haar_boson_state,
    haar_unit_vector,
    haar_unit_vectors,
)
from bosonent.tensor_core import dim_sym


def ks_statistic(samples, cdf):
    x = np.sort(samples)
    n = x.size
    F = cdf(x)
    return max(np.max(np.arange(1, n + 1) / n - F), np.max(F - np.arange(n) / n))


def test_unit_norm_and_shape():
    Z = haar_unit_vectors(RngSpec(1).generator(), 5, 1000)
    assert Z.shape == (1000, 5)
    assert np.allclose(np.linalg.norm(Z, axis=1), 1.0)


def test_reproducible_substreams():
    a = haar_unit_vector(RngSpec(9, 3).generator(4), 6)
    b = haar_unit_vector(RngSpec(9, 3).generator(4), 6)
    c = haar_unit_vector(RngSpec(9, 3).generator(5), 6)
    d = haar_unit_vector(RngSpec(9, 4).generator(4), 6)
    assert np.array_equal(a, b)
    assert not np.allclose(a, c)
    assert not np.allclose(a, d)


def test_stream_layout_constants():
    assert RESTART_STREAM != 0
    assert NET_STREAM >= 2**63


def test_rngspec_validation():
    with pytest.raises(ValueError):
        RngSpec(-1)
    with pytest.raises(ValueError):
        RngSpec(0, 2**64)
    with pytest.raises(TypeError):
        haar_unit_vectors(42, 3, 2)


@pytest.mark.parametrize("d", [2, 5, 30])
def test_first_coordinate_beta_law(d):
    """|Z_1|^2 has CDF 1 - (1 - t)^{d-1}; a KS test at the 0.1% level."""
    Z = haar_unit_vectors(RngSpec(2).generator(d), d, 20_000)
    D = ks_statistic(np.abs(Z[:, 0]) ** 2, lambda t: 1 - (1 - t) ** (d - 1))
    assert D * math.sqrt(Z.shape[0]) < 1.95


def test_unitary_invariance_smoke():
    """A fixed unitary applied to Haar samples leaves the marginal law unchanged."""
    d = 4
    gen = np.random.default_rng(3)
    Q, R = np.linalg.qr(gen.standard_normal((d, d)) + 1j * gen.standard_normal((d, d)))
    Q = Q * (np.diag(R) / np.abs(np.diag(R)))
    Z = haar_unit_vectors(RngSpec(3).generator(), d, 20_000) @ Q.T
    cdf = lambda t: 1 - (1 - t) ** (d - 1)
    for k in range(d):
        D = ks_statistic(np.abs(Z[:, k]) ** 2, cdf)
        assert D * math.sqrt(Z.shape[0]) < 1.95
    # phases of coordinates are uniform
    ph = (np.angle(Z[:, 1]) + np.pi) / (2 * np.pi)
    assert ks_statistic(ph, lambda u: np.clip(u, 0, 1)) * math.sqrt(Z.shape[0]) < 1.95


def test_second_moment():
    d = 7
    Z = haar_unit_vectors(RngSpec(4).generator(), d, 50_000)
    x = np.abs(Z[:, 0]) ** 2
    se = x.std(ddof=1) / math.sqrt(x.size)
    assert abs(x.mean() - 1 / d) < 4 * se


def test_haar_boson_state():
    psi = haar_boson_state(RngSpec(5).generator(0), 3, 4)
    assert psi.dim == dim_sym(3, 4)
    assert math.isclose(psi.norm(), 1.0, abs_tol=1e-12)
    with pytest.raises(ValueError):
        haar_boson_state(RngSpec().generator(), 1, 3)
