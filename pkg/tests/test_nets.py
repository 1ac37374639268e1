import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bosonent.nets import (
    EpsilonNet,
    NetFileError,
    NetTooLarge,
    build_net,
    covering_lower_bound,
    certified_upper_bound,
    covering_check,
    declared_bound,
    net_constant,
    phase_distance,
    power_distance,
    predicted_cardinality,
    read_net,
    write_net,
)
from bosonent.sampling import RngSpec, haar_boson_state
from bosonent.spectral import basis_spectral_norm, spectral_norm
from bosonent.tensor_core import MultiIndex, basis_tensor, expand_full, product_tensor


def test_declared_bound_values():
    assert net_constant(2) == 32
    assert net_constant(3) == 432
    assert declared_bound(2, 0.5) == 128
    assert declared_bound(2, 0.2) == 800
    assert declared_bound(3, 0.5) == 6912
    assert declared_bound(3, 0.2) == 270000


@pytest.mark.parametrize("n,eps", [(2, 0.5), (2, 0.2), (2, 0.05), (3, 0.5), (3, 0.3)])
def test_polar_net_structure(n, eps):
    net = build_net(n, eps)
    P = net.points
    assert net.within_bound
    assert net.cardinality == predicted_cardinality(n, eps)
    assert np.allclose(np.linalg.norm(P, axis=1), 1.0)
    assert np.all(P[:, 0].imag == 0) and np.all(P[:, 0].real >= 0)
    # no duplicate points up to rounding
    keys = {tuple(np.round(np.concatenate([p.real, p.imag]), 12)) for p in P}
    assert len(keys) == net.cardinality
    rep = covering_check(net, probes=2000)
    assert rep.ok, rep


def test_polar_net_n4_covers():
    # no cardinality guarantee is claimed beyond n = 3; the covering still holds
    net = build_net(4, 0.9)
    assert covering_check(net, probes=1000).ok


def test_box_net_covers():
    for n, eps in [(2, 0.5), (2, 0.2), (3, 0.9)]:
        net = build_net(n, eps, method="box")
        assert np.allclose(np.linalg.norm(net.points, axis=1), 1.0)
        assert covering_check(net, probes=2000).ok
    assert build_net(2, 0.5, method="box").within_bound
    # the face grid is far larger than the polar net once n = 3
    assert build_net(3, 0.5, method="box").cardinality > declared_bound(3, 0.5)


def test_covering_check_detects_gaps():
    e1 = np.array([[1.0, 0.0]], dtype=complex)
    sparse = EpsilonNet(2, 0.2, e1, declared_bound(2, 0.2))
    rep = covering_check(sparse, probes=500)
    assert not rep.ok
    assert rep.max_min_distance > 0.5


def test_worst_case_rigorous_radius_n2():
    """Dense deterministic probes near cell corners stay inside the radius."""
    net = build_net(2, 0.3)
    t = np.linspace(0, math.pi / 2, 801)
    p = np.linspace(0, 2 * math.pi, 1601)
    T, Pp = np.meshgrid(t, p, indexing="ij")
    V = np.stack([np.cos(T).ravel(), (np.sin(T) * np.exp(1j * Pp)).ravel()], axis=1)
    best = np.abs(np.conj(V) @ net.points.T).max(axis=1)
    assert np.sqrt(np.maximum(0, 2 - 2 * best)).max() < 0.15


def test_lower_bound_below_constructions():
    for n, eps in [(2, 0.5), (2, 0.1), (3, 0.5), (3, 0.3)]:
        lb = covering_lower_bound(n, eps)
        assert lb <= build_net(n, eps).cardinality
        assert lb <= declared_bound(n, eps)


def test_too_large_guard():
    with pytest.raises(NetTooLarge) as info:
        build_net(3, 0.05, max_points=10_000)
    assert info.value.predicted > 10_000
    assert "eps" in str(info.value)
    with pytest.raises(ValueError):
        build_net(1, 0.5)
    with pytest.raises(ValueError):
        build_net(2, 1.5)


def test_net_file_roundtrip(tmp_path):
    net = build_net(2, 0.4)
    path = tmp_path / "net.txt"
    write_net(net, path)
    assert path.read_text().splitlines()[0] == "epsnet n=2 eps=0.4"
    back = read_net(path)
    assert back.n == 2 and back.epsilon == 0.4
    assert np.array_equal(back.points, net.points)
    cached = build_net(2, 0.4, cache_dir=tmp_path / "cache")
    again = build_net(2, 0.4, cache_dir=tmp_path / "cache")
    assert np.array_equal(cached.points, again.points)
    (tmp_path / "bad.txt").write_text("epsnet n=2 eps=0.4\n1 0 0\n")
    with pytest.raises(NetFileError):
        read_net(tmp_path / "bad.txt")


def test_phase_distance():
    u = np.array([1, 1j]) / math.sqrt(2)
    assert phase_distance(u, np.exp(0.3j) * u) < 1e-7
    assert math.isclose(phase_distance(np.array([1, 0]), np.array([0, 1])), math.sqrt(2))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_power_distance_identity(n, m, seed):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    w = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    full = expand_full(product_tensor(v, m)) - expand_full(product_tensor(w, m))
    assert math.isclose(power_distance(v, w, m), np.linalg.norm(full.ravel()), rel_tol=1e-9, abs_tol=1e-12)


def test_certificate_is_sound_on_known_norms():
    # Dicke states have closed-form norms; certification must never claim less
    for m, j in [(6, 3), (8, 4), (4, 2)]:
        idx = MultiIndex([1] * (m - j) + [2] * j, 2)
        true = basis_spectral_norm([m - j, j])
        for eps in (0.5, 0.7, 0.9):
            res = certified_upper_bound(basis_tensor(idx), eps)
            assert res.net_max <= true + 1e-12
            if res.certified:
                assert true < eps


def test_product_state_never_certifies():
    psi = product_tensor(np.array([1.0, 0.0]), 5)
    res = certified_upper_bound(psi, 0.9)
    assert not res.certified
    assert res.net_max > 0.45


def test_certify_haar_states():
    rng = RngSpec(11)
    for k in range(5):
        psi = haar_boson_state(rng.generator(k), 2, 12)
        res = certified_upper_bound(psi, 0.9)
        if res.certified:
            assert spectral_norm(psi, rng=rng, key=(k,)).value < 0.9
        assert res.net_max <= spectral_norm(psi, rng=rng, key=(k,)).value + 1e-9


def test_certify_rejects_bad_input():
    psi = product_tensor(np.array([2.0, 0.0]), 3)
    with pytest.raises(ValueError):
        certified_upper_bound(psi, 0.5)
    unit = product_tensor(np.array([1.0, 0.0]), 3)
    with pytest.raises(ValueError):
        certified_upper_bound(unit, 0.9, net=build_net(2, 0.5))
