"""
Seeded Haar sampling on complex spheres.

Every random draw in the package goes through :class:`RngSpec`.  A generator
is built from ``SeedSequence(seed, spawn_key=(stream, *key))`` feeding the
counter-based Philox bit generator, so any substream can be derived in O(1)
and results never depend on the order in which substreams are consumed.

Stream allocation:

* ``stream`` (default 0) -- experiment sampling; sample ``k`` uses key ``(k,)``
* ``RESTART_STREAM + r`` -- starting vector of spectral-norm restart ``r``
* ``NET_STREAM + k`` -- covering probes for epsilon-nets
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensor_core import BosonState, dim_sym

__all__ = [
    "RngSpec",
    "RESTART_STREAM",
    "NET_STREAM",
    "haar_unit_vector",
    "haar_unit_vectors",
    "haar_boson_state",
]

RESTART_STREAM = 1
NET_STREAM = 2**63


@dataclass(frozen=True)
class RngSpec:
    seed: int = 42
    stream: int = 0

    def __post_init__(self):
        for name in ("seed", "stream"):
            value = getattr(self, name)
            if not 0 <= value < 2**64:
                raise ValueError(f"{name} must be a 64-bit unsigned integer, got {value}")

    def generator(self, *key: int) -> np.random.Generator:
        seq = np.random.SeedSequence(self.seed, spawn_key=(self.stream, *key))
        return np.random.Generator(np.random.Philox(seq))

    def with_stream(self, stream: int) -> RngSpec:
        return RngSpec(self.seed, stream)


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, RngSpec):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected RngSpec or numpy Generator, got {type(rng).__name__}")


def haar_unit_vectors(rng, d: int, size: int) -> np.ndarray:
    """``size`` independent Haar-uniform unit vectors in C^d, shape (size, d)."""
    if d < 1:
        raise ValueError(f"dimension must be positive, got {d}")
    gen = _as_generator(rng)
    out = np.empty((size, d), dtype=np.complex128)
    filled = 0
    while filled < size:
        need = size - filled
        g = gen.standard_normal((need, 2 * d))
        z = g[:, :d] + 1j * g[:, d:]
        norms = np.linalg.norm(z, axis=1)
        good = norms > 0  # a zero draw has probability 0; redraw it anyway
        k = int(good.sum())
        out[filled:filled + k] = z[good] / norms[good, None]
        filled += k
    return out


def haar_unit_vector(rng, d: int) -> np.ndarray:
    """One Haar-uniform unit vector in C^d (2d normals, normalized)."""
    return haar_unit_vectors(rng, d, 1)[0]


def haar_boson_state(rng, n: int, m: int) -> BosonState:
    """A Haar-random Boson state: a uniform unit vector of coefficients in the ê basis."""
    if n < 2:
        raise ValueError(f"Boson sampling needs n >= 2, got {n}")
    return BosonState(n, m, haar_unit_vector(rng, dim_sym(n, m)))
