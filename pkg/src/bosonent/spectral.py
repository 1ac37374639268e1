"""
Spectral norm and geometric measure of entanglement of symmetric tensors.

For symmetric T the spectral norm is attained on symmetric product states,
``||T||_inf = max_{||v||=1} |F(v)|`` with ``F(v) = <T, v^{⊗m}>``, a homogeneous
polynomial of degree m in v.  ``spectral_norm`` maximizes |F| by a shifted
symmetric higher-order power iteration from Haar-random starts; its value is
always a certified lower bound because the witness reproduces it.
``brute_force_spectral_norm`` is an independent grid oracle for qubits with a
rigorous additive error bound.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .sampling import RESTART_STREAM, RngSpec, haar_unit_vector
from .tensor_core import SymmetricTensor, index_table

__all__ = [
    "SpectralResult",
    "GridResult",
    "BlockProfile",
    "overlap",
    "overlap_gradient",
    "spectral_norm",
    "brute_force_spectral_norm",
    "basis_spectral_norm",
    "log_basis_spectral_norm",
    "entanglement",
    "entanglement_from_norm",
    "dicke_entanglement",
]

log = logging.getLogger(__name__)

LN2 = math.log(2.0)


def _weights(T: SymmetricTensor) -> np.ndarray:
    return index_table(T.n, T.m).sqrt_c * np.conj(T.coeffs)


def _power_table(v: np.ndarray, m: int) -> np.ndarray:
    # pw[r, p, k] = v[r, p] ** k for k = 0..m
    R, n = v.shape
    pw = np.empty((R, n, m + 1), dtype=np.complex128)
    pw[:, :, 0] = 1.0
    for k in range(1, m + 1):
        pw[:, :, k] = pw[:, :, k - 1] * v
    return pw


def _as_batch(T: SymmetricTensor, v) -> tuple[np.ndarray, bool]:
    v = np.asarray(v, dtype=np.complex128)
    single = v.ndim == 1
    v = np.atleast_2d(v)
    if v.shape[1] != T.n:
        raise ValueError(f"vector dimension {v.shape[1]} does not match n={T.n}")
    return v, single


def _monomials(v: np.ndarray, counts: np.ndarray, m: int) -> np.ndarray:
    pw = _power_table(v, m)
    mono = pw[:, 0, counts[:, 0]]
    for p in range(1, v.shape[1]):
        mono = mono * pw[:, p, counts[:, p]]
    return mono


def overlap(T: SymmetricTensor, v) -> complex | np.ndarray:
    """<T, v^{⊗m}> = sum_i sqrt(c(i)) conj(z_i) prod_k v_{i_k}.

    ``v`` may be one vector of length n or a batch of shape (R, n).
    """
    vb, single = _as_batch(T, v)
    table = index_table(T.n, T.m)
    out = _monomials(vb, table.counts, T.m) @ _weights(T)
    return complex(out[0]) if single else out


def overlap_gradient(T: SymmetricTensor, v) -> np.ndarray:
    """Holomorphic gradient g_p = dF/dv_p of F(v) = <T, v^{⊗m}>."""
    vb, single = _as_batch(T, v)
    table = index_table(T.n, T.m)
    counts = table.counts
    w = _weights(T)
    pw = _power_table(vb, T.m)
    lowered = np.maximum(counts - 1, 0)
    R, n = vb.shape
    g = np.empty((R, n), dtype=np.complex128)
    for p in range(n):
        term = counts[:, p] * pw[:, p, lowered[:, p]]
        for q in range(n):
            if q != p:
                term = term * pw[:, q, counts[:, q]]
        g[:, p] = term @ w
    return g[0] if single else g


@dataclass(frozen=True)
class SpectralResult:
    """Best |<T, v^{⊗m}>| found; ``witness`` reproduces ``value``.

    ``value`` is a lower bound on the spectral norm.  ``converged`` refers to
    the restart that produced the witness; ``n_converged`` counts all
    restarts that met the tolerance before ``max_iter``.
    """

    value: float
    witness: np.ndarray
    iterations: int
    restarts: int
    converged: bool
    n_converged: int = 0
    distinct_maxima: int = 1


def _phase_distance(a: np.ndarray, b: np.ndarray) -> float:
    return math.sqrt(max(0.0, 2.0 - 2.0 * abs(np.vdot(a, b))))


def _count_clusters(points: np.ndarray, tol: float) -> int:
    reps: list[np.ndarray] = []
    for p in points:
        if not any(_phase_distance(p, q) < tol for q in reps):
            reps.append(p)
    return len(reps)


def spectral_norm(
    T: SymmetricTensor,
    restarts: int = 32,
    max_iter: int = 10000,
    tol: float = 1e-12,
    rng: RngSpec | None = None,
    key: Sequence[int] = (),
    shift: float = 0.5,
    cluster_tol: float = 1e-6,
) -> SpectralResult:
    """Maximize |<T, v^{⊗m}>| over unit v by shifted power iteration.

    Each restart starts from a Haar-random unit vector drawn from stream
    ``RESTART_STREAM + r`` of ``rng`` (with ``key`` appended), so results do
    not depend on how restarts are scheduled.  One step maps v to

        normalize(conj(g) * F/|F| / (m |F|) + beta * v)

    where g is the gradient of F at v.  The first term alone is the plain
    symmetric power update; it is only neutrally stable (it cycles on Dicke
    states), so the shift ``beta`` starts at ``shift`` and doubles whenever a
    step would decrease |F|, making every accepted step monotone.  A restart
    stops when |F| improves by less than ``tol`` or after ``max_iter`` steps.
    The best value wins; ties within 1e-12 go to the lowest restart index.
    """
    nrm = T.norm()
    if nrm == 0:
        raise ValueError("spectral norm of the zero tensor is not defined by this routine")
    if restarts < 1:
        raise ValueError("need at least one restart")
    rng = rng if rng is not None else RngSpec()
    n, m = T.n, T.m
    if m == 1:
        witness = T.coeffs / nrm
        return SpectralResult(nrm, witness, 0, restarts, True, restarts, 1)

    v = np.stack(
        [haar_unit_vector(RngSpec(rng.seed, RESTART_STREAM + r).generator(rng.stream, *key), n)
         for r in range(restarts)]
    )
    val = np.abs(overlap(T, v))
    beta = np.full(restarts, float(shift))
    iters = np.zeros(restarts, dtype=np.int64)
    converged = np.zeros(restarts, dtype=bool)
    active = np.ones(restarts, dtype=bool)

    while active.any():
        idx = np.flatnonzero(active)
        va = v[idx]
        f = overlap(T, va)
        g = overlap_gradient(T, va)
        af = np.abs(f)
        phase = np.where(af > 0, f / np.where(af > 0, af, 1.0), 1.0)
        scale = np.where(af > 0, m * af, 1.0)
        u = np.conj(g) * (phase / scale)[:, None] + beta[idx, None] * va
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        new = np.abs(overlap(T, u))
        bad = ~(np.isfinite(new) & np.isfinite(u).all(axis=1))
        if bad.any():
            raise FloatingPointError(f"non-finite iterate in restart {int(idx[bad][0])}")
        iters[idx] += 1
        gain = new - val[idx]
        ok = gain >= -1e-15 * max(1.0, val[idx].max())
        acc = idx[ok]
        v[acc] = u[ok]
        val[acc] = new[ok]
        beta[idx[~ok]] *= 2.0
        done = idx[ok & (gain < tol)]
        converged[done] = True
        active[done] = False
        active[iters >= max_iter] = False

    best = float(val.max())
    r_best = int(np.flatnonzero(val >= best - 1e-12)[0])
    witness = v[r_best].copy()
    value = float(abs(overlap(T, witness)))
    floor = nrm * n ** (-m / 2)
    if converged[r_best] and value < floor - tol:
        log.warning("converged value %.3e is below the lower norm bound %.3e", value, floor)
    return SpectralResult(
        value=value,
        witness=witness,
        iterations=int(iters[r_best]),
        restarts=restarts,
        converged=bool(converged[r_best]),
        n_converged=int(converged.sum()),
        distinct_maxima=_count_clusters(v, cluster_tol),
    )


@dataclass(frozen=True)
class GridResult:
    value: float
    error_bound: float
    witness: np.ndarray


def brute_force_spectral_norm(T: SymmetricTensor, grid_steps: int = 256) -> GridResult:
    """Grid maximum of |<T, v^{⊗m}>| over qubit vectors v = (cos t, e^{ip} sin t).

    t runs over ``grid_steps + 1`` points of [0, pi/2] and p over
    ``4 * grid_steps`` points of [0, 2 pi), both with spacing
    h = pi / (2 grid_steps).  Every unit vector is within distance h of a grid
    point up to phase, and |F| is (m ||T||)-Lipschitz on the sphere, so the
    true norm lies in [value, value + error_bound] with
    error_bound = m ||T|| h.
    """
    if T.n != 2:
        raise NotImplementedError("the grid oracle only supports n = 2")
    if grid_steps < 1:
        raise ValueError("grid_steps must be positive")
    m = T.m
    h = (math.pi / 2) / grid_steps
    theta = np.arange(grid_steps + 1) * h
    phi = np.arange(4 * grid_steps) * h
    table = index_table(2, m)
    a = table.counts[:, 0]  # power of the first coordinate
    b = table.counts[:, 1]
    w = _weights(T)
    c, s = np.cos(theta), np.sin(theta)
    A = (c[:, None] ** a[None, :]) * (s[:, None] ** b[None, :]) * w[None, :]
    B = np.exp(1j * np.outer(b, phi))
    F = np.abs(A @ B)
    k, l = np.unravel_index(int(np.argmax(F)), F.shape)
    witness = np.array([math.cos(theta[k]), np.exp(1j * phi[l]) * math.sin(theta[k])])
    return GridResult(float(F[k, l]), m * T.norm() * h, witness)


@dataclass(frozen=True)
class BlockProfile:
    """Block sizes m_1..m_b of the partition induced by a multi-index."""

    sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        object.__setattr__(self, "sizes", sizes)
        if not sizes or any(s < 1 for s in sizes):
            raise ValueError(f"block sizes must be positive, got {sizes}")

    @property
    def m(self) -> int:
        return sum(self.sizes)


def _profile(profile) -> BlockProfile:
    return profile if isinstance(profile, BlockProfile) else BlockProfile(tuple(profile))


def log_basis_spectral_norm(profile) -> float:
    """Natural log of ||ê_⊙i||_inf = sqrt(m!/m^m) prod_j sqrt(m_j^{m_j}/m_j!)."""
    p = _profile(profile)
    m = p.m
    total = math.lgamma(m + 1) - m * math.log(m)
    for s in p.sizes:
        total += s * math.log(s) - math.lgamma(s + 1)
    return 0.5 * total


def basis_spectral_norm(profile) -> float:
    """Closed-form spectral norm of a normalized symmetric basis tensor.

    Maximizing prod |v_j|^{m_j} on the unit sphere puts |v_j|^2 = m_j/m, so
    the unnormalized basis tensor has norm sqrt(prod m_j^{m_j} / m^m); the
    normalized one picks up the factor sqrt(c(i)).
    """
    return math.exp(log_basis_spectral_norm(profile))


def entanglement_from_norm(value: float) -> float:
    return -2.0 * math.log2(value)


def entanglement(T: SymmetricTensor, result: SpectralResult | None = None, **opts) -> float:
    """E(T) = -2 log2 ||T||_inf for a unit tensor.

    With the heuristic optimizer this is an upper estimate of E, since the
    norm value is a lower bound.
    """
    nrm = T.norm()
    if abs(nrm - 1.0) > 1e-10:
        raise ValueError(f"entanglement needs a unit tensor, norm is {nrm!r}")
    if result is None:
        result = spectral_norm(T, **opts)
    return entanglement_from_norm(result.value)


def dicke_entanglement(j: int, m: int) -> float:
    """Exact E of the qubit Dicke state with j excitations out of m."""
    if m < 1 or not 0 <= j <= m:
        raise ValueError(f"need 0 <= j <= m and m >= 1, got j={j}, m={m}")
    sizes = [s for s in (j, m - j) if s > 0]
    return max(0.0, -2.0 * log_basis_spectral_norm(sizes) / LN2)
