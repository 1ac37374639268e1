"""
Epsilon-nets on unit vectors of C^n modulo phase, and certified norm bounds.

A net of tolerance eps is a finite set of unit vectors such that every unit
vector lies within eps/2 of some net point in the phase-quotient distance
``min_|ζ|=1 ||u - ζw|| = sqrt(2 - 2|<u, w>|)``.  Because
``|<T, (ζv)^{⊗m}>| = |<T, v^{⊗m}>|`` any phase section may be used; points
are stored with a real, nonnegative first coordinate.

Two constructions are provided.

``polar`` (default)
    Writes v = (cos t * u, sin t * e^{ip}) with u a phase-fixed unit vector
    of C^{n-1} and uses the exact identity

        ||v - v'||^2 = (2 - 2cos(t - t')) + cos t cos t' ||u - u'||^2
                       + sin t sin t' |e^{ip} - e^{ip'}|^2

    to combine a grid in t, a sub-net for u (built recursively) and a phase
    grid whose size shrinks with sin t.  The covering radius is rigorous.
``box``
    Grids the faces of the cube circumscribing the real sphere
    {v : ||v|| = 1, v_1 >= 0} in R^{2n-1} and projects radially.  Also
    rigorous, but much larger than ``polar`` once n >= 3.
"""
from __future__ import annotations

import functools
import itertools
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .sampling import NET_STREAM, RngSpec, haar_unit_vectors
from .spectral import overlap
from .tensor_core import SymmetricTensor

__all__ = [
    "EpsilonNet",
    "NetTooLarge",
    "NetFileError",
    "net_constant",
    "declared_bound",
    "build_net",
    "predicted_cardinality",
    "covering_lower_bound",
    "covering_check",
    "CoveringReport",
    "certified_upper_bound",
    "CertificationResult",
    "power_distance",
    "phase_distance",
    "read_net",
    "write_net",
]

log = logging.getLogger(__name__)

MAX_NET_POINTS = 5_000_000
_SLACK = 1.0 - 1e-12


class NetTooLarge(MemoryError):
    def __init__(self, n: int, epsilon: float, predicted: int, limit: int):
        self.n, self.epsilon, self.predicted, self.limit = n, epsilon, predicted, limit
        # cardinality scales like eps^{-2(n-1)}
        need = epsilon * (predicted / limit) ** (1.0 / (2 * (n - 1)))
        super().__init__(
            f"net for n={n}, eps={epsilon!r} needs at least {predicted} points, above the limit {limit};"
            f" eps >= {need:.4g} would fit"
        )


class NetFileError(ValueError):
    pass


def net_constant(n: int) -> int:
    """K_n upper value 2^{n+1} n^n."""
    return 2 ** (n + 1) * n**n


def declared_bound(n: int, epsilon: float) -> int:
    return math.ceil(net_constant(n) / epsilon ** (2 * (n - 1)))


@dataclass(frozen=True, eq=False)
class EpsilonNet:
    n: int
    epsilon: float
    points: np.ndarray = field(repr=False)
    declared_bound: int
    method: str = "polar"

    @property
    def cardinality(self) -> int:
        return int(self.points.shape[0])

    @property
    def within_bound(self) -> bool:
        return self.cardinality <= self.declared_bound


def phase_distance(u: np.ndarray, w: np.ndarray) -> np.ndarray | float:
    """sqrt(2 - 2|<u, w>|) for unit vectors, broadcasting over leading axes."""
    ip = np.abs(np.sum(np.conj(u) * w, axis=-1))
    return np.sqrt(np.maximum(0.0, 2.0 - 2.0 * ip))


def power_distance(v: np.ndarray, w: np.ndarray, m: int) -> np.ndarray | float:
    """||v^{⊗m} - w^{⊗m}||_2 via ||v||^{2m} + ||w||^{2m} - 2 Re <v, w>^m."""
    v = np.asarray(v, dtype=np.complex128)
    w = np.asarray(w, dtype=np.complex128)
    nv = np.sum(np.abs(v) ** 2, axis=-1)
    nw = np.sum(np.abs(w) ** 2, axis=-1)
    ip = np.sum(np.conj(v) * w, axis=-1)
    sq = nv**m + nw**m - 2.0 * np.real(ip**m)
    return np.sqrt(np.maximum(sq, 0.0))


# --- polar construction ----------------------------------------------------


def _quantize_down(r: float) -> float:
    # coarse log grid so that sub-net plans can be shared; rounding down keeps the net valid
    q = math.exp(math.floor(math.log(r) * 200.0) / 200.0)
    return min(q, r)


def _phase_count(chord: float) -> int:
    # fewest equally spaced phases whose nearest one is within the given chord
    if chord >= 2.0:
        return 1
    return max(1, math.ceil(math.pi / (2.0 * math.asin(chord / 2.0))))


@dataclass(frozen=True)
class _Cell:
    theta: float
    sub_radius: float  # 0.0 when no sub-net is needed (n - 1 == 1)
    phases: int
    count: int


@functools.lru_cache(maxsize=None)
def _plan(n: int, r: float) -> tuple[int, tuple[_Cell, ...]]:
    """Cheapest (count, cells) covering {v in C^n unit, v_1 >= 0} with radius < r."""
    if n == 1:
        return 1, ()
    if r * r > 2.0:
        # e_1 is within sqrt(2) of every point of the half sphere
        return 1, (_Cell(0.0, 2.0, 1, 1),)
    lam_grid = (0.0,) if n == 2 else tuple(np.linspace(0.04, 0.96, 12))
    k_min = int((math.pi / 2) / (4.0 * math.asin(min(1.0, r / 2.0)))) + 1
    best: tuple[int, tuple[_Cell, ...]] | None = None
    for K in range(k_min, 2 * k_min + 3):
        h = (math.pi / 2) / K
        budget = r * r * _SLACK - 4.0 * math.sin(h / 4.0) ** 2
        if budget <= 0:
            continue
        cells = []
        total = 0
        for k in range(K):
            t = (k + 0.5) * h
            a = math.cos(t) * math.cos(max(t - h / 2, 0.0))
            b = math.sin(t) * math.sin(min(t + h / 2, math.pi / 2))
            choice = None
            for lam in lam_grid:
                if n == 2:
                    sub_r, sub_count = 0.0, 1
                else:
                    rho2 = lam * budget / a
                    if rho2 > 2.0:
                        sub_r, sub_count = 2.0, 1
                    else:
                        sub_r = _quantize_down(math.sqrt(rho2))
                        sub_count = _plan(n - 1, sub_r)[0]
                used = a * min(sub_r, math.sqrt(2.0)) ** 2 if n > 2 else 0.0
                chord = math.sqrt(max(budget - used, 0.0) / b)
                M = _phase_count(chord)
                c = sub_count * M
                if choice is None or c < choice.count:
                    choice = _Cell(t, sub_r, M, c)
            cells.append(choice)
            total += choice.count
            if best is not None and total >= best[0]:
                break
        else:
            if best is None or total < best[0]:
                best = (total, tuple(cells))
    assert best is not None
    return best


def _polar_points(n: int, r: float) -> np.ndarray:
    count, cells = _plan(n, r)
    if n == 1:
        return np.ones((1, 1), dtype=np.complex128)
    if count == 1 and cells and cells[0].theta == 0.0:
        e1 = np.zeros((1, n), dtype=np.complex128)
        e1[0, 0] = 1.0
        return e1
    blocks = []
    for cell in cells:
        sub = np.ones((1, 1), dtype=np.complex128) if n == 2 else _polar_points(n - 1, cell.sub_radius)
        phases = np.exp(2j * math.pi * np.arange(cell.phases) / cell.phases)
        head = math.cos(cell.theta) * np.repeat(sub, cell.phases, axis=0)
        tail = math.sin(cell.theta) * np.tile(phases, sub.shape[0])
        blocks.append(np.column_stack([head, tail]))
    return np.concatenate(blocks, axis=0)


# --- box construction ------------------------------------------------------


def _box_grid_count(n: int, epsilon: float) -> int:
    N = int(math.sqrt(2 * (n - 1)) / epsilon) + 1
    k = 2 * n - 1
    return (2 * N) ** (k - 1) + 2 * (k - 1) * N * (2 * N) ** (k - 2)


def _box_points(n: int, epsilon: float) -> np.ndarray:
    """Radially projected cell centres on the faces of [-1, 1]^{2n-1} meeting x_1 >= 0."""
    N = int(math.sqrt(2 * (n - 1)) / epsilon) + 1
    k = 2 * n - 1
    full = -1.0 + (np.arange(2 * N) + 0.5) / N
    half = (np.arange(N) + 0.5) / N
    faces = []
    for axis in range(k):
        for sign in ((1.0,) if axis == 0 else (1.0, -1.0)):
            axes = [half if a == 0 else full for a in range(k) if a != axis]
            grid = np.array(list(itertools.product(*axes)))
            pts = np.insert(grid, axis, sign, axis=1)
            faces.append(pts)
    x = np.concatenate(faces, axis=0)
    x = np.unique(x, axis=0)  # cell centres never sit on an edge; kept as a guard
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    v = np.empty((x.shape[0], n), dtype=np.complex128)
    v[:, 0] = x[:, 0]
    v[:, 1:] = x[:, 1::2] + 1j * x[:, 2::2]
    return v


# --- public construction -----------------------------------------------------


def predicted_cardinality(n: int, epsilon: float, method: str = "polar") -> int:
    _check_args(n, epsilon)
    if method == "polar":
        return _plan(n, _quantize_down(epsilon / 2.0))[0]
    if method == "box":
        return _box_grid_count(n, epsilon)
    raise ValueError(f"unknown net method {method!r}")


def _check_args(n: int, epsilon: float) -> None:
    if n < 2:
        raise ValueError(f"nets need n >= 2, got {n}")
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon!r}")


def covering_lower_bound(n: int, epsilon: float) -> int:
    """Fewest points any eps-net of the phase quotient can have.

    A ball of radius r = eps/2 is {w : |<u, w>| > 1 - r^2/2}, whose Haar
    measure is (1 - (1 - r^2/2)^2)^{n-1}.
    """
    r = epsilon / 2.0
    cap = 1.0 - (1.0 - r * r / 2.0) ** 2
    return math.ceil(cap ** (-(n - 1)))


@functools.lru_cache(maxsize=16)
def _build_cached(n: int, epsilon: float, method: str, max_points: int) -> EpsilonNet:
    floor = covering_lower_bound(n, epsilon)
    if floor > max_points:
        # rejected before the (possibly slow) planning step
        raise NetTooLarge(n, epsilon, floor, max_points)
    predicted = predicted_cardinality(n, epsilon, method)
    if predicted > max_points:
        raise NetTooLarge(n, epsilon, predicted, max_points)
    if method == "polar":
        pts = _polar_points(n, _quantize_down(epsilon / 2.0))
    else:
        pts = _box_points(n, epsilon)
    pts.setflags(write=False)
    return EpsilonNet(n, epsilon, pts, declared_bound(n, epsilon), method)


def build_net(
    n: int,
    epsilon: float,
    method: str = "polar",
    max_points: int = MAX_NET_POINTS,
    cache_dir: str | Path | None = None,
) -> EpsilonNet:
    """An eps-net for unit vectors of C^n modulo phase.

    With ``cache_dir`` the net is read from (or written to) a text file keyed
    by (n, eps, method).
    """
    _check_args(n, epsilon)
    path = None
    if cache_dir is not None:
        path = Path(cache_dir) / f"epsnet_n{n}_eps{epsilon!r}_{method}.txt"
        if path.exists():
            net = read_net(path)
            return EpsilonNet(n, epsilon, net.points, declared_bound(n, epsilon), method)
    net = _build_cached(n, float(epsilon), method, max_points)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        write_net(net, path)
    return net


@dataclass(frozen=True)
class CoveringReport:
    probes: int
    radius: float
    max_min_distance: float
    failures: int

    @property
    def ok(self) -> bool:
        return self.failures == 0


def _max_abs_inner(queries: np.ndarray, points: np.ndarray, chunk: int = 1 << 22) -> np.ndarray:
    # max_w |<q, w>| for every query row, chunked over the net
    best = np.zeros(queries.shape[0])
    step = max(1, chunk // max(1, queries.shape[0]))
    qc = np.conj(queries)
    for start in range(0, points.shape[0], step):
        block = np.abs(qc @ points[start:start + step].T)
        np.maximum(best, block.max(axis=1), out=best)
    return best


def covering_check(net: EpsilonNet, probes: int = 10_000, rng: RngSpec | None = None, batch: int = 256) -> CoveringReport:
    """Randomized covering test: Haar probes must each lie within eps/2 of the net.

    This samples the covering property; it does not prove it.
    """
    rng = rng if rng is not None else RngSpec()
    gen = RngSpec(rng.seed, NET_STREAM).generator(rng.stream, net.n)
    u = haar_unit_vectors(gen, net.n, probes)
    # phase-fix the probes the same way as the net points; the distance ignores it anyway
    ph = np.where(np.abs(u[:, 0]) > 0, np.conj(u[:, 0]) / np.maximum(np.abs(u[:, 0]), 1e-300), 1.0)
    u = u * ph[:, None]
    dmax = 0.0
    failures = 0
    radius = net.epsilon / 2.0
    for start in range(0, probes, batch):
        ip = _max_abs_inner(u[start:start + batch], net.points)
        d = np.sqrt(np.maximum(0.0, 2.0 - 2.0 * ip))
        dmax = max(dmax, float(d.max()))
        failures += int((d >= radius).sum())
    return CoveringReport(probes, radius, dmax, failures)


@dataclass(frozen=True)
class CertificationResult:
    certified: bool
    net_max: float
    epsilon: float
    net_size: int


def net_maximum(T: SymmetricTensor, net: EpsilonNet, chunk: int = 1 << 16) -> float:
    """max over the net of |<T, v^{⊗m}>|."""
    best = 0.0
    for start in range(0, net.cardinality, chunk):
        vals = np.abs(overlap(T, net.points[start:start + chunk]))
        best = max(best, float(vals.max()))
    return best


def certified_upper_bound(
    T: SymmetricTensor,
    epsilon: float,
    net: EpsilonNet | None = None,
    **net_opts,
) -> CertificationResult:
    """Try to prove ||T||_inf < eps for a unit tensor by exhausting an (eps/m)-net.

    Every unit v0 has a net point v (up to phase) with ||v0 - v|| < eps/(2m),
    hence ||v0^{⊗m} - v^{⊗m}|| < eps/2.  So if every net overlap is below
    eps/2, the norm is below eps.  Otherwise nothing is concluded and
    ``net_max`` is only a lower bound on the norm.
    """
    if abs(T.norm() - 1.0) > 1e-10:
        raise ValueError("certification needs a unit tensor")
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    if net is None:
        net = build_net(T.n, epsilon / T.m, **net_opts)
    elif net.n != T.n or net.epsilon > epsilon / T.m:
        raise ValueError("supplied net is too coarse for this tensor")
    nm = net_maximum(T, net)
    return CertificationResult(nm < epsilon / 2.0, nm, epsilon, net.cardinality)


# --- file format -------------------------------------------------------------


def write_net(net: EpsilonNet, path: str | Path) -> None:
    lines = [f"epsnet n={net.n} eps={net.epsilon!r}"]
    for p in net.points:
        lines.append(" ".join(f"{z.real:.16e} {z.imag:.16e}" for z in p))
    Path(path).write_text("\n".join(lines) + "\n")


def read_net(path: str | Path) -> EpsilonNet:
    text = Path(path).read_text().splitlines()
    if not text:
        raise NetFileError(f"{path}: empty net file")
    head = text[0].split()
    try:
        if head[0] != "epsnet":
            raise ValueError
        fields = dict(item.split("=", 1) for item in head[1:])
        n, eps = int(fields["n"]), float(fields["eps"])
    except (ValueError, KeyError, IndexError):
        raise NetFileError(f"{path}: line 1: bad header {text[0]!r}") from None
    rows = []
    for lineno, line in enumerate(text[1:], start=2):
        if not line.strip():
            continue
        try:
            vals = [float(x) for x in line.split()]
        except ValueError:
            raise NetFileError(f"{path}: line {lineno}: not a number") from None
        if len(vals) != 2 * n:
            raise NetFileError(f"{path}: line {lineno}: expected {2 * n} numbers")
        rows.append(np.array(vals[0::2]) + 1j * np.array(vals[1::2]))
    pts = np.array(rows, dtype=np.complex128).reshape(-1, n)
    return EpsilonNet(n, eps, pts, declared_bound(n, eps))
