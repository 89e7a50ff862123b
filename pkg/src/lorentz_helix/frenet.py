"""Unit-speed reparametrization, Frenet frames and curvatures of timelike curves."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.interpolate import CubicSpline

from .errors import (
    DegenerateFrameError,
    GridTooCoarseError,
    NotTimelikeError,
    NotUnitSpeedError,
    VanishingCurvatureError,
)
from .minkowski import DEFAULT_TOL, lorentz_gram_schmidt, lorentz_inner, orientation
from .numdiff import derivative, interior_slice, is_uniform, max_stride

MIN_NODES = 7
UNIT_SPEED_TOL = 1e-6
CURVATURE_FLOOR = 1e-8
FRAME_TOL = 1e-8
# Node spacing the 7-point frame stencils aim for: fine grids are
# differentiated at every k-th node so that 4th derivatives stay above roundoff.
FRAME_STENCIL_SPACING = 0.0125
FRAME_STENCIL_POINTS = 7


@dataclass(frozen=True)
class CurveSamples:
    """Positions of a curve on a strictly increasing parameter grid."""

    s: np.ndarray
    points: np.ndarray
    unit_speed: bool = False

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float)
        points = np.asarray(self.points, dtype=float)
        if s.ndim != 1 or points.shape != (s.shape[0], 4):
            raise ValueError(f"need s of shape (n,) and points of shape (n, 4), got {s.shape}, {points.shape}")
        if s.shape[0] < MIN_NODES:
            raise GridTooCoarseError(f"need at least {MIN_NODES} nodes, got {s.shape[0]}")
        if np.any(np.diff(s) <= 0):
            raise ValueError("parameter grid must be strictly increasing")
        if not (np.all(np.isfinite(s)) and np.all(np.isfinite(points))):
            raise ValueError("curve samples must be finite")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "points", points)

    def __len__(self):
        return self.s.shape[0]


@dataclass(frozen=True)
class CurvatureProfile:
    """kappa1, kappa2, kappa3 sampled on a uniform grid.

    ``stride`` is the node spacing the analysis stencils should use; it is
    larger than one for curvatures estimated from positions on fine grids.
    """

    s: np.ndarray
    kappa1: np.ndarray
    kappa2: np.ndarray
    kappa3: np.ndarray
    stride: int = 1
    exprs: tuple | None = None
    margin: int = 0

    def __post_init__(self):
        for name in ("s", "kappa1", "kappa2", "kappa3"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        n = self.s.shape[0]
        if any(getattr(self, k).shape != (n,) for k in ("kappa1", "kappa2", "kappa3")):
            raise ValueError("curvature arrays must match the grid")

    @classmethod
    def from_functions(cls, s, kappa1, kappa2, kappa3):
        """Sample callables (or constants) on the grid ``s``."""
        s = np.asarray(s, dtype=float)
        vals = [np.broadcast_to(np.asarray(k(s) if callable(k) else k, dtype=float), s.shape) for k in (kappa1, kappa2, kappa3)]
        return cls(s, *vals, exprs=(kappa1, kappa2, kappa3))


@dataclass(frozen=True)
class FrenetData:
    """Frame {T, N, B1, B2} and curvatures per node.

    ``points``/``stride`` describe the stencil that produced (and should
    differentiate) the data; the first and last ``margin`` nodes carry
    boundary-stencil error.
    """

    s: np.ndarray
    T: np.ndarray
    N: np.ndarray
    B1: np.ndarray
    B2: np.ndarray
    kappa1: np.ndarray
    kappa2: np.ndarray
    kappa3: np.ndarray
    stride: int = 1
    points: int = 5
    positions: np.ndarray | None = field(default=None, repr=False)
    margin: int = 0

    def __len__(self):
        return self.s.shape[0]

    @property
    def frames(self):
        """Array of shape (n, 4, 4): rows T, N, B1, B2 at each node."""
        return np.stack([self.T, self.N, self.B1, self.B2], axis=1)

    @property
    def interior(self):
        m = max(self.margin, (self.points // 2) * self.stride)
        return slice(m, max(m, len(self) - m))

    def profile(self) -> CurvatureProfile:
        return CurvatureProfile(self.s, self.kappa1, self.kappa2, self.kappa3, stride=self.stride, margin=self.margin)


def _grid_step(s):
    if not is_uniform(s):
        raise ValueError("frame extraction needs a uniform grid")
    return (s[-1] - s[0]) / (len(s) - 1)


def choose_stride(n: int, h: float, points: int = FRAME_STENCIL_POINTS, spacing: float = FRAME_STENCIL_SPACING) -> int:
    k = max(1, int(round(spacing / h)))
    return max(1, min(k, max_stride(n, points)))


def speed_squared(curve: CurveSamples, points: int = 5, stride: int = 1):
    d1 = derivative(curve.points, curve.s, 1, points=points, stride=stride)
    return lorentz_inner(d1, d1)


def check_unit_speed(curve: CurveSamples, tol: float = UNIT_SPEED_TOL, stride: int | None = None):
    """Raise NotUnitSpeedError unless <a', a'> = -1 within ``tol`` at interior nodes."""
    n = len(curve)
    if stride is None:
        stride = choose_stride(n, _grid_step(curve.s)) if is_uniform(curve.s) else 1
    points = FRAME_STENCIL_POINTS if stride > 1 else 5
    q = speed_squared(curve, points=points, stride=stride)
    inner = interior_slice(n, points, stride)
    dev = np.abs(q[inner] + 1.0)
    if dev.size and dev.max() > tol:
        node = inner.start + int(np.argmax(dev))
        raise NotUnitSpeedError(f"<a', a'> = {q[node]:.9g} at node {node}, not -1", node=node)
    return float(dev.max()) if dev.size else 0.0


def reparametrize_unit_speed(raw: CurveSamples, target_step: float | None = None, tol: float = DEFAULT_TOL) -> CurveSamples:
    """Resample ``raw`` on a uniform proper-arc-length grid of step ``target_step``.

    Arc length is Simpson's rule applied to sqrt(-<a', a'>) with 5-point
    derivative estimates; positions come from a cubic spline in the original
    parameter. The output grid starts at ``raw.s[0]``. Without a target step
    the node count is kept.
    """
    if target_step is not None and target_step <= 0:
        raise ValueError("target_step must be positive")
    t = raw.s
    q = speed_squared(raw)
    bad = q >= -tol
    if np.any(bad):
        node = int(np.argmax(bad))
        raise NotTimelikeError(f"curve not timelike at node {node}: <a', a'> = {q[node]:.6g}", node=node)
    speed = np.sqrt(-q)
    arc = cumulative_simpson(speed, x=t, initial=0.0)
    if np.any(np.diff(arc) <= 0):
        node = int(np.argmax(np.diff(arc) <= 0))
        raise NotTimelikeError(f"arc length not increasing near node {node}", node=node)
    if target_step is None:
        target_step = arc[-1] / (len(raw) - 1)
    # slack absorbs quadrature error in the arc length; the last node is clamped to the end
    count = int(np.floor(arc[-1] / target_step + 1e-6)) + 1
    if count < MIN_NODES:
        raise GridTooCoarseError(
            f"arc length {arc[-1]:.6g} yields {count} nodes at step {target_step:g}; need {MIN_NODES}"
        )
    s_new = target_step * np.arange(count)
    t_new = CubicSpline(arc, t)(np.minimum(s_new, arc[-1]))
    points = CubicSpline(t, raw.points, axis=0)(t_new)
    out = CurveSamples(raw.s[0] + s_new, points, unit_speed=True)
    check_unit_speed(out, UNIT_SPEED_TOL)
    return out


def frenet_data(
    curve: CurveSamples,
    tol: float = DEFAULT_TOL,
    curvature_floor: float = CURVATURE_FLOOR,
    stride: int | None = None,
    unit_speed_tol: float = UNIT_SPEED_TOL,
) -> FrenetData:
    """Frenet frame and curvatures of a unit-speed timelike curve.

    T, N, B1, B2 come from Lorentzian Gram-Schmidt on the first four
    derivatives (7-point stencils at ``stride``, chosen automatically by
    default). B2 completes a positively oriented frame, so kappa1 and kappa2
    come out positive and kappa3 carries the sign. Curvatures are read off
    the Frenet equations: kappa1 = <T', N>, kappa2 = <N', B1>,
    kappa3 = <B1', B2>.
    """
    if not curve.unit_speed:
        raise NotUnitSpeedError("frenet_data needs a unit-speed curve; reparametrize first")
    s = curve.s
    n = len(curve)
    h = _grid_step(s)
    points = FRAME_STENCIL_POINTS
    if stride is None:
        stride = choose_stride(n, h, points)
    check_unit_speed(curve, unit_speed_tol, stride=stride)
    d = [derivative(curve.points, s, k, points=points, stride=stride) for k in (1, 2, 3, 4)]
    try:
        frames = lorentz_gram_schmidt(np.stack(d, axis=1), tol)
    except DegenerateFrameError as exc:
        if exc.step == 0:
            raise NotTimelikeError(f"tangent not timelike at node {exc.node}", node=exc.node) from None
        raise VanishingCurvatureError(
            f"kappa{exc.step} vanishes at node {exc.node}: derivatives of order <= {exc.step + 1} are dependent",
            node=exc.node,
            index=exc.step,
        ) from None
    flip = orientation(frames) < 0
    frames[flip, 3] *= -1.0
    T, N, B1, B2 = (frames[:, i] for i in range(4))
    dN = derivative(N, s, 1, points=points, stride=stride)
    dB1 = derivative(B1, s, 1, points=points, stride=stride)
    kappas = (lorentz_inner(d[1], N), lorentz_inner(dN, B1), lorentz_inner(dB1, B2))
    check_curvatures(kappas, curvature_floor)
    # frames use one stencil, kappa2 and kappa3 a second one on top
    margin = 2 * (points // 2) * stride
    return FrenetData(s, T, N, B1, B2, *kappas, stride=stride, points=points, positions=curve.points, margin=margin)


def check_curvatures(kappas, floor=CURVATURE_FLOOR, which=(1, 2, 3)):
    for i in which:
        k = np.asarray(kappas[i - 1])
        small = np.abs(k) < floor
        if np.any(small):
            node = int(np.argmax(small))
            raise VanishingCurvatureError(f"kappa{i} = {k[node]:.3g} below floor {floor:g} at node {node}", node=node, index=i)


def frenet_residuals(fd: FrenetData):
    """Euclidean norms of the four Frenet-equation residuals per node.

    Returns ``(values, interior)``: ``values`` has shape (n, 4) for
    T' - k1 N, N' - k1 T - k2 B1, B1' + k2 N - k3 B2, B2' + k3 B1 and
    ``interior`` selects the nodes with centered stencils.
    """
    frames = fd.frames
    d = derivative(frames, fd.s, 1, points=fd.points, stride=fd.stride)
    k1, k2, k3 = (k[:, None] for k in (fd.kappa1, fd.kappa2, fd.kappa3))
    T, N, B1, B2 = (frames[:, i] for i in range(4))
    res = np.stack(
        [
            d[:, 0] - k1 * N,
            d[:, 1] - k1 * T - k2 * B1,
            d[:, 2] + k2 * N - k3 * B2,
            d[:, 3] + k3 * B1,
        ],
        axis=1,
    )
    return np.linalg.norm(res, axis=-1), fd.interior
