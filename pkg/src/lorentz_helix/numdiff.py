"""Finite-difference derivatives and quadrature on sampled grids.

Centered stencils are used wherever the window fits and shifted
(one-sided) windows of the same size at the boundaries. A ``stride``
larger than one spaces the stencil over every k-th node, which trades
truncation error for roundoff when high derivatives are taken on fine
grids.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .errors import GridTooCoarseError

UNIFORM_RTOL = 1e-8


@lru_cache(maxsize=None)
def _weights_cached(offsets: tuple, order: int) -> np.ndarray:
    o = np.asarray(offsets, dtype=float)
    p = len(o)
    vander = np.vander(o, p, increasing=True).T
    rhs = np.zeros(p)
    rhs[order] = math.factorial(order)
    return np.linalg.solve(vander, rhs)


def fd_weights(offsets, order: int) -> np.ndarray:
    """Weights w with sum_j w_j f(x + o_j) ~ f^(order)(x) for unit spacing.

    Exact for polynomials of degree < len(offsets).
    """
    offsets = tuple(float(x) for x in offsets)
    if order >= len(offsets):
        raise ValueError("need more stencil points than the derivative order")
    return _weights_cached(offsets, order).copy()


def is_uniform(s) -> bool:
    steps = np.diff(np.asarray(s, dtype=float))
    if steps.size == 0:
        return True
    h = steps.mean()
    return bool(h > 0 and np.max(np.abs(steps - h)) <= UNIFORM_RTOL * h)


def interior_slice(n: int, points: int = 5, stride: int = 1) -> slice:
    """Nodes at which the centered stencil fits."""
    half = (points // 2) * stride
    return slice(half, max(half, n - half))


def max_stride(n: int, points: int) -> int:
    """Largest stride for which every node has a full shifted window."""
    if n < points:
        return 0
    return max(1, (n - 1) // points)


def _window_starts(n: int, points: int, stride: int) -> np.ndarray:
    half = points // 2
    i = np.arange(n)
    lo = i // stride
    hi = (n - 1 - i) // stride
    start = np.maximum(-half, -lo)
    start = np.where(start + points - 1 > hi, hi - (points - 1), start)
    if np.any(start < -lo):
        raise GridTooCoarseError(
            f"{n} nodes cannot hold a {points}-point stencil at stride {stride}"
        )
    return start


def derivative(values, s, order: int = 1, points: int = 5, stride: int = 1) -> np.ndarray:
    """Estimate d^order values / ds^order along axis 0.

    Non-uniform grids are supported for ``stride == 1`` by solving for the
    stencil weights node by node.
    """
    values = np.asarray(values, dtype=float)
    s = np.asarray(s, dtype=float)
    n = s.shape[0]
    if values.shape[0] != n:
        raise ValueError("values and grid lengths differ")
    if points % 2 == 0 or points <= order:
        raise ValueError("points must be odd and exceed the derivative order")
    if n < points:
        raise GridTooCoarseError(f"need at least {points} nodes, got {n}")
    if is_uniform(s):
        return _derivative_uniform(values, (s[-1] - s[0]) / (n - 1), order, points, stride)
    if stride != 1:
        raise ValueError("strided stencils need a uniform grid")
    return _derivative_general(values, s, order, points)


def _derivative_uniform(values, h, order, points, stride):
    n = values.shape[0]
    starts = _window_starts(n, points, stride)
    out = np.empty_like(values)
    scale = (stride * h) ** order
    for start in np.unique(starts):
        nodes = np.nonzero(starts == start)[0]
        offsets = tuple(range(int(start), int(start) + points))
        w = _weights_cached(offsets, order) / scale
        acc = np.zeros((len(nodes),) + values.shape[1:])
        for wj, oj in zip(w, offsets):
            acc += wj * values[nodes + stride * oj]
        out[nodes] = acc
    return out


def _derivative_general(values, s, order, points):
    n = s.shape[0]
    starts = _window_starts(n, points, 1)
    idx = np.arange(n)[:, None] + starts[:, None] + np.arange(points)[None, :]
    dx = s[idx] - s[:, None]
    scale = np.max(np.abs(dx), axis=1)
    o = dx / scale[:, None]
    vander = o[:, None, :] ** np.arange(points)[None, :, None]
    rhs = np.zeros((n, points))
    rhs[:, order] = math.factorial(order)
    w = np.linalg.solve(vander, rhs[..., None])[..., 0] / scale[:, None] ** order
    tail = (1,) * (values.ndim - 1)
    return np.sum(w.reshape(w.shape + tail) * values[idx], axis=1)


def cumulative_integral(values, s) -> np.ndarray:
    """Composite trapezoid integral from the first node, starting at 0."""
    return cumulative_trapezoid(np.asarray(values, dtype=float), np.asarray(s, dtype=float), initial=0.0)
