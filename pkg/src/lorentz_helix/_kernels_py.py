"""Pure-Python reference kernels; loaded when the compiled module is absent."""
import numpy as np

from .errors import DegenerateFrameError
from .minkowski import lorentz_gram_schmidt

NAME = "python"


def _rhs(x, k1, k2, k3):
    t, n, b1, b2 = x[1], x[2], x[3], x[4]
    return np.array([t, k1 * n, k1 * t + k2 * b1, -k2 * n + k3 * b2, -k3 * b1])


def integrate_frame(k1, k2, k3, h, x0, reorth_every, tol):
    """RK4 for position + Frenet frame.

    ``k1, k2, k3`` are sampled on the half-step grid (length 2n + 1), ``x0``
    is the (5, 4) initial state: position then T, N, B1, B2. Returns the
    (n + 1, 5, 4) trajectory.
    """
    k1 = np.asarray(k1, dtype=float)
    k2 = np.asarray(k2, dtype=float)
    k3 = np.asarray(k3, dtype=float)
    n = (len(k1) - 1) // 2
    out = np.empty((n + 1, 5, 4))
    x = np.array(x0, dtype=float)
    out[0] = x
    half = 0.5 * h
    for j in range(n):
        i = 2 * j
        q1 = _rhs(x, k1[i], k2[i], k3[i])
        q2 = _rhs(x + half * q1, k1[i + 1], k2[i + 1], k3[i + 1])
        q3 = _rhs(x + half * q2, k1[i + 1], k2[i + 1], k3[i + 1])
        q4 = _rhs(x + h * q3, k1[i + 2], k2[i + 2], k3[i + 2])
        x = x + (h / 6.0) * (q1 + 2.0 * q2 + 2.0 * q3 + q4)
        if reorth_every > 0 and (j + 1) % reorth_every == 0:
            try:
                x[1:] = lorentz_gram_schmidt(x[1:], tol)
            except DegenerateFrameError as exc:
                raise DegenerateFrameError(str(exc), node=j + 1, step=exc.step) from None
        out[j + 1] = x
    return out
