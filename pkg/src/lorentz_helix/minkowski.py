"""Linear algebra in Minkowski 4-space with signature (-, +, +, +).

Vectors are plain numpy arrays whose last axis has length 4, so every
function here also works on stacks of vectors (one per curve node).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFrameError

DEFAULT_TOL = 1e-10
METRIC = np.diag([-1.0, 1.0, 1.0, 1.0])
SIGNATURE = np.array([-1.0, 1.0, 1.0, 1.0])


def vec4(*components) -> np.ndarray:
    """Build a validated 4-vector from four numbers or one length-4 sequence."""
    if len(components) == 1:
        components = components[0]
    v = np.asarray(components, dtype=float)
    if v.shape != (4,):
        raise ValueError(f"a 4-vector needs exactly 4 components, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("4-vector components must be finite")
    return v


def lorentz_inner(u, v):
    """-u1 v1 + u2 v2 + u3 v3 + u4 v4, broadcast over leading axes."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return -u[..., 0] * v[..., 0] + u[..., 1] * v[..., 1] + u[..., 2] * v[..., 2] + u[..., 3] * v[..., 3]


def norm_squared(v):
    return lorentz_inner(v, v)


class Causal(enum.Enum):
    SPACELIKE = "spacelike"
    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"


@dataclass(frozen=True)
class CausalCharacter:
    kind: Causal
    norm_squared: float

    def __str__(self):
        return self.kind.value


def causal_character(v, tol: float = DEFAULT_TOL) -> CausalCharacter:
    """Classify ``v``; the zero vector counts as spacelike."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    v = vec4(v)
    q = float(norm_squared(v))
    if q < -tol:
        kind = Causal.TIMELIKE
    elif abs(q) <= tol and np.any(v != 0.0):
        kind = Causal.LIGHTLIKE
    else:
        kind = Causal.SPACELIKE
    return CausalCharacter(kind, q)


def gram_matrix(frame):
    """Pairwise Lorentz products of the 4 frame vectors (axis -2)."""
    frame = np.asarray(frame, dtype=float)
    return np.einsum("...ik,k,...jk->...ij", frame, SIGNATURE, frame)


def signature_deviation(frame):
    """max |Gram - diag(-1,1,1,1)| per frame (scalar for a single frame)."""
    return np.max(np.abs(gram_matrix(frame) - METRIC), axis=(-2, -1))


def lorentz_gram_schmidt(vectors, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Orthonormalize four vectors under the Lorentz metric.

    ``vectors`` has shape ``(..., 4, 4)``: the second to last axis indexes
    the input vectors, the first of which must be timelike. Output i spans
    the same flag as inputs 0..i and is a positive multiple of the residual
    of input i, so no sign is flipped. Projections use
    ``w - eps_j <w, u_j> u_j`` with ``eps_j = <u_j, u_j>``, applied twice for
    stability.

    Raises DegenerateFrameError (with ``node`` set to the flat index of the
    first failing frame for stacked input and ``step`` to the vector index)
    when a residual has ``|<w, w>| <= tol``, or when a residual has the wrong
    causal character.
    """
    vectors = np.asarray(vectors, dtype=float)
    if vectors.shape[-2:] != (4, 4):
        raise ValueError(f"expected shape (..., 4, 4), got {vectors.shape}")
    batch = vectors.shape[:-2]
    flat = vectors.reshape(-1, 4, 4)
    out = np.empty_like(flat)
    for i in range(4):
        w = flat[:, i, :].copy()
        for _ in range(2):
            for j in range(i):
                u = out[:, j, :]
                w -= (SIGNATURE[j] * lorentz_inner(w, u))[:, None] * u
        q = lorentz_inner(w, w)
        bad = np.abs(q) <= tol
        bad |= (q > 0) if i == 0 else (q < 0)
        if np.any(bad):
            node = int(np.argmax(bad))
            what = "timelike" if i == 0 else "spacelike"
            raise DegenerateFrameError(
                f"Gram-Schmidt degenerate at vector {i}: norm-square {q[node]:.3e}"
                f" (expected {what}, tol {tol:g})",
                node=node if batch else None,
                step=i,
            )
        out[:, i, :] = w / np.sqrt(np.abs(q))[:, None]
    return out.reshape(vectors.shape)


def orientation(frame):
    """Sign of det[T, N, B1, B2] per frame."""
    return np.sign(np.linalg.det(np.asarray(frame, dtype=float)))
