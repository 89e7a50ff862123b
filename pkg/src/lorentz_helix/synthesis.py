"""Curves with prescribed curvatures, built by integrating the Frenet system."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._backend import kernels
from .errors import ExpressionError, ParameterError, VanishingCurvatureError
from .expr import Expression
from .frenet import CURVATURE_FLOOR, CurveSamples, FrenetData
from .minkowski import DEFAULT_TOL, signature_deviation
from .numdiff import cumulative_integral

REORTH_EVERY = 16
INITIAL_FRAME_TOL = 1e-10
# Sub-steps per grid step in the cumulative kappa1 table; a multiple of 2 so
# every RK4 stage point is a table node.
QUADRATURE_REFINE = 8


def _as_curvature(k):
    if callable(k):
        return k
    if isinstance(k, str):
        return Expression(k)
    return Expression(repr(float(k)))


@dataclass
class CurvatureSpec:
    """Curvature functions of ``s`` on [s_min, s_max], integrated at step ``h``.

    Each curvature is an Expression, a string in the expression grammar, a
    number, or any vectorized callable.
    """

    kappa1: Callable
    kappa2: Callable
    kappa3: Callable
    s_min: float
    s_max: float
    h: float
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.kappa1 = _as_curvature(self.kappa1)
        self.kappa2 = _as_curvature(self.kappa2)
        self.kappa3 = _as_curvature(self.kappa3)
        if self.h <= 0:
            raise ParameterError("step h must be positive")
        if self.s_max < self.s_min:
            raise ParameterError("domain must satisfy s_min <= s_max")

    @property
    def steps(self) -> int:
        return int(round((self.s_max - self.s_min) / self.h))

    def grid(self):
        return self.s_min + self.h * np.arange(self.steps + 1)

    def half_grid(self):
        return self.s_min + 0.5 * self.h * np.arange(2 * self.steps + 1)

    def sample(self, s):
        """Evaluate the three curvatures on ``s``; checks the nonvanishing hypothesis.

        A curvature that is (numerically) zero on the whole sample is rejected;
        isolated zeros only trigger a warning.
        """
        s = np.asarray(s, dtype=float)
        out = []
        for i, k in enumerate((self.kappa1, self.kappa2, self.kappa3), start=1):
            try:
                with np.errstate(all="ignore"):
                    v = np.broadcast_to(np.asarray(k(s), dtype=float), s.shape).copy()
            except ExpressionError as exc:
                raise ExpressionError(f"kappa{i}: {exc}") from None
            if not np.all(np.isfinite(v)):
                raise ExpressionError(f"kappa{i} is not finite on the domain")
            small = np.abs(v) < CURVATURE_FLOOR
            if np.all(small):
                raise VanishingCurvatureError(f"kappa{i} vanishes on the whole domain", node=0, index=i)
            if np.any(small) or np.any(np.diff(np.sign(v)) != 0):
                warnings.warn(f"kappa{i} has zeros on the domain; frames are not defined there", stacklevel=3)
            out.append(v)
        return out

    def describe(self) -> dict:
        return {
            "kappa1": str(self.kappa1),
            "kappa2": str(self.kappa2),
            "kappa3": str(self.kappa3),
            "range": [self.s_min, self.s_max],
            "step": self.h,
            **self.meta,
        }


@dataclass
class SynthesisResult:
    curve: CurveSamples | None
    frenet: FrenetData
    max_signature_deviation: float
    spec: CurvatureSpec


STANDARD_FRAME = np.eye(4)


def integrate_frenet(
    spec: CurvatureSpec,
    initial_frame=None,
    initial_point=None,
    reorth_every: int = REORTH_EVERY,
    tol: float = DEFAULT_TOL,
    backend=None,
) -> SynthesisResult:
    """Integrate T' = k1 N, N' = k1 T + k2 B1, B1' = -k2 N + k3 B2, B2' = -k3 B1, a' = T.

    Classical RK4 on the 20-dimensional state with Lorentzian Gram-Schmidt
    every ``reorth_every`` steps. ``backend`` overrides the kernel module.
    """
    frame = STANDARD_FRAME if initial_frame is None else np.asarray(initial_frame, dtype=float)
    if frame.shape != (4, 4) or signature_deviation(frame) > INITIAL_FRAME_TOL:
        raise ParameterError("initial frame must be Lorentz-orthonormal with signature (-1, 1, 1, 1)")
    x0 = np.zeros((5, 4))
    x0[0] = 0.0 if initial_point is None else np.asarray(initial_point, dtype=float)
    x0[1:] = frame
    k1, k2, k3 = spec.sample(spec.half_grid())
    impl = kernels if backend is None else backend
    traj = impl.integrate_frame(k1, k2, k3, spec.h, x0, reorth_every, tol)
    s = spec.grid()
    frames = traj[:, 1:]
    fd = FrenetData(
        s,
        traj[:, 1].copy(),
        traj[:, 2].copy(),
        traj[:, 3].copy(),
        traj[:, 4].copy(),
        k1[::2].copy(),
        k2[::2].copy(),
        k3[::2].copy(),
        positions=traj[:, 0].copy(),
    )
    curve = CurveSamples(s, traj[:, 0], unit_speed=True) if len(s) >= 7 else None
    return SynthesisResult(curve, fd, float(np.max(signature_deviation(frames))), spec)


class QuadratureSlantTorsion:
    """kappa3 = kappa2 * (C sinh I + D cosh I) with I = integral of kappa1 from s_min.

    I comes from a cumulative trapezoid table on a grid refined
    ``QUADRATURE_REFINE`` times relative to h, read by linear interpolation.
    """

    def __init__(self, C, D, kappa1, kappa2, s_min, s_max, h):
        self.C, self.D = float(C), float(D)
        self.kappa1, self.kappa2 = kappa1, kappa2
        fine = h / QUADRATURE_REFINE
        count = int(np.ceil((s_max - s_min) / fine - 1e-9)) + 1
        self.table_s = s_min + fine * np.arange(count)
        self.table_i = cumulative_integral(kappa1(self.table_s), self.table_s)

    def integral(self, s):
        return np.interp(s, self.table_s, self.table_i)

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        t = self.integral(s)
        return self.kappa2(s) * (self.C * np.sinh(t) + self.D * np.cosh(t))

    def __str__(self):
        return f"({self.kappa2})*({self.C!r}*sinh(I) + {self.D!r}*cosh(I)), I = integral of ({self.kappa1}) from s_min"


def make_b2_slant_spec(C, D, kappa1, kappa2, domain, h) -> CurvatureSpec:
    """Curvatures of a B2-slant helix with kappa3/kappa2 = C sinh I + D cosh I.

    The integral I of kappa1 starts at the left end of ``domain``. It is
    written into the expression when kappa1 is constant, otherwise it is
    tabulated by quadrature. The resulting invariant value is C^2 - D^2.
    """
    s_min, s_max = (float(x) for x in domain)
    k1 = _as_curvature(kappa1)
    k2 = _as_curvature(kappa2)
    if isinstance(k1, Expression) and k1.is_constant and isinstance(k2, Expression):
        c1 = float(k1(0.0))
        shift = f"(s - ({s_min!r}))" if s_min != 0 else "s"
        arg = f"{c1!r}*{shift}"
        k3 = Expression(f"({k2.text})*({float(C)!r}*sinh({arg}) + {float(D)!r}*cosh({arg}))")
    else:
        k3 = QuadratureSlantTorsion(C, D, k1, k2, s_min, s_max, h)
    spec = CurvatureSpec(k1, k2, k3, s_min, s_max, h, meta={"slant": {"C": float(C), "D": float(D)}})
    values = k3(spec.half_grid())
    if np.any(values == 0.0) or np.any(np.sign(values) != np.sign(values[0])):
        warnings.warn("kappa3 crosses zero on the domain", stacklevel=2)
    return spec


def make_w_curve(a, b, theta, phi, s) -> CurveSamples:
    """Sample a(s) = (a sinh(theta s), a cosh(theta s), b cos(phi s), b sin(phi s)).

    Needs a^2 theta^2 - b^2 phi^2 = 1 (unit speed, timelike); all curvatures
    are then constant.
    """
    a, b, theta, phi = (float(x) for x in (a, b, theta, phi))
    if 0.0 in (a, b, theta, phi):
        raise ParameterError("W-curve parameters must be nonzero")
    excess = a * a * theta * theta - b * b * phi * phi - 1.0
    if abs(excess) > 1e-12:
        raise ParameterError(f"a^2 theta^2 - b^2 phi^2 must equal 1 (off by {excess:.3g})")
    s = np.asarray(s, dtype=float)
    pts = np.stack(
        [a * np.sinh(theta * s), a * np.cosh(theta * s), b * np.cos(phi * s), b * np.sin(phi * s)],
        axis=1,
    )
    return CurveSamples(s, pts, unit_speed=True)
