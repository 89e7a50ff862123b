"""Helix characterizations for timelike curves: invariants, fits and axes.

Every function works on sampled data. Derivatives use 5-point stencils at
the profile's stride, integrals of curvatures use the composite trapezoid
rule starting at the first grid node, and "interior" means nodes whose
stencils (and stencils of stencils, for second derivatives) are centered.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import HelixError, IllConditionedFitError, NotSlantError, SignChangeError
from .frenet import CurvatureProfile, FrenetData, check_curvatures, frenet_residuals
from .minkowski import CausalCharacter, Causal, causal_character, lorentz_inner
from .numdiff import cumulative_integral, derivative

POINTS = 5
VERDICT_TOL = 1e-4
FIT_TOL = 1e-6
DECOMPOSITION_TOL = 1e-8
MAX_FIT_CONDITION = 1e12


@dataclass(frozen=True)
class FunctionSamples:
    s: np.ndarray
    values: np.ndarray
    interior: slice = slice(None)

    @property
    def inner(self):
        return self.values[self.interior]

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.inner)))


def _interior(cp, depth: int = 1) -> slice:
    n = len(cp.s)
    m = cp.margin + depth * (POINTS // 2) * cp.stride
    return slice(m, max(m, n - m))


def _valid(cp) -> slice:
    n = len(cp.s)
    return slice(cp.margin, max(cp.margin, n - cp.margin))


def _d(values, cp):
    return derivative(values, cp.s, 1, points=POINTS, stride=cp.stride)


def detect_constancy(samples, tol: float):
    """(verdict, value): value is the median, verdict is max |x - value| <= tol * max(1, |value|)."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    x = samples.inner if isinstance(samples, FunctionSamples) else np.asarray(samples, dtype=float)
    x = np.ravel(x)
    if x.size == 0:
        raise ValueError("no samples to test")
    value = float(np.median(x))
    dev = float(np.max(np.abs(x - value)))
    return bool(dev <= tol * max(1.0, abs(value))), value


# --- axis decomposition and the linear system it satisfies -----------------


@dataclass(frozen=True)
class AxisCoefficients:
    """U = a1 T + a2 N + a3 B1 + a4 B2 per node, with M = <U, U>."""

    s: np.ndarray
    a1: np.ndarray
    a2: np.ndarray
    a3: np.ndarray
    a4: np.ndarray
    M: float

    def closure_error(self):
        """|-a1^2 + a2^2 + a3^2 + a4^2 - M| per node."""
        return np.abs(-self.a1**2 + self.a2**2 + self.a3**2 + self.a4**2 - self.M)


def axis_decomposition(fd: FrenetData, U) -> AxisCoefficients:
    U = np.asarray(U, dtype=float)
    if U.shape != (4,) or not np.any(U):
        raise ValueError("U must be a nonzero 4-vector")
    return AxisCoefficients(
        fd.s,
        -lorentz_inner(fd.T, U),
        lorentz_inner(fd.N, U),
        lorentz_inner(fd.B1, U),
        lorentz_inner(fd.B2, U),
        float(lorentz_inner(U, U)),
    )


def ode_residuals(ac: AxisCoefficients, cp: CurvatureProfile) -> FunctionSamples:
    """a1' + k1 a2, a2' + k1 a1 - k2 a3, a3' + k2 a2 - k3 a4, a4' + k3 a3 as columns."""
    if ac.s.shape != cp.s.shape or not np.allclose(ac.s, cp.s, rtol=0, atol=1e-12):
        raise ValueError("coefficient and curvature grids differ")
    k1, k2, k3 = cp.kappa1, cp.kappa2, cp.kappa3
    res = np.stack(
        [
            _d(ac.a1, cp) + k1 * ac.a2,
            _d(ac.a2, cp) + k1 * ac.a1 - k2 * ac.a3,
            _d(ac.a3, cp) + k2 * ac.a2 - k3 * ac.a4,
            _d(ac.a4, cp) + k3 * ac.a3,
        ],
        axis=1,
    )
    return FunctionSamples(cp.s, res, _interior(cp))


# --- tangent helices: <T, U> constant ----------------------------------------


def tangent_helix_invariant(cp: CurvatureProfile) -> FunctionSamples:
    """(1/k3^2) ((k1/k2)')^2 + (k1/k2)^2."""
    check_curvatures((cp.kappa1, cp.kappa2, cp.kappa3), which=(2, 3))
    r = cp.kappa1 / cp.kappa2
    dr = _d(r, cp)
    return FunctionSamples(cp.s, (dr / cp.kappa3) ** 2 + r**2, _interior(cp))


@dataclass(frozen=True)
class TangentCoefficients:
    """a3, a4 of a tangent helix and the constants of their rotation form."""

    s: np.ndarray
    a1: float
    a3: np.ndarray
    a4: np.ndarray
    A: float
    B: float
    a3_rotation: np.ndarray
    a4_rotation: np.ndarray
    interior: slice


def tangent_helix_coefficients(cp: CurvatureProfile, a1: float) -> TangentCoefficients:
    """a3 = (k1/k2) a1 and a4 = (1/k3)(k1/k2)' a1 for a tangent helix (a2 = 0).

    A = a3(s0) and B = a4(s0) are the constants of
    a3 = A cos t + B sin t, a4 = -A sin t + B cos t, where t is the integral
    of kappa3 from the first node; that form is sampled as well.
    """
    check_curvatures((cp.kappa1, cp.kappa2, cp.kappa3), which=(2, 3))
    r = cp.kappa1 / cp.kappa2
    a3 = r * a1
    a4 = _d(r, cp) * a1 / cp.kappa3
    A, B = float(a3[0]), float(a4[0])
    t = cumulative_integral(cp.kappa3, cp.s)
    return TangentCoefficients(
        cp.s,
        float(a1),
        a3,
        a4,
        A,
        B,
        A * np.cos(t) + B * np.sin(t),
        -A * np.sin(t) + B * np.cos(t),
        _interior(cp),
    )


# --- B2-slant helices: <B2, U> constant --------------------------------------


def b2_slant_invariant(cp: CurvatureProfile) -> FunctionSamples:
    """(1/k1^2) ((k3/k2)')^2 - (k3/k2)^2; constant exactly for B2-slant helices."""
    check_curvatures((cp.kappa1, cp.kappa2, cp.kappa3), which=(1, 2))
    q = cp.kappa3 / cp.kappa2
    dq = _d(q, cp)
    return FunctionSamples(cp.s, (dq / cp.kappa1) ** 2 - q**2, _interior(cp))


@dataclass(frozen=True)
class AxisResult:
    s: np.ndarray
    U: np.ndarray  # (n, 4)
    max_drift: float
    inner: np.ndarray  # <X, U> per node for the frame field X the axis is built for
    interior: slice

    def representative(self) -> np.ndarray:
        """Componentwise median of U over interior nodes."""
        return np.median(self.U[self.interior], axis=0)


def _drift(U, cp):
    dU = _d(U, cp)
    interior = _interior(cp)
    return float(np.max(np.linalg.norm(dU[interior], axis=-1))), interior


def construct_axis(fd: FrenetData) -> AxisResult:
    """U = -(1/k1)(k3/k2)' T + (k3/k2) N + B2, its drift max |dU/ds| and <B2, U>."""
    cp = fd.profile()
    check_curvatures((cp.kappa1, cp.kappa2, cp.kappa3), which=(1, 2))
    q = cp.kappa3 / cp.kappa2
    f = _d(q, cp) / cp.kappa1
    U = -f[:, None] * fd.T + q[:, None] * fd.N + fd.B2
    drift, interior = _drift(U, cp)
    return AxisResult(fd.s, U, drift, lorentz_inner(fd.B2, U), interior)


def construct_tangent_axis(fd: FrenetData) -> AxisResult:
    """U = T + (k1/k2) B1 + (1/k3)(k1/k2)' B2 (a1 = 1); ``inner`` holds <T, U> = -1."""
    cp = fd.profile()
    check_curvatures((cp.kappa1, cp.kappa2, cp.kappa3), which=(2, 3))
    r = cp.kappa1 / cp.kappa2
    w = _d(r, cp) / cp.kappa3
    U = fd.T + r[:, None] * fd.B1 + w[:, None] * fd.B2
    drift, interior = _drift(U, cp)
    return AxisResult(fd.s, U, drift, lorentz_inner(fd.T, U), interior)


@dataclass(frozen=True)
class SinhCoshFit:
    C: float
    D: float
    residual: float
    scale: float

    def success(self, tol: float) -> bool:
        return self.residual <= tol * max(1.0, self.scale)


def sinh_cosh_fit(cp: CurvatureProfile) -> SinhCoshFit:
    """Least-squares k3/k2 ~ C sinh t + D cosh t with t the integral of k1."""
    check_curvatures((cp.kappa1, cp.kappa2, cp.kappa3), which=(1, 2))
    q = cp.kappa3 / cp.kappa2
    t = cumulative_integral(cp.kappa1, cp.s)
    design = np.stack([np.sinh(t), np.cosh(t)], axis=1)
    keep = _valid(cp)
    design, q = design[keep], q[keep]
    cond = np.linalg.cond(design)
    if not np.isfinite(cond) or cond > MAX_FIT_CONDITION:
        raise IllConditionedFitError(f"sinh/cosh design matrix condition number {cond:.3g}")
    (C, D), *_ = np.linalg.lstsq(design, q, rcond=None)
    residual = float(np.max(np.abs(design @ np.array([C, D]) - q)))
    return SinhCoshFit(float(C), float(D), residual, float(np.max(np.abs(q))))


@dataclass(frozen=True)
class ExponentialFit:
    A_exp: float
    residual: float

    def success(self, tol: float) -> bool:
        return self.residual <= tol


def exponential_ratio_check(cp: CurvatureProfile) -> ExponentialFit:
    """Fit log|k3/k2| - integral of k1 by a constant c; A_exp = sign * exp(c).

    ``residual`` is the largest deviation from c (log scale).
    """
    check_curvatures((cp.kappa1, cp.kappa2, cp.kappa3), which=(1, 2))
    q = cp.kappa3 / cp.kappa2
    sign = np.sign(q)
    if np.any(sign == 0) or np.any(sign != sign[0]):
        node = int(np.argmax((sign == 0) | (sign != sign[0])))
        raise SignChangeError(f"k3/k2 changes sign at node {node}", node=node)
    y = (np.log(np.abs(q)) - cumulative_integral(cp.kappa1, cp.s))[_valid(cp)]
    c = float(np.mean(y))
    return ExponentialFit(float(sign[0] * np.exp(c)), float(np.max(np.abs(y - c))))


@dataclass(frozen=True)
class FCriterion:
    f: FunctionSamples
    residual: float
    scale: float

    def success(self, tol: float) -> bool:
        return self.residual <= tol * max(1.0, self.scale)


def f_characterization(cp: CurvatureProfile) -> FCriterion:
    """f = (1/k1)(k3/k2)' and max |f' - k1 k3/k2| over interior nodes."""
    check_curvatures((cp.kappa1, cp.kappa2, cp.kappa3), which=(1, 2))
    q = cp.kappa3 / cp.kappa2
    f = _d(q, cp) / cp.kappa1
    target = cp.kappa1 * q
    interior = _interior(cp, depth=2)
    gap = np.abs(_d(f, cp) - target)[interior]
    return FCriterion(
        FunctionSamples(cp.s, f, _interior(cp)),
        float(np.max(gap)),
        float(np.max(np.abs(target[interior]))),
    )


@dataclass(frozen=True)
class SlantCoefficients:
    s: np.ndarray
    a1: np.ndarray
    a2: np.ndarray
    A: float
    B: float
    C: float
    D: float
    a4: float
    m: float


def slant_coefficient_solution(cp: CurvatureProfile, a4: float = 1.0, tol: float = VERDICT_TOL) -> SlantCoefficients:
    """a1 = A cosh t + B sinh t, a2 = -A sinh t - B cosh t for a B2-slant profile.

    t is the integral of kappa1 from the first node. A and B are read at the
    first trustworthy node s0 from
        A = -[f cosh t - q sinh t] a4,  B = -[q cosh t - f sinh t] a4
    (q = k3/k2, f = q'/k1), which reduces to A = -f(s0) a4, B = -q(s0) a4
    when s0 is the first node. C = -A/a4 and D = -B/a4 are the matching
    coefficients of q.
    """
    if a4 == 0:
        raise ValueError("a4 must be nonzero")
    inv = b2_slant_invariant(cp)
    constant, m = detect_constancy(inv, tol)
    if not constant:
        raise NotSlantError("the B2-slant invariant is not constant on this profile")
    q = cp.kappa3 / cp.kappa2
    f = _d(q, cp) / cp.kappa1
    t = cumulative_integral(cp.kappa1, cp.s)
    sh, ch = np.sinh(t), np.cosh(t)
    i = _valid(cp).start
    A = float(-(f[i] * ch[i] - q[i] * sh[i]) * a4)
    B = float(-(q[i] * ch[i] - f[i] * sh[i]) * a4)
    a1 = A * ch + B * sh
    a2 = -A * sh - B * ch
    return SlantCoefficients(cp.s, a1, a2, A, B, -A / a4, -B / a4, float(a4), m)


# --- report -------------------------------------------------------------------


@dataclass
class Section:
    """Outcome of one analysis step; ``error`` holds ``"op: message"`` when it failed."""

    values: dict = field(default_factory=dict)
    error: str | None = None


@dataclass
class HelixReport:
    tangent: Section
    b2: Section
    sinh_cosh: Section
    exponential: Section
    f_criterion: Section
    axis: Section
    tangent_axis: Section
    frenet: Section
    tolerances: dict
    functions: dict = field(default_factory=dict)

    @property
    def b2_verdicts(self):
        """The three B2-slant verdicts (invariant, sinh/cosh fit, f-criterion), None where failed."""
        return (
            self.b2.values.get("constant"),
            self.sinh_cosh.values.get("success"),
            self.f_criterion.values.get("success"),
        )

    @property
    def verdicts_agree(self) -> bool:
        v = self.b2_verdicts
        return None not in v and len(set(v)) == 1


def _run(name, fn, section):
    try:
        return fn()
    except (HelixError, ValueError, np.linalg.LinAlgError) as exc:
        section.error = f"{name}: {exc}"
        return None


def m_sign_consistent(character: CausalCharacter, m: float) -> bool:
    """An axis that is timelike or lightlike forces m > 0; spacelike axes allow any sign."""
    if character.kind in (Causal.TIMELIKE, Causal.LIGHTLIKE):
        return m > 0
    return True


def build_report(fd: FrenetData, tol: float = VERDICT_TOL, fit_tol: float = FIT_TOL, causal_tol: float = 1e-6) -> HelixReport:
    """Run every characterization on ``fd``.

    Failures of individual steps are recorded in the matching section as
    ``"operation: message"`` instead of aborting the report.
    """
    cp = fd.profile()
    report = HelixReport(*(Section() for _ in range(8)), tolerances={"verdict": tol, "fit": fit_tol, "causal": causal_tol})

    res = _run("frenet_residuals", lambda: frenet_residuals(fd), report.frenet)
    if res is not None:
        values, interior = res
        report.frenet.values["max_residual"] = [float(x) for x in np.max(values[interior], axis=0)]
        report.frenet.values["stride"] = fd.stride
        report.frenet.values["nodes"] = len(fd)

    ht = _run("tangent_helix_invariant", lambda: tangent_helix_invariant(cp), report.tangent)
    if ht is not None:
        constant, value = detect_constancy(ht, tol)
        report.tangent.values.update(constant=constant, value=value)
        report.functions["H_T"] = ht.values

    hb = _run("b2_slant_invariant", lambda: b2_slant_invariant(cp), report.b2)
    m = None
    if hb is not None:
        constant, m = detect_constancy(hb, tol)
        report.b2.values.update(constant=constant, m=m)
        report.functions["H_B"] = hb.values

    fit = _run("sinh_cosh_fit", lambda: sinh_cosh_fit(cp), report.sinh_cosh)
    if fit is not None:
        report.sinh_cosh.values.update(C=fit.C, D=fit.D, residual=fit.residual, success=fit.success(tol))

    ex = _run("exponential_ratio_check", lambda: exponential_ratio_check(cp), report.exponential)
    if ex is not None:
        report.exponential.values.update(A=ex.A_exp, residual=ex.residual, success=ex.success(tol))

    fc = _run("f_characterization", lambda: f_characterization(cp), report.f_criterion)
    if fc is not None:
        report.f_criterion.values.update(residual=fc.residual, success=fc.success(tol))
        report.functions["f"] = fc.f.values

    axis = _run("construct_axis", lambda: construct_axis(fd), report.axis)
    if axis is not None:
        U = axis.representative()
        character = causal_character(U, causal_tol)
        report.axis.values.update(
            U0=[float(x) for x in axis.U[0]],
            U=[float(x) for x in U],
            drift=axis.max_drift,
            causal_character=str(character),
            norm_squared=character.norm_squared,
            b2_inner_min=float(np.min(axis.inner)),
            b2_inner_max=float(np.max(axis.inner)),
        )
        if m is not None:
            report.axis.values["m_sign_consistent"] = m_sign_consistent(character, m)
        report.functions["b2_inner"] = axis.inner
        report.functions["U"] = axis.U
        if report.b2.values.get("constant"):
            sol = _run("slant_coefficient_solution", lambda: slant_coefficient_solution(cp, 1.0, tol), report.b2)
            if sol is not None:
                report.b2.values.update(A=sol.A, B=sol.B)

    tax = _run("construct_tangent_axis", lambda: construct_tangent_axis(fd), report.tangent_axis)
    if tax is not None:
        report.tangent_axis.values.update(
            U=[float(x) for x in tax.representative()],
            drift=tax.max_drift,
        )
    return report
