"""CSV curve files, per-node CSV dumps and the JSON report document."""
from __future__ import annotations

import csv
import math

import numpy as np

from .errors import HelixError
from .frenet import CurveSamples

CURVE_HEADER = ["s", "x1", "x2", "x3", "x4"]
FLOAT_FORMAT = "%.17g"


class SchemaError(HelixError):
    """Input file is unreadable as a curve CSV."""


def write_curve_csv(path, curve: CurveSamples):
    data = np.column_stack([curve.s, curve.points])
    np.savetxt(path, data, delimiter=",", header=",".join(CURVE_HEADER), comments="", fmt=FLOAT_FORMAT)


def read_curve_csv(path) -> CurveSamples:
    """Read a ``s,x1,x2,x3,x4`` file; the result is flagged as a raw (not unit-speed) curve."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != CURVE_HEADER:
            raise SchemaError(f"{path}: header must be {','.join(CURVE_HEADER)}, got {header}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 5:
                raise SchemaError(f"{path}:{lineno}: expected 5 columns, got {len(row)}")
            try:
                values = [float(c) for c in row]
            except ValueError as exc:
                raise SchemaError(f"{path}:{lineno}: {exc}") from None
            if not all(math.isfinite(v) for v in values):
                raise SchemaError(f"{path}:{lineno}: non-finite value")
            rows.append(values)
    data = np.array(rows, dtype=float).reshape(-1, 5)
    try:
        return CurveSamples(data[:, 0], data[:, 1:], unit_speed=False)
    except ValueError as exc:
        raise SchemaError(f"{path}: {exc}") from None


def write_columns_csv(path, columns: dict):
    names = list(columns)
    data = np.column_stack([np.asarray(columns[k], dtype=float) for k in names])
    np.savetxt(path, data, delimiter=",", header=",".join(names), comments="", fmt=FLOAT_FORMAT)


def frame_columns(fd) -> dict:
    cols = {"s": fd.s}
    for name in ("T", "N", "B1", "B2"):
        vec = getattr(fd, name)
        for i in range(4):
            cols[f"{name}_{i + 1}"] = vec[:, i]
    cols.update(kappa1=fd.kappa1, kappa2=fd.kappa2, kappa3=fd.kappa3)
    return cols


def function_columns(fd, report) -> dict:
    cols = {"s": fd.s, "kappa1": fd.kappa1, "kappa2": fd.kappa2, "kappa3": fd.kappa3}
    nan = np.full(len(fd), np.nan)
    for key in ("H_T", "H_B", "f", "b2_inner"):
        cols[key] = report.functions.get(key, nan)
    U = report.functions.get("U")
    for i in range(4):
        cols[f"U_{i + 1}"] = nan if U is None else U[:, i]
    return cols


# --- report document -----------------------------------------------------------

_NUM = {"type": ["number", "null"]}
_BOOL = {"type": ["boolean", "null"]}
_ERR = {"type": ["string", "null"]}
_VEC = {"type": ["array", "null"], "items": {"type": "number"}, "minItems": 4, "maxItems": 4}


def _section(props):
    return {
        "type": "object",
        "required": list(props) + ["error"],
        "properties": {**props, "error": _ERR},
    }


REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["input", "frenet", "tangent_helix", "b2_slant", "axis", "tolerances"],
    "properties": {
        "input": {"type": "object", "required": ["source"]},
        "frenet": _section({"max_residual": {"type": ["array", "null"], "items": {"type": "number"}}, "nodes": _NUM, "stride": _NUM}),
        "tangent_helix": _section({"constant": _BOOL, "value": _NUM, "axis_drift": _NUM}),
        "b2_slant": _section(
            {
                "constant": _BOOL,
                "m": _NUM,
                "C": _NUM,
                "D": _NUM,
                "fit_residual": _NUM,
                "fit_success": _BOOL,
                "exp_A": _NUM,
                "exp_residual": _NUM,
                "exp_success": _BOOL,
                "f_residual": _NUM,
                "f_success": _BOOL,
                "A": _NUM,
                "B": _NUM,
                "verdicts_agree": _BOOL,
            }
        ),
        "axis": _section(
            {
                "U0": _VEC,
                "U": _VEC,
                "drift": _NUM,
                "causal_character": {"enum": ["spacelike", "timelike", "lightlike", None]},
                "norm_squared": _NUM,
                "b2_inner_min": _NUM,
                "b2_inner_max": _NUM,
                "m_sign_consistent": _BOOL,
            }
        ),
        "tolerances": {"type": "object", "required": ["verdict", "fit"]},
    },
}


def _clean(x):
    if isinstance(x, (float, np.floating)):
        return float(x) if math.isfinite(x) else None
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    return x


def _join(*errors):
    errs = [e for e in errors if e]
    return "; ".join(errs) if errs else None


def report_document(report, input_info: dict) -> dict:
    """JSON-ready dict following REPORT_SCHEMA (NaN becomes null)."""
    b2, fit, ex, fc = report.b2, report.sinh_cosh, report.exponential, report.f_criterion
    doc = {
        "input": input_info,
        "frenet": {
            "max_residual": report.frenet.values.get("max_residual"),
            "nodes": report.frenet.values.get("nodes"),
            "stride": report.frenet.values.get("stride"),
            "error": report.frenet.error,
        },
        "tangent_helix": {
            "constant": report.tangent.values.get("constant"),
            "value": report.tangent.values.get("value"),
            "axis_drift": report.tangent_axis.values.get("drift"),
            "error": _join(report.tangent.error, report.tangent_axis.error),
        },
        "b2_slant": {
            "constant": b2.values.get("constant"),
            "m": b2.values.get("m"),
            "C": fit.values.get("C"),
            "D": fit.values.get("D"),
            "fit_residual": fit.values.get("residual"),
            "fit_success": fit.values.get("success"),
            "exp_A": ex.values.get("A"),
            "exp_residual": ex.values.get("residual"),
            "exp_success": ex.values.get("success"),
            "f_residual": fc.values.get("residual"),
            "f_success": fc.values.get("success"),
            "A": b2.values.get("A"),
            "B": b2.values.get("B"),
            "verdicts_agree": report.verdicts_agree if None not in report.b2_verdicts else None,
            "error": _join(b2.error, fit.error, ex.error, fc.error),
        },
        "axis": {
            key: report.axis.values.get(key)
            for key in ("U0", "U", "drift", "causal_character", "norm_squared", "b2_inner_min", "b2_inner_max", "m_sign_consistent")
        },
        "tolerances": dict(report.tolerances),
    }
    doc["axis"]["error"] = report.axis.error
    return {k: ({kk: _clean(vv) for kk, vv in v.items()} if isinstance(v, dict) and k != "input" else v) for k, v in doc.items()}


def failed_document(input_info: dict, message: str, tolerances: dict) -> dict:
    """Report document for a run that failed before any analysis could happen."""
    props = REPORT_SCHEMA["properties"]
    doc = {"input": input_info, "tolerances": tolerances}
    for key in ("frenet", "tangent_helix", "b2_slant", "axis"):
        doc[key] = {name: None for name in props[key]["properties"]}
        doc[key]["error"] = message
    return doc
