"""Stable JSON wire formats for every public value type.

Complex scalars are two-element arrays [re, im]; polynomials are arrays of
such pairs ascending by degree; matrices are row-major nested arrays of
pairs.  :func:`dumps_canonical` renders floats with 17 significant digits and
fixed key order, so identical values serialise to identical bytes.
"""
from __future__ import annotations

import math
from typing import Any

import numpy as np

from .hilb import D0Point, D1Point
from .moduli import BasedRationalMap, MembershipReport
from .nahm import FlowReport, NahmState
from .polyalg import Poly
from .spectral import CurvePoly, SpectralSection

__all__ = [
    "SchemaError",
    "dumps_canonical",
    "encode_complex",
    "decode_complex",
    "encode_poly",
    "decode_poly",
    "encode_matrix",
    "decode_matrix",
    "encode_map",
    "decode_map",
    "encode_point",
    "decode_point",
    "encode_curve",
    "decode_curve",
    "encode_section",
    "decode_section",
    "encode_eta_coeffs",
    "encode_membership_report",
    "encode_state",
    "encode_flow_report",
]


class SchemaError(ValueError):
    """Malformed or non-finite wire data."""


# -- canonical text ----------------------------------------------------------


def _format_float(x: float) -> str:
    if not math.isfinite(x):
        raise SchemaError("non-finite number in output")
    if x == int(x) and abs(x) < 1e16:
        return f"{x:.1f}"
    return format(x, ".17g")


def dumps_canonical(obj: Any) -> str:
    """Deterministic JSON text: 17-significant-digit floats, insertion-order
    keys, compact separators."""
    pieces: list[str] = []
    _write(obj, pieces)
    return "".join(pieces)


def _write(obj: Any, out: list[str]) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, str):
        out.append('"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"')
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_format_float(float(obj)))
    elif isinstance(obj, dict):
        out.append("{")
        for i, (key, value) in enumerate(obj.items()):
            if i:
                out.append(",")
            _write(str(key), out)
            out.append(":")
            _write(value, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, value in enumerate(obj):
            if i:
                out.append(",")
            _write(value, out)
        out.append("]")
    else:
        raise SchemaError(f"cannot serialise {type(obj).__name__}")


# -- scalars, polys, matrices -------------------------------------------------


def encode_complex(z: complex) -> list[float]:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise SchemaError("non-finite complex value")
    return [z.real, z.imag]


def decode_complex(data: Any) -> complex:
    if (
        not isinstance(data, (list, tuple))
        or len(data) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in data)
    ):
        raise SchemaError(f"expected [re, im], got {data!r}")
    z = complex(float(data[0]), float(data[1]))
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise SchemaError("non-finite complex value")
    return z


def encode_poly(p: Poly) -> list[list[float]]:
    return [encode_complex(c) for c in p.coeffs]


def decode_poly(data: Any) -> Poly:
    if not isinstance(data, (list, tuple)):
        raise SchemaError(f"expected coefficient array, got {data!r}")
    return Poly._raw([decode_complex(c) for c in data])


def encode_matrix(m: np.ndarray) -> list[list[list[float]]]:
    return [[encode_complex(v) for v in row] for row in np.asarray(m)]


def decode_matrix(data: Any) -> np.ndarray:
    if not isinstance(data, (list, tuple)) or not data:
        raise SchemaError("expected a nested matrix array")
    rows = [[decode_complex(v) for v in row] for row in data]
    k = len(rows)
    if any(len(row) != k for row in rows):
        raise SchemaError("matrix must be square")
    return np.array(rows, dtype=np.complex128)


# -- domain objects -----------------------------------------------------------


def encode_map(m: BasedRationalMap) -> dict:
    return {"k": m.k, "p": encode_poly(m.p), "q": encode_poly(m.q)}


def decode_map(data: Any) -> BasedRationalMap:
    if not isinstance(data, dict) or set(data) != {"k", "p", "q"}:
        raise SchemaError('rational map needs exactly the keys "k", "p", "q"')
    k = data["k"]
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise SchemaError(f"charge k must be a positive integer, got {k!r}")
    return BasedRationalMap(p=decode_poly(data["p"]), q=decode_poly(data["q"]), k=k)


def encode_point(d: "D0Point | D1Point") -> dict:
    surface = "D1" if isinstance(d, D1Point) else "D0"
    return {
        "surface": surface,
        "x": encode_poly(d.x),
        "y": encode_poly(d.y),
        "r": encode_poly(d.r),
    }


def decode_point(data: Any) -> "D0Point | D1Point":
    if not isinstance(data, dict) or set(data) != {"surface", "x", "y", "r"}:
        raise SchemaError('point needs exactly the keys "surface", "x", "y", "r"')
    surface = data["surface"]
    if surface not in ("D0", "D1"):
        raise SchemaError(f'surface must be "D0" or "D1", got {surface!r}')
    r = decode_poly(data["r"])
    if r.degree < 1:
        raise SchemaError("r must have degree >= 1")
    cls = D1Point if surface == "D1" else D0Point
    return cls(x=decode_poly(data["x"]), y=decode_poly(data["y"]), r=r, n=r.degree)


def encode_curve(c: CurvePoly) -> dict:
    return {"n": c.n, "a": [encode_poly(ai) for ai in c.a]}


def decode_curve(data: Any) -> CurvePoly:
    if not isinstance(data, dict) or set(data) != {"n", "a"}:
        raise SchemaError('curve needs exactly the keys "n", "a"')
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise SchemaError(f"n must be a positive integer, got {n!r}")
    if not isinstance(data["a"], (list, tuple)) or len(data["a"]) != n:
        raise SchemaError("curve needs exactly n coefficient polynomials")
    curve = CurvePoly(n=n, a=tuple(decode_poly(ai) for ai in data["a"]))
    curve.validate()
    return curve


def encode_section(s: SpectralSection) -> dict:
    return {"eta_coeffs": [encode_poly(c) for c in s.coeffs]}


def encode_eta_coeffs(coeffs) -> dict:
    return {"eta_coeffs": [encode_poly(c) for c in coeffs]}


def decode_section(data: Any) -> SpectralSection:
    if not isinstance(data, dict) or set(data) != {"eta_coeffs"}:
        raise SchemaError('section needs exactly the key "eta_coeffs"')
    if not isinstance(data["eta_coeffs"], (list, tuple)):
        raise SchemaError("eta_coeffs must be an array of polynomials")
    return SpectralSection(coeffs=tuple(decode_poly(c) for c in data["eta_coeffs"]))


# -- reports ------------------------------------------------------------------


def encode_membership_report(report: MembershipReport) -> dict:
    return {
        "kind": report.kind,
        "member": report.member,
        "checks": [
            {"name": c.name, "residual": c.residual, "passed": c.passed}
            for c in report.checks
        ],
    }


def encode_state(state: NahmState) -> dict:
    return {
        "t": state.t,
        "T0": encode_matrix(state.T0),
        "T1": encode_matrix(state.T1),
        "T2": encode_matrix(state.T2),
        "T3": encode_matrix(state.T3),
    }


def encode_flow_report(report: FlowReport, include_checkpoints: bool = False) -> dict:
    out = {
        "final": encode_state(report.final),
        "max_antihermiticity_drift": report.max_antihermiticity_drift,
        "max_drift_rate": report.max_drift_rate,
        "beta_spectrum_drift": report.beta_spectrum_drift,
        "sigma_residual_history": [
            [t, r] for t, r in report.sigma_residual_history
        ],
        "steps_accepted": report.steps_accepted,
        "steps_rejected": report.steps_rejected,
        "min_step_taken": report.min_step_taken,
        "max_step_taken": report.max_step_taken,
        "convention": report.convention,
    }
    if include_checkpoints:
        out["checkpoints"] = [encode_state(s) for s in report.checkpoints]
    return out
