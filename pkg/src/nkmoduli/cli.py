"""Command-line surface: membership verification, sampling, chart
conversions, the covering map, fiber enumeration, Nahm flows with report
artefacts, and spectral-section checks.

All subcommands read JSON (a file path, inline text, or '-' for stdin) and
emit canonical JSON (or a short human summary with --format human).  Exit
codes: 0 success/member, 1 non-member, 2 malformed input or error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import serialize
from .hilb import (
    D0Point,
    D1Point,
    cover_map_on_maps,
    covering_recipe_report,
    d0_to_map,
    d1_to_map,
    fiber,
    map_to_d0,
    map_to_d1,
)
from .liealg import random_sigma_fixed, random_su, sigma
from .moduli import (
    nk_membership_report,
    sample_nk,
    strongly_centred_report,
)
from .nahm import (
    FlowControls,
    NahmState,
    extend_by_involution,
    integrate,
    pole_model_state,
    trajectory_defect,
)
from .polyalg import DEFAULT_TOL, ToleranceContext
from .serialize import SchemaError, dumps_canonical
from .spectral import (
    build_sbar,
    eval_on_zero_section,
    rescale_curve,
    section_product_residual,
)

TOL_ENV_VAR = "NKMODULI_TOL"

EXIT_OK = 0
EXIT_NONMEMBER = 1
EXIT_ERROR = 2


class CliError(Exception):
    def __init__(self, code: str, message: str, context: dict | None = None):
        super().__init__(message)
        self.code = code
        self.context = context or {}


def _emit(payload, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(dumps_canonical(payload) + "\n")
    else:
        _emit_human(payload)


def _emit_human(payload, indent: str = "") -> None:
    if isinstance(payload, dict):
        for key, value in payload.items():
            if isinstance(value, (dict, list)):
                sys.stdout.write(f"{indent}{key}:\n")
                _emit_human(value, indent + "  ")
            else:
                sys.stdout.write(f"{indent}{key}: {value}\n")
    elif isinstance(payload, list):
        for value in payload:
            if isinstance(value, (dict, list)):
                _emit_human(value, indent + "  ")
                sys.stdout.write(f"{indent}-\n")
            else:
                sys.stdout.write(f"{indent}- {value}\n")
    else:
        sys.stdout.write(f"{indent}{payload}\n")


def _emit_error(exc: CliError) -> None:
    payload = {
        "error": {"code": exc.code, "message": str(exc), "context": exc.context}
    }
    sys.stderr.write(dumps_canonical(payload) + "\n")


def _read_input(arg: str | None) -> dict:
    if arg is None:
        raise CliError("missing-input", "no --input given")
    if arg == "-":
        text = sys.stdin.read()
    elif arg.lstrip().startswith("{"):
        text = arg
    else:
        try:
            text = Path(arg).read_text()
        except OSError as exc:
            raise CliError("io", f"cannot read {arg}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError("parse", f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise CliError("schema", "top-level JSON value must be an object")
    return data


def _tolerance(args) -> float:
    if getattr(args, "tol", None) is not None:
        value = args.tol
    else:
        env = os.environ.get(TOL_ENV_VAR)
        value = float(env) if env else DEFAULT_TOL.eq_tol
    if value <= 0:
        raise CliError("config", "tolerance must be positive")
    return value


def _tol_context(args) -> ToleranceContext:
    eq = _tolerance(args)
    return ToleranceContext(eq_tol=eq, trim_tol=min(DEFAULT_TOL.trim_tol, eq))


def _decode(decoder, data):
    try:
        return decoder(data)
    except SchemaError as exc:
        raise CliError("schema", str(exc)) from exc


# -- subcommands --------------------------------------------------------------


def _cmd_verify(args) -> int:
    tol = _tolerance(args)
    data = _read_input(args.input)
    m = _decode(serialize.decode_map, data)
    try:
        m.validate()
    except ValueError as exc:
        payload = {"kind": args.kind, "member": False, "structural_error": str(exc)}
        _emit(payload, args.format)
        return EXIT_NONMEMBER
    report = (
        nk_membership_report(m, tol)
        if args.kind == "nk"
        else strongly_centred_report(m, tol)
    )
    _emit(serialize.encode_membership_report(report), args.format)
    return EXIT_OK if report.member else EXIT_NONMEMBER


def _cmd_sample(args) -> int:
    try:
        m = sample_nk(args.k, args.seed)
    except ValueError as exc:
        raise CliError("sample", str(exc)) from exc
    _emit(serialize.encode_map(m), args.format)
    return EXIT_OK


def _convert_value(data, tol: ToleranceContext):
    if set(data) == {"k", "p", "q"}:
        m = _decode(serialize.decode_map, data)
        point = map_to_d1(m, tol) if m.k % 2 == 0 else map_to_d0(m, tol)
        return serialize.encode_point(point)
    point = _decode(serialize.decode_point, data)
    m = d1_to_map(point, tol) if isinstance(point, D1Point) else d0_to_map(point, tol)
    return serialize.encode_map(m)


def _cmd_convert(args) -> int:
    tol = _tol_context(args)
    data = _read_input(args.input)
    try:
        payload = _convert_value(data, tol)
    except ValueError as exc:
        raise CliError("convert", str(exc)) from exc
    _emit(payload, args.format)
    return EXIT_OK


def _cmd_cover(args) -> int:
    tol = _tol_context(args)
    data = _read_input(args.input)
    try:
        if set(data) == {"k", "p", "q"}:
            m = _decode(serialize.decode_map, data)
        else:
            point = _decode(serialize.decode_point, data)
            if not isinstance(point, D1Point):
                raise CliError("cover", "covering starts from a D1 point or even map")
            m = d1_to_map(point, tol)
        if args.diagnose:
            report = covering_recipe_report(m, tol)
            payload = {
                "surface": serialize.encode_map(report.surface),
                "literal_p": serialize.encode_poly(report.literal_p),
                "literal_q": serialize.encode_poly(report.literal_q),
                "coefficient_gap": report.coefficient_gap,
                "literal_origin_value": serialize.encode_complex(
                    report.literal_origin_value
                ),
                "literal_is_member": report.literal_is_member,
            }
        else:
            payload = serialize.encode_map(cover_map_on_maps(m, tol))
    except ValueError as exc:
        raise CliError("cover", str(exc)) from exc
    _emit(payload, args.format)
    return EXIT_OK


def _cmd_fiber(args) -> int:
    tol = _tol_context(args)
    data = _read_input(args.input)
    point = _decode(serialize.decode_point, data)
    if not isinstance(point, D0Point):
        raise CliError("fiber", "fiber enumeration needs a D0 target point")
    try:
        preimages = fiber(point, tol)
    except ValueError as exc:
        raise CliError("fiber", str(exc)) from exc
    payload = {
        "count": len(preimages),
        "preimages": [serialize.encode_point(p) for p in preimages],
    }
    _emit(payload, args.format)
    return EXIT_OK


def _flow_initial_state(args) -> NahmState:
    state = pole_model_state(args.k, args.t0)
    if args.perturb:
        rng = np.random.default_rng(args.seed)
        draw = random_sigma_fixed if args.sigma_fixed else random_su
        bump = np.stack(
            [np.zeros((args.k, args.k), dtype=complex)]
            + [draw(args.k, rng, args.perturb) for _ in range(3)]
        )
        state = NahmState(t=args.t0, T=state.T + bump)
    return state


def _cmd_flow(args) -> int:
    if not (0.0 < args.t0 < 2.0 and 0.0 < args.t1 < 2.0):
        raise CliError("config", "t0 and t1 must lie in the open interval (0, 2)")
    controls = FlowControls(
        rtol=args.rtol, atol=args.atol, beta_scale_exponent=args.beta_scale
    )
    state = _flow_initial_state(args)
    try:
        report = integrate(state, args.t1, controls)
    except RuntimeError as exc:
        raise CliError("flow", str(exc)) from exc
    payload = serialize.encode_flow_report(report, include_checkpoints=args.checkpoints)
    if args.extend:
        try:
            extended = extend_by_involution(list(report.checkpoints), sigma)
        except ValueError as exc:
            raise CliError("extend", str(exc)) from exc
        defects = trajectory_defect(extended)
        payload["extension"] = {
            "t_range": [extended[0].t, extended[-1].t],
            "checkpoint_count": len(extended),
            "max_defect": float(np.max(defects)) if defects.size else 0.0,
        }
    if args.report_dir:
        from .report import write_flow_artifacts

        artefacts = write_flow_artifacts(report, args.report_dir)
        payload["artifacts"] = {
            "trajectory_csv": str(artefacts["trajectory_csv"]),
            "figures": [str(p) for p in artefacts["figures"]],
        }
    _emit(payload, args.format)
    return EXIT_OK


def _cmd_spectral(args) -> int:
    tol = _tol_context(args)
    curve = _decode(serialize.decode_curve, _read_input(args.curve))
    if args.spectral_command == "rescale":
        try:
            factor = complex(args.factor)
        except ValueError as exc:
            raise CliError("config", f"cannot parse factor {args.factor!r}") from exc
        try:
            payload = serialize.encode_curve(rescale_curve(curve, factor))
        except ValueError as exc:
            raise CliError("rescale", str(exc)) from exc
        _emit(payload, args.format)
        return EXIT_OK

    section = _decode(serialize.decode_section, _read_input(args.section))
    if args.spectral_command == "check-section":
        residual = section_product_residual(section, curve)
        passed = residual < tol.eq_tol
        payload = {"residual": residual, "passed": passed}
        if passed:
            zero = eval_on_zero_section(section, curve, tol=tol.eq_tol)
            payload["zero_section"] = {
                "values": [serialize.encode_complex(v) for v in zero.values],
                "all_pm_one": zero.all_pm_one,
                "skipped": list(zero.skipped),
            }
        _emit(payload, args.format)
        return EXIT_OK if passed else EXIT_NONMEMBER

    # sbar
    try:
        sbar = build_sbar(section, curve, tol)
    except ValueError as exc:
        raise CliError("sbar", str(exc)) from exc
    _emit(serialize.encode_eta_coeffs(sbar), args.format)
    return EXIT_OK


# -- parser -------------------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tol", type=float, default=None, help="equality tolerance")
    parser.add_argument(
        "--format", choices=("json", "human"), default="json", help="output format"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nkmoduli",
        description=(
            "membership tests, Hilbert-scheme charts, coverings, Nahm flows "
            "and spectral-section checks for reflection-symmetric monopole "
            "moduli"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="membership of a rational map")
    p.add_argument("--kind", choices=("nk", "mk0"), required=True)
    p.add_argument("--input", required=True, help="path, inline JSON, or -")
    _add_common(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("sample", help="draw a symmetric member")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("convert", help="map <-> Hilbert-scheme point")
    p.add_argument("--input", required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_convert)

    p = sub.add_parser("cover", help="even-charge member to odd-charge member")
    p.add_argument("--input", required=True)
    p.add_argument(
        "--diagnose",
        action="store_true",
        help="also report the literal squared-numerator recipe",
    )
    _add_common(p)
    p.set_defaults(func=_cmd_cover)

    p = sub.add_parser("fiber", help="preimages of a D0 point")
    p.add_argument("--input", required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_fiber)

    p = sub.add_parser("flow", help="integrate a Nahm flow")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--t0", type=float, default=0.1)
    p.add_argument("--t1", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--perturb", type=float, default=0.0, help="perturbation size")
    p.add_argument(
        "--sigma-fixed",
        action="store_true",
        help="draw the perturbation inside the sigma-fixed subalgebra",
    )
    p.add_argument("--rtol", type=float, default=1e-10)
    p.add_argument("--atol", type=float, default=1e-12)
    p.add_argument("--beta-scale", type=float, default=1.0,
                   help="exponent s monitoring eigenvalues of t^s (T2 + i T3)")
    p.add_argument("--extend", action="store_true",
                   help="mirror the trajectory through sigma about t = 1")
    p.add_argument("--checkpoints", action="store_true",
                   help="include the full trajectory in the JSON payload")
    p.add_argument("--report-dir", default=None,
                   help="write trajectory.csv and figures to this directory")
    _add_common(p)
    p.set_defaults(func=_cmd_flow)

    p = sub.add_parser("spectral", help="spectral-curve section calculus")
    spectral_sub = p.add_subparsers(dest="spectral_command", required=True)
    for name, needs_section in (
        ("check-section", True),
        ("sbar", True),
        ("rescale", False),
    ):
        sp = spectral_sub.add_parser(name)
        sp.add_argument("--curve", required=True, help="curve JSON")
        if needs_section:
            sp.add_argument("--section", required=True, help="section JSON")
        else:
            sp.add_argument("--factor", required=True, help="complex factor, e.g. 2 or 1+2j")
        _add_common(sp)
        sp.set_defaults(func=_cmd_spectral)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        _emit_error(exc)
        return EXIT_ERROR
    except SchemaError as exc:
        _emit_error(CliError("schema", str(exc)))
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
