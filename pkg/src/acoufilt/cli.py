"""Command-line front end: simulate, fit, synthesize, metrics, sweep."""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import os
import sys
import tempfile

import numpy as np

from . import fitting, io_formats, svgplot
from .curves import parse_grid_spec
from .errors import AcoufiltError
from .metrics import DEFAULT_GUARD, passband_metrics
from .network import admittance_from_s11, build_ladder_response, one_port_s11, shunt_series_shunt
from .synthesis import synthesize_ladder


def _atomic_write(path: str, text: str) -> None:
    """Write via temp file + rename so interrupted runs never corrupt files."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".acoufilt-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_outputs(outputs: list[tuple[str, str]]) -> None:
    for path, text in outputs:
        _atomic_write(path, text)


def _read(path: str) -> str:
    with open(path, "r") as fh:
        return fh.read()


def _cmd_simulate(args) -> int:
    grid = parse_grid_spec(args.grid)
    text = _read(args.design)
    outputs: list[tuple[str, str]] = []
    if args.out.endswith(".s1p"):
        resonators = io_formats.read_resonators(text)
        if len(resonators) != 1:
            raise AcoufiltError(
                "one-port output requires a design file with exactly one resonator section"
            )
        ((_, params),) = resonators.items()
        sections = io_formats.parse_design_text(text)
        z0 = sections.get("filter", {}).get("z0", 50.0)
        s11 = one_port_s11(params, grid, z0=z0)
        header = io_formats.TouchstoneHeader("Hz", "S", "RI", z0)
        outputs.append((args.out, io_formats.write_touchstone(s11, header)))
        if args.metrics:
            raise AcoufiltError("--metrics applies to two-port simulation only")
    else:
        design = io_formats.read_ladder_design(text)
        block = build_ladder_response(design, grid)
        outputs.append((args.out, io_formats.write_touchstone(block)))
        if args.metrics:
            m = passband_metrics(block.s21(), guard=args.guard)
            outputs.append((args.metrics, io_formats.write_metrics_csv(m)))
    _write_outputs(outputs)
    return 0


def _cmd_fit(args) -> int:
    data = io_formats.read_touchstone(_read(args.input))
    s11 = data.to_curve()
    z0 = data.header.reference_resistance
    curve = admittance_from_s11(s11, z0=z0)
    init = fitting.initial_guess(curve)
    opts = fitting.FitOptions(max_iterations=args.max_iterations,
                              weight_mode=args.weight)
    result = fitting.fit_mbvd(curve, init, opts)
    outputs = [(args.out, io_formats.write_resonator(result.params, args.section))]
    if args.report:
        outputs.append((args.report, _fit_report_csv(result)))
    _write_outputs(outputs)
    print(f"fit: converged={result.converged} iterations={result.iterations} "
          f"residual_norm={result.residual_norm:.6e}")
    return 0


def _fit_report_csv(result: fitting.FitResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["quantity", "value"])
    p = result.params
    for key in ("rm", "lm", "cm", "c0", "rs", "ls", "r0"):
        w.writerow([key, "{:.16e}".format(getattr(p, key))])
    s = result.summary
    for key, val in (("fs_hz", s.fs), ("fp_hz", s.fp), ("f_perceived_hz", s.f_perceived),
                     ("k2", s.k2), ("q_antires", s.q_antires)):
        w.writerow([key, "{:.16e}".format(val)])
    w.writerow(["residual_norm", "{:.16e}".format(result.residual_norm)])
    w.writerow(["iterations", str(result.iterations)])
    w.writerow(["converged", str(result.converged).lower()])
    return buf.getvalue()


def _cmd_synthesize(args) -> int:
    spec = io_formats.read_design_spec(_read(args.spec))
    result = synthesize_ladder(spec, guard=args.guard)
    grid = parse_grid_spec(args.grid)
    block = build_ladder_response(result.design, grid)
    outputs = [(args.out, io_formats.write_ladder_design(result.design))]
    if args.touchstone:
        outputs.append((args.touchstone, io_formats.write_touchstone(block)))
    if args.metrics:
        m = passband_metrics(block.s21(), guard=args.guard)
        outputs.append((args.metrics, io_formats.write_metrics_csv(m)))
    _write_outputs(outputs)
    m = result.metrics
    flag = "feasible" if result.feasible else "INFEASIBLE"
    if m is None:
        print(f"synthesize: {flag} (best effort has no scoreable passband) "
              f"evaluations={result.evaluations}")
    else:
        print(f"synthesize: {flag} il={m.il_db:.3f}dB fc={m.fc / 1e9:.4f}GHz "
              f"fbw={100 * m.fbw3:.2f}% oob={m.oob_rejection_db:.2f}dB "
              f"evaluations={result.evaluations}")
    return 0


def _cmd_metrics(args) -> int:
    data = io_formats.read_touchstone(_read(args.input))
    block = data.to_block()
    s21 = block.s21()
    m = passband_metrics(s21, guard=args.guard)
    text = io_formats.write_metrics_csv(m)
    outputs = []
    if args.out:
        outputs.append((args.out, text))
    if args.svg:
        outputs.append((args.svg, svgplot.s21_magnitude_svg(s21)))
    _write_outputs(outputs)
    if not args.out:
        sys.stdout.write(text)
    return 0


def _parse_value_range(spec: str) -> np.ndarray:
    parts = spec.split(":")
    if len(parts) != 3:
        raise AcoufiltError(f"--range must be a:b:n, got {spec!r}")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise AcoufiltError(f"bad --range {spec!r}: {exc}")
    if n < 1 or b < a:
        raise AcoufiltError("--range requires a <= b and n >= 1")
    return np.linspace(a, b, n)


def _cmd_sweep(args) -> int:
    text = _read(args.design)
    sections = io_formats.parse_design_text(text)
    try:
        section, key = args.param.split(".", 1)
    except ValueError:
        raise AcoufiltError(f"--param must be section.key, got {args.param!r}")
    if section not in ("series", "shunt", "filter"):
        raise AcoufiltError(f"cannot sweep section [{section}]")
    values = _parse_value_range(args.range)
    grid = parse_grid_spec(args.grid)

    base = io_formats.read_ladder_design(text)
    shunt0 = base.elements[0][1]
    series0 = base.elements[1][1]

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = [args.param] + [name for name, _ in _metric_names()]
    w.writerow(header)
    for value in values:
        series, shunt, z0 = series0, shunt0, base.z0
        if section == "filter":
            if key != "z0":
                raise AcoufiltError("only filter.z0 can be swept")
            z0 = float(value)
        else:
            target = series0 if section == "series" else shunt0
            if key not in ("rm", "lm", "cm", "c0", "rs", "ls", "r0"):
                raise AcoufiltError(f"unknown resonator key {key!r}")
            replaced = dataclasses.replace(target, **{key: float(value)})
            if section == "series":
                series = replaced
            else:
                shunt = replaced
        design = shunt_series_shunt(shunt, series, z0=z0)
        block = build_ladder_response(design, grid)
        try:
            m = passband_metrics(block.s21(), guard=args.guard)
            row = ["{:.16e}".format(value)] + ["{:.16e}".format(v) for _, v in m.as_rows()]
        except AcoufiltError:
            row = ["{:.16e}".format(value)] + ["nan"] * len(_metric_names())
        w.writerow(row)
    _write_outputs([(args.out, buf.getvalue())])
    return 0


def _metric_names():
    return [("fc_hz", 0), ("il_db", 0), ("bw3_hz", 0), ("fbw3", 0), ("f_lo3_hz", 0),
            ("f_hi3_hz", 0), ("bw20_hz", 0), ("shape_factor20", 0),
            ("oob_rejection_db", 0)]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="acoufilt",
        description="Acoustic resonator / ladder filter modeling, fitting and synthesis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="evaluate a design file to Touchstone output")
    p.add_argument("--design", required=True, help="key-value design file")
    p.add_argument("--grid", required=True, help="frequency grid start:stop:count (Hz)")
    p.add_argument("--out", required=True, help="output .s2p (ladder) or .s1p (one resonator)")
    p.add_argument("--metrics", help="also write passband metrics CSV")
    p.add_argument("--guard", type=float, default=DEFAULT_GUARD,
                   help="fractional stopband offset from the 3-dB edges")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("fit", help="extract MBVD parameters from a one-port .s1p")
    p.add_argument("--input", required=True, help="one-port Touchstone file")
    p.add_argument("--out", required=True, help="fitted design file to write")
    p.add_argument("--report", help="CSV fit report")
    p.add_argument("--section", default="series", choices=("series", "shunt"),
                   help="section name used in the fitted design file")
    p.add_argument("--max-iterations", type=int, default=200)
    p.add_argument("--weight", default="inverse-magnitude",
                   choices=("inverse-magnitude", "uniform"))
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("synthesize", help="search a ladder design meeting a spec file")
    p.add_argument("--spec", required=True, help="design spec file with a [spec] section")
    p.add_argument("--out", required=True, help="design file to write")
    p.add_argument("--grid", required=True, help="output grid start:stop:count (Hz)")
    p.add_argument("--touchstone", help="also write the .s2p response")
    p.add_argument("--metrics", help="also write metrics CSV")
    p.add_argument("--guard", type=float, default=DEFAULT_GUARD)
    p.set_defaults(func=_cmd_synthesize)

    p = sub.add_parser("metrics", help="score a two-port .s2p file")
    p.add_argument("--input", required=True, help="two-port Touchstone file")
    p.add_argument("--out", help="metrics CSV (stdout when omitted)")
    p.add_argument("--svg", help="also write an |S21| SVG plot")
    p.add_argument("--guard", type=float, default=DEFAULT_GUARD)
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("sweep", help="sweep one design parameter and tabulate metrics")
    p.add_argument("--design", required=True)
    p.add_argument("--param", required=True, help="parameter as section.key, e.g. shunt.c0")
    p.add_argument("--range", required=True, help="swept values a:b:n")
    p.add_argument("--grid", required=True, help="frequency grid start:stop:count (Hz)")
    p.add_argument("--out", required=True, help="CSV of one metrics row per value")
    p.add_argument("--guard", type=float, default=DEFAULT_GUARD)
    p.set_defaults(func=_cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (AcoufiltError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
