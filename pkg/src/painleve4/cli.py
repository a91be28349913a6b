"""Command-line front end: integrations, zero scans, verification suites, sweeps.

Commands
--------
integrate   run one integration, write a trajectory CSV and a JSON summary
zeros       integrate, locate and classify zeros, write events JSON
verify      run a randomized property suite, print pass/fail per property
sweep       grid of independent integrations over (alpha, beta)

All numbers in emitted files are serialized at 17 significant digits, so
parsing them back reproduces the binary values exactly.  The piv parameters
follow the beta^2 convention of Ince's form XXXI throughout; there is no
conversion flag.

Environment: PAINLEVE_LOG = error|warn|info|debug (default warn).
"""

import argparse
import csv
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .equations import EquationKind, Params, Scalar, ScalarField
from .errors import PainleveError
from .integrator import (
    InitialData,
    Tolerances,
    Trajectory,
    TrajectoryStatus,
    dense_eval,
    integrate,
)
from .verify import DEFAULT_COUNTS, SUITE_NAMES, run_suite
from .zeros import CurvatureReport, ZeroEvent, check_curvature_theorem, locate_zeros

logger = logging.getLogger(__name__)

CONVENTION_NOTE = "Ince XXXI β² convention"

CSV_HEADER = "z_re,z_im,w_re,w_im,w1_re,w1_im,w2_re,w2_im,h,err_est,C_re,C_im,res2_re,res2_im"

_LOG_LEVELS = {
    "error": logging.ERROR,
    "warn": logging.WARNING,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}


def fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def _parts(x: Scalar) -> tuple[float, float]:
    if isinstance(x, complex):
        return x.real, x.imag
    return float(x), 0.0


def _scalar_json(x: Scalar | None):
    if x is None:
        return None
    if isinstance(x, complex):
        return [x.real, x.imag]
    return float(x)


def json_dumps(obj, level: int = 0) -> str:
    """JSON text with floats at 17 significant digits and stable key order."""
    pad = "  " * level
    inner = "  " * (level + 1)
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = ",\n".join(inner + json_dumps(v, level + 1) for v in obj)
        return "[\n" + items + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            f"{inner}{json.dumps(str(k), ensure_ascii=False)}: {json_dumps(v, level + 1)}" for k, v in obj.items()
        )
        return "{\n" + items + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_trajectory_csv(path: Path, traj: Trajectory) -> None:
    lines = [CSV_HEADER]
    for node in traj.nodes:
        zr, zi = _parts(node.jet.z)
        wr, wi = _parts(node.jet.w)
        w1r, w1i = _parts(node.jet.w1)
        w2r, w2i = _parts(node.jet.w2)
        cr, ci = _parts(node.c)
        rr, ri = _parts(node.res2)
        values = (zr, zi, wr, wi, w1r, w1i, w2r, w2i, node.h, node.err_est, cr, ci, rr, ri)
        lines.append(",".join(fmt_float(v) for v in values))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_trajectory_csv(path: Path) -> list[dict[str, float]]:
    """Parse a trajectory CSV back into per-node dicts of floats."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [dict(zip(header, map(float, row))) for row in reader]
    return rows


def _event_json(e: ZeroEvent) -> dict:
    return {
        "a": _scalar_json(e.a),
        "slope": _scalar_json(e.slope),
        "curvature": _scalar_json(e.curvature),
        "branch": e.branch.value,
        "curvature_nonzero": e.curvature_nonzero,
    }


def _report_json(report: CurvatureReport | None):
    if report is None:
        return None
    return {
        "curv_floor": report.curv_floor,
        "slope_tol": report.slope_tol,
        "ok": report.ok,
        "checks": [
            {
                "a": _scalar_json(c.event.a),
                "slope": _scalar_json(c.event.slope),
                "curvature": _scalar_json(c.event.curvature),
                "slope_ok": c.slope_ok,
                "curvature_ok": c.curvature_ok,
            }
            for c in report.checks
        ],
    }


def summary_json(traj: Trajectory, events: tuple[ZeroEvent, ...] = ()) -> dict:
    return {
        "equation": traj.kind.value,
        "params": {"alpha": traj.params.alpha, "beta": traj.params.beta},
        "convention": CONVENTION_NOTE,
        "field": traj.field.value,
        "status": traj.status.value,
        "pole_estimate": _scalar_json(traj.pole_estimate),
        "node_count": len(traj.nodes),
        "max_abs_c": max(abs(n.c) for n in traj.nodes),
        "max_abs_res2": max(abs(n.res2) for n in traj.nodes),
        "events": [_event_json(e) for e in events],
    }


@dataclass(frozen=True)
class RunSpec:
    """Validated inputs of one integration-backed command."""

    kind: EquationKind
    params: Params
    field: ScalarField
    init: InitialData
    span: float
    tol: Tolerances
    out: Path
    summary: Path
    seed: int = 0


def _build_tolerances(ns) -> Tolerances:
    try:
        return Tolerances(rel=ns.rel, abs=ns.abs, pole_cutoff=ns.pole_cutoff)
    except ValueError as exc:
        # Tolerances messages already lead with the offending field name
        raise ValueError(f"--{str(exc).replace('_', '-', 1)}") from None


def _build_initial(ns, field: ScalarField, direction: Scalar) -> InitialData:
    if ns.zero_branch is not None:
        if ns.w0 is not None or ns.w1 is not None:
            raise ValueError("--zero-branch: cannot be combined with --w0/--w1 (the slope is forced to ±beta)")
        branch = +1 if ns.zero_branch == "plus" else -1
        return InitialData.zero(ns.z0, branch, ns.w2 if ns.w2 is not None else 0.0, field, direction)
    if ns.w2 is not None:
        return InitialData.raw(ns.z0, ns.w0 or 0.0, ns.w1 or 0.0, ns.w2, field, direction)
    if ns.w0 is not None:
        if ns.w0 == 0:
            raise ValueError("--w0: must be nonzero (use --w2 for a raw jet or --zero-branch for a zero seed)")
        return InitialData.nonzero(ns.z0, ns.w0, ns.w1 or 0.0, field, direction)
    raise ValueError("--w0: initial data required (--w0 [--w1], or --w2 for a raw jet, or --zero-branch)")


def _build_runspec(ns, default_out: str) -> RunSpec:
    kind = EquationKind.from_name(ns.eq) if ns.eq else None
    if kind is None:
        raise ValueError("--eq: equation kind is required")
    try:
        params = Params(ns.alpha, ns.beta)
    except ValueError as exc:
        raise ValueError(f"--alpha/--beta: {exc}") from None
    field = ScalarField(ns.field)
    direction: Scalar = 1.0
    if field is ScalarField.COMPLEX:
        direction = complex(ns.dir_re, ns.dir_im)
        if abs(abs(direction) - 1.0) > 1e-12:
            raise ValueError(f"--dir-re/--dir-im: direction must have unit modulus, got |d| = {abs(direction)!r}")
    if ns.span is None or ns.span == 0:
        raise ValueError("--span: a nonzero span is required")
    tol = _build_tolerances(ns)
    try:
        init = _build_initial(ns, field, direction)
    except PainleveError as exc:
        raise ValueError(str(exc)) from None
    return RunSpec(
        kind=kind,
        params=params,
        field=field,
        init=init,
        span=ns.span,
        tol=tol,
        out=Path(ns.out) if ns.out else Path(default_out),
        summary=Path(ns.summary) if ns.summary else Path("summary.json"),
        seed=ns.seed,
    )


def _exit_code(traj: Trajectory) -> int:
    return 0 if traj.status in (TrajectoryStatus.COMPLETED, TrajectoryStatus.POLE) else 2


def cmd_integrate(spec: RunSpec) -> int:
    traj = integrate(spec.kind, spec.params, spec.init, spec.span, spec.tol)
    write_trajectory_csv(spec.out, traj)
    spec.summary.write_text(json_dumps(summary_json(traj)) + "\n", encoding="utf-8")
    print(f"{traj.status.value}: {len(traj.nodes)} nodes -> {spec.out}, summary -> {spec.summary}")
    return _exit_code(traj)


def cmd_zeros(spec: RunSpec) -> int:
    if spec.field is not ScalarField.REAL:
        raise ValueError("--field: the zeros command runs in REAL mode")
    traj = integrate(spec.kind, spec.params, spec.init, spec.span, spec.tol)
    events = locate_zeros(traj)
    identically_zero = traj.max_abs_w() == 0.0
    if identically_zero:
        logger.warning("identically zero trajectory: zeros are not isolated, no events reported")
    report = None
    if (
        spec.kind in (EquationKind.PIV, EquationKind.PIV0)
        and spec.params.beta == 0.0
        and not identically_zero
    ):
        report = check_curvature_theorem(events, traj)
    payload = {
        "equation": spec.kind.value,
        "params": {"alpha": spec.params.alpha, "beta": spec.params.beta},
        "convention": CONVENTION_NOTE,
        "status": traj.status.value,
        "identically_zero": identically_zero,
        "events": [_event_json(e) for e in events],
        "curvature_report": _report_json(report),
    }
    spec.out.write_text(json_dumps(payload) + "\n", encoding="utf-8")
    spec.summary.write_text(json_dumps(summary_json(traj, events)) + "\n", encoding="utf-8")
    print(f"{traj.status.value}: {len(events)} zero event(s) -> {spec.out}")
    return _exit_code(traj)


def cmd_verify(suite: str, seed: int, count: int | None) -> int:
    results = run_suite(suite, seed, count)
    for r in results:
        print(r.line())
    return 0 if all(r.passed for r in results) else 3


@dataclass(frozen=True)
class SweepCell:
    alpha: float
    beta: float
    status: str
    node_count: int
    zero_count: int
    pole_estimate: Scalar | None
    max_c_drift: float | None
    events: tuple[ZeroEvent, ...]
    error: str = ""


def run_sweep(
    kind: EquationKind,
    alphas: list[float],
    betas: list[float],
    init: InitialData,
    span: float,
    tol: Tolerances,
) -> list[SweepCell]:
    """Independent integrations over the parameter grid, in deterministic grid order.

    Each cell is isolated: a failing cell records its error and leaves the
    rest of the grid untouched.
    """
    cells = []
    for alpha in alphas:
        for beta in betas:
            try:
                params = Params(alpha, beta)
                traj = integrate(kind, params, init, span, tol)
                events = locate_zeros(traj)
                # count refined events that actually sit on the zero set;
                # sub-trigger |w| minima that refine elsewhere stay in the
                # event list but are not zeros
                zeros_found = sum(1 for e in events if abs(dense_eval(traj, e.a).w) < tol.abs)
                c0 = traj.nodes[0].c
                drift = max(abs(n.c - c0) for n in traj.nodes)
                cells.append(
                    SweepCell(
                        alpha=alpha,
                        beta=beta,
                        status=traj.status.value,
                        node_count=len(traj.nodes),
                        zero_count=zeros_found,
                        pole_estimate=traj.pole_estimate,
                        max_c_drift=drift,
                        events=events,
                    )
                )
            except Exception as exc:  # noqa: BLE001  (per-cell isolation is the contract)
                cells.append(SweepCell(alpha, beta, "error", 0, 0, None, None, (), str(exc)))
    return cells


def _grid(name: str, lo: float, hi: float, steps: int) -> list[float]:
    if steps < 1:
        raise ValueError(f"--{name}-steps: grid is empty (steps = {steps})")
    if steps == 1:
        return [lo]
    return [lo + (hi - lo) * i / (steps - 1) for i in range(steps)]


def write_sweep_csv(path: Path, cells: list[SweepCell]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["alpha", "beta", "status", "node_count", "zero_count", "pole_est_re", "pole_est_im", "max_c_drift", "error"]
        )
        for cell in cells:
            if cell.pole_estimate is None:
                pole_re, pole_im = "", ""
            else:
                pole_re, pole_im = map(fmt_float, _parts(cell.pole_estimate))
            writer.writerow(
                [
                    fmt_float(cell.alpha),
                    fmt_float(cell.beta),
                    cell.status,
                    cell.node_count,
                    cell.zero_count,
                    pole_re,
                    pole_im,
                    "" if cell.max_c_drift is None else fmt_float(cell.max_c_drift),
                    cell.error,
                ]
            )


def cmd_sweep(ns) -> int:
    kind = EquationKind.from_name(ns.eq) if ns.eq else None
    if kind is None:
        raise ValueError("--eq: equation kind is required")
    alphas = _grid("alpha", ns.alpha_min, ns.alpha_max, ns.alpha_steps)
    betas = _grid("beta", ns.beta_min, ns.beta_max, ns.beta_steps)
    if len(alphas) * len(betas) > 1_000_000:
        raise ValueError(f"--alpha-steps/--beta-steps: grid of {len(alphas) * len(betas)} cells exceeds 1e6")
    field = ScalarField(ns.field)
    if field is not ScalarField.REAL:
        raise ValueError("--field: the sweep command runs in REAL mode")
    if ns.span is None or ns.span == 0:
        raise ValueError("--span: a nonzero span is required")
    tol = _build_tolerances(ns)
    init = _build_initial(ns, field, 1.0)
    cells = run_sweep(kind, alphas, betas, init, ns.span, tol)
    out = Path(ns.out) if ns.out else Path("sweep.csv")
    write_sweep_csv(out, cells)
    failures = sum(1 for c in cells if c.error)
    print(f"{len(cells)} cells -> {out} ({failures} failed)")
    return 1 if cells and failures == len(cells) else 0


class _Parser(argparse.ArgumentParser):
    # spec-validation failures exit 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"error: {message}\n")


def _add_common(sub: argparse.ArgumentParser, *, with_initial=True) -> None:
    sub.add_argument("--eq", choices=[k.value for k in EquationKind], help="equation kind")
    sub.add_argument("--alpha", type=float, default=0.0, help="alpha parameter (piv only)")
    sub.add_argument("--beta", type=float, default=0.0, help="beta parameter, Ince XXXI beta^2 convention")
    sub.add_argument("--z0", type=float, default=0.0, help="initial point")
    if with_initial:
        sub.add_argument("--w0", type=float, default=None, help="initial w (nonzero mode unless --w2 is given)")
        sub.add_argument("--w1", type=float, default=None, help="initial w'")
        sub.add_argument("--w2", type=float, default=None, help="initial w''; its presence selects a raw jet")
        sub.add_argument(
            "--zero-branch",
            choices=["plus", "minus"],
            default=None,
            help="seed a zero of w with slope +beta or -beta (piv/piv0); --w2 sets the free curvature",
        )
    sub.add_argument("--span", type=float, default=None, help="signed integration span (arc length in COMPLEX mode)")
    sub.add_argument("--rel", type=float, default=1e-10, help="relative tolerance")
    sub.add_argument("--abs", type=float, default=1e-10, help="absolute tolerance")
    sub.add_argument("--pole-cutoff", type=float, default=1e8, help="|w| threshold declaring a pole")
    sub.add_argument("--field", choices=["real", "complex"], default="real", help="scalar field")
    sub.add_argument("--dir-re", type=float, default=1.0, help="real part of the unit path direction (COMPLEX mode)")
    sub.add_argument("--dir-im", type=float, default=0.0, help="imaginary part of the path direction")
    sub.add_argument("--out", default=None, help="primary output file")
    sub.add_argument("--summary", default=None, help="summary JSON file")
    sub.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    sub.add_argument("--count", type=int, default=None, help="instance count for randomized suites")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="painleve4", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    subs = parser.add_subparsers(dest="command", required=True)

    p_int = subs.add_parser("integrate", parents=[], help="integrate one trajectory")
    _add_common(p_int)

    p_zeros = subs.add_parser("zeros", help="integrate and scan for zeros of w")
    _add_common(p_zeros)

    p_verify = subs.add_parser("verify", help="run a randomized property suite")
    p_verify.add_argument("--suite", choices=list(SUITE_NAMES), required=True)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument(
        "--count", type=int, default=None, help=f"instances to draw (defaults: {DEFAULT_COUNTS})"
    )

    p_sweep = subs.add_parser("sweep", help="grid of integrations over alpha and beta")
    _add_common(p_sweep)
    p_sweep.add_argument("--alpha-min", type=float, default=0.0)
    p_sweep.add_argument("--alpha-max", type=float, default=0.0)
    p_sweep.add_argument("--alpha-steps", type=int, default=1)
    p_sweep.add_argument("--beta-min", type=float, default=0.0)
    p_sweep.add_argument("--beta-max", type=float, default=0.0)
    p_sweep.add_argument("--beta-steps", type=int, default=1)

    return parser


def log_level_from_env(value: str | None = None) -> int:
    if value is None:
        value = os.environ.get("PAINLEVE_LOG", "warn")
    return _LOG_LEVELS.get(value.strip().lower(), logging.WARNING)


def _configure_logging() -> None:
    logging.basicConfig(
        level=log_level_from_env(), format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr
    )


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if ns.command == "integrate":
            return cmd_integrate(_build_runspec(ns, "trajectory.csv"))
        if ns.command == "zeros":
            return cmd_zeros(_build_runspec(ns, "events.json"))
        if ns.command == "verify":
            return cmd_verify(ns.suite, ns.seed, ns.count)
        if ns.command == "sweep":
            return cmd_sweep(ns)
        raise ValueError(f"unknown command {ns.command!r}")
    except (ValueError, PainleveError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
