"""Command-line interface: curves, tables, gate analysis, and self-checks.

Every command is deterministic given the seed, the flags, and the library
version: numeric output is printed with 12 significant digits, CSV column
order is fixed in code, and wall-clock timing is confined to the run
manifest written next to each output file.

Exit codes: 0 success, 1 bad input, 2 mathematical inconsistency (a bracket
inversion, which signals a bug rather than bad data), 3 failed self-checks.
The worker-thread count is capped by the ENTCAP_THREADS environment
variable; the default of 1 keeps runs serial.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .bounds import bound_certificate, cnot_family_table
from .capacity import (
    BracketInversionError,
    SearchConfig,
    assisted_capacity_lower,
    capacity_bracket,
    dual_capacity_bound,
    unassisted_capacity,
)
from .channels import gate_family, haar_unitary, unitary_channel
from .core import BipartiteOperator, SubsystemLayout, is_unitary
from .verify import GROUP_NAMES, run_invariant_groups

PHASE_CURVE_COLUMNS = (
    "phi",
    "analytic_basic",
    "numeric_unassisted",
    "numeric_dual",
    "numeric_assisted_probe",
    "numeric_vn_unassisted",
)

RANDOM_QUDITS_COLUMNS = ("index", "E_LN_unassisted", "E_N_dual", "gap")

CNOT_FAMILY_COLUMNS = (
    "d",
    "choi_analytic",
    "choi_numeric",
    "ec_numeric",
    "ec_exact",
    "thm2_analytic",
    "thm2_numeric",
    "choi_agrees",
    "ec_agrees",
    "thm2_agrees",
)


class UsageError(Exception):
    """Bad flags or unreadable input; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(x) -> str:
    return f"{float(x):.12g}"


def _round_floats(obj):
    """Round every float to 12 significant digits, recursively."""
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _strip_timing(obj):
    """Drop wall-clock fields so identical runs produce identical bytes."""
    if isinstance(obj, dict):
        return {k: _strip_timing(v) for k, v in obj.items() if k != "wall_time"}
    if isinstance(obj, list):
        return [_strip_timing(v) for v in obj]
    return obj


def _workers() -> int:
    raw = os.environ.get("ENTCAP_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"ENTCAP_THREADS must be an integer, got {raw!r}")


def _search_config(args) -> SearchConfig:
    kwargs = {"seed": args.seed}
    if args.restarts is not None:
        if args.restarts < 1:
            raise UsageError("--restarts must be >= 1")
        kwargs["restarts"] = args.restarts
    if args.iters is not None:
        if args.iters < 1:
            raise UsageError("--iters must be >= 1")
        kwargs["max_iters"] = args.iters
    if args.tol is not None:
        if not args.tol > 0:
            raise UsageError("--tol must be positive")
        kwargs["convergence_tol"] = args.tol
    if args.ancilla_dims is not None:
        if any(d < 1 for d in args.ancilla_dims):
            raise UsageError("--ancilla-dims must be positive")
        kwargs["ancilla_dims"] = tuple(args.ancilla_dims)
    return SearchConfig(**kwargs)


def _config_echo(args) -> dict:
    echo = {}
    for key, value in sorted(vars(args).items()):
        if key == "func":
            continue
        if isinstance(value, tuple):
            value = list(value)
        echo[key] = value
    return echo


def _write_manifest(command: str, args, wall: float, outputs: list) -> None:
    if not outputs:
        return
    manifest = {
        "command": command,
        "config": _config_echo(args),
        "seed": args.seed,
        "version": __version__,
        "wall_time": wall,
        "outputs": outputs,
    }
    path = outputs[0] + ".manifest.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")


def _emit_table(columns, rows, args, command: str, wall: float) -> None:
    """Write rows as CSV or JSON to --out (with a manifest) or stdout."""
    if args.format == "json":
        payload = [dict(zip(columns, row)) for row in rows]
        text = json.dumps(_round_floats(payload), indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([c if isinstance(c, (str, int)) else _fmt(c) for c in row])
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        _write_manifest(command, args, wall, [args.out])
    else:
        sys.stdout.write(text)


def cmd_phase_curve(args) -> int:
    """Analytic and searched capacities of exp(i phi Z(x)Z) on a grid."""
    if args.points < 2:
        raise UsageError("--points must be at least 2")
    t0 = time.perf_counter()
    cfg = _search_config(args)
    workers = _workers()
    grid = np.linspace(0.0, np.pi / 2.0, args.points)
    rows = []
    for phi in grid:
        analytic = 2.0 * np.log2(abs(np.cos(phi)) + abs(np.sin(phi)))
        ch = unitary_channel(gate_family("phase", phi=phi))
        un = unassisted_capacity(ch, cfg, workers=workers)
        dual = dual_capacity_bound(ch, cfg, workers=workers, warm_start=un.argmax)
        probe = assisted_capacity_lower(ch, cfg, workers=workers, warm_start=un.argmax)
        vn = unassisted_capacity(ch, cfg, monotone="von-neumann", workers=workers)
        rows.append((phi, analytic, un.value, dual.value, probe.value, vn.value))
    _emit_table(PHASE_CURVE_COLUMNS, rows, args, "phase-curve", time.perf_counter() - t0)
    return 0


def cmd_random_qudits(args) -> int:
    """Unassisted versus dual capacity for Haar-random bipartite unitaries."""
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    if args.dim < 2:
        raise UsageError("--dim must be at least 2")
    t0 = time.perf_counter()
    cfg = _search_config(args)
    workers = _workers()
    layout = SubsystemLayout.bipartite(args.dim, args.dim)
    rng = np.random.default_rng(args.seed)
    rows = []
    gaps = []
    for i in range(args.n):
        u = BipartiteOperator(haar_unitary(args.dim * args.dim, rng), layout)
        ch = unitary_channel(u)
        un = unassisted_capacity(ch, cfg, workers=workers)
        dual = dual_capacity_bound(ch, cfg, workers=workers, warm_start=un.argmax)
        gap = abs(un.value - dual.value)
        gaps.append(gap)
        rows.append((i, un.value, dual.value, gap))
    wall = time.perf_counter() - t0
    _emit_table(RANDOM_QUDITS_COLUMNS, rows, args, "random-qudits", wall)
    summary = _round_floats(
        {
            "n": args.n,
            "dim": args.dim,
            "seed": args.seed,
            "max_gap": max(gaps),
            "mean_gap": float(np.mean(gaps)),
        }
    )
    stream = sys.stdout if args.out else sys.stderr
    json.dump(summary, stream, indent=2)
    stream.write("\n")
    return 0


def cmd_cnot_family(args) -> int:
    """Bounds and searched capacity for the controlled-shift family."""
    if args.d_max < 2:
        raise UsageError("--d-max must be at least 2")
    t0 = time.perf_counter()
    cfg = _search_config(args)
    table = cnot_family_table(
        range(2, args.d_max + 1), include_search=True, config=cfg
    )
    rows = []
    for r in table:
        rows.append(
            (
                r.d,
                r.choi_lower_formula,
                r.choi_lower,
                r.searched_capacity,
                r.exact_capacity,
                r.thm2_upper_formula,
                r.thm2_upper,
                int(abs(r.choi_lower - r.choi_lower_formula) <= 1e-9),
                int(abs(r.searched_capacity - r.exact_capacity) <= 1e-6),
                int(abs(r.thm2_upper - r.thm2_upper_formula) <= 1e-9),
            )
        )
    _emit_table(CNOT_FAMILY_COLUMNS, rows, args, "cnot-family", time.perf_counter() - t0)
    return 0


def _load_gate_file(path: str) -> BipartiteOperator:
    """Parse a gate description: dims with party labels plus a complex matrix.

    Expected shape: {"dims": [[da, "A"], [db, "B"]], "matrix": [[[re, im],
    ...], ...], "unitary": true}.  The matrix must be unitary within 1e-8;
    it is then projected onto the closest exact unitary so downstream
    certificates hold at their native tolerances.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read gate file {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"gate file {path} is not valid JSON: {exc}")
    if not isinstance(data, dict) or "dims" not in data or "matrix" not in data:
        raise UsageError("gate file needs 'dims' and 'matrix' entries")
    dims = data["dims"]
    try:
        layout = SubsystemLayout(tuple((int(d), str(p)) for d, p in dims))
    except Exception as exc:
        raise UsageError(f"bad 'dims' entry: {exc}")
    n = layout.total_dim
    raw = data["matrix"]
    if len(raw) != n or any(len(row) != n for row in raw):
        raise UsageError(f"matrix must be {n}x{n} for dims {layout.dims}")
    try:
        mat = np.array(
            [[complex(float(z[0]), float(z[1])) for z in row] for row in raw]
        )
    except (TypeError, ValueError, IndexError) as exc:
        raise UsageError(f"matrix entries must be [re, im] pairs: {exc}")
    declared = bool(data.get("unitary", False))
    if not is_unitary(mat, tol=1e-8):
        if declared:
            raise UsageError("matrix declared unitary is not unitary within 1e-8")
        raise UsageError("matrix is not unitary within 1e-8; only unitary gates are analyzable")
    u, _, vh = np.linalg.svd(mat)
    return BipartiteOperator(u @ vh, layout)


def cmd_analyze(args) -> int:
    """Bound certificate plus searched bracket for one gate, as JSON."""
    t0 = time.perf_counter()
    cfg = _search_config(args)
    workers = _workers()
    if (args.gate_file is None) == (args.family is None):
        raise UsageError("exactly one of --gate-file or --family is required")
    if args.gate_file is not None:
        gate = _load_gate_file(args.gate_file)
        label = os.path.basename(args.gate_file)
    else:
        params = {}
        if args.phi is not None:
            params["phi"] = args.phi
        if args.d is not None:
            params["d"] = args.d
        try:
            gate = gate_family(args.family, **params)
        except ValueError as exc:
            raise UsageError(str(exc))
        if len(gate.layout) != 2:
            raise UsageError(f"family {args.family!r} is not a two-party gate")
        label = args.family
    ch = unitary_channel(gate)
    certificate = bound_certificate(ch, description=label)
    bracket = capacity_bracket(ch, cfg, workers=workers, description=label)
    payload = _round_floats(
        _strip_timing(
            {
                "gate": label,
                "certificate": certificate.to_dict(),
                "bracket": bracket.to_dict(),
            }
        )
    )
    text = json.dumps(payload, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        _write_manifest("analyze", args, time.perf_counter() - t0, [args.out])
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(args) -> int:
    """Run the invariant batteries; exit 3 when any group fails."""
    t0 = time.perf_counter()
    groups = args.groups.split(",") if args.groups else None
    results = run_invariant_groups(seed=args.seed, groups=groups)
    if args.format == "json":
        payload = _round_floats(_strip_timing([r.to_dict() for r in results]))
        text = json.dumps(payload, indent=2) + "\n"
    else:
        lines = []
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            lines.append(f"{status} {r.name} checks={r.checks} worst={r.worst:.3e}")
            for failure in r.failures:
                lines.append(f"  {failure}")
        lines.append(
            "all groups passed"
            if all(r.passed for r in results)
            else "failed groups: " + ",".join(r.name for r in results if not r.passed)
        )
        text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        _write_manifest("verify", args, time.perf_counter() - t0, [args.out])
    else:
        sys.stdout.write(text)
    return 0 if all(r.passed for r in results) else 3


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="base RNG seed")
    p.add_argument("--restarts", type=int, default=None, help="search restarts")
    p.add_argument("--iters", type=int, default=None, help="iteration cap per restart")
    p.add_argument("--tol", type=float, default=None, help="acceptance threshold for climbs")
    p.add_argument(
        "--ancilla-dims",
        type=int,
        nargs=2,
        metavar=("DA", "DB"),
        default=None,
        help="local ancilla dimensions (default: mirror the targets)",
    )
    p.add_argument("--out", type=str, default=None, help="output file (default stdout)")
    p.add_argument(
        "--format", choices=("csv", "json"), default="csv", help="output format"
    )


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="entcap",
        description="Entangling capacity of bipartite gates and channels "
        "under the log-negativity monotone.",
    )
    parser.add_argument("--version", action="version", version=f"entcap {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "phase-curve",
        help="capacity of the two-qubit phase gate across [0, pi/2]",
    )
    _add_common(p)
    p.add_argument("--points", type=int, default=33, help="grid points on [0, pi/2]")
    p.set_defaults(func=cmd_phase_curve)

    p = sub.add_parser(
        "random-qudits",
        help="unassisted vs dual capacity for Haar-random unitaries",
    )
    _add_common(p)
    p.add_argument("--n", type=int, default=10, help="number of unitaries")
    p.add_argument("--dim", type=int, default=3, help="local dimension of each party")
    p.set_defaults(func=cmd_random_qudits)

    p = sub.add_parser(
        "cnot-family",
        help="bounds table for controlled-shift gates at growing dimension",
    )
    _add_common(p)
    p.add_argument("--d-max", type=int, default=5, help="largest qudit dimension")
    p.set_defaults(func=cmd_cnot_family)

    p = sub.add_parser(
        "analyze",
        help="bound certificate and searched bracket for one gate",
    )
    _add_common(p)
    p.set_defaults(format="json")
    p.add_argument("--gate-file", type=str, default=None, help="JSON gate description")
    p.add_argument(
        "--family",
        type=str,
        default=None,
        help="named gate family (phase, swap, cnot_d)",
    )
    p.add_argument("--phi", type=float, default=None, help="phase angle for --family phase")
    p.add_argument("--d", type=int, default=None, help="dimension for --family swap/cnot_d")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="run the library's invariant self-checks")
    _add_common(p)
    p.set_defaults(format="text")
    p.add_argument(
        "--groups",
        type=str,
        default=None,
        help="comma-separated subset of: " + ",".join(GROUP_NAMES),
    )
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"entcap: error: {exc}", file=sys.stderr)
        return 1
    except BracketInversionError as exc:
        print(f"entcap: inconsistency: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"entcap: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
