"""Command-line interface: ``python -m qbases <command> ...``.

Exit codes: 0 success or PASS, 2 unreadable input, 3 non-unitary basis,
4 usage error, 5 verification FAIL.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from . import catalog as cat
from .fileio import (
    FileFormatError,
    atomic_write_text,
    basis_to_dict,
    read_basis_file,
    read_constellation_file,
    write_basis_file,
    write_constellation_file,
)
from .measures import cue_average_estimate, haar_average_exact, quantumness_report
from .optimizer import SearchConfig, certify_extremum, multi_start_search, objective_from_name
from .phase_space import husimi_max, wehrl_entropy
from .rotations import EulerAngles, rotate_basis
from .spin import NonUnitaryError, SpinError, make_spin_state, parse_j, stars_from_state

EXIT_OK, EXIT_PARSE, EXIT_UNITARY, EXIT_USAGE, EXIT_FAIL = 0, 2, 3, 4, 5

PALETTE = ("#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf")
MERCATOR_CLIP = np.deg2rad(85.0)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(args, payload: dict, table: str):
    print(json.dumps(payload, indent=1) if args.json else table)


def _t_list(args, n):
    if args.t:
        bad = [t for t in args.t if not 1 <= t <= n - 1]
        if bad:
            raise UsageError(f"orders {bad} outside 1..{n - 1}")
        return args.t
    return list(range(1, max(1, n - 2) + 1))


# -- commands -----------------------------------------------------------------

def cmd_measure(args):
    basis, _ = read_basis_file(args.basis)
    rep = quantumness_report(basis, _t_list(args, basis.dim), tol=1e-3)
    payload = {"file": str(args.basis), "N": basis.dim, **rep.as_dict()}
    rows = [f"N = {basis.dim}, orthonormality residual {rep.orthonormality_residual:.3e}"]
    for t, vals in rep.per_vector_A.items():
        rows.append(f"B_{t} = {rep.B[t]:.12f}   A_{t}: " + " ".join(f"{v:.6f}" for v in vals))
    _emit(args, payload, "\n".join(rows))
    return EXIT_OK


def cmd_search(args):
    try:
        objective_from_name(args.objective)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    config = SearchConfig(args.dim, args.objective, initial_step=args.initial_step,
                          inner_steps=args.inner_steps, halvings=args.halvings, seed=args.seed)
    out = Path(args.out)
    ms = multi_start_search(config, args.restarts, workers=args.workers)
    best = ms.best
    u = best.basis.matrix
    j = best.basis.j
    meta = {"objective": args.objective, "seed": args.seed, "restarts": args.restarts,
            "run_seed": best.seed, "value": _jsonable(best.value)}
    write_basis_file(out / "basis.json", u, j, meta)
    consts = [stars_from_state(u[:, i]) for i in range(u.shape[1])]
    write_constellation_file(out / "constellation.json", j, consts)
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["run_seed", "proposal", "value"])
    for run in ms.runs:
        for step, val in run.trace:
            w.writerow([run.seed, step, _scalar(val)])
    atomic_write_text(out / "trace.csv", buf.getvalue())
    payload = {
        "N": args.dim, "objective": args.objective, "seed": args.seed,
        "restarts": args.restarts, "best_value": _jsonable(best.value),
        "values": [_jsonable(r.value) for r in ms.runs], "spread": ms.spread,
        "run_seed": best.seed, "out": str(out),
    }
    table = (f"best {args.objective} = {_jsonable(best.value)} (run seed {best.seed}); "
             f"spread over {args.restarts} restarts {ms.spread:.3e}; files in {out}")
    _emit(args, payload, table)
    return EXIT_OK


def cmd_certify(args):
    basis, _ = read_basis_file(args.basis)
    sense = None
    if args.objective:
        try:
            obj = objective_from_name(args.objective)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if not obj.orders or obj.lexicographic:
            raise UsageError("certify supports max-/min- sums of B_t orders")
        t_list, sense = obj.orders, obj.sense
    else:
        t_list = _t_list(args, basis.dim)
    cert = certify_extremum(basis, t_list, null_tol=args.null_tol, grad_tol=args.grad_tol)
    verdict = None if sense is None else cert.classification == f"local_{sense}"
    payload = {"file": str(args.basis), "t_list": list(t_list), **cert.as_dict(),
               "expected": None if sense is None else f"local_{sense}", "pass": verdict}
    table = (f"value {cert.value:.12f}, |grad| {cert.gradient_norm:.3e}, "
             f"null eigenvalues {cert.gauge_null_count}, classification {cert.classification}"
             + ("" if verdict is None else f" -> {'PASS' if verdict else 'FAIL'}"))
    _emit(args, payload, table)
    return EXIT_FAIL if verdict is False else EXIT_OK


def cmd_catalog(args):
    if args.regenerate_u7:
        path = cat.write_u7_fixture(args.out)
        print(f"wrote {path}")
        return EXIT_OK
    if args.export:
        try:
            entry = cat.catalog_get(args.export)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
        out = Path(args.out or ".")
        u = entry.basis.matrix
        write_basis_file(out / f"{entry.name}.json", u, entry.basis.j,
                         {"name": entry.name, "provenance": entry.provenance})
        write_constellation_file(out / f"{entry.name}.stars.json", entry.basis.j,
                                 [stars_from_state(u[:, i]) for i in range(u.shape[1])])
        print(f"wrote {out / entry.name}.json and {entry.name}.stars.json")
        return EXIT_OK
    if args.verify:
        names = cat.catalog_names() if args.verify == "all" else [args.verify]
        reports = []
        for name in names:
            try:
                reports.append(cat.catalog_verify(name))
            except KeyError as exc:
                raise UsageError(str(exc.args[0])) from None
        ok = all(r.ok for r in reports)
        rows = []
        for r in reports:
            rows.append(f"{r.name:22s} {'PASS' if r.ok else 'FAIL'}  ({r.provenance}, residual {r.residual:.1e})")
            for ln in r.lines:
                flag = "ok" if ln.ok else ("MISMATCH" if ln.gating else "differs (disputed reference)")
                rows.append(f"    {ln.measure:12s} {ln.observed:.10f}  ref {ln.expected:.10f} "
                            f"+- {ln.tol:.0e}  {flag}")
        rows.append("PASS" if ok else "FAIL")
        _emit(args, {"pass": ok, "entries": [r.as_dict() for r in reports]}, "\n".join(rows))
        return EXIT_OK if ok else EXIT_FAIL
    names = cat.catalog_names()
    _emit(args, {"names": names}, "\n".join(names))
    return EXIT_OK


def cmd_cue_average(args):
    if not 1 <= args.t <= args.dim - 1:
        raise UsageError(f"order t={args.t} outside 1..{args.dim - 1}")
    mean, err = cue_average_estimate(args.dim, args.t, args.samples, args.seed)
    exact = haar_average_exact(args.dim, args.t)
    z = abs(mean - exact) / err if err > 0 else 0.0
    payload = {"N": args.dim, "t": args.t, "samples": args.samples, "seed": args.seed,
               "mean": mean, "stderr": err, "exact": exact, "z": z, "pass": bool(z <= 4)}
    table = f"<B_{args.t}> over {args.samples} samples: {mean:.6f} +- {err:.6f} (exact {exact:.6f}, {z:.2f} sigma)"
    _emit(args, payload, table)
    return EXIT_OK if z <= 4 else EXIT_FAIL


def cmd_wehrl(args):
    basis, _ = read_basis_file(args.basis)
    u = basis.matrix
    vals = [wehrl_entropy(u[:, i] / np.linalg.norm(u[:, i])) for i in range(basis.dim)]
    payload = {"file": str(args.basis), "N": basis.dim, "per_vector": vals, "mean": float(np.mean(vals))}
    table = f"mean S_W = {np.mean(vals):.10f}\n" + "\n".join(f"  {i}: {v:.10f}" for i, v in enumerate(vals))
    _emit(args, payload, table)
    return EXIT_OK


def _parse_amplitudes(text: str):
    try:
        return [complex(tok.replace(" ", "")) for tok in text.replace(";", ",").split(",") if tok.strip()]
    except ValueError as exc:
        raise FileFormatError(f"cannot parse amplitudes {text!r}: {exc}") from None


def cmd_husimi_max(args):
    if args.basis:
        basis, _ = read_basis_file(args.basis)
        u = basis.matrix
        states = [u[:, i] / np.linalg.norm(u[:, i]) for i in range(basis.dim)]
    elif args.amplitudes:
        amps = _parse_amplitudes(args.amplitudes)
        j = parse_j(args.j) if args.j is not None else (len(amps) - 1) / 2
        try:
            states = [make_spin_state(j, amps).amplitudes]
        except SpinError as exc:
            raise UsageError(str(exc)) from None
    else:
        raise UsageError("give a basis file or --amplitudes")
    res = [husimi_max(s) for s in states]
    per = [{"q_max": r.q_max, "theta": float(r.location[0]), "phi": float(r.location[1]), "d_fs": r.d_fs}
           for r in res]
    mean = float(np.mean([r.q_max for r in res]))
    table = f"mean Q_max = {mean:.10f}\n" + "\n".join(
        f"  {i}: Q_max {p['q_max']:.10f} at ({p['theta']:.6f}, {p['phi']:.6f}), D_FS {p['d_fs']:.6f}"
        for i, p in enumerate(per))
    _emit(args, {"per_vector": per, "mean_q_max": mean}, table)
    return EXIT_OK


def cmd_rotate(args):
    basis, meta = read_basis_file(args.basis)
    angles = EulerAngles(args.alpha, args.beta, args.gamma)
    rot = rotate_basis(basis, angles, tol=max(basis.residual * 10, 1e-10))
    meta = {**meta, "rotated_by": list(angles.as_tuple())}
    if args.out:
        write_basis_file(args.out, rot.matrix, rot.j, meta)
        _emit(args, {"out": str(args.out), "angles": list(angles.as_tuple())}, f"wrote {args.out}")
    else:
        print(json.dumps(basis_to_dict(rot.matrix, rot.j, meta), indent=1))
    return EXIT_OK


# -- plots --------------------------------------------------------------------

def mercator_xy(theta, phi):
    lat = np.clip(np.pi / 2 - np.asarray(theta, dtype=float), -MERCATOR_CLIP, MERCATOR_CLIP)
    return np.asarray(phi, dtype=float), np.log(np.tan(np.pi / 4 + lat / 2))


def orthographic_xy(theta, phi):
    """View from the +x axis: horizontal y, vertical z."""
    theta, phi = np.asarray(theta, dtype=float), np.asarray(phi, dtype=float)
    return np.sin(theta) * np.sin(phi), np.cos(theta)


def _rows(labels, consts, projection):
    proj = mercator_xy if projection == "mercator" else orthographic_xy
    rows = []
    for k, (lab, c) in enumerate(zip(labels, consts)):
        if len(c.stars) == 0:
            continue
        x, y = proj(c.stars[:, 0], c.stars[:, 1])
        front = np.sin(c.stars[:, 0]) * np.cos(c.stars[:, 1]) >= 0
        for (t, p), xx, yy, f in zip(c.stars, x, y, front):
            rows.append((k, lab, float(t), float(p), float(xx), float(yy), bool(f)))
    return rows


def render_csv(labels, consts, projection) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["label", "theta", "phi", "x", "y"])
    for _, lab, t, p, x, y, _ in _rows(labels, consts, projection):
        w.writerow([lab, repr(t), repr(p), repr(x), repr(y)])
    return buf.getvalue()


def render_svg(labels, consts, projection, width=720) -> str:
    rows = _rows(labels, consts, projection)
    if projection == "mercator":
        ymax = float(mercator_xy(0.0, 0.0)[1])
        x0, x1, y0, y1 = 0.0, 2 * np.pi, -ymax, ymax
    else:
        x0, x1, y0, y1 = -1.05, 1.05, -1.05, 1.05
    height = int(round(width * (y1 - y0) / (x1 - x0)))
    pad = 20

    def sx(x):
        return pad + (x - x0) / (x1 - x0) * width

    def sy(y):
        return pad + (y1 - y) / (y1 - y0) * height

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width + 2 * pad}" '
           f'height="{height + 2 * pad}" viewBox="0 0 {width + 2 * pad} {height + 2 * pad}">',
           '<rect width="100%" height="100%" fill="white"/>',
           '<g stroke="#bbbbbb" stroke-width="0.6" fill="none">']
    if projection == "mercator":
        for deg in range(0, 361, 30):
            x = sx(np.deg2rad(deg))
            out.append(f'<line x1="{x:.2f}" y1="{sy(y1):.2f}" x2="{x:.2f}" y2="{sy(y0):.2f}"/>')
        for deg in range(-60, 61, 30):
            y = sy(float(mercator_xy(np.pi / 2 - np.deg2rad(deg), 0.0)[1]))
            out.append(f'<line x1="{sx(x0):.2f}" y1="{y:.2f}" x2="{sx(x1):.2f}" y2="{y:.2f}"/>')
    else:
        out.append(f'<circle cx="{sx(0):.2f}" cy="{sy(0):.2f}" r="{(sx(1) - sx(0)):.2f}"/>')
        for deg in range(-60, 61, 30):
            z = np.sin(np.deg2rad(deg))
            half = np.cos(np.deg2rad(deg))
            out.append(f'<line x1="{sx(-half):.2f}" y1="{sy(z):.2f}" x2="{sx(half):.2f}" y2="{sy(z):.2f}"/>')
    out.append(f'<rect x="{pad}" y="{pad}" width="{width}" height="{height}"/>' if projection == "mercator" else "")
    out.append("</g>")
    for k, lab, t, p, x, y, front in rows:
        color = PALETTE[k % len(PALETTE)]
        fill = color if (projection == "mercator" or front) else "none"
        out.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="5" fill="{fill}" stroke="{color}" '
                   f'stroke-width="1.5"><title>{lab}: theta={t:.6f}, phi={p:.6f}</title></circle>')
    out.append("</svg>")
    return "\n".join(s for s in out if s) + "\n"


def cmd_export_plot(args):
    _, labels, consts = read_constellation_file(args.constellation)
    if args.format == "csv":
        text = render_csv(labels, consts, args.projection)
    else:
        text = render_svg(labels, consts, args.projection)
    if args.out:
        atomic_write_text(args.out, text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- helpers and entry point --------------------------------------------------

def _scalar(v):
    return v[-1] if isinstance(v, tuple) else v


def _jsonable(v):
    return [float(x) for x in v] if isinstance(v, tuple) else float(v)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qbases", description="Quantumness of spin bases.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.set_defaults(func=func)
        return sp

    sp = add("measure", cmd_measure, "anticoherence of every basis vector and B_t")
    sp.add_argument("basis")
    sp.add_argument("--t", type=int, nargs="+")

    sp = add("search", cmd_search, "random-walk search for extremal bases")
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--objective", default="max-b1")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--restarts", type=int, default=10)
    sp.add_argument("--workers", type=int, default=None)
    sp.add_argument("--inner-steps", type=int, default=500)
    sp.add_argument("--halvings", type=int, default=47)
    sp.add_argument("--initial-step", type=float, default=0.1)
    sp.add_argument("--out", required=True)

    sp = add("certify", cmd_certify, "gradient and Hessian test for an extremum")
    sp.add_argument("basis")
    sp.add_argument("--objective")
    sp.add_argument("--t", type=int, nargs="+")
    sp.add_argument("--null-tol", type=float, default=1e-7)
    sp.add_argument("--grad-tol", type=float, default=1e-6)

    sp = add("catalog", cmd_catalog, "list, export or verify the reference bases")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--list", action="store_true")
    g.add_argument("--verify", metavar="NAME|all")
    g.add_argument("--export", metavar="NAME")
    g.add_argument("--regenerate-u7", action="store_true")
    sp.add_argument("--out")

    sp = add("cue-average", cmd_cue_average, "Monte Carlo Haar average of B_t")
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--t", type=int, default=1)
    sp.add_argument("--samples", type=int, default=10000)
    sp.add_argument("--seed", type=int, default=0)

    sp = add("wehrl", cmd_wehrl, "Wehrl entropy of every basis vector")
    sp.add_argument("basis")

    sp = add("husimi-max", cmd_husimi_max, "maximum of the Husimi function")
    sp.add_argument("basis", nargs="?")
    sp.add_argument("--j")
    sp.add_argument("--amplitudes", help="comma-separated complex amplitudes, m = j first")

    sp = add("rotate", cmd_rotate, "apply a Wigner D-matrix to a basis")
    sp.add_argument("basis")
    sp.add_argument("--alpha", type=float, default=0.0)
    sp.add_argument("--beta", type=float, default=0.0)
    sp.add_argument("--gamma", type=float, default=0.0)
    sp.add_argument("--out")

    sp = add("export-plot", cmd_export_plot, "flat map of a constellation file")
    sp.add_argument("constellation")
    sp.add_argument("--format", choices=("svg", "csv"), default="svg")
    sp.add_argument("--projection", choices=("mercator", "orthographic"), default="mercator")
    sp.add_argument("--out")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            return args.func(args)
    except FileFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NonUnitaryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNITARY
    except (UsageError, SpinError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
