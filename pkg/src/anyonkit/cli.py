"""Command-line interface.

Exit status is 0 on success, 1 for user errors (bad flags, unknown models,
malformed input) and 2 for numerical failures or failed consistency checks.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from .bounds import BoundsReport, bounds_report
from .braid import parse
from .exchange import (
    DEFAULT_CLUSTER_TOL,
    MAX_DIRECT_P,
    EigenphaseSpectrum,
    default_strand,
    direct_operator,
    exchange_parameters,
    exchange_reduced,
    merge_spectra,
    spectrum,
)
from .fusion import quantum_dimensions
from .modelfile import MODEL_PATH_ENV, resolve_model
from .numerics import NumericalError
from .poincare import poincare_check
from .reps import burau3_unitary, burau_rep, evaluate, splitting_rep
from .symbols import BUILTIN_NAMES, verify_hexagon, verify_pentagon, verify_unitarity
from .trees import enumerate_basis

__all__ = ["main", "run", "format_phase", "emit_svg_circle", "spectrum_csv", "parse_spectrum_csv"]

RESIDUAL_TOL = 1e-12


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def format_phase(x: float, tol: float = 1e-7, max_den: int = 40) -> str:
    """``p/q`` when `x` is within `tol` of such a fraction with ``q <= max_den``."""
    f = Fraction(x).limit_denominator(max_den)
    if abs(float(f) - x) <= tol:
        return str(f)
    return f"{x:.10f}"


def _parse_phase(text: str) -> float:
    return float(Fraction(text))


def spectrum_csv(rows: list[tuple[float, int, str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(["phase_over_pi", "multiplicity", "channel"])
    for phase, mult, channel in rows:
        w.writerow([format_phase(phase), mult, channel])
    return buf.getvalue()


def parse_spectrum_csv(text: str, cluster_tol: float = DEFAULT_CLUSTER_TOL) -> EigenphaseSpectrum:
    """Read back :func:`spectrum_csv` output as one merged spectrum."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["phase_over_pi", "multiplicity", "channel"]:
        raise ValueError("not a spectrum CSV")
    parts = [EigenphaseSpectrum(((_parse_phase(r[0]), int(r[1])),), cluster_tol) for r in rows[1:]]
    return merge_spectra(parts, cluster_tol)


def emit_svg_circle(points: list[tuple[float, int]], title: str = "") -> str:
    """Unit-circle plot of eigenphases with multiplicity labels, as SVG 1.1 text."""
    size, c, r = 320, 160, 120
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
    ]
    if title:
        out.append(f'<title>{_xml_escape(title)}</title>')
    out.append(f'<line x1="{c - r - 20}" y1="{c}" x2="{c + r + 20}" y2="{c}" stroke="gray" stroke-width="1"/>')
    out.append(f'<line x1="{c}" y1="{c - r - 20}" x2="{c}" y2="{c + r + 20}" stroke="gray" stroke-width="1"/>')
    out.append(f'<circle cx="{c}" cy="{c}" r="{r}" fill="none" stroke="black" stroke-width="1.5"/>')
    for phase, mult in sorted(points):
        x = c + r * math.cos(math.pi * phase)
        y = c - r * math.sin(math.pi * phase)
        lx = c + (r + 18) * math.cos(math.pi * phase)
        ly = c - (r + 18) * math.sin(math.pi * phase) + 4
        out.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="5" fill="black"/>')
        out.append(f'<text x="{lx:.3f}" y="{ly:.3f}" font-size="11" text-anchor="middle">'
                   f'{_xml_escape(format_phase(phase))} (x{mult})</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _xml_escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _sector(model, text):
    if text is None:
        return (None, None)
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"--sector expects 'a,c' (use '*' for a wildcard), got {text!r}")
    return tuple(None if p.strip() in ("*", "") else model.label(p.strip()) for p in parts)


def _strand(model, text):
    return default_strand(model) if text is None else model.label(text)


def _write(args, text: str):
    if getattr(args, "output", None):
        Path(args.output).write_text(text, encoding="utf-8", newline="")
    else:
        sys.stdout.write(text)


def _table(header: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    for r in rows:
        lines.append("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


def cmd_models(args):
    rows = []
    names = list(BUILTIN_NAMES)
    for name in names:
        m = resolve_model(name if name != "abelian" else "abelian(1/2)")
        rows.append([name, "builtin", " ".join(m.labels)])
    for directory in os.environ.get(MODEL_PATH_ENV, "").split(os.pathsep):
        if directory and Path(directory).is_dir():
            for path in sorted(Path(directory).glob("*.json")):
                try:
                    m = resolve_model(str(path))
                except ValueError as exc:
                    rows.append([path.stem, str(path), f"error: {exc}"])
                else:
                    rows.append([path.stem, str(path), " ".join(m.labels)])
    _write(args, _table(["name", "source", "labels (abelian shown for alpha=1/2)"], rows))
    return 0


def cmd_verify(args):
    model = resolve_model(args.model)
    pent = verify_pentagon(model)
    hex_ccw = verify_hexagon(model)
    hex_cw = verify_hexagon(model, clockwise=True)
    unit = verify_unitarity(model)
    dims = quantum_dimensions(model.algebra)
    tol = args.tol
    lines = [f"model {model.name}: labels {' '.join(model.labels)}",
             "quantum dimensions " + " ".join(f"{l}={d:.12g}" for l, d in zip(model.labels, dims))]
    ok = True
    for name, val in (("pentagon", pent), ("hexagon", max(hex_ccw, hex_cw)), ("unitarity", unit)):
        good = val < tol
        ok &= good
        lines.append(f"{name} residual {val:.3e} {'<' if good else '>='} {tol:g}")
    lines.append("consistent" if ok else "INCONSISTENT")
    _write(args, "\n".join(lines) + "\n")
    return 0 if ok else 2


def cmd_basis(args):
    model = resolve_model(args.model)
    t = _strand(model, args.t)
    basis = enumerate_basis(model, t, args.n, _sector(model, args.sector))
    lab = model.labels
    lines = [f"dim {basis.dim}"] + [f"{i}: {basis.format_state(ch, lab)}" for i, ch in enumerate(basis.states)]
    _write(args, "\n".join(lines) + "\n")
    return 0


def _matrix_text(m: np.ndarray, fmt: str) -> str:
    def cell(z):
        # entries below 1e-13 are rounding noise
        re = z.real if abs(z.real) >= 1e-13 else 0.0
        im = z.imag if abs(z.imag) >= 1e-13 else 0.0
        return f"{re:.12g}{im:+.12g}j"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        for row in m:
            w.writerow([cell(z) for z in row])
        return buf.getvalue()
    return "\n".join("  ".join(cell(z) for z in row) for row in m) + "\n"


def cmd_rep_eval(args):
    if args.burau3 is not None:
        rep = burau3_unitary(args.burau3)
    elif args.burau is not None:
        if args.n is None:
            raise UsageError("--burau needs --n")
        rep = burau_rep(args.n, complex(args.burau.replace(" ", "")))
    else:
        if args.model is None or args.n is None:
            raise UsageError("rep-eval needs --model and --n (or --burau3 / --burau)")
        model = resolve_model(args.model)
        rep = splitting_rep(model, _strand(model, args.t), args.n, _sector(model, args.sector))
    word = parse(args.word, rep.strands)
    M = evaluate(rep, word)
    text = f"# {rep.basis_tag}; word: {word or '(empty)'}\n" if args.format == "table" else ""
    _write(args, text + _matrix_text(M, args.format))
    return 0


def _spectrum_rows(model, t, p, sector, reduced, tol, max_p=MAX_DIRECT_P):
    if reduced:
        rows = []
        for block in exchange_reduced(model, t, p, sector):
            s = spectrum(block.matrix, tol, model.labels[block.c])
            rows.extend((ph, m * block.multiplicity, s.channel) for ph, m in s.entries)
        return rows
    s = spectrum(direct_operator(model, t, p, sector, max_p=max_p), tol)
    return [(ph, m, "all") for ph, m in s.entries]


def cmd_spectrum(args):
    model = resolve_model(args.model)
    t = _strand(model, args.t)
    rows = _spectrum_rows(model, t, args.p, _sector(model, args.sector), args.reduced, args.cluster_tol,
                          args.max_p)
    if args.out == "csv":
        _write(args, spectrum_csv(rows))
    elif args.out == "svg":
        merged = merge_spectra([EigenphaseSpectrum(((ph, m),), args.cluster_tol) for ph, m, _ in rows])
        _write(args, emit_svg_circle(list(merged.entries), f"{model.name} U_{args.p}"))
    else:
        header = ["phase/pi", "multiplicity"] + (["channel"] if args.reduced else [])
        body = [[format_phase(ph), str(m)] + ([ch] if args.reduced else []) for ph, m, ch in rows]
        _write(args, _table(header, body))
    return 0


def cmd_exchange_params(args):
    model = resolve_model(args.model)
    params = exchange_parameters(model, args.N, _strand(model, args.t), args.cluster_tol)
    if args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(["kind", "index", "value"])
        for p, b in enumerate(params.beta):
            w.writerow(["beta", p, format_phase(b)])
        for n, a in enumerate(params.alpha, start=2):
            w.writerow(["alpha", n, format_phase(a)])
        _write(args, buf.getvalue())
    else:
        lines = ["beta = (" + ", ".join(format_phase(b) for b in params.beta) + ")",
                 "alpha = (" + ", ".join(format_phase(a) for a in params.alpha) + ")",
                 f"alpha_{args.N} = {format_phase(params.alpha[-1])}"]
        _write(args, "\n".join(lines) + "\n")
    return 0


def cmd_bounds(args):
    model = resolve_model(args.model)
    report = bounds_report(model, args.N, _strand(model, args.t))
    if args.csv:
        _write(args, report.to_csv())
    else:
        rows = []
        for name in BoundsReport.csv_header():
            val = getattr(report, name)
            text = f"{val:.12g}" if isinstance(val, float) else str(val)
            rows.append([name, text, BoundsReport.PROVENANCE.get(name, "")])
        _write(args, _table(["quantity", "value", "derivation"], rows))
    return 0


def cmd_poincare(args):
    if args.alpha is not None:
        U = np.exp(1j * math.pi * float(Fraction(args.alpha)))
        label = f"U = exp(i pi {args.alpha})"
    else:
        if args.model is None or args.p is None:
            raise UsageError("poincare needs --alpha, or --model with --p")
        model = resolve_model(args.model)
        U = direct_operator(model, _strand(model, args.t), args.p, _sector(model, args.sector))
        label = f"{model.name} U_{args.p} (dim {U.shape[0]})"
    res = poincare_check(U, args.grid)
    _write(args, (f"{label}, M = {args.grid}\n"
                  f"discrete energy   {res.energy:.12g}\n"
                  f"lambda_0^2        {res.lambda0_sq:.12g}\n"
                  f"relative error    {res.relative_error:.3e}\n"))
    return 0


def cmd_plot(args):
    model = resolve_model(args.model)
    t = _strand(model, args.t)
    if args.kind == "circle":
        parts = []
        for p in range(args.pmax + 1):
            rows = _spectrum_rows(model, t, p, (None, None), True, args.cluster_tol)
            parts.extend(EigenphaseSpectrum(((ph, m),), args.cluster_tol) for ph, m, _ in rows)
        merged = merge_spectra(parts, args.cluster_tol)
        _write(args, emit_svg_circle(list(merged.entries), f"{model.name} U_p, p = 0..{args.pmax}"))
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(["N", "alpha_N", "C_rhoN_lb", "E_N_lower", "E_N_upper"])
        for N in range(2, args.Nmax + 1):
            r = bounds_report(model, N, t)
            w.writerow([N, format_phase(r.alpha_N), repr(r.C_rhoN_lb), repr(r.E_N_lower), repr(r.E_N_upper)])
        _write(args, buf.getvalue())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="anyonkit", description="Anyon models, exchange spectra and energy bounds.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def common(p, model=True, required=True):
        if model:
            p.add_argument("--model", required=required,
                           help=f"built-in name, JSON file, or name on ${MODEL_PATH_ENV}")
            p.add_argument("--t", help="strand charge (default: label of largest quantum dimension)")
        p.add_argument("--output", help="write to this file instead of stdout")

    p = sub.add_parser("models", help="list available models")
    common(p, model=False)
    p.set_defaults(func=cmd_models)

    p = sub.add_parser("verify", help="pentagon, hexagon and unitarity residuals")
    common(p)
    p.add_argument("--tol", type=float, default=RESIDUAL_TOL)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("basis", help="ordered splitting basis")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sector", help="a,c with * as wildcard")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("rep-eval", help="matrix of a braid word")
    common(p, required=False)
    p.add_argument("--n", type=int)
    p.add_argument("--sector")
    p.add_argument("--word", required=True, help='e.g. "s1 s2^-1 Sigma1"')
    p.add_argument("--burau3", type=float, metavar="ALPHA", help="unitary reduced Burau rep of B_3")
    p.add_argument("--burau", metavar="Z", help="unreduced Burau rep with parameter z (needs --n)")
    p.add_argument("--format", choices=("table", "csv"), default="table")
    p.set_defaults(func=cmd_rep_eval)

    p = sub.add_parser("spectrum", help="eigenphases of the exchange operator U_p")
    common(p)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--reduced", action="store_true", help="per fusion channel blocks")
    p.add_argument("--max-p", type=int, default=MAX_DIRECT_P,
                   help="cap on p for the direct (unreduced) operator")
    p.add_argument("--sector")
    p.add_argument("--out", choices=("table", "csv", "svg"), default="table")
    p.add_argument("--cluster-tol", type=float, default=DEFAULT_CLUSTER_TOL)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("exchange-params", help="beta_p and alpha_n")
    common(p)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--csv", action="store_true")
    p.add_argument("--cluster-tol", type=float, default=DEFAULT_CLUSTER_TOL)
    p.set_defaults(func=cmd_exchange_params)

    p = sub.add_parser("bounds", help="energy bound report")
    common(p)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("poincare", help="discrete semi-periodic Poincare check")
    common(p, required=False)
    p.add_argument("--alpha", help="scalar twist exp(i pi alpha); fractions allowed")
    p.add_argument("--p", type=int)
    p.add_argument("--sector")
    p.add_argument("--grid", type=int, default=2000)
    p.set_defaults(func=cmd_poincare)

    p = sub.add_parser("plot", help="unit-circle SVG or bounds-vs-N CSV")
    common(p)
    p.add_argument("--kind", choices=("circle", "bounds"), default="circle")
    p.add_argument("--pmax", type=int, default=4)
    p.add_argument("--Nmax", type=int, default=10)
    p.add_argument("--cluster-tol", type=float, default=DEFAULT_CLUSTER_TOL)
    p.set_defaults(func=cmd_plot)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("anyonkit: a subcommand is required (see --help)")
        for name in ("n", "N", "p", "grid", "pmax", "Nmax"):
            val = getattr(args, name, None)
            if val is not None and val < 0:
                raise UsageError(f"--{name} must be non-negative")
        return args.func(args)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 1


def main(argv=None):
    sys.exit(run(argv))
