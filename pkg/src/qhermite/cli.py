"""Command-line entry point: ``qhermite eval | table | verify``.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or domain error,
3 a series or lattice sum failed to converge.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import shlex
import sys
import time
import warnings

import mpmath

from .hermite import (
    EvalMethod,
    christoffel_darboux_sides,
    generating_coefficient,
    hermite_coefficients,
    hermite_eval,
)
from .moments import CancellationWarning, moment_closed, moment_measure, moment_qgamma
from .oscillator import (
    LatticeSite,
    fourier_unitarity_defect,
    hermite_argument,
    hermite_ii_orthogonality,
    hermite_orthogonality_residual,
    measure,
)
from .qcore import ConvergenceError, QDomainError, QParameter, TruncationConfig, qpoch_finite
from .qtrig import (
    n_q,
    trig_orthogonality_residual,
    validate_conventions,
    validated_convention,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CONVERGENCE = 0, 1, 2, 3

SUITES = ("recursion", "generating", "cd", "trig", "fourier", "orthogonality", "moments")

XI_GRID = (-2.0, -1.0, -0.3, 0.4, 1.1, 2.5)
CD_POINTS = (-1.7, -0.6, 0.2, 0.9, 1.8)


class _PartialRun(Exception):
    """Convergence failure with whatever was computed before it."""

    def __init__(self, cause, rows):
        super().__init__(str(cause))
        self.rows = rows


# -- helpers -----------------------------------------------------------------


def _config(args) -> TruncationConfig:
    return TruncationConfig(series_tol=args.series_tol, lattice_cutoff=args.cutoff,
                            precision=args.precision)


def _lattice_config(cfg: TruncationConfig) -> TruncationConfig:
    # lattice suites always run in double precision
    return TruncationConfig(cfg.series_tol, cfg.max_terms, cfg.lattice_cutoff)


def _rel(a, b, floor=0.0):
    scale = max(abs(a), abs(b), floor)
    return abs(a - b) / scale if scale else 0.0


def _check(name, eq, residual, tol):
    residual = float(residual)
    ok = math.isfinite(residual) and residual < tol
    return {"name": name, "eq": eq, "residual": residual, "tol": tol, "pass": ok}


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


def _emit(text, output):
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# -- verify suites -------------------------------------------------------------


def suite_recursion(qp, cfg, args):
    out = []
    for n in range(args.nmax + 1):
        worst = 0.0
        for xi in XI_GRID:
            a = hermite_eval(n, xi, qp, EvalMethod.RECURSION)
            b = hermite_eval(n, xi, qp, EvalMethod.CLOSED_FORM)
            worst = max(worst, abs(a - b) / max(1.0, abs(a)))
        out.append(_check(f"recursion-n{n:02d}", "Eq-2.5", worst, args.tol_poly))
    return out


def suite_generating(qp, cfg, args):
    out = []
    p = qp.p2
    for n in range(args.nmax + 1):
        worst = 0.0
        for xi in (0.5, 1.1):
            lhs = generating_coefficient(n, xi, qp, cfg)
            rhs = qp.q ** (n / 2) / 2.0 ** n * hermite_eval(n, xi, qp) / qpoch_finite(p, p, n)
            worst = max(worst, _rel(lhs, rhs, 1e-300))
        out.append(_check(f"generating-n{n:02d}", "Eq-2.6", worst, args.tol_poly))
    return out


def suite_cd(qp, cfg, args):
    out = []
    for n in range(args.nmax + 1):
        worst = 0.0
        for x1 in CD_POINTS:
            for x2 in CD_POINTS:
                if x1 == x2:
                    continue
                lhs, rhs, scale = christoffel_darboux_sides(n, x1, x2, qp)
                worst = max(worst, abs(lhs - rhs) / scale)
        out.append(_check(f"cd-n{n:02d}", "Eq-2.8", worst, args.tol_poly))
    return out


def suite_trig(qp, cfg, args):
    cfg = _lattice_config(cfg)
    worst = validate_conventions(QParameter(1.3), cfg)
    passing = [c for c, w in worst.items() if w < 1e-6]
    out = [_check("trig-convention", "Eq-3.8-convention",
                  min(worst[c] for c in passing) if len(passing) == 1 else math.inf, 1e-6)]
    conv = validated_convention()
    scale = 1.0 / n_q(qp, cfg) ** 2
    for kind in ("cos", "sin"):
        for k in range(-3, 4):
            res = max(trig_orthogonality_residual(k, l, kind, qp, conv, cfg) / (qp.q ** (2 * l) * scale)
                      for l in range(-3, 4))
            out.append(_check(f"trig-{kind}-k{k:+d}", f"Eq-3.8-{kind}", res, args.tol_trig))
    return out


def suite_fourier(qp, cfg, args):
    cfg = _lattice_config(cfg)
    return [_check("fourier-unitarity", "Eq-3.5", fourier_unitarity_defect(qp, cfg=cfg),
                   args.tol_fourier)]


def suite_orthogonality(qp, cfg, args):
    cfg = _lattice_config(cfg)
    out = []
    supports = []
    for r in (0, 1):
        mu = measure(r, qp, cfg=cfg)
        supports.append({int(nu) for nu, w in zip(mu.indices, mu.weights) if w > 0})
        out.append(_check(f"mass-r{r}", f"Eq-4.3-r{r}", abs(mu.total_mass() - 1.0), args.tol_mass))
        worst = max(hermite_orthogonality_residual(n, m, r, qp, cfg=cfg)
                    for n in range(args.nmax + 1) for m in range(args.nmax + 1))
        out.append(_check(f"orthogonality-r{r}", f"Eq-4.2-r{r}", worst, args.tol_measure))
    overlap = len(supports[0] & supports[1])
    out.append(_check("support-disjoint", "Eq-4.3", float(overlap), 0.5))

    nmax = min(args.nmax, 5)
    diag = [hermite_ii_orthogonality(n, n, qp, cfg) for n in range(nmax + 1)]
    off = 0.0
    for n in range(nmax + 1):
        for m in range(n + 1, nmax + 1):
            total = hermite_ii_orthogonality(n, m, qp, cfg).total
            off = max(off, abs(total) / math.sqrt(diag[n].total * diag[m].total))
    out.append(_check("hermite-ii-offdiag", "Eq-4.4", off, args.tol_measure))
    base = diag[0].n_tilde
    spread = max(abs(d.n_tilde / base - 1.0) for d in diag)
    out.append(_check("hermite-ii-ntilde", "Eq-4.4", spread, 1e-5))
    return out


def suite_moments(qp, cfg, args):
    lat = _lattice_config(cfg)
    out = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CancellationWarning)
        for order in range(2 * args.nmax + 1):
            closed = moment_closed(order, qp)
            if order % 2:
                for r in (0, 1):
                    out.append(_check(f"moment-o{order:02d}-r{r}", f"Eq-5.6-r{r}",
                                      abs(moment_measure(order, r, qp, cfg=lat)), 1e-8))
                continue
            out.append(_check(f"moment-o{order:02d}-qgamma", "Eq-5.6",
                              _rel(closed, moment_qgamma(order, qp, cfg)), args.tol_poly))
            for r in (0, 1):
                out.append(_check(f"moment-o{order:02d}-r{r}", f"Eq-5.6-r{r}",
                                  _rel(closed, moment_measure(order, r, qp, cfg=lat)),
                                  args.tol_measure))
    return out


SUITE_FUNCS = {
    "recursion": suite_recursion,
    "generating": suite_generating,
    "cd": suite_cd,
    "trig": suite_trig,
    "fourier": suite_fourier,
    "orthogonality": suite_orthogonality,
    "moments": suite_moments,
}


# -- commands -------------------------------------------------------------------


def cmd_eval(args, argv) -> int:
    qp = QParameter(args.q)
    cfg = _config(args)
    method = EvalMethod(args.method)
    rec = hermite_eval(args.n, args.xi, qp, EvalMethod.RECURSION, cfg)
    closed = hermite_eval(args.n, args.xi, qp, EvalMethod.CLOSED_FORM, cfg)
    value = rec if method is EvalMethod.RECURSION else closed
    discrepancy = float(abs(rec - closed) / max(1, abs(value)))
    if args.format == "text":
        text = mpmath.nstr(value, cfg.precision) if cfg.precision else repr(float(value))
        print(text)
        return EXIT_OK
    record = {
        "command": shlex.join(argv),
        "n": args.n,
        "q": qp.q,
        "xi": args.xi,
        "method": method.value,
        "value": float(value),
        "recursion": float(rec),
        "closed_form": float(closed),
        "discrepancy": discrepancy,
    }
    if cfg.precision:
        record["value_digits"] = mpmath.nstr(value, cfg.precision)
    print(_dump(record))
    return EXIT_OK


def _measure_rows(qp, cfg, args):
    mu = measure(args.r, qp, cfg=_lattice_config(cfg))
    lo, hi = int(mu.indices[0]), int(mu.indices[-1])
    rows = []
    for nu in range(lo, hi + 1):
        for tau in (1, -1):
            site = LatticeSite(nu, tau)
            rows.append([nu, tau, hermite_argument(site, qp), mu.weight(site)])
    return COLUMNS["measure"](args), rows


def _polynomial_rows(qp, cfg, args):
    cols = COLUMNS["polynomial"](args)
    rows = []
    for n in range(args.nmax + 1):
        coeffs = [float(c) for c in hermite_coefficients(n, qp, cfg).coeffs]
        rows.append([n] + coeffs + [0.0] * (args.nmax - n))
    return cols, rows


def _moment_rows(qp, cfg, args):
    lat = _lattice_config(cfg)
    cols = COLUMNS["moments"](args)
    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CancellationWarning)
        for order in range(args.nmax + 1):
            try:
                vals = [moment_closed(order, qp), moment_qgamma(order, qp, cfg),
                        moment_measure(order, 0, qp, cfg=lat), moment_measure(order, 1, qp, cfg=lat)]
            except ConvergenceError as exc:
                raise _PartialRun(exc, rows) from exc
            diff = max(_rel(a, b) if order % 2 == 0 else abs(a - b)
                       for i, a in enumerate(vals) for b in vals[i + 1:])
            rows.append([order] + [float(v) for v in vals] + [diff])
    return cols, rows


TABLES = {"measure": _measure_rows, "polynomial": _polynomial_rows, "moments": _moment_rows}
COLUMNS = {
    "measure": lambda args: ["nu", "tau", "xi", "weight"],
    "polynomial": lambda args: ["n"] + [f"c{k}" for k in range(args.nmax + 1)],
    "moments": lambda args: ["order", "closed", "qgamma", "measure_r0", "measure_r1", "max_rel_diff"],
}


def _render_table(what, qp, cols, rows, fmt, converged):
    if fmt == "json":
        return _dump({"table": what, "q": qp.q, "columns": cols, "rows": rows,
                      "converged": converged}) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    writer.writerows([[repr(v) if isinstance(v, float) else v for v in row] for row in rows])
    if not converged:
        buf.write("# converged:false\n")
    return buf.getvalue()


def cmd_table(args, argv) -> int:
    qp = QParameter(args.q)
    cfg = _config(args)
    if args.what == "measure" and args.r not in (0, 1):
        raise QDomainError("--r must be 0 or 1")
    try:
        cols, rows = TABLES[args.what](qp, cfg, args)
    except (_PartialRun, ConvergenceError) as exc:
        rows = exc.rows if isinstance(exc, _PartialRun) else []
        _emit(_render_table(args.what, qp, COLUMNS[args.what](args), rows, args.format, False),
              args.output)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    _emit(_render_table(args.what, qp, cols, rows, args.format, True), args.output)
    return EXIT_OK


def cmd_verify(args, argv) -> int:
    qp = QParameter(args.q)
    cfg = _config(args)
    start = time.perf_counter()
    names = SUITES if args.suite == "all" else (args.suite,)
    checks = []
    status = None
    for name in names:
        try:
            checks.extend(SUITE_FUNCS[name](qp, cfg, args))
        except ConvergenceError as exc:
            print(f"error: suite {name}: {exc}", file=sys.stderr)
            status = EXIT_CONVERGENCE
            break
    checks.sort(key=lambda c: c["name"])
    all_pass = status is None and all(c["pass"] for c in checks)
    report = {
        "command": shlex.join(argv),
        "q": qp.q,
        "config": {
            "series_tol": cfg.series_tol,
            "max_terms": cfg.max_terms,
            "lattice_cutoff": cfg.lattice_cutoff,
            "precision": cfg.precision,
            "nmax": args.nmax,
        },
        "checks": checks,
        "pass": all_pass,
        "seconds": round(time.perf_counter() - start, 3),
    }
    _emit(_dump(report) + "\n", args.output)
    if status is not None:
        return status
    return EXIT_OK if all_pass else EXIT_FAIL


# -- argument parsing -------------------------------------------------------------


def _precision_default():
    raw = os.environ.get("QHERMITE_PRECISION")
    if not raw:
        return None
    try:
        return int(raw)
    except ValueError:
        return None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=float, default=1.3, help="deformation parameter, q > 1 (default: 1.3)")
    common.add_argument("--series-tol", type=float, default=1e-12,
                        help="relative truncation tolerance (default: 1e-12)")
    common.add_argument("--cutoff", type=int, default=60, help="lattice cutoff L (default: 60)")
    common.add_argument("--precision", type=int, default=_precision_default(),
                        help="decimal digits for high-precision mode "
                             "(default: $QHERMITE_PRECISION, else double precision)")
    common.add_argument("--output", help="write to this file instead of stdout")

    parser = argparse.ArgumentParser(
        prog="qhermite",
        description="q-deformed Hermite polynomials and the q-oscillator lattice",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", parents=[common], help="evaluate H_n(xi)")
    p_eval.add_argument("--n", type=int, required=True, help="degree")
    p_eval.add_argument("--xi", type=float, required=True, help="argument")
    p_eval.add_argument("--method", choices=[m.value for m in EvalMethod], default="recursion")
    p_eval.add_argument("--format", choices=["text", "json"], default="text")

    p_table = sub.add_parser("table", parents=[common], help="tabulate measures, polynomials or moments")
    p_table.add_argument("what", choices=sorted(TABLES))
    p_table.add_argument("--r", type=int, default=0, help="ground-state label for measure tables")
    p_table.add_argument("--nmax", type=int, default=6, help="largest degree or moment order")
    p_table.add_argument("--format", choices=["json", "csv"], default="csv")

    p_verify = sub.add_parser("verify", parents=[common], help="run verification suites")
    p_verify.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p_verify.add_argument("--nmax", type=int, default=6, help="largest degree checked (default: 6)")
    p_verify.add_argument("--tol-poly", type=float, default=1e-10,
                          help="tolerance for polynomial identities")
    p_verify.add_argument("--tol-trig", type=float, default=1e-8,
                          help="tolerance for q-trig lattice orthogonality")
    p_verify.add_argument("--tol-fourier", type=float, default=1e-7,
                          help="tolerance for Fourier unitarity")
    p_verify.add_argument("--tol-measure", type=float, default=1e-6,
                          help="tolerance for measure orthogonality and moments")
    p_verify.add_argument("--tol-mass", type=float, default=1e-8, help="tolerance for unit mass")
    return parser


COMMANDS = {"eval": cmd_eval, "table": cmd_table, "verify": cmd_verify}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if getattr(args, "nmax", 0) < 0:
        print("error: --nmax must be nonnegative", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args, argv)
    except (QDomainError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
