"""Command-line interface: ``simulate``, ``estimate`` and ``forecast``.

Every run writes ``run_manifest.txt`` into its output directory. The
manifest lists all effective parameters in ``key = value`` form and can be
passed back through ``--config`` to repeat the run.

Exit codes: 0 success, 1 data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import sys
import tempfile
from datetime import date, timedelta
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .bandwidth import THREADS_ENV, BandwidthGrid, DEFAULT_B1, DEFAULT_B2, select_bandwidths
from .errors import ConfigError, DataError, ExposureHawkesError
from .estimation import (
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    IntensitySurface,
    estimate_full_info,
    estimate_missing_link,
    interior_mask,
    relative_l2,
)
from .forecast import (
    DEFAULT_C_GRID,
    c_from_R,
    c_grid,
    forecast_counts,
    optimal_c,
    reproduction_number,
    sample_paths,
)
from .hawkes_sim import DEFAULT_START, HOSP_LAGS, SCENARIOS, GroundTruth, simulate
from .kernels import Bandwidths, KernelSpec
from .pairs import PairCounts
from .timeline import DEFAULT_COLUMNS, Dataset, format_counts, load_counts

log = logging.getLogger("exposure_hawkes")

MANIFEST = "run_manifest.txt"
EXIT_DATA = 1
EXIT_USAGE = 2


class UsageError(ExposureHawkesError):
    pass


# -- file helpers -------------------------------------------------------------


def write_atomic(path: Path, text: str) -> None:
    """Write through a temporary file in the target directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _fmt(x) -> str:
    if isinstance(x, (tuple, list)):
        return ",".join(_fmt(v) for v in x)
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def read_config(path) -> dict:
    """Parse a ``key = value`` file; blank lines and ``#`` comments are skipped."""
    out = {}
    with open(path) as fh:
        for n, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"{path} line {n}: expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def write_manifest(out_dir: Path, command: str, args: argparse.Namespace) -> None:
    params = {k: v for k, v in vars(args).items() if k not in ("func", "config", "command", "verbose")}
    lines = [f"command = {command}", f"version = {__version__}"]
    for key in sorted(params):
        value = params[key]
        if value is None:
            continue
        lines.append(f"{key.replace('_', '-')} = {_fmt(value)}")
    write_atomic(out_dir / MANIFEST, "\n".join(lines) + "\n")


# -- argument parsing ---------------------------------------------------------


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return v


def _float_list(text: str) -> tuple:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _date_list(text: str) -> tuple:
    try:
        return tuple(date.fromisoformat(x.strip()) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated ISO dates, got {text!r}") from None


def _iso_date(text: str) -> date:
    try:
        return date.fromisoformat(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an ISO date, got {text!r}") from None


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"expected a boolean, got {text!r}")


def _add_data_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("input data")
    g.add_argument("--counts", required=True, help="daily counts CSV")
    g.add_argument("--date-col", default=DEFAULT_COLUMNS["date"])
    g.add_argument("--positives-col", default=DEFAULT_COLUMNS["positives"])
    g.add_argument("--hospitalized-col", default=DEFAULT_COLUMNS["hospitalized"])
    g.add_argument("--delimiter", default=",")
    g.add_argument("--n-scale", type=_positive_float, default=1.0)


def _add_estimation_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("estimation")
    g.add_argument("--D1", type=_positive_int, default=14, help="infection lags")
    g.add_argument("--D2", type=_positive_int, default=HOSP_LAGS, help="hospitalization lags")
    g.add_argument("--kernel", default="epanechnikov", choices=("epanechnikov", "quartic", "gaussian-truncated"))
    g.add_argument("--b1", type=_positive_float, default=0.1, help="time bandwidth, fraction of the horizon")
    g.add_argument("--b2", type=_positive_float, default=3.0, help="lag bandwidth in days")
    g.add_argument("--cv", action="store_true", help="select (b1, b2) by cross-validation")
    g.add_argument("--b1-grid", type=_float_list, default=DEFAULT_B1)
    g.add_argument("--b2-grid", type=_float_list, default=DEFAULT_B2)
    g.add_argument("--fast", action="store_true", help="score CV cells with pilot responsibilities")
    g.add_argument("--tol", type=_positive_float, default=DEFAULT_TOL)
    g.add_argument("--max-iter", type=_positive_int, default=DEFAULT_MAX_ITER)
    g.add_argument("--burn-in", type=int, default=None, help="leading offspring days left out (default: D)")
    g.add_argument("--threads", type=_positive_int, default=None, help=f"overrides {THREADS_ENV}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="exposure-hawkes", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file supplying flag defaults")
    common.add_argument("-o", "--out-dir", required=True, help="output directory (created if missing)")

    s = sub.add_parser("simulate", parents=[common], help="simulate the branching model")
    src = s.add_mutually_exclusive_group()
    src.add_argument("--scenario", choices=sorted(SCENARIOS))
    src.add_argument("--mu1-file", help="infection kernel surface CSV (day,lag,value)")
    s.add_argument("--mu2-file", help="hospitalization kernel surface CSV")
    s.add_argument("--days", type=_positive_int, default=None, help="horizon T for a scenario")
    s.add_argument("--n-scale", type=_positive_float, default=None)
    s.add_argument("--seed-days", type=_positive_int, default=None, help="immigration days for --mu1-file (default D1)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--start-date", type=_iso_date, default=DEFAULT_START)
    s.set_defaults(func=cmd_simulate)

    e = sub.add_parser("estimate", parents=[common], help="estimate intensity surfaces")
    _add_data_flags(e)
    _add_estimation_flags(e)
    e.add_argument("--mode", default="missing-link", choices=("full-info", "missing-link", "compare"))
    e.add_argument("--target", default="mu1", choices=("mu1", "mu2", "both"))
    e.add_argument("--pairs", help="infection pair counts CSV (full-info, compare)")
    e.add_argument("--pairs-mu2", help="hospitalization pair counts CSV (full-info, compare)")
    e.add_argument("--slices", type=_date_list, default=None, help="comma-separated dates for lag profiles")
    e.set_defaults(func=cmd_estimate)

    f = sub.add_parser("forecast", parents=[common], help="forecast counts under a change factor")
    _add_data_flags(f)
    _add_estimation_flags(f)
    f.add_argument("--mu1", help="infection surface CSV")
    f.add_argument("--mu2", help="hospitalization surface CSV")
    f.add_argument("--estimate", action="store_true", help="estimate the surfaces from data up to t*")
    f.add_argument("--t-star", required=True, help="last observed day: ISO date or day index")
    f.add_argument("--h", type=_positive_int, required=True, help="horizon in days")
    f.add_argument("--c", type=_positive_float, default=None, help="change factor C")
    f.add_argument("--r-target", type=_positive_float, default=None, help="reproduction number at t* + h")
    f.add_argument("--r-series", default=None, help="CSV with date,R columns; the value at t* + h is the target")
    f.add_argument("--shift-days", type=int, default=0, help="read the R series this many days later")
    f.add_argument("--calibrate", action="store_true", help="pick C retrospectively on observed data")
    f.add_argument("--objective", default="infections", choices=("infections", "hospitalizations"))
    f.add_argument("--c-grid", default=":".join(f"{x:g}" for x in DEFAULT_C_GRID), help="start:stop:step")
    f.add_argument("--immigration-cutoff", type=int, default=0)
    f.add_argument("--replicates", type=int, default=0, help="Poisson paths for predictive intervals")
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--plot", action="store_true", help="write forecast.png (needs matplotlib)")
    f.set_defaults(func=cmd_forecast)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list) -> argparse.Namespace:
    pre = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return parser.parse_args(argv)
    cfg = read_config(known.config)
    commands = parser._subparsers._group_actions[0].choices
    given = next((a for a in argv if a in commands), None)
    cmd = cfg.pop("command", None) or given
    if cmd is None:
        raise UsageError("no subcommand given")
    if given is None:
        argv = [cmd] + argv
    elif given != cmd:
        raise UsageError(f"config is for {cmd!r}, not {given!r}")
    cfg.pop("version", None)
    subparser = commands[cmd]
    actions = {a.dest: a for a in subparser._actions}
    for key, value in cfg.items():
        if key not in actions or key in ("help", "config"):
            raise UsageError(f"unknown config key {key!r}")
        act = actions[key]
        if act.nargs == 0:
            cfg[key] = _bool(value)
        act.required = False
    subparser.set_defaults(**cfg)
    # flags on the command line still win over the file
    return parser.parse_args(argv)


# -- shared pieces ------------------------------------------------------------


def _load(args) -> Dataset:
    cmap = {"date": args.date_col, "positives": args.positives_col, "hospitalized": args.hospitalized_col}
    return load_counts(args.counts, cmap, args.n_scale, args.delimiter)


def _day_index(ds: Dataset, text: str) -> int:
    try:
        return int(text)
    except ValueError:
        pass
    try:
        when = date.fromisoformat(text)
    except ValueError:
        raise UsageError(f"--t-star expects an ISO date or a day index, got {text!r}") from None
    return ds.infections.day_of(when)


def _fit(args, exposure, offspring, D, pairs=None, mode="missing-link"):
    """Surface, CV table and diagnostics for one target."""
    spec = KernelSpec(args.kernel)
    burn_in = args.burn_in
    table = None
    if args.cv:
        grid = BandwidthGrid(args.b1_grid, args.b2_grid)
        bw, table = select_bandwidths(
            exposure,
            offspring,
            grid,
            D,
            spec,
            mode=mode,
            pairs=pairs,
            return_table=True,
            fast=args.fast,
            tol=args.tol,
            max_iter=args.max_iter,
            burn_in=burn_in,
            threads=args.threads,
        )
    else:
        bw = Bandwidths(args.b1, min(args.b2, D))
    diag = {"b1": bw.b1, "b2": bw.b2, "mode": mode, "D": D}
    if mode == "full-info":
        surf = estimate_full_info(pairs, exposure, bw, D, spec, burn_in=burn_in or 0)
    else:
        surf, it = estimate_missing_link(
            exposure, offspring, bw, D, spec, tol=args.tol, max_iter=args.max_iter, burn_in=burn_in
        )
        diag.update(
            iterations=it.iterations_run,
            converged=it.converged,
            final_change=it.final_residual,
            skipped_days=" ".join(map(str, it.skipped_days)),
        )
    diag["clipped_cells"] = surf.clipped
    diag["evaluated_cells"] = int(surf.evaluated.sum())
    return surf, table, diag


def _write_surface(path: Path, surf: IntensitySurface) -> None:
    write_atomic(path, surf.to_csv_text())


def _write_cv(path: Path, table) -> None:
    write_atomic(path, _csv_text(("b1", "b2", "score"), [(_fmt(a), _fmt(b), _fmt(s)) for a, b, s in table]))


def _write_diag(path: Path, diag: dict) -> None:
    write_atomic(path, _csv_text(("key", "value"), [(k, _fmt(v)) for k, v in diag.items()]))


def _write_slices(path: Path, surf: IntensitySurface, ds: Dataset, dates) -> None:
    days = [ds.infections.day_of(d) for d in dates]
    for d, t in zip(dates, days):
        if not 1 <= t <= surf.T:
            raise DataError(f"slice date {d} is outside the estimated range")
    rows = [[l + 1] + [_fmt(surf.values[t - 1, l]) for t in days] for l in range(surf.D)]
    write_atomic(path, _csv_text(["lag"] + [d.isoformat() for d in dates], rows))


# -- subcommands --------------------------------------------------------------


def cmd_simulate(args) -> int:
    out = Path(args.out_dir)
    if not args.scenario and not args.mu1_file:
        raise UsageError("simulate needs --scenario or --mu1-file")
    if args.scenario:
        kw = {}
        if args.days is not None:
            kw["T"] = args.days
        if args.n_scale is not None:
            kw["n_scale"] = args.n_scale
        gt = SCENARIOS[args.scenario](**kw)
    else:
        mu1 = IntensitySurface.read_csv(args.mu1_file).values
        T, D1 = mu1.shape
        rho = np.zeros(T)
        rho[: min(T, args.seed_days or D1)] = 1.0
        mu2 = rho2 = None
        if args.mu2_file:
            mu2 = IntensitySurface.read_csv(args.mu2_file).values
            if mu2.shape[0] != T:
                raise DataError(f"mu2 surface covers {mu2.shape[0]} days, mu1 covers {T}")
            rho2 = np.zeros(T)
        gt = GroundTruth(mu1, rho, mu2, rho2, args.n_scale or 1.0, Path(args.mu1_file).stem)
    sim = simulate(gt, args.seed, start_date=args.start_date)
    write_atomic(out / "counts.csv", format_counts(sim.dataset(gt.n_scale)))
    write_atomic(out / "pairs_mu1.csv", sim.pair_counts1.to_csv_text())
    if gt.mu2 is not None:
        write_atomic(out / "pairs_mu2.csv", sim.pair_counts2.to_csv_text())
        _write_surface(out / "truth_mu2.csv", IntensitySurface(gt.mu2, np.ones(gt.mu2.shape, dtype=bool)))
    _write_surface(out / "truth_mu1.csv", IntensitySurface(gt.mu1, np.ones(gt.mu1.shape, dtype=bool)))
    print(f"simulated {gt.name}: {sim.infections.total()} infections, {sim.hospitalizations.total()} hospitalizations")
    write_manifest(out, "simulate", args)
    return 0


def _targets(args, ds: Dataset):
    names = ("mu1", "mu2") if args.target == "both" else (args.target,)
    for name in names:
        if name == "mu1":
            yield name, ds.infections, args.D1, args.pairs
        else:
            if ds.hospitalizations is None:
                raise DataError("mu2 needs a hospitalization column in the counts file")
            yield name, ds.hospitalizations, args.D2, args.pairs_mu2


def cmd_estimate(args) -> int:
    out = Path(args.out_dir)
    ds = _load(args)
    for name, offspring, D, pairs_path in _targets(args, ds):
        pairs = None
        if args.mode in ("full-info", "compare"):
            if not pairs_path:
                flag = "--pairs" if name == "mu1" else "--pairs-mu2"
                raise UsageError(f"mode {args.mode} needs {flag}")
            pairs = PairCounts.read_csv(pairs_path, ds.T, D)
        modes = ("full-info", "missing-link") if args.mode == "compare" else (args.mode,)
        fits = {}
        for mode in modes:
            surf, table, diag = _fit(args, ds.infections, offspring, D, pairs, mode)
            suffix = "" if len(modes) == 1 else "_" + mode.replace("-", "_")
            _write_surface(out / f"{name}_surface{suffix}.csv", surf)
            _write_diag(out / f"{name}_diagnostics{suffix}.csv", diag)
            if table is not None:
                _write_cv(out / f"{name}_cv{suffix}.csv", table)
            if args.slices:
                _write_slices(out / f"{name}_slices{suffix}.csv", surf, ds, args.slices)
            fits[mode] = surf
            print(f"{name} {mode}: b1={diag['b1']:g} b2={diag['b2']:g} clipped={diag['clipped_cells']}")
        if len(fits) == 2:
            mask = interior_mask(ds.T, D) & fits["full-info"].evaluated
            dist = relative_l2(fits["missing-link"].values, fits["full-info"].values, mask)
            print(f"{name} interior relative L2 (missing-link vs full-info): {dist:.4f}")
    write_manifest(out, "estimate", args)
    return 0


def _parse_c_grid(text: str) -> np.ndarray:
    try:
        start, stop, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise UsageError(f"--c-grid expects start:stop:step, got {text!r}") from None
    return c_grid(start, stop, step)


def _r_from_series(path, when: date) -> float:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if not reader.fieldnames or "date" not in reader.fieldnames or "R" not in reader.fieldnames:
            raise DataError(f"{path}: expected columns date,R")
        for line, row in enumerate(reader, start=2):
            try:
                if date.fromisoformat(row["date"].strip()) == when:
                    return float(row["R"])
            except ValueError:
                raise DataError(f"{path} line {line}: bad record") from None
    raise DataError(f"{path}: no R value for {when}")


def _forecast_surfaces(args, ds: Dataset, t_star: int):
    if args.estimate:
        if args.mu1 or args.mu2:
            raise UsageError("--estimate cannot be combined with --mu1/--mu2")
        hist = ds.head(t_star)
        mu1, _, _ = _fit(args, hist.infections, hist.infections, args.D1)
        mu2 = None
        if hist.hospitalizations is not None:
            mu2, _, _ = _fit(args, hist.infections, hist.hospitalizations, args.D2)
        return mu1, mu2
    if not args.mu1:
        raise UsageError("forecast needs --mu1 (and optionally --mu2) or --estimate")
    mu1 = IntensitySurface.read_csv(args.mu1)
    mu2 = IntensitySurface.read_csv(args.mu2) if args.mu2 else None
    return mu1, mu2


def cmd_forecast(args) -> int:
    out = Path(args.out_dir)
    sources = [args.c is not None, args.r_target is not None or args.r_series is not None, args.calibrate]
    if sum(sources) != 1:
        raise UsageError("give exactly one of --c, --r-target/--r-series, --calibrate")
    if args.r_target is not None and args.r_series is not None:
        raise UsageError("give exactly one of --r-target and --r-series")
    ds = _load(args)
    t_star = _day_index(ds, args.t_star)
    if not 1 <= t_star <= ds.T:
        raise DataError(f"t* = day {t_star} is outside the data (1..{ds.T})")
    mu1, mu2 = _forecast_surfaces(args, ds, t_star)
    R_now = reproduction_number(mu1, t_star)
    curve = None
    if args.c is not None:
        C = args.c
    elif args.calibrate:
        C, curve = optimal_c(
            mu1, mu2, ds.infections, ds.hospitalizations, t_star, args.h, args.objective, _parse_c_grid(args.c_grid)
        )
    else:
        target = args.r_target
        if target is None:
            when = ds.infections.date_of(t_star + args.h) + timedelta(days=args.shift_days)
            target = _r_from_series(args.r_series, when)
        C = c_from_R(R_now, target)
    res = forecast_counts(mu1, mu2, ds.infections, t_star, args.h, C, immigration_cutoff=args.immigration_cutoff)
    for w in res.warnings:
        print(f"warning: {w}", file=sys.stderr)

    start = ds.start_date
    rows = [
        (int(d), (start + timedelta(days=int(d) - 1)).isoformat(), _fmt(a), _fmt(b))
        for d, a, b in zip(res.days, res.infections_forecast, res.hospitalizations_forecast)
    ]
    write_atomic(out / "forecast.csv", _csv_text(("day", "date", "infections_forecast", "hospitalizations_forecast"), rows))
    if curve is not None:
        write_atomic(out / "error_curve.csv", _csv_text(("C", "sse"), [(_fmt(c), _fmt(s)) for c, s in curve]))
    if args.replicates > 0:
        inf, hosp = sample_paths(mu1, mu2, ds.infections, t_star, args.h, C, args.replicates, args.seed)
        q = (0.05, 0.5, 0.95)
        qi = np.quantile(inf, q, axis=0)
        qh = np.quantile(hosp, q, axis=0)
        rows = [
            [int(d), r[1]] + [_fmt(x) for x in qi[:, k]] + [_fmt(x) for x in qh[:, k]]
            for k, (d, r) in enumerate(zip(res.days, rows))
        ]
        header = ["day", "date", "inf_q05", "inf_q50", "inf_q95", "hosp_q05", "hosp_q50", "hosp_q95"]
        write_atomic(out / "forecast_intervals.csv", _csv_text(header, rows))
    if args.plot:
        _plot(out / "forecast.png", ds, res)
    write_atomic(
        out / "forecast_summary.csv",
        _csv_text(("key", "value"), [("C", _fmt(C)), ("R_at_tstar", _fmt(R_now)), ("t_star", t_star), ("h", args.h)]),
    )
    print(f"C = {C:g}, R(t*) = {R_now:.4f}")
    write_manifest(out, "forecast", args)
    return 0


def _plot(path: Path, ds: Dataset, res) -> None:
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("warning: matplotlib is not installed; skipping --plot", file=sys.stderr)
        return
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.plot(np.arange(1, ds.T + 1), ds.infections.counts, "k.", ms=3, label="observed")
    ax.plot(res.days, res.infections_forecast, "r-", label=f"forecast, C = {res.C_used:g}")
    ax.set_xlabel("day")
    ax.set_ylabel("new infections")
    ax.legend()
    fig.tight_layout()
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".forecast.", suffix=".png", dir=path.parent)
    os.close(fd)
    fig.savefig(tmp)
    plt.close(fig)
    os.replace(tmp, path)


# -- entry point --------------------------------------------------------------


def main(argv: Optional[list] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    threads = getattr(args, "threads", None)
    if threads:
        os.environ[THREADS_ENV] = str(threads)
    try:
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
