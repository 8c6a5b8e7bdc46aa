"""Command-line front end.

Commands: eval (pdf/cdf/survival/hazard table), fit (LSE/MLE/pipeline),
gof (bootstrap KS/CVM), sample (seeded draws), report (descriptive stats +
fit + GOF + plot data, with rendered figures next to the output file).
Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric/estimation
error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

import numpy as np

from . import __version__, dist, gof
from .datasets import BUNDLED, load_dataset, read_data_file
from .estimate import (Dataset, FitOptions, FitResult, ecdf, initial_guess,
                       log_likelihood, lse_fit, mle_fit, pipeline_fit)
from .params import ParamVector, as_theta
from .specfun import DomainError, NumericError

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hextreme",
        description="Six-parameter extreme value H-function distribution toolkit",
    )
    p.add_argument("command", choices=["eval", "fit", "gof", "sample", "report"])
    p.add_argument("--data", dest="data_path", help="one-column text file of positive values")
    p.add_argument("--dataset", choices=BUNDLED, help="bundled dataset name")
    p.add_argument("--submodel", default="gamma",
                   choices=["gamma", "weibull", "frechet", "exponential"],
                   help="sub-model used for initial guesses")
    p.add_argument("--method", default="pipeline", choices=["lse", "mle", "pipeline"])
    p.add_argument("--theta", help="six comma-separated parameter values")
    p.add_argument("--points", help="comma-separated evaluation points (eval)")
    p.add_argument("--n", type=int, default=100, help="number of draws (sample)")
    p.add_argument("--bootstrap-m", type=int, default=500, dest="bootstrap_m")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--out", dest="out_path", help="output file (default stdout)")
    p.add_argument("--format", dest="out_format", default="json", choices=["json", "csv"])
    return p


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        handler = {
            "eval": cmd_eval, "fit": cmd_fit, "gof": cmd_gof,
            "sample": cmd_sample, "report": cmd_report,
        }[args.command]
        return handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"data/domain error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (NumericError, OverflowError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# shared plumbing


def ingest(args) -> Dataset:
    if bool(args.data_path) == bool(args.dataset):
        raise UsageError("exactly one of --data and --dataset is required")
    if args.dataset:
        return load_dataset(args.dataset)
    if not os.path.exists(args.data_path):
        raise DomainError(f"no such file: {args.data_path}")
    return read_data_file(args.data_path)


def _parse_theta(args) -> ParamVector:
    if not args.theta:
        raise UsageError("--theta v1,v2,v3,v4,v5,v6 is required for this command")
    try:
        vals = [float(v) for v in args.theta.split(",")]
    except ValueError as exc:
        raise UsageError(f"--theta must be numeric: {exc}") from None
    if len(vals) != 6:
        raise UsageError(f"--theta needs 6 values, got {len(vals)}")
    return as_theta(vals).require_valid()


def _emit(doc: dict, args) -> None:
    if args.out_format == "json":
        text = json.dumps(doc, indent=2, default=_json_default) + "\n"
        if args.out_path:
            with open(args.out_path, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return
    rows = _flatten_csv(doc)
    if args.out_path:
        with open(args.out_path, "w", newline="") as fh:
            csv.writer(fh).writerows(rows)
    else:
        csv.writer(sys.stdout).writerows(rows)


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def _flatten_csv(doc: dict, prefix: str = "") -> list[list]:
    rows: list[list] = []
    for key, val in doc.items():
        name = f"{prefix}{key}"
        if isinstance(val, dict):
            rows.extend(_flatten_csv(val, prefix=f"{name}."))
        elif isinstance(val, (list, tuple, np.ndarray)):
            arr = np.asarray(val)
            if arr.ndim <= 1:
                rows.append([name, *np.atleast_1d(arr).tolist()])
            else:
                for i, row in enumerate(arr.tolist()):
                    rows.append([f"{name}[{i}]", *row])
        else:
            rows.append([name, val])
    return rows


def _meta(args) -> dict:
    return {"command": args.command, "seed": args.seed, "version": __version__}


def _fit_by_method(data: Dataset, args) -> FitResult:
    opts = FitOptions()
    if args.method == "pipeline":
        return pipeline_fit(data, args.submodel, opts)
    start = initial_guess(data, args.submodel)
    if args.method == "lse":
        return lse_fit(data, start, opts)
    return mle_fit(data, lse_fit(data, start, opts).theta_hat, opts)


def _criteria_doc(loglik: float, n: int) -> dict:
    rep = gof.info_criteria(loglik, 6, n)
    return {"aic": rep.aic, "bic": rep.bic, "edc": rep.edc}


# ---------------------------------------------------------------------------
# commands


def cmd_eval(args) -> int:
    th = _parse_theta(args)
    if args.points:
        try:
            ys = np.array([float(v) for v in args.points.split(",")], dtype=float)
        except ValueError as exc:
            raise UsageError(f"--points must be numeric: {exc}") from None
        if np.any(ys <= 0):
            raise DomainError("evaluation points must be positive")
    else:
        ys = np.linspace(dist.quantile(1e-3, th), dist.quantile(1 - 1e-3, th), 200)
    pdf_v = dist.pdf(ys, th)
    cdf_v = dist.cdf(ys, th)
    surv = 1.0 - cdf_v
    hazard = pdf_v / np.maximum(surv, 1e-300)
    doc = {
        "meta": _meta(args),
        "theta": list(th.as_tuple()),
        "table": {
            "y": ys, "pdf": pdf_v, "cdf": cdf_v,
            "survival": surv, "hazard": hazard,
        },
    }
    _emit(doc, args)
    return EXIT_OK


def cmd_fit(args) -> int:
    data = ingest(args)
    result = _fit_by_method(data, args)
    doc = {
        "meta": _meta(args),
        "dataset": {"name": data.name, "n": data.n},
        "method": result.method,
        "theta_hat": list(result.theta_hat.as_tuple()),
        "loglik": result.loglik,
        "criteria": _criteria_doc(result.loglik, data.n),
        "converged": result.converged,
        "iterations": result.iterations,
        "diagnostics": result.diagnostics,
    }
    _emit(doc, args)
    return EXIT_OK


def cmd_gof(args) -> int:
    data = ingest(args)
    if args.bootstrap_m < 10:
        raise UsageError("--bootstrap-m must be at least 10")
    th = _parse_theta(args) if args.theta else _fit_by_method(data, args).theta_hat
    report = gof.bootstrap_pvalues(data, th, M=args.bootstrap_m, seed=args.seed,
                                   threads=max(args.threads, 1))
    res = np.asarray(report.rq_residuals)
    qq_theory = _normal_qq_theory(data.n)
    doc = {
        "meta": _meta(args),
        "dataset": {"name": data.name, "n": data.n},
        "theta": list(as_theta(th).as_tuple()),
        "gof": {
            "ks": report.ks_stat, "cvm": report.cvm_stat,
            "ks_p": report.ks_pvalue, "cvm_p": report.cvm_pvalue,
            "M": report.bootstrap_M, "failures": report.failures,
            "warning": report.warning,
        },
        "residuals": res,
        "qq": {"theoretical": qq_theory, "sample": np.sort(res)},
    }
    _emit(doc, args)
    return EXIT_OK


def cmd_sample(args) -> int:
    th = _parse_theta(args)
    if args.n < 1:
        raise UsageError("--n must be positive")
    draws = dist.sample(args.n, th, seed=args.seed)
    if args.out_path:
        np.savetxt(args.out_path, draws, fmt="%.17g")
    else:
        for v in draws:
            print(f"{v:.17g}")
    return EXIT_OK


def _normal_qq_theory(n: int) -> np.ndarray:
    from scipy import special as sp

    i = np.arange(1, n + 1)
    return sp.ndtri((i - 0.5) / n)


def _descriptive(data: Dataset) -> dict:
    y = data.values
    m3 = float(np.mean((y - y.mean()) ** 3))
    m4 = float(np.mean((y - y.mean()) ** 4))
    sd = float(np.std(y, ddof=1))
    q1, med, q3 = np.quantile(y, [0.25, 0.5, 0.75])
    return {
        "min": float(y.min()), "q1": float(q1), "median": float(med),
        "mean": float(y.mean()), "q3": float(q3), "max": float(y.max()),
        "sd": sd,
        "cs": m3 / sd**3, "ck": m4 / sd**4 - 3.0,
        "n": data.n,
    }


def cmd_report(args) -> int:
    data = ingest(args)
    sub_theta = initial_guess(data, args.submodel)
    sub_ll = log_likelihood(sub_theta, data)
    if args.theta:
        th = _parse_theta(args)
        ll = log_likelihood(th, data)
        result = None
    else:
        result = _fit_by_method(data, args)
        th = result.theta_hat
        ll = result.loglik
    report = gof.bootstrap_pvalues(data, th, M=args.bootstrap_m, seed=args.seed,
                                   threads=max(args.threads, 1))

    y = data.values
    edges = np.histogram_bin_edges(y, bins="fd")
    counts, _ = np.histogram(y, bins=edges)
    grid = np.linspace(float(y.min()) * 0.5, float(y.max()) * 1.05, 200)
    pdf_grid = dist.pdf(grid, th)
    cdf_grid = dist.cdf(grid, th)
    xs = np.sort(y)
    ecdf_y = ecdf(data)(xs)
    res = np.asarray(report.rq_residuals)
    qq_theory = _normal_qq_theory(data.n)

    doc = {
        "meta": _meta(args),
        "dataset": {"name": data.name, "n": data.n},
        "descriptive": _descriptive(data),
        "submodel": {
            "kind": args.submodel,
            "theta": list(sub_theta.as_tuple()),
            "loglik": sub_ll,
            "criteria": _criteria_doc(sub_ll, data.n),
        },
        "theta_hat": list(th.as_tuple()),
        "loglik": ll,
        "criteria": _criteria_doc(ll, data.n),
        "gof": {
            "ks": report.ks_stat, "cvm": report.cvm_stat,
            "ks_p": report.ks_pvalue, "cvm_p": report.cvm_pvalue,
            "M": report.bootstrap_M, "failures": report.failures,
            "warning": report.warning,
        },
        "residuals": res,
        "plot": {
            "hist_edges": edges, "hist_counts": counts,
            "pdf_grid": np.column_stack([grid, pdf_grid]),
            "cdf_grid": np.column_stack([grid, cdf_grid]),
            "ecdf": np.column_stack([xs, ecdf_y]),
            "qq": np.column_stack([qq_theory, np.sort(res)]),
        },
    }
    _emit(doc, args)
    if args.out_path:
        _render_figures(doc, args.out_path)
    return EXIT_OK


def _render_figures(doc: dict, out_path: str) -> None:
    """Render histogram/ECDF/QQ figures next to the written report."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    stem, _ = os.path.splitext(out_path)
    plot = doc["plot"]
    name = doc["dataset"]["name"]

    fig, ax = plt.subplots(figsize=(6, 4))
    edges = np.asarray(plot["hist_edges"])
    counts = np.asarray(plot["hist_counts"], dtype=float)
    widths = np.diff(edges)
    density = counts / counts.sum() / widths
    ax.bar(edges[:-1], density, width=widths, align="edge",
           color="lightsteelblue", edgecolor="white", label="data")
    pg = np.asarray(plot["pdf_grid"])
    ax.plot(pg[:, 0], pg[:, 1], "k-", label="fitted pdf")
    ax.set_xlabel("y"), ax.set_ylabel("density")
    ax.set_title(f"{name}: histogram and fitted density"), ax.legend()
    fig.savefig(f"{stem}_hist.png", dpi=120, bbox_inches="tight")
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(6, 4))
    ec = np.asarray(plot["ecdf"])
    cg = np.asarray(plot["cdf_grid"])
    ax.step(ec[:, 0], ec[:, 1], where="post", label="ECDF")
    ax.plot(cg[:, 0], cg[:, 1], "k-", label="fitted CDF")
    ax.set_xlabel("y"), ax.set_ylabel("G(y)")
    ax.set_title(f"{name}: empirical vs fitted CDF"), ax.legend()
    fig.savefig(f"{stem}_cdf.png", dpi=120, bbox_inches="tight")
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(5, 5))
    qq = np.asarray(plot["qq"])
    ax.plot(qq[:, 0], qq[:, 1], "o", ms=3)
    lim = [qq.min() - 0.5, qq.max() + 0.5]
    ax.plot(lim, lim, "k--", lw=1)
    ax.set_xlabel("theoretical normal quantiles")
    ax.set_ylabel("sample quantiles")
    ax.set_title(f"{name}: RQ residual QQ plot")
    fig.savefig(f"{stem}_qq.png", dpi=120, bbox_inches="tight")
    plt.close(fig)


if __name__ == "__main__":
    sys.exit(main())
