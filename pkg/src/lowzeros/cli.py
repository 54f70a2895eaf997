"""Command-line entry point: ``lowzeros <subcommand> ...``.

Exit codes: 0 success, 2 invalid input, 3 numerical-consistency failure.
CSV output writes numbers with 12 significant digits; JSON keeps the
shortest round-trip repr.  Every report starts by echoing its inputs.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import analysis, bounds, extremal
from .arith import require_odd_prime
from .characters import make_character
from .lfunc import MissingZeroError, NumericalConsistencyError, TrackingError
from .zerocache import ZeroStore

log = logging.getLogger("lowzeros")

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 2, 3
NUMERICAL_ERRORS = (NumericalConsistencyError, MissingZeroError, TrackingError, ArithmeticError)
REPORT_BETAS = (0.2, 0.25, 0.26, 0.3, 0.4, 0.5, 0.55, 0.6, 0.75, 0.909, 1.0, 1.5, 2.0, 3.0)


@dataclass
class RunConfig:
    command: str
    qs: list[int] = field(default_factory=list)
    t: float | None = None
    t0: float | None = None
    h: float | None = None
    delta: float | None = None
    betas: list[float] = field(default_factory=list)
    height: float | None = None
    sign: str = "both"
    bound: str | None = None
    f: str | None = None
    g: str | None = None
    lo: float | None = None
    hi: float | None = None
    table: str = "x"
    points: int = 401
    j: int | None = None
    tolerance: float = analysis.IDENTITY_TOL
    delta_cap: float = extremal.DELTA_MAX_DEFAULT
    cache_dir: str | None = None
    out: str = "csv"

    def echo(self) -> dict:
        keep = ECHO_FIELDS[self.command]
        return {k: v for k, v in asdict(self).items() if k in keep and v not in (None, [], "")}


ECHO_FIELDS = {
    "zeros": ("command", "qs", "height", "cache_dir"),
    "stats": ("command", "qs", "t", "t0", "h", "betas", "tolerance", "cache_dir"),
    "explicit-check": ("command", "qs", "j", "delta", "t", "t0", "sign", "height", "delta_cap", "cache_dir"),
    "bounds": ("command", "bound", "qs", "t", "delta", "betas"),
    "crossings": ("command", "f", "g", "lo", "hi"),
    "extremal": ("command", "delta", "t", "t0", "table", "points", "delta_cap"),
    "proportion": ("command", "betas"),
}


# ---------------------------------------------------------------- emission

def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        return f"{v:.12g}"
    return str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return None if math.isnan(v) or math.isinf(v) else v
    return v


def emit(cfg: RunConfig, rows: list[dict], extra: dict | None = None, stream=None) -> None:
    stream = stream or sys.stdout
    if cfg.out == "json":
        doc = {"command": cfg.command, "config": cfg.echo(), "rows": rows}
        if extra:
            doc.update(extra)
        stream.write(json.dumps(_jsonable(doc), indent=2, sort_keys=False) + "\n")
        return
    buf = io.StringIO()
    echo = " ".join(f"{k}={_fmt(v) if not isinstance(v, list) else ','.join(_fmt(x) for x in v)}"
                    for k, v in cfg.echo().items())
    buf.write(f"# lowzeros {echo}\n")
    if rows:
        cols = list(rows[0].keys())
        for r in rows[1:]:
            cols += [c for c in r if c not in cols]
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([_fmt(r.get(c)) for c in cols])
    for k, v in (extra or {}).items():
        if isinstance(v, list):
            for item in v:
                buf.write(f"# {k}: " + " ".join(f"{a}={_fmt(b)}" for a, b in item.items()) + "\n")
        else:
            buf.write(f"# {k}: {_fmt(v)}\n")
    stream.write(buf.getvalue())


# ---------------------------------------------------------------- commands

def _default_t(q: int, beta: float = 0.3) -> float:
    return 2 * math.pi * beta / math.log(q)


def run_zeros(cfg: RunConfig, stream=None) -> int:
    store = ZeroStore(cfg.cache_dir)
    H = cfg.height if cfg.height is not None else 10.0
    if H <= 0:
        raise ValueError("--height must be positive")
    rows, status = [], EXIT_OK
    for q in cfg.qs:
        try:
            q = require_odd_prime(q)
        except ValueError as exc:
            print(f"error: modulus {q}: {exc}", file=sys.stderr)
            status = EXIT_VALIDATION
            continue
        mz = store.ensure(q, -H, H)
        for j in range(1, q - 1):
            g = mz.gammas(j)
            g = g[np.abs(g) <= H]
            rows.append({"q": q, "j": j, "height": H, "zero_count": len(g),
                         "min_abs_gamma": float(np.min(np.abs(g))) if len(g) else math.nan})
    emit(cfg, rows, stream=stream)
    return status


def _stats_row(q: int, cfg: RunConfig, store: ZeroStore) -> dict:
    betas = cfg.betas or list(analysis.DEFAULT_BETAS)
    if cfg.t0 is not None:
        if cfg.h is None:
            raise ValueError("--t0 needs --h")
        es = analysis.shifted_ensemble_stats(q, cfg.t0, cfg.h, betas, store, identity_tol=cfg.tolerance)
        row = es.as_dict()
        row.pop("proportion")
    else:
        T = cfg.t if cfg.t is not None else _default_t(q)
        es = analysis.ensemble_stats(q, T, betas, store, identity_tol=cfg.tolerance)
        row = es.as_dict()
        row.pop("proportion")
        row.pop("T0")
        t1 = bounds.thm1_bound(q, T)
        d = math.log(q) / (2 * math.pi)
        ip, im = bounds.thm2_integrals(T, d)
        t2 = bounds.thm2_bound(q, T, d, ip, im)
        row.update({
            "thm1": t1.value, "thm1_grh_explicit": t1.info["grh_explicit"],
            "thm2": t2.value, "thm2_grh_explicit": t2.info["grh_explicit"],
            "mean_within_thm1": abs(es.mean_tilde_s) <= t1.value,
            "mean_square_within_thm2": es.mean_square_tilde_s <= t2.value,
        })
    for b, v in es.proportion.items():
        row[f"proportion_{_fmt(b)}"] = v
    return row


def run_stats(cfg: RunConfig, stream=None) -> int:
    store = ZeroStore(cfg.cache_dir)
    rows = [_stats_row(require_odd_prime(q), cfg, store) for q in cfg.qs]
    emit(cfg, rows, stream=stream)
    return EXIT_OK


def _signs(s: str) -> list[int]:
    return {"plus": [1], "minus": [-1], "both": [1, -1]}[s]


def run_explicit(cfg: RunConfig, stream=None) -> int:
    if cfg.delta is None or cfg.t is None:
        raise ValueError("explicit-check needs --delta and --t")
    H = cfg.height if cfg.height is not None else 40.0
    store = ZeroStore(cfg.cache_dir)
    rows, status = [], EXIT_OK
    for q in cfg.qs:
        q = require_odd_prime(q)
        mz = store.ensure(q, -H, H)
        js = [cfg.j] if cfg.j is not None else range(1, q - 1)
        for j in js:
            chi = make_character(q, j)
            for s in _signs(cfg.sign):
                p = extremal.ExtremalParams(cfg.delta, cfg.t, cfg.t0 or 0.0, s, cfg.delta_cap)
                r = analysis.explicit_formula_check(chi, p, H, mz)
                ok = abs(r.residual) <= r.tail_bound
                if not ok:
                    status = EXIT_NUMERICAL
                rows.append({
                    "q": q, "j": j, "sign": "plus" if s > 0 else "minus", "delta": cfg.delta,
                    "half_length": cfg.t, "T0": cfg.t0 or 0.0, "truncation_height": H,
                    "zero_side": r.zero_side, "main_term": r.main_term, "gamma_term": r.gamma_term,
                    "prime_term": r.prime_term, "residual": r.residual, "tail_bound": r.tail_bound,
                    "zero_count": r.zero_count, "flagged": not ok,
                })
    emit(cfg, rows, stream=stream)
    return status


def _report_row(rep: bounds.BoundReport) -> dict:
    row = {"bound": rep.name, **rep.inputs, "value": rep.value}
    for k, v in rep.components.items():
        row[f"{k} [{rep.labels[k]}]"] = v
    for k, v in rep.info.items():
        if isinstance(v, (int, float, bool, np.floating)):
            row[f"info:{k}"] = v
    return row


def run_bounds(cfg: RunConfig, stream=None) -> int:
    b = cfg.bound
    rows = []
    if b in ("cor2", "shifted", "hr", "zhao"):
        if not cfg.betas:
            raise ValueError(f"--bound {b} needs --beta")
        for beta in cfg.betas:
            if b == "cor2":
                rows.append(_report_row(bounds.cor2_lower_bound(beta)))
            elif b == "shifted":
                rows.append(_report_row(bounds.shifted_cor_bound(beta)))
            elif b == "hr":
                rows.append({"bound": "hr", "beta": beta, "value": bounds.hr_bound(beta)})
            else:
                c, bstar = bounds.zhao_constants()
                rows.append({"bound": "zhao", "beta": beta, "value": bounds.zhao_bound(beta),
                             "info:constant": c, "info:switch_point": bstar})
    elif b in ("thm1", "thm2"):
        if not cfg.qs:
            raise ValueError(f"--bound {b} needs --q")
        for q in cfg.qs:
            q = require_odd_prime(q)
            Ts = [cfg.t] if cfg.t is not None else [_default_t(q, x) for x in (cfg.betas or [0.3])]
            for T in Ts:
                if b == "thm1":
                    rows.append(_report_row(bounds.thm1_bound(q, T)))
                else:
                    d = cfg.delta if cfg.delta is not None else math.log(q) / (2 * math.pi)
                    ip, im = bounds.thm2_integrals(T, d)
                    rows.append(_report_row(bounds.thm2_bound(q, T, d, ip, im)))
    else:
        raise ValueError(f"unknown bound {b!r}")
    emit(cfg, rows, stream=stream)
    return EXIT_OK


def run_crossings(cfg: RunConfig, stream=None) -> int:
    lo = cfg.lo if cfg.lo is not None else 0.51
    hi = cfg.hi if cfg.hi is not None else 0.9
    x = bounds.crossing_finder(cfg.f, cfg.g, lo, hi)
    emit(cfg, [{"f": cfg.f, "g": cfg.g, "lo": lo, "hi": hi, "beta": x}], stream=stream)
    return EXIT_OK


def run_extremal(cfg: RunConfig, stream=None) -> int:
    if cfg.delta is None or cfg.t is None:
        raise ValueError("extremal needs --delta and --t")
    t0 = cfg.t0 or 0.0
    plus = extremal.ExtremalParams(cfg.delta, cfg.t, t0, 1, cfg.delta_cap)
    minus = plus.flipped()
    rows = []
    if cfg.table == "x":
        span = cfg.t + 4.0 / cfg.delta
        xs = np.linspace(t0 - span, t0 + span, cfg.points)
        rp, rm = extremal.selberg_r_real(plus, xs), extremal.selberg_r_real(minus, xs)
        ind = extremal.indicator(plus, xs)
        for i, x in enumerate(xs):
            rows.append({"x": x, "R_plus": rp[i], "R_minus": rm[i], "indicator": ind[i]})
    else:
        us = np.linspace(-1.25 * cfg.delta, 1.25 * cfg.delta, cfg.points)
        vp, _ = extremal.fourier_r_many(plus, us)
        vm, _ = extremal.fourier_r_many(minus, us)
        for i, u in enumerate(us):
            rows.append({"u": u, "re_plus": vp[i].real, "im_plus": vp[i].imag,
                         "re_minus": vm[i].real, "im_minus": vm[i].imag})
    emit(cfg, rows, stream=stream)
    return EXIT_OK


def run_report(cfg: RunConfig, stream=None) -> int:
    """Comparison of the proportion lower bounds plus their crossing points."""
    rows = []
    for beta in cfg.betas or REPORT_BETAS:
        row = {"beta": beta}
        row["cor2"] = bounds.cor2_lower_bound(beta).value if beta > 0.25 else None
        row["shifted"] = bounds.shifted_cor_bound(beta).value if beta > 0.25 else None
        row["hr"] = bounds.hr_bound(beta) if beta != 0.5 else None
        row["zhao"] = bounds.zhao_bound(beta) if beta > 0.5 else None
        rows.append(row)
    c, bstar = bounds.zhao_constants()
    crossings = [
        {"f": "zhao", "g": "cor2", "beta": bounds.crossing_finder("zhao", "cor2", 0.51, 0.9)},
        {"f": "hr", "g": "zero", "beta": bounds.crossing_finder("hr", "zero", 0.51, 0.9)},
    ]
    extra = {"crossings": crossings, "zhao_constant": c, "zhao_switch_point": bstar,
             "hr_limit": 1 - (3 + math.pi**2) / (12 * math.pi**2)}
    emit(cfg, rows, extra, stream=stream)
    return EXIT_OK


COMMANDS = {
    "zeros": run_zeros, "stats": run_stats, "explicit-check": run_explicit, "bounds": run_bounds,
    "crossings": run_crossings, "extremal": run_extremal, "proportion": run_report,
}


# ---------------------------------------------------------------- parsing

def _float_list(s: str) -> list[float]:
    return [float(x) for x in s.split(",") if x.strip()]


def _q_range(s: str) -> list[int]:
    from .arith import is_prime

    a, b = (int(x) for x in s.split(":"))
    return [q for q in range(max(a, 3), b + 1) if q % 2 and is_prime(q)]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lowzeros", description="Low-lying zeros of Dirichlet L-functions mod q.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", choices=("csv", "json"), default="csv")
        sp.add_argument("--cache-dir", default=None)
        sp.add_argument("--tolerance", type=float, default=analysis.IDENTITY_TOL)
        sp.add_argument("--delta-cap", type=float, default=extremal.DELTA_MAX_DEFAULT)

    def qflags(sp):
        sp.add_argument("--q", type=int, nargs="+", default=[])
        sp.add_argument("--q-range", type=_q_range, default=None, help="a:b, all odd primes in [a, b]")

    sp = sub.add_parser("zeros", help="locate zeros and fill the cache")
    qflags(sp)
    sp.add_argument("--height", type=float, default=10.0)
    common(sp)

    sp = sub.add_parser("stats", help="ensemble statistics with the mean / mean-square bounds")
    qflags(sp)
    sp.add_argument("--t", type=float)
    sp.add_argument("--t0", type=float)
    sp.add_argument("--h", type=float)
    sp.add_argument("--beta", type=_float_list, default=[])
    common(sp)

    sp = sub.add_parser("explicit-check", help="both sides of the explicit formula for R+-")
    qflags(sp)
    sp.add_argument("--j", type=int)
    sp.add_argument("--delta", type=float, required=True)
    sp.add_argument("--t", type=float, required=True, help="half length of the interval")
    sp.add_argument("--t0", type=float)
    sp.add_argument("--sign", choices=("plus", "minus", "both"), default="both")
    sp.add_argument("--height", type=float, default=40.0)
    common(sp)

    sp = sub.add_parser("bounds", help="evaluate a named bound")
    qflags(sp)
    sp.add_argument("--bound", choices=("thm1", "thm2", "cor2", "hr", "zhao", "shifted"), required=True)
    sp.add_argument("--beta", type=_float_list, default=[])
    sp.add_argument("--t", type=float)
    sp.add_argument("--delta", type=float)
    common(sp)

    sp = sub.add_parser("crossings", help="crossing point of two proportion bounds")
    sp.add_argument("--f", choices=bounds.BOUND_IDS, required=True)
    sp.add_argument("--g", choices=bounds.BOUND_IDS, required=True)
    sp.add_argument("--lo", type=float, default=0.51)
    sp.add_argument("--hi", type=float, default=0.9)
    common(sp)

    sp = sub.add_parser("extremal", help="tables of R+-, the indicator and their transforms")
    sp.add_argument("--delta", type=float, required=True)
    sp.add_argument("--t", type=float, required=True, help="half length of the interval")
    sp.add_argument("--t0", type=float)
    sp.add_argument("--table", choices=("x", "u"), default="x")
    sp.add_argument("--points", type=int, default=401)
    common(sp)

    sp = sub.add_parser("proportion", help="comparison table of the proportion lower bounds")
    sp.add_argument("--beta", type=_float_list, default=[])
    common(sp)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    qs = list(getattr(ns, "q", []) or [])
    if getattr(ns, "q_range", None):
        qs += [q for q in ns.q_range if q not in qs]
    cfg = RunConfig(command=ns.command, qs=qs)
    for name in ("t", "t0", "h", "delta", "height", "sign", "bound", "f", "g", "lo", "hi", "table",
                 "points", "j", "tolerance", "delta_cap", "cache_dir", "out"):
        if hasattr(ns, name) and getattr(ns, name) is not None:
            setattr(cfg, name, getattr(ns, name))
    cfg.betas = list(getattr(ns, "beta", []) or [])
    return cfg


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    cfg = config_from_args(ns)
    if cfg.command in ("zeros", "stats", "explicit-check") and not cfg.qs:
        print("error: give at least one modulus with --q or --q-range", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        return COMMANDS[cfg.command](cfg)
    except ZeroDivisionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NUMERICAL_ERRORS as exc:
        print(f"numerical consistency failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
