"""End-to-end sweep over windows and lags.

For every lag ``delta`` and window ``w`` the sweep computes the real transfer
entropy matrix and the matrices of the phase-randomized surrogates. Once all
windows are done, each real matrix is filtered against the surrogate values
pooled over the bracketing windows and summarized into a ``WindowReport``.

Output layout (``out/``)::

    manifest.json                 config, version, input checksum, windows, failures
    timings.json                  wall-clock seconds per (delta, window)
    reports.csv                   w,center_date,delta,total_flow,drift,link_ratio
    delta_XX/reports.csv          same rows for one lag
    delta_XX/directionality.csv   w x ticker
    delta_XX/ranking.csv          stocks by overall influence
    delta_XX/real/wNNNN.csv       raw transfer entropy (row = source)
    delta_XX/surrogate/wNNNN_rRR.csv
    delta_XX/flow/wNNNN.csv       filtered weights
"""
from __future__ import annotations

import csv
import dataclasses
import hashlib
import io
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import factorial
from pathlib import Path
from typing import Mapping

import numpy as np

from . import __version__
from .entropy import TEMatrix, counts_from_codes, te_from_counts
from .market_data import (DEFAULT_COVERAGE, PriceSeries, enumerate_windows, load_price_csv,
                          presence_matrix, union_calendar, window_slice)
from .metrics import WindowReport, directionality, influence_ranking, total_flow, window_drift
from .surrogate import DOMAINS, randomize_prices, seed_for
from .symbolic import pattern_codes
from .validation import (DEFAULT_A, DEFAULT_BRACKET, DEFAULT_LINK_THRESHOLD, DEFAULT_R_STAR,
                         FlowMatrix, benchmark_pool, flow_matrix, link_count_ratio)

logger = logging.getLogger(__name__)

ANALYSIS_DOMAINS = ("returns", "prices")


@dataclass
class RunConfig:
    input: str | None = None
    window_length: int = 500
    window_shift: int = 25
    k: int = 2
    deltas: tuple = tuple(range(1, 11))
    coverage: float = DEFAULT_COVERAGE
    a: float = DEFAULT_A
    r_star: float = DEFAULT_R_STAR
    bracket: int = DEFAULT_BRACKET
    link_threshold: float = DEFAULT_LINK_THRESHOLD
    n_realizations: int = 1
    surrogate_domain: str = "log-price"
    seed: int = 0
    domain: str = "returns"
    out: str | None = None
    n_jobs: int = 1

    def __post_init__(self):
        self.deltas = tuple(int(d) for d in self.deltas)
        if not self.deltas or min(self.deltas) < 1:
            raise ValueError("deltas must be positive integers")
        if self.domain not in ANALYSIS_DOMAINS:
            raise ValueError(f"domain must be one of {ANALYSIS_DOMAINS}")
        if self.surrogate_domain not in DOMAINS:
            raise ValueError(f"surrogate domain must be one of {DOMAINS}")
        if self.n_realizations < 1:
            raise ValueError("n_realizations must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def snapshot(self) -> dict:
        """Settings that determine the results (paths and job count excluded)."""
        d = dataclasses.asdict(self)
        for key in ("input", "out", "n_jobs"):
            d.pop(key)
        d["deltas"] = list(self.deltas)
        return d


# config-file key -> RunConfig field
CONFIG_KEYS = {
    "input": "input",
    "out": "out",
    "window.length": "window_length",
    "window.shift": "window_shift",
    "k": "k",
    "delta": "deltas",
    "coverage": "coverage",
    "validation.a": "a",
    "validation.r_star": "r_star",
    "validation.bracket": "bracket",
    "validation.link_threshold": "link_threshold",
    "surrogate.n_realizations": "n_realizations",
    "surrogate.domain": "surrogate_domain",
    "seed": "seed",
    "domain": "domain",
    "n_jobs": "n_jobs",
}


def parse_deltas(text: str) -> tuple:
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, hi = part.split("-")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return tuple(out)


def parse_config(text: str, **overrides) -> RunConfig:
    """Build a ``RunConfig`` from ``key = value`` lines (``#`` starts a comment)."""
    fields = {f.name: f for f in dataclasses.fields(RunConfig)}
    kwargs = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        kwargs[CONFIG_KEYS[key]] = value
    kwargs.update({k: v for k, v in overrides.items() if v is not None})
    for name, value in list(kwargs.items()):
        if not isinstance(value, str):
            continue
        ftype = fields[name].type
        if name == "deltas":
            kwargs[name] = parse_deltas(value)
        elif ftype == "int":
            kwargs[name] = int(value)
        elif ftype == "float":
            kwargs[name] = float(value)
    return RunConfig(**kwargs)


def load_config(path, **overrides) -> RunConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"), **overrides)


@dataclass
class WindowUnit:
    """Inputs of one (window, delta) computation."""

    window: int
    delta: int
    mask: np.ndarray
    values: np.ndarray


@dataclass
class UnitResult:
    window: int
    delta: int
    real: TEMatrix
    surrogates: list
    seconds: float = 0.0
    error: str | None = None


@dataclass
class RunResult:
    config: RunConfig
    tickers: list
    windows: list
    real: dict = field(default_factory=dict)        # delta -> [TEMatrix per window]
    surrogates: dict = field(default_factory=dict)  # delta -> [[TEMatrix per realization] per window]
    flows: dict = field(default_factory=dict)       # delta -> [FlowMatrix per window]
    reports: dict = field(default_factory=dict)     # delta -> [WindowReport per window]
    failures: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)


def _transform(seq: np.ndarray, delta: int, domain: str) -> np.ndarray:
    if domain == "prices":
        return seq
    if not np.all(seq > 0):
        raise ValueError("non-positive price")
    lp = np.log(seq)
    return lp[delta:] - lp[:-delta]


def window_te(mask: np.ndarray, values: np.ndarray, k: int, delta: int, domain: str = "returns",
              min_coverage: float = DEFAULT_COVERAGE, window: int = 0) -> TEMatrix:
    """Transfer entropy matrix of one window from calendar-placed prices.

    Each pair is restricted to its common days, transformed (log returns at
    lag ``delta`` or raw prices) and symbolized. Symbol streams are cached per
    (stock, common-day set), so a stock trading on every day of the window is
    symbolized once.
    """
    n, length = mask.shape
    nf, nk = factorial(k + 1), factorial(k)
    cache: dict = {}

    def streams(i, common):
        full = common is None
        key = (i, None) if full else (i, common.tobytes())
        if key not in cache:
            seq = values[i] if full else values[i, common]
            try:
                s = _transform(seq, delta, domain)
                m = s.size - k * delta
                if m < 1:
                    raise ValueError("insufficient samples")
                cache[key] = (pattern_codes(s, k + 1, delta)[-m:], pattern_codes(s, k, delta)[:m])
            except ValueError:
                cache[key] = None
        return cache[key]

    full_rows = mask.all(axis=1)
    te = np.full((n, n), np.nan)
    valid = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            if full_rows[i] and full_rows[j]:
                common = None
            else:
                common = mask[i] & mask[j]
                if common.sum() / length < min_coverage:
                    continue
                if common.all():
                    common = None
            si, sj = streams(i, common), streams(j, common)
            if si is None or sj is None:
                continue
            # target first: flow j -> i lands in te[j, i]
            for src, dst, tgt, drv in ((j, i, si, sj), (i, j, sj, si)):
                v = te_from_counts(counts_from_codes(tgt[0], tgt[1], drv[1], nf, nk))
                assert v >= 0.0
                te[src, dst] = v
                valid[src, dst] = True
    return TEMatrix(te, valid, window, delta, k)


def surrogate_values(mask: np.ndarray, values: np.ndarray, seed: int, window: int, realization: int,
                     domain: str = "log-price") -> np.ndarray:
    """Calendar-placed surrogate prices; each stock's own observations are
    randomized independently."""
    out = np.full(values.shape, np.nan)
    for i in range(values.shape[0]):
        obs = values[i, mask[i]]
        if obs.size < 2:
            continue
        rng = np.random.default_rng(seed_for(seed, window, i, realization))
        out[i, mask[i]] = randomize_prices(obs, rng, domain).values
    return out


def compute_unit(unit: WindowUnit, config: RunConfig) -> UnitResult:
    start = time.perf_counter()
    n = unit.mask.shape[0]
    try:
        real = window_te(unit.mask, unit.values, config.k, unit.delta, config.domain,
                         config.coverage, unit.window)
        surr = []
        for r in range(config.n_realizations):
            sv = surrogate_values(unit.mask, unit.values, config.seed, unit.window, r,
                                  config.surrogate_domain)
            surr.append(window_te(unit.mask, sv, config.k, unit.delta, config.domain,
                                  config.coverage, unit.window))
        error = None
    except Exception as exc:  # one bad unit must not abort the sweep
        logger.exception("window %d delta %d failed", unit.window, unit.delta)
        blank = TEMatrix(np.full((n, n), np.nan), np.zeros((n, n), bool), unit.window, unit.delta, config.k)
        real, surr, error = blank, [], f"{type(exc).__name__}: {exc}"
    return UnitResult(unit.window, unit.delta, real, surr, time.perf_counter() - start, error)


def _compute_unit_star(args):
    return compute_unit(*args)


def summarize(config: RunConfig, windows, real: list, surrogates: list, delta: int, failures=None):
    """Flow matrices and reports of one lag from its raw matrices."""
    failures = [] if failures is None else failures
    flows = []
    for w, te in enumerate(real):
        pool = benchmark_pool(surrogates, w, config.bracket)
        try:
            flows.append(flow_matrix(te, pool, config.a, config.r_star))
        except ValueError as exc:
            failures.append({"delta": delta, "window": w, "stage": "validation", "error": str(exc)})
            flows.append(FlowMatrix(np.zeros(te.values.shape), te.valid.copy(), w, delta,
                                    config.a, config.r_star))
    reports = []
    for w, F in enumerate(flows):
        pool_size = len(benchmark_pool(surrogates, w, config.bracket))
        link = (link_count_ratio(real[w], surrogates[w], config.link_threshold)
                if surrogates[w] else None)
        reports.append(WindowReport(
            window=w,
            center_date=str(windows[w]["center"]),
            delta=delta,
            total_flow=total_flow(F),
            drift=window_drift(F, flows[w + 1]) if w + 1 < len(flows) else None,
            directionality=directionality(F),
            link_ratio=link,
            n_valid=int(real[w].valid.sum()),
            pool_size=pool_size,
        ))
    return flows, reports


def _window_meta(windows) -> list:
    return [{"w": s.index, "start": str(s.first_date), "center": str(s.center_date),
             "end": str(s.last_date)} for s in windows]


def input_checksum(path) -> str | None:
    if path is None:
        return None
    path = Path(path)
    h = hashlib.sha256()
    files = sorted(path.glob("*.csv")) if path.is_dir() else [path]
    for f in files:
        h.update(f.name.encode())
        h.update(f.read_bytes())
    return h.hexdigest()


def run(config: RunConfig, series: Mapping[str, PriceSeries] | None = None) -> RunResult:
    """Run the full sweep.

    ``series`` overrides ``config.input``. When ``config.out`` is set every
    artifact is written there; the in-memory result is returned either way.
    """
    if series is None:
        if config.input is None:
            raise ValueError("no input given")
        series, diagnostics = load_price_csv(config.input)
    tickers = sorted(series)
    calendar = union_calendar(series[t] for t in tickers)
    windows = enumerate_windows(calendar, config.window_length, config.window_shift)
    result = RunResult(config, tickers, _window_meta(windows))
    if not windows:
        logger.warning("no complete window; nothing to do")

    units = []
    for spec in windows:
        mask, values = presence_matrix([window_slice(series[t], spec) for t in tickers], spec)
        for delta in config.deltas:
            units.append(WindowUnit(spec.index, delta, mask, values))

    if config.n_jobs > 1 and len(units) > 1:
        with ProcessPoolExecutor(config.n_jobs) as pool:
            outcomes = list(pool.map(_compute_unit_star, [(u, config) for u in units], chunksize=4))
    else:
        outcomes = [compute_unit(u, config) for u in units]

    for delta in config.deltas:
        result.real[delta] = [None] * len(windows)
        result.surrogates[delta] = [None] * len(windows)
        result.timings[delta] = [0.0] * len(windows)
    for res in outcomes:
        result.real[res.delta][res.window] = res.real
        result.surrogates[res.delta][res.window] = res.surrogates
        result.timings[res.delta][res.window] = res.seconds
        if res.error:
            result.failures.append({"delta": res.delta, "window": res.window,
                                    "stage": "entropy", "error": res.error})
    for delta in config.deltas:
        flows, reports = summarize(config, result.windows, result.real[delta],
                                   result.surrogates[delta], delta, result.failures)
        result.flows[delta], result.reports[delta] = flows, reports

    if config.out is not None:
        write_outputs(result, Path(config.out))
    return result


def run_prices_variant(config: RunConfig, series=None) -> RunResult:
    """Same sweep with symbols taken from closing prices instead of returns."""
    return run(dataclasses.replace(config, domain="prices"), series)


# ---------------------------------------------------------------- serialization

def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return "" if not np.isfinite(v) else repr(float(v))
    return str(v)


def matrix_to_csv(matrix: np.ndarray, tickers, valid=None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(tickers)
    for i, row in enumerate(matrix):
        writer.writerow(_fmt(float(v)) if valid is None or valid[i, j] else ""
                        for j, v in enumerate(row))
    return buf.getvalue()


def matrix_from_csv(text: str):
    """Inverse of :func:`matrix_to_csv`: ``(tickers, values, valid)``."""
    rows = list(csv.reader(io.StringIO(text)))
    tickers = rows[0]
    values = np.array([[float(c) if c else np.nan for c in r] for r in rows[1:]], dtype=float)
    values = values.reshape(len(tickers), len(tickers))
    return tickers, values, np.isfinite(values)


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="")


def _ddir(out: Path, delta: int) -> Path:
    return out / f"delta_{delta:02d}"


REPORT_COLUMNS = ["w", "center_date", "delta", "total_flow", "drift", "link_ratio"]


def _report_rows(reports):
    return [[r.window, r.center_date, r.delta, _fmt(r.total_flow), _fmt(r.drift),
             _fmt(r.link_ratio)] for r in reports]


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def write_rollups(out: Path, tickers, windows, deltas, reports: dict):
    all_rows = []
    for delta in deltas:
        rows = _report_rows(reports[delta])
        all_rows.extend(rows)
        d = _ddir(out, delta)
        _write(d / "reports.csv", _csv(REPORT_COLUMNS, rows))
        _write(d / "directionality.csv", _csv(
            ["w", "center_date"] + list(tickers),
            [[r.window, r.center_date] + [_fmt(float(v)) for v in r.directionality]
             for r in reports[delta]]))
        if reports[delta]:
            totals = np.sum([r.directionality for r in reports[delta]], axis=0)
            order = influence_ranking(reports[delta])
            _write(d / "ranking.csv", _csv(
                ["rank", "ticker", "total_directionality"],
                [[rank + 1, tickers[i], _fmt(float(totals[i]))] for rank, i in enumerate(order)]))
    _write(out / "reports.csv", _csv(REPORT_COLUMNS, all_rows))


def write_outputs(result: RunResult, out: Path):
    out.mkdir(parents=True, exist_ok=True)
    cfg = result.config
    for delta in cfg.deltas:
        d = _ddir(out, delta)
        for w, te in enumerate(result.real[delta]):
            _write(d / "real" / f"w{w:04d}.csv", matrix_to_csv(te.values, result.tickers, te.valid))
            for r, s in enumerate(result.surrogates[delta][w]):
                _write(d / "surrogate" / f"w{w:04d}_r{r:02d}.csv",
                       matrix_to_csv(s.values, result.tickers, s.valid))
            F = result.flows[delta][w]
            _write(d / "flow" / f"w{w:04d}.csv", matrix_to_csv(F.weights, result.tickers, F.valid))
    write_rollups(out, result.tickers, result.windows, cfg.deltas, result.reports)
    manifest = {
        "code_version": __version__,
        "config": cfg.snapshot(),
        "input_checksum": input_checksum(cfg.input),
        "tickers": result.tickers,
        "windows": result.windows,
        "failures": sorted(result.failures, key=lambda f: (f["delta"], f["window"], f["stage"])),
    }
    _write(out / "manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    timings = {str(d): [round(t, 6) for t in ts] for d, ts in result.timings.items()}
    _write(out / "timings.json", json.dumps(timings, indent=2) + "\n")


def report(out) -> dict:
    """Recompute flows and roll-ups from the matrices cached under ``out``."""
    out = Path(out)
    manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
    snap = dict(manifest["config"])
    snap["deltas"] = tuple(snap["deltas"])
    config = RunConfig(**snap)
    windows = manifest["windows"]
    tickers = manifest["tickers"]
    reports = {}
    for delta in config.deltas:
        d = _ddir(out, delta)
        real, surr = [], []
        for w in range(len(windows)):
            _, values, valid = matrix_from_csv((d / "real" / f"w{w:04d}.csv").read_text(encoding="utf-8"))
            real.append(TEMatrix(values, valid, w, delta, config.k))
            reps = []
            for path in sorted((d / "surrogate").glob(f"w{w:04d}_r*.csv")):
                _, sv, sm = matrix_from_csv(path.read_text(encoding="utf-8"))
                reps.append(TEMatrix(sv, sm, w, delta, config.k))
            surr.append(reps)
        flows, reports[delta] = summarize(config, windows, real, surr, delta)
        for w, F in enumerate(flows):
            _write(d / "flow" / f"w{w:04d}.csv", matrix_to_csv(F.weights, tickers, F.valid))
    write_rollups(out, tickers, windows, config.deltas, reports)
    return reports
