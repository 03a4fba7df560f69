"""End-to-end analysis: CSV ingestion, original + surrogate runs, JSON report
and tidy plot-data exports.

The JSON report is the single source of truth; CSV views and the text tables
are projections of it. Timings are kept out of the report so that identical
inputs produce byte-identical reports.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import time
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .core import SeriesKind, TimeSeries, describe, log_returns, profile
from .errors import (
    MultifractalError,
    ParseError,
    ScaleTooLargeError,
    UnknownViewError,
    ZeroVarianceError,
)
from .fluctuation import DetrendConfig, fluctuation_surface
from .scaling import DEFAULT_Q_GRID, HurstSpectrum, default_scales, delta_h, fit_hurst, legendre, log_scales, tau
from .segmentation import Method, overlap_for_scale
from .surrogate import SurrogateConfig, SurrogateMode, make_surrogate

SCHEMA = "bimfdfa.report/1"
VIEWS = ("fluctuation", "hurst", "tau", "spectrum")
NARROW_Q_RANGE = (-10.0, 10.0)


class ConfigError(MultifractalError):
    pass


@dataclass(frozen=True)
class AnalysisConfig:
    method: str = "both"
    order: int = 1
    q_grid: tuple = DEFAULT_Q_GRID
    scales: tuple | None = None  # (s_min, s_max, count); None -> defaults from N
    overlap_frac: float = 0.25
    surrogates: tuple = ("shuffle", "phase_single_angle")
    replicates: int = 10
    seed: int = 0
    fisher_yates: bool = False
    swap_factor: int = 20
    column: str | int = -1
    kind: str = "price"
    delimiter: str = ","
    fit_ranges: tuple = ()  # extra/explicit (s_min, s_max) fits; first one is primary

    def __post_init__(self):
        if self.method not in ("mfdfa", "biosw", "both"):
            raise ConfigError(f"--method must be mfdfa, biosw or both, not {self.method!r}")
        try:
            DetrendConfig(self.order)
        except MultifractalError as exc:
            raise ConfigError(str(exc)) from None
        q = tuple(float(v) for v in self.q_grid)
        if len(q) < 3 or any(b <= a for a, b in zip(q, q[1:])):
            raise ConfigError("--q-grid needs at least 3 strictly increasing values")
        if not all(math.isfinite(v) for v in q):
            raise ConfigError("--q-grid values must be finite")
        object.__setattr__(self, "q_grid", q)
        if self.scales is not None:
            lo, hi, count = (int(v) for v in self.scales)
            if lo < max(4, self.order + 2):
                raise ConfigError(f"--scales minimum must be >= {max(4, self.order + 2)} for order {self.order}")
            if hi < lo or count < 4:
                raise ConfigError("--scales needs min <= max and count >= 4")
            object.__setattr__(self, "scales", (lo, hi, count))
        if not 0.0 < float(self.overlap_frac) < 0.5:
            raise ConfigError("--overlap-frac must lie in (0, 0.5) so that 0 < l < s/2")
        modes = []
        for m in self.surrogates:
            try:
                modes.append(SurrogateMode(m).value)
            except ValueError:
                raise ConfigError(f"unknown surrogate mode {m!r}") from None
        if len(set(modes)) != len(modes):
            raise ConfigError("duplicate surrogate mode")
        object.__setattr__(self, "surrogates", tuple(modes))
        if int(self.replicates) < 1:
            raise ConfigError("--replicates must be >= 1")
        if int(self.swap_factor) < 1:
            raise ConfigError("swap factor must be >= 1")
        try:
            SeriesKind(self.kind)
        except ValueError:
            raise ConfigError(f"--kind must be price, return or generic, not {self.kind!r}") from None
        if len(self.delimiter) != 1:
            raise ConfigError("--delimiter must be a single character")
        ranges = tuple((int(a), int(b)) for a, b in self.fit_ranges)
        if any(b <= a for a, b in ranges):
            raise ConfigError("each --fit-range needs min < max")
        object.__setattr__(self, "fit_ranges", ranges)

    @property
    def methods(self) -> tuple[Method, ...]:
        if self.method == "both":
            return (Method.MFDFA, Method.BIOSW)
        return (Method(self.method),)

    def to_json(self) -> dict:
        d = asdict(self)
        d["q_grid"] = list(self.q_grid)
        d["scales"] = None if self.scales is None else list(self.scales)
        d["surrogates"] = list(self.surrogates)
        d["fit_ranges"] = [list(r) for r in self.fit_ranges]
        return d

    @classmethod
    def from_json(cls, d: dict) -> "AnalysisConfig":
        d = dict(d)
        d["q_grid"] = tuple(d["q_grid"])
        d["scales"] = None if d.get("scales") is None else tuple(d["scales"])
        d["surrogates"] = tuple(d["surrogates"])
        d["fit_ranges"] = tuple(tuple(r) for r in d.get("fit_ranges", ()))
        return cls(**d)


# ---------------------------------------------------------------- ingestion


def _parse_float(text: str) -> float:
    v = float(text)
    if not math.isfinite(v):
        raise ValueError(text)
    return v


def ingest(path, config: AnalysisConfig = AnalysisConfig()) -> tuple[TimeSeries, dict]:
    """Read one column of a CSV into a TimeSeries.

    The header row is optional: if the first non-blank row does not parse as a
    number in the selected column it is taken as the header. ``column`` is a
    header name or a 0-based index (negative counts from the right). Prices are
    converted to log returns. Returns the analysed series and an info dict for
    the report.
    """
    path = Path(path)
    raw = path.read_bytes()  # FileNotFoundError propagates
    text = raw.decode("utf-8-sig")
    rows = [(i + 1, r) for i, r in enumerate(csv.reader(io.StringIO(text), delimiter=config.delimiter))]
    rows = [(ln, r) for ln, r in rows if r and any(c.strip() for c in r)]
    if not rows:
        raise ParseError(f"{path}: no data rows", row=None)

    col = config.column
    first_ln, first = rows[0]
    header = None
    if isinstance(col, str) and not _is_int(col):
        header = [c.strip() for c in first]
        if col not in header:
            raise ParseError(f"{path}: column {col!r} not in header {header}", row=first_ln)
        idx = header.index(col)
        rows = rows[1:]
    else:
        idx = int(col)
        try:
            _parse_float(first[idx].strip())
        except (ValueError, IndexError):
            header = [c.strip() for c in first]
            rows = rows[1:]

    values = []
    for ln, r in rows:
        try:
            cell = r[idx]
        except IndexError:
            raise ParseError(f"{path}: row {ln} has no column {col!r}", row=ln, column=col) from None
        try:
            values.append(_parse_float(cell.strip()))
        except ValueError:
            raise ParseError(f"{path}: row {ln}, column {col!r}: cannot parse {cell!r} as a finite number",
                             row=ln, column=col) from None

    kind = SeriesKind(config.kind)
    label = header[idx] if header is not None and -len(header) <= idx < len(header) else path.stem
    series = TimeSeries(values, label=label, kind=kind)
    info = {
        "file": path.name,
        "sha256": hashlib.sha256(raw).hexdigest(),
        "column": label,
        "kind": kind.value,
        "n_input": len(series),
        "log_returns_applied": kind is SeriesKind.PRICE,
    }
    if kind is SeriesKind.PRICE:
        series = log_returns(series)
    info["n_analyzed"] = len(series)
    return series, info


def _is_int(text: str) -> bool:
    try:
        int(text)
    except ValueError:
        return False
    return True


# ---------------------------------------------------------------- analysis


def _scales_for(config: AnalysisConfig, n: int, method: Method) -> np.ndarray:
    if config.scales is None:
        scales = default_scales(n, config.order)
    else:
        scales = log_scales(*config.scales)
    limit = n // 4 if method is Method.MFDFA else n // 2
    if scales.size == 0 or scales.max() > limit:
        raise ScaleTooLargeError(
            f"largest scale {int(scales.max()) if scales.size else '-'} exceeds the {method.value} limit "
            f"{limit} for a series of {n} samples"
        )
    if scales.size < 4:
        raise ConfigError(f"scale grid {scales.tolist()} has fewer than 4 distinct scales")
    return scales


def _replicate_seed(master: int, variant_index: int, replicate: int) -> int:
    ss = np.random.SeedSequence(int(master) & (2**64 - 1), spawn_key=(variant_index, replicate))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _jnum(x):
    x = float(x)
    return x if math.isfinite(x) else None


def _jlist(a):
    return [_jnum(v) for v in np.asarray(a, dtype=float).reshape(-1)]


def _analyse_variant(series_list, method, q_grid, scales, config, fit_ranges):
    """Fluctuation surfaces and spectra for one method over >= 1 replicate series."""
    cfg = DetrendConfig(config.order)
    surfaces = [
        fluctuation_surface(profile(s), method, q_grid, scales, config.overlap_frac, cfg) for s in series_list
    ]
    primary = fit_ranges[0]
    fits = [fit_hurst(sf, primary, drop_flagged=True) for sf in surfaces]
    h = np.mean([f.h for f in fits], axis=0)
    r2 = np.mean([f.r2 for f in fits], axis=0)
    used = fits[0].scales_used
    spec = HurstSpectrum(q_grid=np.asarray(q_grid), h=h, r2=r2, scale_range=primary, scales_used=used)
    tau_ = tau(spec)
    leg = legendre(spec)
    rep_dh = [delta_h(f) for f in fits]

    flagged = sorted({pair for sf in surfaces for pair in sf.flagged_pairs})
    with np.errstate(divide="ignore", invalid="ignore"):
        log_f = np.mean([np.log(sf.values) for sf in surfaces], axis=0)

    extra = []
    for lo_hi in fit_ranges[1:]:
        ef = [fit_hurst(sf, lo_hi, drop_flagged=True) for sf in surfaces]
        extra.append({
            "fit_range": list(lo_hi),
            "scales_used": [int(s) for s in ef[0].scales_used],
            "h": _jlist(np.mean([f.h for f in ef], axis=0)),
            "r2": _jlist(np.mean([f.r2 for f in ef], axis=0)),
        })

    result = {
        "fit_range": list(primary),
        "scales_used": [int(s) for s in used],
        "h": _jlist(spec.h),
        "r2": _jlist(spec.r2),
        "hurst_h2": _jnum(spec.at(2.0)) if 2.0 in spec.q_grid else None,
        "tau": _jlist(tau_.tau),
        "alpha": _jlist(leg.alpha),
        "f_alpha": _jlist(leg.f_alpha),
        "delta_h": _jnum(delta_h(spec)),
        "delta_h_q10": _narrow_delta_h(spec),
        "delta_alpha": _jnum(leg.width),
        "replicate_delta_h": {
            "values": _jlist(rep_dh),
            "mean": _jnum(np.mean(rep_dh)),
            "min": _jnum(np.min(rep_dh)),
            "max": _jnum(np.max(rep_dh)),
        },
        "flagged": [[q, s] for q, s in flagged],
        "fluctuation": {
            "scales": [int(s) for s in scales],
            "window_counts": [int(c) for c in surfaces[0].window_counts],
            "Fq": [_jlist(np.exp(row)) for row in log_f],
        },
        "extra_fits": extra,
    }
    if method is Method.BIOSW:
        result["fluctuation"]["overlap"] = [overlap_for_scale(int(s), config.overlap_frac) for s in scales]
    return result


def _narrow_delta_h(spec: HurstSpectrum):
    q = spec.q_grid
    keep = (q >= NARROW_Q_RANGE[0]) & (q <= NARROW_Q_RANGE[1])
    if keep.sum() < 2:
        return None
    return _jnum(delta_h(spec, NARROW_Q_RANGE))


def run(series: TimeSeries, config: AnalysisConfig = AnalysisConfig(), input_info: dict | None = None):
    """Analyse the original series and its surrogates with every requested method.

    Returns ``(report, timings)``: the JSON-ready report dict and a dict of
    wall-clock seconds per stage (kept separate so reports stay reproducible).
    """
    timings = {}
    t0 = time.perf_counter()
    n = len(series)
    q_grid = np.asarray(config.q_grid, dtype=float)
    try:
        stats = describe(series).as_dict()
    except ZeroVarianceError:
        stats = None
    timings["describe"] = time.perf_counter() - t0

    variants = [("original", [series])]
    for vi, mode in enumerate(config.surrogates, start=1):
        t = time.perf_counter()
        reps = []
        for r in range(int(config.replicates)):
            scfg = SurrogateConfig(
                seed=_replicate_seed(config.seed, vi, r),
                mode=mode,
                swap_factor=config.swap_factor,
                fisher_yates=config.fisher_yates,
            )
            reps.append(make_surrogate(series, scfg))
        variants.append((mode, reps))
        timings[f"surrogate:{mode}"] = time.perf_counter() - t

    results = []
    scales_by_method = {}
    for method in config.methods:
        scales = _scales_for(config, n, method)
        scales_by_method[method.value] = [int(s) for s in scales]
        fit_ranges = list(config.fit_ranges) or [(int(scales.min()), int(scales.max()))]
        for name, reps in variants:
            t = time.perf_counter()
            res = _analyse_variant(reps, method, q_grid, scales, config, fit_ranges)
            timings[f"{method.value}:{name}"] = time.perf_counter() - t
            results.append({"method": method.value, "variant": name, "replicates": len(reps), **res})

    report = {
        "schema": SCHEMA,
        "tool": {"name": "bimfdfa", "version": __version__},
        "config": config.to_json(),
        "input": input_info or {"label": series.label, "kind": series.kind.value, "n_analyzed": n},
        "stats": stats,
        "q_grid": [float(q) for q in q_grid],
        "scales": scales_by_method,
        "results": results,
    }
    timings["total"] = time.perf_counter() - t0
    return report, timings


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=False, allow_nan=False) + "\n"


# ---------------------------------------------------------------- exports

_HEADERS = {
    "fluctuation": ["method", "variant", "q", "s", "Fq"],
    "hurst": ["method", "variant", "q", "h", "r2"],
    "tau": ["method", "variant", "q", "tau"],
    "spectrum": ["method", "variant", "q", "alpha", "f_alpha"],
}


def _rows(report: dict, which: str):
    q_grid = report["q_grid"]
    for res in report["results"]:
        key = (res["method"], res["variant"])
        if which == "fluctuation":
            fl = res["fluctuation"]
            for i, q in enumerate(q_grid):
                for j, s in enumerate(fl["scales"]):
                    yield (*key, q, s, fl["Fq"][i][j])
        elif which == "hurst":
            for q, h, r2 in zip(q_grid, res["h"], res["r2"]):
                yield (*key, q, h, r2)
        elif which == "tau":
            for q, t in zip(q_grid, res["tau"]):
                yield (*key, q, t)
        else:
            for q, a, f in zip(q_grid, res["alpha"], res["f_alpha"]):
                yield (*key, q, a, f)


def export_plot_data(report: dict, which, out_dir) -> list[Path]:
    """Write one tidy CSV per requested view; ``which`` is a view name, a list
    of names, or ``"all"``."""
    if isinstance(which, str):
        which = VIEWS if which == "all" else (which,)
    for w in which:
        if w not in VIEWS:
            raise UnknownViewError(f"unknown view {w!r}; choose from {', '.join(VIEWS)}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for w in which:
        p = out_dir / f"{w}.csv"
        with open(p, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(_HEADERS[w])
            for row in _rows(report, w):
                writer.writerow(["" if v is None else v for v in row])
        paths.append(p)
    return paths


# ---------------------------------------------------------------- text summary


def summary(report: dict) -> str:
    """Plain-text tables: descriptive stats, h(q) per method/variant, and the
    multifractality degree (delta h, delta alpha) per variant."""
    out = io.StringIO()
    inp = report["input"]
    out.write(f"input: {inp.get('file', inp.get('label', ''))}  samples analysed: {inp.get('n_analyzed')}")
    if inp.get("log_returns_applied"):
        out.write(f"  (log returns of {inp['n_input']} prices)")
    out.write("\n\n")
    st = report["stats"]
    if st is not None:
        out.write("Descriptive statistics\n")
        out.write(f"{'N':>8} {'mean':>12} {'min':>12} {'max':>12} {'skewness':>10} {'kurtosis':>10}\n")
        out.write(f"{st['n']:>8d} {st['mean']:>12.4g} {st['min']:>12.4g} {st['max']:>12.4g} "
                  f"{st['skewness']:>10.4f} {st['kurtosis']:>10.4f}\n\n")

    results = report["results"]
    cols = [f"{r['method']}/{r['variant']}" for r in results]
    width = max(12, *(len(c) + 1 for c in cols))
    out.write("Generalised Hurst exponent h(q)\n")
    out.write(f"{'q':>7}" + "".join(f"{c:>{width}}" for c in cols) + "\n")
    for i, q in enumerate(report["q_grid"]):
        out.write(f"{q:>7g}" + "".join(f"{_fmt(r['h'][i]):>{width}}" for r in results) + "\n")
    out.write(f"{'dh':>7}" + "".join(f"{_fmt(r['delta_h']):>{width}}" for r in results) + "\n\n")

    out.write("Multifractality degree\n")
    out.write(f"{'method':<8}{'variant':<22}{'dh':>10}{'dh[-10,10]':>12}{'dalpha':>10}{'H=h(2)':>10}\n")
    for r in results:
        out.write(f"{r['method']:<8}{r['variant']:<22}{_fmt(r['delta_h']):>10}{_fmt(r['delta_h_q10']):>12}"
                  f"{_fmt(r['delta_alpha']):>10}{_fmt(r['hurst_h2']):>10}\n")
    flagged = [(r["method"], r["variant"], len(r["flagged"])) for r in results if r["flagged"]]
    for m, v, k in flagged:
        out.write(f"warning: {m}/{v}: {k} divergent (q, s) pairs excluded from the fit (see report 'flagged')\n")
    return out.getvalue()


def _fmt(v) -> str:
    return "nan" if v is None else f"{v:.4f}"


def write_outputs(report: dict, timings: dict, out_dir, views="all") -> dict:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    report_path = out_dir / "report.json"
    report_path.write_text(dumps(report), encoding="utf-8")
    (out_dir / "timings.json").write_text(json.dumps(timings, indent=2) + "\n", encoding="utf-8")
    csvs = export_plot_data(report, views, out_dir) if views else []
    return {"report": report_path, "timings": out_dir / "timings.json", "csv": csvs}
