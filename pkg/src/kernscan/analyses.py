"""The ``stats`` analyses, each reading a db and writing one CSV table."""

from __future__ import annotations

import datetime as dt
import os
from collections import Counter
from dataclasses import dataclass

from . import ingest
from .checkers import KIND_NAMES, read_results, validate_kinds
from .pipeline import (
    MissingInput,
    _read_jsonl,
    counts_by,
    histories,
    is_fault_fn,
    load_commits,
    load_db_manifest,
    load_snapshot,
    try_fault_sites,
)
from .stats import (
    EQUAL_COUNT,
    MIDPOINT,
    Item,
    bucketize,
    censor_config,
    churn_regression,
    commitment,
    commitment_distribution,
    fault_rate,
    km_estimate,
    lifespans,
    logseries_fit,
    pearson,
    relative_rate,
    write_table,
)

ANALYSES = ("rate", "relative", "buckets", "logseries", "survival", "churn", "commitment", "pearson")
BUCKET_KEYS = ("size", "age")


@dataclass
class StatOptions:
    version: str | None = None
    kinds: tuple[str, ...] = KIND_NAMES
    strategy: str = EQUAL_COUNT
    buckets: int = 4
    key: str = "size"
    censor: str = MIDPOINT
    bands: bool = False
    commits: str | None = None
    age_source: str = "versions"
    as_of: dt.date | None = None
    packet: int = 10


def _stats_path(db: str, name: str) -> str:
    return os.path.join(db, "stats", name + ".csv")


def _meta(db, opts: StatOptions, sites, **extra) -> dict:
    meta = {
        "fault_source": "annotated" if sites is not None else "all reports",
        "checkers": list(opts.kinds),
    }
    if opts.version:
        meta["version"] = opts.version
    meta.update(extra)
    return meta


def _version(db: str, opts: StatOptions) -> str:
    names = load_db_manifest(db).names
    v = opts.version or names[-1]
    if v not in names:
        raise ValueError(f"unknown version {v!r}; known: {', '.join(names)}")
    return v


def stat_rate(db: str, opts: StatOptions) -> str:
    sites = try_fault_sites(db)
    rows = []
    versions = [opts.version] if opts.version else load_db_manifest(db).names
    for v in versions:
        c = counts_by(db, v, sites, lambda x: x.checker)
        for k in opts.kinds:
            f, n = c.get(k, (0, 0))
            r = fault_rate(f, n)
            rows.append([v, k, f, n, r.rate, r.empty])
    return write_table(_stats_path(db, "rate"), ["version", "checker", "faults", "notes", "fault_rate", "no_notes"],
                       rows, _meta(db, opts, sites))


def stat_relative(db: str, opts: StatOptions) -> str:
    sites = try_fault_sites(db)
    rows = []
    versions = [opts.version] if opts.version else load_db_manifest(db).names
    selected = set(opts.kinds)
    for v in versions:
        c = counts_by(db, v, sites, lambda x: ingest.dir_class(x.file) if x.checker in selected else None)
        c.pop(None, None)
        for d in sorted(c):
            try:
                rel = relative_rate(d, c)
            except ValueError:
                rel = None
            rows.append([v, d, c[d][0], c[d][1], fault_rate(*c[d]).rate, rel])
    return write_table(_stats_path(db, "relative"),
                       ["version", "dir", "faults", "notes", "fault_rate", "relative_rate"], rows,
                       _meta(db, opts, sites, pooling="selected checkers pooled"))


def _function_items(db: str, v: str, opts: StatOptions, sites) -> list[Item]:
    selected = set(opts.kinds)
    fault = is_fault_fn(db, v, sites)
    reports, _ = read_results(db, v)
    per_fn = Counter((r.file, r.fn) for r in reports if r.checker in selected and fault(r))
    items = []
    for row in _read_jsonl(os.path.join(db, v, "functions.jsonl")):
        notes = sum(n for k, n in row["notes"].items() if k in selected)
        if notes:
            key = (row["file"], row["fn"])
            items.append(Item(row["size"], per_fn.get(key, 0), notes, f"{row['file']}:{row['fn']}"))
    return items


def _file_items(db: str, v: str, opts: StatOptions, sites) -> list[Item]:
    manifest = load_db_manifest(db)
    snaps = {name: load_snapshot(db, name) for name in manifest.names}
    first_seen = None
    if opts.age_source == "commits":
        first_seen = ingest.commit_stats(load_commits(opts.commits), manifest).first_seen
    ages = ingest.file_ages(manifest, snaps, first_seen, opts.age_source)[v]
    selected = set(opts.kinds)
    c = counts_by(db, v, sites, lambda x: x.file if x.checker in selected else None)
    c.pop(None, None)
    return [Item(ages[f], fc, n, f) for f, (fc, n) in sorted(c.items()) if n and f in ages]


def stat_buckets(db: str, opts: StatOptions) -> str:
    if opts.key not in BUCKET_KEYS:
        raise ValueError(f"bucket key must be one of {', '.join(BUCKET_KEYS)}")
    sites = try_fault_sites(db)
    v = _version(db, opts)
    items = _function_items(db, v, opts, sites) if opts.key == "size" else _file_items(db, v, opts, sites)
    b = bucketize(items, opts.strategy, opts.buckets)
    rows = [[i + 1, len(bk.members), bk.min_key, bk.max_key, bk.fault_count, bk.note_count, bk.rate]
            for i, bk in enumerate(b.buckets)]
    name = f"buckets_{opts.key}_{opts.strategy}"
    return write_table(_stats_path(db, name),
                       ["bucket", "items", "min_key", "max_key", "faults", "notes", "fault_rate"], rows,
                       _meta(db, opts, sites, version=v, key=opts.key, strategy=opts.strategy,
                             items="functions with notes" if opts.key == "size" else "files with notes"))


def faults_per_file(db: str, v: str, kinds, sites) -> Counter:
    selected = set(kinds)
    fault = is_fault_fn(db, v, sites)
    reports, _ = read_results(db, v)
    per_file = Counter(r.file for r in reports if r.checker in selected and fault(r))
    return Counter(per_file.values())


def stat_logseries(db: str, opts: StatOptions) -> str:
    sites = try_fault_sites(db)
    v = _version(db, opts)
    hist = faults_per_file(db, v, opts.kinds, sites)
    if not hist:
        raise ValueError(f"no faults in {v}")
    fit = logseries_fit(hist)
    rows = [[k, obs, exp] for k, obs, exp in fit.bins]
    return write_table(_stats_path(db, "logseries"), ["k_from", "observed", "expected"], rows,
                       _meta(db, opts, sites, version=v, theta=fit.theta, chi2=fit.chi2, dof=fit.dof,
                             p_value=fit.p_value, n=fit.n, boundary=fit.boundary,
                             histogram={str(k): hist[k] for k in sorted(hist)},
                             binning="last bin open-ended; bins with expected < 5 merged backward"))


def stat_survival(db: str, opts: StatOptions) -> str:
    manifest = load_db_manifest(db)
    dates = {v.name: v.date for v in manifest.versions}
    selected = set(opts.kinds)
    hs = [h for h in histories(db, manifest) if h.checker in selected]
    cfg = censor_config(opts.censor, manifest.versions[0].date)
    obs = lifespans(hs, dates, cfg)
    if not obs:
        raise ValueError("no fault histories under this censoring mode")
    curve = km_estimate(obs, bands=opts.bands)
    header = ["time_years", "survival", "at_risk", "events"]
    rows = [[0.0, 1.0, len(obs), 0]]
    if opts.bands:
        header += ["lower", "upper"]
        rows[0] += [1.0, 1.0]
    for st in curve.steps:
        row = [st.time, st.survival, st.at_risk, st.events]
        if opts.bands:
            row += [st.lower, st.upper]
        rows.append(row)
    extra = {
        "censor_mode": cfg.mode, "horizon_date": cfg.horizon_date.isoformat(),
        "midpoint_date": cfg.midpoint_date.isoformat(), "mean_years": curve.mean,
        "mean_kind": "restricted to the largest observed time", "bound_years": curve.bound,
        "median_years": curve.median, "no_events": curve.no_events, "histories": len(obs),
    }
    if opts.bands:
        extra["bands"] = "Greenwood 95% pointwise (a convention, not a reproduction)"
    return write_table(_stats_path(db, f"survival_{cfg.mode}"), header, rows, _meta(db, opts, None, **extra))


def stat_churn(db: str, opts: StatOptions) -> str:
    manifest = load_db_manifest(db)
    per = ingest.commit_stats(load_commits(opts.commits), manifest).per_version
    hs = histories(db, manifest)
    selected = set(opts.kinds)
    born = Counter(h.birth_version for h in hs if h.checker in selected)
    points, labels = [], []
    for prev, cur in zip(manifest.versions, manifest.versions[1:]):
        days = (cur.date - prev.date).days
        churn = sum(per[cur.name].churn.values()) if cur.name in per else 0
        points.append((churn / days, born.get(cur.name, 0) / days))
        labels.append(cur.name)
    packet_fits, overall = churn_regression(points, opts.packet)
    rows = []
    pos = 0
    for i, fit in enumerate(packet_fits):
        rows.append([i + 1, labels[pos], labels[pos + fit.n - 1], fit.n, fit.slope, fit.r2, fit.adj_r2])
        pos += fit.n
    rows.append(["all", labels[0], labels[-1], overall.n, overall.slope, overall.r2, overall.adj_r2])
    return write_table(_stats_path(db, "churn"),
                       ["packet", "first_version", "last_version", "points", "slope", "r2", "adj_r2"], rows,
                       _meta(db, opts, None, model="y = a x through the origin",
                             x="commits touching files per day", y="new faults per day",
                             points=[[l, x, y] for l, (x, y) in zip(labels, points)]))


def stat_commitment(db: str, opts: StatOptions) -> str:
    manifest = load_db_manifest(db)
    commits = load_commits(opts.commits)
    as_of = opts.as_of or manifest.versions[-1].date
    by_dev = ingest.developer_commits([c for c in commits if c.commit_date <= as_of])
    if not by_dev:
        raise ValueError(f"no commits on or before {as_of}")
    scores = {d: commitment(ds, as_of) for d, ds in by_dev.items()}
    dist = commitment_distribution(scores, {d: len(ds) for d, ds in by_dev.items()})
    rows = [[p, n] for p, n in dist.items()]
    return write_table(_stats_path(db, "commitment"), ["percentile", "commits"], rows,
                       _meta(db, opts, None, as_of=as_of.isoformat(), developers=len(scores),
                             max_score=max(scores.values())))


def stat_pearson(db: str, opts: StatOptions) -> str:
    manifest = load_db_manifest(db)
    selected = set(opts.kinds)
    rows, xs, ys = [], [], []
    for v in manifest.names:
        loc = load_snapshot(db, v).c_loc
        _, notes = read_results(db, v)
        n = sum(1 for x in notes if x.checker in selected)
        rows.append([v, loc, n])
        xs.append(loc)
        ys.append(n)
    r = pearson(xs, ys) if len(xs) >= 2 else float("nan")
    return write_table(_stats_path(db, "pearson"), ["version", "c_loc", "notes"], rows,
                       _meta(db, opts, None, pearson_r=r, series="c_loc vs notes per version"))


_RUNNERS = {
    "rate": stat_rate, "relative": stat_relative, "buckets": stat_buckets, "logseries": stat_logseries,
    "survival": stat_survival, "churn": stat_churn, "commitment": stat_commitment, "pearson": stat_pearson,
}


def run_stat(name: str, db: str, opts: StatOptions) -> str:
    if name not in _RUNNERS:
        raise ValueError(f"unknown analysis {name!r}")
    opts.kinds = validate_kinds(opts.kinds)
    return _RUNNERS[name](db, opts)


__all__ = ["ANALYSES", "BUCKET_KEYS", "MissingInput", "StatOptions", "faults_per_file", "run_stat"]
