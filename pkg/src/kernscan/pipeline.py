"""End-to-end orchestration over an output root ("db").

Layout of the db::

    manifest.json
    <version>/snapshot.jsonl          scanned files with LOC and hashes
    <version>/functions.jsonl         one row per function: size and note counts
    <version>/closures.jsonl
    <version>/<Kind>.reports.jsonl
    <version>/<Kind>.notes.jsonl
    correlations/<a>__<b>.jsonl
    groups.jsonl
    annotations.jsonl
    worksheet.txt
    stats/*.csv, report/*.csv         each with a .json sidecar

Nothing written depends on the location of the db itself, so two runs on
the same inputs produce identical trees.
"""

from __future__ import annotations

import json
import os
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

from . import ingest
from .checkers import KIND_NAMES, CheckResult, check_models, function_notes, read_results, write_results
from .cmodel import FunctionModel, model_file
from .config import DEFAULT_CONFIG, CheckerConfig
from .history import (
    FAULT,
    Annotation,
    Correlation,
    FaultHistory,
    apply_worksheet,
    build_histories,
    correlate,
    diff_files,
    dump_groups,
    dump_store,
    effective,
    export_worksheet,
    load_groups,
    parse_store,
    reset_relinked,
    track_groups,
)
from .stats import (
    CENSOR_MODES,
    MIDPOINT,
    censor_config,
    density_per_kloc,
    fault_rate,
    km_estimate,
    lifespans,
    relative_rate,
    write_table,
)


class MissingInput(Exception):
    """An input needed by one table or analysis is absent."""


def _write(path: str, text: str) -> None:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _read(path: str) -> str:
    if not os.path.exists(path):
        raise MissingInput(path)
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _jsonl(rows: Iterable[dict]) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in rows)


def _read_jsonl(path: str) -> list[dict]:
    return [json.loads(l) for l in _read(path).splitlines() if l.strip()]


# ---------------------------------------------------------------------------
# check


@dataclass(frozen=True)
class Diagnostic:
    file: str
    line: int
    message: str

    def __str__(self) -> str:
        return f"{self.file}:{self.line}: {self.message}"


@dataclass
class CheckSummary:
    version: str
    files: int
    functions: int
    reports: int
    diagnostics: list[Diagnostic] = field(default_factory=list)
    truncated: list[str] = field(default_factory=list)

    @property
    def error_count(self) -> int:
        return len(self.diagnostics) + len(self.truncated)


def _parse_one(args: tuple[str, str]) -> tuple[list[FunctionModel], list[tuple[int, str]]]:
    root, rel = args
    diags: list = []
    models = model_file(ingest.read_source(root, rel), rel, diags)
    return models, [(d.line, d.message) for d in diags]


def parse_tree(root: str, paths: list[str], jobs: int = 1):
    """Models and diagnostics of every file, in path order whatever *jobs* is."""
    work = [(root, p) for p in paths]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_parse_one, work, chunksize=max(1, len(work) // (4 * jobs))))
    else:
        results = [_parse_one(w) for w in work]
    models: list[FunctionModel] = []
    diags: list[Diagnostic] = []
    for path, (ms, ds) in zip(paths, results):
        models.extend(ms)
        diags.extend(Diagnostic(path, line, msg) for line, msg in ds)
    return models, diags


def function_rows(models: list[FunctionModel], result: CheckResult, config: CheckerConfig) -> list[dict]:
    """Per (file, function): size, notes and reports by kind."""
    rows: dict[tuple[str, str], dict] = {}
    for m in models:
        row = rows.setdefault((m.file, m.name), {
            "file": m.file, "fn": m.name, "line": m.start_line, "size": 0, "notes": {}, "reports": {},
        })
        # #if arms can define one function twice; keep the larger body
        row["size"] = max(row["size"], m.size)
        for n in function_notes(m, result.closures, config):
            row["notes"][n.checker] = row["notes"].get(n.checker, 0) + 1
    for r in result.reports:
        row = rows.get((r.file, r.fn))
        if row is not None:
            row["reports"][r.checker] = row["reports"].get(r.checker, 0) + 1
    out = []
    for key in sorted(rows):
        row = rows[key]
        row["notes"] = dict(sorted(row["notes"].items()))
        row["reports"] = dict(sorted(row["reports"].items()))
        out.append(row)
    return out


def save_manifest(db: str, manifest: ingest.VersionManifest) -> None:
    _write(os.path.join(db, "manifest.json"), ingest.dump_manifest(manifest))


def load_db_manifest(db: str) -> ingest.VersionManifest:
    path = os.path.join(db, "manifest.json")
    if not os.path.exists(path):
        raise MissingInput(path)
    return ingest.parse_manifest(_read(path))


def check_version(
    version: ingest.Version,
    db: str,
    config: CheckerConfig = DEFAULT_CONFIG,
    kinds: Iterable[str] = KIND_NAMES,
    jobs: int = 1,
) -> CheckSummary:
    kinds = tuple(kinds)
    snap = ingest.scan_snapshot(version)
    paths = [f.path for f in snap.files]
    models, diags = parse_tree(version.root, paths, jobs)
    diags.extend(Diagnostic(p, 0, f"unreadable: {why}") for p, why in snap.skipped)
    result = check_models(models, config, kinds=kinds)
    vdir = os.path.join(db, version.name)
    write_results(db, version.name, result, kinds)
    _write(os.path.join(vdir, "snapshot.jsonl"), snap.to_jsonl())
    _write(os.path.join(vdir, "closures.jsonl"), result.closures.to_jsonl())
    _write(os.path.join(vdir, "functions.jsonl"), _jsonl(function_rows(models, result, config)))
    return CheckSummary(version.name, len(paths), len(models), len(result.reports), diags, result.truncated)


def load_snapshot(db: str, version: str) -> ingest.Snapshot:
    return ingest.Snapshot.from_jsonl(version, _read(os.path.join(db, version, "snapshot.jsonl")))


# ---------------------------------------------------------------------------
# correlate and triage


def correlation_path(db: str, a: str, b: str) -> str:
    return os.path.join(db, "correlations", f"{a}__{b}.jsonl")


def file_hunks(old_v: ingest.Version, new_v: ingest.Version, old: ingest.Snapshot, new: ingest.Snapshot,
               files: Iterable[str]):
    old_hash = {f.path: f.content_hash for f in old.files}
    new_hash = {f.path: f.content_hash for f in new.files}
    hunks = {}
    for path in sorted(set(files)):
        if path not in old_hash or path not in new_hash:
            continue
        if old_hash[path] == new_hash[path]:
            hunks[path] = None
        else:
            hunks[path] = diff_files(ingest.read_source(old_v.root, path), ingest.read_source(new_v.root, path))
    return hunks


@dataclass
class CorrelateSummary:
    pairs: dict[tuple[str, str], Counter]
    births: dict[str, int]
    groups: int
    reset: int
    worksheet_records: int


def correlate_all(db: str, manifest: ingest.VersionManifest | None = None) -> CorrelateSummary:
    manifest = manifest or load_db_manifest(db)
    names = manifest.names
    reports = {v: read_results(db, v)[0] for v in names}
    for v in names:
        if not os.path.isdir(os.path.join(db, v)):
            raise MissingInput(os.path.join(db, v))
    snaps = {v: load_snapshot(db, v) for v in names}
    all_corr: dict[tuple[str, str], list[Correlation]] = {}
    pairs, births = {}, {names[0]: len(reports[names[0]])}
    for a, b in zip(manifest.versions, manifest.versions[1:]):
        files = {r.file for r in reports[a.name]}
        hunks = file_hunks(a, b, snaps[a.name], snaps[b.name], files)
        corr, born = correlate(reports[a.name], reports[b.name], hunks)
        all_corr[(a.name, b.name)] = corr
        _write(correlation_path(db, a.name, b.name), _jsonl(c.to_json() for c in corr))
        pairs[(a.name, b.name)] = Counter(c.mode for c in corr)
        births[b.name] = len(born)
    groups = track_groups(names, reports, all_corr)
    groups_path = os.path.join(db, "groups.jsonl")
    previous = load_groups(_read(groups_path)) if os.path.exists(groups_path) else {}
    _write(groups_path, dump_groups(groups))
    store_path = os.path.join(db, "annotations.jsonl")
    records = parse_store(_read(store_path)) if os.path.exists(store_path) else []
    reset = reset_relinked(groups, records, previous)
    records += reset
    _write(store_path, dump_store(records))
    sheet = export_worksheet(groups, records)
    _write(os.path.join(db, "worksheet.txt"), sheet)
    return CorrelateSummary(pairs, births, len(groups), len(reset), sheet.count("[group "))


def load_db_groups(db: str):
    return load_groups(_read(os.path.join(db, "groups.jsonl")))


def load_db_store(db: str) -> list[Annotation]:
    path = os.path.join(db, "annotations.jsonl")
    return parse_store(_read(path)) if os.path.exists(path) else []


def triage_export(db: str) -> str:
    sheet = export_worksheet(load_db_groups(db), load_db_store(db))
    _write(os.path.join(db, "worksheet.txt"), sheet)
    return sheet


def triage_apply(db: str, worksheet_text: str) -> list[Annotation]:
    groups = load_db_groups(db)
    records = load_db_store(db)
    new = apply_worksheet(worksheet_text, groups, records)
    if new:
        _write(os.path.join(db, "annotations.jsonl"), dump_store(records + new))
    return new


# ---------------------------------------------------------------------------
# fault views shared by stats and report


def fault_sites(db: str) -> dict[str, set[tuple[str, str, int, str]]]:
    """(checker, file, line, key) of every report whose group is a fault, per version."""
    groups = load_db_groups(db)
    status = effective(load_db_store(db))
    if not status:
        raise MissingInput(os.path.join(db, "annotations.jsonl"))
    out: dict[str, set] = defaultdict(set)
    for g in groups.values():
        a = status.get(g.id)
        if a is None or a.status != FAULT:
            continue
        for v, line, _fn in g.members:
            out[v].add((g.checker, g.file, line, g.key))
    return out


def is_fault_fn(db: str, version: str, sites: dict | None):
    """Predicate over reports; every report counts when no triage has been done."""
    if sites is None:
        return lambda r: True
    vs = sites.get(version, set())
    return lambda r: (r.checker, r.file, r.line, r.key) in vs


def try_fault_sites(db: str) -> dict | None:
    try:
        return fault_sites(db)
    except MissingInput:
        return None


def histories(db: str, manifest: ingest.VersionManifest | None = None) -> list[FaultHistory]:
    manifest = manifest or load_db_manifest(db)
    groups = load_db_groups(db)
    records = load_db_store(db)
    if not records:
        raise MissingInput(os.path.join(db, "annotations.jsonl"))
    files = {v: load_snapshot(db, v).paths() for v in manifest.names}
    return build_histories(groups, records, manifest.names, files, ingest.dir_class)


def counts_by(db: str, version: str, sites, key) -> dict:
    """{key: (faults, notes)} for one version; *key* maps a report or note to a bucket."""
    reports, notes = read_results(db, version)
    fault = is_fault_fn(db, version, sites)
    acc: dict = defaultdict(lambda: [0, 0])
    for n in notes:
        acc[key(n)][1] += 1
    for r in reports:
        if fault(r):
            acc[key(r)][0] += 1
    return {k: tuple(v) for k, v in sorted(acc.items())}


# ---------------------------------------------------------------------------
# report tables


class TableSet:
    def __init__(self, out_dir: str, meta: dict):
        self.out_dir = out_dir
        self.meta = meta
        self.written: list[str] = []
        self.skipped: list[tuple[str, str]] = []

    def emit(self, name: str, build) -> None:
        try:
            header, rows, extra = build()
        except MissingInput as exc:
            self.skipped.append((name, f"missing input {exc}"))
            return
        except ValueError as exc:
            self.skipped.append((name, str(exc)))
            return
        meta = dict(self.meta)
        meta.update(extra)
        self.written.append(write_table(os.path.join(self.out_dir, name + ".csv"), header, rows, meta))


def report_tables(db: str, censor: str = MIDPOINT, diagnostics=None) -> TableSet:
    """Write every figure-ready table it has inputs for under ``db/report``."""
    manifest = load_db_manifest(db)
    names = manifest.names
    dates = {v.name: v.date for v in manifest.versions}
    sites = try_fault_sites(db)
    ts = TableSet(os.path.join(db, "report"), {
        "inputs": ["manifest.json", "groups.jsonl", "annotations.jsonl"] + [f"{v}/" for v in names],
        "censor_mode": censor,
        "fault_source": "annotated" if sites is not None else "all reports",
    })

    def need_sites():
        if sites is None:
            raise MissingInput(os.path.join(db, "annotations.jsonl"))
        return sites

    def per_version():
        rows = []
        for v in names:
            snap = load_snapshot(db, v)
            c = counts_by(db, v, sites, lambda x: "all").get("all", (0, 0))
            loc = snap.c_loc
            rate = fault_rate(*c)
            rows.append([v, dates[v].isoformat(), c[0], c[1], rate.rate, loc,
                         density_per_kloc(c[0], loc) if loc else None])
        return ["version", "date", "faults", "notes", "fault_rate", "c_loc", "faults_per_kloc"], rows, {}

    def by_kind():
        rows = []
        for v in names:
            c = counts_by(db, v, sites, lambda x: x.checker)
            for k in KIND_NAMES:
                f, n = c.get(k, (0, 0))
                rows.append([v, k, f, n, fault_rate(f, n).rate])
        return ["version", "checker", "faults", "notes", "fault_rate"], rows, {}

    def by_dir():
        rows = []
        for v in names:
            c = counts_by(db, v, sites, lambda x: ingest.dir_class(x.file))
            for d in sorted(c):
                f, n = c[d]
                try:
                    rel = relative_rate(d, c)
                except ValueError:
                    rel = None
                rows.append([v, d, f, n, fault_rate(f, n).rate, rel])
        return ["version", "dir", "faults", "notes", "fault_rate", "relative_rate"], rows, {}

    def by_dir_kind():
        rows = []
        for v in names:
            c = counts_by(db, v, sites, lambda x: (x.checker, ingest.dir_class(x.file)))
            for k in KIND_NAMES:
                sub = {d: fn for (kk, d), fn in c.items() if kk == k}
                for d in sorted(sub):
                    f, n = sub[d]
                    try:
                        rel = relative_rate(d, sub)
                    except ValueError:
                        rel = None
                    rows.append([v, k, d, f, n, fault_rate(f, n).rate, rel])
        return ["version", "checker", "dir", "faults", "notes", "fault_rate", "relative_rate"], rows, {}

    def intro_elim():
        s = need_sites()
        hs = histories(db, manifest)
        rows = []
        prev = 0
        for i, v in enumerate(names):
            faults = len(s.get(v, ()))
            intro = sum(1 for h in hs if h.birth_version == v)
            elim = sum(1 for h in hs if h.death_version == v)
            if i and faults != prev + intro - elim:
                raise ValueError(f"conservation violated at {v}: {prev} + {intro} - {elim} != {faults}")
            rows.append([v, faults, intro, elim, faults - prev])
            prev = faults
        return ["version", "faults", "introduced", "eliminated", "net_change"], rows, {}

    def per_file():
        s = need_sites()
        rows = []
        for v in names:
            hist = Counter(Counter(f for _c, f, _l, _k in s.get(v, ())).values())
            for k in sorted(hist):
                rows.append([v, k, hist[k]])
        return ["version", "faults_in_file", "files"], rows, {}

    def lifespan(label, keyfn):
        def build():
            hs = histories(db, manifest)
            cfg = censor_config(censor, manifest.versions[0].date)
            groups: dict = defaultdict(list)
            for h in hs:
                groups[keyfn(h)].append(h)
            groups["all"] = list(hs)
            rows = []
            for k in sorted(groups):
                obs = lifespans(groups[k], dates, cfg)
                if not obs:
                    rows.append([k, 0, 0, None, None])
                    continue
                curve = km_estimate(obs)
                rows.append([k, len(obs), sum(e for _, e in obs), curve.mean, curve.median])
            return [label, "histories", "deaths", "mean_years", "median_years"], rows, {}
        return build

    def fixed_within():
        hs = histories(db, manifest)
        cfg = censor_config(censor, manifest.versions[0].date)
        obs = lifespans(hs, dates, cfg)
        if not obs:
            raise ValueError("no histories under this censoring mode")
        curve = km_estimate(obs)
        rows = [[0.0, 0.0]] + [[st.time, 1.0 - st.survival] for st in curve.steps]
        return ["elapsed_years", "fraction_fixed"], rows, {"mean_years": curve.mean}

    def with_file():
        hs = histories(db, manifest)
        born = [h for h in hs if not h.left_censored]
        dead = [h for h in hs if h.death_version is not None]
        def pct(xs, flag):
            return 100.0 * sum(getattr(h, flag) for h in xs) / len(xs) if xs else None
        rows = [
            ["born_with_file", len(born), sum(h.born_with_file for h in born), pct(born, "born_with_file")],
            ["died_with_file", len(dead), sum(h.died_with_file for h in dead), pct(dead, "died_with_file")],
        ]
        return ["measure", "histories", "with_file", "percent"], rows, {
            "born_population": "histories born after the first version",
            "died_population": "histories with an observed death",
        }

    ts.emit("faults_per_version", per_version)
    ts.emit("faults_by_kind", by_kind)
    ts.emit("rates_by_dir", by_dir)
    ts.emit("rates_by_dir_kind", by_dir_kind)
    ts.emit("introduced_eliminated", intro_elim)
    ts.emit("faults_per_faulty_file", per_file)
    ts.emit("lifespan_by_dir", lifespan("dir", lambda h: h.dir_class))
    ts.emit("lifespan_by_kind", lifespan("checker", lambda h: h.checker))
    ts.emit("fixed_within", fixed_within)
    ts.emit("with_file", with_file)
    if diagnostics is not None:
        for name, why in ts.skipped:
            diagnostics.append(f"report: skipped {name}: {why}")
    return ts


def load_commits(path: str | None) -> list[ingest.CommitRecord]:
    if not path:
        raise MissingInput("commit log (pass --commits)")
    return ingest.load_commit_log(path)


__all__ = [
    "CENSOR_MODES", "CheckSummary", "CorrelateSummary", "Diagnostic", "MissingInput", "TableSet",
    "check_version", "correlate_all", "correlation_path", "counts_by", "fault_sites", "file_hunks",
    "function_rows", "histories", "is_fault_fn", "load_commits", "load_db_groups",
    "load_db_manifest", "load_db_store", "load_snapshot", "parse_tree", "report_tables",
    "save_manifest", "triage_apply", "triage_export", "try_fault_sites",
]
