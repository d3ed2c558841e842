"""kernscan command line.

Exit codes: 0 success, 1 usage, 2 analysis errors over the threshold,
3 input/output failure.  Settings come from flags, then ``KERNSCAN_*``
environment variables, then defaults.  Diagnostics go to stderr; results
go to files (the ``events`` and ``closures`` debug dumps print to stdout
unless ``--out`` is given).
"""

from __future__ import annotations

import argparse
import dataclasses
import datetime as dt
import os
import sys
from dataclasses import dataclass

from . import __version__, ingest, pipeline
from .analyses import ANALYSES, BUCKET_KEYS, StatOptions, run_stat
from .checkers import KIND_NAMES, validate_kinds
from .closure import compute_closures
from .cmodel import dump_events, model_file
from .config import DEFAULT_CONFIG
from .history import AnnotationConflict, WorksheetError
from .stats import CENSOR_MODES, MIDPOINT, STRATEGIES

EXIT_OK, EXIT_USAGE, EXIT_ANALYSIS, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


@dataclass
class RunConfig:
    manifest: str | None = None
    out: str | None = None
    checkers: tuple[str, ...] = KIND_NAMES
    censor: str = MIDPOINT
    worksheet: str | None = None
    jobs: int = 1
    max_errors: int | None = None
    commits: str | None = None
    var_threshold: int = DEFAULT_CONFIG.var_byte_threshold


def _env_int(env, name):
    raw = env.get(name)
    if raw is None or raw == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{name} must be an integer, not {raw!r}") from None


def resolve_config(args: argparse.Namespace, env=None) -> RunConfig:
    """Merge flags over ``KERNSCAN_*`` variables over defaults."""
    env = os.environ if env is None else env

    def pick(flag, var, default):
        v = getattr(args, flag, None)
        if v is not None:
            return v
        e = env.get(var)
        return e if e not in (None, "") else default

    checkers_raw = pick("checkers", "KERNSCAN_CHECKERS", None)
    if checkers_raw is None:
        checkers = KIND_NAMES
    else:
        try:
            checkers = validate_kinds(c.strip() for c in checkers_raw.split(",") if c.strip())
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if not checkers:
            raise UsageError("empty checker selection")
    censor = pick("censor", "KERNSCAN_CENSOR", MIDPOINT)
    if censor not in CENSOR_MODES:
        raise UsageError(f"censor mode must be one of {', '.join(CENSOR_MODES)}, not {censor!r}")
    jobs = getattr(args, "jobs", None)
    if jobs is None:
        jobs = _env_int(env, "KERNSCAN_JOBS") or os.cpu_count() or 1
    if jobs < 1:
        raise UsageError("--jobs must be at least 1")
    max_errors = getattr(args, "max_errors", None)
    if max_errors is None:
        max_errors = _env_int(env, "KERNSCAN_MAX_ERRORS")
    var = getattr(args, "var_threshold", None)
    if var is None:
        var = _env_int(env, "KERNSCAN_VAR_THRESHOLD") or DEFAULT_CONFIG.var_byte_threshold
    out = pick("out", "KERNSCAN_OUT", None) or pick("db", "KERNSCAN_OUT", None)
    return RunConfig(
        manifest=pick("manifest", "KERNSCAN_MANIFEST", None),
        out=out,
        checkers=tuple(checkers),
        censor=censor,
        worksheet=pick("worksheet", "KERNSCAN_WORKSHEET", None),
        jobs=jobs,
        max_errors=max_errors,
        commits=pick("commits", "KERNSCAN_COMMITS", None),
        var_threshold=var,
    )


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _need(value, flag: str, var: str):
    if not value:
        raise UsageError(f"{flag} is required (or set {var})")
    return value


def _manifest(cfg: RunConfig) -> ingest.VersionManifest:
    return ingest.load_manifest(_need(cfg.manifest, "--manifest", "KERNSCAN_MANIFEST"))


def _db(cfg: RunConfig) -> str:
    return _need(cfg.out, "--db", "KERNSCAN_OUT")


def _pick_versions(manifest, names):
    if not names:
        return list(manifest.versions)
    out = []
    for n in names:
        if n not in manifest.names:
            raise UsageError(f"unknown version {n!r}; manifest has {', '.join(manifest.names)}")
        out.append(manifest.get(n))
    return out


def _checker_config(cfg: RunConfig):
    if cfg.var_threshold == DEFAULT_CONFIG.var_byte_threshold:
        return DEFAULT_CONFIG
    return dataclasses.replace(DEFAULT_CONFIG, var_byte_threshold=cfg.var_threshold)


# ---------------------------------------------------------------------------


def cmd_check(args, cfg: RunConfig) -> int:
    manifest = _manifest(cfg)
    db = _need(cfg.out, "--out", "KERNSCAN_OUT")
    versions = _pick_versions(manifest, args.version)
    os.makedirs(db, exist_ok=True)
    pipeline.save_manifest(db, manifest)
    errors = 0
    for v in versions:
        s = pipeline.check_version(v, db, _checker_config(cfg), cfg.checkers, cfg.jobs)
        for d in s.diagnostics:
            _err(f"{v.name}: {d}")
        for t in s.truncated:
            _err(f"{v.name}: {t}: path cap reached, results may be incomplete")
        _err(f"{v.name}: {s.files} files, {s.functions} functions, {s.reports} reports")
        errors += s.error_count
    if cfg.max_errors is not None and errors > cfg.max_errors:
        _err(f"{errors} analysis errors exceed the threshold of {cfg.max_errors}")
        return EXIT_ANALYSIS
    return EXIT_OK


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_closures(args, cfg: RunConfig) -> int:
    manifest = _manifest(cfg)
    (v,) = _pick_versions(manifest, [args.version])
    snap = ingest.scan_snapshot(v)
    models, diags = pipeline.parse_tree(v.root, [f.path for f in snap.files], cfg.jobs)
    for d in diags:
        _err(str(d))
    _emit(compute_closures(models, _checker_config(cfg)).to_jsonl(), args.out)
    return EXIT_OK


def cmd_events(args, cfg: RunConfig) -> int:
    with open(args.file, "rb") as fh:
        text = fh.read().decode("latin-1")
    diags: list = []
    models = model_file(text, args.file, diags)
    for d in diags:
        _err(f"{args.file}:{d.line}: {d.message}")
    lines = dump_events(models)
    _emit("".join(l + "\n" for l in lines), args.out)
    return EXIT_OK


def cmd_correlate(args, cfg: RunConfig) -> int:
    db = _db(cfg)
    s = pipeline.correlate_all(db)
    for (a, b), modes in s.pairs.items():
        parts = ", ".join(f"{m} {modes[m]}" for m in ("auto_same", "unknown", "dead"))
        _err(f"{a} -> {b}: {parts}; {s.births[b]} new")
    _err(f"{s.groups} groups; {s.reset} reset to unknown; {s.worksheet_records} to annotate")
    return EXIT_OK


def cmd_triage(args, cfg: RunConfig) -> int:
    db = _db(cfg)
    if args.action == "export":
        sheet = pipeline.triage_export(db)
        if cfg.worksheet:
            _emit(sheet, cfg.worksheet)
        _err(f"{sheet.count('[group ')} groups to annotate")
        return EXIT_OK
    path = _need(cfg.worksheet, "--worksheet", "KERNSCAN_WORKSHEET")
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    new = pipeline.triage_apply(db, text)
    _err(f"{len(new)} annotations recorded")
    return EXIT_OK


def cmd_stats(args, cfg: RunConfig) -> int:
    db = _db(cfg)
    as_of = None
    if args.as_of:
        try:
            as_of = dt.date.fromisoformat(args.as_of)
        except ValueError:
            raise UsageError(f"--as-of must be YYYY-MM-DD, not {args.as_of!r}") from None
    opts = StatOptions(
        version=args.version, kinds=cfg.checkers, strategy=args.strategy, buckets=args.buckets,
        key=args.key, censor=cfg.censor, bands=args.bands, commits=cfg.commits,
        age_source=args.age_source, as_of=as_of, packet=args.packet,
    )
    path = run_stat(args.analysis, db, opts)
    _err(f"wrote {path}")
    return EXIT_OK


def cmd_report(args, cfg: RunConfig) -> int:
    db = _db(cfg)
    diags: list[str] = []
    ts = pipeline.report_tables(db, cfg.censor, diags)
    for d in diags:
        _err(d)
    _err(f"wrote {len(ts.written)} tables under {os.path.join(db, 'report')}")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    p = _Parser(prog="kernscan", description="Fault finding and fault history analysis for C source trees.")
    p.add_argument("--version", action="version", version=f"kernscan {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser, metavar="COMMAND")
    sub.required = True

    def common_checkers(sp):
        sp.add_argument("--checkers", help="comma-separated checker kinds (default: all)")

    c = sub.add_parser("check", help="run the checkers over manifest versions")
    c.add_argument("--manifest")
    c.add_argument("--out")
    c.add_argument("--version", action="append", help="version to check (repeatable; default: all)")
    c.add_argument("--jobs", type=int)
    c.add_argument("--max-errors", type=int, dest="max_errors")
    c.add_argument("--var-threshold", type=int, dest="var_threshold")
    common_checkers(c)
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("closures", help="dump the function sets of one version")
    c.add_argument("--manifest")
    c.add_argument("--version", required=True)
    c.add_argument("--out")
    c.add_argument("--jobs", type=int)
    c.set_defaults(func=cmd_closures)

    c = sub.add_parser("events", help="dump the analysis events of one file")
    c.add_argument("file")
    c.add_argument("--out")
    c.set_defaults(func=cmd_events)

    c = sub.add_parser("correlate", help="link reports across versions and export a worksheet")
    c.add_argument("--db")
    c.set_defaults(func=cmd_correlate)

    c = sub.add_parser("triage", help="export or apply the annotation worksheet")
    c.add_argument("action", choices=("export", "apply"))
    c.add_argument("--db")
    c.add_argument("--worksheet")
    c.set_defaults(func=cmd_triage)

    c = sub.add_parser("stats", help="run one statistical analysis")
    c.add_argument("analysis", choices=ANALYSES)
    c.add_argument("--db")
    c.add_argument("--version", help="version to analyse (default: the last, or all for rates)")
    c.add_argument("--censor")
    c.add_argument("--bands", action="store_true", help="add Greenwood confidence bands to survival")
    c.add_argument("--strategy", choices=STRATEGIES, default="equal_count")
    c.add_argument("--buckets", type=int, default=4)
    c.add_argument("--key", choices=BUCKET_KEYS, default="size", help="bucket functions by size or files by age")
    c.add_argument("--age-source", choices=ingest.AGE_SOURCES, default="versions", dest="age_source")
    c.add_argument("--commits", help="commit log export")
    c.add_argument("--as-of", dest="as_of")
    c.add_argument("--packet", type=int, default=10)
    common_checkers(c)
    c.set_defaults(func=cmd_stats)

    c = sub.add_parser("report", help="write every figure-ready table")
    c.add_argument("--db")
    c.add_argument("--censor")
    c.set_defaults(func=cmd_report)
    return p


def run(argv=None, env=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = resolve_config(args, env)
        return args.func(args, cfg)
    except UsageError as exc:
        _err(str(exc))
        return EXIT_USAGE
    except SystemExit as exc:  # --help and --version
        return int(exc.code or 0)
    except (pipeline.MissingInput, FileNotFoundError) as exc:
        _err(f"kernscan: missing input: {exc}")
        return EXIT_IO
    except ingest.ManifestError as exc:
        _err(f"kernscan: manifest: {exc}")
        return EXIT_IO
    except OSError as exc:
        _err(f"kernscan: {exc}")
        return EXIT_IO
    except (WorksheetError, AnnotationConflict, ValueError) as exc:
        _err(f"kernscan: {exc}")
        return EXIT_ANALYSIS


def main(argv=None) -> int:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
