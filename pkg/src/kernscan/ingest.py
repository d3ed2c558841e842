"""Version manifests, source snapshots, line counts and commit logs."""

from __future__ import annotations

import datetime as dt
import hashlib
import json
import os
import re
from collections import defaultdict
from dataclasses import asdict, dataclass, field
from typing import Iterable

DIR_CLASSES = ("staging", "drivers", "arch", "fs", "net", "sound", "other")
TOOL_KEYWORDS = ("coccinelle", "coverity", "sparse", "smatch")
PRE_HISTORY = "pre-history"
POST_HISTORY = "post-history"


class ManifestError(ValueError):
    pass


@dataclass(frozen=True)
class Version:
    name: str
    date: dt.date
    root: str


@dataclass(frozen=True)
class VersionManifest:
    versions: tuple[Version, ...]

    def __post_init__(self):
        if not self.versions:
            raise ManifestError("manifest lists no versions")
        names = [v.name for v in self.versions]
        if len(set(names)) != len(names):
            raise ManifestError("version names must be unique")
        for a, b in zip(self.versions, self.versions[1:]):
            if b.date <= a.date:
                raise ManifestError(f"release dates must increase: {a.name} {a.date} then {b.name} {b.date}")

    @property
    def names(self) -> list[str]:
        return [v.name for v in self.versions]

    def index(self, name: str) -> int:
        return self.names.index(name)

    def get(self, name: str) -> Version:
        return self.versions[self.index(name)]

    @property
    def span_years(self) -> float:
        return (self.versions[-1].date - self.versions[0].date).days / 365.25


def parse_manifest(text: str, base_dir: str = "") -> VersionManifest:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ManifestError(f"line {exc.lineno}: {exc.msg}") from None
    if not isinstance(data, dict) or not isinstance(data.get("versions"), list):
        raise ManifestError('line 1: expected an object with a "versions" list')
    lines = text.splitlines()
    versions = []
    for i, entry in enumerate(data["versions"]):
        where = _line_of(lines, entry.get("name") if isinstance(entry, dict) else None)
        try:
            name, date, root = entry["name"], entry["date"], entry["root"]
            day = dt.date.fromisoformat(date)
        except (KeyError, TypeError, ValueError) as exc:
            raise ManifestError(f"line {where}: bad version entry {i}: {exc}") from None
        if base_dir and not os.path.isabs(root):
            root = os.path.join(base_dir, root)
        versions.append(Version(str(name), day, root))
    return VersionManifest(tuple(versions))


def _line_of(lines: list[str], name) -> int:
    if name is not None:
        needle = json.dumps(name)
        for i, line in enumerate(lines, 1):
            if needle in line:
                return i
    return 1


def load_manifest(path: str) -> VersionManifest:
    with open(path, encoding="utf-8") as fh:
        return parse_manifest(fh.read(), os.path.dirname(os.path.abspath(path)))


def dump_manifest(manifest: VersionManifest) -> str:
    rows = [{"name": v.name, "date": v.date.isoformat(), "root": v.root} for v in manifest.versions]
    return json.dumps({"versions": rows}, indent=1) + "\n"


# ---------------------------------------------------------------------------


def dir_class(path: str) -> str:
    path = path.replace(os.sep, "/")
    while path.startswith("./"):
        path = path[2:]
    parts = path.split("/")
    if parts[0] == "drivers" and len(parts) > 2 and parts[1] == "staging":
        return "staging"
    if len(parts) > 1 and parts[0] in ("drivers", "arch", "fs", "net", "sound"):
        return parts[0]
    return "other"


def count_loc(content: bytes | str) -> int:
    """Physical source lines: lines holding something other than comments and blanks."""
    text = content.decode("latin-1") if isinstance(content, bytes) else content
    count = 0
    has_code = False
    in_block = False
    quote = ""
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            count += has_code
            has_code = False
            # string literals never span lines without a backslash
            if quote and not (i > 0 and text[i - 1] == "\\"):
                quote = ""
            i += 1
            continue
        if in_block:
            if text.startswith("*/", i):
                in_block = False
                i += 2
            else:
                i += 1
            continue
        if quote:
            if c == "\\":
                i += 2
                continue
            if c == quote:
                quote = ""
            i += 1
            continue
        if text.startswith("/*", i):
            in_block = True
            i += 2
            continue
        if text.startswith("//", i):
            j = text.find("\n", i)
            i = n if j < 0 else j
            continue
        if c in "\"'":
            quote = c
        if not c.isspace():
            has_code = True
        i += 1
    count += has_code
    return count


@dataclass(frozen=True)
class SourceEntry:
    path: str
    dir_class: str
    loc: int
    content_hash: str


@dataclass
class Snapshot:
    version: str
    files: list[SourceEntry]
    skipped: list[tuple[str, str]] = field(default_factory=list)

    @property
    def c_loc(self) -> int:
        """Lines of ``.c`` code; headers are scanned but not counted."""
        return sum(f.loc for f in self.files if f.path.endswith(".c"))

    def paths(self) -> set[str]:
        return {f.path for f in self.files}

    def to_jsonl(self) -> str:
        return "".join(json.dumps(asdict(f), sort_keys=True) + "\n" for f in self.files)

    @classmethod
    def from_jsonl(cls, version: str, text: str) -> "Snapshot":
        files = [SourceEntry(**json.loads(line)) for line in text.splitlines() if line.strip()]
        return cls(version, files)


def source_files(root: str) -> list[str]:
    found = []
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames.sort()
        for name in filenames:
            if name.endswith((".c", ".h")):
                rel = os.path.relpath(os.path.join(dirpath, name), root)
                found.append(rel.replace(os.sep, "/"))
    return sorted(found)


def scan_file(root: str, rel: str) -> SourceEntry:
    with open(os.path.join(root, rel), "rb") as fh:
        data = fh.read()
    return SourceEntry(rel, dir_class(rel), count_loc(data), hashlib.sha1(data).hexdigest())


def scan_snapshot(version: Version) -> Snapshot:
    entries, skipped = [], []
    for rel in source_files(version.root):
        try:
            entries.append(scan_file(version.root, rel))
        except OSError as exc:
            skipped.append((rel, exc.strerror or str(exc)))
    return Snapshot(version.name, entries, skipped)


def read_source(root: str, rel: str) -> str:
    with open(os.path.join(root, rel), "rb") as fh:
        return fh.read().decode("latin-1")


# ---------------------------------------------------------------------------
# Commit logs


@dataclass(frozen=True)
class CommitRecord:
    id: str
    author: str
    committer: str
    commit_date: dt.date
    files: tuple[str, ...]
    message_keywords: frozenset


_KEYWORD_RE = re.compile(r"\b(" + "|".join(TOOL_KEYWORDS) + r")\b", re.IGNORECASE)


def parse_commit_log(text: str) -> list[CommitRecord]:
    commits = []
    for n, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split("\t", 5)
        if len(parts) != 6:
            raise ValueError(f"commit log line {n}: expected 6 tab-separated fields, got {len(parts)}")
        cid, author, committer, date, files, message = parts
        try:
            day = dt.date.fromisoformat(date)
        except ValueError:
            raise ValueError(f"commit log line {n}: bad date {date!r}") from None
        paths = tuple(p for p in files.split(";") if p)
        words = frozenset(m.lower() for m in _KEYWORD_RE.findall(message))
        commits.append(CommitRecord(cid, author, committer, day, paths, words))
    return commits


def load_commit_log(path: str) -> list[CommitRecord]:
    with open(path, encoding="utf-8") as fh:
        return parse_commit_log(fh.read())


def version_window(commit_date: dt.date, manifest: VersionManifest) -> str:
    """Version whose development window (previous release, this release] holds the date."""
    vs = manifest.versions
    if commit_date <= vs[0].date:
        return PRE_HISTORY
    for prev, cur in zip(vs, vs[1:]):
        if prev.date < commit_date <= cur.date:
            return cur.name
    return POST_HISTORY


@dataclass
class VersionCommitStats:
    churn: dict = field(default_factory=lambda: defaultdict(int))
    authors: dict = field(default_factory=lambda: defaultdict(set))
    committers: dict = field(default_factory=lambda: defaultdict(set))
    tools: dict = field(default_factory=lambda: defaultdict(int))
    commits: int = 0

    def summary(self) -> dict:
        return {
            "commits": self.commits,
            "churn": dict(sorted(self.churn.items())),
            "authors": {d: len(s) for d, s in sorted(self.authors.items())},
            "committers": {d: len(s) for d, s in sorted(self.committers.items())},
            "tools": dict(sorted(self.tools.items())),
        }


@dataclass
class CommitStats:
    per_version: dict[str, VersionCommitStats]
    first_seen: dict[str, dt.date]

    @property
    def out_of_window(self) -> dict[str, int]:
        return {b: self.per_version[b].commits for b in (PRE_HISTORY, POST_HISTORY) if b in self.per_version}


def commit_stats(commits: Iterable[CommitRecord], manifest: VersionManifest) -> CommitStats:
    per: dict[str, VersionCommitStats] = {v.name: VersionCommitStats() for v in manifest.versions}
    first: dict[str, dt.date] = {}
    for c in commits:
        bucket = version_window(c.commit_date, manifest)
        s = per.setdefault(bucket, VersionCommitStats())
        s.commits += 1
        files = sorted(set(c.files))
        for f in files:
            s.churn[f] += 1
            if f not in first or c.commit_date < first[f]:
                first[f] = c.commit_date
        for d in sorted({dir_class(f) for f in files}):
            s.authors[d].add(c.author)
            s.committers[d].add(c.committer)
        for w in c.message_keywords:
            s.tools[w] += 1
    return CommitStats(per, first)


def developer_commits(commits: Iterable[CommitRecord], who: str = "author") -> dict[str, list[dt.date]]:
    out: dict[str, list[dt.date]] = defaultdict(list)
    for c in commits:
        out[getattr(c, who)].append(c.commit_date)
    return {k: sorted(v) for k, v in sorted(out.items())}


# ---------------------------------------------------------------------------
# File age


AGE_SOURCES = ("commits", "versions")


def file_ages(
    manifest: VersionManifest,
    snapshots: dict[str, Snapshot],
    first_seen: dict[str, dt.date] | None = None,
    source: str = "versions",
) -> dict[str, dict[str, float]]:
    """Age in years of every file at every version."""
    if source not in AGE_SOURCES:
        raise ValueError(f"age source must be one of {AGE_SOURCES}")
    appeared: dict[str, dt.date] = {}
    for v in manifest.versions:
        for p in sorted(snapshots[v.name].paths()):
            appeared.setdefault(p, v.date)
    ages: dict[str, dict[str, float]] = {}
    for v in manifest.versions:
        row = {}
        for p in sorted(snapshots[v.name].paths()):
            born = appeared[p]
            if source == "commits" and first_seen and p in first_seen:
                born = min(born, first_seen[p])
            row[p] = (v.date - born).days / 365.25
        ages[v.name] = row
    return ages
