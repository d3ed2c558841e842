import datetime as dt
import json
import os
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kernscan.ingest import (
    DIR_CLASSES,
    PRE_HISTORY,
    CommitRecord,
    ManifestError,
    Version,
    VersionManifest,
    commit_stats,
    count_loc,
    dir_class,
    dump_manifest,
    file_ages,
    load_manifest,
    parse_commit_log,
    parse_manifest,
    scan_snapshot,
)


def manifest_text(*entries):
    return json.dumps({"versions": [{"name": n, "date": d, "root": f"trees/{n}"} for n, d in entries]}, indent=1)


# --- manifests --------------------------------------------------------------


def test_two_version_manifest():
    m = parse_manifest(manifest_text(("2.6.0", "2003-12-17"), ("2.6.1", "2004-01-08")))
    assert m.names == ["2.6.0", "2.6.1"]


def test_out_of_order_dates_rejected():
    with pytest.raises(ManifestError, match="increase"):
        parse_manifest(manifest_text(("2.6.1", "2004-01-08"), ("2.6.0", "2003-12-17")))


def test_duplicate_names_and_empty_rejected():
    with pytest.raises(ManifestError):
        parse_manifest(manifest_text(("a", "2004-01-01"), ("a", "2004-02-01")))
    with pytest.raises(ManifestError):
        parse_manifest('{"versions": []}')


def test_malformed_manifest_names_line():
    with pytest.raises(ManifestError, match="line 3"):
        parse_manifest('{\n "versions": [\n  {"name": "x", "date": "2004-13-01", "root": "r"}\n ]\n}')
    with pytest.raises(ManifestError, match="line 2"):
        parse_manifest('{"versions":\n [,]}')


def test_forty_versions_span_seven_and_a_half_years():
    first, last = dt.date(2003, 12, 17), dt.date(2011, 7, 21)
    step = (last - first) / 39
    entries = [(f"v{i}", (first + step * i).isoformat()) for i in range(40)]
    m = parse_manifest(manifest_text(*entries))
    assert len(m.versions) == 40
    assert m.span_years == pytest.approx(7.6, abs=0.05)


def test_manifest_roots_resolved_against_file(tmp_path):
    p = tmp_path / "manifest.json"
    p.write_text(manifest_text(("a", "2004-01-01")))
    m = load_manifest(str(p))
    assert m.versions[0].root == os.path.join(str(tmp_path), "trees/a")
    assert parse_manifest(dump_manifest(m)) == m


# --- directory classes ------------------------------------------------------


@pytest.mark.parametrize("path,cls", [
    ("drivers/staging/x.c", "staging"),
    ("drivers/staging/otus/main.c", "staging"),
    ("drivers/net/ne.c", "drivers"),
    ("kernel/sched.c", "other"),
    ("mm/slab.c", "other"),
    ("arch/x86/kernel/irq.c", "arch"),
    ("fs/ext2/inode.c", "fs"),
    ("net/ipv4/route.c", "net"),
    ("sound/core/pcm.c", "sound"),
    ("drivers.c", "other"),
    ("./fs/a.c", "fs"),
])
def test_dir_class(path, cls):
    assert dir_class(path) == cls


@given(st.lists(st.sampled_from(["drivers", "staging", "fs", "net", "x", "arch", "sound", "a.c"]), min_size=1, max_size=5))
def test_dir_class_is_a_partition(parts):
    path = "/".join(parts)
    c = dir_class(path)
    assert c in DIR_CLASSES
    if path.startswith("drivers/staging/"):
        assert c == "staging"


# --- line counting ----------------------------------------------------------


def test_loc_comment_and_blank_excluded():
    assert count_loc("/* hi */\n\nint x;\n") == 1


def test_loc_trailing_comment_line_counts():
    assert count_loc("int f(){\n return 0; //c\n}\n") == 3


def test_loc_preprocessor_lines_count():
    assert count_loc("".join(f"#define A{i} {i}\n" for i in range(10))) == 10


def test_loc_multiline_comment_and_string():
    src = 'x = 1; /* a\n b\n c */ y = 2;\n/* only */\ns = "/* not a comment";\n'
    assert count_loc(src) == 3


def test_loc_undecodable_bytes():
    assert count_loc(b"\xff\xfe;\n") == 1


@given(st.text(alphabet=st.sampled_from(list("ab;/*\n \"#")), max_size=80))
def test_loc_bounded_by_raw_lines(src):
    n = count_loc(src)
    assert 0 <= n <= len(src.splitlines())


# --- snapshots --------------------------------------------------------------


def _tree(root, files):
    for rel, text in files.items():
        p = os.path.join(root, rel)
        os.makedirs(os.path.dirname(p), exist_ok=True)
        with open(p, "w") as fh:
            fh.write(text)


def test_scan_classifies_and_counts(tmp_path):
    _tree(tmp_path, {"drivers/staging/x.c": "int a;\n", "kernel/sched.c": "int b;\nint c;\n",
                     "include/h.h": "int d;\n", "README": "text\n"})
    snap = scan_snapshot(Version("v", dt.date(2004, 1, 1), str(tmp_path)))
    assert [(f.path, f.dir_class, f.loc) for f in snap.files] == [
        ("drivers/staging/x.c", "staging", 1), ("include/h.h", "other", 1), ("kernel/sched.c", "other", 2)]
    # headers are scanned but not counted as C code
    assert snap.c_loc == 3


def test_scan_empty_tree(tmp_path):
    assert scan_snapshot(Version("v", dt.date(2004, 1, 1), str(tmp_path))).files == []


def test_scan_independent_of_creation_order(tmp_path):
    files = {f"d{i % 3}/f{i}.c": f"int x{i};\n" * (i + 1) for i in range(12)}
    order = list(files)
    outs = []
    for k in range(3):
        random.Random(k).shuffle(order)
        root = tmp_path / f"t{k}"
        _tree(root, {p: files[p] for p in order})
        outs.append(scan_snapshot(Version("v", dt.date(2004, 1, 1), str(root))).to_jsonl())
    assert outs[0] == outs[1] == outs[2]


def test_unreadable_file_recorded_as_skip(tmp_path):
    _tree(tmp_path, {"a.c": "int a;\n"})
    os.symlink(str(tmp_path / "missing.c"), str(tmp_path / "b.c"))
    snap = scan_snapshot(Version("v", dt.date(2004, 1, 1), str(tmp_path)))
    assert [f.path for f in snap.files] == ["a.c"]
    assert [s[0] for s in snap.skipped] == ["b.c"]


# --- commit logs ------------------------------------------------------------

_M = VersionManifest((
    Version("2.6.0", dt.date(2003, 12, 17), "r0"),
    Version("2.6.1", dt.date(2004, 1, 8), "r1"),
    Version("2.6.2", dt.date(2004, 2, 3), "r2"),
))


def test_commit_log_parses_fields():
    (c,) = parse_commit_log("c1\talice\tbob\t2004-01-02\tfs/a.c;net/b.c\tFix leak found by Coverity\n")
    assert c.files == ("fs/a.c", "net/b.c")
    assert c.message_keywords == {"coverity"}


def test_commit_log_bad_line():
    with pytest.raises(ValueError, match="line 2"):
        parse_commit_log("c1\ta\tb\t2004-01-02\tfs/a.c\tm\nbroken line\n")


def test_churn_is_per_commit():
    cs = parse_commit_log("c1\ta\tb\t2004-01-02\tfs/a.c;fs/a.c\tm\n")
    assert commit_stats(cs, _M).per_version["2.6.1"].churn["fs/a.c"] == 1


def test_author_counted_in_each_directory():
    cs = parse_commit_log("c1\tA\tB\t2004-01-02\tdrivers/x.c;net/y.c\tm\n")
    s = commit_stats(cs, _M).per_version["2.6.1"]
    assert s.authors["drivers"] == {"A"} and s.authors["net"] == {"A"}
    assert s.committers["drivers"] == {"B"}


def test_tool_tally_whole_word_case_insensitive():
    log = ("c1\ta\tb\t2004-01-02\tfs/a.c\tCoverity: fix\n"
           "c2\ta\tb\t2004-01-03\tfs/a.c\tsparse and SMATCH warnings\n"
           "c3\ta\tb\t2004-01-04\tfs/a.c\tsparsely commented\n")
    assert dict(commit_stats(parse_commit_log(log), _M).per_version["2.6.1"].tools) == {
        "coverity": 1, "sparse": 1, "smatch": 1}


def test_out_of_window_commits_reported():
    log = "c0\ta\tb\t2003-01-01\tfs/a.c\tm\nc9\ta\tb\t2005-01-01\tfs/a.c\tm\n"
    stats = commit_stats(parse_commit_log(log), _M)
    assert stats.out_of_window == {PRE_HISTORY: 1, "post-history": 1}
    assert stats.first_seen["fs/a.c"] == dt.date(2003, 1, 1)


_commits = st.lists(
    st.builds(
        lambda d, fs: CommitRecord("x", "a", "b", dt.date(2003, 12, 1) + dt.timedelta(days=d), tuple(fs), frozenset()),
        st.integers(0, 80), st.lists(st.sampled_from(["fs/a.c", "net/b.c", "drivers/c.c"]), max_size=3)),
    max_size=30)


@given(_commits, _commits)
def test_churn_additive_over_disjoint_logs(xs, ys):
    def churn(cs):
        out = {}
        for name, s in commit_stats(cs, _M).per_version.items():
            for f, n in s.churn.items():
                out[(name, f)] = out.get((name, f), 0) + n
        return out

    a, b, ab = churn(xs), churn(ys), churn(xs + ys)
    assert ab == {k: a.get(k, 0) + b.get(k, 0) for k in set(a) | set(b)}


def test_file_ages_from_versions_and_commits():
    from kernscan.ingest import Snapshot, SourceEntry

    def snap(name, paths):
        return Snapshot(name, [SourceEntry(p, dir_class(p), 1, "h") for p in paths])

    snaps = {"2.6.0": snap("2.6.0", ["a.c"]), "2.6.1": snap("2.6.1", ["a.c", "b.c"]),
             "2.6.2": snap("2.6.2", ["a.c", "b.c"])}
    ages = file_ages(_M, snaps)
    assert ages["2.6.0"]["a.c"] == 0
    assert ages["2.6.2"]["b.c"] == pytest.approx(26 / 365.25)
    older = file_ages(_M, snaps, {"a.c": dt.date(2002, 12, 17)}, "commits")
    assert older["2.6.0"]["a.c"] == pytest.approx(365 / 365.25)
