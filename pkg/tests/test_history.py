import json
import random
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kernscan import corpus, ingest, pipeline
from kernscan.checkers import Report
from kernscan.history import (
    AUTO_SAME,
    CHANGED,
    DEAD,
    FAULT,
    FP,
    UNCHANGED,
    UNKNOWN,
    Annotation,
    AnnotationConflict,
    Correlation,
    Hunk,
    LineMap,
    WorksheetError,
    apply_worksheet,
    build_histories,
    correlate,
    diff_files,
    effective,
    export_worksheet,
    identity_hunks,
    parse_worksheet,
    reset_relinked,
    track_groups,
)


def R(line, checker="Lock", key="l", file="a.c", fn="f"):
    return Report(file, line, checker, key, fn)


# --- diff -------------------------------------------------------------------


def test_identical_files_one_unchanged_hunk():
    text = "a\nb\nc\n"
    assert diff_files(text, text) == [Hunk(1, 3, 1, 3, UNCHANGED)]


def test_insert_at_top():
    assert diff_files("a\nb\n", "x\na\nb\n") == [Hunk(1, 0, 1, 1, CHANGED), Hunk(1, 2, 2, 2, UNCHANGED)]


def test_full_rewrite_single_changed_hunk():
    assert diff_files("a\nb\nc\n", "x\ny\n") == [Hunk(1, 3, 1, 2, CHANGED)]


@lru_cache(maxsize=None)
def _lcs(a, b):
    if not a or not b:
        return 0
    if a[0] == b[0]:
        return 1 + _lcs(a[1:], b[1:])
    return max(_lcs(a[1:], b), _lcs(a, b[1:]))


_small_files = st.lists(st.sampled_from(["a", "b", "c", "{", "}"]), max_size=12)


@given(_small_files, _small_files)
@settings(max_examples=300)
def test_hunks_partition_and_match(a, b):
    hunks = diff_files(a, b)
    i = j = 1
    for h in hunks:
        assert (h.old_start, h.new_start) == (i, j)
        if h.kind == UNCHANGED:
            assert h.old_len == h.new_len > 0
            assert a[i - 1:i - 1 + h.old_len] == b[j - 1:j - 1 + h.new_len]
        i += h.old_len
        j += h.new_len
    assert (i, j) == (len(a) + 1, len(b) + 1)
    # adjacent hunks alternate, so unchanged runs are maximal
    assert all(x.kind != y.kind for x, y in zip(hunks, hunks[1:]))
    # the common lines found never exceed the true LCS
    assert sum(h.old_len for h in hunks if h.kind == UNCHANGED) <= _lcs(tuple(a), tuple(b))


@given(_small_files)
def test_disjoint_files_give_one_changed_hunk(a):
    b = [x + "'" for x in a] + ["Z"]
    hunks = diff_files(a, b)
    assert [h.kind for h in hunks] == [CHANGED]


# --- correlate --------------------------------------------------------------


def test_unchanged_file_auto_same():
    (c,), born = correlate([R(10)], [R(10)], {"a.c": None})
    assert c.mode == AUTO_SAME and c.new.line == 10 and born == []


def test_offset_through_insertion():
    old = [f"l{i}" for i in range(1, 21)]
    new = old[:2] + ["ins1", "ins2"] + old[2:]
    (c,), _ = correlate([R(10)], [R(12)], {"a.c": diff_files(old, new)})
    assert c.mode == AUTO_SAME and c.new.line == 12


def test_changed_hunk_unknown_with_candidates():
    old = ["a", "b", "c", "d"]
    new = ["a", "X", "Y", "d"]
    (c,), born = correlate([R(2)], [R(3), R(9)], {"a.c": diff_files(old, new)})
    assert c.mode == UNKNOWN and c.new.line == 3
    assert c.candidates == (3, 9)
    assert [r.line for r in born] == [9]


def test_deleted_file_or_no_candidate_dead():
    (c,), _ = correlate([R(5)], [], {})
    assert c.mode == DEAD
    (c,), _ = correlate([R(2)], [R(2, key="other")], {"a.c": diff_files(["a", "b"], ["a", "c"])})
    assert c.mode == DEAD


def test_greedy_ties_go_to_earlier_old_report():
    hunks = {"a.c": diff_files(["x"] * 3, ["y"] * 3)}
    cs, _ = correlate([R(1), R(3)], [R(2)], hunks)
    assert [c.mode for c in cs] == [UNKNOWN, DEAD]


_report_sets = st.lists(st.tuples(st.integers(1, 30), st.sampled_from(["Lock", "Null"]), st.sampled_from(["p", "q"])),
                        max_size=15, unique=True)


@given(_report_sets)
def test_self_correlation(rs):
    reports = [R(l, c, k) for l, c, k in rs]
    cs, born = correlate(reports, reports, {"a.c": identity_hunks(30)})
    assert all(c.mode == AUTO_SAME and c.new == c.old for c in cs)
    assert born == []


@given(st.lists(st.sampled_from(["a", "b", "c", "d"]), min_size=1, max_size=25),
       st.lists(st.sampled_from(["a", "b", "c", "d", "e"]), max_size=25), _report_sets, _report_sets)
@settings(max_examples=200)
def test_line_map_consistency_and_injectivity(old, new, rs_old, rs_new):
    hunks = diff_files(old, new)
    olds = [R(l, c, k) for l, c, k in rs_old if l <= len(old)]
    news = [R(l, c, k) for l, c, k in rs_new if l <= len(new)]
    # make sure some mapped reports exist
    lm = LineMap(hunks)
    news += [R(lm(r.line), r.checker, r.key) for r in olds if lm(r.line) is not None]
    news = sorted(set(news))
    cs, born = correlate(olds, news, {"a.c": hunks})
    used = [c.new for c in cs if c.new is not None]
    assert len(used) == len(set(used))
    assert set(used) | set(born) == set(news)
    for c in cs:
        if c.mode == AUTO_SAME:
            shift = sum(h.new_len - h.old_len for h in hunks if h.old_start + h.old_len <= c.old.line
                        and h.kind == CHANGED)
            assert c.new.line == c.old.line + shift


# --- the shipped corpus against its hand ledger -----------------------------


def test_corpus_correlations_match_ledger(corpus_db, corpus_manifest):
    ids = {(p.version, p.file, p.line, p.checker): p.id for p in corpus.plants() if p.positive}
    names = corpus_manifest.names
    for a, b in zip(names, names[1:]):
        got = {}
        with open(pipeline.correlation_path(corpus_db, a, b)) as fh:
            for line in fh:
                c = Correlation.from_json(json.loads(line))
                got[ids[(a, c.old.file, c.old.line, c.old.checker)]] = c.mode
        assert got == corpus.CORRELATION_LEDGER[(a, b)]


# --- groups, worksheet, annotations -----------------------------------------


def _groups_two_versions(n_old, n_new_extra):
    old = [R(i + 1, file=f"f{i % 7}.c") for i in range(n_old)]
    new = old + [R(1000 + i, file="new.c") for i in range(n_new_extra)]
    cs, _ = correlate(old, new, {f"f{i}.c": None for i in range(7)})
    return track_groups(["v1", "v2"], {"v1": old, "v2": new}, {("v1", "v2"): cs}), old


def test_three_left_to_annotate():
    groups, old = _groups_two_versions(158, 3)
    assert sum(len([m for m in g.members if m[0] == "v2"]) for g in groups.values()) == 161
    born_v1 = sorted(g.id for g in groups.values() if g.birth == "v1")
    store = [Annotation(gid, FAULT if i < 121 else FP) for i, gid in enumerate(born_v1)]
    assert len([a for a in store if a.status == FAULT]) == 121
    assert len([a for a in store if a.status == FP]) == 37
    assert len(parse_worksheet(export_worksheet(groups, store))) == 3


def test_fully_annotated_worksheet_is_empty():
    groups, _ = _groups_two_versions(10, 0)
    store = [Annotation(gid, FP) for gid in groups]
    assert export_worksheet(groups, store) == ""


def test_unchanged_next_version_adds_nothing_to_annotate():
    old = [R(i + 1) for i in range(10)]
    new = old + [R(100), R(101)]
    same = {"a.c": None}
    c12, _ = correlate(old, new, same)
    groups = track_groups(["v1", "v2"], {"v1": old, "v2": new}, {("v1", "v2"): c12})
    sheet = export_worksheet(groups, []).replace("status = unknown", "status = fault")
    store = apply_worksheet(sheet, groups, [])
    c23, born = correlate(new, new, same)
    assert born == []
    ext = track_groups(["v1", "v2", "v3"], {"v1": old, "v2": new, "v3": new}, {("v1", "v2"): c12, ("v2", "v3"): c23})
    assert set(ext) == set(groups)
    assert export_worksheet(ext, store) == ""


def test_worksheet_grammar():
    groups, _ = _groups_two_versions(2, 0)
    sheet = export_worksheet(groups, [])
    blocks = sheet.split("\n\n")
    assert len(blocks) == 2
    head, hist, status = blocks[0].splitlines()
    assert head.startswith("[group ") and " Lock f" in head and " fn=f" in head
    assert hist == "history: v1..v2"
    assert status == "status = unknown"


def test_worksheet_rejects_bad_status():
    groups, _ = _groups_two_versions(1, 0)
    sheet = export_worksheet(groups, []).replace("unknown", "maybe")
    with pytest.raises(WorksheetError, match="line 3"):
        apply_worksheet(sheet, groups, [])


def test_worksheet_rejects_unknown_group_and_bad_header():
    groups, _ = _groups_two_versions(1, 0)
    sheet = export_worksheet(groups, [])
    gid = next(iter(groups))
    with pytest.raises(WorksheetError, match="unknown group"):
        apply_worksheet(sheet.replace(gid, "ffffffffffff"), groups, [])
    with pytest.raises(WorksheetError, match="line 1"):
        parse_worksheet("garbage\nhistory: a..b\nstatus = fp\n")


def test_status_outside_vocabulary_rejected():
    with pytest.raises(ValueError):
        Annotation("g", "maybe")


def test_relinked_group_reset_once():
    old, new = [R(2)], [R(3)]
    cs, _ = correlate(old, new, {"a.c": diff_files(["a", "b", "c"], ["a", "X", "Y"])})
    groups = track_groups(["v1", "v2"], {"v1": old, "v2": new}, {("v1", "v2"): cs})
    (g,) = groups.values()
    assert g.relinked == ["v2"]
    store = [Annotation(g.id, FAULT)]
    reset = reset_relinked(groups, store)
    assert [a.status for a in reset] == [UNKNOWN]
    assert reset_relinked(groups, store + reset) == []
    # a link already present at the previous correlation was seen before the annotation
    assert reset_relinked(groups, store, previous=groups) == []


# --- histories --------------------------------------------------------------

_V = ["v1", "v2", "v3"]


def _history_for(present_in, files_by_version):
    reports = {v: [R(5)] if v in present_in else [] for v in _V}
    corr = {}
    for a, b in zip(_V, _V[1:]):
        corr[(a, b)] = correlate(reports[a], reports[b], {"a.c": None} if "a.c" in files_by_version[b] else {})[0]
    groups = track_groups(_V, reports, corr)
    store = [Annotation(gid, FAULT) for gid in groups]
    return build_histories(groups, store, _V, files_by_version, ingest.dir_class)


def test_history_death_while_file_persists():
    (h,) = _history_for({"v1", "v2"}, {v: {"a.c"} for v in _V})
    assert (h.birth_version, h.death_version) == ("v1", "v3")
    assert h.left_censored and not h.right_censored and not h.died_with_file


def test_history_open_at_last_version():
    (h,) = _history_for({"v2", "v3"}, {v: {"a.c"} for v in _V})
    assert h.death_version is None and h.right_censored and not h.left_censored


def test_history_born_and_died_with_file():
    (h,) = _history_for({"v2"}, {"v1": set(), "v2": {"a.c"}, "v3": set()})
    assert h.born_with_file and h.died_with_file and h.death_version == "v3"


def test_only_fault_groups_become_histories():
    reports = {"v1": [R(1), R(2)]}
    groups = track_groups(["v1"], reports, {})
    a, b = sorted(groups)
    hs = build_histories(groups, [Annotation(a, FAULT), Annotation(b, FP)], ["v1"], {"v1": {"a.c"}}, ingest.dir_class)
    assert [h.group_id for h in hs] == [a]


def test_contradictory_annotations_raise():
    groups = track_groups(["v1"], {"v1": [R(1)]}, {})
    (gid,) = groups
    with pytest.raises(AnnotationConflict, match=gid):
        build_histories(groups, [Annotation(gid, FAULT), Annotation(gid, FP)], ["v1"], {"v1": {"a.c"}},
                        ingest.dir_class)
    # passing through unknown is a legitimate change of mind
    hs = build_histories(groups, [Annotation(gid, FAULT), Annotation(gid, UNKNOWN), Annotation(gid, FP)],
                         ["v1"], {"v1": {"a.c"}}, ingest.dir_class)
    assert hs == []


def test_every_fault_report_in_exactly_one_history():
    rng = random.Random(3)
    versions = [f"v{i}" for i in range(6)]
    reports = {v: sorted({R(rng.randrange(1, 40), rng.choice(["Lock", "Null"])) for _ in range(12)}) for v in versions}
    corr = {(a, b): correlate(reports[a], reports[b], {"a.c": None})[0] for a, b in zip(versions, versions[1:])}
    groups = track_groups(versions, reports, corr)
    store = [Annotation(gid, FAULT) for gid in groups]
    hs = build_histories(groups, store, versions, {v: {"a.c"} for v in versions}, ingest.dir_class)
    owner = {}
    for h in hs:
        for v, line, _ in groups[h.group_id].members:
            key = (v, line, h.checker)
            assert key not in owner
            owner[key] = h.group_id
    assert set(owner) == {(v, r.line, r.checker) for v in versions for r in reports[v]}
    assert effective(store).keys() == groups.keys()
