import dataclasses
from collections import Counter

import pytest

from kernscan import corpus
from kernscan.checkers import (
    KIND_NAMES,
    KINDS,
    check_models,
    count_notes,
    faults_outside_notes,
    validate_kinds,
)
from kernscan.closure import compute_closures
from kernscan.cmodel import model_file
from kernscan.config import DEFAULT_CONFIG


def run(src, config=DEFAULT_CONFIG):
    return check_models(model_file(src, "t.c"), config)


def kinds_at(res):
    return sorted((r.checker, r.line) for r in res.reports)


def notes_of(res, kind):
    return [n for n in res.notes if n.checker == kind]


def fn(body, sig="int f(struct d *p, struct d *q, int e)"):
    return sig + "\n{\n" + body + "\n}\n"


# --- metadata ---------------------------------------------------------------


def test_assessment_metadata():
    assert KINDS["Lock"][1:] == ("easy", "easy", "high")
    assert KINDS["Null"][1:] == ("hard", "hard", "low")
    assert KINDS["NullRef"][1:] == ("easy", "hard", "low")
    assert KINDS["Free"][1:] == ("hard", "easy", "high")
    assert KINDS["BlockRCU"][1:] == KINDS["BlockLock"][1:]
    assert KINDS["LockRCU"][1:] == KINDS["Lock"][1:]
    assert len(KIND_NAMES) == 16


def test_unknown_kind_rejected():
    with pytest.raises(ValueError):
        validate_kinds(["Lock", "Bogus"])


def test_lock_lists_must_be_disjoint():
    with pytest.raises(ValueError):
        dataclasses.replace(DEFAULT_CONFIG, unlock_fns=("spin_lock",))


# --- blocking ---------------------------------------------------------------


def test_block_under_spinlock():
    res = run(fn("\tspin_lock(&l);\n\tkmalloc(8, GFP_KERNEL);\n\tspin_unlock(&l);\n\treturn 0;"))
    assert ("BlockLock", 4) in kinds_at(res)


def test_block_with_interrupts_off():
    src = "void g(void) { schedule(); }\n" + fn("\tcli();\n\tg();\n\tsti();\n\treturn 0;")
    res = run(src)
    assert ("BlockIntr", 5) in kinds_at(res)


def test_block_after_release_is_note_only():
    res = run(fn("\tspin_lock(&l);\n\tspin_unlock(&l);\n\tschedule();\n\treturn 0;"))
    assert not [r for r in res.reports if r.checker.startswith("Block")]
    assert len(notes_of(res, "BlockLock")) == 1


def test_block_under_mutex_is_fine():
    res = run(fn("\tmutex_lock(&m);\n\tschedule();\n\tmutex_unlock(&m);\n\treturn 0;"))
    assert not [r for r in res.reports if r.checker == "BlockLock"]


def test_block_under_rcu():
    res = run(fn("\trcu_read_lock();\n\tschedule();\n\trcu_read_unlock();\n\treturn 0;"))
    assert ("BlockRCU", 4) in kinds_at(res)


def test_combined_sets_lock_and_intr():
    res = run(fn("\tspin_lock_irqsave(&l, fl);\n\tschedule();\n\tspin_unlock_irqrestore(&l, fl);\n\treturn 0;"))
    got = kinds_at(res)
    assert ("BlockLock", 4) in got and ("BlockIntr", 4) in got


# --- balance ----------------------------------------------------------------


def test_mutex_held_on_error_return():
    res = run(fn("\tmutex_lock(&m);\n\tif (e)\n\t\treturn -1;\n\tmutex_unlock(&m);\n\treturn 0;"))
    assert kinds_at(res) == [("Lock", 3)]


def test_double_acquire_is_lock_fault():
    res = run(fn("\tspin_lock(&l);\n\tspin_lock(&l);\n\tspin_unlock(&l);\n\treturn 0;"))
    assert "Lock" in {r.checker for r in res.reports}


def test_nested_rcu_is_allowed():
    res = run(fn("\trcu_read_lock();\n\trcu_read_lock();\n\trcu_read_unlock();\n\trcu_read_unlock();\n\treturn 0;"))
    assert res.reports == []
    assert len(notes_of(res, "LockRCU")) == 2


def test_rcu_never_released():
    res = run(fn("\trcu_read_lock();\n\tif (e)\n\t\treturn 1;\n\trcu_read_unlock();\n\treturn 0;"))
    assert kinds_at(res) == [("LockRCU", 3)]


def test_irqsave_held_at_exit():
    res = run(fn("\tspin_lock_irqsave(&l, fl);\n\treturn 0;"))
    assert kinds_at(res) == [("LockIntr", 3)]


def test_interrupts_left_off():
    res = run(fn("\tcli();\n\tif (e)\n\t\treturn 1;\n\tsti();\n\treturn 0;"))
    assert kinds_at(res) == [("Intr", 3)]


# --- null returns -----------------------------------------------------------

_ALLOC = "struct d *alloc(int k) { if (k) return NULL; return &t; }\n"


def test_unchecked_null_return():
    res = run(_ALLOC + fn("\tp = alloc(e);\n\tp->x = 1;\n\treturn 0;"))
    assert ("Null", 4) in kinds_at(res)


def test_checked_null_return_is_note_only():
    res = run(_ALLOC + fn("\tp = alloc(e);\n\tif (!p)\n\t\treturn -1;\n\tp->x = 1;\n\treturn 0;"))
    assert not [r for r in res.reports if r.checker == "Null"]
    assert len(notes_of(res, "Null")) == 1


def test_null_return_other_key_not_reported():
    res = run(_ALLOC + fn("\tp = alloc(e);\n\tq->x = 1;\n\treturn 0;"))
    assert not [r for r in res.reports if r.checker == "Null"]


# --- inconsistent null tests ------------------------------------------------


def test_deref_in_null_arm():
    res = run(fn("\tif (p == NULL)\n\t\tp->x = 1;\n\treturn 0;"))
    assert ("IsNull", 3) in kinds_at(res)


def test_test_after_deref():
    res = run(fn("\tn = p->priv;\n\tif (!p)\n\t\treturn -1;\n\treturn n;"))
    assert kinds_at(res) == [("NullRef", 4)]


def test_reassignment_kills_nullref():
    res = run(fn("\t*p = 1;\n\tp = q;\n\tif (!p)\n\t\treturn -1;\n\treturn 0;"))
    assert not [r for r in res.reports if r.checker == "NullRef"]


# --- free -------------------------------------------------------------------


def test_use_after_kfree():
    res = run(fn("\tkfree(p);\n\treturn p->len;"))
    assert kinds_at(res) == [("Free", 3)]


def test_nulled_after_free():
    res = run(fn("\tkfree(p);\n\tp = NULL;\n\treturn 0;"))
    assert res.reports == []
    assert len(notes_of(res, "Free")) == 1


def test_use_after_wrapper_free():
    src = "void my_free(struct d *x) { kfree(x); }\n" + fn("\tmy_free(p);\n\tuse(p);\n\treturn 0;")
    res = run(src)
    assert ("Free", 4) in kinds_at(res)


# --- intraprocedural --------------------------------------------------------


def test_large_char_array():
    assert kinds_at(run(fn("\tchar buf[1024];\n\treturn 0;"))) == [("Var", 3)]


def test_array_below_threshold():
    res = run(fn("\tchar buf[1023];\n\treturn 0;"))
    assert res.reports == [] and len(notes_of(res, "Var")) == 1


def test_int_array_scaled_by_element_size():
    assert kinds_at(run(fn("\tint v[256];\n\treturn 0;"))) == [("Var", 3)]


def test_unchecked_user_index():
    res = run(fn("\tint i;\n\tget_user(i, up);\n\ttab[i] = 0;\n\treturn 0;"))
    assert ("Range", 4) in kinds_at(res)


def test_bounded_user_index():
    res = run(fn("\tint i;\n\tget_user(i, up);\n\tif (i < n)\n\t\ttab[i] = 0;\n\treturn 0;"))
    assert not [r for r in res.reports if r.checker == "Range"]


def test_float_folded_and_bare():
    res = run(fn("\tdouble d = 0.5 * HZ_CONST;\n\tx = 0.5;\n\treturn 0;"))
    assert kinds_at(res) == [("Float", 4)]
    # every float report is its own note
    assert [n.line for n in notes_of(res, "Float")] == [4]


def test_sizeof_pointer_allocation():
    res = run(fn("\tstruct d *n;\n\tn = kmalloc(sizeof(n), GFP_KERNEL);\n\treturn 0;"))
    assert ("Size", 4) in kinds_at(res)


def test_sizeof_type_mismatch():
    res = run(fn("\tstruct d *n;\n\tn = kmalloc(sizeof(struct e), GFP_KERNEL);\n\treturn 0;"))
    assert ("Size", 4) in kinds_at(res)


def test_sizeof_matching_type():
    res = run(fn("\tstruct d *n;\n\tn = kmalloc(sizeof(struct d), GFP_KERNEL);\n\treturn 0;"))
    assert not [r for r in res.reports if r.checker == "Size"]


# --- rcu_dereference --------------------------------------------------------


def test_deref_rcu_outside_section():
    assert kinds_at(run(fn("\tp = rcu_dereference(q);\n\treturn 0;"))) == [("DerefRCU", 3)]


def test_deref_rcu_inside_section():
    res = run(fn("\trcu_read_lock();\n\tp = rcu_dereference(q);\n\trcu_read_unlock();\n\treturn 0;"))
    assert res.reports == [] and len(notes_of(res, "DerefRCU")) == 1


def test_deref_rcu_inside_srcu_section():
    res = run(fn("\tidx = srcu_read_lock(&s);\n\tp = rcu_dereference(q);\n\tsrcu_read_unlock(&s, idx);\n\treturn 0;"))
    assert not [r for r in res.reports if r.checker == "DerefRCU"]


# --- notes ------------------------------------------------------------------


def test_three_spin_locks_three_notes():
    src = fn("\tspin_lock(&a);\n\tspin_unlock(&a);\n\tspin_lock(&b);\n\tspin_unlock(&b);\n\tspin_lock(&c);\n\tspin_unlock(&c);\n\treturn 0;")
    models = model_file(src, "t.c")
    assert count_notes(models, compute_closures(models))["Lock"] == 3


def test_one_byte_sizeof_has_no_note():
    models = model_file(fn("\tbuf = kmalloc(sizeof(char) * e, GFP_KERNEL);\n\treturn 0;"), "t.c")
    assert count_notes(models, compute_closures(models))["Size"] == 0


def test_no_constructs_no_notes():
    models = model_file("int f(int a) { return a + 1; }\n", "t.c")
    assert set(count_notes(models, compute_closures(models)).values()) == {0}


# --- invariants -------------------------------------------------------------


def test_duplicated_if_arms_deduplicated():
    src = fn("#ifdef A\n\tkfree(p);\n\treturn p->len;\n#else\n\tkfree(p);\n\treturn p->len;\n#endif")
    res = run(src)
    keys = [(r.checker, r.file, r.line, r.key) for r in res.reports]
    assert len(keys) == len(set(keys))


def test_removing_lock_fn_never_adds_lock_reports():
    src = fn("\tspin_lock(&l);\n\tif (e)\n\t\treturn 1;\n\tmutex_lock(&m);\n\tif (e > 1)\n\t\treturn 2;\n"
             "\tmutex_unlock(&m);\n\tspin_unlock(&l);\n\treturn 0;")
    base = Counter(r.checker for r in run(src).reports)["Lock"]
    for name in DEFAULT_CONFIG.lock_fns:
        cfg = dataclasses.replace(DEFAULT_CONFIG, lock_fns=tuple(x for x in DEFAULT_CONFIG.lock_fns if x != name))
        assert Counter(r.checker for r in run(src, cfg).reports)["Lock"] <= base


def test_output_order_and_determinism():
    src = _ALLOC + fn("\tkfree(q);\n\tp = alloc(e);\n\tp->x = q->y;\n\tchar b[2048];\n\tx = 1.5;\n\treturn 0;")
    a, b = run(src), run(src)
    assert a.reports == b.reports and a.notes == b.notes
    assert a.reports == sorted(a.reports)


# --- planted corpus ---------------------------------------------------------


@pytest.fixture(scope="module")
def corpus_results():
    out = {}
    for i, (v, _) in enumerate(corpus.VERSIONS):
        models = []
        for path, text in sorted(corpus.version_files(i).items()):
            if path.endswith(".c"):
                models += model_file(text, path)
        out[v] = check_models(models)
    return out


@pytest.mark.parametrize("version", [v for v, _ in corpus.VERSIONS])
def test_planted_corpus_exact(corpus_results, version):
    res = corpus_results[version]
    got = {(r.file, r.line, r.checker) for r in res.reports}
    plants = [p for p in corpus.plants() if p.version == version]
    positives = {(p.file, p.line, p.checker) for p in plants if p.positive}
    near_misses = {(p.file, p.line, p.checker) for p in plants if not p.positive}
    assert got == positives
    assert not got & near_misses
    assert faults_outside_notes(res.reports, res.notes) == []


def test_every_kind_planted_twice_each_way():
    plants = [p for p in corpus.plants() if p.version == corpus.VERSIONS[0][0]]
    tp = Counter(p.checker for p in plants if p.positive)
    nm = Counter(p.checker for p in plants if not p.positive)
    for k in KIND_NAMES:
        assert tp[k] >= 2 and nm[k] >= 2, k
