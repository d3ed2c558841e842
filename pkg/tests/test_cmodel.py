from collections import Counter

from hypothesis import given, settings
from hypothesis import strategies as st

from kernscan.cmodel import (
    ArrayDecl,
    Assign,
    Branch,
    Call,
    Deref,
    FloatConst,
    NullTest,
    Return,
    SizeofSelf,
    dump_events,
    extract_functions,
    iter_events,
    model_file,
    tokenize,
    untokenize,
)
from kernscan.cmodel.lexer import COMMENT, FLOAT, IDENTIFIER, PREPROC


def events_of(src, name=None):
    models = model_file(src, "t.c")
    if name is not None:
        models = [m for m in models if m.name == name]
    return [e for m in models for e in iter_events(m.body)]


# --- tokenize ---------------------------------------------------------------


def test_float_literal_classified():
    toks = tokenize("x = 0.5f;")
    assert any(t.kind == FLOAT and t.text == "0.5f" for t in toks)


def test_comment_yields_no_identifier():
    toks = tokenize("/* a */ b")
    assert [t.text for t in toks if t.kind == IDENTIFIER] == ["b"]
    assert [t.kind for t in toks] == [COMMENT, IDENTIFIER]


def test_preprocessor_line_is_one_token_and_not_expanded():
    toks = tokenize("#define N 1024\nchar a[N];")
    assert toks[0].kind == PREPROC and toks[0].line == 1
    assert any(t.kind == IDENTIFIER and t.text == "N" and t.line == 2 for t in toks)


def test_string_contents_never_identifiers():
    toks = tokenize('printk("spin_lock %d\\n", x);')
    assert [t.text for t in toks if t.kind == IDENTIFIER] == ["printk", "x"]


def test_unterminated_comment_recovers_with_diagnostic():
    diags = []
    toks = tokenize("int a; /* open\nint b;", diags)
    assert diags
    assert toks[0].text == "int"


def test_line_numbers_exact_across_multiline_comment():
    toks = tokenize("/* one\n two\n three */ x\ny")
    assert [(t.text, t.line) for t in toks if t.kind == IDENTIFIER] == [("x", 3), ("y", 4)]


_c_text = st.text(alphabet=st.sampled_from(list("abcxyz019 _;(){}[]*&!=<>+-/\"'\n.#fFeE")), max_size=120)


@given(_c_text)
@settings(max_examples=300)
def test_tokenize_print_idempotent(src):
    toks = tokenize(src)
    again = tokenize(untokenize(toks))
    assert [(t.kind, t.text) for t in again] == [(t.kind, t.text) for t in toks]


@given(_c_text)
@settings(max_examples=300)
def test_token_lines_monotone_and_in_range(src):
    toks = tokenize(src)
    lines = [t.line for t in toks]
    assert lines == sorted(lines)
    assert all(1 <= l <= src.count("\n") + 1 for l in lines)


# --- extract_functions ------------------------------------------------------


def test_single_line_function():
    (m,) = model_file("int f(void){return 0;}", "a.c")
    assert m.name == "f" and m.size == 1


def test_initializer_braces_not_functions():
    assert model_file("struct x v = {1,2};", "a.c") == []


def test_prototype_not_function():
    assert model_file("int f(int a);\nint g(void);\n", "a.c") == []


def test_unbalanced_braces_keep_earlier_functions():
    src = "int a(void)\n{\n\treturn 1;\n}\nint b(void)\n{\n#ifdef X\n}\n#else\n}\n#endif\nint c(void) { return 2; }\n"
    diags = []
    names = [m.name for m in model_file(src, "a.c", diags)]
    assert names[0] == "a"
    assert diags


@given(st.lists(st.sampled_from(["{", "}", "int f(void) {", "x = 1;", "\n", "struct s v = {1};"]), max_size=30))
@settings(max_examples=300)
def test_extract_never_crashes_and_functions_are_ordered(parts):
    src = "\n".join(parts)
    diags = []
    models = model_file(src, "fuzz.c", diags)
    for m in models:
        assert m.start_line <= m.end_line
        for e in iter_events(m.body):
            assert m.start_line <= e.line <= m.end_line
    starts = [m.start_line for m in models]
    assert starts == sorted(starts)


def test_determinism():
    src = "int f(struct d *p)\n{\n\tif (!p)\n\t\treturn -1;\n\tp->x = kmalloc(8, GFP_KERNEL);\n\treturn 0;\n}\n"
    assert model_file(src, "a.c") == model_file(src, "a.c")


# --- build_events -----------------------------------------------------------


def test_null_test_with_return_then_deref():
    (m,) = model_file("void f(int *p){ if (!p) return; *p = 1; }", "a.c")
    br, deref, _assign = m.body
    assert isinstance(br, Branch)
    assert br.condition == (NullTest(1, "p", "is_null"),)
    assert isinstance(br.then[0], Return)
    assert deref == Deref(1, "p")


def test_null_test_polarities():
    evs = events_of("void f(int *p, int *q, int *r, int *s){ if (p == NULL) a(); if (q) b(); if (r != NULL) c(); if (!s) d(); }")
    tests = [(e.key, e.polarity) for e in evs if isinstance(e, NullTest)]
    assert tests == [("p", "is_null"), ("q", "is_not_null"), ("r", "is_not_null"), ("s", "is_null")]


def test_char_array_decl():
    (e,) = [e for e in events_of("void f(void){ char buf[1024]; }") if isinstance(e, ArrayDecl)]
    assert (e.element_type, e.count) == ("char", 1024)


def test_macro_array_count_is_not_constant():
    (e,) = [e for e in events_of("void f(void){ char buf[N]; }") if isinstance(e, ArrayDecl)]
    assert e.count is None


def test_kmalloc_call_fields():
    (c,) = [e for e in events_of("void g(void){ n = kmalloc(sizeof(struct a), GFP_KERNEL); }") if isinstance(e, Call)]
    assert c.callee == "kmalloc"
    assert c.has_gfp_kernel
    assert c.sizeof_args == ("struct a",)
    assert c.assigned_to == "n"


def test_gfp_atomic_is_not_gfp_kernel():
    (c,) = [e for e in events_of("void g(void){ n = kmalloc(8, GFP_ATOMIC); }") if isinstance(e, Call)]
    assert not c.has_gfp_kernel


def test_sizeof_self():
    evs = events_of("void g(void){ struct a *q; q = kmalloc(sizeof(q), GFP_ATOMIC); }")
    assert SizeofSelf(1, "q") in evs


def test_float_folding():
    evs = events_of("void f(void){ d = 0.5 * HZ; x = 0.5; y = 2.0 * 3; }")
    floats = [(e.text, e.folded_with_constant) for e in evs if isinstance(e, FloatConst)]
    assert floats == [("0.5", True), ("0.5", False), ("2.0", True)]


def test_member_deref_and_assign_key():
    evs = events_of("void f(struct d *dev){ dev->priv = 0; }")
    assert Deref(1, "dev") in evs and Assign(1, "dev->priv") in evs


def test_events_dump_sorted():
    src = "void f(int *p)\n{\n\t*p = 1;\n\tif (p)\n\t\tg(p);\n}\n"
    lines = dump_events(model_file(src, "a.c"))
    keys = [(int(l.split("\t")[0]), l.split("\t")[1]) for l in lines]
    assert keys == sorted(keys)


# --- round trip: planted events on random straight-line programs -------------

_PTRS = ["p", "q", "dev", "skb"]
_FNS = ["alloc_a", "lookup_b", "grab_c"]


@st.composite
def planted_program(draw):
    stmts, planted = [], []
    n = draw(st.integers(1, 12))
    for _ in range(n):
        line = len(stmts) + 3
        choice = draw(st.integers(0, 3))
        p = draw(st.sampled_from(_PTRS))
        if choice == 0:
            fn = draw(st.sampled_from(_FNS))
            stmts.append(f"\t{p} = {fn}(x);")
            planted += [("Assign", p, line), ("Call", fn, line)]
        elif choice == 1:
            stmts.append(f"\t{p}->len = 0;")
            planted += [("Deref", p, line), ("Assign", f"{p}->len", line)]
        elif choice == 2:
            stmts.append(f"\tif (!{p})\n\t\treturn;")
            planted += [("NullTest", p, line), ("Return", "", line + 1)]
            stmts.append(None)  # the return occupies a line
        else:
            size = draw(st.integers(1, 4096))
            stmts.append(f"\tchar b{line}[{size}];")
            planted += [("ArrayDecl", f"b{line}", line)]
    body = "\n".join(s for s in stmts if s is not None)
    return "void f(int x)\n{\n" + body + "\n}\n", planted


def _sig(e):
    if isinstance(e, Call):
        return ("Call", e.callee, e.line)
    if isinstance(e, Return):
        return ("Return", "", e.line)
    if isinstance(e, ArrayDecl):
        return ("ArrayDecl", e.name, e.line)
    return (e.kind, e.key, e.line)


@given(planted_program())
@settings(max_examples=200)
def test_events_emitted_equal_events_planted(prog):
    src, planted = prog
    got = Counter(_sig(e) for e in events_of(src))
    assert got == Counter(planted)


def test_extract_functions_reports_names_in_order():
    toks = tokenize("static int a(void) { return 0; }\nint b(int x) { return x; }\n")
    assert [f.name for f in extract_functions(toks, "a.c")] == ["a", "b"]
