"""Turn a function body into a branch-structured event tree."""

from __future__ import annotations

from dataclasses import replace

from . import events as ev
from .events import Branch, Fact, FunctionModel, Jump, Label, Switch
from .expr import (
    ARITH,
    COMPARISONS,
    QUALIFIER_IDENTS,
    STORAGE_KEYWORDS,
    TYPE_KEYWORDS,
    AssignExpr,
    Binary,
    CallExpr,
    Cast,
    Comma,
    Const,
    ExprParser,
    Index,
    InitList,
    Member,
    Name,
    Node,
    Opaque,
    ParseError,
    Postfix,
    Sizeof,
    Ternary,
    Unary,
    is_constant,
    is_lvalue_path,
    is_typedef_name,
    key_of,
    strip_casts,
    type_text,
)
from .lexer import IDENTIFIER, KEYWORD, NUMBER, PUNCT, Token

TRYLOCK_SUFFIX = "_trylock"
_TRANSPARENT_CALLS = frozenset(("likely", "unlikely"))
_ASM = frozenset(("asm", "__asm__", "__asm"))


def _int_value(text: str) -> int | None:
    t = text.rstrip("uUlL")
    try:
        if t.lower().startswith("0x"):
            return int(t, 16)
        if len(t) > 1 and t.startswith("0"):
            return int(t, 8)
        return int(t)
    except ValueError:
        return None


def _unwrap_condition(node: Node) -> Node:
    node = strip_casts(node)
    while (
        isinstance(node, CallExpr)
        and isinstance(node.func, Name)
        and node.func.text in _TRANSPARENT_CALLS
        and len(node.args) == 1
    ):
        node = strip_casts(node.args[0])
    return node


def _is_null(node: Node) -> bool:
    node = strip_casts(node)
    return isinstance(node, Name) and node.text == "NULL"


class EventBuilder:
    """Walks expression ASTs and emits events in evaluation order."""

    def __init__(self, variables: set[str]):
        self.variables = variables

    # --- expressions -----------------------------------------------------
    def emit(self, node: Node, out: list, folded: bool = False) -> None:
        if node is None or isinstance(node, Opaque):
            return
        if isinstance(node, Name):
            return
        if isinstance(node, Const):
            if node.ckind == "float":
                out.append(ev.FloatConst(node.line, node.text, folded))
            return
        if isinstance(node, CallExpr):
            self.emit_call(node, out, None)
            return
        if isinstance(node, Index):
            self.emit(node.base, out)
            self.emit(node.index, out)
            out.append(ev.Deref(node.line, key_of(node.base)))
            idx = strip_casts(node.index)
            if is_lvalue_path(idx):
                out.append(ev.IndexUse(node.line, key_of(idx)))
            return
        if isinstance(node, Member):
            self.emit(node.base, out)
            if node.op == "->":
                out.append(ev.Deref(node.line, key_of(node.base)))
            return
        if isinstance(node, Unary):
            self.emit(node.operand, out, folded)
            if node.op == "*":
                out.append(ev.Deref(node.line, key_of(node.operand)))
            elif node.op in ("++", "--") and is_lvalue_path(node.operand):
                out.append(ev.Assign(node.line, key_of(node.operand)))
            return
        if isinstance(node, Postfix):
            self.emit(node.operand, out)
            if is_lvalue_path(node.operand):
                out.append(ev.Assign(node.line, key_of(node.operand)))
            return
        if isinstance(node, Binary):
            fold_l = fold_r = False
            if node.op in ARITH:
                fold_l = is_constant(node.right)
                fold_r = is_constant(node.left)
            self.emit(node.left, out, fold_l)
            self.emit(node.right, out, fold_r)
            if node.op in COMPARISONS and not (_is_null(node.left) or _is_null(node.right)):
                for side in (node.left, node.right):
                    side = strip_casts(side)
                    if is_lvalue_path(side):
                        out.append(ev.BoundCheck(node.line, key_of(side)))
            return
        if isinstance(node, AssignExpr):
            self.emit_assign(node.target, node.value, out, node.line)
            return
        if isinstance(node, Ternary):
            self.emit_condition_atoms(node.test, out)
            self.emit(node.then, out)
            self.emit(node.orelse, out)
            return
        if isinstance(node, Cast):
            self.emit(node.operand, out, folded)
            return
        if isinstance(node, Sizeof):
            if node.operand is not None:
                out.append(ev.SizeofExpr(node.line, key_of(node.operand)))
            return
        if isinstance(node, (Comma, InitList)):
            for item in node.items:
                self.emit(item, out)
            return

    def _sizeof_types(self, node: Node, acc: list[str]) -> None:
        if isinstance(node, Sizeof):
            if node.type is not None:
                acc.append(node.type)
            elif isinstance(node.operand, Name) and node.operand.text not in self.variables and (
                is_typedef_name(node.operand.text)
            ):
                acc.append(node.operand.text)
            return
        for child in _children(node):
            self._sizeof_types(child, acc)

    def emit_call(self, node: CallExpr, out: list, assigned_to: str | None, conditional: bool = False,
                  assign_line: int | None = None) -> None:
        func = strip_casts(node.func)
        for arg in node.args:
            self.emit(arg, out)
        if not isinstance(func, Name):
            # call through a pointer: only the dereferences count
            self.emit(func, out)
            if assigned_to is not None:
                out.append(ev.Assign(assign_line or node.line, assigned_to))
            return
        if func.text in _TRANSPARENT_CALLS:
            if assigned_to is not None:
                out.append(ev.Assign(assign_line or node.line, assigned_to))
            return
        sizes: list[str] = []
        gfp = False
        for arg in node.args:
            self._sizeof_types(arg, sizes)
            gfp = gfp or _mentions(arg, "GFP_KERNEL")
        arg_keys = [key_of(strip_casts(a)) for a in node.args]
        if assigned_to is not None:
            # the assignment kills old facts about the target before the
            # call establishes new ones
            out.append(ev.Assign(assign_line or node.line, assigned_to))
        out.append(
            ev.Call(
                func.line,
                func.text,
                tuple(arg_keys),
                gfp,
                tuple(sizes),
                assigned_to,
                conditional,
            )
        )

    def emit_assign(self, target: Node, value: Node | None, out: list, line: int) -> None:
        target_s = strip_casts(target)
        # dereferences performed by the left-hand side
        if isinstance(target_s, Member):
            self.emit(target_s.base, out)
            if target_s.op == "->":
                out.append(ev.Deref(target_s.line, key_of(target_s.base)))
        elif isinstance(target_s, Index):
            self.emit(target_s, out)
        elif isinstance(target_s, Unary) and target_s.op == "*":
            self.emit(target_s, out)
        elif not isinstance(target_s, Name):
            self.emit(target_s, out)
        tkey = key_of(target_s)
        if value is None:
            out.append(ev.Assign(line, tkey))
            return
        vtmp: list = []
        inner = strip_casts(value)
        if isinstance(inner, CallExpr) and isinstance(strip_casts(inner.func), Name):
            self.emit_call(inner, vtmp, tkey, assign_line=line)
        else:
            self.emit(value, vtmp)
            vtmp.append(ev.Assign(line, tkey))
        # sizeof(target) on the right-hand side is a SizeofSelf, not a plain SizeofExpr
        for e in vtmp:
            if isinstance(e, ev.SizeofExpr) and e.key == tkey:
                e = ev.SizeofSelf(e.line, e.key)
            out.append(e)

    # --- conditions --------------------------------------------------------
    def atom_test(self, atom: Node) -> tuple[str, str] | None:
        """(key, polarity) when *atom* is a recognisable null test."""
        atom = _unwrap_condition(atom)
        if isinstance(atom, Unary) and atom.op == "!":
            inner = _unwrap_condition(atom.operand)
            if is_lvalue_path(inner):
                return key_of(inner), ev.IS_NULL
            if isinstance(inner, AssignExpr) and is_lvalue_path(inner.target):
                return key_of(inner.target), ev.IS_NULL
            return None
        if isinstance(atom, Binary) and atom.op in ("==", "!="):
            pol = ev.IS_NULL if atom.op == "==" else ev.IS_NOT_NULL
            for a, b in ((atom.left, atom.right), (atom.right, atom.left)):
                if _is_null(b):
                    a = _unwrap_condition(a)
                    if is_lvalue_path(a):
                        return key_of(a), pol
                    if isinstance(a, AssignExpr) and is_lvalue_path(a.target):
                        return key_of(a.target), pol
            return None
        if is_lvalue_path(atom):
            return key_of(atom), ev.IS_NOT_NULL
        if isinstance(atom, AssignExpr) and atom.op == "=" and is_lvalue_path(atom.target):
            return key_of(atom.target), ev.IS_NOT_NULL
        return None

    def atom_trylock(self, atom: Node) -> tuple[CallExpr, bool] | None:
        atom = _unwrap_condition(atom)
        negated = False
        if isinstance(atom, Unary) and atom.op == "!":
            atom = _unwrap_condition(atom.operand)
            negated = True
        if (
            isinstance(atom, CallExpr)
            and isinstance(strip_casts(atom.func), Name)
            and strip_casts(atom.func).text.endswith(TRYLOCK_SUFFIX)
        ):
            return atom, negated
        return None

    def emit_atom(self, atom: Node, out: list) -> list[Fact]:
        """Emit one condition atom; return the facts that hold when it is true."""
        facts: list[Fact] = []
        tl = self.atom_trylock(atom)
        if tl is not None:
            call, negated = tl
            before = len(out)
            self.emit_call(call, out, None, conditional=True)
            c = out[-1] if len(out) > before and isinstance(out[-1], ev.Call) else None
            if c is not None:
                key = c.arg_keys[0] if c.arg_keys else ""
                fact = Fact("trylock", key, c.line, c.callee)
                return [] if negated else [fact]
            return facts
        unwrapped = _unwrap_condition(atom)
        test = self.atom_test(atom)
        if test is not None:
            key, pol = test
            # operands of the test are evaluated first
            if isinstance(unwrapped, Unary):
                self.emit(_unwrap_condition(unwrapped.operand), out)
            elif isinstance(unwrapped, Binary):
                self.emit(unwrapped.left, out)
                self.emit(unwrapped.right, out)
            else:
                self.emit(unwrapped, out)
            line = getattr(unwrapped, "line", atom.line)
            out.append(ev.NullTest(line, key, pol))
            facts.append(Fact("null" if pol == ev.IS_NULL else "nonnull", key, line))
            return facts
        self.emit_condition_atoms(unwrapped, out)
        return facts

    def emit_condition_atoms(self, node: Node, out: list) -> None:
        """Emit a condition with no arm facts (nested / mixed connectives)."""
        node = _unwrap_condition(node)
        if isinstance(node, Binary) and node.op in ("&&", "||"):
            self.emit_condition_atoms(node.left, out)
            self.emit_condition_atoms(node.right, out)
            return
        if self.atom_test(node) is not None or self.atom_trylock(node) is not None:
            if self.atom_trylock(node) is not None:
                # a trylock not in a position we can track: treat as taken
                call, _ = self.atom_trylock(node)
                self.emit_call(call, out, None)
                return
            self.emit_atom(node, out)
            return
        self.emit(node, out)

    def emit_condition(self, cond: Node) -> tuple[list, tuple, tuple]:
        """Return (events, facts-if-true, facts-if-false) for a branch condition."""
        out: list = []
        cond = _unwrap_condition(cond)
        if isinstance(cond, Binary) and cond.op in ("&&", "||"):
            op = cond.op
            atoms = _flatten(cond, op)
            if any(isinstance(_unwrap_condition(a), Binary) and _unwrap_condition(a).op in ("&&", "||")
                   for a in atoms):
                self.emit_condition_atoms(cond, out)
                return out, (), ()
            facts = []
            for a in atoms:
                facts.extend(self.emit_atom(a, out))
            if op == "&&":
                return out, tuple(facts), ()
            return out, (), tuple(_negate(f) for f in facts if f.kind != "trylock")
        facts = self.emit_atom(cond, out)
        if not facts:
            tl = self.atom_trylock(cond)
            if tl is not None and tl[1]:
                c = out[-1]
                key = c.arg_keys[0] if c.arg_keys else ""
                return out, (), (Fact("trylock", key, c.line, c.callee),)
        pos = tuple(facts)
        neg = tuple(_negate(f) for f in facts if f.kind != "trylock")
        return out, pos, neg


def _negate(f: Fact) -> Fact:
    return replace(f, kind="nonnull" if f.kind == "null" else "null")


def _flatten(node: Node, op: str) -> list[Node]:
    node = _unwrap_condition(node)
    if isinstance(node, Binary) and node.op == op:
        return _flatten(node.left, op) + _flatten(node.right, op)
    return [node]


def _children(node: Node):
    if isinstance(node, CallExpr):
        return [node.func, *node.args]
    if isinstance(node, Index):
        return [node.base, node.index]
    if isinstance(node, (Member,)):
        return [node.base]
    if isinstance(node, (Unary, Postfix, Cast)):
        return [node.operand]
    if isinstance(node, Binary):
        return [node.left, node.right]
    if isinstance(node, AssignExpr):
        return [node.target, node.value]
    if isinstance(node, Ternary):
        return [node.test, node.then, node.orelse]
    if isinstance(node, (Comma, InitList)):
        return list(node.items)
    if isinstance(node, Sizeof) and node.operand is not None:
        return [node.operand]
    return []


def _mentions(node: Node, name: str) -> bool:
    if isinstance(node, Name):
        return node.text == name
    return any(_mentions(c, name) for c in _children(node))


# --- statements ------------------------------------------------------------

_STMT_KEYWORDS = frozenset(
    "if else while for do switch case default return break continue goto".split()
)


class StatementParser:
    def __init__(self, tokens: list[Token], model: FunctionModel):
        self.toks = tokens
        self.pos = 0
        self.model = model
        self.variables: set[str] = set(model.params)
        self.builder = EventBuilder(self.variables)

    # helpers
    def peek(self, off: int = 0) -> Token | None:
        i = self.pos + off
        return self.toks[i] if i < len(self.toks) else None

    def at(self, text: str, off: int = 0) -> bool:
        t = self.peek(off)
        return t is not None and t.text == text and t.kind in (PUNCT, KEYWORD)

    def expr_parser(self) -> ExprParser:
        return ExprParser(self.toks, self.pos, self.variables)

    def parse_expr(self, initializer: bool = False) -> Node:
        p = self.expr_parser()
        node = p.parse_initializer() if initializer else p.parse_expression()
        self.pos = p.pos
        return node

    def parse_assignment_expr(self) -> Node:
        p = self.expr_parser()
        node = p.parse_initializer() if p.at("{") else p.parse_assignment()
        self.pos = p.pos
        return node

    def expect(self, text: str) -> Token:
        t = self.peek()
        if t is None or t.text != text:
            raise ParseError(f"expected {text!r}")
        self.pos += 1
        return t

    def skip_statement(self) -> None:
        """Error recovery: skip to the end of the current statement."""
        depth = 0
        while self.pos < len(self.toks):
            t = self.toks[self.pos]
            if t.text in ("(", "[", "{"):
                depth += 1
            elif t.text in (")", "]", "}"):
                if depth == 0:
                    return
                depth -= 1
                if depth == 0 and t.text == "}":
                    self.pos += 1
                    if self.at(";"):
                        self.pos += 1
                    return
            elif t.text == ";" and depth == 0:
                self.pos += 1
                return
            self.pos += 1

    # grammar
    def parse_body(self) -> tuple:
        nodes: list = []
        while self.pos < len(self.toks):
            if self.at("}"):
                # stray closer (only possible from #if-duplicated braces)
                self.pos += 1
                continue
            nodes.extend(self.parse_statement_safe())
        return tuple(nodes)

    def parse_statement_safe(self) -> list:
        start = self.pos
        try:
            return self.parse_statement()
        except (ParseError, IndexError, KeyError):
            self.pos = start
            self.skip_statement()
            if self.pos == start:
                self.pos += 1
            return []

    def parse_block(self) -> list:
        self.expect("{")
        nodes: list = []
        while not self.at("}"):
            if self.peek() is None:
                raise ParseError("unterminated block")
            nodes.extend(self.parse_statement_safe())
        self.pos += 1
        return nodes

    def parse_sub_statement(self) -> tuple:
        return tuple(self.parse_statement_safe())

    def parse_paren_condition(self) -> Node:
        self.expect("(")
        node = self.parse_expr()
        self.expect(")")
        return node

    def parse_statement(self) -> list:
        t = self.peek()
        if t is None:
            return []
        if t.text == "{" and t.kind == PUNCT:
            return self.parse_block()
        if t.text == ";" and t.kind == PUNCT:
            self.pos += 1
            return []
        if t.kind == KEYWORD:
            handler = getattr(self, f"stmt_{t.text}", None)
            if handler is not None:
                return handler()
        if t.kind == IDENTIFIER and t.text in _ASM:
            self.skip_statement()
            return []
        if t.kind == IDENTIFIER and self.at(":", 1) and not self.at(":", 2):
            self.pos += 2
            return [Label(t.line, t.text)]
        if self.is_declaration():
            return self.parse_declaration()
        return self.parse_expression_statement()

    def parse_expression_statement(self) -> list:
        node = self.parse_expr()
        out: list = []
        if not self.at(";"):
            # iterator macro such as list_for_each_entry(pos, head, member) { ... }
            inner = strip_casts(node)
            if isinstance(inner, CallExpr) and self.peek() is not None:
                for a in inner.args:
                    self.builder.emit(a, out)
                body = self.parse_sub_statement()
                return [Branch(inner.line, tuple(out), body, (), (), (), "loop")]
            raise ParseError("missing ';'")
        self.pos += 1
        self.builder.emit(node, out)
        return out

    # declarations
    def is_declaration(self) -> bool:
        t = self.peek()
        if t is None:
            return False
        if t.kind == KEYWORD and (t.text in TYPE_KEYWORDS or t.text in STORAGE_KEYWORDS):
            return True
        if t.kind != IDENTIFIER or t.text in self.variables:
            return False
        nxt = self.peek(1)
        if nxt is None:
            return False
        if nxt.kind == IDENTIFIER and not self.at("(", 2) or (
            nxt.kind == IDENTIFIER and nxt.text in QUALIFIER_IDENTS
        ):
            return True
        if nxt.kind == IDENTIFIER and is_typedef_name(t.text):
            return True
        if nxt.text == "*":
            j = 1
            while self.at("*", j):
                j += 1
            while self.peek(j) is not None and self.peek(j).text in QUALIFIER_IDENTS:
                j += 1
            name = self.peek(j)
            after = self.peek(j + 1)
            if name is not None and name.kind == IDENTIFIER and after is not None and after.text in (
                "=", ";", ",", "[",
            ):
                return True
        return False

    def parse_declaration(self) -> list:
        spec: list[Token] = []
        static = False
        while True:
            t = self.peek()
            if t is None:
                raise ParseError("eof in declaration")
            if t.kind == KEYWORD and t.text in STORAGE_KEYWORDS:
                static = static or t.text == "static"
                self.pos += 1
                continue
            if t.kind == KEYWORD and t.text in TYPE_KEYWORDS:
                spec.append(t)
                self.pos += 1
                if t.text in ("struct", "union", "enum"):
                    if self.peek() is not None and self.peek().kind == IDENTIFIER:
                        spec.append(self.peek())
                        self.pos += 1
                    if self.at("{"):
                        # local struct definition: skip its body
                        p = self.expr_parser()
                        p.skip_balanced()
                        self.pos = p.pos
                continue
            if t.kind == IDENTIFIER and t.text in QUALIFIER_IDENTS:
                self.pos += 1
                if self.at("("):
                    p = self.expr_parser()
                    p.skip_balanced()
                    self.pos = p.pos
                continue
            if t.kind == IDENTIFIER and not any(s.kind == IDENTIFIER or s.text in (
                "int", "char", "short", "long", "float", "double", "void", "_Bool"
            ) for s in spec if s.text not in ("struct", "union", "enum", "signed", "unsigned", "const", "volatile")):
                # typedef name as the base type, unless the next token starts the declarator
                nxt = self.peek(1)
                if spec and nxt is not None and nxt.text in ("=", ";", ",", "["):
                    break
                spec.append(t)
                self.pos += 1
                continue
            break
        base = type_text(spec) or "int"
        out: list = []
        while True:
            stars = 0
            while self.at("*") or (self.peek() is not None and self.peek().text in QUALIFIER_IDENTS | {"const", "volatile"}):
                if self.at("*"):
                    stars += 1
                self.pos += 1
            if self.at("("):
                # function pointer or parenthesised declarator: skip it
                depth = 0
                while True:
                    tok = self.peek()
                    if tok is None:
                        raise ParseError("eof in declarator")
                    if tok.text == "(":
                        depth += 1
                    elif tok.text == ")":
                        depth -= 1
                        if depth == 0:
                            self.pos += 1
                            if not self.at("("):
                                break
                            continue
                    self.pos += 1
                name_tok = None
            else:
                name_tok = self.peek()
                if name_tok is None or name_tok.kind != IDENTIFIER:
                    raise ParseError("expected declarator name")
                self.pos += 1
            dims: list[int | None] = []
            while self.at("["):
                self.pos += 1
                if self.at("]"):
                    dims.append(None)
                else:
                    t = self.peek()
                    if t.kind == NUMBER and self.at("]", 1):
                        dims.append(_int_value(t.text))
                        self.pos += 1
                    else:
                        dims.append(None)
                        depth = 0
                        while not (self.at("]") and depth == 0):
                            if self.peek() is None:
                                raise ParseError("eof in array size")
                            if self.at("["):
                                depth += 1
                            elif self.at("]"):
                                depth -= 1
                            self.pos += 1
                self.expect("]")
            # attributes after the declarator
            while self.peek() is not None and self.peek().text in QUALIFIER_IDENTS | {"__attribute__"}:
                self.pos += 1
                if self.at("("):
                    p = self.expr_parser()
                    p.skip_balanced()
                    self.pos = p.pos
            if name_tok is not None:
                name = name_tok.text
                self.variables.add(name)
                full = base + (" " + "*" * stars if stars else "")
                if dims:
                    count = None
                    if all(d is not None for d in dims):
                        count = 1
                        for d in dims:
                            count *= d
                    out.append(ev.ArrayDecl(name_tok.line, name, base, count, stars > 0, static))
                    self.model.var_types[name] = full + " []"
                else:
                    self.model.var_types[name] = full
                if self.at("="):
                    self.pos += 1
                    value = self.parse_assignment_expr()
                    if not dims:
                        self.builder.emit_assign(Name(name_tok.line, name), value, out, name_tok.line)
                    else:
                        self.builder.emit(value, out)
            elif self.at("="):
                self.pos += 1
                self.builder.emit(self.parse_assignment_expr(), out)
            if self.at(","):
                self.pos += 1
                continue
            self.expect(";")
            return out

    # keyword statements
    def stmt_if(self) -> list:
        line = self.peek().line
        self.pos += 1
        cond = self.parse_paren_condition()
        events, pos, neg = self.builder.emit_condition(cond)
        then = self.parse_sub_statement()
        orelse: tuple = ()
        if self.at("else"):
            self.pos += 1
            orelse = self.parse_sub_statement()
        return [Branch(line, tuple(events), then, orelse, pos, neg)]

    def stmt_while(self) -> list:
        line = self.peek().line
        self.pos += 1
        cond = self.parse_paren_condition()
        events, pos, neg = self.builder.emit_condition(cond)
        body = self.parse_sub_statement()
        return [Branch(line, tuple(events), body, (), pos, neg, "loop")]

    def stmt_for(self) -> list:
        line = self.peek().line
        self.pos += 1
        self.expect("(")
        init: list = []
        if self.is_declaration():
            init = self.parse_declaration()
        elif self.at(";"):
            self.pos += 1
        else:
            self.builder.emit(self.parse_expr(), init)
            self.expect(";")
        events: list = []
        pos = neg = ()
        if not self.at(";"):
            events, pos, neg = self.builder.emit_condition(self.parse_expr())
        self.expect(";")
        step: list = []
        if not self.at(")"):
            self.builder.emit(self.parse_expr(), step)
        self.expect(")")
        body = self.parse_sub_statement()
        return [*init, Branch(line, tuple(events), body + tuple(step), (), pos, neg, "loop")]

    def stmt_do(self) -> list:
        line = self.peek().line
        self.pos += 1
        body = self.parse_sub_statement()
        if not self.at("while"):
            raise ParseError("do without while")
        self.pos += 1
        cond = self.parse_paren_condition()
        self.expect(";")
        events, _, _ = self.builder.emit_condition(cond)
        return [Branch(line, tuple(events), body, (), (), (), "do")]

    def stmt_switch(self) -> list:
        line = self.peek().line
        self.pos += 1
        cond = self.parse_paren_condition()
        events: list = []
        self.builder.emit(cond, events)
        arms: list[list] = []
        has_default = False
        if not self.at("{"):
            body = self.parse_sub_statement()
            return [Switch(line, tuple(events), (body,), False)]
        self.pos += 1
        current: list | None = None
        while not self.at("}"):
            if self.peek() is None:
                raise ParseError("unterminated switch")
            if self.at("case") or self.at("default"):
                if self.at("default"):
                    has_default = True
                    self.pos += 1
                else:
                    self.pos += 1
                    depth = 0
                    while not (self.at(":") and depth == 0):
                        if self.peek() is None:
                            raise ParseError("eof in case label")
                        if self.at("(") or self.at("["):
                            depth += 1
                        elif self.at(")") or self.at("]"):
                            depth -= 1
                        elif self.at("?"):
                            depth += 1
                        elif self.at(":"):
                            depth -= 1
                        self.pos += 1
                self.expect(":")
                if current is not None and not current:
                    # consecutive labels share one arm
                    continue
                current = []
                arms.append(current)
                continue
            stmt = self.parse_statement_safe()
            if current is None:
                current = []
                arms.append(current)
            current.extend(stmt)
        self.pos += 1
        return [Switch(line, tuple(events), tuple(tuple(a) for a in arms), has_default)]

    def stmt_return(self) -> list:
        line = self.peek().line
        self.pos += 1
        out: list = []
        if self.at(";"):
            self.pos += 1
            return [ev.Return(line)]
        value = self.parse_expr()
        self.expect(";")
        self.builder.emit(value, out)
        inner = strip_casts(value)
        null_lit = _is_null(inner)
        vkey = key_of(inner) if is_lvalue_path(inner) else None
        vcall = None
        if isinstance(inner, CallExpr) and isinstance(strip_casts(inner.func), Name):
            vcall = strip_casts(inner.func).text
        out.append(ev.Return(line, null_lit, vkey, vcall))
        return out

    def stmt_break(self) -> list:
        line = self.peek().line
        self.pos += 1
        self.expect(";")
        return [Jump(line, "break")]

    def stmt_continue(self) -> list:
        line = self.peek().line
        self.pos += 1
        self.expect(";")
        return [Jump(line, "continue")]

    def stmt_goto(self) -> list:
        line = self.peek().line
        self.pos += 1
        label = self.peek()
        if label is None or label.kind != IDENTIFIER:
            raise ParseError("computed goto")
        self.pos += 1
        self.expect(";")
        return [Jump(line, "goto", label.text)]

    def stmt_else(self) -> list:
        raise ParseError("dangling else")

    def stmt_case(self) -> list:
        raise ParseError("case outside switch")

    stmt_default = stmt_case


def build_events(model: FunctionModel) -> FunctionModel:
    """Fill in ``model.body`` from the skeleton's body tokens."""
    parser = StatementParser(model.tokens, model)
    body = parser.parse_body()
    body = _clamp(body, model.start_line, model.end_line)
    return replace(model, body=body, var_types=dict(model.var_types))


def _clamp(nodes: tuple, lo: int, hi: int) -> tuple:
    # events can only come from body tokens, so this is a cheap safety net
    return tuple(n for n in nodes if lo <= getattr(n, "line", lo) <= hi)
