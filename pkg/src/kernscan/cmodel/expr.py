"""Expression AST and a precedence-climbing parser for C expressions.

The parser works on code tokens only (no comments, no directives) and
knows nothing about macros: anything shaped like ``name(args)`` is a call.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .lexer import CHAR, FLOAT, IDENTIFIER, KEYWORD, NUMBER, PUNCT, STRING, Token


class ParseError(Exception):
    pass


# --- AST -------------------------------------------------------------------

@dataclass
class Node:
    line: int


@dataclass
class Name(Node):
    text: str


@dataclass
class Const(Node):
    text: str
    ckind: str  # "int", "float", "str", "char"


@dataclass
class CallExpr(Node):
    func: Node
    args: list


@dataclass
class Index(Node):
    base: Node
    index: Node


@dataclass
class Member(Node):
    base: Node
    op: str
    field: str


@dataclass
class Unary(Node):
    op: str
    operand: Node


@dataclass
class Postfix(Node):
    op: str
    operand: Node


@dataclass
class Binary(Node):
    op: str
    left: Node
    right: Node


@dataclass
class AssignExpr(Node):
    op: str
    target: Node
    value: Node


@dataclass
class Ternary(Node):
    test: Node
    then: Node
    orelse: Node


@dataclass
class Cast(Node):
    type: str
    operand: Node


@dataclass
class Sizeof(Node):
    type: str | None
    operand: Node | None


@dataclass
class Comma(Node):
    items: list


@dataclass
class InitList(Node):
    items: list


@dataclass
class Opaque(Node):
    pass


BINARY_PRECEDENCE = {
    "||": 1, "&&": 2, "|": 3, "^": 4, "&": 5,
    "==": 6, "!=": 6,
    "<": 7, ">": 7, "<=": 7, ">=": 7,
    "<<": 8, ">>": 8,
    "+": 9, "-": 9,
    "*": 10, "/": 10, "%": 10,
}
ASSIGN_OPS = frozenset("= += -= *= /= %= &= |= ^= <<= >>=".split())
COMPARISONS = frozenset("== != < > <= >=".split())
ARITH = frozenset("+ - * /".split())

TYPE_KEYWORDS = frozenset(
    "void char short int long float double signed unsigned _Bool _Complex "
    "struct union enum const volatile restrict __const __restrict".split()
)
STORAGE_KEYWORDS = frozenset("static extern register auto typedef inline __inline __inline__".split())
QUALIFIER_IDENTS = frozenset(
    "__user __iomem __rcu __percpu __force __must_check __kernel __bitwise "
    "__attribute_const__ __read_mostly __initdata __devinitdata __maybe_unused "
    "__always_unused __aligned __packed".split()
)
KNOWN_TYPEDEFS = frozenset(
    "u8 u16 u32 u64 s8 s16 s32 s64 __u8 __u16 __u32 __u64 __s8 __s16 __s32 "
    "__s64 __le16 __le32 __le64 __be16 __be32 __be64 bool gfp_t".split()
)
_MACRO_CONST = re.compile(r"^[A-Z][A-Z0-9_]*$")


def is_typedef_name(word: str) -> bool:
    return word in KNOWN_TYPEDEFS or word.endswith("_t")


def type_text(tokens: list[Token]) -> str:
    """Canonical spelling of a type name, qualifiers dropped."""
    words: list[str] = []
    for t in tokens:
        if t.text in ("const", "volatile", "restrict", "__const", "__restrict") or t.text in QUALIFIER_IDENTS:
            continue
        words.append(t.text)
    out = ""
    for w in words:
        if w == "*":
            out = out.rstrip() + " *"
        elif out and not out.endswith(" "):
            out += " " + w
        else:
            out += w
    return out.strip()


# --- keys ------------------------------------------------------------------

def strip_casts(node: Node) -> Node:
    while isinstance(node, Cast):
        node = node.operand
    return node


def key_of(node: Node) -> str:
    """Canonical whitespace-free spelling of an expression, casts removed."""
    node = strip_casts(node)
    if isinstance(node, Name):
        return node.text
    if isinstance(node, Const):
        return node.text
    if isinstance(node, Member):
        return f"{key_of(node.base)}{node.op}{node.field}"
    if isinstance(node, Index):
        return f"{key_of(node.base)}[{key_of(node.index)}]"
    if isinstance(node, Unary):
        inner = key_of(node.operand)
        if isinstance(strip_casts(node.operand), (Binary, Ternary, AssignExpr)):
            inner = f"({inner})"
        return f"{node.op}{inner}"
    if isinstance(node, Postfix):
        return f"{key_of(node.operand)}{node.op}"
    if isinstance(node, CallExpr):
        return f"{key_of(node.func)}({','.join(key_of(a) for a in node.args)})"
    if isinstance(node, Binary):
        return f"{key_of(node.left)}{node.op}{key_of(node.right)}"
    if isinstance(node, AssignExpr):
        return f"{key_of(node.target)}{node.op}{key_of(node.value)}"
    if isinstance(node, Ternary):
        return f"{key_of(node.test)}?{key_of(node.then)}:{key_of(node.orelse)}"
    if isinstance(node, Sizeof):
        return f"sizeof({node.type if node.type is not None else key_of(node.operand)})"
    if isinstance(node, Comma):
        return ",".join(key_of(i) for i in node.items)
    if isinstance(node, InitList):
        return "{" + ",".join(key_of(i) for i in node.items) + "}"
    return "?"


def is_lvalue_path(node: Node) -> bool:
    """True for names, member chains, subscripts and ``*x`` of those."""
    node = strip_casts(node)
    if isinstance(node, Name):
        return True
    if isinstance(node, Member):
        return is_lvalue_path(node.base)
    if isinstance(node, Index):
        return is_lvalue_path(node.base)
    if isinstance(node, Unary) and node.op == "*":
        return is_lvalue_path(node.operand)
    return False


def is_constant(node: Node) -> bool:
    node = strip_casts(node)
    if isinstance(node, Const):
        return node.ckind in ("int", "float", "char")
    if isinstance(node, Name):
        return bool(_MACRO_CONST.match(node.text))
    if isinstance(node, Sizeof):
        return True
    if isinstance(node, Unary) and node.op in "-+~":
        return is_constant(node.operand)
    if isinstance(node, Binary) and node.op in BINARY_PRECEDENCE:
        return is_constant(node.left) and is_constant(node.right)
    return False


# --- parser ----------------------------------------------------------------

class ExprParser:
    """Recursive-descent parser over a token list.

    *variables* is the set of names known to be variables in scope; it is
    used to tell ``(x) - 1`` apart from a cast ``(type) -1``.
    """

    def __init__(self, tokens: list[Token], pos: int = 0, variables=()):
        self.toks = tokens
        self.pos = pos
        self.variables = variables

    # token helpers
    def peek(self, off: int = 0) -> Token | None:
        i = self.pos + off
        return self.toks[i] if i < len(self.toks) else None

    def at(self, text: str, off: int = 0) -> bool:
        t = self.peek(off)
        return t is not None and t.text == text and t.kind in (PUNCT, KEYWORD)

    def next(self) -> Token:
        t = self.peek()
        if t is None:
            raise ParseError("unexpected end of input")
        self.pos += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.peek()
        if t is None or t.text != text:
            raise ParseError(f"expected {text!r}, got {t.text if t else 'EOF'!r}")
        self.pos += 1
        return t

    def line(self) -> int:
        t = self.peek()
        if t is None:
            return self.toks[-1].line if self.toks else 0
        return t.line

    # type names
    def type_name_end(self, start: int) -> int | None:
        """If a parenthesised type name starts at *start*, return the index of ')'."""
        i = start
        toks = self.toks
        if i >= len(toks):
            return None
        first = toks[i]
        if first.kind == KEYWORD and first.text in TYPE_KEYWORDS:
            pass
        elif first.kind == IDENTIFIER and first.text not in self.variables:
            nxt = toks[i + 1] if i + 1 < len(toks) else None
            if not is_typedef_name(first.text) and first.text not in QUALIFIER_IDENTS:
                # plain identifier: a type only if followed by '*'... ')'
                j = i + 1
                while j < len(toks) and toks[j].text == "*":
                    j += 1
                if j == i + 1 or j >= len(toks) or toks[j].text != ")":
                    return None
            elif nxt is None:
                return None
        else:
            return None
        depth = 0
        while i < len(toks):
            t = toks[i]
            if t.text in ("(", "["):
                depth += 1
            elif t.text in (")", "]"):
                if depth == 0:
                    return i if t.text == ")" else None
                depth -= 1
            elif t.text in (";", "{", "}", "=", ",") and depth == 0:
                return None
            elif t.kind in (NUMBER, FLOAT, STRING, CHAR) and depth == 0:
                return None
            elif t.kind == PUNCT and t.text not in ("*", "(", ")", "[", "]") and depth == 0:
                return None
            i += 1
        return None

    # grammar
    def parse_expression(self) -> Node:
        line = self.line()
        first = self.parse_assignment()
        if not self.at(","):
            return first
        items = [first]
        while self.at(","):
            self.next()
            items.append(self.parse_assignment())
        return Comma(line, items)

    def parse_assignment(self) -> Node:
        line = self.line()
        left = self.parse_conditional()
        t = self.peek()
        if t is not None and t.kind == PUNCT and t.text in ASSIGN_OPS:
            self.next()
            value = self.parse_initializer() if self.at("{") else self.parse_assignment()
            return AssignExpr(line, t.text, left, value)
        return left

    def parse_initializer(self) -> Node:
        if not self.at("{"):
            return self.parse_assignment()
        line = self.next().line
        items = []
        while not self.at("}"):
            if self.at("."):
                # designated initializer .field = value
                self.next()
                self.next()
                while self.at("[") or self.at("."):
                    self.skip_balanced() if self.at("[") else (self.next(), self.next())
                self.expect("=")
            elif self.at("["):
                self.skip_balanced()
                if self.at("="):
                    self.next()
            items.append(self.parse_initializer())
            if self.at(","):
                self.next()
            elif not self.at("}"):
                raise ParseError("bad initializer list")
        self.expect("}")
        return InitList(line, items)

    def skip_balanced(self) -> None:
        open_tok = self.next().text
        close = {"(": ")", "[": "]", "{": "}"}[open_tok]
        depth = 1
        while depth:
            t = self.next()
            if t.text == open_tok:
                depth += 1
            elif t.text == close:
                depth -= 1

    def parse_conditional(self) -> Node:
        line = self.line()
        test = self.parse_binary(1)
        if self.at("?"):
            self.next()
            then = self.parse_expression() if not self.at(":") else test  # GNU a ?: b
            self.expect(":")
            orelse = self.parse_conditional()
            return Ternary(line, test, then, orelse)
        return test

    def parse_binary(self, min_prec: int) -> Node:
        left = self.parse_unary()
        while True:
            t = self.peek()
            if t is None or t.kind != PUNCT:
                return left
            prec = BINARY_PRECEDENCE.get(t.text)
            if prec is None or prec < min_prec:
                return left
            self.next()
            right = self.parse_binary(prec + 1)
            left = Binary(t.line, t.text, left, right)

    def parse_unary(self) -> Node:
        t = self.peek()
        if t is None:
            raise ParseError("unexpected end of expression")
        if t.kind == PUNCT and t.text in ("!", "~", "-", "+", "*", "&", "++", "--"):
            self.next()
            return Unary(t.line, t.text, self.parse_unary())
        if t.kind == PUNCT and t.text == "&&":
            # GNU label address
            self.next()
            self.next()
            return Opaque(t.line)
        if t.kind == KEYWORD and t.text == "sizeof":
            self.next()
            if self.at("("):
                end = self.type_name_end(self.pos + 1)
                if end is not None:
                    tname = type_text(self.toks[self.pos + 1 : end])
                    self.pos = end + 1
                    return Sizeof(t.line, tname, None)
            return Sizeof(t.line, None, self.parse_unary())
        if t.kind == PUNCT and t.text == "(":
            end = self.type_name_end(self.pos + 1)
            if end is not None:
                tname = type_text(self.toks[self.pos + 1 : end])
                self.pos = end + 1
                if self.at("{"):
                    return self.parse_postfix(Cast(t.line, tname, self.parse_initializer()))
                return Cast(t.line, tname, self.parse_unary())
        return self.parse_postfix(self.parse_primary())

    def parse_primary(self) -> Node:
        t = self.next()
        if t.kind == IDENTIFIER or (t.kind == KEYWORD and t.text not in TYPE_KEYWORDS | STORAGE_KEYWORDS):
            if t.kind == KEYWORD and t.text in ("if", "else", "while", "for", "do", "switch",
                                               "return", "goto", "case", "default", "break",
                                               "continue"):
                raise ParseError(f"keyword {t.text} in expression")
            return Name(t.line, t.text)
        if t.kind == NUMBER:
            return Const(t.line, t.text, "int")
        if t.kind == FLOAT:
            return Const(t.line, t.text, "float")
        if t.kind == STRING:
            text = t.text
            while self.peek() is not None and self.peek().kind in (STRING, IDENTIFIER) and (
                self.peek().kind == STRING or _MACRO_CONST.match(self.peek().text)
            ):
                # adjacent literals / KERN_* prefixes
                if self.peek().kind == IDENTIFIER and not (
                    self.peek(1) is not None and self.peek(1).kind == STRING
                ):
                    break
                text += " " + self.next().text
            return Const(t.line, text, "str")
        if t.kind == CHAR:
            return Const(t.line, t.text, "char")
        if t.text == "(":
            if self.at("{"):
                # GNU statement expression
                self.pos -= 1
                self.skip_balanced()
                return Opaque(t.line)
            inner = self.parse_expression()
            self.expect(")")
            return inner
        if t.text == "{":
            self.pos -= 1
            return self.parse_initializer()
        raise ParseError(f"unexpected token {t.text!r}")

    def parse_postfix(self, node: Node) -> Node:
        while True:
            t = self.peek()
            if t is None or t.kind != PUNCT:
                return node
            if t.text == "(":
                self.next()
                args = []
                while not self.at(")"):
                    args.append(self.parse_call_arg())
                    if self.at(","):
                        self.next()
                    elif not self.at(")"):
                        raise ParseError("bad argument list")
                self.expect(")")
                node = CallExpr(getattr(node, "line", t.line), node, args)
            elif t.text == "[":
                self.next()
                idx = self.parse_expression()
                self.expect("]")
                node = Index(t.line, node, idx)
            elif t.text in ("->", "."):
                self.next()
                f = self.next()
                if f.kind not in (IDENTIFIER, KEYWORD):
                    raise ParseError("bad member name")
                node = Member(t.line, node, t.text, f.text)
            elif t.text in ("++", "--"):
                self.next()
                node = Postfix(t.line, t.text, node)
            else:
                return node

    def parse_call_arg(self) -> Node:
        # macro arguments may be bare type names, e.g. container_of(p, struct x, f)
        t = self.peek()
        if t is not None and t.kind == KEYWORD and t.text in TYPE_KEYWORDS:
            line = t.line
            start = self.pos
            depth = 0
            while True:
                t = self.peek()
                if t is None:
                    raise ParseError("unterminated argument")
                if t.text in ("(", "["):
                    depth += 1
                elif t.text in (")", "]"):
                    if depth == 0:
                        break
                    depth -= 1
                elif t.text == "," and depth == 0:
                    break
                self.next()
            return Name(line, type_text(self.toks[start : self.pos]))
        return self.parse_assignment()
