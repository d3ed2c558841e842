"""Tolerant C lexer that never runs the preprocessor.

Directives come out as single ``preprocessor_line`` tokens (backslash
continuations included) so that macro names stay visible as identifiers
in the code that uses them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

IDENTIFIER = "identifier"
KEYWORD = "keyword"
NUMBER = "number"
FLOAT = "float_literal"
STRING = "string"
CHAR = "char"
PUNCT = "punctuator"
PREPROC = "preprocessor_line"
COMMENT = "comment"

KEYWORDS = frozenset(
    """auto break case char const continue default do double else enum extern
    float for goto if inline int long register restrict return short signed
    sizeof static struct switch typedef union unsigned void volatile while
    _Bool _Complex _Imaginary __inline __inline__ __volatile__ __const
    __restrict""".split()
)

_PUNCTUATORS = sorted(
    """... <<= >>= -> ++ -- << >> <= >= == != && || *= /= %= += -= &= ^= |= ##
    [ ] ( ) { } . & * + - ~ ! / % < > ^ | ? : ; = , #""".split(),
    key=len,
    reverse=True,
)
_PUNCT_RE = re.compile("|".join(re.escape(p) for p in _PUNCTUATORS))
_IDENT_RE = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*")
_HEX_RE = re.compile(r"0[xX][0-9A-Fa-f]*(?:\.[0-9A-Fa-f]*)?(?:[pP][+-]?\d+)?[uUlLfF]*")
_FLOAT_RE = re.compile(
    r"(?:\d+\.\d*|\.\d+)(?:[eE][+-]?\d+)?[fFlL]?"
    r"|\d+[eE][+-]?\d+[fFlL]?"
    r"|\d+[fF]"
)
_INT_RE = re.compile(r"\d+[uUlL]*")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int

    @property
    def is_code(self) -> bool:
        return self.kind not in (COMMENT, PREPROC)


@dataclass(frozen=True)
class Diagnostic:
    line: int
    message: str


def tokenize(text: str, diagnostics: list[Diagnostic] | None = None) -> list[Token]:
    """Split C source into tokens with exact 1-based line numbers.

    Unterminated comments and literals are closed at the end of the line
    they start on; a :class:`Diagnostic` is appended to *diagnostics* when
    a list is supplied.
    """
    if isinstance(text, bytes):
        text = text.decode("latin-1")
    toks: list[Token] = []
    i, n, line = 0, len(text), 1
    at_line_start = True

    def diag(msg: str) -> None:
        if diagnostics is not None:
            diagnostics.append(Diagnostic(line, msg))

    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            i += 1
            at_line_start = True
            continue
        if c in " \t\r\f\v":
            i += 1
            continue
        if c == "\\" and text.startswith("\n", i + 1):
            # stray line splice outside a directive
            i += 2
            line += 1
            continue

        start_line = line
        if c == "#" and at_line_start:
            j = i
            while j < n:
                if text[j] == "\n":
                    if j > i and text[j - 1] == "\\":
                        line += 1
                        j += 1
                        continue
                    break
                if text.startswith("/*", j):
                    end = text.find("*/", j + 2)
                    if end < 0:
                        break
                    line += text.count("\n", j, end)
                    j = end + 2
                    continue
                j += 1
            toks.append(Token(PREPROC, text[i:j].rstrip(), start_line))
            i = j
            continue
        at_line_start = False

        if text.startswith("/*", i):
            end = text.find("*/", i + 2)
            if end < 0:
                eol = text.find("\n", i)
                eol = n if eol < 0 else eol
                diag("unterminated comment")
                toks.append(Token(COMMENT, text[i:eol], start_line))
                i = eol
                continue
            body = text[i : end + 2]
            toks.append(Token(COMMENT, body, start_line))
            line += body.count("\n")
            i = end + 2
            continue
        if text.startswith("//", i):
            eol = text.find("\n", i)
            eol = n if eol < 0 else eol
            toks.append(Token(COMMENT, text[i:eol], start_line))
            i = eol
            continue
        if c == '"' or c == "'" or (c in "LuU" and i + 1 < n and text[i + 1] in "\"'"):
            j = i + 1 if c in "LuU" else i
            quote = text[j]
            j += 1
            closed = False
            while j < n:
                ch = text[j]
                if ch == "\\" and j + 1 < n:
                    if text[j + 1] == "\n":
                        line += 1
                    j += 2
                    continue
                if ch == "\n":
                    break
                j += 1
                if ch == quote:
                    closed = True
                    break
            if not closed:
                diag("unterminated string" if quote == '"' else "unterminated character literal")
            toks.append(Token(STRING if quote == '"' else CHAR, text[i:j], start_line))
            i = j
            continue
        if c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
            m = _HEX_RE.match(text, i)
            if m and m.end() > i + 1:
                toks.append(Token(NUMBER, m.group(), start_line))
                i = m.end()
                continue
            m = _FLOAT_RE.match(text, i)
            if m:
                toks.append(Token(FLOAT, m.group(), start_line))
                i = m.end()
                continue
            m = _INT_RE.match(text, i)
            toks.append(Token(NUMBER, m.group(), start_line))
            i = m.end()
            continue
        m = _IDENT_RE.match(text, i)
        if m:
            word = m.group()
            toks.append(Token(KEYWORD if word in KEYWORDS else IDENTIFIER, word, start_line))
            i = m.end()
            continue
        m = _PUNCT_RE.match(text, i)
        if m:
            toks.append(Token(PUNCT, m.group(), start_line))
            i = m.end()
            continue
        # anything else (e.g. '@', stray bytes) is kept as an opaque punctuator
        toks.append(Token(PUNCT, c, start_line))
        i += 1
    return toks


def untokenize(tokens: list[Token]) -> str:
    """Print tokens back out, one space apart, each on its original line."""
    out: list[str] = []
    line = 1
    need_newline = False
    for tok in tokens:
        if tok.line > line:
            out.append("\n" * (tok.line - line))
            line = tok.line
            need_newline = False
        elif need_newline:
            # never glue code onto a directive or a // comment
            out.append("\n")
            line += 1
        elif out and not out[-1].endswith("\n"):
            out.append(" ")
        if tok.kind == PREPROC and out and not out[-1].endswith("\n"):
            out.append("\n")
            line += 1
        out.append(tok.text)
        line += tok.text.count("\n")
        need_newline = tok.kind == PREPROC or (tok.kind == COMMENT and tok.text.startswith("//"))
    return "".join(out) + "\n"
