"""Find function definitions by brace balance, without a C grammar."""

from __future__ import annotations

from .events import FunctionModel
from .expr import QUALIFIER_IDENTS, type_text
from .lexer import IDENTIFIER, KEYWORD, PUNCT, Diagnostic, Token

_NOT_FUNCTIONS = frozenset(
    "if while for switch return sizeof do else case __attribute__ __typeof__ "
    "typeof __asm__ asm".split()
)


def code_tokens(tokens: list[Token]) -> list[Token]:
    return [t for t in tokens if t.is_code]


def _match(toks: list[Token], i: int, open_: str, close: str) -> int | None:
    """Index of the bracket closing the one at *i*, or None."""
    depth = 0
    for j in range(i, len(toks)):
        t = toks[j].text
        if t == open_:
            depth += 1
        elif t == close:
            depth -= 1
            if depth == 0:
                return j
    return None


def parse_params(toks: list[Token]) -> list[tuple[str, str]]:
    """(name, type) pairs from the tokens between a definition's parentheses."""
    groups: list[list[Token]] = [[]]
    depth = 0
    for t in toks:
        if t.text in ("(", "["):
            depth += 1
        elif t.text in (")", "]"):
            depth -= 1
        if t.text == "," and depth == 0:
            groups.append([])
        else:
            groups[-1].append(t)
    params = []
    for g in groups:
        names = [
            (k, t) for k, t in enumerate(g)
            if t.kind == IDENTIFIER and t.text not in QUALIFIER_IDENTS
        ]
        if not names:
            continue
        # the declared name is the last identifier outside nested brackets
        k, name_tok = names[-1]
        if len(names) == 1 and not any(t.kind == KEYWORD for t in g[:k]):
            # a lone identifier is a typedef'd type with no name (prototype style)
            if not any(t.text == "*" for t in g):
                continue
        base = [t for t in g[:k] if t.text != "*"]
        stars = sum(1 for t in g[:k] if t.text == "*")
        tname = type_text(base) + (" " + "*" * stars if stars else "")
        params.append((name_tok.text, tname.strip()))
    return params


def extract_functions(
    tokens: list[Token],
    file: str = "",
    diagnostics: list[Diagnostic] | None = None,
) -> list[FunctionModel]:
    """Return skeleton models (no event tree yet) for every definition.

    A definition is ``identifier ( ... ) {`` at brace depth zero.  Other
    top-level braces (struct bodies, initializers) are skipped whole.  A
    stray ``}`` at depth zero, or a body that never closes, is reported as
    a diagnostic; functions found earlier are kept.
    """
    toks = code_tokens(tokens)
    out: list[FunctionModel] = []
    i, n = 0, len(toks)
    while i < n:
        t = toks[i]
        if t.text == "}" and t.kind == PUNCT:
            if diagnostics is not None:
                diagnostics.append(Diagnostic(t.line, "unbalanced '}' at top level"))
            i += 1
            continue
        if t.text == "{" and t.kind == PUNCT:
            end = _match(toks, i, "{", "}")
            if end is None:
                if diagnostics is not None:
                    diagnostics.append(Diagnostic(t.line, "unbalanced '{': block never closes"))
                break
            i = end + 1
            continue
        if (
            t.kind == IDENTIFIER
            and t.text not in _NOT_FUNCTIONS
            and i + 1 < n
            and toks[i + 1].text == "("
        ):
            close = _match(toks, i + 1, "(", ")")
            if close is None:
                i += 1
                continue
            if close + 1 < n and toks[close + 1].text == "{":
                if i > 0 and toks[i - 1].text in ("=", ".", "->"):
                    i += 1
                    continue
                end = _match(toks, close + 1, "{", "}")
                if end is None:
                    if diagnostics is not None:
                        diagnostics.append(
                            Diagnostic(toks[close + 1].line, f"unbalanced braces in {t.text}: body never closes")
                        )
                    break
                params = parse_params(toks[i + 2 : close])
                out.append(
                    FunctionModel(
                        name=t.text,
                        file=file,
                        start_line=t.line,
                        end_line=toks[end].line,
                        params=tuple(p for p, _ in params),
                        var_types={p: ty for p, ty in params},
                        tokens=toks[close + 2 : end],
                    )
                )
                i = end + 1
                continue
            i = close + 1
            continue
        i += 1
    return out
