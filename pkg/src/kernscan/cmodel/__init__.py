"""C source reduced to per-function event trees."""

from .build import build_events
from .events import (
    IS_NOT_NULL,
    IS_NULL,
    ArrayDecl,
    Assign,
    BoundCheck,
    Branch,
    Call,
    Deref,
    Fact,
    FloatConst,
    FunctionModel,
    IndexUse,
    Jump,
    Label,
    NullTest,
    Return,
    SizeofExpr,
    SizeofSelf,
    Switch,
    dump_events,
    iter_events,
)
from .extract import extract_functions
from .lexer import Diagnostic, Token, tokenize, untokenize
from .walk import PathWalker


def model_file(text: str, file: str = "", diagnostics: list | None = None) -> list[FunctionModel]:
    """Tokenize, extract and build every function of one source file."""
    toks = tokenize(text, diagnostics)
    return [build_events(f) for f in extract_functions(toks, file, diagnostics)]


__all__ = [
    "IS_NOT_NULL", "IS_NULL", "ArrayDecl", "Assign", "BoundCheck", "Branch", "Call",
    "Deref", "Diagnostic", "Fact", "FloatConst", "FunctionModel", "IndexUse", "Jump",
    "Label", "NullTest", "PathWalker", "Return", "SizeofExpr", "SizeofSelf", "Switch",
    "Token", "build_events", "dump_events", "extract_functions", "iter_events",
    "model_file", "tokenize", "untokenize",
]
