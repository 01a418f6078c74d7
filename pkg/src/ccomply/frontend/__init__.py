"""Frontend: lexing and tracked preprocessing."""
from ccomply.frontend.lexer import PPToken, TokenKind, lex
from ccomply.frontend.preprocessor import (
    MacroDef,
    PragmaRecord,
    SourceMap,
    evaluate_pp_condition,
    macro_from_define_flag,
    preprocess,
)

__all__ = [
    "PPToken",
    "TokenKind",
    "lex",
    "MacroDef",
    "PragmaRecord",
    "SourceMap",
    "evaluate_pp_condition",
    "macro_from_define_flag",
    "preprocess",
]
