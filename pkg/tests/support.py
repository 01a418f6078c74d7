"""Shared helpers for building sources and running pipeline stages."""
from __future__ import annotations

from ccomply.frontend import MacroDef, PPToken, lex, preprocess
from ccomply.source import SourceFile, SourceManager


def make_manager(files: dict[str, str]) -> tuple[SourceManager, SourceFile]:
    """Register in-memory files; the first entry is the translation unit."""
    mgr = SourceManager()
    first: SourceFile | None = None
    for path, text in files.items():
        f = mgr.add_virtual(path, text)
        if first is None:
            first = f
    assert first is not None
    return mgr, first


def lex_text(text: str, path: str = "test.c") -> list[PPToken]:
    mgr, f = make_manager({path: text})
    return lex(f)


def pp_text(
    text: str,
    files: dict[str, str] | None = None,
    include_paths: list[str] | None = None,
    predefined: list[MacroDef] | None = None,
    path: str = "test.c",
):
    all_files = {path: text}
    all_files.update(files or {})
    mgr, entry = make_manager(all_files)
    tokens, srcmap, pragmas = preprocess(entry, include_paths or [], predefined or [], mgr)
    return tokens, srcmap, pragmas, mgr


def lexemes(tokens: list[PPToken]) -> list[str]:
    return [t.lexeme for t in tokens]
