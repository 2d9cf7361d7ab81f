from __future__ import annotations

from importlib import resources
from pathlib import Path


def read_rows(source: str | Path, ncols: int | None = None) -> list[list[str]]:
    """Read a TSV table, dropping blank lines and ``#`` comments.

    ``source`` is either a path or the bare name of a file shipped in
    ``viphone/data``.
    """
    if isinstance(source, Path) or "/" in str(source):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = resources.files("viphone.data").joinpath(source).read_text(encoding="utf-8")
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.rstrip("\n").split("\t")
        if ncols is not None and len(cols) < ncols:
            raise ValueError(f"{source}:{lineno}: expected {ncols} columns, got {len(cols)}")
        rows.append(cols)
    return rows


def data_path(name: str) -> Path:
    return Path(str(resources.files("viphone.data").joinpath(name)))
