"""Atomic file output: no partial files on failure."""

from __future__ import annotations

import os
import tempfile

from .errors import OutputError


def atomic_write_text(path: str, text: str) -> None:
    """Write text to ``path`` via a temp file and rename.

    The target either keeps its previous content or receives the complete
    new content; interrupted writes never leave a partial file behind.
    """
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
                handle.write(text)
            os.replace(tmp_path, path)
        except BaseException:
            try:
                os.unlink(tmp_path)
            except OSError:
                pass
            raise
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc
