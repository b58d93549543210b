# Reusable utility functions not bound to a single pipeline stage.

from pathlib import Path
from typing import Iterable, Iterator, List, Tuple, Union


def iter_records(lines: Iterable[str]) -> Iterator[Tuple[int, List[str]]]:
    """Split tab-separated record lines into fields. Blank lines and lines
    starting with ``#`` are skipped.

    Args:
        lines (Iterable[str]): Raw lines, with or without line breaks.

    Returns:
        Iterator[Tuple[int, List[str]]]: 1-based line numbers with the
            tab-separated fields of each record line.
    """
    for line_number, line in enumerate(lines, start=1):
        line = line.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        yield line_number, line.split("\t")


def read_records(path: Union[str, Path]) -> List[Tuple[int, List[str]]]:
    """Read all records of a UTF-8 file, see `iter_records`."""
    with open(path, encoding="utf-8") as handle:
        return list(iter_records(handle))


def render_tokens(surfaces: List[str]) -> str:
    """Join token surfaces into text, attaching clitics and punctuation to
    the preceding token."""
    text = ""
    for surface in surfaces:
        if text and not (surface in {"?", ",", ".", "!", ";", ":"}
                         or surface.startswith("'")
                         or surface.lower() == "n't"):
            text += " "
        text += surface
    return text
