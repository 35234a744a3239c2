"""Clone-reference manifests and tracing of references back to method source.

A manifest lists one clone method per row as ``class_id<TAB>path<TAB>start<TAB>end``.
Line ranges are 1-based and inclusive. An optional annotations file maps a
clone class id to a free-text description of its functionality.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence


class ManifestError(ValueError):
    """Raised when a manifest or annotations file cannot be parsed."""


class TraceError(LookupError):
    """Raised when a method reference cannot be resolved to source lines."""


@dataclass(frozen=True)
class CloneClass:
    class_id: int
    description: Optional[str] = None


@dataclass(frozen=True)
class CloneMethodRef:
    doc_id: int
    class_id: int
    path: str
    start_line: int
    end_line: int

    def __post_init__(self):
        if self.start_line < 1 or self.end_line < 1:
            raise ValueError("line numbers are 1-based")
        if self.start_line > self.end_line:
            raise ValueError(f"inverted line range {self.start_line}..{self.end_line}")


@dataclass(frozen=True)
class RawMethod:
    ref: CloneMethodRef
    source: str


def _records(path: Path):
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        yield lineno, line


def _positive_int(value: str, what: str, where: str) -> int:
    try:
        n = int(value.strip())
    except ValueError:
        raise ManifestError(f"{where}: {what} is not an integer: {value!r}") from None
    if n < 1:
        raise ManifestError(f"{where}: {what} must be positive, got {n}")
    return n


def load_annotations(path) -> dict[int, str]:
    """Read ``class_id<TAB>description`` rows into a dict."""
    out: dict[int, str] = {}
    for lineno, line in _records(path):
        where = f"{path}:{lineno}"
        parts = line.split("\t", 1)
        if len(parts) != 2:
            raise ManifestError(f"{where}: expected class_id<TAB>description")
        class_id = _positive_int(parts[0], "class_id", where)
        description = parts[1].strip()
        if not description:
            raise ManifestError(f"{where}: empty description for class {class_id}")
        if class_id in out:
            raise ManifestError(f"{where}: duplicate class_id {class_id}")
        out[class_id] = description
    return out


def load_manifest(manifest_path, annotations_path=None) -> tuple[list[CloneClass], list[CloneMethodRef]]:
    """Load a manifest and optional annotations file.

    Returns the clone classes (sorted by id) and the method references, whose
    ``doc_id`` is the zero-based position of the row in the manifest. Classes
    are declared implicitly by the manifest rows; an annotation for a class
    that has no methods is kept so it can still be inspected.
    """
    refs: list[CloneMethodRef] = []
    for lineno, line in _records(manifest_path):
        where = f"{manifest_path}:{lineno}"
        parts = line.split("\t")
        if len(parts) != 4:
            raise ManifestError(f"{where}: expected 4 tab-separated fields, got {len(parts)}")
        class_id = _positive_int(parts[0], "class_id", where)
        path = parts[1].strip()
        if not path:
            raise ManifestError(f"{where}: empty path")
        start = _positive_int(parts[2], "start_line", where)
        end = _positive_int(parts[3], "end_line", where)
        if start > end:
            raise ManifestError(f"{where}: inverted line range {start}..{end}")
        refs.append(CloneMethodRef(len(refs), class_id, path, start, end))

    descriptions = load_annotations(annotations_path) if annotations_path else {}
    class_ids = {r.class_id for r in refs} | set(descriptions)
    classes = [CloneClass(cid, descriptions.get(cid)) for cid in sorted(class_ids)]
    return classes, refs


def read_lines(path) -> list[str]:
    # Invalid bytes become U+FFFD; CRLF and LF are both line terminators.
    data = Path(path).read_bytes().decode("utf-8", errors="replace")
    return data.replace("\r\n", "\n").split("\n") if data else []


def trace(ref: CloneMethodRef, source_root) -> RawMethod:
    """Slice the referenced inclusive line range out of its source file."""
    file = Path(source_root) / ref.path
    if not file.is_file():
        raise TraceError(f"doc {ref.doc_id}: no such file {file}")
    lines = read_lines(file)
    # A trailing newline does not open another line.
    if lines and lines[-1] == "":
        lines.pop()
    if ref.end_line > len(lines):
        raise TraceError(
            f"doc {ref.doc_id}: lines {ref.start_line}..{ref.end_line} beyond end of "
            f"{ref.path} ({len(lines)} lines)"
        )
    return RawMethod(ref, "\n".join(lines[ref.start_line - 1 : ref.end_line]))


def trace_all(refs: Sequence[CloneMethodRef], source_root) -> list[RawMethod]:
    return [trace(r, source_root) for r in refs]
