"""Mapping of raw diagnosis phrases onto 14 clinical disease categories.

Matching is exact phrase lookup after normalization; the consolidation table
is a finite authoritative list, shipped as an editable data file so users can
extend it.  Unknown phrases map to nothing rather than guessing.
"""

from __future__ import annotations

import enum
from pathlib import Path

from .errors import DataError


class DiseaseCategory(enum.Enum):
    ATELECTASIS = "Atelectasis"
    CARDIOMEGALY = "Cardiomegaly"
    CONSOLIDATION = "Consolidation"
    EDEMA = "Edema"
    EFFUSION = "Effusion"
    EMPHYSEMA = "Emphysema"
    FRACTURE = "Fracture"
    HERNIA = "Hernia"
    MASS = "Mass"
    NODULE = "Nodule"
    PLEURAL_THICKENING = "PleuralThickening"
    PNEUMONIA = "Pneumonia"
    PNEUMOTHORAX = "Pneumothorax"
    SCOLIOSIS = "Scoliosis"


CATEGORY_NAMES = tuple(c.value for c in DiseaseCategory)


def normalize_phrase(raw: str) -> str:
    """Lowercase, strip, and collapse internal whitespace runs."""
    return " ".join(raw.lower().split())


class TaxonomyMap:
    """Immutable phrase -> category lookup."""

    def __init__(self, entries: dict[str, DiseaseCategory]):
        self._entries = dict(entries)

    def __len__(self) -> int:
        return len(self._entries)

    def map_diagnosis(self, raw: str) -> DiseaseCategory | None:
        """Category for a raw phrase, or None when the phrase is unknown."""
        return self._entries.get(normalize_phrase(raw))

    def vocabulary(self) -> list[str]:
        """All known raw phrases, longest first, for use as parser vocabulary."""
        return sorted(self._entries, key=lambda p: (-len(p), p))

    def items(self):
        return self._entries.items()


def load_taxonomy(source) -> TaxonomyMap:
    """Parse the taxonomy TSV format: ``raw_phrase<TAB>category`` per line."""
    by_value = {c.value: c for c in DiseaseCategory}
    entries: dict[str, DiseaseCategory] = {}
    for lineno, line in enumerate(_iter_lines(source), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        cols = stripped.split("\t")
        if len(cols) != 2:
            raise DataError(
                f"taxonomy line {lineno}: expected 2 tab-separated columns, got {len(cols)}"
            )
        phrase = normalize_phrase(cols[0])
        if not phrase:
            raise DataError(f"taxonomy line {lineno}: empty phrase")
        category = by_value.get(cols[1].strip())
        if category is None:
            raise DataError(
                f"taxonomy line {lineno}: unknown category {cols[1].strip()!r} "
                f"(must be one of {', '.join(CATEGORY_NAMES)})"
            )
        if phrase in entries:
            raise DataError(f"taxonomy line {lineno}: duplicate phrase {phrase!r}")
        entries[phrase] = category
    return TaxonomyMap(entries)


def default_taxonomy() -> TaxonomyMap:
    """The consolidation table shipped with the package."""
    return load_taxonomy(Path(__file__).parent / "data" / "taxonomy.tsv")


def _iter_lines(source):
    import io

    if isinstance(source, bytes):
        yield from io.StringIO(source.decode("utf-8"))
    elif isinstance(source, Path):
        with open(source, encoding="utf-8") as fh:
            yield from fh
    elif isinstance(source, str):
        if "\t" in source or "\n" in source:
            yield from io.StringIO(source)
        else:
            with open(source, encoding="utf-8") as fh:
                yield from fh
    elif hasattr(source, "read"):
        data = source.read()
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        yield from io.StringIO(data)
    else:
        raise TypeError(f"cannot read taxonomy from {type(source).__name__}")
