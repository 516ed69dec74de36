"""Report ingestion: parse, consolidate, smooth, and emit labeled records.

One input report fans out into at most one labeled record per disease
category.  Emitted records always carry y=1 with a signed score: a mention
asserts the finding and u carries the polarity, so "no pneumothorax" becomes
(Pneumothorax, y=1, u=-3) and the flip inside the loss resolves it to the
negative class.  Diseases never mentioned in a report produce no record at
all (absence is not a confident negative).

Output is sorted by (study_id, category) and rates/targets are written with
six decimal places, so byte-identical files come out of any processing order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .errors import DataError
from .reports import Lexicon, extract_findings
from .smoothing import (
    SCORE_LEVELS,
    DEFAULT_PARAMS,
    SmoothingParams,
    effective_label,
    gls_target,
    smoothing_rate,
)
from .taxonomy import CATEGORY_NAMES, DiseaseCategory, TaxonomyMap


@dataclass(frozen=True)
class ReportRecord:
    patient_id: str
    study_id: str
    text: str


@dataclass(frozen=True)
class LabeledRecord:
    study_id: str
    category: DiseaseCategory
    y: int
    u: int
    r: float
    target_neg: float
    target_pos: float
    cue: str | None


@dataclass
class DatasetStats:
    record_count: int = 0
    per_category_counts: dict[str, int] = field(default_factory=dict)
    per_score_counts: dict[int, int] = field(default_factory=dict)
    unmapped_phrase_count: int = 0
    malformed_records: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        payload = {
            "record_count": self.record_count,
            "per_category_counts": {
                name: self.per_category_counts.get(name, 0) for name in CATEGORY_NAMES
            },
            "per_score_counts": {
                str(u): self.per_score_counts.get(u, 0) for u in SCORE_LEVELS
            },
            "unmapped_phrase_count": self.unmapped_phrase_count,
            "malformed_record_count": len(self.malformed_records),
            "malformed_records": sorted(self.malformed_records),
        }
        return json.dumps(payload, indent=2) + "\n"


def _coerce_record(item, position: int) -> ReportRecord:
    if isinstance(item, ReportRecord):
        record = item
    elif isinstance(item, dict):
        missing = [k for k in ("patient_id", "study_id", "text") if k not in item]
        if missing:
            raise DataError(f"record {position}: missing field(s) {', '.join(missing)}")
        record = ReportRecord(
            patient_id=item["patient_id"], study_id=item["study_id"], text=item["text"]
        )
    else:
        raise DataError(f"record {position}: expected mapping, got {type(item).__name__}")
    for name in ("patient_id", "study_id", "text"):
        if not isinstance(getattr(record, name), str):
            raise DataError(f"record {position}: field {name!r} must be a string")
    if not record.patient_id:
        raise DataError(f"record {position}: empty patient_id")
    if not record.study_id:
        raise DataError(f"record {position}: empty study_id")
    return record


def build_dataset(
    records: Iterable,
    lexicon: Lexicon,
    taxonomy: TaxonomyMap,
    params: SmoothingParams = DEFAULT_PARAMS,
) -> tuple[list[LabeledRecord], DatasetStats]:
    """Run parsing + consolidation + smoothing over a stream of reports.

    Duplicate findings for the same (study, category) merge by the largest
    |u|, ties toward the positive score; the cue of the first winning mention
    is kept.  A duplicated study_id is a hard error; a malformed record is
    collected into the stats and processing continues.
    """
    stats = DatasetStats()
    vocabulary = taxonomy.vocabulary()
    seen_studies: set[str] = set()
    # (study_id, category) -> (u, cue)
    merged: dict[tuple[str, DiseaseCategory], tuple[int, str | None]] = {}

    for position, item in enumerate(records, start=1):
        try:
            record = _coerce_record(item, position)
        except DataError as exc:
            stats.malformed_records.append(str(exc))
            continue
        if record.study_id in seen_studies:
            raise DataError(f"duplicate study_id: {record.study_id!r}")
        seen_studies.add(record.study_id)

        for finding in extract_findings(record.text, lexicon, vocabulary):
            category = taxonomy.map_diagnosis(finding.raw_phrase)
            if category is None:
                stats.unmapped_phrase_count += 1
                continue
            key = (record.study_id, category)
            current = merged.get(key)
            if current is None or (abs(finding.u), finding.u) > (
                abs(current[0]),
                current[0],
            ):
                merged[key] = (finding.u, finding.cue)

    labeled = []
    for (study_id, category), (u, cue) in merged.items():
        r = smoothing_rate(u, params)
        target = gls_target(effective_label(1, u), r)
        labeled.append(
            LabeledRecord(
                study_id=study_id,
                category=category,
                y=1,
                u=u,
                r=r,
                target_neg=float(target[0]),
                target_pos=float(target[1]),
                cue=cue,
            )
        )
    labeled.sort(key=lambda rec: (rec.study_id, rec.category.value))

    stats.record_count = len(labeled)
    for rec in labeled:
        name = rec.category.value
        stats.per_category_counts[name] = stats.per_category_counts.get(name, 0) + 1
        stats.per_score_counts[rec.u] = stats.per_score_counts.get(rec.u, 0) + 1
    return labeled, stats


def record_to_line(rec: LabeledRecord) -> str:
    """One output line; rate and target fields carry exactly six decimals."""
    return (
        f'{{"study_id": {json.dumps(rec.study_id)}, '
        f'"category": "{rec.category.value}", '
        f'"y": {rec.y}, "u": {rec.u}, "r": {rec.r:.6f}, '
        f'"target_neg": {rec.target_neg:.6f}, "target_pos": {rec.target_pos:.6f}, '
        f'"cue": {json.dumps(rec.cue)}}}'
    )


def stats_path_for(out_path) -> Path:
    out_path = Path(out_path)
    return out_path.with_name(out_path.name + ".stats.json")


def write_dataset(labeled: list[LabeledRecord], stats: DatasetStats, out_path) -> None:
    """Write the labeled records plus the stats sidecar (<out>.stats.json)."""
    out_path = Path(out_path)
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in labeled:
            fh.write(record_to_line(rec) + "\n")
    with open(stats_path_for(out_path), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(stats.to_json())


def read_report_file(path) -> list:
    """Read a line-delimited report file into dicts; parse errors become
    malformed entries handled downstream by build_dataset."""
    items = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                items.append(json.loads(line))
            except json.JSONDecodeError as exc:
                items.append(_Unparseable(f"line {lineno}: invalid record ({exc.msg})"))
    return items


class _Unparseable:
    """Placeholder for an input line that failed to parse."""

    def __init__(self, message: str):
        self.message = message


def build_dataset_file(
    input_path,
    out_path,
    lexicon: Lexicon,
    taxonomy: TaxonomyMap,
    params: SmoothingParams = DEFAULT_PARAMS,
) -> DatasetStats:
    """File-to-file convenience wrapper used by the command line."""
    items = read_report_file(input_path)
    records = []
    pre_errors = []
    for item in items:
        if isinstance(item, _Unparseable):
            pre_errors.append(item.message)
        else:
            records.append(item)
    labeled, stats = build_dataset(records, lexicon, taxonomy, params)
    stats.malformed_records.extend(pre_errors)
    write_dataset(labeled, stats, out_path)
    return stats


_REQUIRED_FIELDS = ("study_id", "category", "y", "u", "r", "target_neg", "target_pos", "cue")


def validate_dataset(path, params: SmoothingParams = DEFAULT_PARAMS) -> DatasetStats:
    """Re-check every labeled-record invariant in a dataset file.

    Verifies the schema, the score range, r against the conversion formula,
    and the target against the smoothed effective label, all at the file's
    six-decimal precision.  Raises DataError listing every violation with its
    line number; returns recomputed stats when clean.
    """
    by_value = {c.value: c for c in DiseaseCategory}
    stats = DatasetStats()
    problems: list[str] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                problems.append(f"line {lineno}: invalid record ({exc.msg})")
                continue
            missing = [k for k in _REQUIRED_FIELDS if k not in rec]
            if missing:
                problems.append(f"line {lineno}: missing field(s) {', '.join(missing)}")
                continue
            category = by_value.get(rec["category"])
            if category is None:
                problems.append(f"line {lineno}: unknown category {rec['category']!r}")
                continue
            if rec["y"] not in (0, 1):
                problems.append(f"line {lineno}: y must be 0 or 1, got {rec['y']!r}")
                continue
            if rec["u"] not in SCORE_LEVELS:
                problems.append(f"line {lineno}: u {rec['u']!r} outside {{-3..3}}")
                continue
            expected_r = smoothing_rate(rec["u"], params)
            if f"{rec['r']:.6f}" != f"{expected_r:.6f}":
                problems.append(
                    f"line {lineno}: r {rec['r']:.6f} does not match "
                    f"-k|u|+r0 = {expected_r:.6f} for u={rec['u']}"
                )
                continue
            target = gls_target(effective_label(rec["y"], rec["u"]), expected_r)
            if (
                f"{rec['target_neg']:.6f}" != f"{target[0]:.6f}"
                or f"{rec['target_pos']:.6f}" != f"{target[1]:.6f}"
            ):
                problems.append(
                    f"line {lineno}: target [{rec['target_neg']:.6f}, "
                    f"{rec['target_pos']:.6f}] does not match "
                    f"[{target[0]:.6f}, {target[1]:.6f}]"
                )
                continue
            if rec["cue"] is not None and not isinstance(rec["cue"], str):
                problems.append(f"line {lineno}: cue must be a string or null")
                continue
            stats.record_count += 1
            stats.per_category_counts[rec["category"]] = (
                stats.per_category_counts.get(rec["category"], 0) + 1
            )
            stats.per_score_counts[rec["u"]] = stats.per_score_counts.get(rec["u"], 0) + 1
    if problems:
        raise DataError("; ".join(problems))
    return stats
