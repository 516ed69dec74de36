"""Tests for the dataset builder and validator."""

import json

import pytest

from corpus_util import make_reports
from glsmooth.dataset import (
    ReportRecord,
    build_dataset,
    build_dataset_file,
    record_to_line,
    stats_path_for,
    validate_dataset,
    write_dataset,
)
from glsmooth.errors import DataError
from glsmooth.reports import default_lexicon
from glsmooth.smoothing import smoothing_rate
from glsmooth.taxonomy import DiseaseCategory, default_taxonomy


@pytest.fixture(scope="module")
def lexicon():
    return default_lexicon()


@pytest.fixture(scope="module")
def taxonomy():
    return default_taxonomy()


def one_report(text, study="s1", patient="p1"):
    return [ReportRecord(patient_id=patient, study_id=study, text=text)]


class TestBuildDataset:
    def test_two_findings_two_records(self, lexicon, taxonomy):
        labeled, stats = build_dataset(
            one_report("Likely pneumonia. No pneumothorax."), lexicon, taxonomy
        )
        assert [(r.category, r.y, r.u) for r in labeled] == [
            (DiseaseCategory.PNEUMONIA, 1, 2),
            (DiseaseCategory.PNEUMOTHORAX, 1, -3),
        ]
        assert labeled[0].r == pytest.approx(1 / 6)
        assert labeled[1].r == pytest.approx(-0.25)
        assert stats.record_count == 2

    def test_merge_keeps_largest_magnitude(self, lexicon, taxonomy):
        labeled, _ = build_dataset(
            one_report("Possible pneumonia. Pneumonia."), lexicon, taxonomy
        )
        assert [(r.category, r.u) for r in labeled] == [(DiseaseCategory.PNEUMONIA, 3)]

    def test_merge_tie_goes_positive(self, lexicon, taxonomy):
        labeled, _ = build_dataset(
            one_report("No definite pneumonia. Likely pneumonia."), lexicon, taxonomy
        )
        assert [(r.category, r.u) for r in labeled] == [(DiseaseCategory.PNEUMONIA, 2)]

    def test_same_category_different_phrases_merge(self, lexicon, taxonomy):
        labeled, _ = build_dataset(
            one_report("Pleural effusion. Blunting of the costophrenic angle."),
            lexicon,
            taxonomy,
        )
        assert [(r.category, r.u) for r in labeled] == [(DiseaseCategory.EFFUSION, 3)]

    def test_empty_text_no_records(self, lexicon, taxonomy):
        labeled, stats = build_dataset(one_report(""), lexicon, taxonomy)
        assert labeled == []
        assert stats.record_count == 0

    def test_duplicate_study_id_hard_error(self, lexicon, taxonomy):
        records = one_report("Pneumonia.", study="dup") + one_report(
            "Edema.", study="dup"
        )
        with pytest.raises(DataError, match="dup"):
            build_dataset(records, lexicon, taxonomy)

    def test_malformed_record_collected(self, lexicon, taxonomy):
        records = [
            {"patient_id": "p1", "study_id": "s1", "text": "Pneumonia."},
            {"study_id": "s2", "text": "Edema."},
            {"patient_id": "", "study_id": "s3", "text": "Edema."},
        ]
        labeled, stats = build_dataset(records, lexicon, taxonomy)
        assert stats.record_count == 1
        assert len(stats.malformed_records) == 2
        assert any("patient_id" in m for m in stats.malformed_records)

    def test_emitted_records_satisfy_kernel_invariants(self, lexicon, taxonomy):
        labeled, _ = build_dataset(
            [
                ReportRecord("p1", f"s{i}", text)
                for i, text in enumerate(
                    ["Likely edema. No fracture.", "Scoliosis versus hernia.", "Pneumonia!"]
                )
            ],
            lexicon,
            taxonomy,
        )
        for rec in labeled:
            assert rec.y == 1
            assert -3 <= rec.u <= 3
            assert rec.r == pytest.approx(smoothing_rate(rec.u))
            assert rec.target_neg + rec.target_pos == pytest.approx(1.0, abs=1e-12)

    def test_stats_sum_to_record_count(self, lexicon, taxonomy):
        labeled, stats = build_dataset(make_reports(100, seed=5), lexicon, taxonomy)
        assert sum(stats.per_category_counts.values()) == stats.record_count
        assert sum(stats.per_score_counts.values()) == stats.record_count
        assert stats.record_count == len(labeled)

    def test_order_independence(self, lexicon, taxonomy):
        reports = make_reports(200, seed=9)
        forward, _ = build_dataset(reports, lexicon, taxonomy)
        backward, _ = build_dataset(list(reversed(reports)), lexicon, taxonomy)
        assert forward == backward

    def test_merge_idempotence(self, lexicon, taxonomy):
        text = "Possible pneumonia. No edema."
        once, _ = build_dataset(one_report(text), lexicon, taxonomy)
        doubled, _ = build_dataset(one_report(text + " " + text), lexicon, taxonomy)
        assert [(r.category, r.u) for r in once] == [(r.category, r.u) for r in doubled]


class TestWriteAndValidate:
    def test_round_trip(self, tmp_path, lexicon, taxonomy):
        labeled, stats = build_dataset(make_reports(50, seed=3), lexicon, taxonomy)
        out = tmp_path / "ds.jsonl"
        write_dataset(labeled, stats, out)
        revalidated = validate_dataset(out)
        assert revalidated.record_count == stats.record_count
        assert revalidated.per_category_counts == stats.per_category_counts
        assert revalidated.per_score_counts == stats.per_score_counts

    def test_line_format_six_decimals(self, lexicon, taxonomy):
        labeled, _ = build_dataset(one_report("No pneumothorax."), lexicon, taxonomy)
        line = record_to_line(labeled[0])
        assert '"r": -0.250000' in line
        assert '"target_neg": 1.125000' in line
        assert '"target_pos": -0.125000' in line
        parsed = json.loads(line)
        assert parsed["study_id"] == "s1"
        assert parsed["cue"] == "no"

    def test_corrupted_r_cites_line_and_expected(self, tmp_path, lexicon, taxonomy):
        labeled, stats = build_dataset(
            one_report("Likely pneumonia. No edema."), lexicon, taxonomy
        )
        out = tmp_path / "ds.jsonl"
        write_dataset(labeled, stats, out)
        lines = out.read_text().splitlines()
        lines[1] = lines[1].replace('"r": 0.166667', '"r": 0.200000')
        out.write_text("\n".join(lines) + "\n")
        with pytest.raises(DataError, match=r"line 2.*0\.166667"):
            validate_dataset(out)

    def test_unknown_category_schema_error(self, tmp_path):
        out = tmp_path / "ds.jsonl"
        out.write_text(
            '{"study_id": "s1", "category": "Sniffles", "y": 1, "u": 0, '
            '"r": 1.000000, "target_neg": 0.500000, "target_pos": 0.500000, '
            '"cue": null}\n'
        )
        with pytest.raises(DataError, match="category"):
            validate_dataset(out)

    def test_corrupted_target_detected(self, tmp_path, lexicon, taxonomy):
        labeled, stats = build_dataset(one_report("Pneumonia."), lexicon, taxonomy)
        out = tmp_path / "ds.jsonl"
        write_dataset(labeled, stats, out)
        text = out.read_text().replace('"target_pos": 1.125000', '"target_pos": 1.100000')
        out.write_text(text)
        with pytest.raises(DataError, match="target"):
            validate_dataset(out)

    def test_build_dataset_file(self, tmp_path, lexicon, taxonomy):
        src = tmp_path / "reports.jsonl"
        with open(src, "w") as fh:
            for rec in make_reports(20, seed=1):
                fh.write(json.dumps(rec) + "\n")
            fh.write("this is not json\n")
        out = tmp_path / "ds.jsonl"
        stats = build_dataset_file(src, out, lexicon, taxonomy)
        assert out.exists()
        assert stats_path_for(out).exists()
        assert len(stats.malformed_records) == 1
        sidecar = json.loads(stats_path_for(out).read_text())
        assert sidecar["record_count"] == stats.record_count
        assert sidecar["malformed_record_count"] == 1
        validate_dataset(out)
