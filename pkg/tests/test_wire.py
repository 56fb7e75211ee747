"""JSONL prediction interchange and the thresholds table."""

from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from typedppi.labels import CLASS_ORDER, INTERACTION_TYPES
from typedppi.records import SkipReport, TypedPrediction
from typedppi.wire import (
    MemberPrediction,
    aggregate_groups,
    group_member_rows,
    read_member_predictions,
    read_scan_predictions,
    read_thresholds,
    read_validation_predictions,
    write_member_predictions,
    write_scan_predictions,
    write_thresholds,
    write_validation_predictions,
)

N = len(CLASS_ORDER)


def _probs(hot: int) -> tuple[float, ...]:
    out = [0.01] * N
    out[hot] = 1.0 - 0.01 * (N - 1)
    return tuple(out)


def _row(pmid="1", p1="A1", p2="B2", model_id="m00", hot=0):
    return MemberPrediction(pmid, p1, p2, model_id, _probs(hot))


class TestMemberRoundTrip:
    def test_rows_and_model_ids_survive(self, tmp_path):
        rows = [_row(model_id="m00"), _row(model_id="m01", hot=3)]
        path = tmp_path / "members.jsonl"
        write_member_predictions(path, rows, model_ids=["m00", "m01"])
        got, model_ids = read_member_predictions(path)
        assert got == rows
        assert model_ids == ["m00", "m01"]

    def test_header_without_model_ids(self, tmp_path):
        path = tmp_path / "members.jsonl"
        write_member_predictions(path, [_row()])
        got, model_ids = read_member_predictions(path)
        assert len(got) == 1
        assert model_ids is None

    def test_header_is_first_line_and_compact(self, tmp_path):
        path = tmp_path / "members.jsonl"
        write_member_predictions(path, [_row()])
        first = path.read_text("utf-8").splitlines()[0]
        assert json.loads(first) == {"class_order": list(CLASS_ORDER)}
        assert ": " not in first

    def test_class_order_mismatch_is_hard_error(self, tmp_path):
        path = tmp_path / "members.jsonl"
        header = {"class_order": list(reversed(CLASS_ORDER))}
        path.write_text(json.dumps(header) + "\n", "utf-8")
        with pytest.raises(ValueError, match="class order mismatch"):
            read_member_predictions(path)

    def test_malformed_rows_counted_and_skipped(self, tmp_path):
        path = tmp_path / "members.jsonl"
        good = {
            "pmid": "1", "p1": "A", "p2": "B", "model_id": "m",
            "probs": list(_probs(0)),
        }
        bad_lines = [
            "not json at all",
            json.dumps(["a", "list"]),
            json.dumps({**good, "probs": [0.5] * (N - 1)}),
            json.dumps({**good, "probs": [float("nan")] * N}).replace("NaN", "1e999"),
            json.dumps({**good, "probs": [True] * N}),
            json.dumps({k: v for k, v in good.items() if k != "pmid"}),
        ]
        lines = [json.dumps({"class_order": list(CLASS_ORDER)})]
        lines += bad_lines[:3] + [json.dumps(good)] + bad_lines[3:]
        path.write_text("\n".join(lines) + "\n", "utf-8")
        report = SkipReport()
        rows, _ = read_member_predictions(path, report=report)
        assert len(rows) == 1
        assert report.counts["wire_bad_row"] == len(bad_lines)

    def test_blank_lines_ignored(self, tmp_path):
        path = tmp_path / "members.jsonl"
        write_member_predictions(path, [_row()])
        path.write_text(path.read_text("utf-8") + "\n\n", "utf-8")
        rows, _ = read_member_predictions(path)
        assert len(rows) == 1


class TestGrouping:
    def test_groups_by_pair_and_sorts_members(self):
        rows = [
            _row(model_id="m01", hot=1),
            _row(model_id="m00", hot=0),
            _row(pmid="2", model_id="m00", hot=2),
        ]
        groups = group_member_rows(rows)
        assert set(groups) == {("1", "A1", "B2"), ("2", "A1", "B2")}
        assert [r.model_id for r in groups[("1", "A1", "B2")]] == ["m00", "m01"]

    def test_aggregate_means_in_canonical_order(self):
        rows = [
            _row(pmid="2", model_id="m00", hot=0),
            _row(pmid="1", model_id="m00", hot=0),
            _row(pmid="1", model_id="m01", hot=1),
        ]
        agg = aggregate_groups(group_member_rows(rows))
        assert [key for key, _ in agg] == [("1", "A1", "B2"), ("2", "A1", "B2")]
        expected = (np.array(_probs(0)) + np.array(_probs(1))) / 2
        np.testing.assert_allclose(agg[0][1], expected, atol=1e-15)
        np.testing.assert_allclose(agg[1][1], _probs(0), atol=1e-15)


class TestValidationRows:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "val.jsonl"
        rows = [
            (("1", "A1", "B2"), "phosphorylation", _probs(3)),
            (("2", "C3", "D4"), "NEGATIVE", _probs(7)),
        ]
        write_validation_predictions(path, rows)
        assert read_validation_predictions(path) == rows

    def test_bad_gold_field_counted(self, tmp_path):
        path = tmp_path / "val.jsonl"
        obj = {"pmid": "1", "p1": "A", "p2": "B", "gold": 42,
               "probs": list(_probs(0))}
        path.write_text(json.dumps(obj) + "\n", "utf-8")
        report = SkipReport()
        assert read_validation_predictions(path, report=report) == []
        assert report.counts["wire_bad_row"] == 1


class TestScanRows:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "scan.jsonl"
        preds = [
            TypedPrediction("1", "A1", "B2", "phosphorylation", 0.93, False),
            TypedPrediction("2", "C3", "D4", "NEGATIVE", 0.5, True),
        ]
        write_scan_predictions(path, preds)
        assert read_scan_predictions(path) == preds

    def test_tie_defaults_false(self, tmp_path):
        path = tmp_path / "scan.jsonl"
        obj = {"pmid": "1", "p1": "A", "p2": "B",
               "label": "acetylation", "probability": 0.9}
        path.write_text(json.dumps(obj) + "\n", "utf-8")
        assert read_scan_predictions(path)[0].tie is False


class TestThresholdTable:
    def test_round_trip_exact_floats(self, tmp_path):
        path = tmp_path / "cut.tsv"
        cutoffs = {t: 0.1 * (i + 1) for i, t in enumerate(INTERACTION_TYPES)}
        write_thresholds(path, cutoffs)
        assert read_thresholds(path) == cutoffs

    def test_rows_follow_class_order(self, tmp_path):
        path = tmp_path / "cut.tsv"
        write_thresholds(path, {t: 0.5 for t in INTERACTION_TYPES})
        lines = path.read_text("utf-8").splitlines()
        assert lines[0] == "Type\tCutoff"
        assert [l.split("\t")[0] for l in lines[1:]] == list(INTERACTION_TYPES)

    def test_missing_type_rejected_on_write(self, tmp_path):
        cutoffs = {t: 0.5 for t in INTERACTION_TYPES[1:]}
        with pytest.raises(ValueError, match="missing"):
            write_thresholds(tmp_path / "cut.tsv", cutoffs)

    def test_incomplete_file_rejected_on_read(self, tmp_path):
        path = tmp_path / "cut.tsv"
        lines = ["Type\tCutoff"] + [f"{t}\t0.5" for t in INTERACTION_TYPES[:-1]]
        path.write_text("\n".join(lines) + "\n", "utf-8")
        with pytest.raises(ValueError, match="cover exactly"):
            read_thresholds(path)

    def test_unknown_type_rejected_on_read(self, tmp_path):
        path = tmp_path / "cut.tsv"
        lines = ["Type\tCutoff"] + [f"{t}\t0.5" for t in INTERACTION_TYPES]
        lines.append("sumoylation\t0.5")
        path.write_text("\n".join(lines) + "\n", "utf-8")
        with pytest.raises(ValueError, match="cover exactly"):
            read_thresholds(path)

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "cut.tsv"
        path.write_text("Kind\tValue\n", "utf-8")
        with pytest.raises(ValueError, match="header"):
            read_thresholds(path)

    def test_comments_and_blanks_skipped(self, tmp_path):
        path = tmp_path / "cut.tsv"
        body = "\n".join(
            ["Type\tCutoff", "# comment", ""]
            + [f"{t}\t0.25" for t in INTERACTION_TYPES]
        )
        path.write_text(body + "\n", "utf-8")
        assert read_thresholds(path) == {t: 0.25 for t in INTERACTION_TYPES}

    @given(st.lists(st.floats(0.0, 1.0, allow_nan=False),
                    min_size=7, max_size=7))
    @settings(max_examples=50, deadline=None)
    def test_repr_round_trip_is_lossless(self, tmp_path_factory, values):
        path = tmp_path_factory.mktemp("thr") / "cut.tsv"
        cutoffs = dict(zip(INTERACTION_TYPES, values))
        write_thresholds(path, cutoffs)
        assert read_thresholds(path) == cutoffs
