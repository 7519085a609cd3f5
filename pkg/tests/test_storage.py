"""
Unit tests for storage.py: file stems, matrix codecs and result writers.
"""

import json

import numpy as np
import pandas as pd
import pytest
from numpy.testing import assert_allclose

from enorm.errors import ConfigError, ValidationError
from enorm.models import ResultRecord
from enorm.services.channel import pure_loss_channel
from enorm.services.storage import (
    decode_matrix,
    encode_matrix,
    load_kraus_map,
    load_operator_pair,
    read_record,
    read_table,
    sanitize_stem,
    save_kraus_map,
    save_operator_pair,
    write_record,
    write_table,
)

# ---------------------------------------------------------------------------
# sanitize_stem
# ---------------------------------------------------------------------------


class TestSanitizeStem:
    def test_normal_stem(self):
        assert sanitize_stem("q_curve") == "q_curve"

    def test_strips_path_traversal(self):
        assert ".." not in sanitize_stem("../../etc/passwd")

    def test_strips_absolute_path(self):
        assert sanitize_stem("/tmp/results/curve") == "curve"

    def test_strips_windows_path(self):
        assert sanitize_stem("C:\\runs\\gbound") == "gbound"

    def test_removes_null_bytes(self):
        assert "\x00" not in sanitize_stem("curve\x00q")

    def test_replaces_special_chars(self):
        result = sanitize_stem("E<>|norm")
        assert result == "E___norm"

    def test_limits_length(self):
        assert len(sanitize_stem("a" * 300)) == 200

    def test_empty_becomes_result(self):
        assert sanitize_stem("") == "result"

    def test_only_dots(self):
        assert sanitize_stem("...") == "result"

    def test_unicode_replaced(self):
        assert "ω" not in sanitize_stem("q_ω2")


# ---------------------------------------------------------------------------
# Matrix codec
# ---------------------------------------------------------------------------


class TestMatrixCodec:
    def test_row_major_layout(self):
        payload = encode_matrix([[1, 2j], [3, 4 - 1j]])
        assert payload == {"dim": 2, "entries": [[1.0, 0.0], [0.0, 2.0], [3.0, 0.0], [4.0, -1.0]]}

    def test_decode_preserves_bits(self):
        matrix = np.array([[0.1 + 1 / 3j, np.pi], [np.e, -1e-300]])
        decoded = decode_matrix(json.loads(json.dumps(encode_matrix(matrix))))
        assert np.array_equal(decoded, matrix)

    def test_rejects_non_square(self):
        with pytest.raises(ValidationError, match="square"):
            encode_matrix(np.ones((2, 3)))

    @pytest.mark.parametrize(
        "payload, message",
        [
            ([1, 2], "'dim' and 'entries'"),
            ({"dim": 0, "entries": []}, "positive integer"),
            ({"dim": 2, "entries": [[1, 0]]}, "needs 4"),
            ({"dim": 1, "entries": [["x", 0]]}, "number pairs"),
        ],
    )
    def test_rejects_malformed(self, payload, message):
        with pytest.raises(ConfigError, match=message):
            decode_matrix(payload)


class TestOperatorPairFiles:
    def test_save_and_load(self, tmp_path, diagonal_pair):
        path = save_operator_pair(tmp_path / "pair.json", diagonal_pair.A, diagonal_pair.G)
        loaded = load_operator_pair(path)
        assert_allclose(loaded.A, diagonal_pair.A)
        assert_allclose(loaded.G, diagonal_pair.G)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            load_operator_pair(tmp_path / "absent.json")

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{", encoding="utf-8")
        with pytest.raises(ConfigError, match="not valid JSON"):
            load_operator_pair(path)

    def test_missing_keys(self, tmp_path):
        path = tmp_path / "pair.json"
        path.write_text(json.dumps({"A": encode_matrix(np.eye(2))}), encoding="utf-8")
        with pytest.raises(ConfigError, match="'A' and 'G'"):
            load_operator_pair(path)

    def test_non_psd_energy_is_invariant_violation(self, tmp_path):
        path = save_operator_pair(tmp_path / "pair.json", np.eye(2), np.diag([-1.0, 1.0]))
        with pytest.raises(ValidationError, match="positive semidefinite"):
            load_operator_pair(path)


class TestKrausFiles:
    def test_save_and_load(self, tmp_path):
        channel = pure_loss_channel(4, 0.5)
        loaded = load_kraus_map(save_kraus_map(tmp_path / "kraus.json", list(channel.kraus_ops)))
        assert len(loaded.kraus_ops) == 4
        for original, restored in zip(channel.kraus_ops, loaded.kraus_ops, strict=True):
            assert np.array_equal(original, restored)

    def test_rejects_empty_list(self, tmp_path):
        path = tmp_path / "kraus.json"
        path.write_text("[]", encoding="utf-8")
        with pytest.raises(ConfigError, match="non-empty"):
            load_kraus_map(path)

    def test_rejects_trace_increasing(self, tmp_path):
        path = save_kraus_map(tmp_path / "kraus.json", [np.eye(2), np.eye(2)])
        with pytest.raises(ValidationError, match="trace non-increasing"):
            load_kraus_map(path)


# ---------------------------------------------------------------------------
# Results
# ---------------------------------------------------------------------------


class TestResultWriters:
    def test_table_full_precision(self, tmp_path):
        frame = pd.DataFrame({"E": [0.1, 1 / 3], "value": [np.sqrt(2), np.pi]})
        path = write_table(tmp_path / "nested" / "curve.csv", frame)
        restored = read_table(path)
        assert np.array_equal(restored["value"].to_numpy(), frame["value"].to_numpy())
        assert np.array_equal(restored["E"].to_numpy(), frame["E"].to_numpy())

    def test_empty_table(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("", encoding="utf-8")
        assert read_table(path).empty

    def test_missing_table(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            read_table(tmp_path / "absent.csv")

    def test_record(self, tmp_path):
        record = ResultRecord(command="enorm", config={"seed": 0}, points=[{"E": 1.0, "value": 2.0}])
        path = write_record(tmp_path / "out.json", record)
        assert read_record(path) == record
        assert json.loads(path.read_text(encoding="utf-8"))["version"] == record.version
