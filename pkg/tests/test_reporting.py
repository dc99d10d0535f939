import json
import math
import os

import numpy as np

from src.reporting import FAIL, INFO, PASS, Report, at_most, check, info, sanitize, write_report


def make_report():
    report = Report("verify", {"seed": 1})
    report.extend([
        at_most("kmaps.sup", 0.5, 0.5),
        at_most("kmaps.identity", 1e-3, 0.0, tolerance=1e-12),
        info("c1_probe.growth", 1.0, slope=1.0),
    ])
    return report


class TestChecks:
    def test_statuses(self):
        assert check("a", True).status == PASS
        assert check("a", False).status == FAIL
        assert info("a").status == INFO

    def test_at_most_uses_tolerance(self):
        assert at_most("a", 1.0 + 1e-13, 1.0, tolerance=1e-12).status == PASS
        assert at_most("a", 1.0 + 1e-11, 1.0, tolerance=1e-12).status == FAIL

    def test_details(self):
        c = check("a", True, 1.0, 2.0, rows=[1, 2])
        assert c.to_dict()["details"] == {"rows": [1, 2]}


class TestReport:
    def test_exit_code(self):
        report = make_report()
        assert report.exit_code == 1
        assert [c.name for c in report.failures] == ["kmaps.identity"]
        assert Report("verify", {}, [info("x")]).exit_code == 0

    def test_summary_counts(self):
        lines = make_report().summary().splitlines()
        assert lines[-1] == "verify: 1 passed, 1 failed, 1 info"
        assert lines[0].startswith("[PASS] kmaps.sup")

    def test_json_is_strict(self):
        report = Report("verify", {"eps": None}, [at_most("a", math.inf, math.inf)])
        obj = json.loads(report.to_json())
        assert obj["checks"][0]["measured"] == "inf"
        assert obj["params"]["eps"] is None


class TestSanitize:
    def test_non_finite(self):
        assert sanitize([math.nan, -math.inf, 1.5]) == ["nan", "-inf", 1.5]

    def test_numpy_types(self):
        out = sanitize({"a": np.float64(0.25), "b": np.int64(3), "c": np.bool_(True), "d": np.array([1.0, np.inf])})
        assert out == {"a": 0.25, "b": 3, "c": True, "d": [1.0, "inf"]}
        assert type(out["b"]) is int
        assert type(out["c"]) is bool

    def test_tuples_and_keys(self):
        assert sanitize({1: (1, 2)}) == {"1": [1, 2]}


class TestWriteReport:
    def test_writes_atomically(self, tmp_path):
        path = tmp_path / "out" / "report.json"
        assert write_report(str(path), make_report())
        obj = json.loads(path.read_text())
        assert obj["command"] == "verify"
        assert len(obj["checks"]) == 3
        assert sorted(os.listdir(path.parent)) == ["report.json"]

    def test_overwrites(self, tmp_path):
        path = tmp_path / "report.json"
        path.write_text("old")
        assert write_report(str(path), "{}")
        assert path.read_text() == "{}\n"

    def test_unwritable_target(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("x")
        assert not write_report(str(blocker / "report.json"), make_report())
