import io
import json
import os
import shutil
import tempfile

import pytest

from qtilt.config import cache_directory, config, load_config_file, merge_config
from qtilt.logger import Logger, Loggers
from qtilt.loggers import NoopLogger, StderrLogger, build_logger
from qtilt.utilities import QTiltError, random_dominant_pairs, random_rationals


class TestConfig:
    def setup_method(self, method):
        self.directory = tempfile.mkdtemp()

    def teardown_method(self, method):
        shutil.rmtree(self.directory, ignore_errors=True)

    def test_package_config_should_carry_every_section(self):
        for section in ("params", "cache", "logger", "table", "probes", "reports"):
            assert section in config

        assert config["probes"]["seed"] == 420133769

    def test_merge_config_should_merge_sections(self):
        base = {"params": {"l": 3, "p": 2}, "table": {"workers": 1}}
        merged = merge_config(base, {"params": {"p": 5}, "extra": 1})

        assert merged == {"params": {"l": 3, "p": 5}, "table": {"workers": 1}, "extra": 1}
        assert base["params"]["p"] == 2

    def test_load_config_file(self):
        file_path = os.path.join(self.directory, "config.yml")

        with open(file_path, "w") as f:
            f.write("params:\n    l: 5\n")

        assert load_config_file(file_path) == {"params": {"l": 5}}

        with open(file_path, "w") as f:
            f.write("params: 'unterminated\n")

        with pytest.raises(QTiltError):
            load_config_file(file_path)

        with pytest.raises(QTiltError):
            load_config_file(os.path.join(self.directory, "missing.yml"))

        assert load_config_file(os.path.join(self.directory, "missing.yml"), required=False) == {}

    def test_cache_directory_precedence(self, monkeypatch):
        monkeypatch.delenv("QTILT_CACHE", raising=False)

        assert cache_directory() == config["cache"]["directory"]
        assert cache_directory("flag") == "flag"

        monkeypatch.setenv("QTILT_CACHE", "environment")

        assert cache_directory("flag") == "environment"


class TestLoggers:
    def setup_method(self, method):
        self.stream = io.StringIO()

    def teardown_method(self, method):
        pass

    def test_base_logger_should_not_log(self):
        logger = Logger()

        with pytest.raises(NotImplementedError):
            logger.log_event("EVENT")

        with pytest.raises(NotImplementedError):
            logger.log_metric("key", 1)

    def test_build_logger(self):
        assert isinstance(build_logger("noop"), NoopLogger)
        assert isinstance(build_logger(Loggers.STDERR, {"stream": self.stream}), StderrLogger)

    def test_stderr_logger_should_write_json_lines(self):
        logger = StderrLogger({"stream": self.stream})

        logger.log_event("TABLE_SUMMARY", {"records": 3})
        logger.log_metric("check.g_derivative.seconds", 0.5)

        lines = [json.loads(line) for line in self.stream.getvalue().splitlines()]

        assert [line["event_key"] for line in lines] == ["TABLE_SUMMARY", "METRIC"]
        assert lines[0]["data"] == {"records": 3}
        assert lines[1]["data"] == {"key": "check.g_derivative.seconds", "value": 0.5, "step": 0}
        assert "timestamp" in lines[0]

    def test_stderr_logger_should_honour_the_whitelist(self):
        logger = StderrLogger({"stream": self.stream, "event_whitelist": ["CHECK_FAILED"]})

        logger.log_event("TABLE_SUMMARY", {})
        logger.log_event("CHECK_FAILED", {"check": "P_doubling"})

        lines = [json.loads(line) for line in self.stream.getvalue().splitlines()]

        assert [line["event_key"] for line in lines] == ["CHECK_FAILED"]

    def test_noop_logger(self):
        logger = NoopLogger()

        assert logger.log_event("ANYTHING", {}) is None
        assert logger.log_metric("key", 1) is None


class TestUtilities:
    def setup_method(self, method):
        pass

    def teardown_method(self, method):
        pass

    def test_random_dominant_pairs_should_be_seeded(self):
        pairs = random_dominant_pairs(5, 20, 9)

        assert pairs == random_dominant_pairs(5, 20, 9)
        assert all(a >= b and a - b <= 9 for w in pairs for a, b in w)
        assert all(isinstance(a, int) for w in pairs for a, _ in w)

    def test_random_rationals_should_skip_zero_and_excluded_values(self):
        values = random_rationals(11, 10, bound=3)

        assert len(set(values)) == 10
        assert all(value != 0 for value in values)

        excluded = random_rationals(11, 1, bound=3)[0]

        assert excluded not in random_rationals(11, 5, bound=3, exclude={excluded})
