import io
import json
import os
import shutil
import tempfile

import pytest

from qtilt.config import config
from qtilt.lattice import Params, TwistLabel, UNIT_LABEL
from qtilt.fusion import ClassVector
from qtilt.loggers import StderrLogger
from qtilt.serialization import dumps

from qtilt.structure_constants import StructureConstantTable, StructureConstantTableError, FORMAT_VERSION


class TestStructureConstantTable:
    def setup_method(self, method):
        self.cache_directory = tempfile.mkdtemp()
        self.params = Params(2, 3)

    def teardown_method(self, method):
        shutil.rmtree(self.cache_directory, ignore_errors=True)

    def _read(self, table):
        with open(table.file_path, "rb") as f:
            return f.read()

    def test_generate_should_write_every_pair(self):
        table = StructureConstantTable(self.params, self.cache_directory)
        summary = table.generate(4)

        assert summary["records"] == 28
        assert summary["computed"] == 28
        assert summary["reused"] == 0
        assert summary["file_path"] == os.path.join(self.cache_directory, "table-l2-p3.jsonl")

        e = TwistLabel.from_weights((1, 0))

        assert table.lookup(e, e) == ClassVector.basis(TwistLabel.from_weights((2, 0)))
        assert table.lookup(UNIT_LABEL, e) == ClassVector.basis(e)
        assert len(table.labels()) == 7

    def test_generate_should_reuse_records_and_stay_byte_identical(self):
        StructureConstantTable(self.params, self.cache_directory).generate(4)
        first = self._read(StructureConstantTable(self.params, self.cache_directory))

        table = StructureConstantTable(self.params, self.cache_directory)
        summary = table.generate(4)

        assert summary["computed"] == 0
        assert summary["reused"] == 28
        assert self._read(table) == first

    def test_generate_should_extend_incrementally(self):
        StructureConstantTable(self.params, self.cache_directory).generate(2)
        summary = StructureConstantTable(self.params, self.cache_directory).generate(4)

        # four labels up to length 2
        assert summary["reused"] == 10
        assert summary["computed"] == 18

    def test_corrupted_records_should_be_recomputed(self):
        table = StructureConstantTable(self.params, self.cache_directory)
        table.generate(4)

        first = self._read(table)

        with open(table.file_path, "r", encoding="utf-8") as f:
            lines = f.read().splitlines()

        record = json.loads(lines[3])
        record["product"] = []
        lines[3] = dumps(record)

        with open(table.file_path, "w", encoding="utf-8") as f:
            f.write("\n".join(lines) + "\n")

        stream = io.StringIO()
        logger = StderrLogger({"stream": stream})
        summary = StructureConstantTable(self.params, self.cache_directory, logger=logger).generate(4)

        assert summary["corrupted"] == 1
        assert summary["computed"] == 1
        assert self._read(table) == first
        assert "TABLE_RECORD_CORRUPTED" in [json.loads(line)["event_key"] for line in stream.getvalue().splitlines()]

    def test_header_mismatch_should_reset_the_cache(self):
        table = StructureConstantTable(self.params, self.cache_directory)
        table.generate(4)

        with open(table.file_path, "r", encoding="utf-8") as f:
            lines = f.read().splitlines()

        header = json.loads(lines[0])
        header["format_version"] = FORMAT_VERSION + 1
        lines[0] = dumps(header)

        with open(table.file_path, "w", encoding="utf-8") as f:
            f.write("\n".join(lines) + "\n")

        summary = StructureConstantTable(self.params, self.cache_directory).generate(4)

        assert summary["computed"] == 28

    def test_format_version_should_come_from_the_config(self, monkeypatch):
        monkeypatch.setitem(config["cache"], "format_version", FORMAT_VERSION + 1)

        table = StructureConstantTable(self.params, self.cache_directory)
        table.generate(2)

        with open(table.file_path, "r", encoding="utf-8") as f:
            header = json.loads(f.readline())

        assert table.format_version == FORMAT_VERSION + 1
        assert header["format_version"] == FORMAT_VERSION + 1

    def test_a_new_format_version_should_reset_the_cache(self):
        StructureConstantTable(self.params, self.cache_directory, format_version=FORMAT_VERSION).generate(4)
        summary = StructureConstantTable(self.params, self.cache_directory, format_version=FORMAT_VERSION + 1).generate(4)

        assert summary["computed"] == 28
        assert summary["reused"] == 0

    def test_tables_should_be_keyed_by_parameters(self):
        StructureConstantTable(self.params, self.cache_directory).generate(4)
        summary = StructureConstantTable(Params(3, 2), self.cache_directory).generate(0)

        assert summary["records"] == 1
        assert os.path.isfile(os.path.join(self.cache_directory, "table-l2-p3.jsonl"))
        assert os.path.isfile(os.path.join(self.cache_directory, "table-l3-p2.jsonl"))

    def test_worker_pool_should_produce_the_same_bytes(self):
        serial = StructureConstantTable(self.params, os.path.join(self.cache_directory, "serial"), workers=1)
        serial.generate(4)

        pooled = StructureConstantTable(self.params, os.path.join(self.cache_directory, "pooled"), workers=2)
        pooled.generate(4)

        assert self._read(serial) == self._read(pooled)

    def test_unwritable_cache_should_raise(self):
        blocker = os.path.join(self.cache_directory, "blocker")

        with open(blocker, "w") as f:
            f.write("not a directory")

        table = StructureConstantTable(self.params, os.path.join(blocker, "cache"))

        with pytest.raises(StructureConstantTableError):
            table.generate(2)
