import hashlib
import json
import os
import tempfile

from concurrent.futures import ProcessPoolExecutor

from qtilt.config import config
from qtilt.lattice import Params, special_labels
from qtilt.fusion import ClassVector, label_product
from qtilt.loggers import NoopLogger
from qtilt.serialization import label_to_json, label_from_json, dumps
from qtilt.utilities import QTiltError


class StructureConstantTableError(QTiltError):
    pass


FORMAT_VERSION = 1


def record_checksum(left, right, product):
    payload = dumps({"left": left, "right": right, "product": product})
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _compute_record(task):
    left, right, ell, p = task
    params = Params(ell, p)

    product = label_product(left, right, params).to_json(params)["summands"]

    left_json = label_to_json(left)
    right_json = label_to_json(right)

    return {
        "record": "product",
        "left": left_json,
        "right": right_json,
        "product": product,
        "checksum": record_checksum(left_json, right_json, product)
    }


def _record_key(record):
    return dumps(record["left"]), dumps(record["right"])


class StructureConstantTable:
    """Multiplication table of special canonical labels, persisted as JSON lines.

    The first line is a header; every other line is one (left, right) product with a checksum.
    Records are sorted by label so a complete table always serializes to the same bytes.
    """

    def __init__(self, params, cache_directory, logger=None, workers=None, format_version=None):
        self.params = params
        self.cache_directory = cache_directory
        self.logger = logger or NoopLogger()
        self.workers = workers or config["table"].get("workers", 1)
        self.format_version = format_version or config["cache"].get("format_version", FORMAT_VERSION)

        self.records = dict()

    @property
    def file_path(self):
        return os.path.join(self.cache_directory, f"table-l{self.params.ell}-p{self.params.p}.jsonl")

    def header(self, max_length):
        return {
            "record": "header",
            "format_version": self.format_version,
            "params": self.params.to_json(),
            "max_length": max_length
        }

    def load(self):
        self.records = dict()

        if not os.path.isfile(self.file_path):
            return {"loaded": 0, "corrupted": 0}

        with open(self.file_path, "r", encoding="utf-8") as f:
            lines = f.read().splitlines()

        header = self._parse_line(lines[0]) if lines else None

        if header is None or header.get("format_version") != self.format_version or header.get("params") != self.params.to_json():
            self.logger.log_event("TABLE_CACHE_RESET", {"file_path": self.file_path, "header": header})
            return {"loaded": 0, "corrupted": 0}

        corrupted = 0

        for line in lines[1:]:
            record = self._parse_line(line)

            if record is None or not self._is_valid(record):
                corrupted += 1
                self.logger.log_event("TABLE_RECORD_CORRUPTED", {"file_path": self.file_path, "line": line[:200]})
                continue

            self.records[_record_key(record)] = record

        return {"loaded": len(self.records), "corrupted": corrupted}

    def _parse_line(self, line):
        try:
            return json.loads(line)
        except ValueError:
            return None

    def _is_valid(self, record):
        try:
            return record.get("record") == "product" and \
                record["checksum"] == record_checksum(record["left"], record["right"], record["product"])
        except (KeyError, AttributeError, TypeError):
            return False

    def pairs(self, max_length):
        labels = special_labels(self.params, max_length)

        return [(left, right) for index, left in enumerate(labels) for right in labels[index:]]

    def generate(self, max_length):
        stats = self.load()

        missing = list()
        wanted = dict()

        for left, right in self.pairs(max_length):
            key = (dumps(label_to_json(left)), dumps(label_to_json(right)))
            wanted[key] = None

            if key not in self.records:
                missing.append((left, right, self.params.ell, self.params.p))

        if self.workers > 1 and len(missing) > 1:
            with ProcessPoolExecutor(max_workers=self.workers) as executor:
                computed = list(executor.map(_compute_record, missing))
        else:
            computed = [_compute_record(task) for task in missing]

        for record in computed:
            self.records[_record_key(record)] = record
            self.logger.log_event("TABLE_RECORD_COMPUTED", {"left": record["left"], "right": record["right"]})

        self.records = {key: self.records[key] for key in wanted}
        self.write(max_length)

        summary = {
            "file_path": self.file_path,
            "records": len(self.records),
            "computed": len(computed),
            "reused": len(self.records) - len(computed),
            "corrupted": stats["corrupted"]
        }

        self.logger.log_event("TABLE_SUMMARY", summary)

        return summary

    def write(self, max_length):
        """Single writer: the whole table lands through an atomic rename."""
        try:
            os.makedirs(self.cache_directory, exist_ok=True)

            descriptor, temporary_path = tempfile.mkstemp(dir=self.cache_directory, suffix=".tmp")

            with os.fdopen(descriptor, "w", encoding="utf-8") as f:
                f.write(dumps(self.header(max_length)) + "\n")

                for key in sorted(self.records):
                    f.write(dumps(self.records[key]) + "\n")

            os.replace(temporary_path, self.file_path)
        except OSError as e:
            raise StructureConstantTableError(f"Cache directory '{self.cache_directory}' is not writable: {e}")

    def lookup(self, left, right):
        key = (dumps(label_to_json(left)), dumps(label_to_json(right)))
        swapped = (key[1], key[0])

        record = self.records.get(key) or self.records.get(swapped)

        if record is None:
            return None

        return ClassVector.from_json({"summands": record["product"]})

    def labels(self):
        return sorted({label_from_json(record["left"]) for record in self.records.values()})
