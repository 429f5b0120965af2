import json
import re

from qtilt.lattice import Weight, TwistLabel, LatticeError, is_dominant
from qtilt.charring import Character


INT64_MAX = 2 ** 63 - 1

weight_pattern = re.compile(r"^\s*(-?\d+)\s*,\s*(-?\d+)\s*$")


def encode_integer(value):
    """Exact decimal string once a coefficient leaves the signed 64-bit range."""
    return value if -INT64_MAX - 1 <= value <= INT64_MAX else str(value)


def decode_integer(value):
    return int(value)


def weight_to_json(w):
    return [w.a, w.b]


def weight_from_json(data):
    return Weight(int(data[0]), int(data[1]))


def label_to_json(lbl):
    return {
        "qlevel": weight_to_json(lbl.qlevel),
        "levels": [weight_to_json(weight) for weight in lbl.levels]
    }


def label_from_json(data):
    return TwistLabel(weight_from_json(data["qlevel"]), tuple(weight_from_json(level) for level in data["levels"]))


def character_to_json(c):
    return [[i, j, encode_integer(coefficient)] for (i, j), coefficient in c.items()]


def character_from_json(data):
    return Character({(int(i), int(j)): decode_integer(coefficient) for i, j, coefficient in data})


def parse_weight(text, require_dominant=True):
    match = weight_pattern.match(text)

    if match is None:
        raise LatticeError(f"Malformed weight '{text}': expected 'a,b'")

    weight = Weight(int(match.group(1)), int(match.group(2)))

    if require_dominant and not is_dominant(weight):
        raise LatticeError(f"Weight '{text}' is not dominant")

    return weight


def parse_label(text):
    """'a,b;a0,b0;a1,b1' with an empty classical part allowed ('a,b' alone)."""
    chunks = [chunk for chunk in text.split(";")]

    if not chunks or not chunks[0].strip():
        raise LatticeError(f"Malformed label '{text}'")

    weights = [parse_weight(chunk) for chunk in chunks if chunk.strip()]

    return TwistLabel(weights[0], tuple(weights[1:]))


def dumps(report):
    return json.dumps(report, sort_keys=True, ensure_ascii=False)


def loads(text):
    return json.loads(text)
