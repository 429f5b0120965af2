import functools
import itertools

from dataclasses import dataclass

from qtilt.lattice import (
    Weight, TwistLabel, ZERO, UNIT_LABEL,
    canonicalize_label, is_dominant, is_special, recompose, steinberg_factorize
)

from qtilt.charring import (
    Character, TiltingDecomposition,
    dimension, donkin_split, greedy_tilt_decompose, simple_character, tilting_character, twisted_tilting_character
)

from qtilt.serialization import label_to_json, label_from_json, weight_to_json, character_to_json, encode_integer, decode_integer

from qtilt.utilities import QTiltError


class FusionError(QTiltError):
    pass


class ClassVector:
    """Element of A_n in the basis of canonical twisted tilting labels."""

    __slots__ = ("entries", "_hash")

    def __init__(self, entries=None):
        self.entries = {label: coefficient for label, coefficient in (entries or dict()).items() if coefficient != 0}
        self._hash = None

    @classmethod
    def unit(cls):
        return cls({UNIT_LABEL: 1})

    @classmethod
    def basis(cls, label, params=None):
        if params is not None:
            label = canonicalize_label(label, params)

        return cls({label: 1})

    def items(self):
        return sorted(self.entries.items())

    def labels(self):
        return sorted(self.entries)

    def __getitem__(self, label):
        return self.entries.get(label, 0)

    def __len__(self):
        return len(self.entries)

    def __bool__(self):
        return bool(self.entries)

    def __eq__(self, other):
        if isinstance(other, dict):
            return self.entries == other

        if isinstance(other, int) and other == 0:
            return not self.entries

        return isinstance(other, ClassVector) and self.entries == other.entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.entries.items()))

        return self._hash

    def __neg__(self):
        return ClassVector({label: -coefficient for label, coefficient in self.entries.items()})

    def __add__(self, other):
        entries = dict(self.entries)

        for label, coefficient in other.entries.items():
            entries[label] = entries.get(label, 0) + coefficient

        return ClassVector(entries)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if not isinstance(scalar, int):
            raise FusionError("ClassVector products need params: use fusion.multiply")

        return ClassVector({label: coefficient * scalar for label, coefficient in self.entries.items()})

    __rmul__ = __mul__

    def __repr__(self):
        body = " + ".join(f"{coefficient}*t({label})" for label, coefficient in self.items())
        return f"ClassVector({body or '0'})"

    def character(self, params):
        total = Character.zero()

        for label, coefficient in self.entries.items():
            total = total + twisted_tilting_character(label, params) * coefficient

        return total

    def is_special(self, params):
        return all(is_special(label, params) for label in self.entries)

    def to_json(self, params):
        return {
            "summands": [
                {
                    "label": label_to_json(label),
                    "mult": encode_integer(coefficient),
                    "tilting": is_tilting_label(label, params),
                    "simple": is_simple_label(label, params)
                } for label, coefficient in self.items()
            ],
            "params": params.to_json()
        }

    @classmethod
    def from_json(cls, data):
        return cls({label_from_json(summand["label"]): decode_integer(summand["mult"]) for summand in data["summands"]})


@dataclass(frozen=True)
class StrikeOutTrace:
    listed: tuple
    struck: frozenset
    survivors: tuple

    def to_json(self):
        return {
            "listed": [weight_to_json(weight) for weight in self.listed],
            "struck": [weight_to_json(weight) for weight in sorted(self.struck, reverse=True)],
            "survivors": [weight_to_json(weight) for weight in self.survivors]
        }


def _strike_out(a, b, modulus):
    """Listed (a+b-i, i) for i <= min(a, b); each index j with a+b-2j = m+u, 0 <= u <= m-2, strikes (a+b-j-u-1, j+u+1)."""
    listed = tuple(Weight(a + b - i, i) for i in range(min(a, b) + 1))
    present = set(listed)

    struck = set()

    for j in range(len(listed)):
        u = a + b - 2 * j - modulus

        if 0 <= u <= modulus - 2:
            target = Weight(a + b - j - u - 1, j + u + 1)

            if target in present:
                struck.add(target)

    survivors = tuple(weight for weight in listed if weight not in struck)

    return StrikeOutTrace(listed, frozenset(struck), survivors)


def _clebsch(w, w2, modulus):
    for weight in (w, w2):
        if not is_dominant(weight) or weight.diff > modulus - 1:
            raise FusionError(f"Weight ({weight}) is not restricted at modulus {modulus}")

    trace = _strike_out(w.diff, w2.diff, modulus)

    return w.b + w2.b, TiltingDecomposition({weight: 1 for weight in trace.survivors}), trace


def clebsch_quantum(w, w2, ell):
    return _clebsch(w, w2, ell)


def clebsch_classical(w, w2, p):
    return _clebsch(w, w2, p)


def _simple_tensor_levels(w, w2, params):
    left = steinberg_factorize(w, params)
    right = steinberg_factorize(w2, params)

    levels = list()

    for level in range(-1, max(left.height, right.height) + 1):
        det_power, decomposition, trace = _clebsch(left.level(level), right.level(level), params.modulus(level))
        levels.append((level, det_power, decomposition, trace))

    return left, right, levels


def simple_tensor_simple(w, w2, params):
    _, _, levels = _simple_tensor_levels(w, w2, params)

    choices = [
        [(weight + Weight.determinant(det_power), multiplicity) for weight, multiplicity in decomposition.items()]
        for _, det_power, decomposition, _ in levels
    ]

    result = dict()

    for combination in itertools.product(*choices):
        weights = [weight for weight, _ in combination]
        multiplicity = 1

        for _, level_multiplicity in combination:
            multiplicity *= level_multiplicity

        label = canonicalize_label(TwistLabel(weights[0], tuple(weights[1:])), params)
        result[label] = result.get(label, 0) + multiplicity

    return ClassVector(result)


def is_tilting_label(lbl, params):
    for level in range(-1, lbl.diff_height):
        modulus = params.modulus(level)

        if not modulus - 1 <= lbl.level(level).diff <= 2 * modulus - 2:
            return False

    return True


def is_simple_label(lbl, params):
    return all(weight.diff <= params.modulus(level) - 1 for level, weight in lbl.entries())


@functools.lru_cache(maxsize=None)
def _tilting_product(u, v, modulus, higher_modulus):
    if u.diff == 0:
        return ((v + u, 1),)

    if v.diff == 0:
        return ((u + v, 1),)

    character = tilting_character(u, modulus, higher_modulus) * tilting_character(v, modulus, higher_modulus)

    return tuple(greedy_tilt_decompose(character, modulus, higher_modulus).items())


def tilting_product(u, v, level, params):
    """T(u) ⊗ T(v) at one level as ((weight, multiplicity), ...)."""
    u, v = sorted((u, v))
    return _tilting_product(u, v, params.modulus(level), params.p)


def _first_outside_level(lbl, params):
    for level, weight in lbl.entries():
        if weight.diff > 2 * params.modulus(level) - 2:
            return level

    return None


def donkin_normalize(lbl, params, verify=False):
    for level, weight in lbl.entries():
        if not is_dominant(weight):
            raise FusionError(f"Label ({lbl}) has a non-dominant weight at level {level}")

    pending = [(lbl, 1)]
    result = dict()

    while pending:
        label, multiplicity = pending.pop()
        level = _first_outside_level(label, params)

        if level is None:
            canonical = canonicalize_label(label, params)
            result[canonical] = result.get(canonical, 0) + multiplicity
            continue

        core, carry = donkin_split(label.level(level), params.modulus(level))
        upper = label.level(level + 1)

        for weight, carry_multiplicity in tilting_product(carry, upper, level + 1, params):
            pending.append((label.with_level(level, core).with_level(level + 1, weight), multiplicity * carry_multiplicity))

    normalized = ClassVector(result)

    if verify and normalized.character(params) != twisted_tilting_character(lbl, params):
        raise FusionError(f"Normalization of ({lbl}) does not preserve its character")

    return normalized


@functools.lru_cache(maxsize=None)
def _label_product(s, t, params):
    choices = [
        tilting_product(s.level(level), t.level(level), level, params)
        for level in range(-1, max(s.height, t.height) + 1)
    ]

    result = ClassVector()

    for combination in itertools.product(*choices):
        weights = [weight for weight, _ in combination]
        multiplicity = 1

        for _, level_multiplicity in combination:
            multiplicity *= level_multiplicity

        result = result + donkin_normalize(TwistLabel(weights[0], tuple(weights[1:])), params) * multiplicity

    return result


def label_product(s, t, params):
    s, t = sorted((s, t))
    return _label_product(s, t, params)


def multiply(x, y, params):
    result = ClassVector()

    for s, s_coefficient in x.entries.items():
        for t, t_coefficient in y.entries.items():
            result = result + label_product(s, t, params) * (s_coefficient * t_coefficient)

    return result


def power(x, exponent, params):
    result = ClassVector.unit()

    for _ in range(exponent):
        result = multiply(result, x, params)

    return result


def frobenius_twist(x, params):
    """φ̄ on classes with trivial quantum level: every classical level moves up by one."""
    entries = dict()

    for label, coefficient in x.entries.items():
        if label.qlevel != ZERO:
            raise FusionError(f"Label ({label}) has a nontrivial quantum level")

        twisted = canonicalize_label(TwistLabel(ZERO, (ZERO,) + label.levels), params)
        entries[twisted] = entries.get(twisted, 0) + coefficient

    return ClassVector(entries)


def verify_conservation(w, w2, params, decomposition=None):
    if decomposition is None:
        decomposition = simple_tensor_simple(w, w2, params)

    return simple_character(w, params) * simple_character(w2, params) == decomposition.character(params)


def decompose_report(w, w2, params, verify=True, with_characters=True):
    left, right, levels = _simple_tensor_levels(w, w2, params)
    decomposition = simple_tensor_simple(w, w2, params)

    summands = list()
    total_dimension = 0

    for label, multiplicity in decomposition.items():
        character = twisted_tilting_character(label, params)
        total_dimension += multiplicity * dimension(character)

        summand = {
            "label": label_to_json(label),
            "mult": encode_integer(multiplicity),
            "tilting": is_tilting_label(label, params),
            "simple": is_simple_label(label, params),
            "special": is_special(label, params),
            "highest_weight": weight_to_json(recompose(label, params)),
            "dimension": dimension(character)
        }

        if with_characters:
            summand["character"] = character_to_json(character)

        summands.append(summand)

    return {
        "params": params.to_json(),
        "inputs": [weight_to_json(w), weight_to_json(w2)],
        "factorizations": [label_to_json(left), label_to_json(right)],
        "levels": [
            {"level": level, "modulus": params.modulus(level), "det_power": det_power, **trace.to_json()}
            for level, det_power, _, trace in levels
        ],
        "summands": summands,
        "dimension": total_dimension,
        "conservation": verify_conservation(w, w2, params, decomposition) if verify else None
    }
