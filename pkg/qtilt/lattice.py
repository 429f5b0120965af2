import itertools
import math

from dataclasses import dataclass

from sympy import isprime

from qtilt.enums import Region
from qtilt.utilities import QTiltError


class LatticeError(QTiltError):
    pass


@dataclass(frozen=True)
class Params:
    ell: int
    p: int

    def __post_init__(self):
        if not isinstance(self.ell, int) or self.ell < 2:
            raise LatticeError(f"ell must be an integer >= 2, got {self.ell!r}")

        if not isinstance(self.p, int) or not isprime(self.p):
            raise LatticeError(f"p must be a prime, got {self.p!r}")

        if math.gcd(self.ell, self.p) != 1:
            raise LatticeError(f"ell={self.ell} and p={self.p} are not coprime")

    def modulus(self, level):
        return self.ell if level == -1 else self.p

    def scale(self, level):
        return 1 if level == -1 else self.ell * self.p ** level

    def to_json(self):
        return {"l": self.ell, "p": self.p}


@dataclass(frozen=True, order=True)
class Weight:
    a: int
    b: int

    @property
    def diff(self):
        return self.a - self.b

    @property
    def is_dominant(self):
        return self.a >= self.b

    @property
    def is_zero(self):
        return self.a == 0 and self.b == 0

    def __add__(self, other):
        return Weight(self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        return Weight(self.a - other.a, self.b - other.b)

    def __str__(self):
        return f"{self.a},{self.b}"

    @classmethod
    def determinant(cls, k=1):
        return cls(k, k)


ZERO = Weight(0, 0)
ALPHA = Weight(1, -1)


@dataclass(frozen=True, order=True)
class TwistLabel:
    """(u₋₁; u₀, …, u_m): T(u₋₁) ⊗ (T̄(u₀) ⊗ T̄(u₁)^F̄ ⊗ …)^F.

    The quantum level is stored apart from the classical levels; level(i) pads with zero weights.
    """

    qlevel: Weight = ZERO
    levels: tuple = ()

    @property
    def height(self):
        return len(self.levels) - 1

    @property
    def diff_height(self):
        for index in range(len(self.levels) - 1, -1, -1):
            if self.levels[index].diff != 0:
                return index

        return -1

    def level(self, index):
        if index == -1:
            return self.qlevel

        if index < len(self.levels):
            return self.levels[index]

        return ZERO

    def entries(self):
        yield -1, self.qlevel

        for index, weight in enumerate(self.levels):
            yield index, weight

    def with_level(self, index, weight):
        if index == -1:
            return TwistLabel(weight, self.levels)

        levels = list(self.levels) + [ZERO] * (index + 1 - len(self.levels))
        levels[index] = weight

        return TwistLabel(self.qlevel, tuple(levels))

    def trimmed(self):
        levels = list(self.levels)

        while levels and levels[-1].is_zero:
            levels.pop()

        return TwistLabel(self.qlevel, tuple(levels))

    def __str__(self):
        return ";".join(str(weight) for _, weight in self.entries())

    @classmethod
    def from_weights(cls, qlevel, *levels):
        return cls(Weight(*qlevel), tuple(Weight(*level) for level in levels)).trimmed()


UNIT_LABEL = TwistLabel()


def is_dominant(w):
    return w.a >= w.b


def _require_dominant(w):
    if not is_dominant(w):
        raise LatticeError(f"Weight ({w}) is not dominant")


def _require_dominant_label(lbl):
    for level, weight in lbl.entries():
        if not is_dominant(weight):
            raise LatticeError(f"Label ({lbl}) has a non-dominant weight at level {level}")


def region(w, modulus):
    _require_dominant(w)

    if modulus < 2:
        raise LatticeError(f"modulus must be >= 2, got {modulus}")

    if w.diff <= modulus - 1:
        return Region.RESTRICTED
    elif w.diff <= 2 * modulus - 2:
        return Region.BAND

    return Region.OUTSIDE


def region_contains(region_, w, modulus):
    _require_dominant(w)

    if region_ == Region.RESTRICTED:
        return w.diff <= modulus - 1
    elif region_ == Region.BAND:
        return modulus - 1 <= w.diff <= 2 * modulus - 2
    elif region_ == Region.PI:
        return w.diff <= 2 * modulus - 2

    return w.diff > 2 * modulus - 2


def frobenius_scale(w, k):
    return Weight(k * w.a, k * w.b)


def length_weight(w):
    return w.diff


def length_label(lbl, params):
    return sum(params.scale(level) * length_weight(weight) for level, weight in lbl.entries())


def recompose(lbl, params):
    total = ZERO

    for level, weight in lbl.entries():
        total = total + frobenius_scale(weight, params.scale(level))

    return total


def is_special(lbl, params):
    for level, weight in lbl.entries():
        if weight.diff > 2 * params.modulus(level) - 2:
            return False

    return True


def _determinant_total(lbl, params):
    return sum(params.scale(level) * weight.b for level, weight in lbl.entries())


def _assemble(diffs, dets):
    """diffs and dets are dicts keyed by level (-1, 0, 1, ...)."""
    top = max(list(diffs.keys()) + list(dets.keys()) + [-1])

    weights = [Weight(dets.get(level, 0) + diffs.get(level, 0), dets.get(level, 0)) for level in range(-1, top + 1)]

    return TwistLabel(weights[0], tuple(weights[1:])).trimmed()


def _distribute_determinant(total, diff_top, params):
    """Base-(ℓ, p, p, …) digits of the determinant total.

    Levels below diff_top always take a digit. From level max(diff_top, 0) on, a negative remainder
    stops the expansion and sits whole on that level, which becomes the top.
    """
    dets = dict()

    level = -1

    while True:
        modulus = params.modulus(level)

        if level == -1 or level < diff_top or total >= 0:
            digit = total % modulus
            total = (total - digit) // modulus
        else:
            digit = total
            total = 0

        dets[level] = digit

        if total == 0 and level >= diff_top:
            break

        level += 1

    return dets


def canonicalize_label(lbl, params):
    _require_dominant_label(lbl)

    diffs = {level: weight.diff for level, weight in lbl.entries() if weight.diff != 0}
    diff_top = max(list(diffs.keys()) + [-1])

    dets = _distribute_determinant(_determinant_total(lbl, params), diff_top, params)

    return _assemble(diffs, dets)


def steinberg_factorize(w, params):
    _require_dominant(w)

    diffs = dict()
    remainder = w.diff

    level = -1

    while remainder > 0:
        modulus = params.modulus(level)
        diffs[level] = remainder % modulus
        remainder //= modulus
        level += 1

    diffs = {level: digit for level, digit in diffs.items() if digit != 0}
    diff_top = max(list(diffs.keys()) + [-1])

    return _assemble(diffs, _distribute_determinant(w.b, diff_top, params))


def special_labels(params, max_length, max_height=None):
    """Canonical special labels with every determinant coordinate zero, length <= max_length."""
    if max_length < 0:
        return []

    level_bounds = list()

    level = -1

    while True:
        if max_height is not None and level > max_height:
            break

        scale = params.scale(level)

        if level >= 0 and scale > max_length:
            break

        level_bounds.append(min(2 * params.modulus(level) - 2, max_length // scale))
        level += 1

    labels = list()

    for diffs in itertools.product(*[range(bound + 1) for bound in level_bounds]):
        length = sum(params.scale(level) * diff for level, diff in zip(itertools.count(-1), diffs))

        if length > max_length:
            continue

        labels.append(_assemble({level: diff for level, diff in zip(itertools.count(-1), diffs)}, dict()))

    return sorted(labels, key=lambda label: (length_label(label, params), label))
