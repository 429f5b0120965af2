import numpy as np

from sympy import Rational


class QTiltError(BaseException):
    pass


def random_state(seed=None):
    return np.random.RandomState(seed)


def random_dominant_pairs(seed, count, max_diff, det_range=(-3, 3)):
    """Seeded corpus of (a, b) pairs with 0 <= a - b <= max_diff.

    Returns plain integer tuples so callers can build Weights without importing numpy types.
    """
    rng = random_state(seed)

    pairs = list()

    for _ in range(count):
        diffs = rng.randint(0, max_diff + 1, size=2)
        dets = rng.randint(det_range[0], det_range[1] + 1, size=2)

        pairs.append(
            (
                (int(dets[0] + diffs[0]), int(dets[0])),
                (int(dets[1] + diffs[1]), int(dets[1]))
            )
        )

    return pairs


def random_rationals(seed, count, bound=50, exclude=None):
    """Seeded nonzero rationals num/den with |num|, den <= bound, skipping anything in exclude."""
    rng = random_state(seed)
    exclude = set(exclude or ())

    values = list()

    while len(values) < count:
        numerator = int(rng.randint(-bound, bound + 1))
        denominator = int(rng.randint(1, bound + 1))

        if numerator == 0:
            continue

        value = Rational(numerator, denominator)

        if value in exclude or value in values:
            continue

        values.append(value)

    return values
