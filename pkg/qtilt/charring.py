import functools

from qtilt.lattice import Weight, ALPHA, frobenius_scale, is_dominant, steinberg_factorize
from qtilt.utilities import QTiltError


class CharacterError(QTiltError):
    pass


class NotATiltingCharacterError(CharacterError):
    pass


class Character:
    """Finitely supported integer function on monomials t₁^i t₂^j.

    Instances are treated as immutable; arithmetic always builds a new Character.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        self.terms = {exponent: coefficient for exponent, coefficient in (terms or dict()).items() if coefficient != 0}
        self._hash = None

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({(0, 0): 1})

    @classmethod
    def monomial(cls, i, j, coefficient=1):
        return cls({(i, j): coefficient})

    def coefficient(self, i, j):
        return self.terms.get((i, j), 0)

    def items(self):
        return sorted(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = Character.one() * other

        if not isinstance(other, Character):
            return NotImplemented

        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))

        return self._hash

    def __neg__(self):
        return Character({exponent: -coefficient for exponent, coefficient in self.terms.items()})

    def __add__(self, other):
        if isinstance(other, int):
            other = Character.one() * other

        terms = dict(self.terms)

        for exponent, coefficient in other.terms.items():
            terms[exponent] = terms.get(exponent, 0) + coefficient

        return Character(terms)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return Character({exponent: coefficient * other for exponent, coefficient in self.terms.items()})

        terms = dict()

        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                key = (i1 + i2, j1 + j2)
                terms[key] = terms.get(key, 0) + c1 * c2

        return Character(terms)

    __rmul__ = __mul__

    def __pow__(self, exponent):
        if exponent < 0:
            raise CharacterError("Characters only admit non-negative integer powers")

        result = Character.one()

        for _ in range(exponent):
            result = result * self

        return result

    def scale(self, k):
        """Frobenius twist: every exponent multiplied by k."""
        return Character({(k * i, k * j): coefficient for (i, j), coefficient in self.terms.items()})

    def is_symmetric(self):
        return all(self.terms.get((j, i), 0) == coefficient for (i, j), coefficient in self.terms.items())

    def is_nonnegative(self):
        return all(coefficient >= 0 for coefficient in self.terms.values())

    def __repr__(self):
        return f"Character({self})"

    def __str__(self):
        if not self.terms:
            return "0"

        chunks = list()

        for (i, j), coefficient in sorted(self.terms.items(), key=lambda item: (-(item[0][0] + item[0][1]), -item[0][0])):
            monomial = "*".join(
                factor for factor in (_power_string("t1", i), _power_string("t2", j)) if factor
            )

            if not monomial:
                chunks.append(str(coefficient))
            elif coefficient == 1:
                chunks.append(monomial)
            elif coefficient == -1:
                chunks.append(f"-{monomial}")
            else:
                chunks.append(f"{coefficient}*{monomial}")

        return " + ".join(chunks).replace("+ -", "- ")


def _power_string(symbol, exponent):
    if exponent == 0:
        return ""
    elif exponent == 1:
        return symbol

    return f"{symbol}^{exponent}"


class TiltingDecomposition:
    """Multiset of tilting highest weights: {Weight: multiplicity >= 1}."""

    def __init__(self, summands=None):
        self.summands = {weight: multiplicity for weight, multiplicity in (summands or dict()).items() if multiplicity != 0}

        for weight, multiplicity in self.summands.items():
            if not is_dominant(weight) or multiplicity < 0:
                raise CharacterError(f"Invalid tilting summand T({weight}) x {multiplicity}")

    def items(self):
        return sorted(self.summands.items(), key=lambda item: (-item[0].diff, -item[0].b))

    def weights(self):
        return [weight for weight, _ in self.items()]

    def __iter__(self):
        return iter(self.weights())

    def __len__(self):
        return len(self.summands)

    def __getitem__(self, weight):
        return self.summands.get(weight, 0)

    def __eq__(self, other):
        if isinstance(other, dict):
            return self.summands == other

        return isinstance(other, TiltingDecomposition) and self.summands == other.summands

    def __repr__(self):
        body = ", ".join(f"T({weight}): {multiplicity}" for weight, multiplicity in self.items())
        return f"TiltingDecomposition({{{body}}})"

    def character(self, modulus, higher_modulus=None):
        total = Character.zero()

        for weight, multiplicity in self.summands.items():
            total = total + tilting_character(weight, modulus, higher_modulus) * multiplicity

        return total


def _require_dominant(w):
    if not is_dominant(w):
        raise CharacterError(f"Weight ({w}) is not dominant")


@functools.lru_cache(maxsize=None)
def _weyl_character(a, b):
    return Character({(a - i, b + i): 1 for i in range(a - b + 1)})


def weyl_character(w):
    _require_dominant(w)
    return _weyl_character(w.a, w.b)


def simple_character_restricted(w, modulus):
    _require_dominant(w)

    if w.diff <= modulus - 1:
        return weyl_character(w)

    if w.diff > 2 * modulus - 2:
        raise CharacterError(f"L({w}) is outside the band at modulus {modulus}")

    r = w.diff - modulus

    return weyl_character(w) - weyl_character(w - _multiple(ALPHA, r + 1))


def _multiple(weight, k):
    return Weight(k * weight.a, k * weight.b)


@functools.lru_cache(maxsize=None)
def _tilting_character(a, b, modulus, higher_modulus):
    w = Weight(a, b)

    if w.diff <= modulus - 1:
        return weyl_character(w)

    if w.diff <= 2 * modulus - 2:
        r = w.diff - modulus
        return weyl_character(w) + weyl_character(w - _multiple(ALPHA, r + 1))

    # T(m-1+ν+mτ) ≅ T(m-1+ν) ⊗ T̄(τ)^F
    core, carry = donkin_split(w, modulus)

    return _tilting_character(core.a, core.b, modulus, higher_modulus) * \
        _tilting_character(carry.a, carry.b, higher_modulus, higher_modulus).scale(modulus)


def donkin_split(w, modulus):
    """(core, carry) with w = core + modulus * carry, core in the band and 0 <= core.b < modulus."""
    tau, nu = divmod(w.diff - (modulus - 1), modulus)
    c = w.b // modulus

    core_b = w.b - modulus * c

    return Weight(core_b + modulus - 1 + nu, core_b), Weight(tau + c, c)


def tilting_character(w, modulus, higher_modulus=None):
    _require_dominant(w)

    return _tilting_character(w.a, w.b, modulus, higher_modulus or modulus)


def simple_character(w, params):
    _require_dominant(w)

    character = Character.one()

    for level, weight in steinberg_factorize(w, params).entries():
        character = character * simple_character_restricted(weight, params.modulus(level)).scale(params.scale(level))

    return character


def twisted_tilting_character(lbl, params):
    character = Character.one()

    for level, weight in lbl.entries():
        character = character * tilting_character(weight, params.modulus(level), params.p).scale(params.scale(level))

    return character


def _leading_weight(c):
    """Largest dominant exponent under (i - j, j); None when no dominant exponent survives."""
    dominant = [(i - j, j) for (i, j) in c.terms if i >= j]

    if not dominant:
        return None

    diff, j = max(dominant)

    return Weight(j + diff, j)


def greedy_tilt_decompose(c, modulus, higher_modulus=None):
    if not c.is_symmetric():
        raise NotATiltingCharacterError(f"Character is not W-symmetric: {c}")

    remainder = c
    summands = dict()

    while remainder:
        weight = _leading_weight(remainder)

        if weight is None:
            raise NotATiltingCharacterError(f"Unresolvable remainder: {remainder}")

        multiplicity = remainder.coefficient(weight.a, weight.b)

        if multiplicity < 0:
            raise NotATiltingCharacterError(f"Negative multiplicity {multiplicity} at T({weight})")

        summands[weight] = multiplicity
        remainder = remainder - tilting_character(weight, modulus, higher_modulus) * multiplicity

    return TiltingDecomposition(summands)


def greedy_simple_decompose(c, params):
    """Composition factors [L(λ)] of a W-symmetric character, signed for virtual classes."""
    if not c.is_symmetric():
        raise CharacterError(f"Character is not W-symmetric: {c}")

    remainder = c
    factors = dict()

    while remainder:
        weight = _leading_weight(remainder)

        if weight is None:
            raise CharacterError(f"Unresolvable remainder: {remainder}")

        multiplicity = remainder.coefficient(weight.a, weight.b)

        factors[weight] = multiplicity
        remainder = remainder - simple_character(weight, params) * multiplicity

    return factors


def dimension(c):
    return sum(c.terms.values())
