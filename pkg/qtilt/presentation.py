import functools
import itertools
import time

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import sympy

from sympy import Poly, Symbol, ZZ, QQ, Rational, binomial, expand, factor_list, reduced
from sympy.polys.matrices import DomainMatrix

from qtilt.config import config
from qtilt.lattice import Params, Weight, TwistLabel, ZERO, special_labels, length_label
from qtilt.charring import Character
from qtilt.fusion import ClassVector, multiply
from qtilt.loggers import NoopLogger
from qtilt.serialization import label_to_json, encode_integer
from qtilt.utilities import QTiltError, random_rationals


class PresentationError(QTiltError):
    pass


OMEGA = Symbol("omega")
UPSILON = Symbol("upsilon")

# J̃ coefficients; under phi_eval they become the classes D_q and D
D_Q = Symbol("d_q")
D = Symbol("d")

T1_PLUS_T2 = Character({(1, 0): 1, (0, 1): 1})
T1_T2 = Character({(1, 1): 1})


def x_symbol(level):
    return Symbol("X_m1") if level == -1 else Symbol(f"X_{level}")


def x_level(symbol):
    name = symbol.name

    if name == "X_m1":
        return -1

    if name.startswith("X_"):
        return int(name[2:])

    return None


class JPoly:
    """Polynomial in one variable (ω or υ) over ℤ[d_q, d]."""

    __slots__ = ("poly",)

    def __init__(self, expression, variable=OMEGA):
        if isinstance(expression, Poly):
            expression = expression.as_expr()

        self.poly = Poly(expression, variable, D_Q, D, domain=ZZ)

    @property
    def variable(self):
        return self.poly.gens[0]

    @property
    def degree(self):
        return self.poly.degree(self.variable)

    def leading_coefficient(self):
        degree = self.degree

        return sum(
            coefficient * D_Q ** i * D ** j
            for (k, i, j), coefficient in self.poly.terms() if k == degree
        )

    def _coerce(self, other):
        if isinstance(other, JPoly):
            return other.poly

        return Poly(other, self.variable, D_Q, D, domain=ZZ)

    def __add__(self, other):
        return JPoly(self.poly + self._coerce(other), self.variable)

    __radd__ = __add__

    def __sub__(self, other):
        return JPoly(self.poly - self._coerce(other), self.variable)

    def __rsub__(self, other):
        return JPoly(self._coerce(other) - self.poly, self.variable)

    def __mul__(self, other):
        return JPoly(self.poly * self._coerce(other), self.variable)

    __rmul__ = __mul__

    def __neg__(self):
        return JPoly(-self.poly, self.variable)

    def __eq__(self, other):
        if not isinstance(other, JPoly):
            other = JPoly(other, self.variable)

        return self.variable == other.variable and self.poly == other.poly

    def __hash__(self):
        return hash(self.poly)

    def __repr__(self):
        return f"JPoly({self.as_expr()})"

    def __str__(self):
        return str(self.as_expr())

    def as_expr(self):
        return self.poly.as_expr()

    def derivative(self):
        return JPoly(self.poly.diff(self.variable), self.variable)

    def evaluate(self, value):
        """Substitute a number for the variable; the result is a Poly in (d_q, d)."""
        return Poly(self.poly.as_expr().subs(self.variable, value), D_Q, D, domain=ZZ)

    def terms(self):
        return sorted(self.poly.terms())

    def to_quadruples(self):
        return [[k, i, j, encode_integer(int(coefficient))] for (k, i, j), coefficient in self.terms()]

    def substitute(self, variable, determinant):
        """Expression with the variable and its determinant parameter replaced."""
        own_determinant = D if self.variable == UPSILON else D_Q

        return expand(self.poly.as_expr().subs({self.variable: variable, own_determinant: determinant}, simultaneous=True))

    def to_character(self):
        """ω or υ ↦ t₁+t₂ and both determinant parameters ↦ t₁t₂."""
        character = Character.zero()

        for (k, i, j), coefficient in self.poly.terms():
            character = character + _sum_power(k) * _determinant_power(i + j) * int(coefficient)

        return character


@functools.lru_cache(maxsize=None)
def _sum_power(k):
    return T1_PLUS_T2 ** k


@functools.lru_cache(maxsize=None)
def _determinant_power(k):
    return T1_T2 ** k


def _three_term(r, variable, determinant, first, second):
    previous, current = first, second

    if r == 0:
        return JPoly(previous, variable)

    for _ in range(r - 1):
        previous, current = current, expand(variable * current - determinant * previous)

    return JPoly(current, variable)


@functools.lru_cache(maxsize=None)
def cheb_P(r):
    if r < 0:
        raise PresentationError(f"cheb_P needs r >= 0, got {r}")

    return _three_term(r, OMEGA, D_Q, 1, OMEGA)


@functools.lru_cache(maxsize=None)
def cheb_Q(r):
    if r < 0:
        raise PresentationError(f"cheb_Q needs r >= 0, got {r}")

    return _three_term(r, UPSILON, D, 1, UPSILON)


def cheb_P_closed_form(r):
    return JPoly(sum((-1) ** k * binomial(r - k, k) * D_Q ** k * OMEGA ** (r - 2 * k) for k in range(r // 2 + 1)))


@functools.lru_cache(maxsize=None)
def dickson_g(ell):
    if ell < 0:
        raise PresentationError(f"dickson_g needs ell >= 0, got {ell}")

    return _three_term(ell, OMEGA, D_Q, 2, OMEGA)


@functools.lru_cache(maxsize=None)
def dickson_h(p):
    if p < 0:
        raise PresentationError(f"dickson_h needs p >= 0, got {p}")

    return _three_term(p, UPSILON, D, 2, UPSILON)


def _timed(checks, logger, include_timings):
    results = list()

    for name, check in checks:
        started_at = time.perf_counter()
        passed = bool(check())
        elapsed = time.perf_counter() - started_at

        logger.log_metric(f"check.{name}.seconds", elapsed)

        if not passed:
            logger.log_event("CHECK_FAILED", {"check": name})

        result = {"name": name, "pass": passed}

        if include_timings:
            result["seconds"] = elapsed

        results.append(result)

    return results


def verify_identities(ell, p, logger=None):
    logger = logger or NoopLogger()

    checks = [
        ("g_derivative", lambda: dickson_g(ell).derivative() == cheb_P(ell - 1) * ell),
        ("h_derivative", lambda: dickson_h(p).derivative() == cheb_Q(p - 1) * p),
        ("P_doubling", lambda: cheb_P(2 * ell - 1) == dickson_g(ell) * cheb_P(ell - 1)),
        ("Q_doubling", lambda: cheb_Q(2 * p - 1) == dickson_h(p) * cheb_Q(p - 1))
    ]

    results = _timed(checks, logger, config["reports"].get("include_timings", False))

    return {
        "params": {"l": ell, "p": p},
        "checks": results,
        "passed": sum(1 for result in results if result["pass"]),
        "total": len(results),
        "ok": all(result["pass"] for result in results)
    }


def _identities_cell(pair):
    return verify_identities(*pair)


def verify_identities_grid(pairs, workers=1):
    pairs = sorted(set(pairs))

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            reports = list(executor.map(_identities_cell, pairs))
    else:
        reports = [_identities_cell(pair) for pair in pairs]

    return {
        "cells": reports,
        "ok": all(report["ok"] for report in reports)
    }


class PresentationPoly:
    """Polynomial in X₋₁, X₀, … over J̃ = ℤ[d_q^±, d^±]."""

    __slots__ = ("expression",)

    def __init__(self, expression):
        if isinstance(expression, PresentationPoly):
            expression = expression.expression

        self.expression = expand(sympy.sympify(expression))

    def __add__(self, other):
        return PresentationPoly(self.expression + PresentationPoly(other).expression)

    __radd__ = __add__

    def __sub__(self, other):
        return PresentationPoly(self.expression - PresentationPoly(other).expression)

    def __rsub__(self, other):
        return PresentationPoly(PresentationPoly(other).expression - self.expression)

    def __mul__(self, other):
        return PresentationPoly(self.expression * PresentationPoly(other).expression)

    __rmul__ = __mul__

    def __pow__(self, exponent):
        return PresentationPoly(self.expression ** exponent)

    def __eq__(self, other):
        return expand(self.expression - PresentationPoly(other).expression) == 0

    def __hash__(self):
        return hash(self.expression)

    def __repr__(self):
        return f"PresentationPoly({self.expression})"

    def __str__(self):
        return str(self.expression)

    @property
    def is_zero(self):
        return self.expression == 0

    def terms(self):
        """[(exponents, coefficient)] with exponents a dict {symbol: int}."""
        terms = list()

        for monomial, coefficient in sorted(self.expression.as_coefficients_dict().items(), key=lambda item: str(item[0])):
            exponents = {base: int(exponent) for base, exponent in monomial.as_powers_dict().items() if isinstance(base, Symbol)}
            terms.append((exponents, coefficient))

        return terms

    def max_level(self):
        levels = [x_level(symbol) for symbol in self.expression.free_symbols]
        levels = [level for level in levels if level is not None]

        return max(levels) if levels else None


@dataclass(frozen=True)
class KernelGenerator:
    name: str
    kind: str
    poly: PresentationPoly


def level_generator(level, ell, p):
    if level == -1:
        x = x_symbol(-1)
        expression = cheb_P(ell - 1).substitute(x, D_Q) * (x_symbol(0) - dickson_g(ell).substitute(x, D_Q))
    else:
        # level i carries the determinant d^{p^i}
        x = x_symbol(level)
        determinant = D ** (p ** level)
        expression = cheb_Q(p - 1).substitute(x, determinant) * (x_symbol(level + 1) - dickson_h(p).substitute(x, determinant))

    return PresentationPoly(expression)


def determinant_relation(ell):
    return PresentationPoly(D_Q ** ell - D)


def literal_determinant_relation(ell):
    return PresentationPoly(D_Q ** ell - D ** ell)


def kernel_generators(ell, p, n):
    if n < -1:
        raise PresentationError(f"n must be >= -1, got {n}")

    if n == -1:
        return []

    generators = [KernelGenerator("level_m1", "level", level_generator(-1, ell, p))]

    for level in range(0, n):
        generators.append(KernelGenerator(f"level_{level}", "level", level_generator(level, ell, p)))

    generators.append(KernelGenerator("determinant", "determinant", determinant_relation(ell)))

    return generators


def generator_label(level):
    return TwistLabel(Weight(1, 0)) if level == -1 else TwistLabel(ZERO, tuple([ZERO] * level + [Weight(1, 0)]))


@functools.lru_cache(maxsize=None)
def _generator_power(level, exponent, params):
    if exponent == 0:
        return ClassVector.unit()

    return multiply(_generator_power(level, exponent - 1, params), ClassVector.basis(generator_label(level)), params)


def determinant_class(quantum_exponent, classical_exponent, params):
    """D_q^i D^j as a single canonical label; negative exponents allowed."""
    label = TwistLabel(Weight(quantum_exponent, quantum_exponent), (Weight(classical_exponent, classical_exponent),))
    return ClassVector.basis(label, params)


def phi_monomial(exponents, params):
    value = determinant_class(exponents.get(D_Q, 0), exponents.get(D, 0), params)

    for symbol, exponent in sorted(exponents.items(), key=lambda item: str(item[0])):
        if symbol in (D_Q, D):
            continue

        level = x_level(symbol)

        if level is None:
            raise PresentationError(f"Unknown variable {symbol} in presentation polynomial")

        if exponent < 0:
            raise PresentationError(f"Negative power of {symbol} is not a class")

        value = multiply(value, _generator_power(level, exponent, params), params)

    return value


def _integer_coefficient(coefficient):
    if not coefficient.is_Integer:
        raise PresentationError(f"Coefficient {coefficient} is not an integer")

    return int(coefficient)


def phi_eval(poly, params):
    poly = PresentationPoly(poly)
    result = ClassVector()

    for exponents, coefficient in poly.terms():
        result = result + phi_monomial(exponents, params) * _integer_coefficient(coefficient)

    return result


def _term_images(poly, params):
    return [
        {
            "monomial": str(sympy.Mul(*[symbol ** exponent for symbol, exponent in exponents.items()])),
            "coefficient": encode_integer(_integer_coefficient(coefficient)),
            "image": phi_monomial(exponents, params).to_json(params)["summands"]
        } for exponents, coefficient in poly.terms()
    ]


def verify_kernel(ell, p, n, logger=None, with_terms=True):
    logger = logger or NoopLogger()
    params = Params(ell, p)

    results = list()

    for generator in kernel_generators(ell, p, n):
        started_at = time.perf_counter()
        image = phi_eval(generator.poly, params)
        logger.log_metric(f"kernel.{generator.name}.seconds", time.perf_counter() - started_at)

        result = {
            "name": generator.name,
            "kind": generator.kind,
            "polynomial": str(generator.poly),
            "pass": not image,
            "image": image.to_json(params)["summands"]
        }

        if with_terms:
            result["terms"] = _term_images(generator.poly, params)

        if image:
            logger.log_event("CHECK_FAILED", {"check": generator.name, "params": params.to_json(), "n": n})

        results.append(result)

    literal = phi_eval(literal_determinant_relation(ell), params)

    return {
        "params": params.to_json(),
        "n": n,
        "checks": results,
        "ok": all(result["pass"] for result in results),
        "literal_determinant_relation": {
            "polynomial": str(literal_determinant_relation(ell)),
            "vanishes": not literal,
            "image": literal.to_json(params)["summands"]
        }
    }


def _monomials_of_degree(degree, params, n):
    """Exponent dicts X^e d_q^j with total degree `degree` (X_i weighs ℓpⁱ, d_q weighs 2)."""
    levels = list(range(-1, n + 1))
    scales = [params.scale(level) for level in levels]

    monomials = list()

    for exponents in itertools.product(*[range(degree // scale + 1) for scale in scales]):
        x_degree = sum(scale * exponent for scale, exponent in zip(scales, exponents))

        if x_degree > degree or (degree - x_degree) % 2:
            continue

        monomial = {x_symbol(level): exponent for level, exponent in zip(levels, exponents) if exponent}

        if degree > x_degree:
            monomial[D_Q] = (degree - x_degree) // 2

        monomials.append(monomial)

    return monomials


def _qq_matrix(rows):
    return DomainMatrix.from_Matrix(sympy.Matrix(rows)).convert_to(QQ)


def _rank(rows, ncols):
    if not rows or not ncols:
        return 0

    return _qq_matrix(rows).rank()


def surjectivity_probe(ell, p, n, length_bound, logger=None):
    logger = logger or NoopLogger()
    params = Params(ell, p)

    targets = special_labels(params, length_bound, max_height=n)
    by_length = dict()

    for label in targets:
        by_length.setdefault(length_label(label, params), list()).append(label)

    reached = list()
    unreached = list()
    summary = list()
    solutions = dict()

    for length in sorted(by_length):
        monomials = _monomials_of_degree(length, params, n)
        images = [phi_monomial(monomial, params) for monomial in monomials]

        rows = sorted(set(itertools.chain(by_length[length], *[image.labels() for image in images])))
        row_index = {label: index for index, label in enumerate(rows)}

        matrix = [[0] * len(images) for _ in rows]

        for column, image in enumerate(images):
            for label, coefficient in image.entries.items():
                matrix[row_index[label]][column] = coefficient

        rank = _rank(matrix, len(images))

        summary.append({"length": length, "monomials": len(monomials), "targets": len(by_length[length]), "rank": rank})

        for target in by_length[length]:
            augmented = [row + [1 if rows[index] == target else 0] for index, row in enumerate(matrix)]

            if _rank(augmented, len(images) + 1) != rank:
                unreached.append({"label": label_to_json(target), "reason": "singular"})
                logger.log_event("CHECK_FAILED", {"check": "surjectivity", "label": str(target)})
                continue

            solution = _particular_solution(augmented, len(images))
            solutions[target] = (monomials, solution)

            reached.append({
                "label": label_to_json(target),
                "integral": all(value.q == 1 for value in solution.values()),
                "combination": [
                    {"monomial": _monomial_string(monomials[column]), "coefficient": str(value)}
                    for column, value in sorted(solution.items())
                ]
            })

    shifted = _reach_determinant_shifts(solutions, params, unreached, logger)

    return {
        "params": params.to_json(),
        "n": n,
        "length_bound": length_bound,
        "targets": len(targets),
        "reached": reached,
        "shifted": shifted,
        "unreached": unreached,
        "by_length": summary,
        "integral": all(entry["integral"] for entry in reached),
        "ok": not unreached
    }


def _particular_solution(augmented, ncols):
    """Free variables set to zero; {column: Rational} over the nonzero entries."""
    rref, pivots = _qq_matrix(augmented).rref()
    rref = rref.to_Matrix()

    solution = dict()

    for row, column in enumerate(pivots):
        if column >= ncols:
            break

        value = Rational(rref[row, ncols])

        if value != 0:
            solution[column] = value

    return solution


DETERMINANT_SHIFTS = ((1, 0), (-1, 0), (0, 1), (0, -1))


def _shift_monomial(monomial, quantum, classical):
    shifted = dict(monomial)

    for symbol, exponent in ((D_Q, quantum), (D, classical)):
        shifted[symbol] = shifted.get(symbol, 0) + exponent

        if shifted[symbol] == 0:
            del shifted[symbol]

    return shifted


def _reach_determinant_shifts(solutions, params, unreached, logger):
    """Targets times D_q^±1 and D^±1, reached by shifting each solved combination."""
    shifted = list()

    for target, (monomials, solution) in solutions.items():
        for quantum, classical in DETERMINANT_SHIFTS:
            expected = multiply(determinant_class(quantum, classical, params), ClassVector.basis(target, params), params)
            label = expected.labels()[0]

            image = ClassVector()

            for column, value in solution.items():
                image = image + phi_monomial(_shift_monomial(monomials[column], quantum, classical), params) * value

            if image != expected:
                unreached.append({"label": label_to_json(label), "reason": "determinant shift"})
                logger.log_event("CHECK_FAILED", {"check": "surjectivity", "label": str(label)})
                continue

            shifted.append({
                "label": label_to_json(label),
                "from": label_to_json(target),
                "shift": _monomial_string(_shift_monomial(dict(), quantum, classical))
            })

    return shifted


def _monomial_string(monomial):
    if not monomial:
        return "1"

    return str(sympy.Mul(*[symbol ** exponent for symbol, exponent in monomial.items()]))


def squarefree_check(poly, which_d=None):
    if which_d is not None:
        allowed = {"d_q": D_Q, "d": D}.get(str(which_d))

        if allowed is None:
            raise PresentationError(f"which_d must be d_q or d, got {which_d!r}")

        other = D if allowed == D_Q else D_Q

        if poly.poly.degree(other) > 0:
            raise PresentationError(f"{poly} involves {other} as well as {allowed}")

    f = poly.poly
    variable = poly.variable

    if f.is_zero:
        raise PresentationError("squarefree_check needs a nonzero polynomial")

    if f.degree(variable) <= 0:
        return True

    derivative = f.diff(variable)
    sequence = f.subresultants(derivative)
    verdict = sequence[-1].degree(variable) == 0

    if verdict != (f.gcd(derivative).degree(variable) == 0):
        raise PresentationError(f"Subresultant and gcd verdicts disagree for {poly}")

    return verdict


def _probe_seed(seed):
    return config["probes"]["seed"] if seed is None else seed


def radical_evidence(ell, p, n, seed=None, samples=None, substitute=None):
    seed = _probe_seed(seed)
    samples = samples or config["probes"]["samples"]

    if n == 0:
        factor = substitute if substitute is not None else cheb_P(ell - 1)
        squarefree = squarefree_check(factor)

        return {
            "params": {"l": ell, "p": p},
            "n": n,
            "method": "exact",
            "factor": str(factor),
            "squarefree": squarefree,
            "coprime": True,
            "radical": squarefree,
            "seed": seed
        }

    if n == 1:
        return _jacobian_sampling(ell, p, seed, samples)

    raise PresentationError(f"radical_evidence covers n in {{0, 1}}, got {n}")


def _jacobian_sampling(ell, p, seed, samples):
    d_q_value, d_value = random_rationals(seed, 2)
    free_values = random_rationals(seed + 1, samples)

    x_m1, x_0, x_1 = x_symbol(-1), x_symbol(0), x_symbol(1)
    theta, eta = Symbol("theta"), Symbol("eta")

    specialization = {D_Q: d_q_value, D: d_value}

    p_factor = cheb_P(ell - 1).substitute(x_m1, D_Q).subs(specialization)
    g_value = dickson_g(ell).substitute(x_m1, D_Q).subs(specialization)
    q_factor = cheb_Q(p - 1).substitute(x_0, D).subs(specialization)
    h_value = dickson_h(p).substitute(x_0, D).subs(specialization)

    f1 = expand(p_factor * (x_0 - g_value))
    f2 = expand(q_factor * (x_1 - h_value))

    jacobian = sympy.Matrix([[sympy.diff(f, x) for x in (x_m1, x_0, x_1)] for f in (f1, f2)])
    minors = [jacobian[:, list(columns)].det() for columns in itertools.combinations(range(3), 2)]

    repeated = [str(f) for f in (p_factor, q_factor) if any(multiplicity > 1 for _, multiplicity in factor_list(f)[1])]

    components = list()

    for pi, _ in factor_list(p_factor, x_m1)[1]:
        for kappa, _ in factor_list(q_factor, x_0)[1]:
            # X₋₁ = θ, X₀ = η, X₁ free
            components.append((
                f"{pi} = 0, {kappa} = 0",
                [pi.subs(x_m1, theta), kappa.subs(x_0, eta)],
                lambda value: {x_m1: theta, x_0: eta, x_1: value}
            ))

        # X₋₁ = θ, X₀ free, X₁ = h(X₀)
        components.append((
            f"{pi} = 0, {x_1} = h({x_0})",
            [pi.subs(x_m1, theta)],
            lambda value: {x_m1: theta, x_0: value, x_1: h_value.subs(x_0, value)}
        ))

    for kappa, _ in factor_list(q_factor, x_0)[1]:
        # X₀ = g(X₋₁) with X₋₁ = θ a root of kappa(g(X₋₁)), X₁ free
        for lifted, _ in factor_list(expand(kappa.subs(x_0, g_value)), x_m1)[1]:
            components.append((
                f"{x_0} = g({x_m1}), {lifted} = 0",
                [lifted.subs(x_m1, theta)],
                lambda value: {x_m1: theta, x_0: g_value.subs(x_m1, theta), x_1: value}
            ))

    components.append((
        f"{x_0} = g({x_m1}), {x_1} = h({x_0})",
        [],
        lambda value: {x_m1: value, x_0: g_value.subs(x_m1, value), x_1: h_value.subs(x_0, g_value.subs(x_m1, value))}
    ))

    reports = list()
    full_rank_total = 0

    for description, minimal_polynomials, point in components:
        full_rank = 0

        for value in free_values:
            coordinates = point(value)
            evaluated = [expand(minor.subs(coordinates, simultaneous=True)) for minor in minors]

            if minimal_polynomials:
                generators = sorted({symbol for polynomial in minimal_polynomials for symbol in polynomial.free_symbols}, key=str)
                evaluated = [reduced(minor, minimal_polynomials, *generators)[1] for minor in evaluated]

            if any(expand(minor) != 0 for minor in evaluated):
                full_rank += 1

        full_rank_total += full_rank
        reports.append({"component": description, "samples": len(free_values), "full_rank": full_rank})

    total = len(components) * len(free_values)
    frequency = Rational(full_rank_total, total) if total else Rational(0)

    return {
        "params": {"l": ell, "p": p},
        "n": 1,
        "method": "jacobian-sampling",
        "evidence_only": True,
        "specialization": {"d_q": str(d_q_value), "d": str(d_value)},
        "repeated_factors": repeated,
        "components": reports,
        "full_rank_frequency": str(frequency),
        "radical": not repeated and frequency == 1,
        "seed": seed
    }


def _truncation_rank(b, ell, d_q_value, truncation_degree):
    x, y = x_symbol(-1), x_symbol(0)

    generator = expand(
        cheb_P(ell - 1).substitute(x, D_Q).subs(D_Q, d_q_value) * (y - dickson_g(ell).substitute(x, D_Q).subs(D_Q, d_q_value))
    )

    domain = [(i, k) for k in range(truncation_degree + 1) for i in range(2 * ell - 1)]
    codomain = [(i, k) for k in range(truncation_degree + 2) for i in range(2 * ell - 1)]
    codomain_index = {monomial: index for index, monomial in enumerate(codomain)}

    matrix = [[0] * len(domain) for _ in codomain]

    for column, (i, k) in enumerate(domain):
        image = reduced(expand((x - b) * x ** i * y ** k), [generator], x, y, order="lex")[1]

        for monomial, coefficient in Poly(image, x, y).as_dict().items():
            if monomial not in codomain_index:
                raise PresentationError(f"Reduction left the truncation: {monomial}")

            matrix[codomain_index[monomial]][column] = coefficient

    return _rank(matrix, len(domain)), len(domain)


def nonzerodivisor_report(b, ell, seed=None, truncation_degree=None, max_ell=None):
    seed = _probe_seed(seed)
    truncation_degree = truncation_degree or config["probes"]["truncation_degree"]
    max_ell = max_ell or config["probes"]["nonzerodivisor_max_ell"]

    evaluation = cheb_P(ell - 1).evaluate(b)
    polynomial_verdict = not evaluation.is_zero

    report = {
        "b": b,
        "l": ell,
        "evaluation": str(evaluation.as_expr()),
        "polynomial_verdict": polynomial_verdict,
        "seed": seed
    }

    if ell <= max_ell or not polynomial_verdict:
        bad_values = set()

        if polynomial_verdict:
            bad_values = {root for root in sympy.roots(evaluation.as_expr(), D_Q) if root.is_Rational}

        d_q_value = random_rationals(seed, 1, exclude=bad_values)[0]
        rank, columns = _truncation_rank(b, ell, d_q_value, truncation_degree)

        report["linear_algebra"] = {
            "d_q": str(d_q_value),
            "denylist": ["d_q = 0"] + [f"d_q = {value}" for value in sorted(bad_values)],
            "truncation_degree": truncation_degree,
            "rank": rank,
            "columns": columns,
            "injective": rank == columns
        }

        if not polynomial_verdict and rank < columns:
            report["witness"] = f"({x_symbol(0)} - g({x_symbol(-1)})) * P_{ell - 1}({x_symbol(-1)}) / {x_symbol(-1)}"

    if polynomial_verdict:
        report["verdict"] = True
        report["consistent"] = report.get("linear_algebra", {"injective": True})["injective"]
    else:
        report["verdict"] = report["linear_algebra"]["injective"]
        report["consistent"] = True

    return report


def nonzerodivisor_probe(b, ell, seed=None):
    return nonzerodivisor_report(b, ell, seed)["verdict"]


def rank_report(ell, p, n):
    params = Params(ell, p)

    bound = (2 * ell - 2) + sum(params.scale(level) * (2 * p - 2) for level in range(0, n + 1))
    count = len(special_labels(params, bound, max_height=n))

    stated_rank = (2 * ell - 2) * (2 * p - 2) ** n

    return {
        "params": params.to_json(),
        "n": n,
        "quantum_level_choices": 2 * ell - 1,
        "classical_level_choices": 2 * p - 1,
        "special_labels_per_determinant_coset": count,
        "stated_rank": stated_rank,
        "matches": count == stated_rank
    }
