"""
Exact operations on expressions over jet coordinates:
normalization, partial and total derivatives, zero-testing and evaluation.

Expressions are sympy expressions built from rational constants, jet-coordinate symbols,
the arithmetic operations and the opaque functions exp, log, sin, cos.
The canonical form is a cancelled quotient of expanded polynomials, with the
opaque-function applications (arguments normalized recursively) treated as atoms.

Author: Erel Segal-Halevi
Since: 2024-03
"""

import enum
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Sequence, Union

import numpy as np
import sympy

from varmult import defaults
from varmult.symbolic.jet import Coordinate, JetSpace, Kind

import logging
logger = logging.getLogger(__name__)


OPAQUE_FUNCTIONS = (sympy.exp, sympy.log, sympy.sin, sympy.cos)


class PoleError(ZeroDivisionError):
    """ An expression was evaluated at a pole (or outside the real domain of an opaque function). """


def is_opaque(expression: sympy.Basic) -> bool:
    return isinstance(expression, OPAQUE_FUNCTIONS)


def opaque_atoms(expression: sympy.Basic) -> List[sympy.Expr]:
    """
    The opaque-function applications in the expression, in a fixed order.

    >>> u, v = sympy.symbols("u v")
    >>> opaque_atoms(sympy.exp(u) * v + sympy.sin(v) + sympy.exp(u))
    [exp(u), sin(v)]
    """
    return sorted(expression.atoms(*OPAQUE_FUNCTIONS), key=sympy.default_sort_key)


def has_opaque(expression: sympy.Basic) -> bool:
    return len(expression.atoms(*OPAQUE_FUNCTIONS)) > 0


def normalize(expression) -> sympy.Expr:
    """
    Bring an expression to its canonical form.

    >>> u, v, x = sympy.symbols("u v x")
    >>> normalize((u + v)**2 - u**2 - 2*u*v - v**2)
    0
    >>> normalize(x*(u + 1))
    u*x + x
    >>> normalize((u**2 - 1)/(u - 1))
    u + 1
    >>> normalize(sympy.exp(u*(v + 1)) - sympy.exp(u*v + u))
    0
    >>> normalize(sympy.exp(u) * sympy.exp(v) - sympy.exp(u + v)) == 0
    False
    """
    expression = sympy.sympify(expression)
    if not has_opaque(expression):
        return sympy.cancel(expression)
    expression = expression.replace(is_opaque, lambda atom: atom.func(normalize(atom.args[0])))
    # opaque applications are atoms: cancel must not rewrite them
    mapping = {atom: sympy.Dummy(f"atom{i}") for i, atom in enumerate(opaque_atoms(expression))}
    cancelled = sympy.cancel(expression.xreplace(mapping))
    return cancelled.xreplace({placeholder: atom for atom, placeholder in mapping.items()})


def normalize_all(expressions: Iterable) -> tuple:
    return tuple(normalize(e) for e in expressions)


def partial(expression: sympy.Expr, coordinate: Union[Coordinate, sympy.Symbol], jet: JetSpace = None) -> sympy.Expr:
    """
    The partial derivative, treating all jet coordinates as independent.

    >>> jet = JetSpace(["u", "v"])
    >>> partial(jet.x * jet.u[0], Coordinate(Kind.U, 1), jet)
    x
    >>> partial(jet.u_x[0] * jet.u_y[1], Coordinate(Kind.UX, 1), jet)
    v_y
    >>> partial(sympy.exp(jet.u[0]), jet.u[0])
    exp(u)
    """
    symbol = coordinate if isinstance(coordinate, sympy.Symbol) else jet.symbol(coordinate)
    return sympy.diff(expression, symbol)


def total_derivative(expression: sympy.Expr, direction: Coordinate, system) -> sympy.Expr:
    """
    The total derivative in direction x or y, constrained to the equation manifold u^a_xy = f^a.

    D_x = d/dx + u_x d/du + u_xx d/du_x + f d/du_y, and symmetrically for D_y.
    Second-order coordinates are allowed only where the result stays on the 2-jet:
    D_y(u_xx) = D_x(f) and D_x(u_yy) = D_y(f).

    :param system: any object with attributes `jet` (a JetSpace) and `f` (the right-hand sides).

    >>> from varmult.fgordon import FGordonSystem
    >>> example1 = FGordonSystem.from_strings(["v", "u"])
    >>> u, v = example1.jet.u
    >>> total_derivative(example1.jet.u_y[0], Coordinate(Kind.X), example1)
    v
    >>> total_derivative(example1.jet.x, Coordinate(Kind.Y), example1)
    0
    >>> wave = FGordonSystem.from_strings(["0"])
    >>> total_derivative(wave.jet.u[0] * wave.jet.u_y[0], Coordinate(Kind.X), wave)
    u_x*u_y
    >>> total_derivative(wave.jet.u_xy[0], Coordinate(Kind.X), wave)
    Traceback (most recent call last):
    ...
    ValueError: Total derivatives on the equation manifold are not defined for expressions containing u_xy
    """
    jet: JetSpace = system.jet
    f = system.f
    if direction.kind not in (Kind.X, Kind.Y):
        raise ValueError(f"Total derivatives are taken in directions x or y, not {direction}")
    symbols = expression.free_symbols
    for symbol in jet.u_xy:
        if symbol in symbols:
            raise ValueError(f"Total derivatives on the equation manifold are not defined for expressions containing {symbol}")
    along_x = direction.kind == Kind.X
    result = sympy.diff(expression, jet.x if along_x else jet.y)
    for index in range(jet.m):
        result += sympy.diff(expression, jet.u[index]) * (jet.u_x[index] if along_x else jet.u_y[index])
        if along_x:
            result += sympy.diff(expression, jet.u_x[index]) * jet.u_xx[index]
            result += sympy.diff(expression, jet.u_y[index]) * f[index]
        else:
            result += sympy.diff(expression, jet.u_x[index]) * f[index]
            result += sympy.diff(expression, jet.u_y[index]) * jet.u_yy[index]
        # second-order coordinates: only the mixed prolongations stay on the 2-jet
        along_xx = sympy.diff(expression, jet.u_xx[index])
        along_yy = sympy.diff(expression, jet.u_yy[index])
        if along_x:
            if along_xx != 0:
                raise ValueError(f"D_x of {jet.u_xx[index]} is third order")
            if along_yy != 0:
                result += along_yy * total_derivative(f[index], Coordinate(Kind.Y), system)
        else:
            if along_yy != 0:
                raise ValueError(f"D_y of {jet.u_yy[index]} is third order")
            if along_xx != 0:
                result += along_xx * total_derivative(f[index], Coordinate(Kind.X), system)
    return result


def free_total_derivative(expression: sympy.Expr, direction: Coordinate, jet: JetSpace) -> sympy.Expr:
    """
    The unconstrained total derivative of a first-order expression: u_xy is kept as a free coordinate.

    >>> jet = JetSpace(["u"])
    >>> free_total_derivative(-jet.u_y[0], Coordinate(Kind.X), jet)
    -u_xy
    >>> d = free_total_derivative(jet.x * jet.u[0]**2, Coordinate(Kind.X), jet)
    >>> sympy.expand(d - jet.u[0]**2 - 2*jet.x*jet.u[0]*jet.u_x[0])
    0
    """
    if jet.order_of(expression) > 1:
        raise ValueError("Free total derivatives are taken only of first-order expressions")
    along_x = direction.kind == Kind.X
    result = sympy.diff(expression, jet.x if along_x else jet.y)
    for index in range(jet.m):
        result += sympy.diff(expression, jet.u[index]) * (jet.u_x[index] if along_x else jet.u_y[index])
        result += sympy.diff(expression, jet.u_x[index]) * (jet.u_xx[index] if along_x else jet.u_xy[index])
        result += sympy.diff(expression, jet.u_y[index]) * (jet.u_xy[index] if along_x else jet.u_yy[index])
    return result


#
# Random rational points
#

def random_rational(rng: np.random.Generator, bound: int = defaults.COEFFICIENT_BOUND) -> sympy.Rational:
    numerator = int(rng.integers(-bound, bound + 1))
    denominator = int(rng.integers(1, bound + 1))
    return sympy.Rational(numerator, denominator)


def sample_points(symbols: Sequence[sympy.Symbol], count: int, seed: int = defaults.DEFAULT_SEED,
                  bound: int = defaults.COEFFICIENT_BOUND) -> List[Dict[sympy.Symbol, sympy.Rational]]:
    """
    Deterministic random rational points.

    >>> x, y = sympy.symbols("x y")
    >>> sample_points([x, y], 3, seed=1) == sample_points([x, y], 3, seed=1)
    True
    >>> len(sample_points([x], 5))
    5
    """
    rng = np.random.default_rng(seed)
    return [{symbol: random_rational(rng, bound) for symbol in symbols} for _ in range(count)]


#
# Evaluation
#

@dataclass(frozen=True)
class Evaluation:
    """ The value of an expression at a point; `exact` is False when opaque functions were approximated. """
    value: sympy.Rational
    exact: bool


def _substitute(expression: sympy.Expr, point: Mapping) -> sympy.Expr:
    substitution = {}
    for key, value in point.items():
        substitution[key] = sympy.Rational(value)
    missing = expression.free_symbols - set(substitution)
    if missing:
        raise ValueError(f"The point does not assign {sorted(map(str, missing))}")
    return expression.xreplace(substitution)


def _check_finite(value: sympy.Expr, expression: sympy.Expr):
    if value.has(sympy.zoo, sympy.nan, sympy.oo, -sympy.oo):
        raise PoleError(f"{expression} has a pole at the evaluation point")


def evaluate(expression: sympy.Expr, point: Mapping, digits: int = defaults.EVALUATION_DIGITS) -> Evaluation:
    """
    Evaluate an expression at a rational point.
    Rational expressions are evaluated exactly; opaque functions are evaluated
    with `digits` significant decimal digits and the result is flagged non-exact.

    >>> x, u = sympy.symbols("x u")
    >>> evaluate(x*u, {x: 2, u: sympy.Rational(3, 5)})
    Evaluation(value=6/5, exact=True)
    >>> evaluate(sympy.exp(u), {u: 0}).exact
    True
    >>> evaluate(sympy.exp(u), {u: 1}).exact
    False
    >>> evaluate(1/(u - 1), {u: 1})
    Traceback (most recent call last):
    ...
    varmult.symbolic.expressions.PoleError: 1/(u - 1) has a pole at the evaluation point
    """
    value = _substitute(sympy.sympify(expression), point)
    _check_finite(value, expression)
    if value.is_Rational:
        return Evaluation(value, True)
    approximation = value.evalf(digits)
    _check_finite(approximation, expression)
    if not approximation.is_real or not approximation.is_Number:
        raise PoleError(f"{expression} is not real at the evaluation point")
    return Evaluation(sympy.Rational(approximation), False)


def eval_rational(expression: sympy.Expr, point: Mapping, digits: int = defaults.EVALUATION_DIGITS) -> sympy.Rational:
    """
    The rational value of an expression at a point (see `evaluate`).

    >>> jet = JetSpace(["u", "v"])
    >>> eval_rational(jet.x * jet.u[0], {jet.x: 2, jet.u[0]: sympy.Rational(3, 5)})
    6/5
    >>> eval_rational(jet.u_x[0] * jet.u_y[1], {jet.u_x[0]: 1, jet.u_y[1]: -2})
    -2
    >>> eval_rational(jet.x, {})
    Traceback (most recent call last):
    ...
    ValueError: The point does not assign ['x']
    """
    return evaluate(expression, point, digits).value


def numeric_value(expression: sympy.Expr, point: Mapping, digits: int = defaults.EVALUATION_DIGITS) -> sympy.Expr:
    """ A high-precision numeric value (possibly complex); raises PoleError at poles. """
    value = _substitute(sympy.sympify(expression), point)
    _check_finite(value, expression)
    approximation = value.evalf(digits)
    _check_finite(approximation, expression)
    return approximation


#
# Zero testing
#

class Certainty(enum.Enum):
    EXACT = "exact"
    PROBABILISTIC = "probabilistic"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class ZeroTest:
    is_zero: bool
    certainty: Certainty

    def __bool__(self) -> bool:
        return self.is_zero


def _numerically_zero(numerator: sympy.Expr, point: Mapping, digits: int) -> bool:
    """
    Whether the value of the expanded numerator at the point is zero, relative to the size of its terms.
    """
    terms = [numeric_value(term, point, digits) for term in sympy.Add.make_args(numerator)]
    scale = max((abs(term) for term in terms), default=sympy.Integer(0))
    if scale == 0:
        return True
    total = abs(sum(terms))
    return bool(total <= scale * sympy.Float(10, digits) ** (-(digits - 15)))


def is_zero(expression, seed: int = defaults.DEFAULT_SEED, samples: int = defaults.SAMPLE_COUNT,
            digits: int = defaults.EVALUATION_DIGITS) -> ZeroTest:
    """
    Decide whether an expression vanishes identically.

    Rational expressions are decided exactly by normalization. Expressions with opaque
    functions are declared zero only if they vanish at `samples` random rational points;
    points where the expression has a pole are resampled a bounded number of times.

    >>> u, v = sympy.symbols("u v")
    >>> is_zero((u + v)**2 - u**2 - 2*u*v - v**2)
    ZeroTest(is_zero=True, certainty=<Certainty.EXACT: 'exact'>)
    >>> is_zero(u*v - v*u + 1)
    ZeroTest(is_zero=False, certainty=<Certainty.EXACT: 'exact'>)
    >>> is_zero(sympy.sin(u)**2 + sympy.cos(u)**2 - 1)
    ZeroTest(is_zero=True, certainty=<Certainty.PROBABILISTIC: 'probabilistic'>)
    >>> bool(is_zero(sympy.exp(u) - u - 1))
    False
    """
    normal = normalize(expression)
    if normal == 0:
        return ZeroTest(True, Certainty.EXACT)
    if not has_opaque(normal):
        return ZeroTest(False, Certainty.EXACT)
    numerator, _ = sympy.fraction(normal)
    numerator = sympy.expand(numerator)
    symbols = sorted(numerator.free_symbols, key=str)
    rng = np.random.default_rng(seed)
    tested = 0
    for _ in range(samples + defaults.MAX_RESAMPLES):
        point = {symbol: random_rational(rng) for symbol in symbols}
        try:
            if not _numerically_zero(numerator, point, digits):
                return ZeroTest(False, Certainty.PROBABILISTIC)
        except PoleError:
            logger.debug("Resampling: %s has a pole at %s", numerator, point)
            continue
        tested += 1
        if tested == samples:
            logger.debug("%s vanishes at %d random points", normal, samples)
            return ZeroTest(True, Certainty.PROBABILISTIC)
    logger.warning("Zero test of %s is indeterminate: too many poles", normal)
    return ZeroTest(False, Certainty.INDETERMINATE)


def all_zero(expressions: Iterable, **kwargs) -> bool:
    return all(is_zero(e, **kwargs) for e in expressions)


if __name__ == "__main__":
    import doctest
    print(doctest.testmod())
