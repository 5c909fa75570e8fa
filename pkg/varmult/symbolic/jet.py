"""
Jet coordinates of a system with two independent variables (x,y)
and m dependent variables u^1..u^m.

Each coordinate is represented by a sympy Symbol whose name is the
dependent-variable name followed by a derivative suffix, e.g. "u", "u_x", "v_xy".

Author: Erel Segal-Halevi
Since: 2024-03
"""

import enum
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import sympy


class Kind(enum.Enum):
    X = "x"
    Y = "y"
    U = ""
    UX = "_x"
    UY = "_y"
    UXX = "_xx"
    UYY = "_yy"
    UXY = "_xy"

    @property
    def suffix(self) -> str:
        return self.value

    @property
    def order(self) -> int:
        """ The differential order of a coordinate of this kind (x and y count as 0). """
        if self in (Kind.X, Kind.Y, Kind.U):
            return 0
        if self in (Kind.UX, Kind.UY):
            return 1
        return 2


GRADIENT_KINDS = (Kind.UX, Kind.UY)
SECOND_ORDER_KINDS = (Kind.UXX, Kind.UXY, Kind.UYY)


@dataclass(frozen=True)
class Coordinate:
    """
    A jet coordinate: x, y, or a derivative of the dependent variable with the given 1-based index.

    >>> Coordinate(Kind.UX, 2)
    Coordinate(kind=<Kind.UX: '_x'>, index=2)
    >>> Coordinate(Kind.X)
    Coordinate(kind=<Kind.X: 'x'>, index=None)
    >>> Coordinate(Kind.U)
    Traceback (most recent call last):
    ...
    ValueError: Coordinate U needs a dependent-variable index
    """
    kind: Kind
    index: Optional[int] = None

    def __post_init__(self):
        if self.kind in (Kind.X, Kind.Y):
            if self.index is not None:
                raise ValueError(f"Coordinate {self.kind.name} takes no index")
        elif self.index is None or self.index < 1:
            raise ValueError(f"Coordinate {self.kind.name} needs a dependent-variable index")


X = Coordinate(Kind.X)
Y = Coordinate(Kind.Y)

RESERVED_NAMES = {"x", "y", "exp", "log", "sin", "cos"}
NAME_PATTERN = re.compile(r"^[A-Za-z][A-Za-z0-9]*$")


def default_names(m: int) -> Tuple[str, ...]:
    """
    >>> default_names(2)
    ('u', 'v')
    >>> default_names(5)
    ('u1', 'u2', 'u3', 'u4', 'u5')
    """
    if m < 1:
        raise ValueError(f"The number of dependent variables must be positive, got {m}")
    if m <= 3:
        return ("u", "v", "w")[:m]
    return tuple(f"u{i}" for i in range(1, m + 1))


class JetSpace:
    """
    The jet space up to second order over (x,y) with the given dependent-variable names.

    >>> jet = JetSpace(["u", "v"])
    >>> jet.m
    2
    >>> jet.u_x[1]
    v_x
    >>> jet.coordinate(jet.u_xy[0])
    Coordinate(kind=<Kind.UXY: '_xy'>, index=1)
    >>> jet.lookup("u2_y")
    v_y
    >>> JetSpace(["u", "x"])
    Traceback (most recent call last):
    ...
    ValueError: Dependent-variable name 'x' is reserved
    """

    def __init__(self, names: Sequence[str]):
        names = tuple(names)
        if len(names) == 0:
            raise ValueError("At least one dependent variable is required")
        if len(set(names)) != len(names):
            raise ValueError(f"Dependent-variable names must be distinct: {names}")
        for name in names:
            if name in RESERVED_NAMES:
                raise ValueError(f"Dependent-variable name '{name}' is reserved")
            if not NAME_PATTERN.match(name):
                raise ValueError(f"Dependent-variable name '{name}' must be alphanumeric and start with a letter")
        self.names = names
        self.m = len(names)
        self.x = sympy.Symbol("x")
        self.y = sympy.Symbol("y")
        self._symbols: Dict[Coordinate, sympy.Symbol] = {X: self.x, Y: self.y}
        for index, name in enumerate(names, start=1):
            for kind in (Kind.U, Kind.UX, Kind.UY, Kind.UXX, Kind.UYY, Kind.UXY):
                self._symbols[Coordinate(kind, index)] = sympy.Symbol(name + kind.suffix)
        self._coordinates = {symbol: coordinate for coordinate, symbol in self._symbols.items()}
        self._by_name = {symbol.name: symbol for symbol in self._symbols.values()}
        # aliases u1..um, unless a declared name already uses them
        for index in range(1, self.m + 1):
            for kind in (Kind.U, Kind.UX, Kind.UY, Kind.UXX, Kind.UYY, Kind.UXY):
                alias = f"u{index}{kind.suffix}"
                if alias not in self._by_name:
                    self._by_name[alias] = self._symbols[Coordinate(kind, index)]
        self.u = self._family(Kind.U)
        self.u_x = self._family(Kind.UX)
        self.u_y = self._family(Kind.UY)
        self.u_xx = self._family(Kind.UXX)
        self.u_yy = self._family(Kind.UYY)
        self.u_xy = self._family(Kind.UXY)

    @classmethod
    def default(cls, m: int) -> "JetSpace":
        return cls(default_names(m))

    def _family(self, kind: Kind) -> Tuple[sympy.Symbol, ...]:
        return tuple(self._symbols[Coordinate(kind, index)] for index in range(1, self.m + 1))

    def symbol(self, coordinate: Coordinate) -> sympy.Symbol:
        if coordinate.index is not None and coordinate.index > self.m:
            raise ValueError(f"Index {coordinate.index} is out of range 1..{self.m}")
        return self._symbols[coordinate]

    def coordinate(self, symbol: sympy.Symbol) -> Coordinate:
        try:
            return self._coordinates[symbol]
        except KeyError:
            raise ValueError(f"{symbol} is not a coordinate of this jet space") from None

    def lookup(self, name: str) -> Optional[sympy.Symbol]:
        """ The symbol with the given name (or alias), or None. """
        return self._by_name.get(name)

    @property
    def base(self) -> Tuple[sympy.Symbol, ...]:
        """ The coordinates (x, y, u^1..u^m) on which multipliers depend. """
        return (self.x, self.y) + self.u

    @property
    def gradients(self) -> Tuple[sympy.Symbol, ...]:
        """ Gradient coordinates in the order (u^1_x, u^1_y, u^2_x, u^2_y, ...). """
        result: List[sympy.Symbol] = []
        for index in range(self.m):
            result += [self.u_x[index], self.u_y[index]]
        return tuple(result)

    @property
    def first_order(self) -> Tuple[sympy.Symbol, ...]:
        return self.base + self.u_x + self.u_y

    @property
    def second_order(self) -> Tuple[sympy.Symbol, ...]:
        return self.u_xx + self.u_xy + self.u_yy

    @property
    def directions(self) -> Tuple[Coordinate, ...]:
        """ The 2+m differentiation directions x, y, u^1..u^m. """
        return (X, Y) + tuple(Coordinate(Kind.U, index) for index in range(1, self.m + 1))

    def order_of(self, expression: sympy.Expr) -> int:
        """
        The highest jet order of a coordinate occurring in the expression.

        >>> jet = JetSpace(["u"])
        >>> jet.order_of(jet.x * jet.u_x[0]), jet.order_of(jet.u_xy[0]), jet.order_of(sympy.Integer(3))
        (1, 2, 0)
        """
        orders = [self._coordinates[s].kind.order for s in expression.free_symbols if s in self._coordinates]
        return max(orders, default=0)

    def check_symbols(self, expression: sympy.Expr):
        """ Raise ValueError if the expression has a symbol outside this jet space. """
        foreign = [s for s in expression.free_symbols if s not in self._coordinates]
        if foreign:
            raise ValueError(f"Unknown symbols {sorted(map(str, foreign))} for dependent variables {self.names}")

    def __eq__(self, other) -> bool:
        return isinstance(other, JetSpace) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"JetSpace({list(self.names)})"


if __name__ == "__main__":
    import doctest
    print(doctest.testmod())
