"""
f-Gordon systems u^a_xy = f^a(x, y, u, u_x, u_y), a = 1..m, and their normal form

    u^a_xy + C^a_bc u^b_x u^c_y + A^a_c u^c_x + B^a_c u^c_y + E^a = 0,

which exists exactly when every f^a is affine in the x-gradients and affine in the y-gradients.
A system without a normal form admits no first-order variational multiplier.

Author: Erel Segal-Halevi
Since: 2024-03
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import sympy

from varmult.symbolic.jet import JetSpace, default_names
from varmult.symbolic.parser import parse, to_string
from varmult.symbolic.expressions import is_zero, normalize

import logging
logger = logging.getLogger(__name__)


class InternalInconsistencyError(AssertionError):
    """ An impossible state was reached; indicates a bug in the expression kernel or an algorithm. """


class DocumentError(ValueError):
    """ A JSON input document is malformed. """


class NotNormalFormError(ValueError):
    """ An operation needs the normal form of a system that has none. """

    def __init__(self, refusal: "Refusal"):
        self.refusal = refusal
        super().__init__(refusal.reason)


Matrix = Tuple[Tuple[sympy.Expr, ...], ...]


@dataclass(frozen=True)
class NormalForm:
    """
    Coefficients of the normal form, 0-based: C[a][b][c] = C^a_bc, A[a][c] = A^a_c, B[a][c] = B^a_c, E[a] = E^a.
    All entries depend only on (x, y, u).
    """
    C: Tuple[Matrix, ...]
    A: Matrix
    B: Matrix
    E: Tuple[sympy.Expr, ...]

    def reassemble(self, jet: JetSpace) -> Tuple[sympy.Expr, ...]:
        """ The right-hand sides f^a = -(C u_x u_y + A u_x + B u_y + E). """
        m = jet.m
        result = []
        for a in range(m):
            total = self.E[a]
            for c in range(m):
                total += self.A[a][c] * jet.u_x[c] + self.B[a][c] * jet.u_y[c]
                for b in range(m):
                    total += self.C[a][b][c] * jet.u_x[b] * jet.u_y[c]
            result.append(normalize(-total))
        return tuple(result)

    def to_document(self) -> Dict[str, Any]:
        return {
            "C": [[[to_string(e) for e in row] for row in matrix] for matrix in self.C],
            "A": [[to_string(e) for e in row] for row in self.A],
            "B": [[to_string(e) for e in row] for row in self.B],
            "E": [to_string(e) for e in self.E],
        }

    @classmethod
    def from_document(cls, document: Dict[str, Any], jet: JetSpace) -> "NormalForm":
        m = jet.m
        try:
            C = tuple(tuple(tuple(normalize(parse(str(e), jet)) for e in row) for row in matrix) for matrix in document["C"])
            A = tuple(tuple(normalize(parse(str(e), jet)) for e in row) for row in document["A"])
            B = tuple(tuple(normalize(parse(str(e), jet)) for e in row) for row in document["B"])
            E = tuple(normalize(parse(str(e), jet)) for e in document["E"])
        except KeyError as missing:
            raise DocumentError(f"normal_form is missing the key {missing}") from None
        shapes_ok = (len(C) == m and all(len(row) == m and all(len(r) == m for r in row) for row in C)
                     and len(A) == m and all(len(r) == m for r in A)
                     and len(B) == m and all(len(r) == m for r in B) and len(E) == m)
        if not shapes_ok:
            raise DocumentError(f"normal_form coefficient shapes do not match m={m}")
        return cls(C, A, B, E)


@dataclass(frozen=True)
class Refusal:
    """ The verdict for a system whose right-hand side is not affine in the gradients of one direction. """
    reason: str
    equation: int          # 1-based index of the offending right-hand side
    direction: str         # "x" or "y"
    pair: Tuple[int, int]  # 1-based indices of the two gradient coordinates

    def __str__(self):
        return self.reason


class FGordonSystem:
    """
    A system u^a_xy = f^a(x, y, u, u_x, u_y).

    >>> example1 = FGordonSystem.from_strings(["v", "u"])
    >>> example1.m, example1.f
    (2, (v, u))
    >>> example1.normal_form.E
    (-v, -u)
    >>> FGordonSystem.from_strings(["u_x^2"]).refusal.reason
    'no first-order variational multiplier exists: d^2 f^1 / du_x du_x = 2 is not zero'
    >>> FGordonSystem.from_strings(["u_xx"])
    Traceback (most recent call last):
    ...
    ValueError: Right-hand side 1 (u_xx) contains second-order coordinates
    """

    def __init__(self, f: Sequence, jet: JetSpace = None, name: Optional[str] = None, description: str = ""):
        f = tuple(sympy.sympify(e) for e in f)
        if jet is None:
            jet = JetSpace.default(len(f))
        if len(f) != jet.m:
            raise ValueError(f"Expected {jet.m} right-hand sides but got {len(f)}")
        for index, expression in enumerate(f, start=1):
            jet.check_symbols(expression)
            if jet.order_of(expression) > 1:
                raise ValueError(f"Right-hand side {index} ({expression}) contains second-order coordinates")
        self.jet = jet
        self.m = jet.m
        self.f = tuple(normalize(e) for e in f)
        self.name = name
        self.description = description

    @classmethod
    def from_strings(cls, sources: Sequence[str], names: Sequence[str] = None, name: str = None) -> "FGordonSystem":
        jet = JetSpace(names if names is not None else default_names(len(sources)))
        return cls([parse(source, jet, allow_second_order=False) for source in sources], jet, name)

    @classmethod
    def from_document(cls, document: Dict[str, Any]) -> "FGordonSystem":
        """
        Build a system from its JSON document {"m", "dependent"?, "f", "normal_form"?, "name"?, "description"?}.

        >>> FGordonSystem.from_document({"m": 2, "dependent": ["u", "v"], "f": ["v", "x*u"]}).f
        (v, u*x)
        >>> FGordonSystem.from_document({"m": 2, "f": ["v"]})
        Traceback (most recent call last):
        ...
        varmult.fgordon.DocumentError: Expected 2 right-hand sides but got 1
        """
        if not isinstance(document, dict):
            raise DocumentError("A system document must be a JSON object")
        if "f" not in document:
            raise DocumentError("A system document needs the key 'f'")
        sources = document["f"]
        if not isinstance(sources, list) or not all(isinstance(s, (str, int)) for s in sources):
            raise DocumentError("'f' must be a list of expression strings")
        m = document.get("m", len(sources))
        if not isinstance(m, int) or m < 1:
            raise DocumentError(f"'m' must be a positive integer, got {m!r}")
        if len(sources) != m:
            raise DocumentError(f"Expected {m} right-hand sides but got {len(sources)}")
        names = document.get("dependent") or default_names(m)
        if len(names) != m:
            raise DocumentError(f"Expected {m} dependent-variable names but got {len(names)}")
        try:
            jet = JetSpace(names)
        except ValueError as error:
            raise DocumentError(str(error)) from None
        system = cls([parse(str(s), jet, allow_second_order=False) for s in sources], jet,
                     document.get("name"), document.get("description", ""))
        if "normal_form" in document:
            declared = NormalForm.from_document(document["normal_form"], jet)
            extracted = system.normal_form
            if extracted is None or not _same_normal_form(declared, extracted):
                raise DocumentError("The declared normal_form does not match the right-hand sides")
        return system

    def to_document(self) -> Dict[str, Any]:
        document = {"m": self.m, "dependent": list(self.jet.names), "f": [to_string(e) for e in self.f]}
        if self.name:
            document["name"] = self.name
        if self.description:
            document["description"] = self.description
        return document

    @cached_property
    def _normal_form_or_refusal(self) -> Union[NormalForm, Refusal]:
        return _extract_normal_form(self)

    @property
    def normal_form(self) -> Optional[NormalForm]:
        result = self._normal_form_or_refusal
        return result if isinstance(result, NormalForm) else None

    @property
    def refusal(self) -> Optional[Refusal]:
        result = self._normal_form_or_refusal
        return result if isinstance(result, Refusal) else None

    def require_normal_form(self) -> NormalForm:
        """ The normal form; raises NotNormalFormError if there is none. """
        result = self._normal_form_or_refusal
        if isinstance(result, Refusal):
            raise NotNormalFormError(result)
        return result

    def is_gradient_free(self) -> bool:
        """ True if the system has the form u_xy = g(x, y, u). """
        gradients = set(self.jet.gradients)
        return all(not (e.free_symbols & gradients) for e in self.f)

    def __repr__(self):
        equations = ", ".join(f"{name}_xy = {to_string(e)}" for name, e in zip(self.jet.names, self.f))
        return f"FGordonSystem({equations})"


def _same_normal_form(first: NormalForm, second: NormalForm) -> bool:
    def flat(nf: NormalForm):
        return [e for matrix in nf.C for row in matrix for e in row] + \
               [e for row in nf.A for e in row] + [e for row in nf.B for e in row] + list(nf.E)
    return all(is_zero(a - b) for a, b in zip(flat(first), flat(second)))


def _extract_normal_form(system: FGordonSystem) -> Union[NormalForm, Refusal]:
    jet, m, f = system.jet, system.m, system.f
    for direction, gradients in (("x", jet.u_x), ("y", jet.u_y)):
        for a in range(m):
            for b in range(m):
                for c in range(b, m):
                    second = normalize(sympy.diff(f[a], gradients[b], gradients[c]))
                    if not is_zero(second):
                        reason = (f"no first-order variational multiplier exists: "
                                  f"d^2 f^{a+1} / d{gradients[b]} d{gradients[c]} = {to_string(second)} is not zero")
                        logger.info("Refusing %s: %s", system, reason)
                        return Refusal(reason, a + 1, direction, (b + 1, c + 1))
    at_zero = {g: 0 for g in jet.gradients}
    C = tuple(tuple(tuple(normalize(-sympy.diff(f[a], jet.u_x[b], jet.u_y[c])) for c in range(m))
                    for b in range(m)) for a in range(m))
    A = tuple(tuple(normalize(-sympy.diff(f[a], jet.u_x[c]).xreplace(at_zero)) for c in range(m)) for a in range(m))
    B = tuple(tuple(normalize(-sympy.diff(f[a], jet.u_y[c]).xreplace(at_zero)) for c in range(m)) for a in range(m))
    E = tuple(normalize(-f[a].xreplace(at_zero)) for a in range(m))
    result = NormalForm(C, A, B, E)
    gradients = set(jet.gradients)
    for coefficient in [e for matrix in C for row in matrix for e in row]:
        if coefficient.free_symbols & gradients:
            raise InternalInconsistencyError(f"Quadratic coefficient {coefficient} depends on gradients")
    for original, reassembled in zip(f, result.reassemble(jet)):
        if not is_zero(original - reassembled):
            raise InternalInconsistencyError(f"Normal form does not reproduce {original}: got {reassembled}")
    return result


def check_normal_form(system: FGordonSystem) -> Union[NormalForm, Refusal]:
    """
    The normal-form coefficients of the system, or a refusal verdict.

    >>> check_normal_form(FGordonSystem.from_strings(["v", "u"])).E
    (-v, -u)
    >>> print(check_normal_form(FGordonSystem.from_strings(["u_x^2"])))
    no first-order variational multiplier exists: d^2 f^1 / du_x du_x = 2 is not zero
    >>> check_normal_form(FGordonSystem.from_strings(["-u*u_x*u_y"])).C
    ((u,),)
    """
    return system._normal_form_or_refusal


def geodesic_system(gamma: Sequence, jet: JetSpace, name: str = None) -> FGordonSystem:
    """
    The system u^a_xy + Gamma^a_bc(u) u^b_x u^c_y = 0 of a connection, gamma[a][b][c] = Gamma^a_bc.

    >>> jet = JetSpace(["u"])
    >>> geodesic_system([[[jet.u[0]]]], jet).f
    (-u*u_x*u_y,)
    """
    m = jet.m
    f = []
    for a in range(m):
        total = sympy.Integer(0)
        for b in range(m):
            for c in range(m):
                total += sympy.sympify(gamma[a][b][c]) * jet.u_x[b] * jet.u_y[c]
        f.append(-total)
    return FGordonSystem(f, jet, name)


if __name__ == "__main__":
    import doctest
    print(doctest.testmod())
