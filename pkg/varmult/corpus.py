"""
The golden corpus: systems with recorded expectations (invariants, dimensions, verdicts, verified Lagrangians),
and a harness that re-derives every expectation and compares.

Author: Erel Segal-Halevi
Since: 2024-04
"""

import json
import pathlib
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Sequence

import sympy

from varmult import defaults
from varmult.classification import classify
from varmult.fgordon import DocumentError, FGordonSystem
from varmult.invariants import curvature, curvature_contraction, invariants
from varmult.lagrangians import Lagrangian, construct_lagrangian, divergence_equivalent, verify_multiplier
from varmult.liealgebra import StructureConstants, biinvariant_forms, is_biinvariant, lie_lagrangian, lie_system
from varmult.multipliers import dense_dimension, stabilize
from varmult.symbolic.expressions import is_zero
from varmult.symbolic.parser import parse, to_string

import logging
logger = logging.getLogger(__name__)


CORPUS_PATH = pathlib.Path(__file__).parent / "corpus.json"


@dataclass
class CorpusResult:
    case: str
    check: str
    expected: Any
    actual: Any
    passed: bool

    def to_document(self) -> Dict[str, Any]:
        return {"case": self.case, "check": self.check, "expected": self.expected,
                "actual": self.actual, "passed": self.passed}


def load_corpus(path=None) -> Dict[str, Any]:
    """
    Read a corpus document {"seed"?, "cases": [...]}; the bundled corpus when no path is given.

    >>> corpus = load_corpus()
    >>> corpus["seed"], corpus["cases"][0]["name"]
    (2009, 'example1')
    """
    path = pathlib.Path(path) if path is not None else CORPUS_PATH
    with open(path, encoding="utf-8") as file:
        try:
            document = json.load(file)
        except json.JSONDecodeError as error:
            raise DocumentError(f"{path} is not valid JSON: {error}") from None
    if not isinstance(document, dict) or not isinstance(document.get("cases"), list):
        raise DocumentError(f"{path} must contain an object with a list of 'cases'")
    if not document["cases"]:
        raise DocumentError(f"{path} contains no cases")
    for case in document["cases"]:
        if not isinstance(case, dict) or "name" not in case or "expect" not in case:
            raise DocumentError("Every corpus case needs a 'name' and an 'expect' object")
        if ("system" in case) == ("lie" in case):
            raise DocumentError(f"Case {case['name']} needs exactly one of 'system' and 'lie'")
    return document


def _matrix(entries: Sequence[Sequence[str]], jet) -> List[List[sympy.Expr]]:
    return [[parse(str(e), jet) for e in row] for row in entries]


def _same_matrix(actual, expected) -> bool:
    return len(actual) == len(expected) and all(
        len(a_row) == len(e_row) and all(is_zero(a - e) for a, e in zip(a_row, e_row))
        for a_row, e_row in zip(actual, expected))


def _strings(matrix) -> List[List[str]]:
    return [[to_string(e) for e in row] for row in matrix]


class _Case:
    """ Lazily computed analyses of one corpus case. """

    def __init__(self, case: Dict[str, Any], seed: int, samples: int, degree_cap: int):
        self.case = case
        self.seed, self.samples, self.degree_cap = seed, samples, degree_cap
        self.algebra = StructureConstants.from_document(case["lie"]) if "lie" in case else None
        self.system = lie_system(self.algebra) if self.algebra is not None else FGordonSystem.from_document(case["system"])
        self._report = None
        self._invariants = None

    @property
    def report(self):
        if self._report is None:
            self._report = stabilize(self.system, seed=self.seed, samples=self.samples, degree_cap=self.degree_cap)
        return self._report

    @property
    def invariants(self):
        if self._invariants is None:
            self._invariants = invariants(self.system)
        return self._invariants

    def compare_matrix(self, name: str, expected):
        actual = getattr(self.invariants, name)
        return _strings(actual), _same_matrix(actual, _matrix(expected, self.system.jet))

    def check_lagrangians(self, expected, holds: bool):
        actual = []
        for entry in expected:
            L = Lagrangian.from_string(entry["L"], self.system.jet)
            actual.append(verify_multiplier(L, _matrix(entry["M"], self.system.jet), self.system).holds)
        return actual, all(result == holds for result in actual)

    def check_constructed(self, expected):
        actual = []
        for entry in expected:
            L = construct_lagrangian(_matrix(entry["M"], self.system.jet), self.system, degree_cap=self.degree_cap)
            reference = Lagrangian.from_string(entry["equivalent_to"], self.system.jet)
            actual.append(to_string(L.expression) if divergence_equivalent(L, reference) else None)
        return actual, all(a is not None for a in actual)

    def check_curvature(self, expected):
        gamma = [_matrix(matrix, self.system.jet) for matrix in expected]
        predicted = curvature_contraction(curvature(gamma, self.system.jet), self.system.jet)
        return _strings(predicted), _same_matrix(self.invariants.H, predicted)

    def check_basis(self, expected):
        actual = self.report.basis
        matrices = [_matrix(M, self.system.jet) for M in expected]
        passed = len(actual) == len(matrices) and all(_same_matrix(a, e) for a, e in zip(actual, matrices))
        return [_strings(M) for M in actual], passed

    def check_lie_lagrangians(self, expected):
        actual = []
        for entry in expected:
            M = _matrix(entry, self.system.jet)
            L = lie_lagrangian(M, self.algebra, self.system.jet.names)
            actual.append(verify_multiplier(L, M, self.system).holds)
        return actual, all(actual)

    def check_nondegenerate_biinvariant(self, expected):
        M = _matrix(expected, self.system.jet)
        actual = is_biinvariant(M, self.algebra) and sympy.Matrix(M).det() != 0
        return actual, actual


def _checks() -> Dict[str, Callable[[_Case, Any], tuple]]:
    """ For every expectation key: a function returning (actual, passed). """

    def equal(value_of):
        def check(case, expected):
            actual = value_of(case)
            return actual, actual == expected
        return check

    return {
        "H": lambda case, expected: case.compare_matrix("H", expected),
        "K": lambda case, expected: case.compare_matrix("K", expected),
        "S_zero": equal(lambda case: case.invariants.s_vanishes()),
        "dimension": equal(lambda case: case.report.dimension),
        "rank": equal(lambda case: case.report.rank),
        "stage": equal(lambda case: case.report.stabilized_stage),
        "stage_ranks": equal(lambda case: list(case.report.stage_ranks)),
        "provenance": equal(lambda case: [row.provenance for row in case.report.phi.rows]),
        "degeneracy": equal(lambda case: case.report.degeneracy.verdict.value if case.report.degeneracy else None),
        "basis": lambda case, expected: case.check_basis(expected),
        "oracle": equal(lambda case: dense_dimension(case.system, seed=case.seed) == case.report.dimension),
        "verdict": equal(lambda case: str(classify(case.system, seed=case.seed, samples=case.samples,
                                                   degree_cap=case.degree_cap))),
        "lagrangians": lambda case, expected: case.check_lagrangians(expected, True),
        "not_lagrangians": lambda case, expected: case.check_lagrangians(expected, False),
        "constructed": lambda case, expected: case.check_constructed(expected),
        "curvature": lambda case, expected: case.check_curvature(expected),
        "biinvariant_dimension": equal(lambda case: len(biinvariant_forms(case.algebra))),
        "lie_lagrangians": lambda case, expected: case.check_lie_lagrangians(expected),
        "nondegenerate_biinvariant": lambda case, expected: case.check_nondegenerate_biinvariant(expected),
    }


CHECKS = _checks()


def run_case(case: Dict[str, Any], seed: int = defaults.DEFAULT_SEED, samples: int = defaults.SAMPLE_COUNT,
             degree_cap: int = defaults.DEGREE_CAP) -> List[CorpusResult]:
    """
    >>> results = run_case({"name": "wave", "system": {"m": 1, "f": ["0"]}, "expect": {"dimension": 1}})
    >>> results
    [CorpusResult(case='wave', check='dimension', expected=1, actual=1, passed=True)]
    >>> run_case({"name": "wrong", "system": {"m": 1, "f": ["0"]}, "expect": {"dimension": 2}})[0].passed
    False
    """
    name = case["name"]
    analysis = _Case(case, seed, samples, degree_cap)
    results = []
    for check, expected in case["expect"].items():
        if check not in CHECKS:
            raise DocumentError(f"Case {name}: unknown check {check!r}")
        actual, passed = CHECKS[check](analysis, expected)
        if not passed:
            logger.warning("Case %s, check %s: expected %s, got %s", name, check, expected, actual)
        results.append(CorpusResult(name, check, expected, actual, bool(passed)))
    logger.info("Case %s: %d of %d checks passed", name, sum(r.passed for r in results), len(results))
    return results


def run_corpus(cases: Sequence[Dict[str, Any]], seed: int = defaults.DEFAULT_SEED, samples: int = defaults.SAMPLE_COUNT,
               degree_cap: int = defaults.DEGREE_CAP) -> List[CorpusResult]:
    """
    Run every case, ordered by case name.

    >>> cases = [{"name": "b", "system": {"m": 1, "f": ["0"]}, "expect": {"dimension": 1}},
    ...          {"name": "a", "system": {"m": 1, "f": ["u"]}, "expect": {"dimension": 1, "oracle": True}}]
    >>> [(r.case, r.check, r.passed) for r in run_corpus(cases)]
    [('a', 'dimension', True), ('a', 'oracle', True), ('b', 'dimension', True)]
    >>> run_corpus([])
    Traceback (most recent call last):
    ...
    varmult.fgordon.DocumentError: The corpus contains no cases
    """
    if not cases:
        raise DocumentError("The corpus contains no cases")
    results = []
    for case in sorted(cases, key=lambda c: c["name"]):
        results += run_case(case, seed, samples, degree_cap)
    return results


def format_table(results: Sequence[CorpusResult]) -> str:
    """
    >>> print(format_table([CorpusResult("example1", "dimension", 2, 2, True),
    ...                     CorpusResult("example1", "rank", 1, 2, False)]))
    PASS  example1  dimension
    FAIL  example1  rank  expected 1, got 2
    1 of 2 checks passed
    """
    lines = []
    for result in results:
        if result.passed:
            lines.append(f"PASS  {result.case}  {result.check}")
        else:
            lines.append(f"FAIL  {result.case}  {result.check}  expected {result.expected}, got {result.actual}")
    lines.append(f"{sum(r.passed for r in results)} of {len(results)} checks passed")
    return "\n".join(lines)


if __name__ == "__main__":
    import doctest
    print(doctest.testmod())
