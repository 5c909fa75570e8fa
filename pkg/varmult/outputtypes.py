"""
Define the various available output formats for an analysis.

Author: Erel Segal-Halevi
Since: 2024-04
"""

import json
from abc import ABC
from typing import Any, Dict

from varmult.classification import ClassificationVerdict
from varmult.fgordon import Refusal
from varmult.invariants import InvariantTriple
from varmult.lagrangians import Lagrangian, MultiplierCheck
from varmult.multipliers import MultiplierReport
from varmult.symbolic.parser import to_string


def document_of(result: Any) -> Dict[str, Any]:
    """ The JSON document of an analysis result (anything with a to_document method, or a plain document). """
    if isinstance(result, dict):
        return result
    if isinstance(result, (list, tuple)):
        return {"results": [document_of(r) for r in result]}
    if hasattr(result, "to_document"):
        return result.to_document()
    raise TypeError(f"Cannot convert {type(result).__name__} to a document")


class OutputType(ABC):
    @classmethod
    def extract_output_from_report(cls, result: Any) -> Any:
        """
        Return the required output from the given analysis result.
        """
        raise NotImplementedError("Choose a specific output type")


class Report(OutputType):
    """ Output the result object itself. """
    @classmethod
    def extract_output_from_report(cls, result: Any) -> Any:
        return result


class Json(OutputType):
    """
    Output canonical JSON text: sorted keys, two-space indentation.

    >>> print(Json.extract_output_from_report({"b": 1, "a": [1, 2]}))
    {
      "a": [
        1,
        2
      ],
      "b": 1
    }
    """
    @classmethod
    def extract_output_from_report(cls, result: Any) -> str:
        return json.dumps(document_of(result), sort_keys=True, indent=2)


class Summary(OutputType):
    """
    Output a compact human-readable text.

    >>> from varmult.fgordon import FGordonSystem
    >>> from varmult.multipliers import stabilize
    >>> print(Summary.extract_output_from_report(stabilize(FGordonSystem.from_strings(["v", "u"]))))
    FGordonSystem(u_xy = v, v_xy = u): multiplier dimension 2 (rank 1, stage 0, seed 2009)
      M1 = [[0, 1], [1, 0]]
      M2 = [[1, 0], [0, 1]]
      degeneracy: nondegenerate combination found
    """
    @classmethod
    def extract_output_from_report(cls, result: Any) -> str:
        def matrix(M):
            return "[" + ", ".join("[" + ", ".join(to_string(e) for e in row) + "]" for row in M) + "]"

        if isinstance(result, MultiplierReport):
            lines = [f"{result.system}: multiplier dimension {result.dimension} "
                     f"(rank {result.rank}, stage {result.stabilized_stage}, seed {result.seed})"]
            lines += [f"  M{i} = {matrix(M)}" for i, M in enumerate(result.basis, start=1)]
            if result.degeneracy is not None:
                lines.append(f"  degeneracy: {result.degeneracy.verdict.value}")
            lines += [f"  warning: {w}" for w in result.warnings]
            return "\n".join(lines)
        if isinstance(result, ClassificationVerdict):
            lines = [f"{result}: {result.lagrangian_count} Lagrangian(s)"]
            if result.rank_A is not None:
                lines.append(f"  rank A = {result.rank_A}")
            if result.witness is not None:
                lines.append(f"  indefinite multiplier {matrix(result.witness)}")
            lines += [f"  note: {n}" for n in result.notes]
            return "\n".join(lines)
        if isinstance(result, InvariantTriple):
            lines = [f"H = {matrix(result.H)}", f"K = {matrix(result.K)}"]
            lines += [f"S^{c} = {matrix(S)}" for c, S in enumerate(result.S, start=1)]
            return "\n".join(lines)
        if isinstance(result, MultiplierCheck):
            if result.holds:
                return "multiplier identity holds"
            return "multiplier identity fails; residuals: " + ", ".join(to_string(r) for r in result.residuals)
        if isinstance(result, (Lagrangian, Refusal)):
            return str(result)
        if isinstance(result, (list, tuple)):
            return "\n".join(cls.extract_output_from_report(r) for r in result)
        if hasattr(result, "summary"):
            return result.summary()
        return Json.extract_output_from_report(result)


class Dimension(OutputType):
    """ Output the dimension of the multiplier space. """
    @classmethod
    def extract_output_from_report(cls, result: Any) -> int:
        if hasattr(result, "report") and result.report is not None:
            result = result.report
        if not hasattr(result, "dimension"):
            raise TypeError(f"{type(result).__name__} has no multiplier dimension")
        return result.dimension


class Verdict(OutputType):
    """ Output the classification label, with the subtype in parentheses. """
    @classmethod
    def extract_output_from_report(cls, result: Any) -> str:
        if not hasattr(result, "label"):
            raise TypeError(f"{type(result).__name__} is not a classification verdict")
        return str(result)


if __name__ == "__main__":
    import doctest
    print(doctest.testmod())
