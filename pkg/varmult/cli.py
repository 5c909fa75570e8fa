"""
The command-line interface:

    varmult invariants SYSTEM
    varmult multipliers SYSTEM [--seed N] [--degree-cap D]
    varmult classify SYSTEM
    varmult verify SYSTEM LAGRANGIAN MULTIPLIER
    varmult construct SYSTEM MULTIPLIER
    varmult lie STRUCTURE_CONSTANTS
    varmult corpus [--path FILE] [--case NAME]

Every input is a path to a JSON document, '-' for standard input, or the document itself.
Exit status: 0 for a completed analysis (whatever the verdict), 1 for a corpus mismatch,
2 for an input error and 3 for an internal inconsistency.

Author: Erel Segal-Halevi
Since: 2024-04
"""

import argparse
import json
import pathlib
import sys
from typing import Any, Dict, List, Optional, Sequence

from varmult import __version__, defaults, outputtypes as out
from varmult.classification import classify
from varmult.corpus import format_table, load_corpus, run_corpus
from varmult.fgordon import DocumentError, FGordonSystem, InternalInconsistencyError
from varmult.invariants import connection_form, invariants
from varmult.lagrangians import Lagrangian, LagrangianNotFound, construct_lagrangian, verify_multiplier
from varmult.liealgebra import StructureConstants, biinvariant_forms, killing_form, lie_system
from varmult.multipliers import build_phi0, stabilize
from varmult.symbolic.parser import parse, to_string

import logging
logger = logging.getLogger(__name__)


EXIT_OK, EXIT_MISMATCH, EXIT_INPUT_ERROR, EXIT_INTERNAL_ERROR = 0, 1, 2, 3


def read_input(argument: str, allow_text: bool = False) -> Any:
    """
    Read a JSON document from a path, from standard input ('-') or from the argument itself.
    With allow_text, an argument that is neither a file nor JSON is returned as a plain string.

    >>> read_input('{"m": 1, "f": ["0"]}')
    {'m': 1, 'f': ['0']}
    >>> read_input("-u_x*u_y", allow_text=True)
    '-u_x*u_y'
    >>> read_input("no-such-file.json")
    Traceback (most recent call last):
    ...
    varmult.fgordon.DocumentError: no-such-file.json is neither a readable file nor a JSON document
    """
    if argument == "-":
        text = sys.stdin.read()
    else:
        path = pathlib.Path(argument)
        try:
            is_file = path.is_file()
        except OSError:
            is_file = False
        text = path.read_text(encoding="utf-8") if is_file else argument
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        if allow_text:
            return text.strip()
        raise DocumentError(f"{argument} is neither a readable file nor a JSON document") from None


def read_system(argument: str) -> FGordonSystem:
    return FGordonSystem.from_document(read_input(argument))


def read_multiplier(argument: str, system: FGordonSystem) -> List[List[Any]]:
    """
    A multiplier document: {"M": [[...], ...]} or the bare matrix, with expression-string (or number) entries.

    >>> read_multiplier('{"M": [["0", "1"], ["1", "x"]]}', FGordonSystem.from_strings(["v", "u"]))
    [[0, 1], [1, x]]
    """
    document = read_input(argument)
    matrix = document.get("M") if isinstance(document, dict) else document
    m = system.m
    if not isinstance(matrix, list) or len(matrix) != m or \
            not all(isinstance(row, list) and len(row) == m for row in matrix):
        raise DocumentError(f"A multiplier must be a {m}x{m} matrix")
    return [[parse(str(e), system.jet) for e in row] for row in matrix]


class Analysis:
    """ The result object of a command (for the summary) with its JSON document. """

    def __init__(self, result: Any, document: Dict[str, Any], status: int = EXIT_OK):
        self.result = result
        self.document = document
        self.status = status


def _invariants(args) -> Analysis:
    system = read_system(args.system)
    triple = invariants(system)
    document = {"system": system.to_document(), "invariants": triple.to_document()}
    if system.refusal is not None:
        document["refusal"] = system.refusal.reason
    else:
        document["normal_form"] = system.normal_form.to_document()
        document["connection_form"] = connection_form(system).to_document()
        document["phi0"] = [row.to_document() for row in build_phi0(triple).rows]
    return Analysis(triple, document)


def _multipliers(args) -> Analysis:
    system = read_system(args.system)
    if system.refusal is not None:
        return Analysis(system.refusal, {"system": system.to_document(), "dimension": 0,
                                         "refusal": system.refusal.reason})
    report = stabilize(system, seed=args.seed, samples=args.samples, degree_cap=args.degree_cap)
    return Analysis(report, report.to_document())


def _classify(args) -> Analysis:
    verdict = classify(read_system(args.system), seed=args.seed, samples=args.samples, degree_cap=args.degree_cap)
    return Analysis(verdict, verdict.to_document())


def _verify(args) -> Analysis:
    system = read_system(args.system)
    L = Lagrangian.from_document(read_input(args.lagrangian, allow_text=True), system.jet)
    M = read_multiplier(args.multiplier, system)
    check = verify_multiplier(L, M, system)
    document = {"system": system.to_document(), "lagrangian": L.to_document(),
                "multiplier": [[to_string(e) for e in row] for row in M]}
    document.update(check.to_document())
    return Analysis(check, document)


def _construct(args) -> Analysis:
    system = read_system(args.system)
    M = read_multiplier(args.multiplier, system)
    document = {"system": system.to_document(), "multiplier": [[to_string(e) for e in row] for row in M]}
    try:
        L = construct_lagrangian(M, system, degree_cap=args.degree_cap)
    except LagrangianNotFound as error:
        document.update({"found": False, "reason": str(error)})
        return Analysis(document, document)
    document.update({"found": True, "lagrangian": L.to_document(), "verified": bool(verify_multiplier(L, M, system))})
    return Analysis(L, document)


def _lie(args) -> Analysis:
    algebra = StructureConstants.from_document(read_input(args.structure_constants))
    forms = biinvariant_forms(algebra)
    system = lie_system(algebra)
    report = stabilize(system, seed=args.seed, samples=args.samples, degree_cap=args.degree_cap)
    document = {
        "algebra": algebra.to_document(),
        "killing_form": [[str(e) for e in row] for row in killing_form(algebra)],
        "biinvariant_forms": [[[str(e) for e in row] for row in M] for M in forms],
        "multipliers": report.to_document(),
    }
    if report.dimension != len(forms):
        document["note"] = f"the system has {report.dimension} multipliers but {len(forms)} constant bi-invariant forms"
    return Analysis(report, document)


def _corpus(args) -> Analysis:
    corpus = load_corpus(args.path)
    cases = corpus["cases"]
    if args.case:
        cases = [case for case in cases if case["name"] in args.case]
        if not cases:
            raise DocumentError(f"No corpus case named {', '.join(args.case)}")
    seed = args.seed if args.seed_given else corpus.get("seed", defaults.DEFAULT_SEED)
    results = run_corpus(cases, seed=seed, samples=args.samples, degree_cap=args.degree_cap)
    failures = [r for r in results if not r.passed]
    document = {"results": [r.to_document() for r in results], "failures": len(failures), "seed": seed}
    return Analysis(_CorpusTable(results), document, EXIT_MISMATCH if failures else EXIT_OK)


class _CorpusTable:
    def __init__(self, results):
        self.results = results

    def summary(self) -> str:
        return format_table(self.results)


COMMANDS = {
    "invariants": _invariants,
    "multipliers": _multipliers,
    "classify": _classify,
    "verify": _verify,
    "construct": _construct,
    "lie": _lie,
    "corpus": _corpus,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help=f"seed of the random sample points (default {defaults.DEFAULT_SEED})")
    common.add_argument("--samples", type=int, default=defaults.SAMPLE_COUNT,
                        help="number of random points per rank or zero test")
    common.add_argument("--degree-cap", type=int, default=defaults.DEGREE_CAP,
                        help="highest polynomial degree tried by the ansatz")
    common.add_argument("--format", choices=["json", "summary", "both"], default="json",
                        help="json report, human-readable summary, or both")
    common.add_argument("--output", default=None, help="write the JSON report to this path")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for progress, -vv for details")

    parser = argparse.ArgumentParser(prog="varmult",
                                     description="Variational multipliers of hyperbolic systems u_xy = f(x, y, u, u_x, u_y)")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("invariants", parents=[common], help="the invariants H, K, S and the normal form") \
        .add_argument("system")
    commands.add_parser("multipliers", parents=[common], help="the dimension and a basis of the multiplier space") \
        .add_argument("system")
    commands.add_parser("classify", parents=[common], help="the number of Lagrangians of a two-component system") \
        .add_argument("system")
    verify = commands.add_parser("verify", parents=[common], help="check E(L) = M (u_xy - f) identically")
    verify.add_argument("system")
    verify.add_argument("lagrangian")
    verify.add_argument("multiplier")
    construct = commands.add_parser("construct", parents=[common], help="find a Lagrangian for a multiplier")
    construct.add_argument("system")
    construct.add_argument("multiplier")
    commands.add_parser("lie", parents=[common], help="bi-invariant forms and multipliers of a Lie-algebra system") \
        .add_argument("structure_constants")
    corpus = commands.add_parser("corpus", parents=[common], help="run the golden corpus")
    corpus.add_argument("--path", default=None, help="a corpus file instead of the bundled one")
    corpus.add_argument("--case", action="append", default=None, help="run only this case (repeatable)")
    return parser


def _emit(analysis: Analysis, args) -> None:
    document = dict(analysis.document)
    document.setdefault("seed", args.seed)
    document.setdefault("degree_cap", args.degree_cap)
    document["command"] = args.command
    text = out.Json.extract_output_from_report(document)
    if args.output is not None:
        pathlib.Path(args.output).write_text(text + "\n", encoding="utf-8")
    elif args.format in ("json", "both"):
        print(text)
    if args.format in ("summary", "both"):
        print(out.Summary.extract_output_from_report(analysis.result))


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    >>> main(["multipliers", '{"m": 2, "f": ["v", "u_x"]}', "--format", "summary"])
    FGordonSystem(u_xy = v, v_xy = u_x): multiplier dimension 0 (rank 3, stage 2, seed 2009)
    0
    >>> main(["classify", '{"m": 1, "f": ["0"]}', "--format", "summary"])
    2
    """
    args = build_parser().parse_args(argv)
    if args.verbose:
        logging.basicConfig(level=logging.DEBUG if args.verbose > 1 else logging.INFO,
                            format="%(levelname)s %(name)s: %(message)s")
    args.seed_given = args.seed is not None
    if args.seed is None:
        args.seed = defaults.DEFAULT_SEED
    try:
        analysis = COMMANDS[args.command](args)
    except InternalInconsistencyError as error:
        logger.error("Internal inconsistency: %s", error)
        print(f"varmult: internal inconsistency: {error}", file=sys.stderr)
        return EXIT_INTERNAL_ERROR
    except (ValueError, OSError) as error:
        print(f"varmult: {error}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    _emit(analysis, args)
    return analysis.status


if __name__ == "__main__":
    sys.exit(main())
