"""
This module implements Adaptor functions for the analysis algorithms.

The functions accept an analysis algorithm as an argument.

They allow you to call the algorithm with convenient input types,
such as: a list of right-hand-side strings, or a system document.

Author: Erel Segal-Halevi
Since: 2024-04
"""

from typing import Any, Callable, Sequence

from varmult import defaults, outputtypes as out
from varmult.fgordon import DocumentError, FGordonSystem
from varmult.multipliers import dense_dimension, stabilize

import logging
logger = logging.getLogger(__name__)


def as_system(system: Any, names: Sequence[str] = None) -> FGordonSystem:
    """
    Convert a convenient input to an FGordonSystem.

    :param system: can be one of the following:
       * An FGordonSystem (returned as is);
       * A list of right-hand-side strings, e.g. ["v", "x*u"] (the dependent variables are `names`, or the default ones);
       * A system document, e.g. {"m": 2, "dependent": ["u", "v"], "f": ["v", "x*u"]}.

    >>> as_system(["v", "x*u"])
    FGordonSystem(u_xy = v, v_xy = u*x)
    >>> as_system({"m": 1, "dependent": ["w"], "f": ["w_x*w_y"]})
    FGordonSystem(w_xy = w_x*w_y)
    >>> as_system("v")
    Traceback (most recent call last):
    ...
    TypeError: Cannot build a system from str: give a list of right-hand sides or a system document
    """
    if isinstance(system, FGordonSystem):
        return system
    if isinstance(system, dict):
        return FGordonSystem.from_document(system)
    if isinstance(system, (list, tuple)):
        if not all(isinstance(source, str) for source in system):
            raise DocumentError(f"The right-hand sides must be strings, got {system!r}")
        return FGordonSystem.from_strings(system, names)
    raise TypeError(f"Cannot build a system from {type(system).__name__}: "
                    f"give a list of right-hand sides or a system document")


def analyze(
    algorithm: Callable,
    system: Any,
    names: Sequence[str] = None,
    outputtype: out.OutputType = out.Report,
    **kwargs
):
    """
    An adaptor analysis function.

    :param algorithm: a specific analysis, e.g. `stabilize`, `classify` or `invariants`.
        Should accept an FGordonSystem as its first argument.
    :param system: the system, in any form accepted by `as_system`.
    :param names: the dependent variables, when `system` is a list of right-hand sides.
    :param outputtype: what output to return. See `outputtypes.py'.
    :param kwargs: any other arguments expected by `algorithm` (seed, samples, degree_cap).

    >>> analyze(stabilize, ["v", "u"], outputtype=out.Dimension)
    2
    >>> from varmult.classification import classify
    >>> analyze(classify, ["v", "u"], outputtype=out.Verdict)
    'TWO_LAGRANGIANS(wave)'
    >>> analyze(stabilize, ["v", "u_x"], outputtype=out.Dimension, seed=1)
    0
    """
    result = algorithm(as_system(system, names), **kwargs)
    return outputtype.extract_output_from_report(result)


def compare_with_oracle(system: Any, names: Sequence[str] = None, seed: int = defaults.DEFAULT_SEED, **kwargs) -> bool:
    """
    Compare the dimension found by the stabilization algorithm with the dense oracle.

    >>> compare_with_oracle(["v", "x*u"])
    True
    >>> compare_with_oracle(["0", "0", "0"])
    True
    """
    system = as_system(system, names)
    dimension = stabilize(system, seed=seed, **kwargs).dimension
    oracle = dense_dimension(system, seed=seed)
    if dimension != oracle:
        logger.warning("%s: stabilization found dimension %d but the oracle found %d", system, dimension, oracle)
    return dimension == oracle


if __name__ == "__main__":
    import doctest
    print(doctest.testmod())
