import pathlib

HERE = pathlib.Path(__file__).parent
__version__ = (HERE / "VERSION").read_text().strip()

import varmult.outputtypes as out
from varmult.fgordon import FGordonSystem, NormalForm, Refusal
from varmult.fgordon import DocumentError, InternalInconsistencyError, NotNormalFormError
from varmult.symbolic.jet import JetSpace
from varmult.symbolic.parser import ParseError, parse
from varmult.lagrangians import Lagrangian, LagrangianNotFound
from varmult.liealgebra import StructureConstants

from varmult.adaptors import analyze, as_system, compare_with_oracle


class analysis:
    from varmult.invariants import invariants, connection_form, curvature
    from varmult.multipliers import stabilize, dense_dimension
    from varmult.multipliers import stabilize as multipliers
    from varmult.classification import classify, covariance_check
    from varmult.lagrangians import euler_lagrange, verify_multiplier, construct_lagrangian, divergence_equivalent


class algebras:
    from varmult.liealgebra import abelian, so3, nonabelian2, heisenberg, solvable4, semidirect
    from varmult.liealgebra import biinvariant_forms, killing_form, lie_system, lie_lagrangian
