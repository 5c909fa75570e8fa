from varmult.symbolic.jet import Coordinate, JetSpace, Kind, X, Y
from varmult.symbolic.parser import ParseError, parse, to_string
from varmult.symbolic.expressions import (
    PoleError, ZeroTest, Certainty, normalize, partial, total_derivative, free_total_derivative,
    is_zero, eval_rational, sample_points,
)
