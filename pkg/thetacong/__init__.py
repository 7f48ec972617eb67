"""thetacong: exact (K, theta)-congruent numbers over real quadratic fields."""

__version__ = "0.1.0"

from loguru import logger

logger.disable("thetacong")

from .arith import QQ, QuadElem, QuadField, hilbert, sqf
from .config import SearchBudget, load_budget
from .curves import (
    PI_OVER_3,
    TWO_PI_OVER_3,
    Angle,
    Curve,
    CurvePoint,
    TorsionClass,
    TorsionShape,
    halve_point,
    is_in_2e,
    make_curve,
    point_order,
    torsion_k,
    torsion_q,
)
from .correspondence import Triangle, TriangleType, classify, phi, psi, to_conic_point, validate
from .construct import (
    Construction,
    compose,
    search_type1,
    search_type2,
    search_type3,
    search_type4,
)
from .obstruct import Conic, ObstructionReport, locally_solvable, obstruction_report
from .decide import Decision, Verdict, decide
from .search import naive_point_search
from .surd import format_scalar, format_sides, parse_sides, parse_surd

# Import exceptions for public API
from .exceptions import (
    ThetaCongError,
    ThetaCongDomainError,
    SurdParseError,
    InvalidTriangleError,
    NotInImageError,
    OutsideClassificationError,
    DegenerateSumError,
    ThetaCongInternalError,
    FixtureError,
)

__all__ = [
    "__version__",
    "QQ",
    "QuadField",
    "QuadElem",
    "hilbert",
    "sqf",
    "SearchBudget",
    "load_budget",
    "Angle",
    "PI_OVER_3",
    "TWO_PI_OVER_3",
    "Curve",
    "CurvePoint",
    "TorsionClass",
    "TorsionShape",
    "make_curve",
    "is_in_2e",
    "halve_point",
    "point_order",
    "torsion_q",
    "torsion_k",
    "Triangle",
    "TriangleType",
    "validate",
    "phi",
    "psi",
    "classify",
    "to_conic_point",
    "Construction",
    "search_type1",
    "search_type2",
    "search_type3",
    "search_type4",
    "compose",
    "Conic",
    "ObstructionReport",
    "locally_solvable",
    "obstruction_report",
    "Decision",
    "Verdict",
    "decide",
    "naive_point_search",
    "parse_surd",
    "format_scalar",
    "format_sides",
    "parse_sides",
    # Exceptions
    "ThetaCongError",
    "ThetaCongDomainError",
    "SurdParseError",
    "InvalidTriangleError",
    "NotInImageError",
    "OutsideClassificationError",
    "DegenerateSumError",
    "ThetaCongInternalError",
    "FixtureError",
]
