"""Uniformly stressed inclusions under antiplane shear via Schottky-group series."""

from .geometry import (
    INFINITY,
    Circle,
    CircularDomain,
    DomainError,
    MoebiusMap,
    NormalizationNotice,
    PoleError,
    ReflectionMap,
    compose_reflection_pair,
    validate_domain,
)
from .kernel import KernelContext, cauchy_kernel, chi, reflected_kernel
from .mapping import (
    EllipseOracle,
    InclusionContour,
    detect_overlap,
    ellipse_oracle,
    residual_report,
    sample_contours,
)
from .quadrature import CircleGrid, integrate_regular, integrate_singular
from .rh import (
    BoundarySolution,
    LoadingParameters,
    MapGauge,
    ProblemSetup,
    residue_identity_check,
    solve,
)
from .schottky import SchottkyGroup, convergence_report, enumerate_group

__version__ = "0.1.0"

__all__ = [
    "INFINITY",
    "BoundarySolution",
    "Circle",
    "CircleGrid",
    "CircularDomain",
    "DomainError",
    "EllipseOracle",
    "InclusionContour",
    "KernelContext",
    "LoadingParameters",
    "MapGauge",
    "MoebiusMap",
    "NormalizationNotice",
    "PoleError",
    "ProblemSetup",
    "ReflectionMap",
    "SchottkyGroup",
    "cauchy_kernel",
    "chi",
    "compose_reflection_pair",
    "convergence_report",
    "detect_overlap",
    "ellipse_oracle",
    "enumerate_group",
    "integrate_regular",
    "integrate_singular",
    "reflected_kernel",
    "residual_report",
    "residue_identity_check",
    "sample_contours",
    "solve",
    "validate_domain",
]
