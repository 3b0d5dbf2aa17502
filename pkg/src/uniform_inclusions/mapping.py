"""Boundary conformal map, inclusion contours and their diagnostics.

On circle ``j`` the map is

    omega(xi) = c_{-1} xi - [g°_2(xi) - d~_j + i Psi_2(xi) + i conj(Psi_2(T_0 xi))] / conj(tau)

and ``L_j = omega(circle j)`` is the boundary of inclusion ``j``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.spatial import ConvexHull, QhullError
from scipy.spatial.distance import directed_hausdorff
from shapely.geometry import LinearRing, Point, Polygon

from .rh import BoundarySolution, residue_identity_check
from .schottky import convergence_report

__all__ = [
    "EllipseOracle",
    "InclusionContour",
    "InvalidParametersError",
    "NonUnivalentWarning",
    "OverlapReport",
    "ResidualReport",
    "caliper_widths",
    "detect_overlap",
    "ellipse_oracle",
    "exterior_points",
    "hausdorff_distance",
    "omega_boundary",
    "oracle_deviation",
    "procrustes_residual",
    "residual_report",
    "sample_contours",
    "width_ratio",
]

DEFAULT_SAMPLES = 257
MIN_SAMPLES = 16


class InvalidParametersError(ValueError):
    """Parameters outside the admissible set of a closed-form solution."""


class NonUnivalentWarning(UserWarning):
    """A contour crosses itself or runs clockwise: the map is not univalent there."""


@dataclass(frozen=True, eq=False)
class InclusionContour:
    """Samples ``z_k = omega(zeta_j + r_j exp(i theta_k))`` of one closed boundary."""

    index: int
    theta: np.ndarray
    z: np.ndarray
    closed: bool = True

    def __post_init__(self):
        th = np.asarray(self.theta, dtype=float)
        z = np.asarray(self.z, dtype=complex)
        if th.shape != z.shape or th.ndim != 1:
            raise ValueError("theta and z must be 1-d arrays of equal length")
        if th.size > 1 and np.any(np.diff(th) <= 0):
            raise ValueError("theta must be strictly increasing")
        object.__setattr__(self, "theta", th)
        object.__setattr__(self, "z", z)

    def __len__(self):
        return self.z.size

    @property
    def x(self) -> np.ndarray:
        return self.z.real

    @property
    def y(self) -> np.ndarray:
        return self.z.imag

    @property
    def centroid(self) -> complex:
        """Mean of the samples (the zeroth Fourier mode for equiangular samples)."""
        return complex(self.z.mean())

    @property
    def signed_area(self) -> float:
        """Shoelace area of the closed polyline; negative when traversed clockwise."""
        x, y = self.x, self.y
        return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))

    def xy(self) -> np.ndarray:
        return np.column_stack([self.x, self.y])


def omega_boundary(solution: BoundarySolution, xi, j: int):
    """Physical image of points ``xi`` on circle ``j``."""
    xi_arr = np.asarray(xi, dtype=complex)
    theta = solution.setup.grids[j].angle_of(xi_arr.ravel())
    out = solution.omega_at(j, theta)
    return complex(out[0]) if xi_arr.ndim == 0 else out.reshape(xi_arr.shape)


def sample_contours(solution: BoundarySolution, M: int = DEFAULT_SAMPLES) -> list[InclusionContour]:
    """``M`` equiangular samples per circle on ``[0, 2 pi)``.

    With ``M = 2N + 1`` every angle is a quadrature node, so the cached node
    values are returned exactly.
    """
    M = int(M)
    if M < MIN_SAMPLES:
        raise ValueError(f"at least {MIN_SAMPLES} samples per contour are required")
    theta = 2 * np.pi * np.arange(M) / M
    return [
        InclusionContour(j, theta, solution.omega_at(j, theta)) for j in range(solution.setup.n)
    ]


# -- overlap ---------------------------------------------------------------


@dataclass(frozen=True)
class OverlapReport:
    flag: bool
    pairs: tuple[tuple[int, int], ...]
    self_intersecting: tuple[int, ...] = ()
    reversed_orientation: tuple[int, ...] = ()
    warnings: tuple[str, ...] = ()

    @property
    def univalent(self) -> bool:
        return not (self.self_intersecting or self.reversed_orientation)

    def to_dict(self) -> dict:
        return {
            "flag": self.flag,
            "pairs": [list(p) for p in self.pairs],
            "self_intersecting": list(self.self_intersecting),
            "reversed_orientation": list(self.reversed_orientation),
            "warnings": list(self.warnings),
        }


def _ring(c: InclusionContour) -> LinearRing:
    return LinearRing(c.xy())


def detect_overlap(contours: Sequence[InclusionContour], area_tol: float = 1e-12) -> OverlapReport:
    """Pairwise crossing and nesting of closed polylines.

    A pair is flagged when the rings intersect or a sample of one lies
    inside the other.  Self-crossing and clockwise traversal of a single
    contour are reported as non-univalence but do not set the flag.
    """
    rings = [_ring(c) for c in contours]
    notes = []
    self_x = tuple(c.index for c, r in zip(contours, rings) if not r.is_simple)
    scale = max((float(np.ptp(c.x) + np.ptp(c.y)) for c in contours), default=1.0) or 1.0
    reversed_ = tuple(
        c.index for c in contours if c.signed_area < -area_tol * scale**2
    )
    for k in self_x:
        notes.append(f"contour {k} intersects itself")
    for k in reversed_:
        notes.append(f"contour {k} is traversed clockwise")
    if notes:
        warnings.warn("; ".join(notes) + ": the map is not univalent", NonUnivalentWarning, stacklevel=2)
    polys = [Polygon(r) if r.is_simple else Polygon(r).buffer(0) for r in rings]
    pairs = []
    for i in range(len(contours)):
        for j in range(i + 1, len(contours)):
            hit = rings[i].intersects(rings[j])
            if not hit:
                pi = Point(contours[i].x[0], contours[i].y[0])
                pj = Point(contours[j].x[0], contours[j].y[0])
                hit = polys[j].contains(pi) or polys[i].contains(pj)
            if hit:
                pairs.append((contours[i].index, contours[j].index))
    return OverlapReport(bool(pairs), tuple(pairs), self_x, reversed_, tuple(notes))


# -- single-inclusion closed form -----------------------------------------


@dataclass(frozen=True)
class EllipseOracle:
    """``omega(zeta) = c_{-1} zeta + conj(c_{-1}) delta / zeta + gamma`` for the unit circle."""

    kappa0: float
    tau: complex
    tau_inf: complex
    c_minus1: complex = 1.0
    gamma: complex = 0j

    def __post_init__(self):
        for name in ("tau", "tau_inf", "c_minus1", "gamma"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        object.__setattr__(self, "kappa0", float(self.kappa0))
        if self.kappa0 == 1:
            raise InvalidParametersError("kappa0 = 1 has no contrast")
        if self.tau == 0:
            raise InvalidParametersError("tau must be nonzero")
        if self.c_minus1 == 0:
            raise InvalidParametersError("c_minus1 must be nonzero")

    @property
    def delta(self) -> complex:
        k = self.kappa0
        return (2 * k * self.tau_inf - (k + 1) * self.tau) / ((1 - k) * self.tau.conjugate())

    @property
    def degenerate(self) -> bool:
        """``|delta| >= 1``: a segment or a non-univalent curve."""
        return abs(self.delta) >= 1 - 1e-12

    @property
    def semi_axes(self) -> tuple[float, float]:
        r = abs(self.c_minus1)
        d = abs(self.delta)
        return r * (1 + d), r * abs(1 - d)

    def __call__(self, zeta):
        z = np.asarray(zeta, dtype=complex)
        c = self.c_minus1
        return c * z + c.conjugate() * self.delta / z + self.gamma

    def point(self, theta):
        return self(np.exp(1j * np.asarray(theta, dtype=float)))


def ellipse_oracle(kappa0, tau, tau_inf, c_minus1=1.0, gamma=0j) -> EllipseOracle:
    return EllipseOracle(kappa0, tau, tau_inf, c_minus1, gamma)


def oracle_deviation(contour: InclusionContour, oracle: EllipseOracle) -> float:
    """Max pointwise distance after matching centroids."""
    ref = oracle.point(contour.theta)
    diff = (contour.z - contour.centroid) - (ref - ref.mean())
    return float(np.abs(diff).max())


# -- shape comparison -------------------------------------------------------


def procrustes_residual(x, y) -> tuple[float, complex, complex]:
    """Best complex similarity ``y ~ A x + B``; returns (max residual, A, B).

    Rotation, uniform scaling and translation only (no reflection).
    """
    x = np.asarray(x, dtype=complex).ravel()
    y = np.asarray(y, dtype=complex).ravel()
    G = np.column_stack([x, np.ones_like(x)])
    (A, B), *_ = np.linalg.lstsq(G, y, rcond=None)
    return float(np.abs(A * x + B - y).max()), complex(A), complex(B)


def hausdorff_distance(a, b) -> float:
    """Symmetric Hausdorff distance between two planar point sets."""
    pa = np.column_stack([np.real(a), np.imag(a)])
    pb = np.column_stack([np.real(b), np.imag(b)])
    return max(directed_hausdorff(pa, pb)[0], directed_hausdorff(pb, pa)[0])


def caliper_widths(contour: InclusionContour) -> tuple[float, float]:
    """Minimum and maximum caliper width of the sampled contour.

    The minimum is taken over convex-hull edge normals (rotating calipers),
    the maximum is the hull diameter.  A collinear sample set has minimum 0.
    """
    pts = contour.xy()
    try:
        hull = pts[ConvexHull(pts).vertices]
    except QhullError:
        d = pts - pts.mean(axis=0)
        return 0.0, float(np.ptp(d @ np.linalg.svd(d, full_matrices=False)[2][0]))
    edges = np.roll(hull, -1, axis=0) - hull
    normals = np.column_stack([-edges[:, 1], edges[:, 0]])
    normals /= np.linalg.norm(normals, axis=1, keepdims=True)
    proj = hull @ normals.T
    wmin = float(np.min(proj.max(axis=0) - proj.min(axis=0)))
    diff = hull[:, None, :] - hull[None, :, :]
    wmax = float(np.sqrt((diff**2).sum(-1)).max())
    return wmin, wmax


def width_ratio(contour: InclusionContour) -> float:
    wmin, wmax = caliper_widths(contour)
    return wmin / wmax if wmax > 0 else 0.0


# -- residuals ----------------------------------------------------------------


@dataclass
class ResidualReport:
    imF: float
    physical_bc: float
    symmetry: float
    automorphicity: float
    residue_identity_defects: np.ndarray
    overlap: OverlapReport | None = None
    extra: dict = field(default_factory=dict)

    def residuals_dict(self) -> dict:
        return {
            "imF": self.imF,
            "physical_bc": self.physical_bc,
            "symmetry": self.symmetry,
            "automorphicity": self.automorphicity,
        }


def exterior_points(domain, count=24, seed=0, margin=0.25):
    """Deterministic random points in the exterior, away from the circles."""
    rng = np.random.default_rng(seed)
    c, r = domain.centers, domain.radii
    lo = np.array([(c.real - r).min(), (c.imag - r).min()]) - 1.0
    hi = np.array([(c.real + r).max(), (c.imag + r).max()]) + 1.0
    out = []
    while len(out) < count:
        p = rng.uniform(lo, hi, size=(4 * count, 2)) @ np.array([1, 1j])
        out.extend(p[domain.is_exterior(p, margin=margin * float(r.min()))])
    return np.array(out[:count])


def boundary_residuals(solution: BoundarySolution) -> tuple[float, float]:
    """Node sup-norms of ``|Im F - a_j|`` and the physical traction condition."""
    a = solution.a[:, None]
    imF = float(np.abs(solution.F_nodes.imag - a).max())
    tb = np.conj(solution.setup.loading.tau)
    lam = solution.lam[:, None]
    dp = np.array(solution.constants.d_prime)[:, None]
    lhs = np.real(tb * solution.omega_nodes)
    rhs = lam * (np.real(solution.F_nodes) - dp)
    return imF, float(np.abs(lhs - rhs).max())


def function_defects(solution: BoundarySolution, points=None) -> tuple[float, float]:
    """Symmetry and automorphicity defects of ``Phi_1`` and ``Phi_2`` at exterior points."""
    setup = solution.setup
    z = exterior_points(setup.domain) if points is None else np.asarray(points, dtype=complex)
    T0 = solution.integrator.T0
    sym = aut = 0.0
    for phi in (solution.phi1, solution.phi2):
        v = phi(z)
        sym = max(sym, float(np.abs(v - np.conj(phi(T0(z)))).max()))
        for j in range(1, setup.n):
            s = setup.group.generator(j)
            aut = max(aut, float(np.abs(phi(s(z)) - v).max()))
    return sym, aut


def residual_report(solution: BoundarySolution, contours=None, points=None) -> ResidualReport:
    imF, bc = boundary_residuals(solution)
    sym, aut = function_defects(solution, points)
    defects = np.abs(residue_identity_check(solution.setup))
    overlap = detect_overlap(contours) if contours is not None and len(contours) > 1 else None
    rep = convergence_report(solution.setup.group)
    return ResidualReport(imF, bc, sym, aut, defects, overlap, {"tail_estimate": rep.tail_estimate})
