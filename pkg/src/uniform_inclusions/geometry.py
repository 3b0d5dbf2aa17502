"""Circles, anticonformal reflections and Moebius maps in the parametric plane.

A reflection in the circle ``|zeta - zeta_j| = r_j`` is stored as a 2x2
coefficient matrix acting on ``conj(zeta)``::

    T_j(zeta) = zeta_j + r_j**2 / (conj(zeta) - conj(zeta_j))
              = (zeta_j * w + r_j**2 - |zeta_j|**2) / (w - conj(zeta_j)),  w = conj(zeta)

so the holomorphic composite ``T_a o T_b`` has matrix ``M_a @ conj(M_b)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "INFINITY",
    "Circle",
    "CircularDomain",
    "ComplexInfinity",
    "DomainError",
    "MoebiusMap",
    "NormalizationNotice",
    "PoleError",
    "ReflectionMap",
    "apply",
    "compose_reflection_pair",
    "reflect",
    "validate_domain",
]


class PoleError(ZeroDivisionError):
    """Evaluation of a map at its pole without infinity support."""


class DomainError(ValueError):
    """The circles do not bound a valid n-connected exterior domain."""


class NormalizationNotice(UserWarning):
    """The circles do not follow the unit-circle-at-origin normalization."""


class ComplexInfinity:
    """The point at infinity of the extended complex plane (singleton)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (ComplexInfinity, ())


INFINITY = ComplexInfinity()


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise DomainError(f"circle radius must be positive, got {self.radius!r}")

    def point(self, theta):
        """Point(s) ``center + radius * exp(i theta)``."""
        return self.center + self.radius * np.exp(1j * np.asarray(theta, dtype=float))

    def contains(self, zeta, strict=True):
        d = np.abs(np.asarray(zeta) - self.center)
        return d < self.radius if strict else d <= self.radius


@dataclass(frozen=True)
class CircularDomain:
    """Exterior of ``n`` pairwise disjoint circles."""

    circles: tuple[Circle, ...]

    @property
    def n(self) -> int:
        return len(self.circles)

    @property
    def centers(self) -> np.ndarray:
        return np.array([c.center for c in self.circles], dtype=complex)

    @property
    def radii(self) -> np.ndarray:
        return np.array([c.radius for c in self.circles], dtype=float)

    def is_exterior(self, zeta, margin=0.0):
        """True where ``zeta`` lies outside every circle (by more than ``margin``)."""
        z = np.asarray(zeta, dtype=complex)
        out = np.ones(z.shape, dtype=bool)
        for c in self.circles:
            out &= np.abs(z - c.center) > c.radius + margin
        return out

    def reflections(self) -> tuple["ReflectionMap", ...]:
        return tuple(ReflectionMap(c) for c in self.circles)


def _normalize(m: np.ndarray) -> np.ndarray:
    k = np.argmax(np.abs(m))
    return m / m.flat[k]


@dataclass(frozen=True, eq=False)
class MoebiusMap:
    """Holomorphic map ``(a z + b) / (c z + d)``.

    Coefficients are scaled so that the one of largest modulus equals 1;
    this makes ``==`` and the degeneracy test insensitive to the arbitrary
    projective factor.
    """

    a: complex
    b: complex
    c: complex
    d: complex
    _matrix: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        m = np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)
        if not np.all(np.isfinite(m)) or np.max(np.abs(m)) == 0:
            raise ValueError("Moebius coefficients must be finite and not all zero")
        m = _normalize(m)
        if abs(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]) < 1e-14:
            raise ValueError("degenerate Moebius map: a*d - b*c = 0")
        object.__setattr__(self, "_matrix", m)
        object.__setattr__(self, "a", complex(m[0, 0]))
        object.__setattr__(self, "b", complex(m[0, 1]))
        object.__setattr__(self, "c", complex(m[1, 0]))
        object.__setattr__(self, "d", complex(m[1, 1]))

    @classmethod
    def from_matrix(cls, m) -> "MoebiusMap":
        m = np.asarray(m, dtype=complex)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @classmethod
    def identity(cls) -> "MoebiusMap":
        return cls(1, 0, 0, 1)

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix.copy()

    @property
    def determinant(self) -> complex:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        """Composition ``self o other``."""
        return MoebiusMap.from_matrix(self._matrix @ other._matrix)

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def __eq__(self, other):
        if not isinstance(other, MoebiusMap):
            return NotImplemented
        return bool(np.allclose(self._matrix, other._matrix, rtol=0, atol=1e-12))

    __hash__ = None

    def is_identity(self, atol=1e-12) -> bool:
        return bool(np.allclose(self._matrix, np.eye(2), rtol=0, atol=atol))

    def __call__(self, zeta):
        """Vectorised evaluation; poles give complex infinities/NaNs (no checks)."""
        z = np.asarray(zeta, dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore"):
            return (self.a * z + self.b) / (self.c * z + self.d)

    def derivative(self, zeta):
        z = np.asarray(zeta, dtype=complex)
        return self.determinant / (self.c * z + self.d) ** 2


@dataclass(frozen=True)
class ReflectionMap:
    circle: Circle

    @property
    def matrix(self) -> np.ndarray:
        z0, r = self.circle.center, self.circle.radius
        return np.array([[z0, r * r - abs(z0) ** 2], [1.0, -z0.conjugate()]], dtype=complex)

    def __call__(self, zeta):
        """Vectorised reflection; the center maps to a complex infinity."""
        z = np.asarray(zeta, dtype=complex)
        z0, r = self.circle.center, self.circle.radius
        with np.errstate(divide="ignore", invalid="ignore"):
            return z0 + r * r / (np.conj(z) - np.conj(z0))


def reflect(T: ReflectionMap, zeta, allow_infinity=False):
    """Reflect a single point in ``T``'s circle.

    The circle center maps to ``INFINITY`` when ``allow_infinity`` is set and
    raises :class:`PoleError` otherwise; ``INFINITY`` maps to the center.
    """
    z0, r = T.circle.center, T.circle.radius
    if zeta is INFINITY:
        return z0
    zeta = complex(zeta)
    w = zeta.conjugate() - z0.conjugate()
    if w == 0:
        if allow_infinity:
            return INFINITY
        raise PoleError(f"reflection evaluated at the circle center {z0}")
    return z0 + r * r / w


def compose_reflection_pair(T_a: ReflectionMap, T_b: ReflectionMap) -> MoebiusMap:
    """Holomorphic composite ``T_a o T_b``."""
    m = T_a.matrix @ np.conj(T_b.matrix)
    try:
        return MoebiusMap.from_matrix(m)
    except ValueError as exc:  # pragma: no cover - cannot happen for genuine circles
        raise ArithmeticError("degenerate composite of reflections") from exc


def apply(M: MoebiusMap, zeta, allow_infinity=False):
    """Evaluate ``M`` at one point of the extended plane."""
    if zeta is INFINITY:
        if M.c == 0:
            return INFINITY
        return M.a / M.c
    zeta = complex(zeta)
    den = M.c * zeta + M.d
    if den == 0:
        if allow_infinity:
            return INFINITY
        raise PoleError(f"Moebius map evaluated at its pole {-M.d / M.c}")
    return (M.a * zeta + M.b) / den


def validate_domain(circles: Sequence[Circle], separation_tol: float = 1e-9) -> CircularDomain:
    """Check that ``circles`` are pairwise exterior-disjoint.

    Circles closer than ``separation_tol`` (gap between them) are treated as
    tangent and rejected.  A :class:`NormalizationNotice` is issued when the
    first circle is not the unit circle at the origin or the second center
    is off the real axis; any valid configuration is still accepted.
    """
    circles = tuple(c if isinstance(c, Circle) else Circle(*c) for c in circles)
    if not circles:
        raise DomainError("empty domain: at least one circle is required")
    for i in range(len(circles)):
        for j in range(i + 1, len(circles)):
            ci, cj = circles[i], circles[j]
            gap = abs(ci.center - cj.center) - ci.radius - cj.radius
            if gap <= separation_tol:
                raise DomainError(
                    f"circles {i} and {j} overlap or touch (gap {gap:.3g})"
                )
    c0 = circles[0]
    normalized = abs(c0.center) < 1e-14 and abs(c0.radius - 1) < 1e-14
    if len(circles) > 1:
        normalized = normalized and abs(circles[1].center.imag) < 1e-14
    if not normalized:
        warnings.warn(
            "circle 0 is not the unit circle at the origin (or circle 1 is off "
            "the real axis); proceeding with the configuration as given",
            NormalizationNotice,
            stacklevel=2,
        )
    return CircularDomain(circles)
