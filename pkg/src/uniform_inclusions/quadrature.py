"""Quadrature on circles.

Nodes are ``theta_j = 2 pi j / (2N + 1)``, ``j = -N..N``.  Regular contour
integrals use the periodic trapezoid rule; principal-value Cauchy integrals
use the discrete conjugate-function rule, which is exact for trigonometric
densities of degree ``<= N``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .geometry import Circle

__all__ = [
    "CircleGrid",
    "OffContourError",
    "QuadratureSampleError",
    "cauchy_transform",
    "integrate_regular",
    "integrate_singular",
    "reduce_angle",
    "singular_weights",
]

DEFAULT_N = 64


class QuadratureSampleError(ValueError):
    """A density sample at a quadrature node is not finite."""


class OffContourError(ValueError):
    """A point that should lie on the grid's circle does not."""


@dataclass(frozen=True, eq=False)
class CircleGrid:
    circle: Circle
    N: int = DEFAULT_N

    def __post_init__(self):
        if int(self.N) < 1:
            raise ValueError("N must be a positive integer")
        object.__setattr__(self, "N", int(self.N))

    @property
    def size(self) -> int:
        return 2 * self.N + 1

    @cached_property
    def theta(self) -> np.ndarray:
        return 2 * np.pi * np.arange(-self.N, self.N + 1) / self.size

    @cached_property
    def nodes(self) -> np.ndarray:
        return self.circle.point(self.theta)

    @cached_property
    def weights(self) -> np.ndarray:
        """Trapezoid weights for ``(1/2pi) * contour integral of f d eta``."""
        return 1j * (self.nodes - self.circle.center) / self.size

    def angle_of(self, xi, tol=1e-10) -> np.ndarray:
        """Angle of on-circle points, reduced to ``(-pi, pi]``."""
        xi = np.asarray(xi, dtype=complex)
        u = (xi - self.circle.center) / self.circle.radius
        if np.any(np.abs(np.abs(u) - 1) > tol):
            raise OffContourError("point is not on the grid circle")
        return reduce_angle(np.angle(u))

    def node_index(self, theta, atol=1e-12):
        """Index of the node at ``theta`` or -1 when ``theta`` is off-grid."""
        theta = np.asarray(theta, dtype=float)
        k = np.rint(theta * self.size / (2 * np.pi)).astype(int)
        hit = np.abs(reduce_angle(theta - 2 * np.pi * k / self.size)) < atol
        k = (k + self.N) % self.size
        return np.where(hit, k, -1)


def reduce_angle(theta):
    """Map angles into ``(-pi, pi]``."""
    t = np.asarray(theta, dtype=float)
    r = np.mod(t + np.pi, 2 * np.pi) - np.pi
    return np.where(r == -np.pi, np.pi, r)


def _samples(density, grid: CircleGrid) -> np.ndarray:
    if callable(density):
        vals = np.asarray(density(grid.nodes), dtype=complex)
        vals = np.broadcast_to(vals, grid.nodes.shape)
    else:
        vals = np.asarray(density, dtype=complex)
        if vals.shape[-1] != grid.size:
            raise ValueError("density sample array does not match the grid size")
    if not np.all(np.isfinite(vals)):
        raise QuadratureSampleError("density is not finite at some quadrature node")
    return vals


def integrate_regular(density, grid: CircleGrid) -> complex:
    """Trapezoid approximation of the closed contour integral of ``density``.

    ``density`` is either a callable evaluated at the grid nodes or an array
    of node samples.  Returns the integral itself (no ``1/2pi`` factor).
    """
    vals = _samples(density, grid)
    return 2 * np.pi * (vals @ grid.weights)


def singular_weights(grid: CircleGrid, theta) -> np.ndarray:
    """Weights ``W`` with ``PV (1/2pi) int phi/(eta - xi) d eta ~= W @ phi``.

    Rows correspond to the evaluation angles ``theta``; when an angle
    coincides with a node the bracket takes its limit value 1 there.
    """
    theta = reduce_angle(np.atleast_1d(theta))
    N = grid.N
    delta = theta[:, None] - grid.theta[None, :]
    s = np.sin(delta / 2)
    on_node = np.abs(s) < 1e-14
    safe = np.where(on_node, 1.0, s)
    conj = 2 * np.sin(N * delta / 2) * np.sin((N + 1) * delta / 2) / safe
    bracket = 1 + 1j * np.where(on_node, 0.0, conj)
    return 1j / (2 * grid.size) * bracket


def integrate_singular(density, grid: CircleGrid, xi, tol=1e-10):
    """Principal value of ``(1/2pi) * integral of density(eta)/(eta - xi) d eta``.

    ``xi`` (scalar or array) must lie on the grid's circle.
    """
    vals = _samples(density, grid)
    xi_arr = np.asarray(xi, dtype=complex)
    theta = grid.angle_of(xi_arr.ravel(), tol=tol)
    out = singular_weights(grid, theta) @ vals
    return complex(out[0]) if xi_arr.ndim == 0 else out.reshape(xi_arr.shape)


def fourier_coefficients(values: np.ndarray, grid: CircleGrid) -> np.ndarray:
    """Coefficients ``c_k``, ``k = -N..N``, of the trigonometric interpolant."""
    k = np.arange(-grid.N, grid.N + 1)
    E = np.exp(-1j * np.outer(k, grid.theta))
    return (E @ np.asarray(values, dtype=complex)) / grid.size


def cauchy_transform(values, grid: CircleGrid, points, on_tol=1e-13) -> np.ndarray:
    """``(1/2pi) * integral of h(eta)/(eta - p) d eta`` for the interpolant of h.

    Evaluated through the Laurent expansion of the trigonometric interpolant,
    which stays accurate arbitrarily close to the circle.  Points on the
    circle (within ``on_tol``) receive the principal value.
    """
    coef = fourier_coefficients(values, grid)
    N = grid.N
    pos = coef[N:]  # k = 0..N
    neg = coef[:N][::-1]  # k = -1..-N
    p = np.asarray(points, dtype=complex)
    u = (p - grid.circle.center) / grid.circle.radius
    au = np.abs(u)
    out = np.zeros(p.shape, dtype=complex)
    inside = au < 1 - on_tol
    outside = au > 1 + on_tol
    on = ~(inside | outside)
    if inside.any():
        z = u[inside]
        acc = np.zeros(z.shape, dtype=complex)
        for ck in pos[::-1]:
            acc = acc * z + ck
        out[inside] = 1j * acc
    if outside.any():
        w = 1 / u[outside]
        acc = np.zeros(w.shape, dtype=complex)
        for ck in neg[::-1]:
            acc = acc * w + ck
        out[outside] = -1j * acc * w
    if on.any():
        z = u[on] / np.abs(u[on])
        kk = np.arange(-N, N + 1)
        modes = z[..., None] ** kk
        sgn = np.sign(kk)
        sgn[N] = 1
        out[on] = 0.5j * (modes * (coef * sgn)).sum(axis=-1)
    return out
