"""Quasiautomorphic analogue of the Cauchy kernel.

The kernel is the truncated orbit sum

    K(zeta, eta) = sum_{w in G} [1/(eta - w(zeta)) - 1/(eta - w(zeta_*))],

whose identity term carries the Cauchy singularity ``1/(eta - zeta)``.
All evaluators broadcast over ``zeta`` and ``eta``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import CircularDomain
from .schottky import SchottkyGroup

__all__ = [
    "KernelContext",
    "NearPoleError",
    "cauchy_kernel",
    "cauchy_kernel_direct_form",
    "chi",
    "default_base_point",
    "kernel_regular_part",
    "reflected_kernel",
]

POLE_TOL = 1e-13


class NearPoleError(ZeroDivisionError):
    """Kernel evaluated at (or within ``POLE_TOL`` of) an orbit point."""


def default_base_point(domain: CircularDomain) -> complex:
    """The origin when it is exterior, else the centroid pushed outside."""
    if domain.is_exterior(0j, margin=1e-12):
        return 0j
    p = complex(np.mean(domain.centers))
    for _ in range(4 * domain.n + 4):
        bad = [c for c in domain.circles if abs(p - c.center) <= 1.25 * c.radius]
        if not bad:
            return p
        c = bad[0]
        u = p - c.center
        u = u / abs(u) if abs(u) > 0 else 1.0
        p = c.center + 1.5 * c.radius * u
    # dense fallback: first exterior point on growing rings
    R = float(np.max(np.abs(domain.centers) + domain.radii))
    for scale in (1.1, 1.5, 2.0, 3.0):
        ring = scale * R * np.exp(2j * np.pi * np.arange(64) / 64)
        ok = domain.is_exterior(ring, margin=0.25 * float(domain.radii.min()))
        if ok.any():
            return complex(ring[np.argmax(ok)])
    raise ValueError("could not find an exterior base point")


@dataclass(frozen=True, eq=False)
class KernelContext:
    group: SchottkyGroup
    base_point: complex

    def __post_init__(self):
        object.__setattr__(self, "base_point", complex(self.base_point))
        if not bool(self.group.domain.is_exterior(self.base_point)):
            raise ValueError("base point must lie outside every circle")

    @classmethod
    def build(cls, group: SchottkyGroup, base_point=None) -> "KernelContext":
        if base_point is None:
            base_point = default_base_point(group.domain)
        return cls(group, base_point)

    @property
    def domain(self) -> CircularDomain:
        return self.group.domain


def _paired_sum(eta, pts, base):
    """sum over the leading axis of 1/(eta - pts) - 1/(eta - base)."""
    d1 = eta - pts
    d2 = eta - base
    if np.any(np.abs(d1) < POLE_TOL) or np.any(np.abs(d2) < POLE_TOL):
        raise NearPoleError("kernel evaluated at an orbit point")
    return (1 / d1 - 1 / d2).sum(axis=0)


def cauchy_kernel(ctx: KernelContext, zeta, eta):
    zeta = np.asarray(zeta, dtype=complex)
    eta = np.asarray(eta, dtype=complex)
    zeta, eta = np.broadcast_arrays(zeta, eta)
    pts = ctx.group.orbit(zeta)
    base = ctx.group.orbit(np.full(zeta.shape, ctx.base_point))
    return _paired_sum(eta, pts, base)


def kernel_regular_part(ctx: KernelContext, zeta, eta):
    """``K(zeta, eta) - 1/(eta - zeta)``, finite as ``eta -> zeta``."""
    zeta = np.asarray(zeta, dtype=complex)
    eta = np.asarray(eta, dtype=complex)
    zeta, eta = np.broadcast_arrays(zeta, eta)
    grp = ctx.group
    rest = np.arange(1, len(grp))
    out = -1 / (eta - ctx.base_point)
    if len(rest):
        pts = grp.orbit(zeta, rest)
        base = grp.orbit(np.full(zeta.shape, ctx.base_point), rest)
        out = out + _paired_sum(eta, pts, base)
    return out


def chi(ctx: KernelContext, j: int, eta):
    """Additive shift ``K(sigma_j(zeta_*), eta)`` for the generator ``sigma_j = T_j T_0``."""
    if not 1 <= j < ctx.domain.n:
        raise IndexError(f"generator index must be in 1..{ctx.domain.n - 1}")
    p = ctx.group.generator(j)(ctx.base_point)
    return cauchy_kernel(ctx, p, eta)


def reflected_kernel(ctx: KernelContext, xi, j: int, eta):
    """``K(T_0(xi), eta)`` for ``xi`` on circle ``j``.

    On circle 0 this is ``K(xi, eta)``.  For ``j >= 1`` the sum runs over the
    truncated group plus ``sigma_j``; the ``sigma_j`` term is written as
    ``1/(eta - xi) - 1/(eta - sigma_j(zeta_*))`` since ``sigma_j T_0 xi = xi``.
    """
    xi = np.asarray(xi, dtype=complex)
    eta = np.asarray(eta, dtype=complex)
    xi, eta = np.broadcast_arrays(xi, eta)
    if j == 0:
        return cauchy_kernel(ctx, xi, eta)
    grp = ctx.group
    gen_word = (j, 0)
    others = np.array([k for k, e in enumerate(grp.elements) if e.word != gen_word], dtype=int)
    T0 = ctx.domain.reflections()[0]
    pts = grp.orbit(T0(xi), others)
    base = grp.orbit(np.full(xi.shape, ctx.base_point), others)
    sj_star = grp.generator(j)(ctx.base_point)
    return _paired_sum(eta, pts, base) + _paired_sum(eta, xi[None], np.full((1,) + xi.shape, sj_star))


def cauchy_kernel_direct_form(ctx: KernelContext, zeta, eta):
    """Orbit-of-``eta`` form: ``sum (1/(s(eta) - zeta) - 1/(s(eta) - zeta_*)) s'(eta)``.

    Equal to :func:`cauchy_kernel` term by term after substituting each
    element by its inverse; kept as an independent cross-check.
    """
    zeta = np.asarray(zeta, dtype=complex)
    eta = np.asarray(eta, dtype=complex)
    zeta, eta = np.broadcast_arrays(zeta, eta)
    coef = ctx.group.coefficients
    shape = (len(coef),) + (1,) * eta.ndim
    a, b, c, d = (coef[:, k].reshape(shape) for k in range(4))
    s_eta = (a * eta + b) / (c * eta + d)
    ds = (a * d - b * c) / (c * eta + d) ** 2
    return ((1 / (s_eta - zeta) - 1 / (s_eta - ctx.base_point)) * ds).sum(axis=0)
