"""Enumeration of the symmetric Schottky group by reduced words.

Every non-identity element is a composition ``T_k1 T_k2 ... T_k2s`` of an
even number of circle reflections with adjacent indices distinct.  Words
are grown two letters at a time from their parents, so each element costs
one 2x2 matrix product.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .geometry import CircularDomain, MoebiusMap, compose_reflection_pair

__all__ = [
    "ConvergenceReport",
    "GroupElement",
    "SchottkyGroup",
    "TruncationTooDeepError",
    "convergence_report",
    "enumerate_group",
    "level_count",
]

DEFAULT_MAX_LEVEL = 4
DEFAULT_ELEMENT_CAP = 10**6


class TruncationTooDeepError(ValueError):
    """Requested truncation would enumerate more elements than allowed."""


@dataclass(frozen=True, eq=False)
class GroupElement:
    map: MoebiusMap
    word: tuple[int, ...]

    @property
    def level(self) -> int:
        return len(self.word) // 2

    def reversed_word(self) -> tuple[int, ...]:
        return self.word[::-1]


def level_count(n: int, s: int) -> int:
    """Number of reduced words of length ``2 s`` over ``n`` letters."""
    if s == 0:
        return 1
    if n < 2:
        return 0
    return n * (n - 1) ** (2 * s - 1)


@dataclass(frozen=True, eq=False)
class SchottkyGroup:
    """Truncated group: identity plus reduced words up to length ``2 max_level``.

    ``elements`` are ordered by level, then lexicographically by word.
    """

    domain: CircularDomain
    elements: tuple[GroupElement, ...]
    max_level: int

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @cached_property
    def coefficients(self) -> np.ndarray:
        """Array of shape ``(len(self), 4)`` with normalised ``a, b, c, d``."""
        return np.array([[e.map.a, e.map.b, e.map.c, e.map.d] for e in self.elements])

    @cached_property
    def index(self) -> dict[tuple[int, ...], int]:
        return {e.word: k for k, e in enumerate(self.elements)}

    @cached_property
    def levels(self) -> np.ndarray:
        return np.array([e.level for e in self.elements], dtype=int)

    def element(self, word) -> GroupElement:
        return self.elements[self.index[tuple(word)]]

    def generator(self, j: int) -> MoebiusMap:
        """``sigma_j = T_j T_0``, available even when ``max_level == 0``."""
        T = self.domain.reflections()
        return compose_reflection_pair(T[j], T[0])

    def orbit(self, zeta, elements=None) -> np.ndarray:
        """Images of ``zeta`` under every element; shape ``(len, *zeta.shape)``."""
        coef = self.coefficients if elements is None else self.coefficients[elements]
        z = np.asarray(zeta, dtype=complex)
        shape = (len(coef),) + (1,) * z.ndim
        a, b, c, d = (coef[:, k].reshape(shape) for k in range(4))
        with np.errstate(divide="ignore", invalid="ignore"):
            return (a * z + b) / (c * z + d)


def _reduce(word):
    out = []
    for k in word:
        if out and out[-1] == k:
            out.pop()
        else:
            out.append(k)
    return tuple(out)


def enumerate_group(
    domain: CircularDomain,
    max_level: int = DEFAULT_MAX_LEVEL,
    element_cap: int = DEFAULT_ELEMENT_CAP,
) -> SchottkyGroup:
    if max_level < 0:
        raise ValueError("max_level must be non-negative")
    n = domain.n
    total = sum(level_count(n, s) for s in range(max_level + 1))
    if total > element_cap:
        raise TruncationTooDeepError(
            f"{total} group elements at max_level={max_level} exceed the cap {element_cap}"
        )
    T = domain.reflections()
    pairs = {
        (a, b): compose_reflection_pair(T[a], T[b])
        for a in range(n)
        for b in range(n)
        if a != b
    }
    elements = [GroupElement(MoebiusMap.identity(), ())]
    frontier = elements[:]
    for _ in range(max_level):
        nxt = []
        for parent in frontier:
            last = parent.word[-1] if parent.word else None
            for (a, b), m in sorted(pairs.items()):
                if a == last:
                    continue
                nxt.append(GroupElement(parent.map @ m, parent.word + (a, b)))
        elements.extend(nxt)
        frontier = nxt
    return SchottkyGroup(domain, tuple(elements), max_level)


def reduce_word(word) -> tuple[int, ...]:
    """Cancel adjacent repeated letters (each reflection is an involution)."""
    return _reduce(word)


@dataclass(frozen=True)
class ConvergenceReport:
    level_sums: tuple[float, ...]
    partial_sums: tuple[float, ...]
    ratios: tuple[float, ...]
    ratio: float | None
    tail_estimate: float
    remainder_estimate: float
    verdict: str

    def to_dict(self) -> dict:
        return {
            "level_sums": list(self.level_sums),
            "partial_sums": list(self.partial_sums),
            "ratios": list(self.ratios),
            "ratio": self.ratio,
            "tail_estimate": self.tail_estimate,
            "remainder_estimate": self.remainder_estimate,
            "verdict": self.verdict,
        }


def convergence_report(group: SchottkyGroup, threshold: float = 0.75) -> ConvergenceReport:
    """Per-level sums of ``|a d - b c| / |c|**2`` over non-identity elements.

    The verdict is ``"converging"`` when the last two level-to-level ratios
    are below ``threshold``, ``"diverging"`` when the last ratio is at least
    one, and ``"inconclusive"`` otherwise.

    ``tail_estimate`` is the sum over the deepest enumerated level.  It is
    the scale of the truncation error in identities that shift words by one
    generator (those move a whole boundary level in or out of the sum).
    ``remainder_estimate`` extrapolates the omitted levels geometrically.
    """
    coef = group.coefficients
    a, b, c, d = coef.T
    levels = group.levels
    nonid = levels > 0
    terms = np.zeros(len(coef))
    terms[nonid] = np.abs(a[nonid] * d[nonid] - b[nonid] * c[nonid]) / np.abs(c[nonid]) ** 2
    sums = tuple(float(terms[levels == s].sum()) for s in range(1, group.max_level + 1))
    partial = tuple(float(x) for x in np.cumsum(sums))
    if group.domain.n == 1:
        return ConvergenceReport(sums, partial, (), 0.0, 0.0, 0.0, "converging")
    ratios = tuple(sums[k] / sums[k - 1] for k in range(1, len(sums)) if sums[k - 1] > 0)
    last = sums[-1] if sums else float("inf")
    if not ratios:
        return ConvergenceReport(sums, partial, (), None, last, float("inf"), "inconclusive")
    q = ratios[-1]
    rem = sums[-1] * q / (1 - q) if q < 1 else float("inf")
    if q >= 1:
        verdict = "diverging"
    elif len(ratios) >= 2 and max(ratios[-2:]) < threshold:
        verdict = "converging"
    elif len(ratios) == 1 and q < threshold:
        verdict = "converging"
    else:
        verdict = "inconclusive"
    return ConvergenceReport(sums, partial, ratios, q, float(last), float(rem), verdict)
