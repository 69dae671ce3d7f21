"""Closed-form counts: the class-count formula, singular-vector dimensions,
Catalan numbers and the L_0-multiplicity generating function.

Everything here is exact integer arithmetic.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations, product
from math import comb, prod
from typing import Iterator, Sequence

from .errors import InternalConsistencyError, InvalidArgumentError, UnsupportedCaseError

__all__ = [
    "ProblemSpec",
    "binomial",
    "sharp_formula",
    "count_classes",
    "dim_sing_formula",
    "catalan",
    "genfun_coefficients",
    "SUBSET_ENUMERATION_LIMIT",
]

# Above this many multiplicities, subset sums are grouped by value.
SUBSET_ENUMERATION_LIMIT = 20


@dataclass(frozen=True)
class ProblemSpec:
    """Degree ``d`` and critical multiplicities ``m`` of a counting instance.

    ``z`` (the critical points themselves) is optional; counts do not depend
    on it for generic positions.
    """

    d: int
    m: tuple[int, ...]
    z: tuple[complex, ...] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "m", tuple(int(x) for x in self.m))
        if self.d < 1:
            raise InvalidArgumentError(f"degree must be positive, got d={self.d}")
        if len(self.m) < 1:
            raise InvalidArgumentError("at least one critical point is required")
        if any(x < 1 for x in self.m):
            raise InvalidArgumentError(f"multiplicities must be positive, got {self.m}")
        if self.z is not None:
            z = tuple(complex(x) for x in self.z)
            if len(z) != len(self.m):
                raise InvalidArgumentError("z and m must have the same length")
            object.__setattr__(self, "z", z)

    @property
    def n(self) -> int:
        return len(self.m)

    @property
    def M(self) -> int:
        return sum(self.m)

    @property
    def k(self) -> int:
        """Order of the sought planes, i.e. the number of roots of f."""
        return self.M + 1 - self.d

    @property
    def m_inf(self) -> int:
        """Multiplicity at infinity."""
        return 2 * self.d - 2 - self.M

    @property
    def admissible(self) -> bool:
        return self.d - 1 <= self.M <= 2 * self.d - 2 and all(x <= self.d - 1 for x in self.m)

    @property
    def boundary(self) -> bool:
        """True for the M = d-1 case where the answer is 1 for every z."""
        return self.admissible and self.M == self.d - 1

    def vanishing_reason(self) -> str | None:
        """Why the count is zero for every z, or None if it need not be."""
        if any(x > self.d - 1 for x in self.m):
            return f"a multiplicity exceeds d-1={self.d - 1}"
        if self.M > 2 * self.d - 2:
            return f"M={self.M} exceeds 2d-2={2 * self.d - 2} (Riemann-Hurwitz)"
        if self.M < self.d - 1:
            return f"M={self.M} is below d-1={self.d - 1}"
        return None


def binomial(a: int, b: int) -> int:
    """C(a, b) with the convention C(a, b) = 0 whenever a < b."""
    if b < 0:
        raise InvalidArgumentError(f"binomial lower index must be >= 0, got {b}")
    if a < b:
        return 0
    return comb(a, b)


def _subset_sums(m: Sequence[int]) -> Iterator[tuple[int, int, int]]:
    """Yield (q, sum of chosen m, number of subsets) over all subsets of m.

    Small inputs enumerate subsets directly; large ones group equal values and
    weight each choice by a product of binomials.
    """
    n = len(m)
    if n <= SUBSET_ENUMERATION_LIMIT:
        for q in range(n + 1):
            for sub in combinations(m, q):
                yield q, sum(sub), 1
        return
    groups = sorted(Counter(m).items())
    for choice in product(*(range(c + 1) for _, c in groups)):
        q = sum(choice)
        s = sum(v * c for (v, _), c in zip(groups, choice))
        w = prod(comb(cnt, c) for (_, cnt), c in zip(groups, choice))
        yield q, s, w


def sharp_formula(spec: ProblemSpec) -> int:
    """Number of classes of degree-d rational functions with critical
    multiplicities ``spec.m`` at generic points (n >= 2 only).

    Specs that no degree-d map can realise return 0 directly: the signed sum
    is only meaningful inside the admissible range and goes negative outside
    it, e.g. -1 for d=2, m=(2,2).
    """
    n, d = spec.n, spec.d
    if n < 2:
        raise UnsupportedCaseError("the closed formula needs n >= 2; use count_classes for n = 1")
    if spec.vanishing_reason() is not None:
        return 0
    total = 0
    for q, s, w in _subset_sums(spec.m):
        if q == 0:
            continue
        sign = -1 if (n - q) % 2 else 1
        total += sign * w * binomial(s + q - d - 1, n - 2)
    if total < 0:
        raise InternalConsistencyError(f"negative class count {total} for {spec}")
    return total


def count_classes(spec: ProblemSpec) -> int:
    """Class count for any n; a single critical point gives 1 iff m_1 = d-1."""
    if spec.n == 1:
        return int(spec.m[0] == spec.d - 1)
    return sharp_formula(spec)


def dim_sing_formula(m: Sequence[int], k: int) -> int:
    """Dimension of the singular vectors of weight M-2k in L_{m_1} x ... x L_{m_n}.

    Returns 0 for k outside [0, M/2], where the alternating sum itself would
    not count anything.
    """
    m = tuple(m)
    n = len(m)
    if n < 2:
        raise UnsupportedCaseError("inclusion-exclusion count needs n >= 2")
    if any(x < 0 for x in m):
        raise InvalidArgumentError(f"multiplicities must be nonnegative, got {m}")
    if k < 0 or 2 * k > sum(m):
        return 0
    total = 0
    for q, s, w in _subset_sums(m):
        sign = -1 if q % 2 else 1
        total += sign * w * binomial(k + n - 2 - s - q, n - 2)
    if total < 0:
        raise InternalConsistencyError(f"negative dimension {total} for m={m}, k={k}")
    return total


def catalan(d: int) -> int:
    """C_d = C(2d-2, d-1) / d, so C_1 = C_2 = 1, C_3 = 2."""
    if d < 1:
        raise InvalidArgumentError(f"catalan index must be positive, got {d}")
    q, r = divmod(comb(2 * d - 2, d - 1), d)
    if r:
        raise InternalConsistencyError(f"C(2d-2, d-1) not divisible by d={d}")
    return q


def genfun_coefficients(order: int) -> list[int]:
    """Coefficients M_1..M_order of (1 - 2t^2 - sqrt(1 - 4t^2)) / (2t^2).

    M_k is the multiplicity of the trivial module in the k-th tensor power of
    the standard one: zero for odd k and C_{j+1} for k = 2j.
    """
    if order < 1:
        raise InvalidArgumentError(f"order must be positive, got {order}")
    return [0 if k % 2 else catalan(k // 2 + 1) for k in range(1, order + 1)]
