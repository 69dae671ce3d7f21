"""Cohomology of the Grassmannian of 2-planes in C^{d+1}, in the Schubert basis.

Classes sigma_{a1,a2} are indexed by two-row partitions inside a 2 x (d-1)
box. Only products with special classes sigma_q are implemented (the Pieri
rule); that is all the intersection number of special classes requires.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .combinatorics import ProblemSpec
from .errors import InternalConsistencyError, InvalidArgumentError

__all__ = [
    "BoxPartition",
    "CohomologyElement",
    "special_class",
    "pieri_multiply",
    "pieri_strips",
    "intersection_number",
]


@dataclass(frozen=True, order=True)
class BoxPartition:
    a1: int
    a2: int
    box_d: int

    def __post_init__(self) -> None:
        if self.box_d < 1:
            raise InvalidArgumentError(f"box_d must be positive, got {self.box_d}")
        if not 0 <= self.a2 <= self.a1 <= self.box_d - 1:
            raise InvalidArgumentError(
                f"({self.a1},{self.a2}) does not fit in the 2x{self.box_d - 1} box"
            )

    @property
    def codim(self) -> int:
        return self.a1 + self.a2

    def is_top(self) -> bool:
        return self.a1 == self.a2 == self.box_d - 1


@dataclass(frozen=True)
class CohomologyElement:
    """Integer combination of Schubert classes in one Grassmannian."""

    box_d: int
    terms: dict[BoxPartition, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {}
        for p, c in self.terms.items():
            if p.box_d != self.box_d:
                raise InvalidArgumentError(f"{p} does not live in box_d={self.box_d}")
            if c:
                clean[p] = c
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def from_pairs(cls, box_d: int, pairs: dict[tuple[int, int], int]) -> "CohomologyElement":
        return cls(box_d, {BoxPartition(a1, a2, box_d): c for (a1, a2), c in pairs.items()})

    def as_pairs(self) -> dict[tuple[int, int], int]:
        return {(p.a1, p.a2): c for p, c in self.terms.items()}

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, a1: int, a2: int) -> int:
        return self.terms.get(BoxPartition(a1, a2, self.box_d), 0)

    def __add__(self, other: "CohomologyElement") -> "CohomologyElement":
        if other.box_d != self.box_d:
            raise InvalidArgumentError("cannot add classes from different Grassmannians")
        acc = dict(self.terms)
        for p, c in other.terms.items():
            acc[p] = acc.get(p, 0) + c
        return CohomologyElement(self.box_d, acc)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CohomologyElement):
            return NotImplemented
        return self.box_d == other.box_d and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.box_d, tuple(self.terms.items())))

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*s{p.a1},{p.a2}" for p, c in self.terms.items()) or "0"
        return f"CohomologyElement(d={self.box_d}: {body})"


def special_class(q: int, d: int) -> CohomologyElement:
    if not 0 <= q <= d - 1:
        raise InvalidArgumentError(f"sigma_{q} does not exist for d={d} (need 0 <= q <= {d - 1})")
    return CohomologyElement(d, {BoxPartition(q, 0, d): 1})


def pieri_strips(a1: int, a2: int, q: int, d: int) -> Iterator[tuple[int, int]]:
    """Shapes (c1, c2) obtained from (a1, a2) by adding a horizontal q-strip in the box."""
    total = a1 + a2 + q
    for c2 in range(a2, a1 + 1):
        c1 = total - c2
        if a1 <= c1 <= d - 1 and c1 >= c2:
            yield c1, c2


def pieri_multiply(x: CohomologyElement, q: int) -> CohomologyElement:
    """x * sigma_q. Products beyond the top degree come out as zero."""
    d = x.box_d
    if not 0 <= q <= d - 1:
        raise InvalidArgumentError(f"sigma_{q} does not exist for d={d}")
    acc: dict[BoxPartition, int] = {}
    for p, c in x.terms.items():
        for c1, c2 in pieri_strips(p.a1, p.a2, q, d):
            key = BoxPartition(c1, c2, d)
            acc[key] = acc.get(key, 0) + c
    return CohomologyElement(d, acc)


def product_of_specials(qs: Iterable[int], d: int) -> CohomologyElement:
    acc = special_class(0, d)
    for q in qs:
        acc = pieri_multiply(acc, q)
    return acc


def intersection_number(spec: ProblemSpec) -> int:
    """sigma_{m_1} ... sigma_{m_n} sigma_{2d-2-M}, read off the top class."""
    d = spec.d
    factors = list(spec.m) + [spec.m_inf]
    if any(not 0 <= q <= d - 1 for q in factors):
        return 0
    prod_ = product_of_specials(factors, d)
    top = BoxPartition(d - 1, d - 1, d)
    stray = [p for p in prod_.terms if p != top]
    if stray:
        raise InternalConsistencyError(f"top-degree product has non-top terms {stray}")
    coeff = prod_.terms.get(top, 0)
    if coeff < 0:
        raise InternalConsistencyError(f"negative intersection number {coeff}")
    return coeff
