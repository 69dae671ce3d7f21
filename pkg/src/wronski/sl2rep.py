"""Weight bookkeeping for tensor products of irreducible sl2 modules.

Only dimensions are computed. Weights are kept in plain dicts keyed by
integer weight, which is all the sparsity these products ever need.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from math import prod
from typing import Sequence

from .errors import InternalConsistencyError, InvalidArgumentError

__all__ = [
    "WeightMultiplicity",
    "weight_multiplicities",
    "dim_sing_oracle",
    "tensor_decompose",
]


@dataclass(frozen=True)
class WeightMultiplicity:
    """Weight multiplicities of L_{m_1} x ... x L_{m_n}."""

    m: tuple[int, ...]
    weights: dict[int, int] = field(default_factory=dict)

    @property
    def top(self) -> int:
        return sum(self.m)

    def __getitem__(self, w: int) -> int:
        return self.weights.get(w, 0)

    def dimension(self) -> int:
        return sum(self.weights.values())

    def check(self) -> None:
        """Raise if the symmetry / support / dimension invariants fail."""
        M = self.top
        for w, c in self.weights.items():
            if c <= 0 or abs(w) > M or (M - w) % 2:
                raise InternalConsistencyError(f"bad weight entry {w}: {c}")
            if self[-w] != c:
                raise InternalConsistencyError(f"mult({w}) != mult({-w})")
        if self[M] != 1:
            raise InternalConsistencyError("highest weight must occur once")
        if self.dimension() != prod(x + 1 for x in self.m):
            raise InternalConsistencyError("total dimension mismatch")


def _check_m(m: Sequence[int]) -> tuple[int, ...]:
    m = tuple(int(x) for x in m)
    if any(x < 0 for x in m):
        raise InvalidArgumentError(f"highest weights must be nonnegative, got {m}")
    return m


def weight_multiplicities(m: Sequence[int]) -> WeightMultiplicity:
    m = _check_m(m)
    acc: dict[int, int] = {0: 1}
    for a in m:
        nxt: dict[int, int] = defaultdict(int)
        for w, c in acc.items():
            for s in range(-a, a + 1, 2):
                nxt[w + s] += c
        acc = dict(nxt)
    return WeightMultiplicity(m, dict(sorted(acc.items())))


def dim_sing_oracle(m: Sequence[int], k: int) -> int:
    """mult(M-2k) - mult(M-2k+2): the kernel of the raising operator at weight M-2k."""
    wm = weight_multiplicities(m)
    if k < 0:
        return 0
    w = wm.top - 2 * k
    if w < 0:
        return 0
    diff = wm[w] - wm[w + 2]
    if diff < 0:
        raise InternalConsistencyError(f"negative singular dimension at weight {w} for m={m}")
    return diff


def tensor_decompose(m: Sequence[int]) -> dict[int, int]:
    """Multiplicity of each irreducible L_w in the product, by iterated Clebsch-Gordan."""
    m = _check_m(m)
    acc: dict[int, int] = {0: 1}
    for b in m:
        nxt: dict[int, int] = defaultdict(int)
        for a, c in acc.items():
            for w in range(a + b, abs(a - b) - 1, -2):
                nxt[w] += c
        acc = dict(nxt)
    return dict(sorted(acc.items(), reverse=True))
