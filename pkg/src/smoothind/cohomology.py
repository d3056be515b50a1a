"""Mod-p cohomology of uniform groups with an Iwahori factorization.

Cohomology is the exterior algebra on the dual Frattini quotient, and the
factorization splits it into tensor products of exterior powers, one block per
multi-index ``(a, b, c)``.  Only dimensions are tracked, never cochains.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

from .filtration import FiltrationShape, ShapeError
from .rootdata import GroupProfile, root_label, top_dimension


@dataclass(frozen=True)
class Block:
    a: tuple[int, ...]
    b: int
    c: tuple[int, ...]

    @property
    def degree(self) -> int:
        return sum(self.a) + self.b + sum(self.c)

    @property
    def indices(self) -> tuple[int, ...]:
        return self.a + (self.b,) + self.c

    def is_nonempty(self, profile: GroupProfile) -> bool:
        return all(i <= d for i, d in zip(self.indices, profile.factor_dims))

    def weight(self, profile: GroupProfile) -> int:
        """Dimension of the block: product of binomials."""
        return math.prod(math.comb(d, i) for d, i in zip(profile.factor_dims, self.indices))

    @classmethod
    def from_indices(cls, profile: GroupProfile, indices) -> "Block":
        k = len(profile.neg_roots)
        indices = tuple(indices)
        return cls(indices[:k], indices[k], indices[k + 1:])

    def to_json(self, profile: GroupProfile) -> dict:
        return {
            "a": {root_label(r): x for r, x in zip(profile.neg_roots, self.a)},
            "b": self.b,
            "c": {root_label(r): x for r, x in zip(profile.pos_roots, self.c)},
        }


@dataclass(frozen=True)
class GradedDims:
    dims: tuple[int, ...]

    def __getitem__(self, i: int) -> int:
        return self.dims[i] if 0 <= i < len(self.dims) else 0

    def __len__(self) -> int:
        return len(self.dims)

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    @property
    def total(self) -> int:
        return sum(self.dims)

    def to_json(self) -> list[int]:
        return list(self.dims)


def _poly_mul(p: list[int], q: list[int]) -> list[int]:
    out = [0] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        if x:
            for j, y in enumerate(q):
                out[i + j] += x * y
    return out


def graded_dims_from_factors(factor_dims) -> GradedDims:
    poly = [1]
    for d in factor_dims:
        poly = _poly_mul(poly, [math.comb(d, k) for k in range(d + 1)])
    return GradedDims(tuple(poly))


def cohomology_dims(shape: FiltrationShape) -> GradedDims:
    """``dims[i] = dim H^i``: coefficients of the product of ``(1+x)^dim``."""
    if not shape.is_uniform():
        raise ShapeError(f"cohomology needs a uniform shape, got {shape.to_json()}")
    return graded_dims_from_factors(shape.profile.factor_dims)


def _compositions(total: int, caps: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    if not caps:
        if total == 0:
            yield ()
        return
    rest = sum(caps[1:])
    for x in range(max(0, total - rest), min(caps[0], total) + 1):
        for tail in _compositions(total - x, caps[1:]):
            yield (x,) + tail


def blocks_of_degree(profile: GroupProfile, i: int) -> Iterator[Block]:
    """Every nonempty block of degree ``i``, each exactly once."""
    d = top_dimension(profile)
    if not 0 <= i <= d:
        raise ValueError(f"degree {i} outside 0..{d}")
    for idx in _compositions(i, profile.factor_dims):
        yield Block.from_indices(profile, idx)


def exterior_power_rank(r: int, a: int) -> int:
    """Rank of the a-th exterior power of a linear map of rank r."""
    if r < 0 or a < 0:
        raise ValueError("rank and degree must be non-negative")
    return math.comb(r, a)
