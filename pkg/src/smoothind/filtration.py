"""Iwahori-factorized congruence subgroups as integer level vectors.

A shape records one filtration level per Iwahori factor, in the order
(reduced negative roots, center, reduced positive roots).  Root factors are
modeled as lattices ``pi^s O^delta`` inside a vector group, so the p-power map
raises every level by ``e`` and conjugation by ``mu(pi)`` shifts a root level
by ``<mu, alpha>`` while fixing the center.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rootdata import Cocharacter, GroupProfile, pairing


class ShapeError(ValueError):
    pass


@dataclass(frozen=True)
class FiltrationShape:
    profile: GroupProfile
    neg_levels: tuple[int, ...]
    center_level: int
    pos_levels: tuple[int, ...]

    def __post_init__(self):
        if len(self.neg_levels) != len(self.profile.neg_roots):
            raise ShapeError("wrong number of negative-root levels")
        if len(self.pos_levels) != len(self.profile.pos_roots):
            raise ShapeError("wrong number of positive-root levels")

    @property
    def levels(self) -> tuple[int, ...]:
        return self.neg_levels + (self.center_level,) + self.pos_levels

    def level_of(self, alpha) -> int:
        alpha = tuple(alpha)
        if alpha in self.profile.neg_roots:
            return self.neg_levels[self.profile.neg_roots.index(alpha)]
        if alpha in self.profile.pos_roots:
            return self.pos_levels[self.profile.pos_roots.index(alpha)]
        raise KeyError(alpha)

    def is_admissible(self) -> bool:
        """Every level lies in e*N (and exceeds e when p = 2)."""
        return all(self.profile.is_admissible_level(s) for s in self.levels)

    def is_uniform(self) -> bool:
        """Shapes of the groups ``K_m ∩ z K_n z^{-1}`` with m, n admissible.

        The center level must be admissible; root levels only need to reach the
        smallest admissible level, since lattices in a vector group are uniform
        at any level and conjugation moves root levels off e*N.
        """
        floor = self.profile.min_admissible_level()
        return self.profile.is_admissible_level(self.center_level) and all(
            s >= floor for s in self.neg_levels + self.pos_levels
        )

    def to_json(self) -> list[int]:
        return list(self.levels)

    @classmethod
    def from_levels(cls, profile: GroupProfile, levels) -> "FiltrationShape":
        levels = tuple(int(s) for s in levels)
        k = len(profile.neg_roots)
        if len(levels) != k + 1 + len(profile.pos_roots):
            raise ShapeError("level vector has the wrong length")
        return cls(profile, levels[:k], levels[k], levels[k + 1:])


def congruence_shape(profile: GroupProfile, m: int) -> FiltrationShape:
    """Constant shape at level ``m``: the principal congruence subgroup ``K_m``."""
    if m < 1:
        raise ShapeError("m must be at least 1")
    return FiltrationShape(
        profile,
        (m,) * len(profile.neg_roots),
        m,
        (m,) * len(profile.pos_roots),
    )


def conjugate(shape: FiltrationShape, z: Cocharacter) -> FiltrationShape:
    """Shape of ``z K z^{-1}`` for ``z = mu(pi)``."""
    prof = shape.profile
    if len(z.coefficients) != prof.cocharacter_length:
        raise ShapeError("cocharacter has the wrong length for this profile")
    return FiltrationShape(
        prof,
        tuple(s + pairing(z, a) for s, a in zip(shape.neg_levels, prof.neg_roots)),
        shape.center_level,
        tuple(s + pairing(z, a) for s, a in zip(shape.pos_levels, prof.pos_roots)),
    )


def intersect(s1: FiltrationShape, s2: FiltrationShape) -> FiltrationShape:
    if s1.profile != s2.profile:
        raise ShapeError("cannot intersect shapes of different profiles")
    return FiltrationShape(
        s1.profile,
        tuple(map(max, s1.neg_levels, s2.neg_levels)),
        max(s1.center_level, s2.center_level),
        tuple(map(max, s1.pos_levels, s2.pos_levels)),
    )


def intersection_shape(profile: GroupProfile, m: int, n: int, z: Cocharacter) -> FiltrationShape:
    """Shape of ``K_m ∩ z K_n z^{-1}``."""
    return intersect(congruence_shape(profile, m), conjugate(congruence_shape(profile, n), z))


def _require_uniform(shape: FiltrationShape) -> None:
    if not shape.is_uniform():
        raise ShapeError(
            f"shape {shape.to_json()} is not uniform for p={shape.profile.p}, e={shape.profile.e}"
        )


def p_power(shape: FiltrationShape) -> FiltrationShape:
    """Subgroup of p-th powers: every level moves down by ``e``."""
    _require_uniform(shape)
    e = shape.profile.e
    return FiltrationShape(
        shape.profile,
        tuple(s + e for s in shape.neg_levels),
        shape.center_level + e,
        tuple(s + e for s in shape.pos_levels),
    )


def frattini_dims(shape: FiltrationShape) -> tuple[int, ...]:
    """F_p-dimension of each factor's Frattini quotient (level independent)."""
    _require_uniform(shape)
    return shape.profile.factor_dims
