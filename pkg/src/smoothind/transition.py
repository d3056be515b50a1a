"""Restriction maps between cohomology of congruence-subgroup intersections.

For ``z = mu(pi)`` dominant, the restriction

    H^i(K_m ∩ z K_n z^{-1}) -> H^i(K_m ∩ z K_{n'} z^{-1})

is block diagonal.  On each Iwahori factor the H^1 map is dual to the map of
Frattini quotients induced by inclusion, whose rank is read off from the two
factor levels; on a block it is the tensor product of exterior powers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cohomology import Block, exterior_power_rank
from .filtration import intersection_shape, p_power
from .rootdata import (
    Cocharacter,
    GroupProfile,
    ProfileError,
    enumerate_dominant,
    find_deep_dominant,
    i0,
    root_label,
    top_dimension,
)


class QueryError(ValueError):
    pass


def factor_rank(level_src: int, level_tgt: int, dim_F: int, e: int, f: int) -> int:
    """Rank of ``U'/U'^p -> U/U^p`` for ``U' = pi^t O^dim_F ⊆ U = pi^s O^dim_F``.

    ``U/U^p = pi^s O / pi^(s+e) O`` has F_p-dimension ``dim_F*e*f`` and the image
    of ``pi^t O`` is ``pi^t O / pi^(s+e) O`` when ``t <= s+e``.
    """
    if level_tgt < level_src:
        raise QueryError(f"target level {level_tgt} is shallower than source level {level_src}")
    return dim_F * f * min(max(level_src + e - level_tgt, 0), e)


@dataclass(frozen=True)
class TransitionQuery:
    profile: GroupProfile
    m: int
    n: int
    n_prime: int
    z: Cocharacter
    i: int

    def __post_init__(self):
        prof = self.profile
        try:
            prof.check_level(self.m, "m")
        except ProfileError as exc:
            raise QueryError(str(exc)) from exc
        if not self.m <= self.n <= self.n_prime:
            raise QueryError(f"need m <= n <= n' (got {self.m}, {self.n}, {self.n_prime})")
        if len(self.z.coefficients) != prof.cocharacter_length:
            raise QueryError("cocharacter has the wrong length")
        if not prof.is_dominant(self.z):
            raise QueryError(f"z={self.z.to_json()} is not dominant")
        if self.i < 0:
            raise QueryError("degree must be non-negative")

    @property
    def in_standard_regime(self) -> bool:
        """All levels admissible and a strict step ``n < n'``."""
        p = self.profile
        return p.is_admissible_level(self.n) and p.is_admissible_level(self.n_prime) and self.n < self.n_prime


@dataclass(frozen=True)
class BlockFate:
    block: Block
    source_levels: tuple[int, ...]
    target_levels: tuple[int, ...]
    factor_ranks: tuple[int, ...]
    exterior_ranks: tuple[int, ...]

    @property
    def survives(self) -> bool:
        return all(idx <= r for idx, r in zip(self.block.indices, self.factor_ranks))

    @property
    def rank(self) -> int:
        """Rank of the restriction map on this block."""
        out = 1
        for r in self.exterior_ranks:
            out *= r
        return out

    def to_json(self) -> dict:
        return {
            "source_levels": list(self.source_levels),
            "target_levels": list(self.target_levels),
            "factor_ranks": list(self.factor_ranks),
            "survives": self.survives,
        }


def transition_levels(profile: GroupProfile, m: int, n: int, n_prime: int, z: Cocharacter):
    src = intersection_shape(profile, m, n, z).levels
    tgt = intersection_shape(profile, m, n_prime, z).levels
    return src, tgt


def transition_factor_ranks(
    profile: GroupProfile, m: int, n: int, n_prime: int, z: Cocharacter
) -> tuple[int, ...]:
    src, tgt = transition_levels(profile, m, n, n_prime, z)
    return tuple(
        factor_rank(s, t, d, profile.e, profile.f)
        for s, t, d in zip(src, tgt, profile.factor_dims_F)
    )


def block_fate(q: TransitionQuery, block: Block) -> BlockFate:
    if block.degree != q.i:
        raise QueryError(f"block has degree {block.degree}, query asks for {q.i}")
    src, tgt = transition_levels(q.profile, q.m, q.n, q.n_prime, q.z)
    ranks = tuple(
        factor_rank(s, t, d, q.profile.e, q.profile.f)
        for s, t, d in zip(src, tgt, q.profile.factor_dims_F)
    )
    ext = tuple(exterior_power_rank(r, idx) for r, idx in zip(ranks, block.indices))
    return BlockFate(block, src, tgt, ranks, ext)


def greedy_block(profile: GroupProfile, i: int) -> Block | None:
    """Fill the reduced negative roots, in listing order, up to capacity.

    Returns None when ``i`` exceeds the total negative capacity ``i0``.
    """
    if i < 0 or i > i0(profile):
        return None
    a = []
    left = i
    for alpha in profile.neg_roots:
        take = min(profile.root_dim(alpha), left)
        a.append(take)
        left -= take
    return Block(tuple(a), 0, (0,) * len(profile.pos_roots))


@dataclass(frozen=True)
class Witness:
    z: Cocharacter
    block: Block
    fate: BlockFate
    n: int
    n_prime: int

    def to_json(self, profile: GroupProfile) -> dict:
        return {
            "n": self.n,
            "n_prime": self.n_prime,
            "z": self.z.to_json(),
            "block": self.block.to_json(profile),
            "factor_ranks": list(self.fate.factor_ranks),
            "survives": self.fate.survives,
        }


def nonvanishing_witness(profile: GroupProfile, i: int, m: int, n: int, n_prime: int) -> Witness | None:
    """A dominant ``z`` and a block whose restriction is injective, if ``i <= i0``."""
    block = greedy_block(profile, i)
    if block is None:
        return None
    z = find_deep_dominant(profile, n_prime - m)
    fate = block_fate(TransitionQuery(profile, m, n, n_prime, z, i), block)
    if not fate.survives:
        raise AssertionError(f"greedy block of degree {i} does not survive at z={z.to_json()}")
    return Witness(z, block, fate, n, n_prime)


def _symbolic_kill_ranks(profile: GroupProfile, n: int, n_prime: int) -> list[dict]:
    """Ranks of the center and positive-root factor maps, independent of z.

    For dominant z the center sits at levels n -> n' and a positive root at
    n + k -> n' + k with ``k = <mu, alpha> >= 0``; the rank only sees the gap.
    """
    e, f = profile.e, profile.f
    out = [{
        "factor": "center",
        "source_level": "n",
        "target_level": "n'",
        "rank": factor_rank(n, n_prime, profile.torus_rank, e, f),
    }]
    for alpha in profile.pos_roots:
        out.append({
            "factor": root_label(alpha),
            "source_level": "n+<mu,alpha>",
            "target_level": "n'+<mu,alpha>",
            "rank": factor_rank(n, n_prime, profile.root_dim_F(alpha), e, f),
        })
    return out


def res_is_zero_for_all_z(
    profile: GroupProfile, i: int, m: int, n: int, n_prime: int
) -> tuple[bool, dict]:
    """Decide whether the degree-i restriction vanishes for every dominant z.

    Requires ``n' >= n + e``.  Blocks with b > 0 or some c_alpha > 0 die through
    a center or positive-root factor; blocks with b = 0 and c = 0 exist only in
    degrees up to i0, and there a deep z keeps one alive.
    """
    profile.check_level(m, "m")
    if not m <= n < n_prime:
        raise QueryError(f"need m <= n < n' (got {m}, {n}, {n_prime})")
    if n_prime < n + profile.e:
        raise QueryError(
            f"n' - n = {n_prime - n} < e = {profile.e}: outside the symbolic regime, "
            "evaluate per z instead"
        )
    if i < 0:
        raise QueryError("degree must be non-negative")
    d = top_dimension(profile)
    cap = i0(profile)
    if i <= cap:
        w = nonvanishing_witness(profile, i, m, n, n_prime)
        return False, {"argument": "surviving block", "degree": i, "i0": cap,
                       "witness": w.to_json(profile)}
    kills = [k for k in _symbolic_kill_ranks(profile, n, n_prime)
             if k["factor"] != "center" or profile.center_dim]
    if any(k["rank"] for k in kills):
        raise AssertionError("center or positive-root factor map is not zero")
    cert = {
        "argument": "vacuous" if i > d else "level-shift",
        "degree": i,
        "i0": cap,
        "d": d,
        "gap": n_prime - n,
        "negative_capacity": cap,
        "killing_factors": kills,
    }
    return True, cert


@dataclass
class TableEntry:
    i: int
    nonvanishing: bool
    witnesses: list[Witness] = field(default_factory=list)
    certificate: dict | None = None


@dataclass
class VanishingTable:
    profile: GroupProfile
    m: int
    n: int
    entries: list[TableEntry]

    @property
    def i0(self) -> int:
        return i0(self.profile)

    @property
    def d(self) -> int:
        return top_dimension(self.profile)

    @property
    def nonvanishing(self) -> list[bool]:
        return [e.nonvanishing for e in self.entries]

    def to_json(self, degree_key: str = "i", flag_key: str = "nonvanishing") -> dict:
        rows = []
        for entry in self.entries:
            row = {degree_key: entry.i, flag_key: entry.nonvanishing}
            if entry.nonvanishing:
                first = entry.witnesses[0]
                row["witness"] = {
                    "z": entry.witnesses[-1].z.to_json(),
                    "block": first.block.to_json(self.profile),
                    "ladder": [w.to_json(self.profile) for w in entry.witnesses],
                }
            else:
                row["certificate"] = entry.certificate
            rows.append(row)
        return {
            "profile": self.profile.to_json(),
            "m": self.m,
            "i0": self.i0,
            "d": self.d,
            "table": rows,
        }


def vanishing_table(profile: GroupProfile, m: int, ladder: int = 3) -> VanishingTable:
    """Degrees 0..d+1 of ``R^i Ind_{K_m}(k)``: nonzero exactly when a class survives.

    Nonvanishing degrees carry a witness for every rung ``n -> n'`` of the
    ladder ``n, n+e, ..., n+(ladder-1)e`` with ``n = m``; vanishing degrees carry
    the symbolic kill certificate for the first step, which covers all deeper
    ``n'`` since factor ranks only drop as the target deepens.
    """
    profile.check_level(m, "m")
    if ladder < 2:
        raise QueryError("ladder needs at least two rungs")
    n = m
    rungs = [n + k * profile.e for k in range(1, ladder)]
    entries = []
    for i in range(top_dimension(profile) + 2):
        zero, cert = res_is_zero_for_all_z(profile, i, m, n, rungs[0])
        if zero:
            entries.append(TableEntry(i, False, certificate=cert))
            continue
        witnesses = [nonvanishing_witness(profile, i, m, n, npr) for npr in rungs]
        entries.append(TableEntry(i, True, witnesses=witnesses))
    return VanishingTable(profile, m, n, entries)


def ext_table(profile: GroupProfile, m: int, ladder: int = 3) -> dict:
    """The same table read as ``Ext^i(ind_{K_m} k, k)`` degrees."""
    return vanishing_table(profile, m, ladder).to_json(degree_key="ext_degree", flag_key="ext_nonzero")


def diagonal_vanishing(profile: GroupProfile, i: int, n: int, box: int = 4) -> bool:
    """Whether the degree-i transition ``K_n -> K_{n+e}`` on the diagonal colimit is zero.

    For each sampled dominant z the intersection ``K_n ∩ z K_n z^{-1}`` must map
    by the p-power map exactly onto the shape at level n+e, so each factor's
    Frattini map vanishes; a degree-i block survives only if ``i`` is at most
    the sum of factor ranks.
    """
    profile.check_level(n, "n")
    if i < 0:
        raise QueryError("degree must be non-negative")
    e = profile.e
    for z in enumerate_dominant(profile, box):
        here = intersection_shape(profile, n, n, z)
        there = intersection_shape(profile, n + e, n + e, z)
        if p_power(here) != there:
            raise AssertionError(f"p-power of the level-{n} shape differs from level {n + e} at z={z.to_json()}")
        ranks = [factor_rank(a, b, d, e, profile.f)
                 for a, b, d in zip(here.levels, there.levels, profile.factor_dims_F)]
        if i <= sum(ranks):
            return False
    return True


def strict_inclusion_check(
    profile: GroupProfile, m: int, n: int, n_prime: int, box: int = 4
) -> tuple[bool, dict]:
    """Whether ``K_m ∩ z K_{n'} z^{-1}`` is strictly smaller than at level n for all z.

    The center factor sits at levels n -> n' for every dominant z, so a torus of
    positive dimension certifies strictness uniformly; sampled z are checked
    factor by factor as well.
    """
    for name, lev in (("m", m), ("n", n), ("n'", n_prime)):
        profile.check_level(lev, name)
    if not m <= n < n_prime:
        raise QueryError(f"need m <= n < n' (got {m}, {n}, {n_prime})")
    dims = profile.factor_dims
    labels = profile.factor_labels
    for z in enumerate_dominant(profile, box):
        src, tgt = transition_levels(profile, m, n, n_prime, z)
        if not any(t > s and d > 0 for s, t, d in zip(src, tgt, dims)):
            return False, {"counterexample_z": z.to_json()}
    if profile.center_dim > 0:
        cert = {"factor": "center", "source_level": max(m, n), "target_level": max(m, n_prime),
                "dim": profile.center_dim}
        return True, cert
    if profile.pos_roots:
        alpha = profile.pos_roots[0]
        return True, {"factor": root_label(alpha), "source_level": "n+<mu,alpha>",
                      "target_level": "n'+<mu,alpha>", "dim": profile.root_dim(alpha)}
    return False, {"reason": "no factor of positive dimension", "labels": list(labels)}
