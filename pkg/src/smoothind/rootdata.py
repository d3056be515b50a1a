"""Root systems, group profiles and cocharacters for split reductive groups.

Roots are stored as integer coefficient vectors over the simple roots.
Cocharacters are written in the basis of fundamental coweights followed by
central coordinates, so ``pairing(mu, alpha)`` is a plain dot product with the
simple-root coefficients of ``alpha`` and dominance is a sign condition on the
non-central coordinates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

Root = tuple[int, ...]

COCHARACTER_BASIS = "fundamental_coweights"

SUPPORTED_FAMILIES = ("A", "B", "C", "D", "G", "BC", "T")


class UnsupportedRootSystem(ValueError):
    pass


class ProfileError(ValueError):
    pass


def _cartan_matrix(family: str, rank: int) -> list[list[int]]:
    """Cartan matrix with ``C[j][i] = <alpha_j^vee, alpha_i>``."""
    C = [[2 if i == j else 0 for i in range(rank)] for j in range(rank)]
    if family == "A":
        for i in range(rank - 1):
            C[i][i + 1] = C[i + 1][i] = -1
    elif family in ("B", "C"):
        for i in range(rank - 1):
            C[i][i + 1] = C[i + 1][i] = -1
        # last simple root short for B, long for C
        if family == "B":
            C[rank - 1][rank - 2] = -2
        else:
            C[rank - 2][rank - 1] = -2
    elif family == "D":
        for i in range(rank - 2):
            C[i][i + 1] = C[i + 1][i] = -1
        C[rank - 3][rank - 1] = C[rank - 1][rank - 3] = -1
    elif family == "G":
        # alpha_1 short, alpha_2 long
        C[0][1] = -3
        C[1][0] = -1
    return C


def _positive_roots_from_cartan(C: list[list[int]]) -> list[Root]:
    """Closure of the simple roots under root strings.

    For a positive root ``beta`` and simple ``alpha_j`` let ``r`` be the
    largest integer with ``beta - r*alpha_j`` a root; then ``beta + alpha_j`` is
    a root iff ``r - <alpha_j^vee, beta> > 0``.
    """
    rank = len(C)
    simple = [tuple(1 if i == j else 0 for i in range(rank)) for j in range(rank)]
    roots: set[Root] = set(simple)
    layer = list(simple)
    while layer:
        nxt: list[Root] = []
        for beta in layer:
            for j in range(rank):
                pair = sum(beta[i] * C[j][i] for i in range(rank))
                r = 0
                down = list(beta)
                while True:
                    down[j] -= 1
                    if tuple(down) in roots:
                        r += 1
                    else:
                        break
                if r - pair > 0:
                    up = list(beta)
                    up[j] += 1
                    up_t = tuple(up)
                    if up_t not in roots:
                        roots.add(up_t)
                        nxt.append(up_t)
        layer = nxt
    return sorted(roots)


@dataclass(frozen=True)
class RootSystem:
    family: str
    rank: int
    positive_roots: tuple[Root, ...]

    @cached_property
    def roots(self) -> tuple[Root, ...]:
        neg = tuple(negate(a) for a in self.positive_roots)
        return tuple(sorted(self.positive_roots + neg))

    def is_root(self, alpha: Root) -> bool:
        return alpha in self.positive_roots or negate(alpha) in self.positive_roots

    def is_reduced(self, alpha: Root) -> bool:
        if any(c % 2 for c in alpha):
            return True
        return not self.is_root(tuple(c // 2 for c in alpha))

    @cached_property
    def reduced_positive(self) -> tuple[Root, ...]:
        return tuple(a for a in self.positive_roots if self.is_reduced(a))

    @cached_property
    def reduced_negative(self) -> tuple[Root, ...]:
        return tuple(sorted(negate(a) for a in self.reduced_positive))

    def double(self, alpha: Root) -> Root | None:
        two = tuple(2 * c for c in alpha)
        return two if self.is_root(two) else None

    @property
    def cartan_pairings(self) -> dict[int, dict[Root, int]]:
        """``<omega_j^vee, alpha>`` for every basis coweight and every root."""
        return {j: {a: a[j] for a in self.roots} for j in range(self.rank)}

    @property
    def cocharacter_basis(self) -> str:
        return COCHARACTER_BASIS


def negate(alpha: Iterable[int]) -> Root:
    return tuple(-c for c in alpha)


def root_label(alpha: Root) -> str:
    return ",".join(str(c) for c in alpha)


def build_root_system(family: str, rank: int) -> RootSystem:
    """Positive roots for a supported family.

    ``T`` with rank 0 is the empty root system (a torus or a discrete group).
    ``BC`` is only available in rank 1, ``G`` only in rank 2.
    """
    family = family.upper()
    if family not in SUPPORTED_FAMILIES:
        raise UnsupportedRootSystem(f"unsupported family {family!r}")
    if family == "T":
        if rank != 0:
            raise UnsupportedRootSystem("family T has rank 0")
        return RootSystem("T", 0, ())
    if rank < 1:
        raise UnsupportedRootSystem(f"{family}_{rank}: rank must be positive")
    if family == "BC":
        if rank != 1:
            raise UnsupportedRootSystem("only BC_1 is supported")
        return RootSystem("BC", 1, ((1,), (2,)))
    if family == "G" and rank != 2:
        raise UnsupportedRootSystem("G only exists in rank 2")
    if family in ("B", "C") and rank < 2:
        raise UnsupportedRootSystem(f"{family}_1 is A_1; use family A")
    if family == "D" and rank < 3:
        raise UnsupportedRootSystem("D_n needs n >= 3")
    return RootSystem(family, rank, tuple(_positive_roots_from_cartan(_cartan_matrix(family, rank))))


@dataclass(frozen=True)
class Cocharacter:
    coefficients: tuple[int, ...]

    def __add__(self, other: "Cocharacter") -> "Cocharacter":
        return Cocharacter(tuple(a + b for a, b in zip(self.coefficients, other.coefficients, strict=True)))

    def scaled(self, c: int) -> "Cocharacter":
        return Cocharacter(tuple(c * a for a in self.coefficients))

    def to_json(self) -> list[int]:
        return list(self.coefficients)


def pairing(mu: Cocharacter, alpha: Root) -> int:
    """``<mu, alpha>``; central coordinates pair trivially with every root."""
    return sum(m * a for m, a in zip(mu.coefficients, alpha))


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


@dataclass(frozen=True)
class GroupProfile:
    """Split reductive group over a finite extension of Q_p with data (p, e, f).

    ``delta`` maps positive roots (reduced ones and doubled ones in BC_1) to
    the F-dimension of the root group; missing entries default to 1.
    """

    root_system: RootSystem
    p: int
    e: int = 1
    f: int = 1
    torus_rank: int = -1
    delta: Mapping[Root, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.torus_rank < 0:
            object.__setattr__(self, "torus_rank", self.root_system.rank)
        if not _is_prime(self.p):
            raise ProfileError(f"p={self.p} is not prime")
        if self.e < 1 or self.f < 1:
            raise ProfileError("e and f must be positive integers")
        if self.torus_rank < self.root_system.rank:
            raise ProfileError("torus_rank must be at least the semisimple rank")
        full = {a: 1 for a in self.root_system.positive_roots}
        for a, d in dict(self.delta).items():
            a = tuple(a)
            if a not in full:
                raise ProfileError(f"delta key {root_label(a)} is not a positive root")
            if d < 1:
                raise ProfileError(f"delta[{root_label(a)}] must be positive")
            full[a] = d
        object.__setattr__(self, "delta", full)

    @property
    def degree(self) -> int:
        """``[F:Q_p] = e*f``."""
        return self.e * self.f

    @property
    def cocharacter_length(self) -> int:
        return self.torus_rank

    def _positive(self, alpha: Root) -> Root:
        return alpha if alpha in self.root_system.positive_roots else negate(alpha)

    def root_dim_F(self, alpha: Root) -> int:
        """``delta_alpha + delta_2alpha`` for a reduced root of either sign."""
        a = self._positive(alpha)
        two = self.root_system.double(a)
        return self.delta[a] + (self.delta[two] if two is not None else 0)

    def root_dim(self, alpha: Root) -> int:
        """``dim_{Q_p}`` of the root factor at ``alpha``."""
        return self.root_dim_F(alpha) * self.degree

    @cached_property
    def center_dim(self) -> int:
        return self.torus_rank * self.degree

    @cached_property
    def neg_roots(self) -> tuple[Root, ...]:
        return self.root_system.reduced_negative

    @cached_property
    def pos_roots(self) -> tuple[Root, ...]:
        return self.root_system.reduced_positive

    @cached_property
    def factor_labels(self) -> tuple[str, ...]:
        return (
            tuple(root_label(a) for a in self.neg_roots)
            + ("center",)
            + tuple(root_label(a) for a in self.pos_roots)
        )

    @cached_property
    def factor_dims(self) -> tuple[int, ...]:
        """Q_p-dimensions of the Iwahori factors, ordered (negative, center, positive)."""
        return (
            tuple(self.root_dim(a) for a in self.neg_roots)
            + (self.center_dim,)
            + tuple(self.root_dim(a) for a in self.pos_roots)
        )

    @cached_property
    def factor_dims_F(self) -> tuple[int, ...]:
        return (
            tuple(self.root_dim_F(a) for a in self.neg_roots)
            + (self.torus_rank,)
            + tuple(self.root_dim_F(a) for a in self.pos_roots)
        )

    def is_dominant(self, mu: Cocharacter) -> bool:
        return all(pairing(mu, a) >= 0 for a in self.root_system.positive_roots)

    def min_admissible_level(self) -> int:
        return 2 * self.e if self.p == 2 else self.e

    def is_admissible_level(self, m: int) -> bool:
        """``m`` in e*N, and ``m > e`` when ``p == 2``."""
        return m >= 1 and m % self.e == 0 and (self.p != 2 or m > self.e)

    def check_level(self, m: int, name: str = "m") -> None:
        if not self.is_admissible_level(m):
            raise ProfileError(
                f"{name}={m} is inadmissible for p={self.p}, e={self.e}: "
                "need m ∈ eℕ, and m > e if p = 2"
            )

    def to_json(self) -> dict:
        rs = self.root_system
        nondefault = {root_label(a): d for a, d in self.delta.items() if d != 1}
        return {
            "family": rs.family,
            "rank": rs.rank,
            "p": self.p,
            "e": self.e,
            "f": self.f,
            "delta": nondefault,
            "torus_rank": self.torus_rank,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "GroupProfile":
        if not isinstance(data, Mapping):
            raise ProfileError("profile must be a JSON object")
        for key in ("family", "rank", "p"):
            if key not in data:
                raise ProfileError(f"profile is missing field {key!r}")
        for key in ("rank", "p", "e", "f", "torus_rank"):
            if key in data and (not isinstance(data[key], int) or isinstance(data[key], bool)):
                raise ProfileError(f"profile field {key!r} must be an integer")
        try:
            rs = build_root_system(str(data["family"]), data["rank"])
        except UnsupportedRootSystem as exc:
            raise ProfileError(str(exc)) from exc
        raw_delta = data.get("delta") or {}
        if not isinstance(raw_delta, Mapping):
            raise ProfileError("profile field 'delta' must be an object")
        delta = {}
        for key, val in raw_delta.items():
            try:
                delta[tuple(int(c) for c in str(key).split(","))] = int(val)
            except ValueError as exc:
                raise ProfileError(f"bad delta key {key!r}") from exc
        return cls(
            root_system=rs,
            p=data["p"],
            e=data.get("e", 1),
            f=data.get("f", 1),
            torus_rank=data.get("torus_rank", rs.rank),
            delta=delta,
        )


def make_profile(family: str, rank: int, p: int, e: int = 1, f: int = 1, **kw) -> GroupProfile:
    return GroupProfile(build_root_system(family, rank), p, e, f, **kw)


def i0(profile: GroupProfile) -> int:
    """Sum of the Q_p-dimensions of the reduced negative root groups."""
    return sum(profile.root_dim(a) for a in profile.neg_roots)


def top_dimension(profile: GroupProfile) -> int:
    """``d = 2*i0 + dim_{Q_p} Z``, the Q_p-dimension of the group."""
    return 2 * i0(profile) + profile.center_dim


def rho_coweight(profile: GroupProfile) -> Cocharacter:
    """Sum of the fundamental coweights (central coordinates zero)."""
    r = profile.root_system.rank
    return Cocharacter((1,) * r + (0,) * (profile.cocharacter_length - r))


def find_deep_dominant(profile: GroupProfile, threshold: int) -> Cocharacter:
    """Smallest multiple ``c * rho^vee`` pairing to at least ``threshold`` with all of Phi^+."""
    if threshold < 0:
        raise ValueError("threshold must be non-negative")
    rho = rho_coweight(profile)
    pos = profile.root_system.positive_roots
    if not pos or threshold == 0:
        return rho.scaled(0)
    # every positive root pairs to its height >= 1 with rho^vee
    c = -(-threshold // min(pairing(rho, a) for a in pos))
    mu = rho.scaled(c)
    assert all(pairing(mu, a) >= threshold for a in pos)
    return mu


def enumerate_dominant(profile: GroupProfile, box_bound: int) -> list[Cocharacter]:
    """Dominant cocharacters with every coordinate in ``[0, box_bound]``."""
    if box_bound < 0:
        raise ValueError("box_bound must be non-negative")
    n = profile.cocharacter_length
    out = []
    for coords in itertools.product(range(box_bound + 1), repeat=n):
        mu = Cocharacter(coords)
        if profile.is_dominant(mu):
            out.append(mu)
    return out
