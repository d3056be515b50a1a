"""Brute-force cross-checks for the closed forms used by the engines.

Each oracle recomputes a quantity the slow way (explicit minors, explicit
lattices in a concrete ring of integers, exhaustive block enumeration,
per-cocharacter evaluation) and reports agreement as exact integer equality.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import asdict, dataclass

from .cohomology import cohomology_dims, exterior_power_rank
from .filtration import congruence_shape
from .rootdata import GroupProfile, enumerate_dominant, find_deep_dominant, i0, top_dimension
from .transition import (
    Block,
    TransitionQuery,
    block_fate,
    factor_rank,
    nonvanishing_witness,
    res_is_zero_for_all_z,
)


class OracleCapExceeded(ValueError):
    pass


@dataclass
class OracleReport:
    oracle: str
    instance: str
    closed_form: object
    brute_force: object

    @property
    def agreement(self) -> bool:
        return self.closed_form == self.brute_force

    def to_json(self) -> dict:
        d = asdict(self)
        d["agreement"] = self.agreement
        return d


# -- linear algebra over F_p ------------------------------------------------

def rank_mod_p(rows, p: int) -> int:
    M = [[x % p for x in r] for r in rows]
    if not M:
        return 0
    rank, ncols = 0, len(M[0])
    for col in range(ncols):
        piv = next((r for r in range(rank, len(M)) if M[r][col]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = pow(M[rank][col], -1, p)
        M[rank] = [x * inv % p for x in M[rank]]
        for r in range(len(M)):
            if r != rank and M[r][col]:
                c = M[r][col]
                M[r] = [(x - c * y) % p for x, y in zip(M[r], M[rank])]
        rank += 1
    return rank


def det_mod_p(rows, p: int) -> int:
    M = [[x % p for x in r] for r in rows]
    n, det = len(M), 1
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det = det * M[col][col] % p
        inv = pow(M[col][col], -1, p)
        for r in range(col + 1, n):
            if M[r][col]:
                c = M[r][col] * inv % p
                M[r] = [(x - c * y) % p for x, y in zip(M[r], M[col])]
    return det % p


def compound_matrix(rows, a: int, p: int) -> list[list[int]]:
    """Matrix of the a-th exterior power: all a x a minors mod p."""
    nr, nc = len(rows), len(rows[0]) if rows else 0
    R = list(itertools.combinations(range(nr), a))
    C = list(itertools.combinations(range(nc), a))
    return [[det_mod_p([[rows[i][j] for j in cs] for i in rs], p) for cs in C] for rs in R]


def wedge_rank_oracle(rows, a: int, p: int, cap: int = 6) -> int:
    """Rank over F_p of the explicit a-th exterior power of ``rows``."""
    if len(rows) > cap or (rows and len(rows[0]) > cap):
        raise OracleCapExceeded(f"matrix dimension above cap {cap}")
    if a == 0:
        return 1
    if not rows or a > min(len(rows), len(rows[0])):
        return 0
    return rank_mod_p(compound_matrix(rows, a, p), p)


def wedge_rank_report(rows, a: int, p: int) -> OracleReport:
    r = rank_mod_p(rows, p)
    return OracleReport("wedge_rank", f"{len(rows)}x{len(rows[0]) if rows else 0} over F_{p}, a={a}",
                        exterior_power_rank(r, a), wedge_rank_oracle(rows, a, p))


def random_matrix_mod_p(rng: random.Random, p: int, nrows: int, ncols: int, rank: int) -> list[list[int]]:
    """Random product of ``nrows x rank`` and ``rank x ncols`` factors (rank at most ``rank``)."""
    L = [[rng.randrange(p) for _ in range(rank)] for _ in range(nrows)]
    R = [[rng.randrange(p) for _ in range(ncols)] for _ in range(rank)]
    return [[sum(L[i][t] * R[t][j] for t in range(rank)) % p for j in range(ncols)] for i in range(nrows)]


# -- explicit rings of integers ---------------------------------------------

def ring_of_integers(p: int, e: int, f: int):
    """Multiplication-by-uniformizer matrix on a Z_p-basis of ``W[x]/(g(x))``.

    ``W`` is the unramified extension of degree f with any Z_p-basis ``y_j``;
    ``g(x) = x^e + p*x + p`` (``x + p`` when e = 1) is Eisenstein.  Basis
    ``y_j x^i``, ``i < e``, ``j < f``, indexed ``i*f + j``.
    """
    if e == 1:
        g = [p]
    elif e == 2:
        g = [p, p]
    else:
        g = [p, p] + [0] * (e - 2)
    # x^e = -(g_0 + g_1 x + ...)
    n = e * f
    M = [[0] * n for _ in range(n)]
    for i in range(e):
        for j in range(f):
            col = i * f + j
            if i + 1 < e:
                M[(i + 1) * f + j][col] += 1
            else:
                for t, c in enumerate(g):
                    M[t * f + j][col] -= c
    return M


def frattini_rank_oracle(s: int, s_prime: int, e: int, f: int, delta: int, p: int = 3) -> int:
    """F_p-dimension of the image of ``pi^s' O^delta`` in ``pi^s O^delta / pi^(s+e) O^delta``.

    Coordinates of ``pi^s' v`` in the basis ``pi^s * (basis of O)`` are given by
    ``M^(s'-s)``; the quotient by ``pi^(s+e) O = p pi^s O`` is reduction mod p.
    """
    if s_prime < s:
        raise ValueError("s' must be at least s")
    M = ring_of_integers(p, e, f)
    n = e * f
    P = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(s_prime - s):
        P = [[sum(P[i][t] * M[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
    return delta * rank_mod_p(P, p)


def frattini_rank_report(s, s_prime, e, f, delta, p=3) -> OracleReport:
    return OracleReport("frattini_rank", f"s={s}, s'={s_prime}, e={e}, f={f}, delta={delta}",
                        factor_rank(s, s_prime, delta, e, f), frattini_rank_oracle(s, s_prime, e, f, delta, p))


# -- blocks ----------------------------------------------------------------

_CONVOLUTION_CACHE: dict[tuple[int, ...], list[int]] = {}


def _all_block_weights(dims: tuple[int, ...]) -> list[int]:
    if dims not in _CONVOLUTION_CACHE:
        totals = [0] * (sum(dims) + 1)
        binoms = [[math.comb(d, k) for k in range(d + 1)] for d in dims]
        for idx in itertools.product(*(range(d + 1) for d in dims)):
            w = 1
            for b, k in zip(binoms, idx):
                w *= b[k]
            totals[sum(idx)] += w
        _CONVOLUTION_CACHE[dims] = totals
    return _CONVOLUTION_CACHE[dims]


def block_convolution_oracle(profile: GroupProfile, i: int, cap: int = 20) -> int:
    """Sum over every multi-index of degree i of the product of binomials."""
    d = top_dimension(profile)
    if d > cap:
        raise OracleCapExceeded(f"d={d} above cap {cap}")
    totals = _all_block_weights(profile.factor_dims)
    return totals[i] if 0 <= i < len(totals) else 0


def block_convolution_report(profile: GroupProfile, cap: int = 20) -> list[OracleReport]:
    dims = cohomology_dims(congruence_shape(profile, profile.min_admissible_level()))
    return [OracleReport("block_convolution", f"{_name(profile)} i={i}", dims[i],
                         block_convolution_oracle(profile, i, cap))
            for i in range(top_dimension(profile) + 1)]


# -- per-z evaluation ---------------------------------------------------------

@dataclass
class PerZResult:
    survivor: tuple | None
    box_limited: bool
    evaluated: int


def per_z_resvan_oracle(profile: GroupProfile, i: int, m: int, n: int, n_prime: int,
                        box: int = 4, cap: int = 4) -> PerZResult:
    """Evaluate every block of degree i at every dominant z in the box."""
    if box > cap:
        raise OracleCapExceeded(f"box {box} above cap {cap}")
    dims = profile.factor_dims
    blocks = [Block.from_indices(profile, idx)
              for idx in itertools.product(*(range(d + 1) for d in dims)) if sum(idx) == i]
    evaluated = 0
    for z in enumerate_dominant(profile, box):
        q = TransitionQuery(profile, m, n, n_prime, z, i)
        for blk in blocks:
            evaluated += 1
            if block_fate(q, blk).survives:
                return PerZResult((z, blk), False, evaluated)
    deep = find_deep_dominant(profile, n_prime - m)
    limited = i <= i0(profile) and any(c > box for c in deep.coefficients)
    return PerZResult(None, limited, evaluated)


def per_z_report(profile: GroupProfile, i: int, m: int, n: int, n_prime: int, box: int = 4) -> OracleReport:
    """Symbolic 'some class survives' versus exhaustive per-z search."""
    zero, _ = res_is_zero_for_all_z(profile, i, m, n, n_prime)
    res = per_z_resvan_oracle(profile, i, m, n, n_prime, box)
    found = res.survivor is not None
    if res.box_limited and not found:
        w = nonvanishing_witness(profile, i, m, n, n_prime)
        found = w is not None and w.fate.survives
    return OracleReport("per_z_resvan", f"{_name(profile)} i={i} m={m} n={n} n'={n_prime} box={box}",
                        not zero, found)


def _name(profile: GroupProfile) -> str:
    rs = profile.root_system
    return f"{rs.family}{rs.rank}/p={profile.p},e={profile.e},f={profile.f}"


def oracle_suite(profile: GroupProfile, seed: int = 0, box: int = 4, wedge_samples: int = 50,
                 d_cap: int = 20) -> list[OracleReport]:
    """All oracles that apply to one profile (the block check only below ``d_cap``)."""
    rng = random.Random(seed)
    out: list[OracleReport] = []
    p = profile.p
    for _ in range(wedge_samples):
        nr, nc = rng.randint(1, 6), rng.randint(1, 6)
        rows = random_matrix_mod_p(rng, p, nr, nc, rng.randint(0, min(nr, nc)))
        out.append(wedge_rank_report(rows, rng.randint(0, min(nr, nc)), p))
    e, f = profile.e, profile.f
    for s in range(1, 2 * e + 1):
        for gap in range(0, 2 * e + 1):
            out.append(frattini_rank_report(s, s + gap, e, f, 1, p))
    if top_dimension(profile) <= d_cap:
        out.extend(block_convolution_report(profile, d_cap))
    lo = profile.min_admissible_level()
    deep = find_deep_dominant(profile, 2 * e)
    if all(c <= box for c in deep.coefficients) and top_dimension(profile) <= d_cap:
        for n_prime in (lo + e, lo + 2 * e):
            for i in range(top_dimension(profile) + 1):
                out.append(per_z_report(profile, i, lo, lo, n_prime, box))
    return out
