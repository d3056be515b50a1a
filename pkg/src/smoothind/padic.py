"""Bounded-precision p-adic matrices, exp/log, and uniformity checks.

A :class:`PadicMatrix` holds integer representatives of entries of a matrix
over Z_p known modulo ``p**prec``.  Every operation returns a matrix whose
``prec`` is a guaranteed absolute precision.  The exp and log series are
evaluated at an internal guard precision so that the division by ``n!`` (or
``n``) does not eat digits; the only operations that lose precision are
explicit divisions by powers of p.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


class ConvergenceError(ValueError):
    pass


class PrecisionError(ArithmeticError):
    pass


def vp(x: int, p: int) -> int | None:
    """p-adic valuation of a nonzero integer; None for zero."""
    if x == 0:
        return None
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def vp_factorial(n: int, p: int) -> int:
    v, q = 0, p
    while q <= n:
        v += n // q
        q *= p
    return v


def wp(p: int) -> int:
    """The power governing the powerful condition: p, or 4 when p = 2."""
    return 4 if p == 2 else p


def min_level(p: int) -> int:
    """Smallest valuation of ``X`` for which exp/log are inverse homeomorphisms."""
    return 2 if p == 2 else 1


@dataclass(frozen=True)
class PadicMatrix:
    p: int
    prec: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.prec < 0:
            raise PrecisionError("negative precision")
        mod = self.p**self.prec
        object.__setattr__(self, "rows", tuple(tuple(x % mod for x in r) for r in self.rows))

    @classmethod
    def from_rows(cls, p: int, prec: int, rows: Sequence[Sequence[int]]) -> "PadicMatrix":
        return cls(p, prec, tuple(tuple(int(x) for x in r) for r in rows))

    @classmethod
    def identity(cls, p: int, size: int, prec: int) -> "PadicMatrix":
        return cls(p, prec, tuple(tuple(int(i == j) for j in range(size)) for i in range(size)))

    @classmethod
    def zero(cls, p: int, size: int, prec: int) -> "PadicMatrix":
        return cls(p, prec, tuple((0,) * size for _ in range(size)))

    @property
    def size(self) -> int:
        return len(self.rows)

    def with_prec(self, prec: int) -> "PadicMatrix":
        return PadicMatrix(self.p, min(prec, self.prec), self.rows)

    def valuation(self) -> int:
        """Minimum entry valuation, capped at ``prec`` (zero matrices report ``prec``)."""
        vals = [vp(x, self.p) for r in self.rows for x in r]
        return min([v for v in vals if v is not None] + [self.prec])

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def _check(self, other: "PadicMatrix") -> None:
        if self.p != other.p or self.size != other.size:
            raise ValueError("matrix shape or prime mismatch")

    def __add__(self, other: "PadicMatrix") -> "PadicMatrix":
        self._check(other)
        return PadicMatrix(self.p, min(self.prec, other.prec),
                           tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __sub__(self, other: "PadicMatrix") -> "PadicMatrix":
        self._check(other)
        return PadicMatrix(self.p, min(self.prec, other.prec),
                           tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __matmul__(self, other: "PadicMatrix") -> "PadicMatrix":
        self._check(other)
        return PadicMatrix(self.p, min(self.prec, other.prec), _matmul(self.rows, other.rows))

    def scale(self, c: int) -> "PadicMatrix":
        """Multiply by an integer scalar (precision is not increased)."""
        return PadicMatrix(self.p, self.prec, tuple(tuple(c * x for x in r) for r in self.rows))

    def divide_p_power(self, k: int) -> "PadicMatrix":
        """Exact division by ``p**k``; costs ``k`` digits of precision."""
        if k == 0:
            return self
        if self.valuation() < k:
            raise PrecisionError(f"entries are not divisible by p^{k}")
        q = self.p**k
        return PadicMatrix(self.p, self.prec - k, tuple(tuple(x // q for x in r) for r in self.rows))

    def minus_identity(self) -> "PadicMatrix":
        return self - PadicMatrix.identity(self.p, self.size, self.prec)

    def __pow__(self, k: int) -> "PadicMatrix":
        out = PadicMatrix.identity(self.p, self.size, self.prec)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


def _matmul(A, B, mod: int | None = None):
    cols = list(zip(*B))
    if mod is None:
        return tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in A)
    return tuple(tuple(sum(a * b for a, b in zip(r, c)) % mod for c in cols) for r in A)


def inverse(M: PadicMatrix) -> PadicMatrix:
    """Inverse in GL_n(Z_p) by Gauss-Jordan elimination with unit pivots."""
    p, n, mod = M.p, M.size, M.p**M.prec
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(M.rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] % p), None)
        if piv is None:
            raise ZeroDivisionError("matrix is not invertible over Z_p")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = pow(aug[col][col], -1, mod)
        aug[col] = [x * inv % mod for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                c = aug[r][col]
                aug[r] = [(x - c * y) % mod for x, y in zip(aug[r], aug[col])]
    return PadicMatrix(p, M.prec, tuple(tuple(r[n:]) for r in aug))


def exp_matrix(X: PadicMatrix) -> PadicMatrix:
    """``sum X^n / n!`` for ``val(X) >= 2`` (p = 2) or ``>= 1`` (p odd).

    With ``v = val(X)`` the n-th term has valuation at least
    ``n*v - (n-1)/(p-1)``; the series is cut where that bound reaches the input
    precision, and powers are formed ``v_p(t!)`` digits beyond it so the
    division by ``n!`` stays exact.
    """
    p, N = X.p, X.prec
    if X.is_zero():
        return PadicMatrix.identity(p, X.size, N)
    v = X.valuation()
    if v < min_level(p):
        raise ConvergenceError(f"exp needs valuation >= {min_level(p)}, got {v}")
    # smallest t with (t+1)v - t/(p-1) >= N
    t = 0
    while ((t + 1) * v * (p - 1) - t) < N * (p - 1):
        t += 1
    guard = vp_factorial(t, p)
    work = N + guard
    mod = p**work
    power = PadicMatrix.identity(p, X.size, work).rows
    total = [list(r) for r in power]
    certified = N
    fact = 1
    for n in range(1, t + 1):
        power = _matmul(power, X.rows, mod)
        fact *= n
        k = vp(fact, p)
        unit_inv = pow(fact // p**k, -1, mod)
        q = p**k
        term_prec = min(N + (n - 1) * v, work) - k
        certified = min(certified, term_prec)
        for i, row in enumerate(power):
            for j, x in enumerate(row):
                if x % q:
                    raise PrecisionError("power not divisible by p^v_p(n!)")
                total[i][j] += (x // q) * unit_inv
    # first omitted term n = t+1
    tail = -((-((t + 1) * v * (p - 1) - t)) // (p - 1))
    certified = min(certified, tail)
    if certified <= 0:
        raise PrecisionError("exp: precision exhausted")
    return PadicMatrix(p, certified, tuple(tuple(r) for r in total))


def _floor_log(n: int, p: int) -> int:
    k = 0
    while p ** (k + 1) <= n:
        k += 1
    return k


def log_matrix(u: PadicMatrix) -> PadicMatrix:
    """``sum (-1)^(n+1) (u-1)^n / n`` for ``u - 1`` of valuation at least the exp bound."""
    p, N = u.p, u.prec
    Y = u.minus_identity()
    if Y.is_zero():
        return PadicMatrix.zero(p, u.size, N)
    v = Y.valuation()
    if v < min_level(p):
        raise ConvergenceError(f"log needs val(u-1) >= {min_level(p)}, got {v}")
    # n*v - floor(log_p n) is non-decreasing for v >= 1
    t = 1
    while (t + 1) * v - _floor_log(t + 1, p) < N:
        t += 1
    guard = _floor_log(t, p)
    work = N + guard
    mod = p**work
    power = PadicMatrix.identity(p, u.size, work).rows
    total = [[0] * u.size for _ in range(u.size)]
    certified = N
    for n in range(1, t + 1):
        power = _matmul(power, Y.rows, mod)
        k = vp(n, p)
        q = p**k
        coef = pow(n // q, -1, mod) * (1 if n % 2 else -1)
        certified = min(certified, min(N + (n - 1) * v, work) - k)
        for i, row in enumerate(power):
            for j, x in enumerate(row):
                if x % q:
                    raise PrecisionError("power not divisible by p^v_p(n)")
                total[i][j] += (x // q) * coef
    certified = min(certified, (t + 1) * v - _floor_log(t + 1, p))
    if certified <= 0:
        raise PrecisionError("log: precision exhausted")
    return PadicMatrix(p, certified, tuple(tuple(r) for r in total))


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a numeric check at a certified precision.

    ``residual`` is the valuation of the discrepancy, ``None`` when it vanishes
    at the certified precision.
    """

    passed: bool
    precision: int
    residual: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.passed


def compare(A: PadicMatrix, B: PadicMatrix, floor: int = 0) -> CheckResult:
    prec = min(A.prec, B.prec)
    diff = (A - B).with_prec(prec)
    if not diff.is_zero():
        return CheckResult(False, prec, diff.valuation(), "residual nonzero")
    if prec < floor:
        return CheckResult(False, prec, None, f"certified precision {prec} below floor {floor}")
    return CheckResult(True, prec)


@dataclass(frozen=True)
class Conjugator:
    """A matrix ``a`` in GL_n(Q_p) with ``a^{-1} = p^{-k} B`` for integral ``A, B``.

    Scalars cancel under conjugation, so ``a`` is rescaled to have integral
    entries with unit content before ``B`` is formed.
    """

    p: int
    A: tuple[tuple[int, ...], ...]
    B: tuple[tuple[Fraction, ...], ...]
    k: int

    @classmethod
    def from_rows(cls, p: int, rows) -> "Conjugator":
        a = [[Fraction(x) for x in r] for r in rows]
        n = len(a)
        lcm = 1
        for r in a:
            for x in r:
                lcm = lcm * x.denominator // _gcd(lcm, x.denominator)
        A = [[int(x * lcm) for x in r] for r in a]
        inv = _fraction_inverse(A)
        k = max(max(0, -_qvp(x, p)) for r in inv for x in r if x != 0)
        B = tuple(tuple(x * p**k for x in r) for r in inv)
        return cls(p, tuple(tuple(r) for r in A), B, k)

    def A_at(self, prec: int) -> PadicMatrix:
        return PadicMatrix.from_rows(self.p, prec, self.A)

    def B_at(self, prec: int) -> PadicMatrix:
        mod = self.p**prec
        rows = [[(x.numerator * pow(x.denominator, -1, mod)) % mod for x in r] for r in self.B]
        return PadicMatrix.from_rows(self.p, prec, rows)

    @property
    def is_identity(self) -> bool:
        return self.k == 0 and all(self.A[i][j] == int(i == j) for i in range(len(self.A)) for j in range(len(self.A)))

    def conj_inv(self, X: PadicMatrix) -> PadicMatrix:
        """``a^{-1} X a``; costs ``k`` digits."""
        return (self.B_at(X.prec) @ X @ self.A_at(X.prec)).divide_p_power(self.k)

    def conj(self, X: PadicMatrix) -> PadicMatrix:
        """``a X a^{-1}``; costs ``k`` digits."""
        return (self.A_at(X.prec) @ X @ self.B_at(X.prec)).divide_p_power(self.k)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _qvp(x: Fraction, p: int) -> int:
    return vp(x.numerator, p) - (vp(x.denominator, p) or 0)


def _fraction_inverse(A) -> list[list[Fraction]]:
    n = len(A)
    aug = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("conjugator is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        c = aug[col][col]
        aug[col] = [x / c for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                c = aug[r][col]
                aug[r] = [x - c * y for x, y in zip(aug[r], aug[col])]
    return [r[n:] for r in aug]


def conjugation_log_identity(a: Conjugator, u: PadicMatrix, floor: int = 0) -> CheckResult:
    """Compare ``log(a^{-1} u a)`` with ``a^{-1} log(u) a``."""
    w = a.conj_inv(u)
    lhs = log_matrix(w)
    rhs = a.conj_inv(log_matrix(u))
    return compare(lhs, rhs, floor)


def commutator(x: PadicMatrix, y: PadicMatrix) -> PadicMatrix:
    return x @ y @ inverse(x) @ inverse(y)


def in_congruence(g: PadicMatrix, level: int) -> bool:
    """``val(g - 1) >= level``; undecidable (False) when ``prec < level``."""
    return g.prec >= level and g.minus_identity().valuation() >= level


@dataclass(frozen=True)
class PowerRoot:
    kappa: PadicMatrix
    result: CheckResult


def extract_wp_root(c: PadicMatrix, floor: int = 0) -> PowerRoot | CheckResult:
    """``kappa = exp(log(c) / wp)`` together with the check ``kappa^wp == c``.

    Returns a failed :class:`CheckResult` if ``log(c)`` is not in ``wp * A_0``.
    """
    p = c.p
    w = wp(p)
    k = vp(w, p)
    L = log_matrix(c)
    if not L.is_zero() and L.valuation() < k + min_level(p):
        return CheckResult(False, L.prec, L.valuation(),
                           "log of commutator not in wp*A_0: counterexample candidate")
    kappa = exp_matrix(L.divide_p_power(k))
    return PowerRoot(kappa, compare(kappa**w, c, floor))


def commutator_power_check(x: PadicMatrix, y: PadicMatrix, level: int, floor: int = 0) -> CheckResult:
    """``[x, y]`` is the wp-th power of an element of the level-``level`` subgroup."""
    if level < min_level(x.p):
        raise ConvergenceError(f"level {level} below {min_level(x.p)}")
    if not (in_congruence(x, level) and in_congruence(y, level)):
        raise ValueError("x and y must lie in the congruence subgroup")
    root = extract_wp_root(commutator(x, y), floor)
    if isinstance(root, CheckResult):
        return root
    if not root.result:
        return root.result
    if not in_congruence(root.kappa, level):
        return CheckResult(False, root.result.precision, None, "root leaves the subgroup")
    return root.result


@dataclass(frozen=True)
class CongruenceLevelSpec:
    """``ker(GL_size(Z_p) -> GL_size(Z/p^level))``."""

    size: int
    p: int
    level: int

    def contains(self, g: PadicMatrix) -> bool:
        return g.size == self.size and in_congruence(g, self.level)

    def sample(self, rng: random.Random, prec: int) -> PadicMatrix:
        return sample_at_levels(rng, self.p, prec, [[self.level] * self.size for _ in range(self.size)])


def sample_at_levels(rng: random.Random, p: int, prec: int, levels) -> PadicMatrix:
    """``1 + X`` with ``X[i][j]`` uniform among multiples of ``p**levels[i][j]`` mod ``p**prec``."""
    n = len(levels)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            lev = levels[i][j]
            x = rng.randrange(p ** max(prec - lev, 0)) * p**lev if lev < prec else 0
            row.append(x + int(i == j))
        rows.append(row)
    return PadicMatrix.from_rows(p, prec, rows)


def random_matrix_at_level(rng: random.Random, p: int, size: int, prec: int, level: int) -> PadicMatrix:
    return sample_at_levels(rng, p, prec, [[level] * size for _ in range(size)]).minus_identity()


def lower_p_series_check(spec: CongruenceLevelSpec, samples: int, seed: int = 0, prec: int = 12,
                         floor: int = 0) -> dict:
    """p-th powers of level-m elements reach level m+1, and every level-(m+1) element is one.

    For each sample: ``g^p`` of a random ``g`` at level m has level >= m+1, and
    for a random ``h`` at level m+1 the root ``exp(log(h)/p)`` lies at level m
    with ``root^p == h``.
    """
    p, m = spec.p, spec.level
    if m < min_level(p):
        raise ConvergenceError(f"level {m} inadmissible for p={p}: need m >= 1, and m > 1 if p = 2")
    rng = random.Random(seed)
    up = CongruenceLevelSpec(spec.size, p, m + 1)
    stats = _Stats()
    for _ in range(samples):
        g = spec.sample(rng, prec)
        gp = g**p
        stats.add(CheckResult(up.contains(gp), gp.prec, None, "" if up.contains(gp) else "g^p not at level m+1"), prec)
        h = up.sample(rng, prec)
        root = exp_matrix(log_matrix(h).divide_p_power(1))
        res = compare(root**p, h, floor)
        if res and not spec.contains(root):
            res = CheckResult(False, res.precision, None, "p-th root not at level m")
        stats.add(res, prec)
    return stats.report()


def intersection_levels(Kspec: CongruenceLevelSpec, Kpspec: CongruenceLevelSpec, a: Conjugator):
    """Per-entry valuation floors that guarantee membership in ``a^{-1} K' a ∩ K``."""
    n, m, mp = Kspec.size, Kspec.level, Kpspec.level
    diag = all(a.A[i][j] == 0 for i in range(n) for j in range(n) if i != j)
    if diag:
        ks = [vp(a.A[i][i], a.p) for i in range(n)]
        return [[max(m, mp) if i == j else max(m, mp - ks[i] + ks[j]) for j in range(n)] for i in range(n)]
    return [[max(m, mp + a.k)] * n for _ in range(n)]


def in_intersection(g: PadicMatrix, Kspec: CongruenceLevelSpec, Kpspec: CongruenceLevelSpec,
                    a: Conjugator) -> bool:
    if not Kspec.contains(g):
        return False
    # a g a^{-1} - 1 = p^{-k} (A g B - p^k)
    AgB = a.A_at(g.prec) @ g @ a.B_at(g.prec)
    shifted = AgB - PadicMatrix.identity(g.p, g.size, g.prec).scale(g.p**a.k)
    need = a.k + Kpspec.level
    return shifted.prec >= need and shifted.valuation() >= need


def intersection_uniform_check(Kspec: CongruenceLevelSpec, Kpspec: CongruenceLevelSpec, a: Conjugator,
                               samples: int, seed: int = 0, prec: int = 12, floor: int = 0) -> dict:
    """Powerful condition on ``H = a^{-1} K' a ∩ K`` by extracting wp-th roots of commutators."""
    p = Kspec.p
    for spec in (Kspec, Kpspec):
        if spec.level < min_level(p):
            raise ConvergenceError(f"level {spec.level} is outside 1 + wp*M_n(Z_p)")
    rng = random.Random(seed)
    levels = intersection_levels(Kspec, Kpspec, a)
    stats = _Stats()
    for _ in range(samples):
        x = sample_at_levels(rng, p, prec, levels)
        y = sample_at_levels(rng, p, prec, levels)
        if not (in_intersection(x, Kspec, Kpspec, a) and in_intersection(y, Kspec, Kpspec, a)):
            raise RuntimeError("sampler produced elements outside the intersection")
        root = extract_wp_root(commutator(x, y), floor)
        if isinstance(root, CheckResult):
            stats.add(root, prec)
            continue
        res = root.result
        if res and not in_intersection(root.kappa, Kspec, Kpspec, a):
            res = CheckResult(False, res.precision, None, "root leaves the intersection")
        stats.add(res, prec)
    return stats.report()


class _Stats:
    def __init__(self):
        self.passed = 0
        self.failed = 0
        self.min_precision: int | None = None
        self.worst_residual: int | None = None
        self.reasons: list[str] = []
        self.max_slack = 0

    def add(self, res: CheckResult, prec: int) -> None:
        if res:
            self.passed += 1
        else:
            self.failed += 1
            if res.reason and len(self.reasons) < 5:
                self.reasons.append(res.reason)
            if res.residual is not None:
                self.worst_residual = res.residual if self.worst_residual is None else min(self.worst_residual, res.residual)
        self.min_precision = res.precision if self.min_precision is None else min(self.min_precision, res.precision)
        self.max_slack = max(self.max_slack, prec - res.precision)

    def report(self) -> dict:
        return {
            "passed": self.passed,
            "failed": self.failed,
            "min_certified_precision": self.min_precision,
            "max_slack": self.max_slack,
            "worst_residual_valuation": self.worst_residual,
            "failure_reasons": self.reasons,
        }


def random_conjugator(rng: random.Random, p: int, size: int) -> Conjugator:
    """``U * diag(1, p, 1, ...)`` with ``U`` a random product of integer elementary matrices."""
    U = [[int(i == j) for j in range(size)] for i in range(size)]
    for _ in range(2 * size):
        i, j = rng.sample(range(size), 2)
        c = rng.randint(-3, 3)
        U = [[U[r][s] + (c * U[j][s] if r == i else 0) for s in range(size)] for r in range(size)]
    D = [[(p if i == j == 1 else int(i == j)) for j in range(size)] for i in range(size)]
    a = [[sum(U[r][t] * D[t][s] for t in range(size)) for s in range(size)] for r in range(size)]
    return Conjugator.from_rows(p, a)


def uniformity_suite(p: int, size: int, samples: int, prec: int = 12, seed: int = 0,
                     level: int | None = None, slack: int = 3) -> dict:
    """Round trips, conjugation identity, commutator roots and lower p-series on seeded samples."""
    v0 = min_level(p)
    level = v0 if level is None else level
    if level < v0:
        raise ConvergenceError(f"level {level} inadmissible for p={p}")
    floor = prec - slack
    rng = random.Random(seed)
    out: dict[str, dict] = {}

    st = _Stats()
    for _ in range(samples):
        X = random_matrix_at_level(rng, p, size, prec, level)
        st.add(compare(log_matrix(exp_matrix(X)), X, floor), prec)
        u = X + PadicMatrix.identity(p, size, prec)
        st.add(compare(exp_matrix(log_matrix(u)), u, floor), prec)
    out["exp_log_round_trip"] = st.report()

    st = _Stats()
    for _ in range(samples):
        a = random_conjugator(rng, p, size)
        u = sample_at_levels(rng, p, prec, [[level + a.k] * size for _ in range(size)])
        st.add(conjugation_log_identity(a, u, floor), prec)
    out["conjugation_log_identity"] = st.report()

    st = _Stats()
    spec = CongruenceLevelSpec(size, p, level)
    for _ in range(samples):
        st.add(commutator_power_check(spec.sample(rng, prec), spec.sample(rng, prec), level, floor), prec)
    out["commutator_power"] = st.report()

    out["lower_p_series"] = lower_p_series_check(spec, samples, seed=rng.randrange(2**31), prec=prec, floor=floor)

    a = Conjugator.from_rows(p, [[(wp(p) if i == j == 1 else int(i == j)) for j in range(size)] for i in range(size)])
    out["intersection_uniform"] = intersection_uniform_check(
        spec, spec, a, samples, seed=rng.randrange(2**31), prec=prec, floor=floor)

    out["passed"] = all(r["failed"] == 0 for r in out.values() if isinstance(r, dict))
    return out
