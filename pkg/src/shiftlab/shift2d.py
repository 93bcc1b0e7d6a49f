"""2-variable weighted shifts over truncation windows.

A shift is a pair of squared-weight grids (horizontal ``alpha_sq``, vertical
``beta_sq``) that satisfy the commuting-pair identity exactly. A shift with
no generator rule is only defined on its window: any operation that needs
more data fails loudly instead of extrapolating.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath

from .errors import CommutativityViolation, WindowTooSmall
from .exactcore import PsdVerdict, RationalPolynomial, SymMatrix, as_rational, psd_test
from .shift1d import RationalWeightRule, Shift1D

SIX_POINT_PRECISION_BITS = 96
SIX_POINT_BOUNDARY = mpmath.mpf("1e-12")


# ---------------------------------------------------------------------------
# Closed-form generators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BivariatePoly:
    """Polynomial in (k1, k2): coefficient c[i][j] multiplies k1^i k2^j."""

    coefficients: tuple

    def __post_init__(self):
        rows = tuple(tuple(as_rational(c) for c in row) for row in self.coefficients)
        object.__setattr__(self, "coefficients", rows)

    def __call__(self, k1, k2) -> Fraction:
        k1, k2 = as_rational(k1), as_rational(k2)
        total = Fraction(0)
        p1 = Fraction(1)
        for row in self.coefficients:
            p2 = Fraction(1)
            for c in row:
                if c:
                    total += c * p1 * p2
                p2 *= k2
            p1 *= k1
        return total

    def specialize_k2(self, value) -> RationalPolynomial:
        """Fix k2; the result is a univariate polynomial in k1."""
        value = as_rational(value)
        coeffs = []
        for row in self.coefficients:
            acc = Fraction(0)
            p2 = Fraction(1)
            for c in row:
                acc += c * p2
                p2 *= value
            coeffs.append(acc)
        return RationalPolynomial(tuple(coeffs))

    def specialize_k1(self, value) -> RationalPolynomial:
        value = as_rational(value)
        width = max((len(row) for row in self.coefficients), default=0)
        coeffs = [Fraction(0)] * width
        p1 = Fraction(1)
        for row in self.coefficients:
            for j, c in enumerate(row):
                coeffs[j] += c * p1
            p1 *= value
        return RationalPolynomial(tuple(coeffs))


@dataclass(frozen=True)
class BivariateRational:
    num: BivariatePoly
    den: BivariatePoly

    def __call__(self, k1: int, k2: int) -> Fraction:
        d = self.den(k1, k2)
        if d == 0:
            raise ZeroDivisionError(f"generator denominator vanishes at ({k1},{k2})")
        return self.num(k1, k2) / d


@dataclass(frozen=True)
class GeneratorRule:
    """Closed-form squared-weight rule used to extend a grid on demand."""

    alpha: BivariateRational
    beta: BivariateRational

    def alpha_sq(self, k1: int, k2: int) -> Fraction:
        return self.alpha(k1, k2)

    def beta_sq(self, k1: int, k2: int) -> Fraction:
        return self.beta(k1, k2)


# ---------------------------------------------------------------------------
# The shift itself
# ---------------------------------------------------------------------------


class Shift2D:
    """Commuting 2-variable weighted shift on an N-by-N truncation window."""

    def __init__(self, alpha_grid, beta_grid, rule: Optional[GeneratorRule] = None):
        alpha = tuple(tuple(as_rational(w) for w in row) for row in alpha_grid)
        beta = tuple(tuple(as_rational(w) for w in row) for row in beta_grid)
        n = len(alpha)
        if n == 0 or len(beta) != n:
            raise ValueError("grids must be nonempty with equal shape")
        if any(len(row) != n for row in alpha) or any(len(row) != n for row in beta):
            raise ValueError("grids must be square")
        for grid, name in ((alpha, "alpha"), (beta, "beta")):
            for i, row in enumerate(grid):
                for j, w in enumerate(row):
                    if w <= 0:
                        raise ValueError(f"{name}_sq[{i}][{j}] = {w} is not positive")
        # exact commuting-pair identity on every interior point
        for i in range(n - 1):
            for j in range(n - 1):
                if beta[i + 1][j] * alpha[i][j] != alpha[i][j + 1] * beta[i][j]:
                    raise CommutativityViolation((i, j))
        self.alpha_grid = alpha
        self.beta_grid = beta
        self.rule = rule

    @property
    def window(self) -> int:
        return len(self.alpha_grid)

    @classmethod
    def from_rule(cls, rule: GeneratorRule, window: int) -> "Shift2D":
        alpha = [[rule.alpha_sq(i, j) for j in range(window)] for i in range(window)]
        beta = [[rule.beta_sq(i, j) for j in range(window)] for i in range(window)]
        return cls(alpha, beta, rule=rule)

    def alpha_sq(self, k1: int, k2: int) -> Fraction:
        if k1 < self.window and k2 < self.window:
            return self.alpha_grid[k1][k2]
        if self.rule is not None:
            return self.rule.alpha_sq(k1, k2)
        raise WindowTooSmall(
            f"alpha index ({k1},{k2}) outside the {self.window}x{self.window} window"
        )

    def beta_sq(self, k1: int, k2: int) -> Fraction:
        if k1 < self.window and k2 < self.window:
            return self.beta_grid[k1][k2]
        if self.rule is not None:
            return self.rule.beta_sq(k1, k2)
        raise WindowTooSmall(
            f"beta index ({k1},{k2}) outside the {self.window}x{self.window} window"
        )


def helton_howe(window: int) -> Shift2D:
    """All weights equal to 1."""
    one = BivariatePoly(((1,),))
    rule = GeneratorRule(BivariateRational(one, one), BivariateRational(one, one))
    return Shift2D.from_rule(rule, window)


def sie_bergman(window: int) -> Shift2D:
    """The spherically isometric grid with alpha_sq = (k1+1)/(k1+k2+2) and
    beta_sq = (k2+1)/(k1+k2+2); its rows are the higher Agler shifts."""
    den = BivariatePoly(((2, 1), (1,)))
    alpha = BivariateRational(BivariatePoly(((1,), (1,))), den)
    beta = BivariateRational(BivariatePoly(((1, 1),)), den)
    return Shift2D.from_rule(GeneratorRule(alpha, beta), window)


# ---------------------------------------------------------------------------
# Moments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Moment2Table:
    """Exact moments gamma_(k1,k2) for 0 <= k1, k2 <= window."""

    window: int
    values: tuple

    def at(self, k1: int, k2: int) -> Fraction:
        return self.values[k1][k2]


def moments(shift: Shift2D, window: int) -> Moment2Table:
    """Moment table, asserting path-independence cell by cell.

    Any monotone staircase from the origin gives the same product; the fill
    checks the alpha route against the beta route and raises
    ``CommutativityViolation`` on the first mismatch.
    """
    size = window + 1
    table = [[None] * size for _ in range(size)]
    table[0][0] = Fraction(1)
    for i in range(1, size):
        table[i][0] = table[i - 1][0] * shift.alpha_sq(i - 1, 0)
    for j in range(1, size):
        table[0][j] = table[0][j - 1] * shift.beta_sq(0, j - 1)
    for i in range(1, size):
        for j in range(1, size):
            via_alpha = table[i - 1][j] * shift.alpha_sq(i - 1, j)
            via_beta = table[i][j - 1] * shift.beta_sq(i, j - 1)
            if via_alpha != via_beta:
                raise CommutativityViolation((i - 1, j - 1))
            table[i][j] = via_alpha
    return Moment2Table(window, tuple(tuple(row) for row in table))


# ---------------------------------------------------------------------------
# Positivity tests
# ---------------------------------------------------------------------------


def _khypo_index_set(k: int) -> list:
    return [(n, m) for total in range(k + 1) for n in range(total, -1, -1)
            for m in (total - n,)]


def moment_matrix(table: Moment2Table, u, k: int) -> SymMatrix:
    """Moment matrix at base point u: entry gamma_(u + a + b) over all index
    pairs a, b with |a|, |b| <= k. Order (k+1)(k+2)/2."""
    idx = _khypo_index_set(k)
    u1, u2 = u
    rows = tuple(
        tuple(table.at(u1 + n + p, u2 + m + q) for (p, q) in idx) for (n, m) in idx
    )
    return SymMatrix(rows)


@dataclass(frozen=True)
class Hyponormality2VVerdict:
    holds: bool
    k: int
    window: int
    first_failure: Optional[tuple]
    certificate: Optional[PsdVerdict]


def _base_points(window: int):
    for total in range(window + 1):
        for u1 in range(total + 1):
            yield (u1, total - u1)


def k_hyponormal_2v(shift: Shift2D, k: int, window: int = 15) -> Hyponormality2VVerdict:
    """Exact k-hyponormality over base points with u1 + u2 <= window.

    Builds the order-(k+1)(k+2)/2 moment matrix at each base point and
    certifies positivity exactly. The verdict is window-scoped.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    table = moments(shift, window + 2 * k)
    for u in _base_points(window):
        verdict = psd_test(moment_matrix(table, u, k))
        if not verdict.is_psd:
            return Hyponormality2VVerdict(False, k, window, u, verdict)
    return Hyponormality2VVerdict(True, k, window, None, None)


@dataclass(frozen=True)
class SixPointVerdict:
    holds: bool
    window: int
    first_failure: Optional[tuple]
    boundary_deferrals: tuple


def six_point(shift: Shift2D, window: int = 15) -> SixPointVerdict:
    """Hyponormality screen via the 2x2 self-commutator matrix at each point.

    The off-diagonal entries involve square roots, so the determinant is
    evaluated in high-precision floating point; determinants within 1e-12 of
    zero are classified as boundary cases and deferred to the exact k = 1
    moment-matrix test at that base point. Advisory only.
    """
    deferrals = []
    exact_table = None
    with mpmath.workprec(SIX_POINT_PRECISION_BITS):
        for point in _base_points(window):
            k1, k2 = point
            a11 = shift.alpha_sq(k1 + 1, k2) - shift.alpha_sq(k1, k2)
            a22 = shift.beta_sq(k1, k2 + 1) - shift.beta_sq(k1, k2)
            if a11 < 0 or a22 < 0:
                return SixPointVerdict(False, window, point, tuple(deferrals))
            cross = shift.alpha_sq(k1, k2 + 1) * shift.beta_sq(k1 + 1, k2)
            base = shift.alpha_sq(k1, k2) * shift.beta_sq(k1, k2)
            off = mpmath.sqrt(_to_mpf(cross)) - mpmath.sqrt(_to_mpf(base))
            det = _to_mpf(a11) * _to_mpf(a22) - off * off
            if abs(det) < SIX_POINT_BOUNDARY:
                deferrals.append(point)
                if exact_table is None:
                    exact_table = moments(shift, window + 2)
                if not psd_test(moment_matrix(exact_table, point, 1)).is_psd:
                    return SixPointVerdict(False, window, point, tuple(deferrals))
            elif det < 0:
                return SixPointVerdict(False, window, point, tuple(deferrals))
    return SixPointVerdict(True, window, None, tuple(deferrals))


def _to_mpf(q: Fraction):
    return mpmath.mpf(q.numerator) / mpmath.mpf(q.denominator)


# ---------------------------------------------------------------------------
# Restrictions, powers, rows and columns
# ---------------------------------------------------------------------------


def restrict(shift: Shift2D, m: int, n: int, p: int, q: int) -> Shift2D:
    """Restriction to the sublattice of points (m*i + p, n*j + q).

    This is the (p,q)-component of the (m,n)-power: stepping once in the
    restriction multiplies m consecutive horizontal (or n vertical) weights.
    """
    if m < 1 or n < 1 or not (0 <= p < m) or not (0 <= q < n):
        raise ValueError("need m,n >= 1 and 0 <= p < m, 0 <= q < n")
    size = min((shift.window - p) // m, (shift.window - q) // n)
    if size < 1:
        raise WindowTooSmall(
            f"window {shift.window} cannot host a ({m},{n}) restriction at ({p},{q})"
        )
    alpha = [[None] * size for _ in range(size)]
    beta = [[None] * size for _ in range(size)]
    for i in range(size):
        for j in range(size):
            a = Fraction(1)
            for offset in range(m):
                a *= shift.alpha_sq(m * i + p + offset, n * j + q)
            b = Fraction(1)
            for offset in range(n):
                b *= shift.beta_sq(m * i + p, n * j + q + offset)
            alpha[i][j] = a
            beta[i][j] = b
    return Shift2D(alpha, beta)


def corner_restrict(shift: Shift2D, p: int, q: int) -> Shift2D:
    """Restriction to the invariant corner of points with k1 >= p, k2 >= q."""
    if p < 0 or q < 0:
        raise ValueError("corner offsets must be nonnegative")
    size = shift.window - max(p, q)
    if size < 1:
        raise WindowTooSmall(f"window {shift.window} too small for corner ({p},{q})")
    alpha = [[shift.alpha_sq(i + p, j + q) for j in range(size)] for i in range(size)]
    beta = [[shift.beta_sq(i + p, j + q) for j in range(size)] for i in range(size)]
    return Shift2D(alpha, beta)


def power_components(shift: Shift2D, m: int, n: int) -> list:
    """All m*n sublattice components of the (m,n)-power, ordered row-major in
    (p, q). A property holds for the power iff it holds for every component.
    """
    return [restrict(shift, m, n, p, q) for p in range(m) for q in range(n)]


def row(shift: Shift2D, j: int) -> Shift1D:
    """The j-th horizontal 1-variable shift (squared weights alpha_sq(k, j)).

    Generator-backed shifts yield a closed-form tail, so the row is not
    window-limited; otherwise the row carries the grid prefix only.
    """
    if j < 0:
        raise ValueError("row index must be nonnegative")
    if shift.rule is not None:
        rule = RationalWeightRule(
            shift.rule.alpha.num.specialize_k2(j),
            shift.rule.alpha.den.specialize_k2(j),
        )
        return Shift1D((), rule)
    if j >= shift.window:
        raise WindowTooSmall(f"row {j} outside window {shift.window}")
    return Shift1D(tuple(shift.alpha_sq(k, j) for k in range(shift.window)))


def col(shift: Shift2D, i: int) -> Shift1D:
    """The i-th vertical 1-variable shift (squared weights beta_sq(i, k))."""
    if i < 0:
        raise ValueError("column index must be nonnegative")
    if shift.rule is not None:
        rule = RationalWeightRule(
            shift.rule.beta.num.specialize_k1(i),
            shift.rule.beta.den.specialize_k1(i),
        )
        return Shift1D((), rule)
    if i >= shift.window:
        raise WindowTooSmall(f"column {i} outside window {shift.window}")
    return Shift1D(tuple(shift.beta_sq(i, k) for k in range(shift.window)))


# ---------------------------------------------------------------------------
# Spherical quasinormality
# ---------------------------------------------------------------------------


def spherical_check(shift: Shift2D, window: Optional[int] = None) -> Optional[Fraction]:
    """Return c when alpha_sq + beta_sq equals the constant c at every grid
    point of the window, cross-checked by the moment identity
    gamma(k+e1) + gamma(k+e2) = c * gamma(k); otherwise None.
    """
    size = shift.window if window is None else window + 1
    c = shift.alpha_sq(0, 0) + shift.beta_sq(0, 0)
    for i in range(size):
        for j in range(size):
            if shift.alpha_sq(i, j) + shift.beta_sq(i, j) != c:
                return None
    table = moments(shift, size - 1)
    for i in range(size - 1):
        for j in range(size - 1):
            if table.at(i + 1, j) + table.at(i, j + 1) != c * table.at(i, j):
                return None
    return c
