"""Embeddings of 1-variable shifts into 2-variable shifts.

Three routes: the classical grid (same weight along every diagonal), the
polynomial-pair route driven by pushforward moments, and the row-by-row
constant-sum construction, which can stall and then reports exactly where
and why.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import NegativeValue, NonpositiveDensity, ZeroMoment
from .exactcore import RationalPolynomial, as_rational, poly_nonneg_on, vandermonde_solve
from .measures import AtomicMeasure1D, AtomicMeasure2D, pushforward_moments
from .shift1d import Shift1D, from_measure
from .shift2d import Shift2D, moments, spherical_check

STALL_BETA_NONPOSITIVE = "beta_nonpositive"
STALL_DIVISION_BY_ZERO = "division_by_zero"
STALL_ROW0_NOT_INCREASING = "row0_not_strictly_increasing"


@dataclass(frozen=True)
class StallReport:
    """Where and why the row-by-row construction failed.

    ``location`` is the grid point (k1, k2) at which the failure occurred and
    ``value`` the offending quantity (when one exists).
    """

    stalled: bool
    location: tuple
    cause: str
    value: Optional[Fraction] = None


@dataclass(frozen=True)
class EmbeddingSpec:
    """A deferred embedding: which route, from which source.

    ``source`` is a 1-variable shift (classical route, or row 0 of the
    iterative constant-sum route) or a 1-variable moment oracle (polynomial
    and measure-based constant-sum routes).
    """

    kind: str  # "classical" | "poly" | "spherical"
    source: object
    p: Optional[RationalPolynomial] = None
    q: Optional[RationalPolynomial] = None
    c: Optional[Fraction] = None

    def __post_init__(self):
        if self.kind not in ("classical", "poly", "spherical"):
            raise ValueError(f"unknown embedding kind {self.kind!r}")
        if self.kind == "poly" and (self.p is None or self.q is None):
            raise ValueError("poly embeddings need both polynomials")
        if self.kind == "spherical" and self.c is None:
            raise ValueError("spherical embeddings need the constant c")

    def build(self, window: int):
        """Materialize the grid; the spherical route may return a StallReport."""
        if self.kind == "classical":
            return classical_embed(self.source, window)
        if self.kind == "poly":
            return poly_embed(self.source, self.p, self.q, window)
        if isinstance(self.source, Shift1D):
            return spherical_embed_iterative(self.source, self.c, window)
        return spherical_embed_measure(self.source, self.c, window)


def classical_embed(shift: Shift1D, window: int) -> Shift2D:
    """Grid with alpha_sq = beta_sq = w_sq(k1+k2): the diagonal embedding.

    Both weight families repeat the 1-variable sequence along antidiagonals,
    so commutativity is automatic and the planar moments collapse to the
    1-variable moments: gamma(k1,k2) = gamma(k1+k2).
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    diag = shift.weights_sq(2 * window - 1)
    grid = [[diag[i + j] for j in range(window)] for i in range(window)]
    return Shift2D(grid, grid)


def _check_nonnegativity(sigma, p: RationalPolynomial, q: RationalPolynomial):
    kind = getattr(sigma, "kind", None)
    if kind == "atomic1d":
        for atom in sigma.atoms:
            if p(atom) < 0 or q(atom) < 0:
                raise NegativeValue(f"polynomial negative at atom {atom}")
    elif kind in ("lebesgue01", "beta"):
        # exact sign analysis on the full support interval [0, 1]
        for poly, name in ((p, "p"), (q, "q")):
            if not poly_nonneg_on(poly, 0, 1):
                raise NegativeValue(f"{name} takes negative values on [0, 1]")
    # prefix tables carry no support data; nothing checkable


def poly_embed(sigma, p: RationalPolynomial, q: RationalPolynomial, window: int) -> Shift2D:
    """2-variable shift whose moments are the (p, q)-pushforward moments.

    Squared weights are the moment ratios alpha_sq = gamma(k+e1)/gamma(k) and
    beta_sq = gamma(k+e2)/gamma(k); commutativity then holds by construction.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    _check_nonnegativity(sigma, p, q)
    oracle = pushforward_moments(sigma, p, q)
    size = window + 1
    table = [[oracle.moment(i, j) for j in range(size)] for i in range(size)]
    for i in range(window):
        for j in range(window):
            if table[i][j] == 0:
                raise ZeroMoment(f"pushforward moment ({i},{j}) vanishes")
    alpha = [
        [table[i + 1][j] / table[i][j] for j in range(window)] for i in range(window)
    ]
    beta = [
        [table[i][j + 1] / table[i][j] for j in range(window)] for i in range(window)
    ]
    return Shift2D(alpha, beta)


def spherical_embed_iterative(
    row0_sq: Union[Shift1D, Sequence], c, window: int
) -> Union[Shift2D, StallReport]:
    """Fill the grid row by row from row 0 under alpha_sq + beta_sq = c.

    Each vertical weight is c minus the horizontal one, and the next row's
    horizontal weights follow from commutativity:
    alpha_sq(k, j+1) = alpha_sq(k, j) * beta_sq(k+1, j) / beta_sq(k, j).
    Returns the grid, or a ``StallReport`` at the first failure. Row 0 must
    be strictly increasing; that is checked upfront.
    """
    c = as_rational(c)
    if c <= 0:
        raise ValueError("c must be positive")
    if window < 1:
        raise ValueError("window must be >= 1")
    length = 2 * window - 1
    if isinstance(row0_sq, Shift1D):
        row0 = row0_sq.weights_sq(length)
    else:
        row0 = [as_rational(w) for w in row0_sq]
        if len(row0) < length:
            raise ValueError(f"need {length} row-0 weights for window {window}")
        row0 = row0[:length]
    if any(w <= 0 for w in row0):
        raise ValueError("row-0 squared weights must be positive")
    for k in range(length - 1):
        if row0[k + 1] <= row0[k]:
            return StallReport(
                True, (k + 1, 0), STALL_ROW0_NOT_INCREASING, row0[k + 1]
            )
    alpha_rows = [row0]
    beta_rows = []
    for j in range(window):
        current = alpha_rows[j]
        beta_row = []
        for k in range(length - j):
            b = c - current[k]
            if b <= 0:
                return StallReport(True, (k, j), STALL_BETA_NONPOSITIVE, b)
            beta_row.append(b)
        beta_rows.append(beta_row)
        if j < window - 1:
            nxt = []
            for k in range(length - j - 1):
                if beta_row[k] == 0:
                    return StallReport(True, (k, j), STALL_DIVISION_BY_ZERO, None)
                nxt.append(current[k] * beta_row[k + 1] / beta_row[k])
            alpha_rows.append(nxt)
    alpha = [[alpha_rows[j][i] for j in range(window)] for i in range(window)]
    beta = [[beta_rows[j][i] for j in range(window)] for i in range(window)]
    return Shift2D(alpha, beta)


def spherical_embed_measure(sigma, c, window: int) -> Shift2D:
    """Constant-sum embedding through the pair (r, c - r).

    The result always satisfies ``spherical_check`` with the given c.
    """
    c = as_rational(c)
    p = RationalPolynomial.of(0, 1)
    q = RationalPolynomial.of(c, -1)
    return poly_embed(sigma, p, q, window)


def recover_densities(shift: Shift2D, atoms: Sequence) -> AtomicMeasure2D:
    """Solve for the densities of a constant-sum grid with known atoms.

    The row-0 moments against the power basis at the atoms form a square
    Vandermonde system; its solution gives the densities, and the planar
    atoms are (s_i, c - s_i) for the constant c of the grid.
    """
    atoms = [as_rational(a) for a in atoms]
    if not atoms:
        raise ValueError("need at least one atom")
    c = spherical_check(shift)
    if c is None:
        raise ValueError("grid does not have a constant weight sum on its window")
    table = moments(shift, len(atoms) - 1) if len(atoms) > 1 else moments(shift, 0)
    rhs = [table.at(k, 0) for k in range(len(atoms))]
    densities = vandermonde_solve(atoms, rhs)
    for atom, density in zip(atoms, densities):
        if density <= 0:
            raise NonpositiveDensity(
                f"solved density {density} at atom {atom}; the atom list is wrong"
            )
    return AtomicMeasure2D.from_pairs(
        ((a, c - a), d) for a, d in zip(atoms, densities)
    )


def row_measure_transform_check(sigma: AtomicMeasure1D, c=1) -> bool:
    """Verify the row-1 measure identity of the constant-sum construction.

    For a measure supported in [0, 1) with c = 1, row 1 of the construction
    must have moments (gamma_k - gamma_{k+1}) / (1 - gamma_1), which equal
    the moments of (1 - r) d sigma / (1 - gamma_1). Checked exactly for
    k = 0..10.
    """
    if as_rational(c) != 1:
        raise ValueError("the identity is stated for c = 1")
    if sigma.support_bound >= 1:
        raise ValueError("measure must be supported in [0, 1)")
    gamma1 = sigma.moment(1)
    if gamma1 == 0:
        # point mass at 0: both sides are that same point mass
        return True
    shift = from_measure(sigma)
    depth = 12
    w = shift.weights_sq(depth + 1)
    row1 = [w[k] * (1 - w[k + 1]) / (1 - w[k]) for k in range(depth)]
    lhs = Fraction(1)
    mass = 1 - gamma1
    for k in range(11):
        target = sum(
            d * a**k * (1 - a) for a, d in zip(sigma.atoms, sigma.densities)
        ) / mass
        if lhs != target:
            return False
        lhs *= row1[k]
    return True
