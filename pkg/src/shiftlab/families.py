"""Parameterized weight families used by the fixture suite and threshold CLI."""

from __future__ import annotations

from .exactcore import RationalPolynomial, as_rational
from .shift1d import RationalWeightRule, Shift1D


def bergman_rank_one(x) -> Shift1D:
    """Bergman weights with the first squared weight replaced by x.

    Squared weights (x, 2/3, 3/4, 4/5, ...). The shift is subnormal when
    x = 1/2 and the embedding positivity thresholds move with x.
    """
    x = as_rational(x)
    if x <= 0:
        raise ValueError("x must be positive")
    tail = RationalWeightRule(
        RationalPolynomial.of(1, 1), RationalPolynomial.of(2, 1), start=1
    )
    return Shift1D((x,), tail, norm_bound_sq=max(x, 1))


def flat_head_bergman(x) -> Shift1D:
    """Three flat squared weights 1/2, then x, then the Bergman tail.

    Squared weights (1/2, 1/2, 1/2, x, 2/3, 3/4, 4/5, ...) for x between 1/2
    and 2/3.
    """
    x = as_rational(x)
    if x <= 0:
        raise ValueError("x must be positive")
    half = as_rational("1/2")
    tail = RationalWeightRule(
        RationalPolynomial.of(-2, 1), RationalPolynomial.of(-1, 1), start=4
    )
    return Shift1D((half, half, half, x), tail, norm_bound_sq=max(x, 1))
