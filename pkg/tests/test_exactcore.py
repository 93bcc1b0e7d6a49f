from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shiftlab.errors import DuplicateNode
from shiftlab.exactcore import (
    RationalPolynomial,
    SymMatrix,
    as_rational,
    format_rational,
    isolate_real_roots,
    poly_eval,
    poly_gcd,
    poly_nonneg_on,
    psd_test,
    psd_test_minors,
    rational_roots,
    solve_linear,
    square_free_part,
    vandermonde_solve,
)

P = RationalPolynomial.of


def test_as_rational_forms():
    assert as_rational("3/4") == F(3, 4)
    assert as_rational(5) == F(5)
    assert as_rational(F(1, 3)) == F(1, 3)
    with pytest.raises(TypeError):
        as_rational(0.5)


def test_format_rational():
    assert format_rational(F(3, 4)) == "3/4"
    assert format_rational(F(7)) == "7"
    assert format_rational(F(-1, 2)) == "-1/2"


# -- PSD certification -------------------------------------------------------


def test_psd_identity_2x2():
    verdict = psd_test(SymMatrix(((1, 0), (0, 1))))
    assert verdict.is_psd
    assert verdict.certificate == (1, 2, 1)
    assert verdict.first_failure is None


def test_psd_negative_determinant():
    verdict = psd_test(SymMatrix(((1, 2), (2, 1))))
    assert not verdict.is_psd
    assert verdict.certificate[2] == -3
    assert verdict.first_failure == 2


def test_psd_hilbert_3x3():
    # hand cofactor expansion: det = 1/240 - 1/120 + 1/216 = 1/2160,
    # e_1 = 1 + 1/3 + 1/5, e_2 = 1/12 + 4/45 + 1/240
    m = SymMatrix(
        (
            (1, F(1, 2), F(1, 3)),
            (F(1, 2), F(1, 3), F(1, 4)),
            (F(1, 3), F(1, 4), F(1, 5)),
        )
    )
    verdict = psd_test(m)
    assert verdict.is_psd
    assert verdict.certificate == (1, F(23, 15), F(127, 720), F(1, 2160))


def test_psd_not_symmetric_rejected():
    with pytest.raises(ValueError):
        SymMatrix(((1, 2), (3, 1)))


def test_psd_semidefinite_rank_one():
    # vv^T for v = (1, 2, 3): PSD with zero determinant
    v = (1, 2, 3)
    m = SymMatrix(tuple(tuple(F(a * b) for b in v) for a in v))
    verdict = psd_test(m)
    assert verdict.is_psd
    assert verdict.certificate[-1] == 0


@settings(max_examples=60, deadline=None)
@given(
    st.lists(
        st.fractions(min_value=-3, max_value=3, max_denominator=8),
        min_size=9,
        max_size=9,
    )
)
def test_psd_matches_brute_force_minors(vals):
    rows = [[None] * 3 for _ in range(3)]
    k = 0
    for i in range(3):
        for j in range(i, 3):
            rows[i][j] = rows[j][i] = vals[k]
            k += 1
    m = SymMatrix(tuple(tuple(r) for r in rows))
    assert psd_test(m).is_psd == psd_test_minors(m)


@settings(max_examples=40, deadline=None)
@given(
    st.lists(
        st.fractions(min_value=-2, max_value=2, max_denominator=6),
        min_size=6,
        max_size=6,
    ),
    st.lists(
        st.fractions(min_value=F(1, 4), max_value=3, max_denominator=6),
        min_size=3,
        max_size=3,
    ),
)
def test_psd_invariant_under_positive_diagonal_congruence(vals, diag):
    rows = [[None] * 3 for _ in range(3)]
    k = 0
    for i in range(3):
        for j in range(i, 3):
            rows[i][j] = rows[j][i] = vals[k]
            k += 1
    m = SymMatrix(tuple(tuple(r) for r in rows))
    scaled = SymMatrix(
        tuple(
            tuple(diag[i] * rows[i][j] * diag[j] for j in range(3)) for i in range(3)
        )
    )
    assert psd_test(m).is_psd == psd_test(scaled).is_psd


@settings(max_examples=40, deadline=None)
@given(
    st.lists(
        st.fractions(min_value=-3, max_value=3, max_denominator=10),
        min_size=4,
        max_size=4,
    )
)
def test_gram_matrices_are_psd(v):
    m = SymMatrix(tuple(tuple(a * b for b in v) for a in v))
    assert psd_test(m).is_psd


# -- Linear solving ----------------------------------------------------------


def test_vandermonde_three_atoms():
    # gamma_2 = (1/9 + 1/4 + 1)/3 = 49/108 from the defining density formula
    solution = vandermonde_solve(
        (F(1, 3), F(1, 2), 1), (1, F(11, 18), F(49, 108))
    )
    assert solution == [F(1, 3), F(1, 3), F(1, 3)]


def test_vandermonde_single_node():
    assert vandermonde_solve((1,), (1,)) == [1]


def test_vandermonde_two_nodes():
    assert vandermonde_solve((0, 1), (1, F(3, 4))) == [F(1, 4), F(3, 4)]


def test_vandermonde_duplicate_node():
    with pytest.raises(DuplicateNode):
        vandermonde_solve((F(1, 2), F(1, 2)), (1, 1))


@settings(max_examples=40, deadline=None)
@given(
    st.lists(
        st.fractions(min_value=-4, max_value=4, max_denominator=8),
        min_size=3,
        max_size=3,
        unique=True,
    ),
    st.lists(
        st.fractions(min_value=-4, max_value=4, max_denominator=8),
        min_size=3,
        max_size=3,
    ),
)
def test_vandermonde_round_trip(nodes, rhs):
    x = vandermonde_solve(nodes, rhs)
    for i in range(3):
        assert sum(nodes[j] ** i * x[j] for j in range(3)) == rhs[i]


def test_solve_linear_singular_returns_none():
    assert solve_linear([[1, 2], [2, 4]], [1, 2]) is None


# -- Polynomials -------------------------------------------------------------


def test_poly_eval_examples():
    assert poly_eval(P(1, -1), 1) == 0
    assert poly_eval(P(0, 0, 1), F(1, 2)) == F(1, 4)
    assert poly_eval(P(0, 1, -1), F(1, 3)) == F(2, 9)


def test_poly_arithmetic():
    p = P(1, 1)
    assert (p * p).coefficients == (1, 2, 1)
    assert (p**3).coefficients == (1, 3, 3, 1)
    assert (p - p).is_zero()
    assert p.derivative().coefficients == (1,)


def test_poly_trailing_zeros_trimmed():
    assert P(1, 2, 0, 0).degree == 1


def test_poly_gcd_and_square_free():
    p = P(-1, 1) ** 2 * P(-2, 1)  # (x-1)^2 (x-2)
    g = poly_gcd(p, p.derivative())
    assert g.coefficients == (-1, 1)  # x - 1, monic
    assert square_free_part(p).coefficients == (P(-1, 1) * P(-2, 1)).coefficients


def test_rational_roots_with_multiplicity():
    p = P(F(-1, 6), 1, F(-11, 6), 1)  # (x-1/3)(x-1/2)(x-1)
    assert rational_roots(p) == [F(1, 3), F(1, 2), 1]
    q = P(-1, 1) ** 2
    assert rational_roots(q) == [1, 1]


def test_isolate_real_roots_irrational():
    p = P(-2, 0, 1)  # x^2 - 2
    intervals = isolate_real_roots(p)
    assert len(intervals) == 2
    for a, b in intervals:
        assert p(a) * p(b) < 0


def test_isolate_real_roots_bounded_range():
    p = P(-2, 0, 1) * P(F(-1, 4), 1)
    intervals = isolate_real_roots(p, 0, 2)
    # roots in [0, 2]: 1/4 and sqrt(2)
    assert len(intervals) == 2


def test_poly_nonneg_on_interval():
    assert poly_nonneg_on(P(0, 1, -1), 0, 1)  # r(1-r)
    assert not poly_nonneg_on(P(F(-1, 2), 1), 0, 1)  # r - 1/2 changes sign
    assert poly_nonneg_on(P(F(1, 4), -1, 1), 0, 1)  # (r - 1/2)^2 touches zero
    assert not poly_nonneg_on(P(0, -1), 0, 1)  # -r
    assert poly_nonneg_on(P(0, 0, 1, -1), 0, 1)  # r^2(1-r)
    assert poly_nonneg_on(P(5), 0, 1)
    assert not poly_nonneg_on(P(-5), 0, 1)
    assert poly_nonneg_on(RationalPolynomial(()), 0, 1)


def test_poly_nonneg_root_at_endpoint():
    assert poly_nonneg_on(P(0, 1), 0, 1)  # r, root at left endpoint
    assert poly_nonneg_on(P(1, -1), 0, 1)  # 1 - r, root at right endpoint
    assert not poly_nonneg_on(P(0, -1) * P(F(-1, 2), 1), 0, 1)  # -r(r-1/2)<0 near 1
