from fractions import Fraction as F

import pytest

from shiftlab.errors import TailExhausted, ZeroMoment
from shiftlab.families import bergman_rank_one, flat_head_bergman
from shiftlab.measures import AtomicMeasure1D, Lebesgue01
from shiftlab.shift1d import (
    Shift1D,
    agler,
    bergman,
    curto_park_measures,
    detect_recursion,
    flat_shift,
    from_measure,
    k_hyponormal,
    power_decompose,
    support_power_map_check,
    unweighted,
)

THREE_ATOMS = AtomicMeasure1D((F(1, 3), F(1, 2), 1), (F(1, 3), F(1, 3), F(1, 3)))


# -- moments and construction -------------------------------------------------


def test_bergman_moments():
    b = bergman()
    assert b.moment(3) == F(1, 4)  # (1/2)(2/3)(3/4)
    assert [b.moment(k) for k in range(6)] == [F(1, k + 1) for k in range(6)]


def test_unweighted_moments():
    u = unweighted()
    assert all(u.moment(k) == 1 for k in range(10))


def test_agler_weights():
    a4 = agler(4)
    assert a4.weights_sq(3) == [F(1, 4), F(2, 5), F(3, 6)]


def test_shift_from_three_atom_measure():
    shift = from_measure(THREE_ATOMS)
    assert shift.moment(2) == F(49, 108)
    for k in range(9):
        assert shift.moment(k) == THREE_ATOMS.moment(k)


def test_from_measure_lebesgue_gives_bergman_weights():
    shift = from_measure(Lebesgue01())
    for k in range(8):
        assert shift.weight_sq(k) == F(k + 1, k + 2)


def test_from_measure_point_mass_at_one_is_isometry():
    shift = from_measure(AtomicMeasure1D((1,), (1,)))
    assert shift.weights_sq(6) == [1] * 6


def test_from_measure_flat_shift():
    sigma = AtomicMeasure1D((0, 1), (F(3, 4), F(1, 4)))
    shift = from_measure(sigma)
    assert shift.weights_sq(4) == [F(1, 4), 1, 1, 1]


def test_from_measure_rejects_point_mass_at_zero():
    with pytest.raises(ZeroMoment):
        from_measure(AtomicMeasure1D((0,), (1,)))


def test_tail_exhausted():
    shift = Shift1D((F(1, 2), F(2, 3)))
    assert shift.moment(2) == F(1, 3)
    with pytest.raises(TailExhausted):
        shift.moment(3)


# -- k-hyponormality ----------------------------------------------------------


def test_unweighted_is_k_hyponormal():
    u = unweighted()
    for k in (1, 2, 3, 4):
        assert k_hyponormal(u, k, window=10).holds


def test_rank_one_family_hyponormality_boundaries():
    # exact parameter thresholds for k = 1, 2, 3
    for k, boundary in ((1, F(2, 3)), (2, F(9, 16)), (3, F(8, 15))):
        at = k_hyponormal(bergman_rank_one(boundary), k, window=20)
        above = k_hyponormal(bergman_rank_one(boundary + F(1, 100)), k, window=20)
        assert at.holds, (k, boundary)
        assert not above.holds, (k, boundary)
        assert above.certificate is not None


def test_k_hyponormality_monotone_in_k():
    # failure at k persists at k + 1
    shift = bergman_rank_one(F(3, 5))  # above the k = 2 threshold 9/16
    assert k_hyponormal(shift, 1, window=15).holds
    assert not k_hyponormal(shift, 2, window=15).holds
    assert not k_hyponormal(shift, 3, window=15).holds


# -- recursion detection ------------------------------------------------------


def test_detect_recursion_three_atoms():
    moments = [THREE_ATOMS.moment(k) for k in range(7)]
    result = detect_recursion(moments, 3)
    assert result.found and result.order == 3
    assert result.generating_poly.coefficients == (F(-1, 6), 1, F(-11, 6), 1)
    assert result.atoms == (
        (F(1, 3), F(1, 3)),
        (F(1, 2), F(1, 3)),
        (1, F(1, 3)),
    )


def test_detect_recursion_point_mass():
    result = detect_recursion([1] * 7, 3)
    assert result.found and result.order == 1
    assert result.generating_poly.coefficients == (-1, 1)
    assert result.atoms == ((1, 1),)


def test_detect_recursion_point_mass_at_zero():
    result = detect_recursion([1, 0, 0, 0, 0], 2)
    assert result.found and result.order == 1
    assert result.generating_poly.coefficients == (0, 1)
    assert result.atoms == ((0, 1),)


def test_detect_recursion_bergman_has_none():
    moments = [F(1, k + 1) for k in range(11)]
    assert not detect_recursion(moments, 5).found


def test_detect_recursion_requires_unit_mass():
    with pytest.raises(ValueError):
        detect_recursion([2, 1], 1)


def test_detect_recursion_irrational_atoms_reported_as_intervals():
    # atoms 1/2 +- 1/sqrt(8): gamma_k = ((1/2+h)^k + (1/2-h)^k)/2, h^2 = 1/8
    # recursion: g(s) = s^2 - s + 1/8 has irrational roots
    h2 = F(1, 8)
    half = F(1, 2)
    moments = [F(1), half]
    for _ in range(6):
        moments.append(moments[-1] - (half * half - h2) * moments[-2])
    result = detect_recursion(moments, 3)
    assert result.found and result.order == 2
    assert result.atoms is None
    assert len(result.root_intervals) == 2


# -- powers and their measures -------------------------------------------------


def test_power_decompose_bergman():
    comp = power_decompose(bergman(), 2, window=3)
    assert comp[0].weights_sq(3) == [F(1, 3), F(3, 5), F(5, 7)]
    assert comp[1].weights_sq(3) == [F(1, 2), F(2, 3), F(3, 4)]


def test_power_decompose_unweighted():
    for part in power_decompose(unweighted(), 3, window=4):
        assert part.weights_sq(4) == [1] * 4


def test_power_decompose_flat():
    comp = power_decompose(flat_shift(F(1, 4)), 2, window=3)
    assert comp[0].weights_sq(3) == [F(1, 4), 1, 1]
    assert comp[1].weights_sq(3) == [1, 1, 1]


def test_power_decompose_moment_identity():
    shift = from_measure(THREE_ATOMS)
    m = 3
    comp = power_decompose(shift, m, window=7)
    for i in range(m):
        for k in range(7):
            assert comp[i].moment(k) == shift.moment(k * m + i) / shift.moment(i)


def test_curto_park_three_atoms():
    sigma0, sigma1 = curto_park_measures(THREE_ATOMS, 2)
    assert sigma0.atoms == (F(1, 9), F(1, 4), 1)
    assert sigma0.densities == (F(1, 3), F(1, 3), F(1, 3))
    assert sigma1.atoms == (F(1, 9), F(1, 4), 1)
    assert sigma1.densities == (F(2, 11), F(3, 11), F(6, 11))


def test_curto_park_point_mass():
    for i, nu in enumerate(curto_park_measures(AtomicMeasure1D((1,), (1,)), 3)):
        assert nu == AtomicMeasure1D((1,), (1,))


def test_curto_park_matches_power_components():
    # the component measures reproduce the component moments exactly
    shift = from_measure(THREE_ATOMS)
    for m in (2, 3):
        comps = power_decompose(shift, m, window=11)
        nus = curto_park_measures(THREE_ATOMS, m)
        for i in range(m):
            for k in range(11):
                assert comps[i].moment(k) == nus[i].moment(k)


def test_support_power_map():
    assert support_power_map_check(THREE_ATOMS, 3)
    assert support_power_map_check(AtomicMeasure1D((0, 1), (F(3, 4), F(1, 4))), 2)
    assert support_power_map_check(AtomicMeasure1D((F(1, 2),), (1,)), 2)


# -- example families ----------------------------------------------------------


def test_rank_one_family_weights():
    shift = bergman_rank_one(F(9, 16))
    assert shift.weights_sq(4) == [F(9, 16), F(2, 3), F(3, 4), F(4, 5)]


def test_flat_head_family_weights():
    shift = flat_head_bergman(F(3, 5))
    assert shift.weights_sq(7) == [
        F(1, 2), F(1, 2), F(1, 2), F(3, 5), F(2, 3), F(3, 4), F(4, 5),
    ]
