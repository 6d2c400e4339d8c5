import numpy as np
import pytest

from cubicmoments.lseries import (afe_check, central_value_is_zero, central_values, eval_central,
                                  family_l_polynomials, l_polynomial, rh_check, root_number)
from cubicmoments.moments import exact_zero_mask


@pytest.fixture(scope="module")
def Ls2(fam2, data2):
    return family_l_polynomials(fam2, data2.coeffs)


@pytest.fixture(scope="module")
def Ls0(fam0, data0):
    return family_l_polynomials(fam0, data0.coeffs)


def test_constant_term_and_trivial_zero(Ls0, Ls2):
    for L in Ls0 + Ls2:
        assert L.coeffs[0] == (1, 0)
        assert L.at_one() == (0, 0)


def test_degree_is_conductor(Ls2):
    assert all(len(L.coeffs) == 4 and L.genus == 2 for L in Ls2)


def test_family_route_matches_single_character(fam2, Ls2):
    # Euler product route against enumeration of monics
    for i in range(0, len(fam2), 61):
        assert l_polynomial(fam2.character(i)).coeffs == Ls2[i].coeffs


def test_horner_matches_direct(Ls2):
    u = 5 ** -0.5
    for L in Ls2:
        assert abs(L(u) - L.direct(u)) < 1e-12


def test_conjugate_values(fam2, Ls2):
    c = fam2.conj_index
    for i, L in enumerate(Ls2):
        assert abs(eval_central(Ls2[c[i]]) - np.conj(eval_central(L))) < 1e-12
        assert Ls2[c[i]].coeffs == L.conj().coeffs


def test_family_sum_real(data2):
    assert abs(sum(data2.L).imag) < 1e-9


def test_central_values_vectorized(data2, Ls2):
    v = central_values(data2.coeffs, 5)
    assert np.allclose(v, [eval_central(L) for L in Ls2], atol=1e-12)


@pytest.mark.parametrize("which", ["Ls0", "Ls2"])
def test_afe_all_cuts(request, which):
    for L in request.getfixturevalue(which):
        for X in range(L.genus + 1):
            assert afe_check(L, X) < 1e-9


def test_afe_bad_cut(Ls2):
    with pytest.raises(ValueError):
        afe_check(Ls2[0], 3)
    with pytest.raises(ValueError):
        afe_check(Ls2[0], -1)


def test_root_number_unimodular(Ls0, Ls2, fam2):
    for L in Ls0 + Ls2:
        assert root_number(L).modulus_error < 1e-9
    c = fam2.conj_index
    for i in range(0, len(Ls2), 13):
        assert abs(root_number(Ls2[c[i]]).value - np.conj(root_number(Ls2[i]).value)) < 1e-12


@pytest.mark.parametrize("which", ["Ls0", "Ls2"])
def test_rh(request, which):
    for L in request.getfixturevalue(which):
        z = rh_check(L)
        g = L.genus
        assert len(z.coeffs) == 2 * g + 1
        assert z.max_radius_error < 1e-6
        # functional equation symmetry u -> 1/(q u) maps the zero set to itself
        refl = np.sort_complex(1 / (5 * z.zeros))
        assert np.allclose(np.sort_complex(np.conj(z.zeros)), refl, atol=1e-6)


def test_exact_zero_agrees_with_float(Ls2, data2):
    exact = np.array([central_value_is_zero(L) for L in Ls2])
    assert np.array_equal(exact, exact_zero_mask(data2.coeffs, 5))
    assert np.all(np.abs(data2.L[exact]) < 1e-9)
    assert np.all(np.abs(data2.L[~exact]) > 1e-6)
    assert exact.sum() == 20
