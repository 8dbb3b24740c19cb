"""Dirac points: frozen locations, velocity sign law, gauge structure."""

import numpy as np
import pytest

from dislospec import bloch, dirac
from dislospec import potential as P
from dislospec.errors import NotDegenerate

# frozen oracle values (plane-wave diagonalization cross-checked against the
# parity-block route and the finite-difference slope below)
N1_E_STAR = 9.86959384680043
N1_NU_STAR = 6.283183067490497
N3_E_STAR = 88.82644594237718
N3_NU_STAR = -18.84955350267447
TUNED_E_STAR = 9.896570205200739
TUNED_NU_STAR = 6.2831780505927615


def test_frozen_dirac_points(n1, n3, tuned):
    for bundle, E, nu in (
        (n1, N1_E_STAR, N1_NU_STAR),
        (n3, N3_E_STAR, N3_NU_STAR),
        (tuned, TUNED_E_STAR, TUNED_NU_STAR),
    ):
        assert abs(bundle.dd.E_star - E) < 1e-9 * abs(E)
        assert abs(bundle.dd.nu_star - nu) < 1e-9 * abs(nu)


def test_velocity_sign_law(n1, n3):
    # sign(nu*) = (-1)^((n-1)/2)
    assert np.sign(n1.dd.nu_star) == 1
    assert np.sign(n3.dd.nu_star) == -1


def test_velocity_magnitude_near_free_value(n1, n3):
    # for weak potentials the cone slope approaches the free value 2 pi n
    assert abs(abs(n1.dd.nu_star) - 2 * np.pi) < 1e-3
    assert abs(abs(n3.dd.nu_star) - 6 * np.pi) < 1e-3


def test_finite_difference_velocity_agrees(n1):
    assert dirac.fermi_velocity_check(n1.dd, n1.sc.V, 1e-3) < 1e-4


def test_free_crossing_is_degenerate_with_exact_energy():
    dd = dirac.find_dirac_point(P.zero(), 1, K=12)
    assert abs(dd.E_star - np.pi**2) < 1e-10
    assert abs(abs(dd.nu_star) - 2 * np.pi) < 1e-10


def test_gap_open_potential_is_rejected():
    # an odd-frequency potential opens the crossing: no Dirac point exists
    with pytest.raises(NotDegenerate):
        dirac.find_dirac_point(P.cosine(1, 0.5), 1)


def test_eigenbasis_is_orthonormal_eigenvectors(n1):
    dd = n1.dd
    H = bloch.assemble_bloch(n1.sc.V, np.pi, dd.K).matrix
    for phi in (dd.phi_plus, dd.phi_minus):
        assert abs(np.vdot(phi, phi) - 1.0) < 1e-10
        res = np.linalg.norm(H @ phi - dd.E_star * phi)
        assert res < 1e-8
    assert abs(np.vdot(dd.phi_plus, dd.phi_minus)) < 1e-10


def test_phi_minus_is_the_conjugate_partner(n1):
    dd = n1.dd
    assert np.allclose(
        dd.phi_minus, dirac.conjugate_coefficients(dd.phi_plus, dd.K), atol=1e-12
    )


def test_gauge_is_deterministic(n1):
    dd = n1.dd
    pivot = dd.phi_plus[np.argmax(np.abs(dd.phi_plus))]
    assert pivot.imag == pytest.approx(0.0, abs=1e-14)
    assert pivot.real > 0


def test_record_round_trip(n1):
    rec = dirac.to_record(n1.dd)
    back = dirac.from_record(rec)
    assert back.n == n1.dd.n
    assert back.E_star == n1.dd.E_star
    assert back.nu_star == n1.dd.nu_star
    assert np.array_equal(back.phi_plus, n1.dd.phi_plus)
