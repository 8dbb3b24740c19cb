"""Effective 2x2 families: exact eigenvalues, curvature, enclosure scaling."""

import numpy as np
import pytest

from dislospec import tight_binding as tb
from dislospec.errors import H2Violated


def test_m_delta_eigenvalues_are_exact(n1):
    fam = tb.TightBindingFamily(dirac=n1.dd, theta=n1.cc, delta=0.02)
    for xi, t in ((np.pi + 0.01, 0.4), (np.pi - 0.03, 2.2), (np.pi, np.pi)):
        M, (lo, hi), vecs = tb.m_delta(fam, xi, t)
        vals = np.linalg.eigvalsh(M)
        assert abs(vals[0] - lo) < 1e-12
        assert abs(vals[1] - hi) < 1e-12
        # eigenvectors diagonalize M
        D = vecs.conj().T @ M @ vecs
        assert abs(D[0, 1]) < 1e-12


def test_sigma_star_is_hermitian_offdiagonal(n1):
    fam = tb.TightBindingFamily(dirac=n1.dd, theta=n1.cc, delta=0.02)
    S = fam.sigma_star
    assert np.allclose(S, S.conj().T)
    assert S[0, 0] == 0 and S[1, 1] == 0


def _projector_minus(fourier, xi, t):
    M = tb.rescaled_family(fourier, xi, t)
    vals, vecs = np.linalg.eigh(M)
    v = vecs[:, 0]
    return np.outer(v, v.conj())


def test_closed_form_curvature_matches_projector_differences(n1):
    # independent oracle: Tr(P [dP, dP]) by central differences
    f = n1.cc.fourier
    for xi, t in ((0.3, 1.0), (-0.8, 2.5), (0.0, 0.7)):
        h = 1e-5
        dxi = (_projector_minus(f, xi + h, t) - _projector_minus(f, xi - h, t)) / (2 * h)
        dt = (_projector_minus(f, xi, t + h) - _projector_minus(f, xi, t - h)) / (2 * h)
        P = _projector_minus(f, xi, t)
        B_num = np.trace(P @ (dxi @ dt - dt @ dxi))
        B = tb.curvature_closed_form(f, xi, t)
        assert abs(B - B_num) < 1e-6 * max(abs(B), 1e-8)


def test_curvature_integral_equals_winding(n1, n3):
    assert abs(tb.curvature_integral(n1.cc.fourier) - (-1.0)) < 1e-8
    assert abs(tb.curvature_integral(n3.cc.fourier) - 3.0) < 1e-8


def test_curvature_rejects_vanishing_theta():
    with pytest.raises(H2Violated):
        tb.curvature_closed_form({1: 1.0, -1: 1.0}, 0.0, np.pi / 2)


def test_enclosure_holds(n1):
    for delta in (0.02, 0.01):
        fam = tb.TightBindingFamily(dirac=n1.dd, theta=n1.cc, delta=delta)
        exc = tb.enclosure_check(n1.sc.V, n1.sc.W, fam)
        assert exc <= 1.0
        assert exc < 0.1  # with comfortable margin, not by luck


def test_gap_prediction_error_is_quadratic_in_delta(n1):
    # at xi = pi the 2x2 prediction E* +/- delta |theta| deviates by O(delta^2)
    from dislospec import bloch
    from dislospec.coupling import theta_from_fourier
    from dislospec.potential import translate

    K = bloch.default_cutoff(n1.sc.V + n1.sc.W, 9)
    devs = []
    for delta in (0.04, 0.02):
        worst = 0.0
        for t in np.linspace(0, 2 * np.pi, 9, endpoint=False):
            H = bloch.assemble_bloch(n1.sc.V + delta * translate(n1.sc.W, t), np.pi, K).matrix
            vals = np.linalg.eigvalsh(H)
            r = delta * abs(complex(theta_from_fourier(n1.cc.fourier, t)))
            worst = max(
                worst,
                abs(vals[0] - (n1.dd.E_star - r)),
                abs(vals[1] - (n1.dd.E_star + r)),
            )
        devs.append(worst)
    assert 3.5 < devs[0] / devs[1] < 4.5
