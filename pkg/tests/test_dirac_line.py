"""Effective Dirac line operators: closed forms, bound states, spectral flow."""

import numpy as np
import pytest

from dislospec import dirac_line as dl
from dislospec.errors import NoDecayingDirection, OutOfRange

THETA_F = 0.05


def _step_family(m, nu_sign):
    return lambda t: dl.model_flow_operator(nu_sign, THETA_F, m, t, dl.STEP)


def test_step_closed_form_matches_solver_both_velocity_signs():
    ts = np.linspace(0.05, 2 * np.pi - 0.05, 32)
    for nu_sign in (1.0, -1.0):
        for t in ts:
            op = dl.model_flow_operator(nu_sign, THETA_F, 1, t, dl.STEP)
            spec = dl.dirac_bound_states(op)
            assert spec.eigenvalues.size == 1
            exact = dl.step_eigenvalue(t, nu_sign, THETA_F)
            assert abs(spec.eigenvalues[0] - exact) < 1e-8


def test_step_eigenvalue_rejects_endpoint_phases():
    for t in (0.0, 2 * np.pi):
        with pytest.raises(OutOfRange):
            dl.step_eigenvalue(t, 1.0, THETA_F)
    with pytest.raises(ValueError):
        dl.step_eigenvalue(np.pi, 1.0, 0.0)


def test_tanh_profile_keeps_single_midgap_state():
    profile = dl.TransitionProfile("tanh", 0.5)
    op = dl.model_flow_operator(1.0, THETA_F, 1, np.pi / 2, profile)
    spec = dl.dirac_bound_states(op, grid_points=200)
    assert spec.eigenvalues.size >= 1
    # smooth interpolation shifts the step value only slightly
    exact = dl.step_eigenvalue(np.pi / 2, 1.0, THETA_F)
    assert abs(min(spec.eigenvalues, key=abs) - exact) < 0.2 * THETA_F


def test_model_flow_counts():
    assert dl.dirac_spectral_flow(_step_family(1, 1.0), n_t=32) == 1
    assert dl.dirac_spectral_flow(_step_family(3, 1.0), n_t=48) == 3
    assert dl.dirac_spectral_flow(_step_family(1, -1.0), n_t=32) == -1


def test_flow_is_profile_homotopy_invariant():
    # deforming the transition profile cannot change the spectral flow
    profile = dl.TransitionProfile("tanh", 0.3)
    fam = lambda t: dl.model_flow_operator(1.0, THETA_F, 1, t, profile)
    assert dl.dirac_spectral_flow(fam, n_t=24) == 1


def test_vanishing_coupling_has_no_gap():
    op = dl.DiracLineOperator(1.0, 0.0, THETA_F, dl.STEP)
    with pytest.raises(NoDecayingDirection):
        dl.dirac_bound_states(op)


def test_energy_outside_gap_rejected():
    with pytest.raises(NoDecayingDirection):
        dl._decaying_direction(1.0, THETA_F, 2 * THETA_F, "left")


def test_dislocated_operator_left_coupling_is_minus_theta_star():
    theta = 0.03 + 0.04j
    op = dl.dislocated_operator(6.28, theta, 1j * theta, dl.STEP)
    assert op.q_left == -theta
    assert op.gap_halfwidth == pytest.approx(abs(theta))
    assert complex(op.coupling(-5.0)) == -theta
    assert complex(op.coupling(5.0)) == 1j * theta
