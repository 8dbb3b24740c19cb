"""Edge module: truncated solvers vs the full-line Wronskian oracle, flow."""

from dataclasses import replace

import numpy as np
import pytest

from dislospec import bulk, dirac_line, edge
from dislospec import potential as P
from dislospec.errors import DomainTooSmall, InGapViolation

# frozen oracle value for the toy junction state (full-line Wronskian root,
# cross-checked below against two unrelated truncated discretizations)
TOY_ROOT = 9.879195506333987


@pytest.fixture(scope="module")
def toy():
    return edge.EdgeProblem(
        V=P.zero(),
        W=P.cosine(1, 2.0),
        n=1,
        profile=dirac_line.TransitionProfile("tanh", 1.0),
    )


def test_oracle_root_is_frozen(toy):
    roots = edge.wronskian_roots(toy, np.pi)
    assert roots.size == 1
    assert abs(roots[0] - TOY_ROOT) < 1e-10


def test_finite_difference_agrees_with_oracle(toy):
    prob = replace(toy, discretization=edge.FiniteDifference(step=0.01))
    states = [s for s in edge.edge_spectrum_in_gap(prob, np.pi) if s.is_junction]
    assert len(states) == 1
    assert abs(states[0].energy - TOY_ROOT) < 1e-6
    assert abs(states[0].loc_center) < 1.0


def test_sine_spectral_agrees_with_oracle(toy):
    prob = replace(toy, discretization=edge.SineSpectral(1400))
    states = [s for s in edge.edge_spectrum_in_gap(prob, np.pi) if s.is_junction]
    assert len(states) == 1
    assert abs(states[0].energy - TOY_ROOT) < 1e-6


def test_fd_matrix_is_symmetric(toy):
    _, A = edge.assemble_edge_operator(toy, 1.3)
    diff = (A - A.T).tocoo()
    assert diff.nnz == 0 or np.max(np.abs(diff.data)) == 0.0


def test_bump_is_local_and_enters_the_potential(toy):
    F = edge.Bump(height=0.7, halfwidth=2.0, center=1.0)
    assert F(1.0) == pytest.approx(0.7)
    assert F(3.1) == 0.0 and F(-1.1) == 0.0
    prob = replace(toy, F=F)
    xs = np.linspace(-10, 10, 401)
    d = prob.potential(0.9)(xs) - toy.potential(0.9)(xs)
    assert np.all(d[np.abs(xs - 1.0) >= 2.0] == 0.0)
    assert np.max(np.abs(d)) > 0.5


def test_domain_too_small_guard(toy):
    prob = replace(toy, decay_length=20.0)  # needs L >= 400
    with pytest.raises(DomainTooSmall):
        edge.assemble_edge_operator(prob, 0.0)


def test_oracle_rejects_in_band_energy(toy):
    with pytest.raises(InGapViolation):
        edge.wronskian_oracle(toy, np.pi, 2.0)  # deep inside the first band


def test_gap_window_brackets_the_root(toy):
    lo, hi = edge.gap_window(toy, np.pi)
    assert lo < TOY_ROOT < hi


def test_reference_energy_is_periodic(n1):
    sel = bulk.gap_scan_h1(n1.sc.V, n1.sc.W, 1)
    E_ref = edge.reference_energy(sel)
    assert E_ref(0.0) == pytest.approx(E_ref(2 * np.pi), abs=1e-12)
    assert E_ref(-0.3) == pytest.approx(E_ref(2 * np.pi - 0.3), abs=1e-12)


def test_scaled_flow_is_minus_one(n1):
    sel = bulk.gap_scan_h1(n1.sc.V, n1.sc.W, 1)
    prob = edge.EdgeProblem(
        V=n1.sc.V, W=n1.sc.W, n=1, profile=dirac_line.TransitionProfile("tanh", 1.0)
    )
    trace = edge.spectral_flow(prob, sel, n_t=48)
    assert trace.total == -1
    assert len(trace.crossings) == 1
    # the single crossing sits near t = pi where theta passes its far side
    assert abs(trace.crossings[0][0] - np.pi) < 0.1


def test_scaling_table_matches_dirac_prediction(n1):
    base = edge.EdgeProblem(V=n1.sc.V, W=n1.sc.W, n=1, profile=dirac_line.STEP)
    rows = edge.theorem_scaling_table(
        base, n1.dd, n1.cc, np.pi / 2, [0.25, 0.125], grid_points=60
    )
    assert [r.count for r in rows] == [1, 1]
    assert rows[0].max_deviation < 1e-7
    assert rows[1].ratio is not None and 2.5 < rows[1].ratio < 5.0


def test_adiabatic_problem_slows_the_profile(n1):
    base = edge.EdgeProblem(V=n1.sc.V, W=n1.sc.W, n=1, profile=dirac_line.STEP)
    slow = edge.adiabatic_problem(base, 0.05)
    assert slow.delta == 0.05
    assert slow.profile.kind == "tanh"
    assert slow.profile.width == pytest.approx(20.0)


def test_flow_csv_export(tmp_path, n1):
    sel = bulk.gap_scan_h1(n1.sc.V, n1.sc.W, 1)
    prob = edge.EdgeProblem(
        V=n1.sc.V, W=n1.sc.W, n=1, profile=dirac_line.TransitionProfile("tanh", 1.0)
    )
    trace = edge.spectral_flow(prob, sel, n_t=24, trace_points=12)
    path = tmp_path / "flow.csv"
    edge.export_flow_csv(trace, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "t,branch,energy,loc_center,is_junction"
    assert len(lines) > 1
