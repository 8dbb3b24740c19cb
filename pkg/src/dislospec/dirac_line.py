"""Effective Dirac operators on the line and their spectral flow.

The operators have the form

    nu sigma_3 D_x + sigma(q(x)),   sigma(q) = [[0, conj q], [q, 0]],

with q(x) = chi_-(x) q_left + chi_+(x) q_right interpolating two constant
couplings.  Bound states in the essential gap (-theta_-, theta_-),
theta_- = min(|q_left|, |q_right|), are found by matching the unique
exponentially decaying solution from each side.

The antiunitary symmetry u -> sigma_1 conj(u) commutes with the operator,
so the decaying directions can be taken in the fixed ("C-real") subspace
u_2 = conj(u_1); writing u_1 = p + i y reduces everything to a *real*
linear 2-dim flow

    p' = -(1/nu) ((E + Re q) y + Im q  p)
    y' =  (1/nu) ((E - Re q) p + Im q  y)

whose decaying eigendirections are real vectors.  The matching function is
then the real 2x2 determinant of the two boundary directions, with sign
continuity maintained along the scan so roots can be bracketed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from .errors import BranchTrackingAmbiguous, NoDecayingDirection, OutOfRange

_EDGE_MARGIN = 1e-4      # relative offset from the essential-gap edges
_GRID_POINTS = 400


@dataclass(frozen=True)
class TransitionProfile:
    """Interpolation profile chi_+ from 0 (far left) to 1 (far right)."""

    kind: str = "tanh"            # "step" or "tanh"
    width: float = 1.0

    def chi_plus(self, x):
        if self.kind == "step":
            return np.where(np.asarray(x, dtype=float) > 0, 1.0, 0.0)
        return 0.5 * (1.0 + np.tanh(np.asarray(x, dtype=float) / self.width))

    def chi_minus(self, x):
        return 1.0 - self.chi_plus(x)

    def kappa(self, x):
        return 2.0 * self.chi_plus(x) - 1.0

    @property
    def support_halfwidth(self) -> float:
        """Beyond this |x| the profile equals its asymptote to ~1e-17."""
        if self.kind == "step":
            return 0.0
        return 20.0 * self.width


STEP = TransitionProfile(kind="step")


@dataclass(frozen=True)
class DiracLineOperator:
    """nu sigma_3 D_x + sigma(q(x)) at one value of the dislocation phase."""

    nu_star: float
    q_left: complex
    q_right: complex
    profile: TransitionProfile

    @property
    def gap_halfwidth(self) -> float:
        return min(abs(self.q_left), abs(self.q_right))

    def coupling(self, x):
        return self.profile.chi_minus(x) * self.q_left + self.profile.chi_plus(
            x
        ) * self.q_right


def dislocated_operator(
    nu_star: float,
    theta_star: complex,
    right_coupling: complex,
    profile: TransitionProfile,
) -> DiracLineOperator:
    """The family member with left coupling -theta* and the given right coupling."""
    return DiracLineOperator(
        nu_star=float(nu_star),
        q_left=-theta_star,
        q_right=right_coupling,
        profile=profile,
    )


def model_flow_operator(
    nu_star: float, theta_star: complex, m: int, t: float, profile: TransitionProfile
) -> DiracLineOperator:
    """The model family: sgn(nu) sigma_3 D_x - chi_- sigma* - chi_+ sigma(theta* e^{imt})."""
    return DiracLineOperator(
        nu_star=float(np.sign(nu_star)),
        q_left=-theta_star,
        q_right=-theta_star * np.exp(1j * m * t),
        profile=profile,
    )


def step_eigenvalue(t: float, nu_star: float, theta_F: float) -> float:
    """Closed form for the single bound state of the step-profile model at phase t."""
    if theta_F <= 0:
        raise ValueError("theta_F must be positive")
    if not 0.0 < t < 2 * np.pi:
        raise OutOfRange("bound state merges with the essential spectrum at t in {0, 2 pi}")
    return float(np.sign(nu_star)) * theta_F * np.cos(t / 2.0)


# -- real 2-dim reduction ----------------------------------------------------

def _real_matrix(nu: float, q: complex, E: float) -> np.ndarray:
    return (
        np.array(
            [[-q.imag, -(E + q.real)], [E - q.real, q.imag]],
            dtype=float,
        )
        / nu
    )


def _decaying_direction(nu: float, q: complex, E: float, side: str) -> np.ndarray:
    """Real eigendirection of the constant-coefficient flow that decays at -inf
    ('left', eigenvalue +s/|nu|) or +inf ('right', eigenvalue -s/|nu|)."""
    s2 = abs(q) ** 2 - E * E
    if s2 <= 0:
        raise NoDecayingDirection(f"E = {E} outside the local gap (|q| = {abs(q)})")
    lam = np.sqrt(s2) / abs(nu)
    if side == "right":
        lam = -lam
    # two analytically equivalent eigenvector formulas; each degenerates on a
    # one-point set, so take the better-conditioned one
    w1 = np.array([E + q.real, -(q.imag + lam * nu)])
    w2 = np.array([q.imag - lam * nu, -(E - q.real)])
    w = w1 if np.dot(w1, w1) >= np.dot(w2, w2) else w2
    return w / np.linalg.norm(w)


def _boundary_directions(op: DiracLineOperator, E: float):
    """Directions at x=0 of the solutions decaying at -inf and +inf."""
    wL = _decaying_direction(op.nu_star, op.q_left, E, "left")
    wR = _decaying_direction(op.nu_star, op.q_right, E, "right")
    X = op.profile.support_halfwidth
    if X > 0:

        def rhs(x, w):
            q = complex(op.coupling(x))
            return _real_matrix(op.nu_star, q, E) @ w

        solL = solve_ivp(rhs, (-X, 0.0), wL, method="DOP853", rtol=1e-12, atol=1e-14)
        solR = solve_ivp(rhs, (X, 0.0), wR, method="DOP853", rtol=1e-12, atol=1e-14)
        wL = solL.y[:, -1]
        wR = solR.y[:, -1]
        wL = wL / np.linalg.norm(wL)
        wR = wR / np.linalg.norm(wR)
    return wL, wR


class _MatchingScan:
    """Matching determinant with sign continuity along successive evaluations."""

    def __init__(self, op: DiracLineOperator):
        self.op = op
        self._prev: tuple[np.ndarray, np.ndarray] | None = None

    def __call__(self, E: float) -> float:
        wL, wR = _boundary_directions(self.op, E)
        if self._prev is not None:
            pL, pR = self._prev
            if np.dot(wL, pL) < 0:
                wL = -wL
            if np.dot(wR, pR) < 0:
                wR = -wR
        self._prev = (wL, wR)
        return float(wL[0] * wR[1] - wL[1] * wR[0])


@dataclass(frozen=True)
class DiracSpectrum:
    """Bound-state energies inside the essential gap."""

    eigenvalues: np.ndarray
    gap_halfwidth: float
    method: str


def dirac_bound_states(
    op: DiracLineOperator,
    grid_points: int = _GRID_POINTS,
    tol_factor: float = 1e-10,
) -> DiracSpectrum:
    """All matching-determinant roots in the open gap via bracketing + bisection."""
    hw = op.gap_halfwidth
    if hw <= 0:
        raise NoDecayingDirection("a coupling vanishes: no essential gap")
    lo = -hw * (1.0 - _EDGE_MARGIN)
    hi = hw * (1.0 - _EDGE_MARGIN)
    # denser sampling near the edges where branches may accumulate
    base = np.linspace(lo, hi, grid_points)
    edge = hw * (1.0 - np.geomspace(_EDGE_MARGIN, 1e-2, 24))
    Es = np.unique(np.concatenate([base, edge, -edge]))
    scan = _MatchingScan(op)
    vals = np.array([scan(E) for E in Es])
    roots = []
    tol = tol_factor * hw
    for a, b, fa, fb in zip(Es[:-1], Es[1:], vals[:-1], vals[1:]):
        if fa == 0.0:
            roots.append(a)
            continue
        if fa * fb < 0:
            # bisection with a fresh sign-continuous scan seeded at the bracket
            local = _MatchingScan(op)
            fa_l = local(a)
            x0, x1, f0 = a, b, fa_l
            while x1 - x0 > tol:
                xm = 0.5 * (x0 + x1)
                fm = local(xm)
                if f0 * fm <= 0:
                    x1 = xm
                else:
                    x0, f0 = xm, fm
            roots.append(0.5 * (x0 + x1))
    if vals[-1] == 0.0:
        roots.append(Es[-1])
    return DiracSpectrum(
        eigenvalues=np.array(sorted(roots)),
        gap_halfwidth=hw,
        method="step-exact" if op.profile.kind == "step" else "shooting",
    )


def dirac_spectral_flow(
    family: Callable[[float], DiracLineOperator],
    n_t: int = 128,
    refine_window: float = 1e-3,
) -> int:
    """Signed count of bound-state branches crossing E = 0, downward positive.

    Events are located as zero crossings of t -> matching(0; t); the crossing
    direction comes from the bound-state position just before/after the event.
    """
    # evaluate f(0; t) on the closed grid with directional sign continuity;
    # the directions live in RP^1, so the t = 2 pi sample may legitimately
    # return with the opposite sign to t = 0 — never identify the endpoints
    ts_closed = np.linspace(0.0, 2 * np.pi, n_t + 1)
    step = ts_closed[1] - ts_closed[0]
    for _attempt in range(4):
        vals_closed = _zero_energy_chain(family, ts_closed)
        hit = np.nonzero(vals_closed == 0.0)[0]
        interior = hit[(hit > 0) & (hit < n_t)]
        if interior.size == 0:
            break
        # a grid node landed exactly on a crossing; nudge it off-center
        ts_closed = ts_closed.copy()
        ts_closed[interior] += 0.381966 * step
    else:
        raise BranchTrackingAmbiguous("grid nodes keep landing exactly on crossings")
    if vals_closed[0] == 0.0 or vals_closed[-1] == 0.0:
        raise BranchTrackingAmbiguous("crossing at the endpoint t = 0 (mod 2 pi)")
    total = 0
    for a, b, fa, fb in zip(ts_closed[:-1], ts_closed[1:], vals_closed[:-1], vals_closed[1:]):
        if fa * fb < 0:
            t_ev = _bisect_in_t(family, a, b)
            slope = _branch_slope(family, t_ev, refine_window)
            if abs(slope) == 0:
                raise BranchTrackingAmbiguous(f"flat crossing at t = {t_ev}")
            total += 1 if slope < 0 else -1
    return total


def _zero_energy_chain(family, ts: np.ndarray) -> np.ndarray:
    """f(0; t) along ts with the boundary directions sign-chained in order."""
    prev = None
    vals = []
    for t in ts:
        wL, wR = _boundary_directions(family(t), 0.0)
        if prev is not None:
            if np.dot(wL, prev[0]) < 0:
                wL = -wL
            if np.dot(wR, prev[1]) < 0:
                wR = -wR
        prev = (wL, wR)
        vals.append(wL[0] * wR[1] - wL[1] * wR[0])
    return np.array(vals)


def _matching_at_zero(op: DiracLineOperator, anchor=None):
    wL, wR = _boundary_directions(op, 0.0)
    if anchor is not None:
        if np.dot(wL, anchor[0]) < 0:
            wL = -wL
        if np.dot(wR, anchor[1]) < 0:
            wR = -wR
    return float(wL[0] * wR[1] - wL[1] * wR[0]), (wL, wR)


def _bisect_in_t(family, a: float, b: float, tol: float = 1e-10) -> float:
    fa, anchor = _matching_at_zero(family(a))
    while b - a > tol:
        m = 0.5 * (a + b)
        fm, anchor = _matching_at_zero(family(m), anchor)
        if fa * fm <= 0:
            b = m
        else:
            a, fa = m, fm
    return 0.5 * (a + b)


def _branch_slope(family, t_ev: float, window: float) -> float:
    """Secant slope of the crossing branch across the event."""
    mus = []
    for t in (t_ev - window, t_ev + window):
        op = family(t)
        # the crossing branch stays near 0, so a local scan suffices
        hw = op.gap_halfwidth
        scan = _MatchingScan(op)
        Es = np.linspace(-0.5 * hw, 0.5 * hw, 64)
        vals = np.array([scan(E) for E in Es])
        roots = []
        for a, b, fa, fb in zip(Es[:-1], Es[1:], vals[:-1], vals[1:]):
            if fa * fb < 0:
                local = _MatchingScan(op)
                f0 = local(a)
                x0, x1 = a, b
                while x1 - x0 > 1e-10 * hw:
                    xm = 0.5 * (x0 + x1)
                    fm = local(xm)
                    if f0 * fm <= 0:
                        x1 = xm
                    else:
                        x0, f0 = xm, fm
                roots.append(0.5 * (x0 + x1))
        if not roots:
            raise BranchTrackingAmbiguous(f"no bound state adjacent to crossing at t={t_ev}")
        mus.append(min(roots, key=abs))
    return (mus[1] - mus[0]) / (2 * window)
