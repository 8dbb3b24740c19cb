"""Dislocated Schrödinger operators on the line and their edge spectral flow.

The dislocated family glues the periodic bulk V + delta W on the far left to
V + delta W_t on the far right through a transition profile, optionally with
a compact localized perturbation F.  In-gap spectra come from two
independent routes:

* a truncated self-adjoint eigenproblem on [-L, L] with Dirichlet walls
  (finite differences of order 4, or a sine-spectral basis), whose spurious
  wall-localized branches are filtered by the localization center <x>;
* a full-line Wronskian oracle: at energy E in the common bulk gap, the
  one-period transfer matrix of each bulk is hyperbolic, its Floquet
  eigenvectors give the unique decaying solution direction on each side,
  and propagating both to x = 0 yields a real 2x2 matching determinant
  whose zeros are exactly the L^2(R) eigenvalues.

The oracle has no truncation error at all (the potential equals its bulk
asymptote beyond the transition window to machine precision), so it is the
arbiter for the spectral flow: the flow is the signed count of zeros of
t -> f(E_ref(t); t), downward-moving branches counted positive.  For the
thinnest gaps the Floquet discrimination |tr|/2 - 1 sits at the 1e-13
level, far below double rounding of the transfer product; the kernel then
switches to its 80-bit long-double path automatically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh

from . import _kern, bloch, bulk, dirac_line
from .errors import (
    BranchTrackingAmbiguous,
    CountMismatch,
    DomainTooSmall,
    InGapViolation,
    SolverFailure,
)
from .potential import TrigPolynomial, translate

_MULTIPLIER_TOL = 1e-8       # |Floquet multiplier| this close to 1 is "not in a gap"
_LONGDOUBLE_TRIGGER = 1e-9   # |tr|/2 - 1 below this in double -> 80-bit path
_N_STEPS_DOUBLE = 400        # Magnus steps per period (double path)
_N_STEPS_LONG = 3200         # Magnus steps per period (long-double path)
_ROOT_MARGIN = 0.01          # relative stand-off from the gap edges in E scans
_SQRT3 = math.sqrt(3.0)


# -- problem data ------------------------------------------------------------

@dataclass(frozen=True)
class Bump:
    """Compact-support multiplicative perturbation: a cos^2 window."""

    height: float
    halfwidth: float
    center: float = 0.0

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        u = (x - self.center) / self.halfwidth
        out = np.where(np.abs(u) < 1.0, self.height * np.cos(0.5 * np.pi * u) ** 2, 0.0)
        return out if x.shape else float(out)

    @property
    def support_halfwidth(self) -> float:
        return abs(self.center) + self.halfwidth


@dataclass(frozen=True)
class FiniteDifference:
    """Order-4 centered differences with Dirichlet walls (antisymmetric ghosts)."""

    step: float = 0.02
    order: int = 4


@dataclass(frozen=True)
class SineSpectral:
    """Dirichlet sine basis sin(k pi (x + L) / 2L), k = 1..modes."""

    modes: int = 1400


@dataclass(frozen=True)
class EdgeProblem:
    """Dislocated operator family D_x^2 + V + delta (chi_- W + chi_+ W_t) + F."""

    V: TrigPolynomial
    W: TrigPolynomial
    n: int
    profile: dirac_line.TransitionProfile
    delta: float = 1.0
    F: Bump | None = None
    L: float = 150.0
    discretization: FiniteDifference | SineSpectral = field(default_factory=FiniteDifference)
    decay_length: float | None = None   # localization scale of gap states, if known

    def bulk_left(self) -> TrigPolynomial:
        return self.V + self.delta * self.W

    def bulk_right(self, t: float) -> TrigPolynomial:
        return self.V + self.delta * translate(self.W, t)

    def potential(self, t: float) -> Callable[[np.ndarray], np.ndarray]:
        """Pointwise potential at dislocation phase t (vectorized in x)."""
        Wt = translate(self.W, t)

        def U(x):
            x = np.asarray(x, dtype=float)
            val = self.V(x) + self.delta * (
                self.profile.chi_minus(x) * self.W(x)
                + self.profile.chi_plus(x) * Wt(x)
            )
            if self.F is not None:
                val = val + self.F(x)
            return val

        return U

    def transition_halfwidth(self) -> int:
        """Integer number of periods beyond which the potential is pure bulk."""
        X = max(1.0, self.profile.support_halfwidth)
        if self.F is not None:
            X = max(X, self.F.support_halfwidth)
        return int(math.ceil(X))


# -- truncated eigenproblem --------------------------------------------------

def assemble_edge_operator(prob: EdgeProblem, t: float):
    """Discretize on [-L, L] with Dirichlet walls; returns (x_grid, matrix).

    Finite differences give a symmetric pentadiagonal sparse matrix (the
    wall closure uses antisymmetric ghost values, which keeps both the
    symmetry and the stencil order); the sine basis gives a dense matrix
    with diagonal kinetic part and a quadrature-sampled potential block.
    """
    if prob.decay_length is not None and prob.L < 20.0 * prob.decay_length:
        raise DomainTooSmall(
            f"L = {prob.L} below 20 x decay length {prob.decay_length:.3g}"
        )
    U = prob.potential(t)
    disc = prob.discretization
    L = float(prob.L)
    if isinstance(disc, FiniteDifference):
        h = float(disc.step)
        N = int(round(2 * L / h))
        x = -L + h * np.arange(1, N)
        inv12h2 = 1.0 / (12.0 * h * h)
        main = 30.0 * inv12h2 + U(x)
        # antisymmetric ghost u(-L - y) = -u(-L + y) folds the outermost
        # stencil weight back onto the first interior node
        main[0] -= inv12h2
        main[-1] -= inv12h2
        off1 = np.full(N - 2, -16.0 * inv12h2)
        off2 = np.full(N - 3, inv12h2)
        A = sp.diags(
            [off2, off1, main, off1, off2], offsets=[-2, -1, 0, 1, 2], format="csc"
        )
        return x, A
    # sine-spectral: exact discrete orthogonality grid x_j = -L + j (2L/Nq)
    M = int(disc.modes)
    Nq = 4 * M
    dx = 2 * L / Nq
    xq = -L + dx * np.arange(1, Nq)
    k = np.arange(1, M + 1)
    S = np.sin(np.outer(xq + L, k) * (np.pi / (2 * L))) / math.sqrt(L)
    A = (S.T * (U(xq) * dx)) @ S
    A[np.diag_indices_from(A)] += (k * np.pi / (2 * L)) ** 2
    A = 0.5 * (A + A.T)
    return xq, A


@dataclass(frozen=True)
class EdgeState:
    """One in-gap eigenpair of the truncated operator, with localization tags."""

    energy: float
    loc_center: float
    ipr: float
    is_junction: bool


def edge_spectrum_in_gap(
    prob: EdgeProblem,
    t: float,
    window: tuple[float, float] | None = None,
    K: int | None = None,
) -> list[EdgeState]:
    """All truncated-operator eigenvalues inside the bulk gap, tagged by <x>.

    States with localization center |<x>| <= L/2 are junction states; the
    rest live at the Dirichlet walls and are truncation artifacts.
    """
    if window is None:
        window = gap_window(prob, t, K)
    lo, hi = window
    x, A = assemble_edge_operator(prob, t)
    sigma = 0.5 * (lo + hi)
    if sp.issparse(A):
        k = 16
        nmax = min(256, A.shape[0] - 2)
        while True:
            try:
                vals, vecs = eigsh(A, k=k, sigma=sigma, which="LM")
            except Exception as exc:  # pragma: no cover - ARPACK failure path
                raise SolverFailure(f"shift-invert eigensolve failed: {exc}") from exc
            if (vals.min() < lo and vals.max() > hi) or k >= nmax:
                break
            k = min(2 * k, nmax)
    else:
        vals, vecs = np.linalg.eigh(A)
        M = prob.discretization.modes
        L = float(prob.L)
        kk = np.arange(1, M + 1)
        S = np.sin(np.outer(x + L, kk) * (np.pi / (2 * L))) / math.sqrt(L)
        vecs = S @ vecs
    states = []
    if isinstance(prob.discretization, FiniteDifference):
        dx = prob.discretization.step
    else:
        dx = x[1] - x[0]
    for lam, u in sorted(zip(vals, vecs.T), key=lambda p: p[0]):
        if not lo < lam < hi:
            continue
        w = np.abs(u) ** 2
        mass = w.sum() * dx
        center = float((x * w).sum() * dx / mass)
        ipr = float((w * w).sum() * dx / mass**2)
        states.append(
            EdgeState(
                energy=float(lam),
                loc_center=center,
                ipr=ipr,
                is_junction=abs(center) <= prob.L / 2.0,
            )
        )
    return states


# -- full-line Wronskian oracle ----------------------------------------------

def gap_window(prob: EdgeProblem, t: float, K: int | None = None) -> tuple[float, float]:
    """Common spectral gap (bands n, n+1) of the two asymptotic bulks."""
    n = prob.n
    if K is None:
        K = bloch.default_cutoff(prob.bulk_left(), n + 8)
    lo = -np.inf
    hi = np.inf
    for p in (prob.bulk_left(), prob.bulk_right(t)):
        vals = np.linalg.eigvalsh(bloch.assemble_bloch(p, np.pi, K).matrix)
        lo = max(lo, float(vals[n - 1]))
        hi = min(hi, float(vals[n]))
    if not lo < hi:
        raise InGapViolation("asymptotic bulk gaps do not overlap")
    return lo, hi


def _gauss_samples(f, a: float, b: float, n_steps: int):
    """Potential samples at the two Gauss nodes of each Magnus step on [a, b]."""
    h = (b - a) / n_steps
    mids = a + h * (np.arange(n_steps) + 0.5)
    off = h / (2.0 * _SQRT3)
    return f(mids - off), f(mids + off), h


def _hyperbolic_directions(T: np.ndarray):
    """(growing, decaying) eigendirections of a real det-1 transfer matrix."""
    tr = T[0, 0] + T[1, 1]
    disc = (tr / 2.0) ** 2 - 1.0
    if disc <= 0:
        raise InGapViolation("transfer matrix is elliptic: energy inside a band")
    root = np.sqrt(disc)
    s = 1.0 if tr >= 0 else -1.0
    rho_big = tr / 2.0 + s * root
    if abs(abs(rho_big) - 1.0) <= _MULTIPLIER_TOL:
        raise InGapViolation(
            f"Floquet multiplier modulus within {_MULTIPLIER_TOL:.0e} of 1"
        )
    dirs = []
    for rho in (rho_big, tr / 2.0 - s * root):
        w1 = np.array([T[0, 1], rho - T[0, 0]], dtype=T.dtype)
        w2 = np.array([rho - T[1, 1], T[1, 0]], dtype=T.dtype)
        w = w1 if w1 @ w1 >= w2 @ w2 else w2
        dirs.append(w / np.sqrt(w @ w))
    return dirs[0], dirs[1]


class WronskianScan:
    """Matching determinant f(E) of the full-line dislocated operator.

    Bulk and window potential samples are taken once at construction; each
    energy evaluation is then a handful of compiled transfer products.  The
    boundary directions are sign-chained across successive calls so that
    f(E) is continuous along a scan and roots can be bracketed.
    """

    def __init__(
        self,
        prob: EdgeProblem,
        t: float,
        n_steps: int | None = None,
        longdouble: bool | None = None,
        window_factor: float = 1.0,
    ):
        self.prob = prob
        self.t = float(t)
        self.X = int(math.ceil(prob.transition_halfwidth() * window_factor))
        self._auto = longdouble is None
        self.longdouble = bool(longdouble) if longdouble is not None else False
        self._n_steps_arg = n_steps
        self._prev = None
        self._sample(n_steps)

    def _sample(self, n_steps):
        if n_steps is None:
            n_steps = _N_STEPS_LONG if self.longdouble else _N_STEPS_DOUBLE
        self.n_steps = int(n_steps)
        qL = self.prob.bulk_left()
        qR = self.prob.bulk_right(self.t)
        U = self.prob.potential(self.t)
        self._per_left = _gauss_samples(qL, 0.0, 1.0, self.n_steps)
        self._per_right = _gauss_samples(qR, 0.0, 1.0, self.n_steps)
        X = float(self.X)
        self._win_neg = _gauss_samples(U, -X, 0.0, self.n_steps * self.X)
        self._win_pos = _gauss_samples(U, 0.0, X, self.n_steps * self.X)

    def _transfer(self, samples, E: float) -> np.ndarray:
        q1, q2, h = samples
        return _kern.propagate(q1, q2, h, E, longdouble=self.longdouble)

    def directions(self, E: float):
        """Unit boundary-data columns at x = 0 decaying at -inf and +inf."""
        T_left = self._transfer(self._per_left, E)
        if self._auto and not self.longdouble:
            tr = abs(T_left[0, 0] + T_left[1, 1]) / 2.0 - 1.0
            if tr < _LONGDOUBLE_TRIGGER:
                self.longdouble = True
                self._sample(self._n_steps_arg)
                T_left = self._transfer(self._per_left, E)
        T_right = self._transfer(self._per_right, E)
        v_grow, _ = _hyperbolic_directions(T_left)
        _, v_decay = _hyperbolic_directions(T_right)
        wL = self._transfer(self._win_neg, E) @ v_grow
        # det = 1, so the inverse window transfer is the adjugate
        Tp = self._transfer(self._win_pos, E)
        wR = np.array(
            [
                Tp[1, 1] * v_decay[0] - Tp[0, 1] * v_decay[1],
                -Tp[1, 0] * v_decay[0] + Tp[0, 0] * v_decay[1],
            ],
            dtype=Tp.dtype,
        )
        wL = wL / np.sqrt(wL @ wL)
        wR = wR / np.sqrt(wR @ wR)
        return wL, wR

    def __call__(self, E: float) -> float:
        wL, wR = self.directions(E)
        if self._prev is not None:
            pL, pR = self._prev
            if wL @ pL < 0:
                wL = -wL
            if wR @ pR < 0:
                wR = -wR
        self._prev = (wL, wR)
        return float(wL[0] * wR[1] - wL[1] * wR[0])


def wronskian_oracle(
    prob: EdgeProblem, t: float, E: float, n_steps: int | None = None
) -> float:
    """One-shot matching-determinant value at energy E (full line, no walls)."""
    return WronskianScan(prob, t, n_steps=n_steps)(E)


def wronskian_roots(
    prob: EdgeProblem,
    t: float,
    window: tuple[float, float] | None = None,
    grid_points: int = 240,
    margin: float = _ROOT_MARGIN,
    n_steps: int | None = None,
    window_factor: float = 1.0,
) -> np.ndarray:
    """All full-line eigenvalues in the gap via sign-change bracketing."""
    if window is None:
        window = gap_window(prob, t)
    lo, hi = window
    width = hi - lo
    lo += margin * width
    hi -= margin * width
    scan = WronskianScan(prob, t, n_steps=n_steps, window_factor=window_factor)
    Es = np.linspace(lo, hi, grid_points)
    vals = np.array([scan(E) for E in Es])
    roots = []
    tol = 1e-9 * width
    for a, b, fa, fb in zip(Es[:-1], Es[1:], vals[:-1], vals[1:]):
        if fa == 0.0:
            roots.append(a)
            continue
        if fa * fb < 0:
            local = WronskianScan(
                prob, t, n_steps=n_steps, longdouble=scan.longdouble,
                window_factor=window_factor,
            )
            f0 = local(a)
            x0, x1 = a, b
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
    return np.array(sorted(roots))


# -- spectral flow -----------------------------------------------------------

@dataclass
class SpectralFlowTrace:
    """Edge spectral flow with its crossing ledger and branch samples."""

    t_grid: np.ndarray
    e_ref: np.ndarray                     # reference energy samples on t_grid
    gap_edges: np.ndarray                 # shape (len(t_grid), 2)
    branches: list                        # per branch: list of (t, E, loc, junction)
    crossings: list                       # (t_event, sign) with sign in {-1, +1}
    total: int


def reference_energy(sel: bulk.GapSelection) -> Callable[[float], float]:
    """Continuous periodic interpolant of the gap-scan reference energies."""
    tg = np.append(sel.t_grid, 2 * np.pi)
    Eg = np.append(sel.E_ref, sel.E_ref[0])

    def E_ref(t):
        return float(np.interp(np.mod(t, 2 * np.pi), tg, Eg))

    return E_ref


def spectral_flow(
    prob: EdgeProblem,
    E_ref: Callable[[float], float] | bulk.GapSelection,
    n_t: int = 64,
    refine_window: float = 1e-3,
    trace_points: int = 0,
    n_steps: int | None = None,
    window_factor: float = 1.0,
) -> SpectralFlowTrace:
    """Signed count of branches crossing E_ref(t), downward positive.

    Events are zeros of t -> f(E_ref(t); t) with the boundary directions
    sign-chained along the closed grid (they live in RP^1, so the t = 2 pi
    sample may return with the opposite sign to t = 0; the endpoints are
    never identified).  Each event's sign comes from the motion of the
    nearest full-line eigenvalue relative to E_ref across the event.
    """
    if isinstance(E_ref, bulk.GapSelection):
        E_ref = reference_energy(E_ref)

    def scan_at(t):
        return WronskianScan(prob, t, n_steps=n_steps, window_factor=window_factor)

    ts = np.linspace(0.0, 2 * np.pi, n_t + 1)
    step = ts[1] - ts[0]
    for _attempt in range(4):
        vals, gaps = _flow_chain(prob, ts, E_ref, scan_at)
        hit = np.nonzero(vals == 0.0)[0]
        interior = hit[(hit > 0) & (hit < n_t)]
        if interior.size == 0:
            break
        ts = ts.copy()
        ts[interior] += 0.381966 * step
    else:
        raise BranchTrackingAmbiguous("grid nodes keep landing exactly on crossings")
    if vals[0] == 0.0 or vals[-1] == 0.0:
        raise BranchTrackingAmbiguous("crossing at the endpoint t = 0 (mod 2 pi)")

    crossings = []
    total = 0
    for a, b, fa, fb in zip(ts[:-1], ts[1:], vals[:-1], vals[1:]):
        if fa * fb >= 0:
            continue
        t_ev = _bisect_flow_event(prob, E_ref, scan_at, a, b)
        slope = _crossing_slope(prob, E_ref, t_ev, refine_window, n_steps, window_factor)
        if slope == 0.0:
            raise BranchTrackingAmbiguous(f"flat crossing at t = {t_ev}")
        sgn = 1 if slope < 0 else -1
        crossings.append((float(t_ev), sgn))
        total += sgn

    branches: list = []
    t_trace = ts[:-1]
    gap_edges = np.array(gaps[:-1])
    e_samples = np.array([E_ref(t) for t in t_trace])
    if trace_points > 0:
        t_trace = np.linspace(0.0, 2 * np.pi, trace_points, endpoint=False)
        gap_edges = np.array([gap_window(prob, t) for t in t_trace])
        e_samples = np.array([E_ref(t) for t in t_trace])
        branches = _trace_branches(prob, t_trace, gap_edges, n_steps, window_factor)
    return SpectralFlowTrace(
        t_grid=t_trace,
        e_ref=e_samples,
        gap_edges=gap_edges,
        branches=branches,
        crossings=crossings,
        total=total,
    )


def _flow_chain(prob, ts, E_ref, scan_at):
    """f(E_ref(t); t) along ts, boundary directions sign-chained in order."""
    prev = None
    vals = []
    gaps = []
    for t in ts:
        gaps.append(gap_window(prob, t))
        wL, wR = scan_at(t).directions(E_ref(t))
        if prev is not None:
            if wL @ prev[0] < 0:
                wL = -wL
            if wR @ prev[1] < 0:
                wR = -wR
        prev = (wL, wR)
        vals.append(float(wL[0] * wR[1] - wL[1] * wR[0]))
    return np.array(vals), gaps


def _bisect_flow_event(prob, E_ref, scan_at, a, b, tol=1e-10):
    def evaluate(t, anchor):
        wL, wR = scan_at(t).directions(E_ref(t))
        if anchor is not None:
            if wL @ anchor[0] < 0:
                wL = -wL
            if wR @ anchor[1] < 0:
                wR = -wR
        return float(wL[0] * wR[1] - wL[1] * wR[0]), (wL, wR)

    fa, anchor = evaluate(a, None)
    while b - a > tol:
        m = 0.5 * (a + b)
        fm, anchor = evaluate(m, anchor)
        if fa * fm <= 0:
            b = m
        else:
            a, fa = m, fm
    return 0.5 * (a + b)


def _crossing_slope(prob, E_ref, t_ev, window, n_steps, window_factor):
    """Secant slope of (lambda(t) - E_ref(t)) for the branch at the event."""
    offsets = []
    for t in (t_ev - window, t_ev + window):
        lo, hi = gap_window(prob, t)
        e = E_ref(t)
        half = 0.25 * (hi - lo)
        roots = wronskian_roots(
            prob,
            t,
            window=(max(lo, e - half), min(hi, e + half)),
            grid_points=48,
            margin=0.0,
            n_steps=n_steps,
            window_factor=window_factor,
        )
        if roots.size == 0:
            raise BranchTrackingAmbiguous(
                f"no eigenvalue adjacent to the crossing at t = {t_ev}"
            )
        offsets.append(float(roots[np.argmin(np.abs(roots - e))] - e))
    return (offsets[1] - offsets[0]) / (2.0 * window)


def _trace_branches(prob, t_trace, gap_edges, n_steps, window_factor):
    """Stitch per-t full-line eigenvalues into branches by energy continuity."""
    branches = []
    active = {}  # branch index -> last energy
    for t, (lo, hi) in zip(t_trace, gap_edges):
        roots = wronskian_roots(
            prob, t, window=(lo, hi), n_steps=n_steps, window_factor=window_factor
        )
        jump_tol = 0.25 * (hi - lo)
        used = set()
        nxt = {}
        for lam in roots:
            best = None
            for idx, last in active.items():
                if idx in used:
                    continue
                if abs(lam - last) < jump_tol and (
                    best is None or abs(lam - active[best]) > abs(lam - last)
                ):
                    best = idx
            if best is None:
                best = len(branches)
                branches.append([])
            used.add(best)
            branches[best].append((float(t), float(lam), 0.0, True))
            nxt[best] = float(lam)
        active = nxt
    return branches


# -- adiabatic seeding by the effective Dirac operator -----------------------

@dataclass(frozen=True)
class ScalingRow:
    """One adiabatic strength delta with its junction-spectrum deviation."""

    delta: float
    count: int
    max_deviation: float
    ratio: float | None     # deviation ratio vs the previous (larger) delta


def adiabatic_problem(base: EdgeProblem, delta: float) -> EdgeProblem:
    """The slow-transition family: strength delta, profile width 1/delta."""
    return replace(
        base,
        delta=float(delta),
        profile=dirac_line.TransitionProfile(kind="tanh", width=1.0 / float(delta)),
    )


def theorem_scaling_table(
    base: EdgeProblem,
    dirac_data,
    curve,
    t: float,
    delta_list,
    n_steps: int | None = None,
    grid_points: int = 120,
) -> list[ScalingRow]:
    """Junction spectra of the slow family vs the Dirac-operator prediction.

    For each delta the full-line eigenvalues are compared against
    E* + delta mu_j, where mu_j are the bound states of the effective Dirac
    operator at phase t (computed with the width-1 profile, which is the
    transition profile in the slow variable).  Deviations must shrink
    quadratically in delta; a count differing from the Dirac bound-state
    count is an error, not a report line.
    """
    from .coupling import theta_from_fourier

    model = dirac_line.dislocated_operator(
        dirac_data.nu_star,
        curve.theta_star,
        complex(theta_from_fourier(curve.fourier, t)),
        dirac_line.TransitionProfile(kind="tanh", width=1.0),
    )
    mu = dirac_line.dirac_bound_states(model).eigenvalues
    rows = []
    prev_dev = None
    for delta in delta_list:
        prob = adiabatic_problem(base, delta)
        lam = wronskian_roots(prob, t, n_steps=n_steps, grid_points=grid_points)
        if lam.size != mu.size:
            raise CountMismatch(
                f"{lam.size} junction eigenvalues at delta={delta}, "
                f"Dirac operator predicts {mu.size}"
            )
        dev = float(np.max(np.abs(lam - (dirac_data.E_star + delta * mu))))
        ratio = None if prev_dev is None else prev_dev / dev
        rows.append(ScalingRow(delta=float(delta), count=int(lam.size), max_deviation=dev, ratio=ratio))
        prev_dev = dev
    return rows


# -- exports -----------------------------------------------------------------

def export_flow_csv(trace: SpectralFlowTrace, path) -> None:
    with open(path, "w") as fh:
        fh.write("t,branch,energy,loc_center,is_junction\n")
        for idx, branch in enumerate(trace.branches):
            for t, lam, loc, junction in branch:
                fh.write(f"{t!r},{idx},{lam!r},{loc!r},{junction}\n")


def plot_flow(trace: SpectralFlowTrace, path) -> None:
    """Spectral-flow diagram: shaded essential bands, branches, crossings."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ts = trace.t_grid
    lo = trace.gap_edges[:, 0]
    hi = trace.gap_edges[:, 1]
    span = max(hi.max() - lo.min(), 1e-12)
    ax.fill_between(ts, lo - 0.35 * span, lo, color="0.8", label="essential spectrum")
    ax.fill_between(ts, hi, hi + 0.35 * span, color="0.8")
    ax.plot(ts, trace.e_ref, "k--", lw=1, label="reference energy")
    for branch in trace.branches:
        arr = np.array([(t, lam) for t, lam, _, _ in branch])
        ax.plot(arr[:, 0], arr[:, 1], "-", color="C0", lw=1.2)
    for t_ev, sgn in trace.crossings:
        e = float(np.interp(t_ev, ts, trace.e_ref)) if len(ts) else 0.0
        ax.plot([t_ev], [e], "v" if sgn > 0 else "^", color="C3", ms=7)
    ax.set_xlabel("dislocation phase t")
    ax.set_ylabel("energy")
    ax.set_xlim(0, 2 * np.pi)
    ax.set_title(f"edge spectral flow = {trace.total}")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
