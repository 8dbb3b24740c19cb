"""Example potential pairs with predicted invariants, and the full pipeline.

Two families are provided:

* the *scaled pair* family (epsilon V_base, epsilon W_base) whose gap-n
  invariants are predicted whenever W_base has a nonzero n-th Fourier mode
  (and, for n > 1, V_base a nonzero (n-1)-th mode): winding
  (-1)^((n+1)/2) n and bulk/edge index -n;
* the *tuned winding* family V = eps^2 cos(2 pi (n-m) x) + eps^3
  cos(2 pi (n-1) x), W = 2 eps^4 cos(2 pi m x), engineered so the gap-n
  coupling curve winds m times: winding (-1)^((n+1)/2) m and index -m.

``verify_pipeline`` runs the whole bulk-edge verification for a scenario:
hypothesis scans, coupling winding, Chern numbers at two dislocation
strengths, the effective Dirac-operator flow, and the edge spectral flow,
and checks that all of them agree with the scenario's predicted index.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import bulk, coupling, dirac, dirac_line, edge, potential
from .errors import FourierConditionViolated, ParameterViolation
from .potential import TrigPolynomial, cosine


@dataclass(frozen=True)
class Scenario:
    """A potential pair with its predicted topological invariants."""

    id: str
    V: TrigPolynomial
    W: TrigPolynomial
    n: int
    epsilon: float
    predicted_winding: int
    predicted_index: int

    def __post_init__(self):
        sign = (-1) ** ((self.n - 1) // 2)
        if self.predicted_index != sign * self.predicted_winding:
            raise ParameterViolation(
                "scenario record is internally inconsistent: index must be "
                "(-1)^((n-1)/2) x winding"
            )


def scaled_pair(
    n: int,
    epsilon: float,
    base_V: TrigPolynomial | None = None,
    base_W: TrigPolynomial | None = None,
) -> Scenario:
    """(V, W) = (eps V_base, eps W_base) opening the n-th gap directly."""
    if n <= 0 or n % 2 == 0:
        raise ParameterViolation(f"gap index n must be a positive odd integer, got {n}")
    if not 0 < epsilon <= 0.1:
        raise ParameterViolation(f"epsilon must lie in (0, 0.1], got {epsilon}")
    if base_V is None:
        base_V = cosine(2, 1.0) if n == 1 else cosine(n - 1, 1.0)
    if base_W is None:
        base_W = cosine(n, 2.0)
    if base_W.coefficient(n) == 0:
        raise FourierConditionViolated(
            f"base W must have a nonzero mode at frequency {n}"
        )
    if n > 1 and base_V.coefficient(n - 1) == 0:
        raise FourierConditionViolated(
            f"base V must have a nonzero mode at frequency {n - 1}"
        )
    winding = (-1) ** ((n + 1) // 2) * n
    return Scenario(
        id=f"scaled-n{n}",
        V=epsilon * base_V,
        W=epsilon * base_W,
        n=n,
        epsilon=float(epsilon),
        predicted_winding=winding,
        predicted_index=-n,
    )


def tuned_pair(n: int, m: int, epsilon: float) -> Scenario:
    """The engineered pair whose gap-n coupling curve winds m times."""
    if n <= 0 or n % 2 == 0:
        raise ParameterViolation(f"gap index n must be a positive odd integer, got {n}")
    if m % 2 == 0:
        raise ParameterViolation(f"target winding m must be odd, got {m}")
    if abs(m) == n:
        raise ParameterViolation(f"|m| = n = {n} reduces to the scaled family")
    if not 0 < epsilon <= 0.4:
        raise ParameterViolation(f"epsilon must lie in (0, 0.4], got {epsilon}")
    V = cosine(n - m, epsilon**2) + cosine(n - 1, epsilon**3)
    W = cosine(m, 2 * epsilon**4)
    winding = (-1) ** ((n + 1) // 2) * m
    return Scenario(
        id=f"tuned-{n}-{m}",
        V=V,
        W=W,
        n=n,
        epsilon=float(epsilon),
        predicted_winding=winding,
        predicted_index=-m,
    )


BUILTIN_IDS = ("scaled-n1", "scaled-n3", "tuned-1-3")


def builtin(scenario_id: str) -> Scenario:
    """The stock scenarios exercised by the verification suite."""
    if scenario_id == "scaled-n1":
        return scaled_pair(1, 0.05)
    if scenario_id == "scaled-n3":
        return scaled_pair(3, 0.05)
    if scenario_id == "tuned-1-3":
        return tuned_pair(1, 3, 0.3)
    raise ParameterViolation(
        f"unknown scenario id {scenario_id!r}; built-ins: {', '.join(BUILTIN_IDS)}"
    )


def to_record(sc: Scenario) -> dict:
    return {
        "id": sc.id,
        "V": potential.to_records(sc.V),
        "W": potential.to_records(sc.W),
        "n": sc.n,
        "epsilon": sc.epsilon,
        "predicted_winding": sc.predicted_winding,
        "predicted_index": sc.predicted_index,
    }


def from_record(rec: dict) -> Scenario:
    return Scenario(
        id=str(rec["id"]),
        V=potential.from_records(rec["V"]),
        W=potential.from_records(rec["W"]),
        n=int(rec["n"]),
        epsilon=float(rec["epsilon"]),
        predicted_winding=int(rec["predicted_winding"]),
        predicted_index=int(rec["predicted_index"]),
    )


# -- pipeline ----------------------------------------------------------------

@dataclass
class VerificationReport:
    """Every invariant of one scenario, with the cross-equality verdict."""

    scenario_id: str
    predicted_index: int
    h1_margin: float
    h2_margin: float
    winding: int
    chern: dict             # dislocation strength s -> c1
    dirac_flow: int
    edge_flow: int
    crossing_count: int
    verdict: bool
    timings: dict = field(default_factory=dict)


def verify_pipeline(
    sc: Scenario,
    s_values=(0.5, 1.0),
    chern_grid: tuple[int, int] = (24, 24),
    n_t: int = 64,
    dirac_profile: dirac_line.TransitionProfile | None = None,
    edge_profile: dirac_line.TransitionProfile | None = None,
) -> VerificationReport:
    """Run every invariant computation and check the bulk-edge equalities.

    The verdict is true exactly when the edge flow, the Chern numbers at all
    requested strengths, the Dirac-operator flow, and the sign-corrected
    winding all equal the scenario's predicted index; a false verdict is a
    report outcome, while hypothesis violations raise.
    """
    if dirac_profile is None:
        dirac_profile = dirac_line.TransitionProfile(kind="tanh", width=0.5)
    if edge_profile is None:
        edge_profile = dirac_line.TransitionProfile(kind="tanh", width=1.0)
    timings: dict = {}

    def staged(name, fn):
        t0 = time.perf_counter()
        out = fn()
        timings[name] = time.perf_counter() - t0
        return out

    dd = staged("dirac", lambda: dirac.find_dirac_point(sc.V, sc.n))
    curve = staged("winding", lambda: coupling.coupling_curve(dd, sc.W))
    sel = staged("h1_scan", lambda: bulk.gap_scan_h1(sc.V, sc.W, sc.n))
    chern = {}
    for s in s_values:
        chern[s] = staged(
            f"chern_s{s}",
            lambda s=s: bulk.chern_fhs(
                bulk.torus_eigenframe(sc.V, sc.W, s, sc.n, *chern_grid)
            ),
        )

    def dirac_family(t):
        return dirac_line.dislocated_operator(
            dd.nu_star,
            curve.theta_star,
            complex(coupling.theta_from_fourier(curve.fourier, t)),
            dirac_profile,
        )

    dflow = staged("dirac_flow", lambda: dirac_line.dirac_spectral_flow(dirac_family))

    prob = edge.EdgeProblem(V=sc.V, W=sc.W, n=sc.n, profile=edge_profile)
    trace = staged("edge_flow", lambda: edge.spectral_flow(prob, sel, n_t=n_t))

    sign = (-1) ** ((sc.n - 1) // 2)
    targets = [trace.total, dflow, sign * curve.winding, *chern.values()]
    verdict = all(v == sc.predicted_index for v in targets) and len(
        trace.crossings
    ) >= abs(curve.winding)
    return VerificationReport(
        scenario_id=sc.id,
        predicted_index=sc.predicted_index,
        h1_margin=sel.min_gap,
        h2_margin=curve.min_modulus,
        winding=curve.winding,
        chern=chern,
        dirac_flow=dflow,
        edge_flow=trace.total,
        crossing_count=len(trace.crossings),
        verdict=verdict,
        timings=timings,
    )


def report_text(rep: VerificationReport) -> str:
    """Human-readable structured rendering of a verification report."""
    lines = [
        f"scenario          {rep.scenario_id}",
        f"predicted index   {rep.predicted_index}",
        f"gap margin (H1)   {rep.h1_margin:.6e}",
        f"coupling margin (H2) {rep.h2_margin:.6e}",
        f"winding m         {rep.winding}",
    ]
    for s, c in sorted(rep.chern.items()):
        lines.append(f"chern c1 (s={s:g})   {c}")
    lines += [
        f"dirac-line flow   {rep.dirac_flow}",
        f"edge flow Sf      {rep.edge_flow}",
        f"gap crossings     {rep.crossing_count}",
        f"verdict           {'PASS' if rep.verdict else 'FAIL'}",
        "timings           "
        + ", ".join(f"{k}={v:.1f}s" for k, v in rep.timings.items()),
    ]
    return "\n".join(lines)


def summary_csv(reports, path) -> None:
    with open(path, "w") as fh:
        fh.write(
            "scenario,predicted_index,winding,chern_min,chern_max,"
            "dirac_flow,edge_flow,crossings,h1_margin,h2_margin,verdict\n"
        )
        for rep in reports:
            cs = list(rep.chern.values())
            fh.write(
                f"{rep.scenario_id},{rep.predicted_index},{rep.winding},"
                f"{min(cs)},{max(cs)},{rep.dirac_flow},{rep.edge_flow},"
                f"{rep.crossing_count},{rep.h1_margin!r},{rep.h2_margin!r},"
                f"{rep.verdict}\n"
            )
