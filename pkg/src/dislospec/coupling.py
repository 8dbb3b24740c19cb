"""The coupling curve theta(t) = <phi_minus, W_t phi_plus> and its winding.

With phi_plus = sum_k a_k e^{i(pi+2pi k)x}, phi_minus = conj(phi_plus) and
W = sum_d w_d e^{2 pi i d x}, the pairing collapses to the exact finite sum

    theta(t) = sum_d w_d e^{i d t} sum_k a_{-k-d-1} a_k,

i.e. a trigonometric polynomial in t with only odd frequencies d (W is
half-period odd), which is the source of the antiperiodicity
theta(t + pi) = -theta(t).  The winding number m of t -> theta(t) around 0
is computed from adaptively refined samples under a quarter-turn criterion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dirac import DiracData
from .errors import H2Violated, NotOdd, SymmetryViolated
from .potential import SymmetryKind, TrigPolynomial, check_symmetry

H2_TOL = 1e-8


@dataclass(frozen=True)
class CouplingCurve:
    """Sampled theta(t) with winding number and hypothesis (H2) margin."""

    t: np.ndarray                 # sample points in [0, 2 pi], ascending
    values: np.ndarray            # theta(t) at the samples
    winding: int
    min_modulus: float
    fourier: dict[int, complex]   # frequency -> coefficient of theta

    @property
    def theta_star(self) -> complex:
        """theta(pi)."""
        return theta_from_fourier(self.fourier, np.pi)

    @property
    def theta_F(self) -> float:
        return abs(self.theta_star)


def theta_fourier(data: DiracData, W: TrigPolynomial) -> dict[int, complex]:
    """Exact Fourier coefficients (in t) of theta: no quadrature anywhere."""
    ok, worst = check_symmetry(W, SymmetryKind.HALF_PERIOD_ODD)
    if not ok:
        raise SymmetryViolated(
            f"W has even-frequency content {worst:.2e}; theta would lose antiperiodicity"
        )
    K = data.K
    a = data.phi_plus
    ks = np.arange(-K, K + 1)
    coeffs = {}
    for d, w in W.coeffs.items():
        # contraction sum_k a_{-k-d-1} a_k restricted to in-range indices
        partners = -ks - d - 1
        valid = np.abs(partners) <= K
        total = np.sum(a[partners[valid] + K] * a[ks[valid] + K])
        val = w * total
        if val != 0:
            coeffs[d] = complex(val)
    return coeffs


def theta_from_fourier(fourier: dict[int, complex], t) -> complex | np.ndarray:
    t = np.asarray(t, dtype=float)
    total = np.zeros_like(t, dtype=complex)
    for d, c in fourier.items():
        total += c * np.exp(1j * d * t)
    return total if t.shape else complex(total)


def theta_prime_from_fourier(fourier: dict[int, complex], t) -> complex | np.ndarray:
    """Exact derivative d theta / dt."""
    t = np.asarray(t, dtype=float)
    total = np.zeros_like(t, dtype=complex)
    for d, c in fourier.items():
        total += 1j * d * c * np.exp(1j * d * t)
    return total if t.shape else complex(total)


def theta(data: DiracData, W: TrigPolynomial, t: float) -> complex:
    """theta(t) = <phi_minus, W_t phi_plus> as an exact Fourier contraction."""
    return complex(theta_from_fourier(theta_fourier(data, W), t))


def diagonal_check(data: DiracData, W: TrigPolynomial, t: float) -> float:
    """Max modulus of the diagonal matrix elements <phi_pm, W_t phi_pm>.

    These vanish identically: phi_plus is supported on even Fourier indices
    and W_t only couples across parities.
    """
    K = data.K
    ks = np.arange(-K, K + 1)
    worst = 0.0
    for vec in (data.phi_plus, data.phi_minus):
        total = 0.0 + 0.0j
        for d, w in W.coeffs.items():
            shifted = ks + d
            valid = np.abs(shifted) <= K
            total += (
                w
                * np.exp(1j * d * t)
                * np.sum(np.conj(vec[shifted[valid] + K]) * vec[ks[valid] + K])
            )
        worst = max(worst, abs(total))
    return float(worst)


def winding_number(t_samples: np.ndarray, values: np.ndarray, tol: float = H2_TOL) -> int:
    """Degree of the sampled closed curve around 0 via unwrapped phase increments.

    Requires the quarter-turn criterion |Delta arg| < pi/2 between samples;
    callers refine the grid first (see sample_curve).
    """
    moduli = np.abs(values)
    if moduli.min() <= tol:
        raise H2Violated(f"min |theta| = {moduli.min():.3e} at or below {tol:.1e}")
    args = np.angle(values)
    incs = np.diff(args)
    incs = (incs + np.pi) % (2 * np.pi) - np.pi
    if np.any(np.abs(incs) >= np.pi / 2):
        raise NotOdd("quarter-turn criterion violated; refine the t grid")
    total = incs.sum() / (2 * np.pi)
    m = int(np.rint(total))
    if abs(total - m) > 1e-6:
        raise NotOdd(f"phase sum {total} not within 1e-6 of an integer")
    if m % 2 == 0:
        raise NotOdd(f"winding rounded to even value {m}: curve under-resolved")
    return m


def sample_curve(
    fourier: dict[int, complex],
    initial_points: int = 64,
    tol: float = H2_TOL,
    max_depth: int = 20,
) -> CouplingCurve:
    """Adaptively sample theta on [0, 2 pi] until each step turns < pi/2."""
    t = np.linspace(0.0, 2 * np.pi, initial_points + 1)
    vals = theta_from_fourier(fourier, t)
    for _ in range(max_depth):
        moduli = np.abs(vals)
        if moduli.min() <= tol:
            raise H2Violated(f"min |theta| = {moduli.min():.3e} at or below {tol:.1e}")
        incs = np.angle(vals[1:] / vals[:-1])
        bad = np.abs(incs) >= np.pi / 2 - 1e-3
        if not bad.any():
            break
        mids = 0.5 * (t[:-1][bad] + t[1:][bad])
        t = np.sort(np.concatenate([t, mids]))
        vals = theta_from_fourier(fourier, t)
    m = winding_number(t, vals, tol)
    return CouplingCurve(
        t=t,
        values=vals,
        winding=m,
        min_modulus=float(np.min(np.abs(vals))),
        fourier=dict(fourier),
    )


def coupling_curve(data: DiracData, W: TrigPolynomial, initial_points: int = 64) -> CouplingCurve:
    """End-to-end: exact Fourier form of theta, adaptive sampling, winding."""
    return sample_curve(theta_fourier(data, W), initial_points)


def export_csv(curve: CouplingCurve, path) -> None:
    with open(path, "w") as fh:
        fh.write("t,re_theta,im_theta,arg_theta\n")
        for ti, vi in zip(curve.t, curve.values):
            fh.write(f"{ti!r},{vi.real!r},{vi.imag!r},{float(np.angle(vi))!r}\n")
