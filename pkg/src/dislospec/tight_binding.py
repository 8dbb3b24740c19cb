"""2x2 effective (tight-binding) families near a Dirac point.

The family M_delta(xi, t) linearizes the two crossing bands:

    M_delta = [[E* + nu*(xi - pi), delta conj(theta(t))],
               [delta theta(t),    E* - nu*(xi - pi)]]

with exact eigenvalues E* +/- r_delta, r_delta^2 = nu*^2 (xi-pi)^2 +
delta^2 |theta(t)|^2.  Its rescaled limit M(xi, t) = [[xi, conj theta],
[theta, -xi]] carries a closed-form Berry curvature whose normalized
integral over R x [0, 2 pi] is exactly the winding number of theta —
the analytic bridge between the coupling winding and the bulk Chern number.
The enclosure check compares the 2x2 eigenvalues against the full Bloch
problem on a small box around the Dirac point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import bloch
from .coupling import CouplingCurve, theta_from_fourier, theta_prime_from_fourier
from .dirac import DiracData
from .errors import H2Violated
from .potential import TrigPolynomial, translate

SIGMA_1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_2 = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


@dataclass(frozen=True)
class TightBindingFamily:
    """Effective two-band family attached to a Dirac point and coupling curve."""

    dirac: DiracData
    theta: CouplingCurve
    delta: float

    @property
    def sigma_star(self) -> np.ndarray:
        ts = self.theta.theta_star
        return ts.real * SIGMA_1 + ts.imag * SIGMA_2


def m_delta(fam: TightBindingFamily, xi: float, t: float):
    """Assemble M_delta(xi, t); returns (matrix, (mu_minus, mu_plus), eigenvectors)."""
    th = complex(theta_from_fourier(fam.theta.fourier, t))
    diag = fam.dirac.nu_star * (xi - np.pi)
    M = np.array(
        [
            [fam.dirac.E_star + diag, fam.delta * np.conj(th)],
            [fam.delta * th, fam.dirac.E_star - diag],
        ],
        dtype=complex,
    )
    r = np.hypot(diag, fam.delta * abs(th))
    vals, vecs = np.linalg.eigh(M)
    return M, (fam.dirac.E_star - r, fam.dirac.E_star + r), vecs


def rescaled_family(theta_fourier: dict[int, complex], xi: float, t: float) -> np.ndarray:
    """M(xi, t) = [[xi, conj theta(t)], [theta(t), -xi]] (dimensionless limit)."""
    th = complex(theta_from_fourier(theta_fourier, t))
    return np.array([[xi, np.conj(th)], [th, -xi]], dtype=complex)


def curvature_closed_form(theta_fourier: dict[int, complex], xi: float, t: float) -> complex:
    """Berry curvature of the negative band of M(xi, t); purely imaginary.

    With theta = r e^{i phi}:  B = i r^2 phi' / (2 (xi^2 + r^2)^{3/2});
    r^2 phi' = Im(conj(theta) theta') is evaluated exactly from the Fourier
    form, so no numerical differentiation enters.
    """
    th = complex(theta_from_fourier(theta_fourier, t))
    scale = sum(abs(c) for c in theta_fourier.values())
    r2 = abs(th) ** 2
    if r2 <= (1e-12 * max(scale, 1e-300)) ** 2:
        raise H2Violated("theta(t) = 0: curvature formula undefined")
    r2phip = float(np.imag(np.conj(th) * theta_prime_from_fourier(theta_fourier, t)))
    return 1j * r2phip / (2.0 * (xi * xi + r2) ** 1.5)


def curvature_integral(
    theta_fourier: dict[int, complex],
    xi_halfwidth: float | None = None,
    n_t: int = 512,
) -> float:
    """(1/2 pi i) integral of the closed-form curvature over R x [0, 2 pi].

    The xi integral over [-Xi, Xi] is numeric quadrature; the |xi| > Xi tail
    uses the antiderivative  int dxi/(xi^2+r^2)^{3/2} = (2/r^2)(1 -
    Xi/sqrt(Xi^2+r^2)).  The t integral is a trapezoid sum over the periodic
    grid (spectrally accurate for the trig-polynomial integrand).
    """
    ts = np.linspace(0.0, 2 * np.pi, n_t, endpoint=False)
    th = theta_from_fourier(theta_fourier, ts)
    moduli = np.abs(th)
    if moduli.min() == 0:
        raise H2Violated("theta vanishes on the t grid")
    if xi_halfwidth is None:
        xi_halfwidth = 50.0 * float(moduli.max())
    Xi = float(xi_halfwidth)
    r2phip = np.imag(np.conj(th) * theta_prime_from_fourier(theta_fourier, ts))
    total = 0.0
    for r2p, r in zip(r2phip, moduli):
        core, _ = quad(lambda x: (x * x + r * r) ** -1.5, -Xi, Xi, epsabs=1e-13)
        tail = (2.0 / r**2) * (1.0 - Xi / np.hypot(Xi, r))
        total += r2p * (core + tail) / 2.0
    # (1/2 pi i) * i * [t-trapezoid]
    return float(total * (2 * np.pi / n_t) / (2 * np.pi))


def enclosure_check(
    V: TrigPolynomial,
    W: TrigPolynomial,
    fam: TightBindingFamily,
    xi_offsets=None,
    t_grid=None,
    K: int | None = None,
) -> float:
    """Max normalized excursion |lambda_{delta,n} - mu^-|/r_delta over a grid.

    The full Bloch eigenvalues of D^2 + V + delta W_t must sit inside disks
    of radius r_delta around the 2x2 predictions; returns the worst ratio
    over bands n and n+1 (<= 1 when the enclosure holds).
    """
    n = fam.dirac.n
    delta = fam.delta
    if xi_offsets is None:
        xi_offsets = np.linspace(-0.05, 0.05, 9)
    if t_grid is None:
        t_grid = np.linspace(0.0, 2 * np.pi, 9, endpoint=False)
    if K is None:
        K = bloch.default_cutoff(V + W, n + 8)
    worst = 0.0
    for dxi in xi_offsets:
        xi = np.pi + dxi
        for t in t_grid:
            H = bloch.assemble_bloch(V + delta * translate(W, t), xi, K).matrix
            vals = np.linalg.eigvalsh(H)
            th = abs(complex(theta_from_fourier(fam.theta.fourier, t)))
            r = np.hypot(fam.dirac.nu_star * dxi, delta * th)
            lo = abs(vals[n - 1] - (fam.dirac.E_star - r)) / r
            hi = abs(vals[n] - (fam.dirac.E_star + r)) / r
            worst = max(worst, lo, hi)
    return float(worst)
