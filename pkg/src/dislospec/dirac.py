"""Dirac points of D_x^2 + V at xi = pi for half-period-even potentials.

For V with only even Fourier frequencies the bands E_n(pi) = E_{n+1}(pi)
touch for every odd n, and the crossing is conical.  The two crossing states
are delivered by the parity blocks: phi_plus lives on even Fourier indices,
phi_minus = conj(phi_plus) on odd indices (conjugation maps coefficient k to
index -k-1 because conj(e^{i(pi+2pi k)x}) = e^{i(pi+2pi(-k-1))x}).  The Fermi
velocity is the exact quadratic form

    nu_star = 2 <phi_plus, D_x phi_plus> = 2 sum_k (pi + 2 pi k) |a_k|^2,

whose sign must equal (-1)^((n-1)/2).
"""

from __future__ import annotations

from dataclasses import dataclass
import warnings

import numpy as np

from . import bloch
from .errors import NotDegenerate, SignMismatch
from .potential import TrigPolynomial

DEGENERACY_TOL = 1e-8


@dataclass(frozen=True)
class DiracData:
    """Gauge-fixed data of the n-th Dirac point (pi, E_star)."""

    n: int
    E_star: float
    phi_plus: np.ndarray     # coefficients over Fourier index k in [-K, K]
    phi_minus: np.ndarray
    nu_star: float
    K: int
    gap_residual: float

    @property
    def nu_F(self) -> float:
        return abs(self.nu_star)

    @property
    def fourier_indices(self) -> np.ndarray:
        return np.arange(-self.K, self.K + 1)


def conjugate_coefficients(vec: np.ndarray, K: int) -> np.ndarray:
    """Coefficients of conj(f) for f = sum_k v_k e^{i(pi + 2 pi k)x}: k -> -k-1."""
    out = np.zeros_like(vec)
    ks = np.arange(-K, K + 1)
    targets = -ks - 1
    valid = np.abs(targets) <= K
    out[targets[valid] + K] = np.conj(vec[ks[valid] + K])
    return out


def _gauge_fix(vec: np.ndarray) -> np.ndarray:
    """Rotate by a unit scalar so the largest-magnitude coefficient is real positive.

    Ties (equal magnitudes within 1 ulp) resolve to the lowest array index,
    making the gauge deterministic and idempotent.
    """
    idx = int(np.argmax(np.abs(vec)))
    pivot = vec[idx]
    if pivot == 0:
        return vec.copy()
    return vec * (abs(pivot) / pivot)


def find_dirac_point(V: TrigPolynomial, n: int, K: int | None = None) -> DiracData:
    """Locate the n-th Dirac point and extract its gauge-fixed eigenbasis."""
    if n % 2 != 1 or n < 1:
        raise ValueError("Dirac points at xi = pi exist for odd band index n >= 1")
    if K is None:
        K = bloch.default_cutoff(V, n + 8)
    full = bloch.spectrum(bloch.assemble_bloch(V, np.pi, K), n + 4)
    gap_residual = float(abs(full.eigenvalues[n] - full.eigenvalues[n - 1]))
    if gap_residual >= DEGENERACY_TOL:
        raise NotDegenerate(
            f"bands {n},{n+1} split by {gap_residual:.2e} at xi=pi; V not half-period even in effect"
        )
    par = bloch.parity_spectra(V, np.pi, K)
    j = (n + 1) // 2 - 1                      # branch index within the even block
    E_star = float(par.mu_e[j])
    phi_plus = np.zeros(2 * K + 1, dtype=complex)
    phi_plus[par.even_indices + K] = par.vec_e[:, j]
    phi_plus = _gauge_fix(phi_plus / np.linalg.norm(phi_plus))
    phi_minus = conjugate_coefficients(phi_plus, K)
    ks = np.arange(-K, K + 1)
    nu_star = float(2.0 * np.sum((np.pi + 2 * np.pi * ks) * np.abs(phi_plus) ** 2))
    expected_sign = -1 if (n - 1) // 2 % 2 else 1
    if np.sign(nu_star) != expected_sign:
        raise SignMismatch(
            f"nu_star = {nu_star:.6g} but parity predicts sign {expected_sign:+d}"
        )
    if abs(nu_star) < 1e-6:
        warnings.warn(
            f"Fermi velocity |nu_star| = {abs(nu_star):.2e} is numerically tiny",
            stacklevel=2,
        )
    return DiracData(
        n=n,
        E_star=E_star,
        phi_plus=phi_plus,
        phi_minus=phi_minus,
        nu_star=nu_star,
        K=K,
        gap_residual=gap_residual,
    )


def fermi_velocity_check(data: DiracData, V: TrigPolynomial, h: float) -> float:
    """Central-difference slope of the even-parity branch vs nu_star.

    Returns the mismatch, which is O(h) on a smooth simple branch.
    """
    if not 1e-4 <= h <= 1e-2:
        raise ValueError("step h must lie in [1e-4, 1e-2]")
    j = (data.n + 1) // 2 - 1
    mu_hi = bloch.parity_spectra(V, np.pi + h, data.K).mu_e[j]
    mu_lo = bloch.parity_spectra(V, np.pi - h, data.K).mu_e[j]
    slope = (mu_hi - mu_lo) / (2 * h)
    return float(abs(slope - data.nu_star))


# -- serialization -----------------------------------------------------------

def to_record(data: DiracData) -> dict:
    return {
        "n": data.n,
        "E_star": data.E_star,
        "nu_star": data.nu_star,
        "K": data.K,
        "gap_residual": data.gap_residual,
        "phi_plus": [[float(c.real), float(c.imag)] for c in data.phi_plus],
    }


def from_record(rec: dict) -> DiracData:
    K = int(rec["K"])
    phi_plus = np.array([complex(re, im) for re, im in rec["phi_plus"]])
    return DiracData(
        n=int(rec["n"]),
        E_star=float(rec["E_star"]),
        phi_plus=phi_plus,
        phi_minus=conjugate_coefficients(phi_plus, K),
        nu_star=float(rec["nu_star"]),
        K=K,
        gap_residual=float(rec["gap_residual"]),
    )
