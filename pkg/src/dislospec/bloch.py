"""Floquet-Bloch analysis of D_x^2 + p on the quasiperiodic spaces L^2_xi.

The operator restricted to functions with u(x+1) = e^{i xi} u(x) is
diagonalized in the plane-wave basis e^{i(xi + 2 pi k)x}, |k| <= K.  For a
trig-polynomial potential the matrix is exactly banded:

    H[j, k] = (xi + 2 pi j)^2 [j = k] + c_{j - k}.

For potentials with only even frequencies the even-k and odd-k sublattices
decouple; those parity blocks carry the symmetry analysis (monotone, simple
eigenvalue branches) that pins Dirac points at xi = pi.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh

from .errors import CutoffTooSmall, SolverFailure, SymmetryViolated
from .potential import SymmetryKind, TrigPolynomial, check_symmetry

#: number of top (basis-edge) bands always discarded as truncation artifacts
EDGE_BANDS = 4


def default_cutoff(p: TrigPolynomial, band_count: int) -> int:
    """Plane-wave cutoff giving spectral accuracy for the first band_count bands."""
    return p.bandwidth + 16 + band_count


@dataclass(frozen=True)
class BlochOperator:
    """Assembled plane-wave matrix of D_x^2 + p at quasimomentum xi."""

    potential: TrigPolynomial
    xi: float
    K: int
    matrix: np.ndarray

    @property
    def fourier_indices(self) -> np.ndarray:
        return np.arange(-self.K, self.K + 1)


@dataclass(frozen=True)
class BlochSpectrum:
    """Ascending eigenvalues with orthonormal coefficient eigenvectors."""

    eigenvalues: np.ndarray          # shape (count,)
    eigenvectors: np.ndarray         # shape (2K+1, count), column j for lambda_j
    xi: float
    K: int


@dataclass(frozen=True)
class ParitySpectra:
    """Spectra of the even-k and odd-k parity blocks at fixed xi."""

    mu_e: np.ndarray
    mu_o: np.ndarray
    vec_e: np.ndarray                # (n_even_indices, len(mu_e))
    vec_o: np.ndarray
    even_indices: np.ndarray         # Fourier indices k of the even block rows
    odd_indices: np.ndarray
    xi: float
    K: int


def assemble_bloch(p: TrigPolynomial, xi: float, K: int) -> BlochOperator:
    """Build the (2K+1)x(2K+1) Hermitian Bloch matrix."""
    if K < p.bandwidth:
        raise CutoffTooSmall(f"K={K} below potential bandwidth {p.bandwidth}")
    ks = np.arange(-K, K + 1)
    H = np.zeros((2 * K + 1, 2 * K + 1), dtype=complex)
    np.fill_diagonal(H, (xi + 2 * np.pi * ks) ** 2)
    for freq, amp in p.coeffs.items():
        if freq == 0:
            H += amp.real * np.eye(2 * K + 1)
        elif abs(freq) <= 2 * K:
            idx = np.arange(max(0, freq), min(2 * K + 1, 2 * K + 1 + freq))
            H[idx, idx - freq] += amp
    # enforce exact Hermiticity against rounding in the symmetric fill
    H = 0.5 * (H + H.conj().T)
    return BlochOperator(potential=p, xi=float(xi), K=int(K), matrix=H)


def spectrum(op: BlochOperator, count: int | None = None) -> BlochSpectrum:
    """Lowest eigenpairs of the Bloch matrix (top EDGE_BANDS always dropped)."""
    dim = op.matrix.shape[0]
    max_count = dim - EDGE_BANDS
    if count is None:
        count = max_count
    if count > max_count:
        raise CutoffTooSmall(
            f"requested {count} bands but only {max_count} are trustworthy at K={op.K}"
        )
    try:
        vals, vecs = eigh(op.matrix)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise SolverFailure(str(exc)) from exc
    return BlochSpectrum(
        eigenvalues=vals[:count],
        eigenvectors=vecs[:, :count],
        xi=op.xi,
        K=op.K,
    )


def parity_spectra(p: TrigPolynomial, xi: float, K: int) -> ParitySpectra:
    """Diagonalize the even-k and odd-k blocks of a half-period-even potential.

    The potential couples k to k + freq with freq even only, so the two
    sublattices are exactly invariant; their eigenvalue branches are simple
    and monotone in xi on (0, 2 pi), which is what makes the Dirac-basis
    extraction unambiguous.
    """
    ok, worst = check_symmetry(p, SymmetryKind.HALF_PERIOD_EVEN)
    if not ok:
        raise SymmetryViolated(
            f"potential has odd-frequency content {worst:.2e}; parity blocks do not decouple"
        )
    op = assemble_bloch(p, xi, K)
    ks = op.fourier_indices
    even_mask = ks % 2 == 0
    out = {}
    for tag, mask in (("e", even_mask), ("o", ~even_mask)):
        block = op.matrix[np.ix_(mask, mask)]
        vals, vecs = eigh(block)
        out[tag] = (vals, vecs)
    return ParitySpectra(
        mu_e=out["e"][0],
        mu_o=out["o"][0],
        vec_e=out["e"][1],
        vec_o=out["o"][1],
        even_indices=ks[even_mask],
        odd_indices=ks[~even_mask],
        xi=float(xi),
        K=int(K),
    )


def dispersion_sheet(
    p: TrigPolynomial,
    xi_grid: np.ndarray,
    band_count: int,
    K: int | None = None,
):
    """Sample E_j(xi) on a grid; returns (table, monotonicity_violations).

    table has rows (xi, band_index, energy); the violation list flags any
    band whose restriction to [0, pi] fails the expected alternating
    monotonicity (odd bands increase, even bands decrease) by more than 1e-10.
    """
    xi_grid = np.asarray(xi_grid, dtype=float)
    if xi_grid.min() < -1e-12 or xi_grid.max() > 2 * np.pi + 1e-12:
        raise ValueError("xi grid must lie within [0, 2 pi]")
    if K is None:
        K = default_cutoff(p, band_count)
    energies = np.empty((len(xi_grid), band_count))
    for i, xi in enumerate(xi_grid):
        energies[i] = spectrum(assemble_bloch(p, xi, K), band_count).eigenvalues
    rows = [
        (xi_grid[i], j + 1, energies[i, j])
        for i in range(len(xi_grid))
        for j in range(band_count)
    ]
    violations = []
    half = xi_grid <= np.pi + 1e-12
    if half.sum() >= 2:
        order = np.argsort(xi_grid[half])
        for j in range(band_count):
            vals = energies[half][order, j]
            diffs = np.diff(vals)
            # odd band index (1-based) increases on [0, pi], even decreases
            expected = 1.0 if (j + 1) % 2 == 1 else -1.0
            worst = float(np.min(expected * diffs))
            if worst < -1e-10:
                violations.append((j + 1, worst))
    return rows, violations


def quasimode_certificate(op: BlochOperator, psi: np.ndarray, E: float):
    """Residual certificate: eta = |(H - E) psi| / |psi| encloses an eigenvalue.

    Returns (eta, nearest_distance); the variational principle guarantees
    nearest_distance <= eta, which is asserted here against the full spectrum.
    """
    psi = np.asarray(psi, dtype=complex)
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise ValueError("quasimode must be nonzero")
    eta = float(np.linalg.norm(op.matrix @ psi - E * psi) / norm)
    vals = np.linalg.eigvalsh(op.matrix)
    nearest = float(np.min(np.abs(vals - E)))
    if nearest > eta * (1 + 1e-10) + 1e-12:
        raise SolverFailure(
            f"certificate violated: nearest eigenvalue {nearest:.3e} beyond eta {eta:.3e}"
        )
    return eta, nearest
