"""Real one-periodic potentials as finite trigonometric polynomials.

A potential is p(x) = sum_l c_l e^{2 pi i l x} with c_{-l} = conj(c_l), stored
as an exact map from signed integer frequency to complex amplitude.  All
downstream modules consume these coefficients directly (matrix assembly,
Fourier contractions), so there is no sampling or quadrature error anywhere
in the integer-valued pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

import numpy as np

from .errors import NotRealValued

_REALNESS_TOL = 1e-12


class SymmetryKind(Enum):
    """Half-period symmetry classes of a one-periodic potential."""

    HALF_PERIOD_EVEN = "half_period_even"   # p(x + 1/2) = p(x): only even frequencies
    HALF_PERIOD_ODD = "half_period_odd"     # p(x + 1/2) = -p(x): only odd frequencies
    NONE = "none"


@dataclass(frozen=True)
class TrigPolynomial:
    """Immutable finite Fourier series of a real one-periodic function."""

    coeffs: Mapping[int, complex]
    bandwidth: int = field(default=0)

    def __post_init__(self):
        cleaned = {}
        for freq, amp in self.coeffs.items():
            amp = complex(amp)
            if amp != 0:
                cleaned[int(freq)] = amp
        scale = max((abs(a) for a in cleaned.values()), default=0.0)
        tol = _REALNESS_TOL * max(1.0, scale)
        for freq, amp in cleaned.items():
            if abs(cleaned.get(-freq, 0.0) - np.conj(amp)) > tol:
                raise NotRealValued(
                    f"coefficient pair ({freq}, {-freq}) breaks c_-l = conj(c_l)"
                )
        object.__setattr__(self, "coeffs", dict(sorted(cleaned.items())))
        object.__setattr__(
            self, "bandwidth", max((abs(f) for f in cleaned), default=0)
        )

    # -- basic algebra -------------------------------------------------------

    def coefficient(self, freq: int) -> complex:
        return self.coeffs.get(freq, 0.0 + 0.0j)

    def __call__(self, x) -> np.ndarray | float:
        """Evaluate pointwise; returns real values (imaginary residue dropped)."""
        x = np.asarray(x, dtype=float)
        total = np.zeros_like(x, dtype=complex)
        for freq, amp in self.coeffs.items():
            total += amp * np.exp(2j * np.pi * freq * x)
        return total.real if x.shape else float(total.real)

    def __add__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        merged = dict(self.coeffs)
        for freq, amp in other.coeffs.items():
            merged[freq] = merged.get(freq, 0.0) + amp
        return TrigPolynomial(merged)

    def __mul__(self, scalar: float) -> "TrigPolynomial":
        return TrigPolynomial({f: scalar * a for f, a in self.coeffs.items()})

    __rmul__ = __mul__

    def __neg__(self) -> "TrigPolynomial":
        return self * (-1.0)

    def sup_norm_bound(self) -> float:
        """Upper bound on max |p| via the l1 norm of the coefficients."""
        return float(sum(abs(a) for a in self.coeffs.values()))

    def is_zero(self) -> bool:
        return not self.coeffs


def make_trig_poly(coeffs: Mapping[int, complex]) -> TrigPolynomial:
    """Construct a validated trig polynomial from a frequency -> amplitude map."""
    return TrigPolynomial(coeffs)


def cosine(freq: int, amplitude: float = 1.0) -> TrigPolynomial:
    """amplitude * cos(2 pi freq x) as a TrigPolynomial."""
    if freq == 0:
        return TrigPolynomial({0: amplitude})
    half = amplitude / 2.0
    return TrigPolynomial({freq: half, -freq: half})


def zero() -> TrigPolynomial:
    return TrigPolynomial({})


def translate(p: TrigPolynomial, t: float) -> TrigPolynomial:
    """Phase shift: translate(p, t)(x) = p(x + t / 2pi).

    Coefficient-wise c_l -> c_l e^{i l t}; this realizes the dislocation
    family W_t.  The resulting map may be non-Hermitian-symmetric only
    through rounding, so the constructor re-validates.
    """
    shifted = {}
    for freq, amp in p.coeffs.items():
        shifted[freq] = amp * np.exp(1j * freq * t)
    # Re-symmetrize to kill 1-ulp conjugacy drift from the two exponentials.
    fixed = {}
    for freq, amp in shifted.items():
        if freq >= 0:
            paired = np.conj(shifted.get(-freq, np.conj(amp)))
            mean = 0.5 * (amp + paired)
            fixed[freq] = mean
            if freq > 0:
                fixed[-freq] = np.conj(mean)
    return TrigPolynomial(fixed)


def check_symmetry(p: TrigPolynomial, kind: SymmetryKind, tol: float = 1e-12):
    """Return (holds, max_violation) for the requested coefficient-parity class."""
    if kind == SymmetryKind.NONE:
        return True, 0.0
    if kind == SymmetryKind.HALF_PERIOD_EVEN:
        offenders = [abs(a) for f, a in p.coeffs.items() if f % 2 != 0]
    elif kind == SymmetryKind.HALF_PERIOD_ODD:
        offenders = [abs(a) for f, a in p.coeffs.items() if f % 2 == 0]
    else:  # pragma: no cover - exhaustive enum
        raise ValueError(kind)
    worst = max(offenders, default=0.0)
    return worst <= tol, worst


def classify_symmetry(p: TrigPolynomial) -> SymmetryKind:
    """Best-fitting symmetry class (NONE when frequencies are mixed)."""
    even_ok, _ = check_symmetry(p, SymmetryKind.HALF_PERIOD_EVEN)
    odd_ok, _ = check_symmetry(p, SymmetryKind.HALF_PERIOD_ODD)
    if even_ok and odd_ok:
        return SymmetryKind.HALF_PERIOD_EVEN  # zero potential: report even
    if even_ok:
        return SymmetryKind.HALF_PERIOD_EVEN
    if odd_ok:
        return SymmetryKind.HALF_PERIOD_ODD
    return SymmetryKind.NONE


# -- serialization -----------------------------------------------------------

def to_records(p: TrigPolynomial) -> list[tuple[int, float, float]]:
    """Serialize to (frequency, real part, imaginary part) triples."""
    return [(f, a.real, a.imag) for f, a in p.coeffs.items()]


def from_records(records: Iterable[Iterable[float]]) -> TrigPolynomial:
    coeffs = {}
    for rec in records:
        freq, re, im = rec
        coeffs[int(freq)] = complex(re, im)
    return TrigPolynomial(coeffs)
