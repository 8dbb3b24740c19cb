"""Trig-polynomial potentials: algebra, translation, symmetry, serialization."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dislospec import potential as P
from dislospec.errors import NotRealValued
from dislospec.potential import SymmetryKind


def test_cosine_matches_direct_evaluation():
    p = P.cosine(3, 1.7)
    x = np.linspace(-1.3, 2.4, 101)
    assert np.allclose(p(x), 1.7 * np.cos(2 * np.pi * 3 * x), atol=1e-14)


def test_scalar_evaluation_returns_float():
    assert isinstance(P.cosine(1, 2.0)(0.25), float)


def test_realness_validation_rejects_unpaired_coefficient():
    with pytest.raises(NotRealValued):
        P.make_trig_poly({1: 1.0 + 0.5j, -1: 1.0 + 0.5j})


def test_realness_accepts_conjugate_pairs():
    p = P.make_trig_poly({2: 0.5 - 0.25j, -2: 0.5 + 0.25j})
    x = np.linspace(0, 1, 57)
    # a valid coefficient map evaluates to a real function
    total = sum(a * np.exp(2j * np.pi * f * x) for f, a in p.coeffs.items())
    assert np.max(np.abs(total.imag)) < 1e-14


def test_algebra_is_pointwise():
    p = P.cosine(1, 1.0)
    q = P.cosine(2, 0.3)
    x = np.linspace(0, 1, 41)
    assert np.allclose((p + q)(x), p(x) + q(x), atol=1e-14)
    assert np.allclose((2.5 * p)(x), 2.5 * p(x), atol=1e-14)
    assert np.allclose((-p)(x), -p(x), atol=1e-14)


def test_sup_norm_bound_dominates_samples():
    p = P.cosine(1, 1.0) + P.cosine(4, -0.7)
    x = np.linspace(0, 1, 400)
    assert p.sup_norm_bound() >= np.max(np.abs(p(x))) - 1e-12


def test_translate_shifts_the_argument():
    p = P.cosine(2, 1.0) + P.cosine(5, 0.4)
    t = 1.234
    x = np.linspace(0, 1, 64)
    assert np.allclose(P.translate(p, t)(x), p(x + t / (2 * np.pi)), atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(
    amps=st.lists(st.floats(-2, 2, allow_nan=False), min_size=1, max_size=4),
    a=st.floats(-6, 6, allow_nan=False),
    b=st.floats(-6, 6, allow_nan=False),
)
def test_translate_composes_additively(amps, a, b):
    p = P.zero()
    for freq, amp in enumerate(amps, start=1):
        p = p + P.cosine(freq, amp)
    lhs = P.translate(P.translate(p, a), b)
    rhs = P.translate(p, a + b)
    for f in set(lhs.coeffs) | set(rhs.coeffs):
        assert abs(lhs.coefficient(f) - rhs.coefficient(f)) < 1e-12


def test_symmetry_classification():
    assert P.classify_symmetry(P.cosine(2, 1.0)) is SymmetryKind.HALF_PERIOD_EVEN
    assert P.classify_symmetry(P.cosine(3, 1.0)) is SymmetryKind.HALF_PERIOD_ODD
    mixed = P.cosine(1, 1.0) + P.cosine(2, 1.0)
    assert P.classify_symmetry(mixed) is SymmetryKind.NONE


def test_half_period_symmetry_pointwise():
    even = P.cosine(2, 0.8)
    odd = P.cosine(3, 0.8)
    x = np.linspace(0, 1, 33)
    assert np.allclose(even(x + 0.5), even(x), atol=1e-12)
    assert np.allclose(odd(x + 0.5), -odd(x), atol=1e-12)


def test_records_round_trip_exactly():
    p = P.make_trig_poly({0: 0.3, 1: 0.5 - 0.25j, -1: 0.5 + 0.25j, 7: 1e-3, -7: 1e-3})
    q = P.from_records(P.to_records(p))
    assert q.coeffs == p.coeffs


def test_zero_potential_is_zero():
    assert P.zero().is_zero()
    assert P.zero()(0.3) == 0.0
