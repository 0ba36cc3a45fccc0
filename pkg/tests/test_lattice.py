"""Numerical Weierstrass evaluation and degenerate kernels."""

import cmath
import math

import pytest

from ellop.lattice import (
    HEX_TAU,
    InvalidLatticeError,
    NearPoleError,
    make_lattice,
    lattice_invariants,
    rational_kernel,
    reduce_to_cell,
    trigonometric_kernel,
    wp_eval,
)


SQ = make_lattice(1j)
HX = make_lattice(HEX_TAU)


def test_square_lattice_is_lemniscatic():
    assert abs(SQ.g3) < 1e-20 * abs(SQ.g2)
    assert abs(SQ.j() - 1728) < 1e-9


def test_hexagonal_lattice_is_equianharmonic():
    # tau carries one rounding of sqrt(3)/2, so g2 is tiny but not exact
    assert abs(HX.g2) < 1e-13 * abs(HX.g3)
    assert abs(HX.j()) < 1e-9


def test_invalid_tau_rejected():
    with pytest.raises(InvalidLatticeError):
        lattice_invariants(0.5 - 1j)
    with pytest.raises(InvalidLatticeError):
        make_lattice(2.0)


def test_reduce_to_cell():
    z = 0.31 + 0.22j
    for shift in (0, 3, 1 + 2j * SQ.tau.imag * 1j):
        red = reduce_to_cell(z + 3 + 2 * SQ.tau, SQ)
        assert abs(red - z) < 1e-12


def test_wp_defining_relation():
    for lat in (SQ, HX):
        z = 0.27 + 0.18j
        w = wp_eval(z, lat, 0)
        w1 = wp_eval(z, lat, 1)
        lhs = w1 * w1
        rhs = 4 * w**3 - lat.g2 * w - lat.g3
        assert abs(lhs - rhs) < 1e-9 * max(1.0, abs(rhs))


def test_wp_is_even():
    z = 0.21 - 0.13j
    assert abs(wp_eval(z, SQ, 0) - wp_eval(-z, SQ, 0)) < 1e-10
    assert abs(wp_eval(z, SQ, 1) + wp_eval(-z, SQ, 1)) < 1e-10


def test_wp_periodicity():
    z = 0.4 + 0.1j
    for period in (1, SQ.tau, 1 + SQ.tau):
        assert abs(wp_eval(z + period, SQ, 0) - wp_eval(z, SQ, 0)) < 1e-9


def test_wp_prime_vanishes_at_half_periods():
    for lat in (SQ, HX):
        for w in (0.5, lat.tau / 2, (1 + lat.tau) / 2):
            assert abs(wp_eval(w, lat, 1)) < 1e-9


def test_wp_higher_derivatives_consistent():
    z = 0.33 + 0.21j
    w = wp_eval(z, SQ, 0)
    w1 = wp_eval(z, SQ, 1)
    assert abs(wp_eval(z, SQ, 2) - (6 * w * w - SQ.g2 / 2)) < 1e-8
    assert abs(wp_eval(z, SQ, 3) - 12 * w * w1) < 1e-8


def test_wp_series_path_matches_theta_path():
    # points just inside and outside the series switchover radius agree
    for scale in (0.08, 0.12):
        z = scale * SQ.shortest * cmath.exp(0.7j)
        h = 1e-6
        d_numeric = (wp_eval(z + h, SQ, 0) - wp_eval(z - h, SQ, 0)) / (2 * h)
        assert abs(d_numeric - wp_eval(z, SQ, 1)) < 1e-4 * abs(d_numeric)


def test_near_pole_error():
    with pytest.raises(NearPoleError):
        wp_eval(1e-12, SQ, 0)
    with pytest.raises(NearPoleError):
        wp_eval(1 + SQ.tau + 1e-12, SQ, 0)


def test_rational_kernel():
    z = 0.3 + 0.4j
    assert abs(rational_kernel(z) - 1 / z**2) < 1e-15
    assert abs(rational_kernel(z, 1) + 2 / z**3) < 1e-15
    assert abs(rational_kernel(z, 3) + 24 / z**5) < 1e-12


def test_trigonometric_kernel():
    z = 0.7 + 0.1j
    expect = 1 / cmath.sin(z) ** 2
    assert abs(trigonometric_kernel(z) - expect) < 1e-12
    h = 1e-6
    d_numeric = (trigonometric_kernel(z + h) - trigonometric_kernel(z - h)) / (2 * h)
    assert abs(trigonometric_kernel(z, 1) - d_numeric) < 1e-4


def test_kernels_are_wp_degenerations():
    # wp(z) - 1/z^2 -> 0 coefficient-wise as both invariants vanish; compare
    # the square-lattice wp against its principal part at a small argument
    z = 0.02 * SQ.shortest + 0.013j
    w = wp_eval(z, SQ, 0)
    assert abs(w - rational_kernel(z)) < 1e-2 * abs(w)
