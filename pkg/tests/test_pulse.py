import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pmdweak.errors import AnnihilationError, ValidationError
from pmdweak.pulse import (
    GaussianPulse,
    Grid,
    SampledField,
    forward_transform,
    gaussian_envelope,
    inverse_transform,
    mean_time,
)

PULSE = GaussianPulse(t_c=10.0)
GRID = Grid(4096, 200.0)


def test_grid_pairing():
    for g in (GRID, Grid(64, 1.0), Grid.for_pulse(3.0, 7.0)):
        assert abs(g.dt * g.domega * g.n - 2 * math.pi) < 1e-12
        assert g.t[g.n // 2] == 0.0 and g.x[g.n // 2] == 0.0


@pytest.mark.parametrize("n,span", [(63, 1.0), (100, 1.0), (32, 1.0), (64, 0.0), (64, math.inf)])
def test_grid_validation(n, span):
    with pytest.raises(ValidationError):
        Grid(n, span)


def test_grid_sizing_rule():
    g = Grid.for_pulse(1.0, 100.0, n=64)
    assert g.t_span == 16.0 + 200.0
    assert g.dt <= 1.0 / 32


def test_pulse_validation():
    with pytest.raises(ValidationError):
        GaussianPulse(0.0)
    with pytest.raises(ValidationError):
        GaussianPulse(1.0, -1.0)


def test_envelope_examples():
    grid = Grid(4096, 204.8)
    g = gaussian_envelope(PULSE, grid)
    t = grid.t
    assert g[t == 0][0] == pytest.approx((math.sqrt(2 * math.pi) * 10.0) ** -0.5, rel=1e-15)
    assert np.sum(np.abs(g) ** 2) * grid.dt == pytest.approx(1.0, abs=1e-9)
    k = int(np.argmin(abs(t - 10.0)))
    assert t[k] == pytest.approx(10.0, abs=1e-12)
    assert g[k] / g[grid.n // 2] == pytest.approx(math.exp(-0.25), rel=1e-14)


def test_envelope_is_even():
    g = gaussian_envelope(PULSE, GRID)
    mid = GRID.n // 2
    np.testing.assert_array_equal(g[mid + 1:], g[mid - 1:0:-1])


def test_envelope_window_too_narrow():
    with pytest.raises(ValidationError):
        gaussian_envelope(PULSE, Grid(4096, 150.0))


def test_delta_has_flat_spectrum():
    f = np.zeros(GRID.n, complex)
    f[GRID.n // 2] = 1.0
    spec = np.abs(forward_transform(f, GRID))
    np.testing.assert_allclose(spec, spec[0], rtol=1e-12)


def test_round_trip(rng):
    f = rng.normal(size=GRID.n) + 1j * rng.normal(size=GRID.n)
    back = inverse_transform(forward_transform(f, GRID), GRID)
    assert np.abs(back - f).max() <= 1e-12 * np.abs(f).max()


def test_length_mismatch():
    with pytest.raises(ValidationError):
        forward_transform(np.zeros(10), GRID)
    with pytest.raises(ValidationError):
        inverse_transform(np.zeros(10), GRID)


def test_gaussian_spectrum_against_quadrature():
    # oracle: trapezoid quadrature of (1/2pi) int exp(+i x t) g(t) dt on a fine independent mesh
    spec = forward_transform(gaussian_envelope(PULSE, GRID), GRID)
    tt = np.linspace(-150.0, 150.0, 300001)
    gg = PULSE.envelope(tt)
    for k in (0, 1, 5, 32, 64):
        x = GRID.x[GRID.n // 2 + k]
        want = np.trapezoid(np.exp(1j * x * tt) * gg, tt) / (2 * math.pi)
        assert abs(spec[GRID.n // 2 + k] - want) < 1e-6
    # ratio at x = 1/t_c is exp(-(t_c x)^2) under this convention
    x1 = 1 / PULSE.t_c
    want = np.trapezoid(np.exp(1j * x1 * tt) * gg, tt) / np.trapezoid(gg, tt)
    assert abs(want - math.exp(-1.0)) < 1e-6


def test_time_shift_sign():
    # spectrum * exp(+i x tau) must delay the pulse by tau
    tau = 7.3
    grid = Grid(8192, 400.0)
    g = gaussian_envelope(PULSE, grid)
    shifted = inverse_transform(forward_transform(g, grid) * np.exp(1j * grid.x * tau), grid)
    np.testing.assert_allclose(shifted, PULSE.envelope(grid.t - tau), atol=1e-12)


def test_parseval(rng):
    f = gaussian_envelope(PULSE, GRID) * np.exp(1j * rng.normal(size=GRID.n) * 0.1)
    spec = forward_transform(f, GRID)
    lhs = np.sum(np.abs(f) ** 2) * GRID.dt
    rhs = 2 * math.pi * np.sum(np.abs(spec) ** 2) * GRID.domega
    assert abs(lhs - rhs) <= 1e-10


def test_mean_time_examples():
    t = GRID.t
    assert abs(mean_time(PULSE.envelope(t) ** 2, GRID)) < 1e-10
    assert mean_time(PULSE.envelope(t - 0.35) ** 2, GRID) == pytest.approx(0.35, abs=1e-8)
    two = PULSE.envelope(t - 3.0) ** 2 + PULSE.envelope(t + 3.0) ** 2
    assert abs(mean_time(two, GRID)) < 1e-10


@given(st.integers(-200, 200))
def test_mean_time_translation(k):
    base = PULSE.envelope(GRID.t - 1.1) ** 2
    shifted = np.roll(base, k)
    delta = mean_time(shifted, GRID) - mean_time(base, GRID)
    assert abs(delta - k * GRID.dt) <= 1e-12


def test_mean_time_zero_intensity():
    with pytest.raises(AnnihilationError):
        mean_time(np.zeros(GRID.n), GRID)


def test_sampled_field_lengths():
    with pytest.raises(ValidationError):
        SampledField(GRID, np.zeros(3, complex), np.zeros(GRID.n, complex))
    f = SampledField(GRID, np.ones(GRID.n, complex), 1j * np.ones(GRID.n))
    np.testing.assert_array_equal(f.intensity, 2.0)
