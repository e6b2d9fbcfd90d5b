import numpy as np
import pytest

from degenflow.frac_kernel import (
    MultiplierSpec,
    apply_multiplier,
    circle_line_delta,
    fit_singularity_exponent,
    kernel_samples,
    multiplier_symbol,
    wavenumbers,
)
from degenflow.grid import ONE_D, GammaSet, Grid1D, Grid2D, distance_field


def test_wavenumbers():
    np.testing.assert_array_equal(wavenumbers(6), [0, 1, 2, -3, -2, -1])
    assert multiplier_symbol((4,), 0.5)[0] == 0


@pytest.mark.parametrize("eps", [0.2, 0.5, 0.9])
def test_unit_modes_unchanged(eps):
    x = Grid1D(16).nodes
    np.testing.assert_allclose(apply_multiplier(np.cos(np.pi * x), MultiplierSpec(eps)), np.cos(np.pi * x), atol=1e-13)


def test_diagonal_action_and_constants():
    x = Grid1D(16).nodes
    spec = MultiplierSpec(0.5)
    np.testing.assert_allclose(apply_multiplier(np.cos(2 * np.pi * x), spec), 2**-0.5 * np.cos(2 * np.pi * x), atol=1e-13)
    np.testing.assert_allclose(apply_multiplier(np.full(32, 4.0), spec), 0, atol=1e-13)


def test_multiplier_self_adjoint(rng):
    spec = MultiplierSpec(0.4)
    u, v = rng.standard_normal((2, 64))
    assert np.dot(apply_multiplier(u, spec), v) == pytest.approx(np.dot(u, apply_multiplier(v, spec)))


def test_multiplier_2d_modes():
    X, Y = Grid2D(8).mesh()
    f = np.cos(np.pi * (3 * X + 4 * Y))
    np.testing.assert_allclose(apply_multiplier(f, MultiplierSpec(0.5, 2)), 5**-0.5 * f, atol=1e-13)


def test_spec_validation():
    with pytest.raises(ValueError):
        MultiplierSpec(1.0)
    with pytest.raises(ValueError):
        MultiplierSpec(0.5, 3)
    with pytest.raises(ValueError):
        MultiplierSpec(0.5, zero_mode_policy="keep")
    with pytest.raises(ValueError):
        apply_multiplier(np.ones(7), MultiplierSpec(0.5))
    with pytest.raises(ValueError):
        apply_multiplier(np.ones((4, 6)), MultiplierSpec(0.5, 2))


def test_kernel_direct_sum_oracle():
    g = Grid1D(4096)
    G = kernel_samples(MultiplierSpec(0.5), g)
    k = np.arange(1, g.m + 1, dtype=float)
    for i in (64, 410, 1515, 3686):
        x = i / g.m
        # 1/2 sum_{k != 0} |k|^-eps cos(pi k x), Nyquist term counted once
        terms = 2 * k**-0.5 * np.cos(np.pi * k * x)
        terms[-1] /= 2
        assert G[g.position(i)] == pytest.approx(0.5 * terms.sum(), rel=1e-9, abs=1e-9)
    near = G[g.position(1): g.position(8)]
    assert np.all(near > 0) and np.all(np.diff(near) < 0)
    np.testing.assert_allclose(G[1:], G[1:][::-1], atol=1e-10)


def test_kernel_2d_radial():
    g = Grid2D(128)
    G = kernel_samples(MultiplierSpec(0.5, 2), g)
    for r in (4, 8, 16):
        assert G[g.m + r, g.m] == pytest.approx(G[g.m, g.m + r], rel=1e-12)


def test_kernel_needs_resolution():
    with pytest.raises(ValueError):
        kernel_samples(MultiplierSpec(0.5), Grid1D(32))


def test_fit_exact_power():
    g = Grid1D(1024)
    d = distance_field(g)
    fit = fit_singularity_exponent(d**0.3, ONE_D, (0.005, 0.05))
    assert fit.slope == pytest.approx(0.3, abs=1e-6)
    plain = fit_singularity_exponent(d**0.3, d, (0.005, 0.05), remainder="none")
    assert plain.slope == pytest.approx(0.3, abs=1e-10)
    assert plain.r_squared == pytest.approx(1.0)


def test_fit_power_with_offset():
    r = np.linspace(0.01, 0.2, 60)
    fit = fit_singularity_exponent(2.0 * r**-0.4 - 3.0, r, (0.01, 0.2))
    assert fit.slope == pytest.approx(-0.4, abs=1e-6)
    assert fit.offset == pytest.approx(-3.0, abs=1e-5)


def test_fit_validation():
    r = np.linspace(0.01, 0.2, 60)
    with pytest.raises(ValueError):
        fit_singularity_exponent(r, r, (0.2, 0.01))
    with pytest.raises(ValueError):
        fit_singularity_exponent(r, r, (0.01, 0.2), spacing=0.01)
    with pytest.raises(ValueError):
        fit_singularity_exponent(r, r, (0.01, 0.015))
    with pytest.raises(ValueError):
        fit_singularity_exponent(-r, r, (0.01, 0.2))
    with pytest.raises(ValueError):
        fit_singularity_exponent(r, r, (0.01, 0.2), remainder="quadratic")


def test_plain_loglog_is_biased_by_smooth_part():
    # motivates the offset model used by default
    g = Grid1D(4096)
    G = kernel_samples(MultiplierSpec(0.5), g)
    d = np.abs(g.nodes)
    plain = fit_singularity_exponent(G, d, (0.005, 0.05), remainder="none")
    offset = fit_singularity_exponent(G, d, (0.005, 0.05))
    assert abs(offset.slope + 0.5) < abs(plain.slope + 0.5)


def test_circle_delta_mass_and_shift():
    g = Grid2D(256)
    gam = GammaSet.circle(radius=0.5)
    delta = circle_line_delta(g, gam)
    assert delta.sum() * g.spacing**2 == pytest.approx(np.pi, rel=0.01)
    shifted = circle_line_delta(g, GammaSet.circle(center=(g.spacing, 0.0), radius=0.5))
    np.testing.assert_allclose(shifted, np.roll(delta, 1, axis=0), atol=1e-9)
    with pytest.raises(ValueError):
        circle_line_delta(Grid2D(4), gam)
