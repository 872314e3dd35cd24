"""Chebyshev map iteration and its stationary arcsine statistics."""

import math

import numpy as np
import pytest
from scipy import integrate, stats

from dcskwpt.chaos import (ChaosGenerator, chebyshev_next, chebyshev_step,
                           generate_chips, sample_invariant)


def test_map_degree_two_polynomial_identity():
    gen = ChaosGenerator(degree=2, state=0.3)
    assert math.isclose(chebyshev_next(gen), 2 * 0.3 ** 2 - 1, abs_tol=1e-12)
    assert math.isclose(gen.state, -0.82, abs_tol=1e-12)


def test_map_fixed_point_and_cube_angle():
    gen = ChaosGenerator(degree=2, state=1.0)
    assert chebyshev_next(gen) == 1.0
    gen3 = ChaosGenerator(degree=3, state=0.5)
    assert math.isclose(chebyshev_next(gen3), -1.0, abs_tol=1e-12)


def test_generator_validation():
    with pytest.raises(ValueError):
        ChaosGenerator(degree=1, state=0.0)
    with pytest.raises(ValueError):
        ChaosGenerator(degree=2.5, state=0.0)
    with pytest.raises(ValueError):
        ChaosGenerator(degree=2, state=1.5)
    gen = ChaosGenerator(degree=2, state=0.0)
    gen.state = 1.0001  # mutated out of range
    with pytest.raises(ValueError):
        chebyshev_next(gen)


def test_generate_chips_two_exact_iterates():
    gen = ChaosGenerator(degree=2, state=0.3)
    chips = generate_chips(gen, 2)
    assert np.allclose(chips, [-0.82, 2 * 0.82 ** 2 - 1], atol=1e-12)


def test_generate_chips_fixed_point_warns_but_produces():
    gen = ChaosGenerator(degree=2, state=1.0)
    with pytest.warns(RuntimeWarning):
        chips = generate_chips(gen, 3)
    assert np.array_equal(chips, [1.0, 1.0, 1.0])


def test_generate_chips_count_validation():
    gen = ChaosGenerator(degree=2, state=0.3)
    for bad in (0, -1, 2.5, True):
        with pytest.raises(ValueError):
            generate_chips(gen, bad)


def test_burn_advances_exactly():
    a = ChaosGenerator(degree=2, state=0.3)
    b = ChaosGenerator(degree=2, state=0.3)
    a.burn(7)
    for _ in range(7):
        chebyshev_next(b)
    assert a.state == b.state


def test_from_invariant_starts_in_range():
    rng = np.random.default_rng(5)
    gen = ChaosGenerator.from_invariant(rng, degree=3)
    assert gen.degree == 3 and abs(gen.state) <= 1.0


def test_chebyshev_step_matches_scalar_path():
    x = np.linspace(-0.99, 0.99, 101)
    stepped = chebyshev_step(x, 2)
    for xi, yi in zip(x, stepped):
        gen = ChaosGenerator(degree=2, state=float(xi))
        assert math.isclose(chebyshev_next(gen), yi, rel_tol=0.0, abs_tol=1e-12)


def test_invariant_fourth_moment_against_quadrature():
    # independent oracle: integrate x^4 against the arcsine weight
    target, err = integrate.quad(lambda x: x ** 4 / math.pi, -1.0, 1.0,
                                 weight="alg", wvar=(-0.5, -0.5))
    assert err < 1e-10
    assert math.isclose(target, 0.375, rel_tol=1e-10)
    rng = np.random.default_rng(42)
    x = sample_invariant(rng, 1_000_000)
    quart = x ** 4
    se = quart.std(ddof=1) / math.sqrt(quart.size)
    assert abs(quart.mean() - target) < 5.0 * se


def test_invariant_low_order_moments():
    rng = np.random.default_rng(9)
    x = sample_invariant(rng, 1_000_000)
    n = x.size
    assert abs(x.mean()) < 5.0 * x.std(ddof=1) / math.sqrt(n)
    sq = x * x
    assert abs(sq.mean() - 0.5) < 5.0 * sq.std(ddof=1) / math.sqrt(n)


@pytest.fixture(scope="module")
def long_orbit():
    gen = ChaosGenerator(degree=2, state=0.3)
    return generate_chips(gen, 1_000_000)


def test_orbit_in_range(long_orbit):
    assert np.all(np.abs(long_orbit) <= 1.0)


def test_orbit_moments_match_invariant_law(long_orbit):
    n = long_orbit.size
    for order, target in ((1, 0.0), (2, 0.5), (3, 0.0), (4, 0.375)):
        p = long_orbit ** order
        se = p.std(ddof=1) / math.sqrt(n)
        assert abs(p.mean() - target) < 5.0 * se, f"order {order}"


def test_orbit_autocorrelation_vanishes(long_orbit):
    x = long_orbit - long_orbit.mean()
    var = float((x * x).mean())
    n = x.size
    for lag in range(1, 6):
        r = float((x[:-lag] * x[lag:]).mean()) / var
        assert abs(r) < 5.0 / math.sqrt(n), f"lag {lag}"


def test_orbit_histogram_matches_arcsine_law(long_orbit):
    # equal-probability bins under the arcsine CDF F(x) = 1/2 + arcsin(x)/pi
    k = 32
    edges = -np.cos(np.pi * np.arange(k + 1) / k)
    counts, _ = np.histogram(long_orbit, bins=edges)
    expected = long_orbit.size / k
    chi2 = float(((counts - expected) ** 2 / expected).sum())
    assert chi2 < stats.chi2.ppf(1.0 - 1e-3, k - 1)
