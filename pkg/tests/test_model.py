import math

import numpy as np
import pytest

from conftest import constant_rate_spec, planar_fiber_spec

from solenoid_dim.errors import DomainError, InvalidSpecError
from solenoid_dim.model import (
    SolenoidSpec,
    apply,
    base_map,
    check_hypotheses,
    contraction,
    fiber_to_vector,
    multiplier,
    multiplier_gradient,
    rate_bounds,
    translation,
    translation_gradient,
)
from solenoid_dim.trig import constant, trig_poly, zero


def test_trig_value_and_gradient_match_finite_differences():
    poly = trig_poly(2, [((0, 0), 0.3, 0.0), ((1, 0), 0.1, -0.2), ((2, 3), -0.05, 0.07)])
    rng = np.random.default_rng(0)
    for _ in range(50):
        x = rng.random(2)
        grad = poly.gradient(x)
        for i in range(2):
            h = np.zeros(2)
            h[i] = 1e-6
            fd = (poly.value(x + h) - poly.value(x - h)) / 2e-6
            assert grad[i] == pytest.approx(fd, abs=1e-6)


def test_trig_periodicity():
    poly = trig_poly(2, [((1, -2), 0.4, 0.1)])
    x = np.array([0.37, 0.81])
    assert poly.value(x) == pytest.approx(poly.value(x + [1.0, 0.0]), abs=1e-12)
    assert poly.value(x) == pytest.approx(poly.value(x + [0.0, -3.0]), abs=1e-12)


def test_trig_range_bound_contains_scan():
    poly = trig_poly(1, [((0,), 0.1, 0.0), ((1,), 0.02, 0.0), ((3,), 0.0, 0.01)])
    lo, hi = poly.range_bound()
    scan_lo, scan_hi = poly.scan_range(2048)
    assert lo <= scan_lo <= scan_hi <= hi


def test_base_map_doubling():
    spec = constant_rate_spec(0.2)
    assert base_map(spec, [0.75]) == pytest.approx([0.5])


def test_apply_linear_case():
    spec = SolenoidSpec(
        l=1, p=1, d=1, M=(2,),
        lambda_field=constant(1, 0.5),
        f=(zero(1),), lambda_tilde=0.1, g=(zero(1),),
        E_radius=0.5, F_radius=0.5,
    )
    x, y, z = apply(spec, (np.zeros(1), np.array([0.4]), np.array([0.3])))
    assert y == pytest.approx([0.2])
    assert z == pytest.approx([0.03])


def test_apply_planar_fiber_traces_circle():
    spec = planar_fiber_spec(lam=0.2, eps=0.25)
    x, y, z = apply(spec, (np.zeros(1), np.zeros(2), np.zeros(1)))
    assert x == pytest.approx([0.0])
    assert y == pytest.approx([0.25, 0.0])
    assert z == pytest.approx([0.0])


def test_apply_rejects_point_outside_fiber():
    spec = constant_rate_spec(0.2)
    with pytest.raises(DomainError):
        apply(spec, (np.zeros(1), np.array([0.9]), np.zeros(1)))


def test_apply_periodic_in_base():
    spec = planar_fiber_spec()
    pt = (np.array([0.3]), np.array([0.1, -0.2]), np.array([0.05]))
    shifted = (pt[0] + 1.0, pt[1], pt[2])
    for a, b in zip(apply(spec, pt), apply(spec, shifted)):
        assert np.allclose(a, b, atol=1e-12)


def test_conformality_of_fiber_derivative():
    # D_y nu^T D_y nu must equal lam(x)^2 I to round-off, for random angles
    spec = SolenoidSpec(
        l=1, p=2, d=1, M=(2,),
        lambda_field=trig_poly(1, [((0,), 0.2, 0.0), ((1,), 0.05, 0.0)]),
        theta_field=trig_poly(1, [((1,), 1.3, 0.7)]),
        f=(zero(1), zero(1)),
        lambda_tilde=0.01, g=(zero(1),),
        E_radius=0.5, F_radius=0.5,
    )
    rng = np.random.default_rng(1)
    for _ in range(1000):
        x = rng.random(1)
        c = complex(multiplier(spec, x))
        dy = np.array([[c.real, -c.imag], [c.imag, c.real]])
        lam = float(contraction(spec, x))
        assert np.linalg.norm(dy.T @ dy - lam**2 * np.eye(2)) < 1e-12


def test_rotation_gradient_matches_finite_differences():
    spec = SolenoidSpec(
        l=1, p=2, d=1, M=(2,),
        lambda_field=trig_poly(1, [((0,), 0.2, 0.0), ((1,), 0.05, 0.0)]),
        theta_field=trig_poly(1, [((1,), 0.9, -0.4)]),
        f=(trig_poly(1, [((1,), 0.2, 0.0)]), trig_poly(1, [((2,), 0.0, 0.1)])),
        lambda_tilde=0.01, g=(zero(1),),
        E_radius=0.5, F_radius=0.5,
    )
    rng = np.random.default_rng(2)
    for _ in range(50):
        x = rng.random(1)
        h = 1e-6
        for field, grad in ((multiplier, multiplier_gradient), (translation, translation_gradient)):
            fd = (field(spec, x + h) - field(spec, x - h)) / (2 * h)
            assert abs(complex(grad(spec, x)[0]) - complex(fd)) < 1e-5


def test_invalid_specs_rejected():
    good = dict(
        l=1, p=1, d=1, M=(2,),
        lambda_field=constant(1, 0.2),
        f=(zero(1),), lambda_tilde=0.05, g=(zero(1),),
        E_radius=0.5, F_radius=0.5,
    )
    SolenoidSpec(**good)
    with pytest.raises(InvalidSpecError):
        SolenoidSpec(**{**good, "M": (1,)})
    with pytest.raises(InvalidSpecError):
        SolenoidSpec(**{**good, "lambda_field": constant(1, 1.2)})
    with pytest.raises(InvalidSpecError):
        SolenoidSpec(**{**good, "lambda_tilde": 0.3})
    with pytest.raises(InvalidSpecError):
        SolenoidSpec(**{**good, "p": 3, "f": (zero(1), zero(1), zero(1))})
    with pytest.raises(InvalidSpecError):
        # translation too large for the declared fiber ball
        SolenoidSpec(**{**good, "f": (trig_poly(1, [((1,), 0.6, 0.0)]),)})


def test_rate_bounds_constant():
    b = rate_bounds(constant_rate_spec(0.05))
    assert b.lambda_bar == b.lambda_low == pytest.approx(0.05)
    assert (b.beta_bar, b.beta_low, b.degree) == (2.0, 2.0, 2)


def test_rate_bounds_two_axes():
    spec = SolenoidSpec(
        l=2, p=1, d=1, M=(2, 3),
        lambda_field=constant(2, 0.05),
        f=(zero(2),), lambda_tilde=0.01, g=(zero(2),),
        E_radius=0.5, F_radius=0.5,
    )
    b = rate_bounds(spec)
    assert (b.beta_bar, b.beta_low, b.degree) == (3.0, 2.0, 6)


def test_rate_bounds_cosine_field(var_spec):
    b = rate_bounds(var_spec)
    assert b.lambda_bar == pytest.approx(0.12)
    assert b.lambda_low == pytest.approx(0.08)
    assert b.lambda_low <= b.scan_lambda_low <= b.scan_lambda_bar <= b.lambda_bar


def _scripted_checks(lam_bar, lam_low, beta_bar, beta_low, n, l, p):
    """Plain transcription of the rate inequalities, kept independent."""
    first = lam_bar < n ** (-max(l, 2))
    second_rhs = (beta_bar**l * beta_low ** (2 * math.log(n) / math.log(beta_low / lam_bar) - l)) ** (
        2 * math.log(lam_low) / math.log(n)
    )
    pinch = math.log(beta_low ** (-l) * lam_bar**p * n**2)
    mu0 = (
        (l * math.log(beta_bar) - p * math.log(beta_low)) / (2 * math.log(n))
        - l * math.log(beta_bar) / pinch
    ) / (0.5 - 2 * math.log(n) / (2 * pinch))
    return first, second_rhs, mu0


def test_hypothesis_checker_strong_contraction_passes(strong_spec):
    rep = check_hypotheses(rate_bounds(strong_spec), strong_spec.l, strong_spec.p)
    first, second_rhs, mu0 = _scripted_checks(0.05, 0.05, 2.0, 2.0, 2, 1, 1)
    assert first and rep.strong_contraction_ok and rep.near_conformal_ok
    assert rep.excluded_word_exponent == pytest.approx(mu0, abs=1e-12)
    assert rep.excluded_word_exponent == pytest.approx(0.37580364941821515, abs=1e-12)
    low, high = rep.admissible_exponent_window
    assert (low, high) == pytest.approx((mu0, 0.5), abs=1e-12)
    assert rep.slacks["strong_contraction_vs_rates"] == pytest.approx(second_rhs - 0.05, abs=1e-12)


def test_hypothesis_checker_weak_contraction_fails(sw_spec):
    rep = check_hypotheses(rate_bounds(sw_spec), sw_spec.l, sw_spec.p)
    first, second_rhs, _ = _scripted_checks(0.2, 0.2, 2.0, 2.0, 2, 1, 1)
    assert first  # the degree inequality alone still holds
    assert second_rhs == pytest.approx(0.14399793047570025, abs=1e-12)
    assert not rep.strong_contraction_ok
    assert rep.slacks["strong_contraction_vs_rates"] == pytest.approx(second_rhs - 0.2, abs=1e-12)


def test_hypothesis_checker_near_conformal_two_axes():
    spec = SolenoidSpec(
        l=2, p=2, d=1, M=(2, 3),
        lambda_field=constant(2, 0.01),
        f=(zero(2), zero(2)), lambda_tilde=0.001, g=(zero(2),),
        E_radius=0.5, F_radius=0.5,
    )
    rep = check_hypotheses(rate_bounds(spec), 2, 2)
    assert rep.near_conformal_ok
    assert rep.slacks["near_conformal_expansion"] == pytest.approx(math.sqrt(6) * 4 - 9, abs=1e-12)


def test_hypothesis_checker_rejects_degenerate_rates():
    from solenoid_dim.model import RateBounds

    with pytest.raises(InvalidSpecError):
        check_hypotheses(RateBounds(1.0, 0.5, 2.0, 2.0, 2), 1, 1)
    with pytest.raises(InvalidSpecError):
        check_hypotheses(RateBounds(0.2, 0.2, 2.0, 0.2, 2), 1, 1)


def test_fiber_scalar_roundtrip():
    spec = planar_fiber_spec()
    y = np.array([0.3, -0.2])
    from solenoid_dim.model import fiber_to_scalar

    assert np.allclose(fiber_to_vector(spec, fiber_to_scalar(spec, y)), y)
