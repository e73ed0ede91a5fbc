import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tangentray.contours import ContourPath, DecayModel, Line, named_contour, truncate
from tangentray.quadrature import (QuadOptions, QuadratureError, integrate,
                                   integrate_batch, integrate_rounds)

from _oracles import AI0

TIGHT = QuadOptions(rel_tol=1e-12, abs_tol=1e-15)


def gamma0_truncated(tail=1e-14, clearance=1.0):
    return truncate(named_contour("Gamma0", clearance),
                    DecayModel("cubic_exp", 1.0 / 6.0), tail)


def test_airy_representation_integral():
    # (1/2pi) int_{Gamma_0} e^{i t^3/3} dt = Ai(0), gamma-constant oracle
    res = integrate(lambda t: np.exp(1j * t ** 3 / 3) / (2 * np.pi),
                    gamma0_truncated(), TIGHT)
    assert res.value == pytest.approx(AI0, abs=5e-13)
    assert abs(res.value - 0.3550280539) < 1e-9
    assert res.error_estimate < 1e-11
    assert res.evaluations > 0 and res.truncation_radius > 0


def test_zero_integrand():
    res = integrate(lambda t: np.zeros_like(t), gamma0_truncated(), TIGHT)
    assert res.value == 0.0
    assert res.error_estimate == 0.0


def test_reversal_negates():
    path = gamma0_truncated()
    f = lambda t: np.exp(1j * t ** 3 / 3 - 0.1 * t)
    a = integrate(f, path, TIGHT).value
    b = integrate(f, path.reversed(), TIGHT).value
    assert abs(a + b) <= 1e-14 * max(1.0, abs(a))


def test_homotopic_truncations_agree():
    f = lambda t: np.exp(1j * t ** 3 / 3) * np.cos(t / 3.0)
    r1 = integrate(f, gamma0_truncated(clearance=1.0), TIGHT)
    r2 = integrate(f, truncate(
        ContourPath(named_contour("Gamma0", 2.5).segments),
        DecayModel("cubic_exp", 1.0 / 6.0), 1e-13), TIGHT)
    assert abs(r1.value - r2.value) <= r1.error_estimate + r2.error_estimate + 2e-13


@settings(max_examples=12, deadline=None)
@given(st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False))
def test_linearity(alpha, beta):
    path = ContourPath((Line(-1.0, 1.0 + 0.5j),))
    f = lambda t: np.exp(1j * t)
    g = lambda t: t * t
    lhs = integrate(lambda t: alpha * f(t) + beta * g(t), path, TIGHT).value
    rhs = alpha * integrate(f, path, TIGHT).value + beta * integrate(g, path, TIGHT).value
    assert abs(lhs - rhs) <= 1e-10 * (1.0 + abs(lhs))


def test_truncation_soundness():
    f = lambda t: np.exp(1j * t ** 3 / 3)
    base = gamma0_truncated(tail=1e-10)
    R = base.truncation_radius
    doubled = truncate(named_contour("Gamma0"),
                       DecayModel("cubic_exp", 1.0 / 6.0, min_radius=2 * R), 1e-10)
    a = integrate(f, base, TIGHT).value
    b = integrate(f, doubled, TIGHT).value
    assert abs(a - b) < 1e-10


def test_untruncated_path_rejected():
    with pytest.raises(QuadratureError):
        integrate(lambda t: t, named_contour("l3"), TIGHT)


def test_nonfinite_sample_rejected():
    path = ContourPath((Line(-1.0, 1.0),))
    with pytest.raises(QuadratureError):
        integrate(lambda t: 1.0 / (t - 0.25), path, TIGHT)  # pole on the path


def test_failure_carries_best_result():
    path = ContourPath((Line(0.0, 30.0),))
    opts = QuadOptions(rel_tol=1e-14, abs_tol=1e-16, max_subdivisions=3)
    with pytest.raises(QuadratureError) as exc:
        integrate(lambda t: np.exp(1j * 40 * t), path, opts)
    assert exc.value.result is not None
    assert np.isfinite(exc.value.result.error_estimate)


def test_rounds_matches_heap():
    f = lambda t: np.exp(1j * t ** 3 / 3) / (1.0 + t * t)
    path = gamma0_truncated()
    a = integrate(f, path, TIGHT).value
    b = integrate_rounds(f, path, TIGHT).value
    assert abs(a - b) < 1e-11


def test_batch_matches_scalar():
    path = gamma0_truncated()
    coeffs = np.array([0.3, 1.0 + 0.2j, -0.7j])

    def fmat(t):
        return np.exp(1j * t[None, :] ** 3 / 3) * np.exp(coeffs[:, None] * t[None, :] / 5)

    vals, errs, _ = integrate_batch(fmat, path, TIGHT)
    for c, v in zip(coeffs, vals):
        ref = integrate(lambda t: np.exp(1j * t ** 3 / 3 + c * t / 5), path, TIGHT).value
        assert abs(v - ref) < 1e-11
