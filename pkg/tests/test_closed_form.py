import itertools
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from riemplan.closed_form import (ClosedFormParams, controls_at, kappa_g_at, phase_at, q2_log_form,
                                  theta_at, theta_dot_at, u1_dot_at)
from riemplan.errors import DegenerateParametersError, DomainError, SingularityError
from riemplan.flow import reduced_rhs

GRID = [ClosedFormParams(*c) for c in itertools.product((0.5, 1.0, 2.0), (0.0, 0.3), (0.0, 1.0))]
TIMES = (0.0, 0.25, 0.5, 0.75, 1.0)
UNIT = ClosedFormParams(1.0, 0.0, 0.0)


def printed_controls(c1, c2, c3, t):
    """Expanded u1, u2 written directly in t and the constants (log form, c1 > 0)."""
    s = t + c2
    r = math.sqrt(s * s + c1 * c1)
    bracket = c1 * math.log((s + r) / c1) + c3
    return s + c1 / r * bracket, s / r * bracket - c1


def printed_theta_dot(c1, c2, c3, t):
    # heading-rate display as printed, including its [s^2 + c1]^(3/2) term
    s = t + c2
    r = math.sqrt(s * s + c1 * c1)
    bracket = c1 * math.log((s + r) / c1) + c3
    num = 1 - c1 * s / (s * s + c1) ** 1.5 * bracket + c1 * c1 / (s * s + c1 * c1)
    u1 = s + c1 / r * bracket
    return -num / math.sqrt(1 - u1 * u1)


def test_phase_at_origin_time():
    pt = phase_at(UNIT, 0.0)
    assert pt.as_array().tolist() == [1.0, 0.0, 0.0, 1.0]


def test_phase_at_unit_time():
    pt = phase_at(UNIT, 1.0)
    np.testing.assert_allclose(pt.as_array(), [math.sqrt(2), 0.8813736, 1 / math.sqrt(2), 1 / math.sqrt(2)],
                               rtol=0, atol=1e-7)
    assert pt.state.q2 == pytest.approx(math.asinh(1.0), abs=1e-15)


def test_phase_at_shift_zero():
    params = ClosedFormParams(-1.5, 0.3, 2.0)
    pt = phase_at(params, -0.3)
    assert pt.costate.p1 == 0.0
    assert pt.state.q1 == 1.5


def test_controls_at_examples():
    u = controls_at(UNIT, 0.0)
    assert (u.u1, u.u2) == (0.0, -1.0)
    assert u.norm2 == 1.0 == sum(x * x for x in (1.0, 0.0))
    u1 = controls_at(UNIT, 1.0)
    assert u1.norm2 == pytest.approx(2 + math.asinh(1.0) ** 2, rel=1e-14)
    assert u1.norm2 == pytest.approx(2.7768, abs=1e-4)


@pytest.mark.parametrize("params", GRID)
def test_controls_match_printed_expansion(params):
    for t in TIMES:
        u = controls_at(params, t)
        e1, e2 = printed_controls(params.c1, params.c2, params.c3, t)
        assert u.u1 == pytest.approx(e1, rel=1e-12, abs=1e-14)
        assert u.u2 == pytest.approx(e2, rel=1e-12, abs=1e-14)


@pytest.mark.parametrize("params", GRID)
def test_first_integrals(params):
    h = 1e-5
    for t in TIMES:
        pt = phase_at(params, t)
        plus, minus = phase_at(params, t + h).state, phase_at(params, t - h).state
        v = ((plus.q1 - minus.q1) / (2 * h), (plus.q2 - minus.q2) / (2 * h))
        assert abs(v[0] ** 2 + v[1] ** 2 - 1) <= 1e-6
        # q' = p: the costate is the velocity of the analytic curve
        assert v == pytest.approx((pt.costate.p1, pt.costate.p2), abs=1e-9)
        assert abs(pt.state.q1 * pt.costate.p2 - params.c1) <= 1e-12 * abs(params.c1)
        assert abs(pt.costate.p1 ** 2 + pt.costate.p2 ** 2 - 1) <= 1e-14
        u = controls_at(params, t)
        qn2 = pt.state.q1 ** 2 + pt.state.q2 ** 2
        assert u.norm2 == pytest.approx(qn2, rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.05, 20), st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5))
def test_log_and_asinh_forms_agree(c1, c2, c3, t):
    # log((s + r) / c1) cancels catastrophically for s << -c1; compare where it is well conditioned
    assume(t + c2 >= -c1)
    params = ClosedFormParams(c1, c2, c3)
    assert phase_at(params, t).state.q2 == pytest.approx(q2_log_form(params, t), rel=1e-12, abs=1e-12 * c1)


def test_log_form_requires_positive_c1():
    with pytest.raises(DomainError):
        q2_log_form(ClosedFormParams(-1.0), 0.0)


def test_negative_c1_solves_clairaut_equation():
    params = ClosedFormParams(-0.7, 0.2, -1.0)
    h = 1e-6
    for t in (-1.0, 0.0, 0.5, 2.0):
        q1 = phase_at(params, t).state.q1
        dq2 = (phase_at(params, t + h).state.q2 - phase_at(params, t - h).state.q2) / (2 * h)
        assert dq2 == pytest.approx(params.c1 / q1, abs=1e-8)


def test_straight_line_limit():
    params = ClosedFormParams(0.0, 0.5, 2.0)
    pt = phase_at(params, 1.0)
    assert pt.as_array().tolist() == [1.5, 2.0, 1.0, 0.0]
    pt = phase_at(params, -2.0)
    assert pt.as_array().tolist() == [1.5, 2.0, -1.0, 0.0]
    with pytest.raises(DegenerateParametersError):
        phase_at(params, -0.5)
    # limit of the general branch
    near = phase_at(ClosedFormParams(1e-9, 0.5, 2.0), 1.0)
    np.testing.assert_allclose(near.as_array(), [1.5, 2.0, 1.0, 0.0], atol=1e-8)


def test_theta_examples():
    assert theta_at(UNIT, 0.0) == pytest.approx(math.pi / 2, abs=1e-15)
    assert theta_dot_at(UNIT, 0.0) == -2.0


def test_theta_domain_errors():
    # u1(1) = 1 + asinh(1)/sqrt(2) > 1
    with pytest.raises(DomainError):
        theta_at(UNIT, 1.0)
    with pytest.raises(DomainError):
        theta_dot_at(UNIT, 1.0)
    # straight line: u1 = t + c2 is exactly 1 at t = 1
    line = ClosedFormParams(0.0, 0.0, 0.0)
    assert theta_at(line, 1.0) == 0.0
    with pytest.raises(SingularityError):
        theta_dot_at(line, 1.0)


def test_theta_clamps_rounding():
    line = ClosedFormParams(0.0, 1e-13, 0.0)
    assert theta_at(line, 1.0) == 0.0


@pytest.mark.parametrize("params", [UNIT, ClosedFormParams(0.5, 0.3, 0.0), ClosedFormParams(2.0, 0.0, -1.0)])
def test_u1_dot_matches_finite_difference(params):
    h = 1e-6
    for t in (-0.4, 0.0, 0.3):
        fd = (controls_at(params, t + h).u1 - controls_at(params, t - h).u1) / (2 * h)
        assert u1_dot_at(params, t) == pytest.approx(fd, abs=1e-8)


def test_theta_dot_matches_printed_display_when_c1_is_one():
    for c2, c3, t in itertools.product((0.0, 0.1), (0.0, -0.2), (-0.2, 0.0, 0.1)):
        params = ClosedFormParams(1.0, c2, c3)
        assert theta_dot_at(params, t) == pytest.approx(printed_theta_dot(1.0, c2, c3, t), rel=1e-12)


def test_kappa_g():
    assert kappa_g_at(UNIT, 0.0) == pytest.approx(-2.0, abs=1e-9)
    for t in (-0.3, -0.1, 0.0, 0.1, 0.25):
        assert kappa_g_at(UNIT, t) - theta_dot_at(UNIT, t) == 0.0
        h = 1e-5
        fd = (theta_at(UNIT, t + h) - theta_at(UNIT, t - h)) / (2 * h)
        assert abs(kappa_g_at(UNIT, t) - fd) <= 1e-6


def test_reduced_system_holds_on_unit_circle():
    # at t = 0 the analytic curve sits on q1^2 + q2^2 = 1 and satisfies the reduced equations
    h = 1e-6
    pt = phase_at(UNIT, 0.0)
    plus, minus = phase_at(UNIT, h), phase_at(UNIT, -h)
    derivative = (plus.as_array() - minus.as_array()) / (2 * h)
    np.testing.assert_allclose(derivative, reduced_rhs(pt), atol=1e-9)


def test_reduced_system_fails_off_unit_circle():
    h = 1e-6
    pt = phase_at(UNIT, 1.0)
    derivative = (phase_at(UNIT, 1 + h).as_array() - phase_at(UNIT, 1 - h).as_array()) / (2 * h)
    assert abs(derivative[2] - reduced_rhs(pt)[2]) > 1.0


def test_params_must_be_finite():
    with pytest.raises(ValueError):
        ClosedFormParams(math.nan)
