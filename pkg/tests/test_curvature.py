import dataclasses
import math

import numpy as np
import pytest

from riemplan.curvature import (gaussian_curvature, geodesic_curvature, lie_bracket,
                                structure_functions)
from riemplan.errors import DegenerateFrameError
from riemplan.frames import FrameField, builtin_frame, fd_jacobian, fd_step, paper_frame

from oracles import K_GRUSHIN, K_HALFPLANE, K_PAPER


def swapped(frame):
    return dataclasses.replace(frame, name=frame.name + "-swapped", f1=frame.f2, f2=frame.f1,
                               jac1=frame.jac2, jac2=frame.jac1)


def test_bracket_examples():
    rng = np.random.default_rng(0)
    pf = paper_frame()
    for q in rng.uniform(-10, 10, (100, 2)):
        np.testing.assert_array_equal(lie_bracket(pf, q), [0.0, 0.0])
    np.testing.assert_array_equal(lie_bracket(builtin_frame("halfplane"), (0.0, 1.0)), [-1.0, 0.0])
    np.testing.assert_array_equal(lie_bracket(builtin_frame("grushin"), (2.0, 0.0)), [0.0, 1.0])


def test_bracket_against_finite_difference_jacobians():
    frame = FrameField.from_fields("wavy", lambda q: np.array([math.sin(q[1]), q[0] ** 2]),
                                   lambda q: np.array([q[0] * q[1], math.cos(q[0])]))
    q = np.array([0.7, -1.2])
    j1 = fd_jacobian(frame.f1, q)
    j2 = fd_jacobian(frame.f2, q)
    expected = j2 @ frame.f1(q) - j1 @ frame.f2(q)
    # hand expansion X^j d_j Y^i - Y^j d_j X^i
    a, b = q
    X = np.array([math.sin(b), a * a])
    Y = np.array([a * b, math.cos(a)])
    dY = np.array([[b, a], [-math.sin(a), 0.0]])
    dX = np.array([[0.0, math.cos(b)], [2 * a, 0.0]])
    np.testing.assert_allclose(expected, dY @ X - dX @ Y, atol=1e-9)
    np.testing.assert_allclose(lie_bracket(frame, q), dY @ X - dX @ Y, atol=1e-9)


@pytest.mark.parametrize("name", ["paper", "halfplane", "grushin"])
def test_bracket_antisymmetry(name):
    frame = builtin_frame(name)
    rng = np.random.default_rng(1)
    for q in rng.uniform(0.5, 5, (50, 2)):
        np.testing.assert_allclose(lie_bracket(swapped(frame), q), -lie_bracket(frame, q), atol=1e-12)


def test_structure_function_examples():
    sd = structure_functions(paper_frame(), (0.3, -4.0))
    assert (sd.c1, sd.c2) == (0.0, 0.0)
    sd = structure_functions(builtin_frame("halfplane"), (0.0, 1.0))
    assert (sd.c1, sd.c2) == (-1.0, 0.0)
    assert sd.gram_det == 1.0
    sd = structure_functions(builtin_frame("grushin"), (2.0, 0.0))
    assert (sd.c1, sd.c2) == (0.0, 0.5)


def test_structure_functions_non_orthogonal_frame():
    # f1 = (1, 0), f2 = (q1, 1): [f1, f2] = (1, 0) = 1 * f1
    frame = FrameField.from_fields("skew", lambda q: np.array([1.0, 0.0]), lambda q: np.array([q[0], 1.0]),
                                   jac1=lambda q: np.zeros((2, 2)),
                                   jac2=lambda q: np.array([[1.0, 0.0], [0.0, 0.0]]))
    sd = structure_functions(frame, (2.0, 3.0))
    assert sd.c1 == pytest.approx(1.0, abs=1e-14)
    assert sd.c2 == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("name", ["paper", "halfplane", "grushin"])
def test_reconstruction(name):
    frame = builtin_frame(name)
    rng = np.random.default_rng(2)
    for q in rng.uniform(0.5, 5, (100, 2)):
        sd = structure_functions(frame, q)
        recon = sd.c1 * frame.f1(q) + sd.c2 * frame.f2(q)
        assert np.linalg.norm(sd.bracket - recon) <= 1e-9 * max(1.0, np.linalg.norm(sd.bracket))


def test_structure_functions_degenerate():
    with pytest.raises(DegenerateFrameError) as err:
        structure_functions(paper_frame(), (0.0, 0.0))
    assert err.value.gram_det == 0.0


def test_gaussian_curvature_examples():
    assert abs(gaussian_curvature(paper_frame(), (1.0, 0.0))) <= 1e-6
    assert gaussian_curvature(builtin_frame("halfplane"), (0.0, 1.0)) == pytest.approx(-1.0, abs=1e-5)
    assert gaussian_curvature(builtin_frame("grushin"), (2.0, 0.0)) == pytest.approx(-0.5, abs=1e-5)


def test_symbolic_oracles_are_the_known_geometries():
    assert K_HALFPLANE(0.3, 2.0) == pytest.approx(-1.0)
    assert K_GRUSHIN(2.0, 0.0) == pytest.approx(-0.5)
    assert K_PAPER(0.4, -1.3) == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("name, oracle, tol", [
    ("paper", K_PAPER, 1e-6),
    ("halfplane", K_HALFPLANE, 1e-5),
    ("grushin", K_GRUSHIN, 1e-4),
])
def test_gaussian_curvature_against_metric_formula(name, oracle, tol):
    frame = builtin_frame(name)
    rng = np.random.default_rng(4)
    for q in rng.uniform(0.5, 5, (100, 2)):
        assert gaussian_curvature(frame, q) == pytest.approx(oracle(*q), abs=tol)


def test_paper_frame_involutive_and_flat():
    pf = paper_frame()
    rng = np.random.default_rng(5)
    for _ in range(300):
        r = math.exp(rng.uniform(math.log(0.1), math.log(10)))
        a = rng.uniform(0, 2 * math.pi)
        q = (r * math.cos(a), r * math.sin(a))
        assert np.linalg.norm(lie_bracket(pf, q)) <= 1e-7
        assert abs(gaussian_curvature(pf, q)) <= 1e-6


def test_gaussian_curvature_stencil_leaves_domain():
    gr = builtin_frame("grushin")
    h = fd_step((1.0, 0.0))
    # centre is admissible, the stencil point q1 - h lands on the degenerate line
    gr.check((h, 0.0))
    with pytest.raises(DegenerateFrameError):
        gaussian_curvature(gr, (h, 0.0))


@pytest.mark.parametrize("args, expected", [
    ((0.0, 0.0, -1.0, 0.0), 1.0),
    ((3.25, 1.1, 0.0, 0.0), 3.25),
    ((-2.0, math.pi / 2, 0.0, 0.0), -2.0),
])
def test_geodesic_curvature(args, expected):
    assert geodesic_curvature(*args) == expected
