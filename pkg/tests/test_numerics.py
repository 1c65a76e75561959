"""Numerical kernels: integrator order, quadrature exactness, sampling
determinism, subspace helpers, and the worker pool."""

import math
import os
import subprocess
import sys

import pytest

from fiberdirac._numerics import (DEFAULT_RK4_STEP, intersection_dimension,
                                  lstsq_residual, nullspace,
                                  orthonormal_basis, parallel_map,
                                  principal_angles, rk4_integrate,
                                  sample_unit_cube, simpson_integrate,
                                  simpson_weights, smoothstep)


def test_rk4_matches_exponential():
    y = rk4_integrate(lambda t, y: [y[0]], [1.0], 0.0, 1.0, step=1e-3)
    assert y[0] == pytest.approx(math.e, rel=1e-12)


def test_rk4_is_fourth_order():
    def err(step):
        y = rk4_integrate(lambda t, y: [math.cos(t) * y[0]], [1.0],
                          0.0, 1.5, step=step)
        return abs(y[0] - math.exp(math.sin(1.5)))

    ratio = err(0.02) / err(0.01)
    assert 12.0 < ratio < 20.0        # 2⁴ = 16 up to higher-order terms


def test_rk4_integrates_backward():
    y = rk4_integrate(lambda t, y: [y[0]], [math.e], 1.0, 0.0, step=1e-3)
    assert y[0] == pytest.approx(1.0, rel=1e-10)


def test_simpson_weights_and_cubic_exactness():
    w = simpson_weights(5)
    assert sum(w) == pytest.approx(1.0, rel=1e-14)
    nodes = [k / 4 for k in range(5)]
    samples = [t ** 3 - 2 * t + 0.5 for t in nodes]
    assert simpson_integrate(samples) == pytest.approx(0.25 - 1.0 + 0.5,
                                                       rel=1e-14)
    with pytest.raises(ValueError):
        simpson_weights(4)            # even node counts have no rule


def test_smoothstep_endpoint_derivatives():
    assert smoothstep(0.0) == 0.0 and smoothstep(1.0) == 1.0
    h = 1e-6
    assert abs(smoothstep(h) / h) < 1e-4          # s′(0) = 0
    assert abs((1.0 - smoothstep(1.0 - h)) / h) < 1e-4


def test_sample_unit_cube_determinism_and_range():
    a = sample_unit_cube(32, 3, seed=7)
    b = sample_unit_cube(32, 3, seed=7)
    assert a == b
    assert a != sample_unit_cube(32, 3, seed=8)
    assert all(0.0 <= c < 1.0 for row in a for c in row)


def test_orthonormal_basis_and_angles():
    basis = orthonormal_basis([[1.0, 0.0, 0.0], [1.0, 1.0, 0.0]])
    assert len(basis) == 2
    angles = principal_angles([[1.0, 0.0, 0.0]], [[0.0, 1.0, 0.0]])
    assert angles[0] == pytest.approx(math.pi / 2, rel=1e-12)


def test_intersection_dimension():
    xy = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]
    yz = [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
    assert intersection_dimension(xy, yz) == 1
    assert intersection_dimension(xy, [[0.0, 0.0, 1.0]]) == 0


def test_nullspace_of_singular_matrix():
    rows = [[1.0, 2.0], [2.0, 4.0]]
    null = nullspace(rows)
    assert len(null) == 1
    v = null[0]
    assert abs(v[0] + 2.0 * v[1]) < 1e-12


def test_lstsq_residual_detects_membership():
    basis = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]
    assert lstsq_residual(basis, [0.3, -0.7, 0.0]) < 1e-14
    assert lstsq_residual(basis, [0.0, 0.0, 1.0]) == pytest.approx(1.0)


def test_parallel_map_preserves_order():
    items = list(range(40))
    assert parallel_map(lambda k: k * k, items) == [k * k for k in items]


def test_worker_threads_env_is_honored():
    code = ("import os; os.environ['WORKER_THREADS'] = '3'; "
            "from fiberdirac._numerics import worker_count; "
            "print(worker_count())")
    out = subprocess.run([sys.executable, "-c", code], capture_output=True,
                         text=True, check=True,
                         env={**os.environ, "WORKER_THREADS": "3"})
    assert out.stdout.strip() == "3"
