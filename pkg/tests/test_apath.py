"""Path calculus: anchored paths, the transport splitting and its
inverses/concatenations, the coefficient-evolution solver, and the
flow-commutation identity."""

import math

import pytest

from fiberdirac import dual as dm
from fiberdirac.apath import (build_apath, concat_base, concat_split,
                              flow_commutation_residual, inverse_split,
                              reparameterized, solve_evolution, split_apath,
                              unsplit_apath)
from fiberdirac.fibration import BasePath
from fiberdirac.yangmills import HamiltonianFiber, so3_coadjoint_example

ANCHOR_TOL = 1e-9          # analytic-rate pipeline sits at transport noise
CONCAT_TOL = 1e-6

GRID = (0.0, 0.25, 0.3, 0.7, 0.75, 1.0)


@pytest.fixture(scope="module")
def geom():
    return so3_coadjoint_example()


@pytest.fixture(scope="module")
def apath(geom):
    bp = BasePath(lambda t: [0.4 * dm.sin(2 * math.pi * t) * t,
                             0.3 * (1 - dm.cos(2 * math.pi * t))],
                  name="loopish")
    cov = lambda t: [0.2 + 0.1 * t, -0.3 * t * t, 0.15 * dm.sin(3 * t)]
    return build_apath(geom, bp, [0.5, -0.2, 0.8], cov, name="ap")


@pytest.fixture(scope="module")
def second_apath(geom, apath):
    bp = BasePath(lambda t: [0.4 * dm.sin(2 * math.pi * t), 0.6 * t],
                  name="tail")
    cov = lambda t: [-0.1, 0.2 * t, 0.05]
    x1 = [dm.value_of(c) for c in apath.fiber_path(1.0)]
    return build_apath(geom, bp, x1, cov, name="ap-tail")


def max_diff(fn_a, fn_b, times=GRID):
    return max(max(abs(dm.value_of(a) - dm.value_of(b))
                   for a, b in zip(fn_a(t), fn_b(t)))
               for t in times)


def test_built_path_satisfies_the_anchor_condition(apath):
    assert apath.anchor_residual() < ANCHOR_TOL


def test_point_joins_base_and_fiber(apath):
    pt = apath.point(0.4)
    assert pt[:2] == pytest.approx(apath.base_path(0.4))
    assert pt[2:] == pytest.approx(
        [dm.value_of(c) for c in apath.fiber_path(0.4)])


def test_split_then_unsplit_round_trips(apath):
    sp = split_apath(apath)
    back = unsplit_apath(sp)
    assert max_diff(apath.fiber_path, back.fiber_path) < 1e-9
    assert max_diff(apath.covector_path, back.covector_path) < 1e-9
    assert back.anchor_residual(9) < ANCHOR_TOL


def test_split_base_point_is_stationary(apath):
    # the split curve lives in the fixed fiber over γ_B(0)
    sp = split_apath(apath)
    x_start = [dm.value_of(c) for c in apath.fiber_path(0.0)]
    assert sp.point(0.0) == pytest.approx(x_start)
    rate = sp.rate(0.5)
    assert len(rate) == 3        # analytic rate, fiber-dimensional


def test_unsplit_second_path_anchor(second_apath):
    sp = split_apath(second_apath)
    assert unsplit_apath(sp).anchor_residual(9) < ANCHOR_TOL


def test_inverse_split_matches_path_inverse(apath):
    u_inv = unsplit_apath(inverse_split(split_apath(apath)))
    ap_inv = apath.inverse()
    assert max_diff(ap_inv.fiber_path, u_inv.fiber_path,
                    (0.0, 0.25, 0.75, 1.0)) < 1e-9
    assert max_diff(ap_inv.covector_path, u_inv.covector_path,
                    (0.0, 0.25, 0.75, 1.0)) < 1e-9
    assert u_inv.anchor_residual(9) < ANCHOR_TOL


def test_concat_split_is_split_of_concatenation(geom, apath, second_apath):
    from fiberdirac._numerics import smoothstep
    cc = concat_split(split_apath(second_apath), split_apath(apath))
    ucc = unsplit_apath(cc)
    assert ucc.anchor_residual(9) < CONCAT_TOL

    base_cc = concat_base(apath.base_path, second_apath.base_path)
    assert max_diff(lambda t: ucc.base_path(t), lambda t: base_cc(t)) < 1e-12
    # halves traverse the original curves up to the smoothstep warp
    for t, ref in ((0.0, apath.fiber_path(0.0)),
                   (0.25, apath.fiber_path(smoothstep(0.5))),
                   (0.5, second_apath.fiber_path(0.0)),
                   (1.0, second_apath.fiber_path(1.0))):
        got = ucc.fiber_path(t)
        assert max(abs(dm.value_of(a) - dm.value_of(b))
                   for a, b in zip(got, ref)) < CONCAT_TOL


def test_reparameterized_path_keeps_anchor_and_endpoints(apath):
    rp = reparameterized(apath)
    assert rp.anchor_residual(9) < ANCHOR_TOL
    for t in (0.0, 1.0):
        assert max(abs(dm.value_of(a) - dm.value_of(b)) for a, b in
                   zip(rp.fiber_path(t), apath.fiber_path(t))) < 1e-12


def test_abelian_evolution_is_the_running_integral():
    alpha = lambda t, e: [dm.sin(t) * (1.0 + e), e * t]
    out = solve_evolution(alpha, eps=0.2, beta0=[0.1, 0.0], t1=1.0)
    beta = out["beta"][-1]
    # ∂_ε α = (sin t, t): integrals are 1 − cos 1 and ½
    assert beta[0] == pytest.approx(0.1 + 1.0 - math.cos(1.0), rel=1e-8)
    assert beta[1] == pytest.approx(0.5, rel=1e-8)


def test_evolution_with_linear_generator_stays_consistent():
    fib = HamiltonianFiber.coadjoint_so3()
    alpha = lambda t, e: [0.3 + e, -0.2 * t, 0.1]
    out = solve_evolution(alpha, eps=0.0,
                          generator=lambda u: fib.action_matrix(u),
                          t1=1.0, times=[0.0, 0.5, 1.0])
    assert len(out["beta"]) == 3
    assert out["beta"][0] == pytest.approx([0.0, 0.0, 0.0])
    assert any(abs(c) > 1e-3 for c in out["beta"][-1])


def test_unsupported_generator_class_is_refused():
    with pytest.raises(NotImplementedError):
        solve_evolution(lambda t, e: [t], eps=0.0, generator="matrix")


def test_flow_commutation_residual_and_halving_gain():
    fib = HamiltonianFiber.coadjoint_so3()
    alpha = lambda t, e: [(3 + e) * dm.sin(2 * math.pi * t),
                          2.5 * dm.cos(3 * math.pi * t) - e * t,
                          1.5 * dm.sin(5 * t + e)]
    r1 = flow_commutation_residual(fib, alpha, [0.6, 0.0, 0.8], eps=0.3,
                                   step=1e-3)
    assert r1 < 1e-6
    r2 = flow_commutation_residual(fib, alpha, [0.6, 0.0, 0.8], eps=0.3,
                                   step=5e-4)
    assert r2 < r1 / 8.0          # the discretization is at least cubic
