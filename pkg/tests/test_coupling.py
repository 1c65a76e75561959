"""The coupling layer: pointwise frames (isotropy, nondegeneracy,
extraction), the four structural conditions against the direct closure
oracle, leaf forms, and the splitting brackets."""

import math

import numpy as np
import pytest

from fiberdirac import dual as dm
from fiberdirac.charts import CoordinateDomain
from fiberdirac.coupling import (GeometricData, assemble_dirac,
                                 check_coupling_conditions,
                                 dirac_closure_residual,
                                 extract_geometric_data, fiber_nondegeneracy,
                                 leaf_two_form, splitting_bracket_residual)
from fiberdirac.fibration import (Connection, FiberedSpace, FlatConnection,
                                  HorizontalForm, VerticalBivector)
from fiberdirac.monodromy import lattice_model_data
from fiberdirac.yangmills import (hopf_example, hopf_flat_example,
                                  so3_coadjoint_example,
                                  trivial_torus_example)

CONDITION_TOL = 1e-8
ORACLE_TOL = 1e-6


# -- instance factory ---------------------------------------------------------------
# Each entry: (name, builder, should_couple).  The broken ones each violate
# exactly one structural condition; both verification routes must agree on
# every instance.

def constant_split():
    base = CoordinateDomain.box([(-1.0, 1.0)] * 2, name="plane")
    fiber = CoordinateDomain.box([(-1.0, 1.0)] * 2, name="fiber")
    space = FiberedSpace(base, fiber)
    return GeometricData(
        space, FlatConnection(space),
        VerticalBivector(space, lambda p: [2.0], name="const-pi"),
        HorizontalForm(space, 2, lambda p: [1.5], name="const-omega"),
        name="constant-split")


def fiber_scaled_plane(broken=False):
    base = CoordinateDomain.box([(-1.0, 1.0)] * 3, name="b3")
    fiber = CoordinateDomain.box([(-1.0, 1.0)], name="line")
    space = FiberedSpace(base, fiber)
    if broken:
        comps = lambda p: [p[2], 0.0, 0.0]   # g = b₃ ⇒ dω ≠ 0
    else:
        comps = lambda p: [1.0 + 0.5 * p[3] * p[3], 0.0, 0.0]
    return GeometricData(
        space, FlatConnection(space),
        VerticalBivector(space, lambda p: [], name="zero"),
        HorizontalForm(space, 2, comps, name="g-area"),
        name="broken-closure" if broken else "fiber-scaled-plane")


def so3_fiber_transport(stretch=False):
    base = CoordinateDomain.box([(-1.0, 1.0)], name="interval")
    fiber = CoordinateDomain.box([(-2.0, 2.0)] * 3, name="so3-dual")
    space = FiberedSpace(base, fiber)
    if stretch:
        coeff = lambda b, x: [[0.5 * x[0]], [0.5 * x[1]], [0.5 * x[2]]]
    else:
        coeff = lambda b, x: [[-x[1]], [x[0]], [0.0]]   # rotation about e₃
    return GeometricData(
        space, Connection(space, coeff, name="fiber-transport"),
        VerticalBivector(space, lambda p: [-p[3], p[2], -p[1]],
                         name="so3-linear"),
        HorizontalForm(space, 2, lambda p: [], name="zero"),
        name="broken-transport" if stretch else "so3-rotation-transport")


def non_poisson_vertical():
    base = CoordinateDomain.box([(-1.0, 1.0)], name="interval")
    fiber = CoordinateDomain.box([(-2.0, 2.0)] * 3, name="threespace")
    space = FiberedSpace(base, fiber)
    return GeometricData(
        space, FlatConnection(space),
        VerticalBivector(space, lambda p: [p[3], 0.0, p[2]],
                         name="non-jacobi"),
        HorizontalForm(space, 2, lambda p: [], name="zero"),
        name="broken-vertical")


def curvature_mismatch():
    base = CoordinateDomain.box([(-1.0, 1.0)] * 2, name="plane")
    fiber = CoordinateDomain.box([(-3.0, 3.0)], name="line")
    space = FiberedSpace(base, fiber)
    return GeometricData(
        space, Connection(space, lambda b, x: [[b[1], 0.0]], name="shear"),
        VerticalBivector(space, lambda p: [], name="zero"),
        HorizontalForm(space, 2, lambda p: [1.0], name="unit-area"),
        name="broken-curvature")


INSTANCES = [
    ("hopf-poly", lambda: hopf_example(lambda x: 2.0 * x + 1.0), True),
    ("hopf-const", lambda: hopf_example(lambda x: 1.5), True),
    ("hopf-flat", lambda: hopf_flat_example(lambda x: 2.0 * x + 1.0), True),
    ("so3-coadjoint", so3_coadjoint_example, True),
    ("trivial-torus", trivial_torus_example, True),
    ("constant-split", constant_split, True),
    ("fiber-scaled-plane", fiber_scaled_plane, True),
    ("so3-rotation-transport", so3_fiber_transport, True),
    ("lattice-model", lambda: lattice_model_data(lambda r: 2.0 * r + 1.0),
     True),
    ("broken-vertical", non_poisson_vertical, False),
    ("broken-transport", lambda: so3_fiber_transport(stretch=True), False),
    ("broken-closure", lambda: fiber_scaled_plane(broken=True), False),
    ("broken-curvature", curvature_mismatch, False),
]


@pytest.fixture(scope="module")
def hopf():
    return hopf_example(lambda x: 2.0 * x + 1.0)


def test_frames_are_isotropic(hopf):
    for pt in hopf.sample_points(12, seed=2):
        frame = assemble_dirac(hopf, pt)
        assert frame.isotropy_residual() < 1e-12


def test_frames_are_isotropic_nonabelian():
    geom = so3_coadjoint_example()
    for pt in geom.sample_points(8, seed=5):
        assert assemble_dirac(geom, pt).isotropy_residual() < 1e-12


def test_nondegeneracy_routes_agree(hopf):
    for pt in hopf.sample_points(8, seed=1):
        report = fiber_nondegeneracy(assemble_dirac(hopf, pt))
        assert report["ok"]
        assert report["intersection_dim"] == 0
        assert report["min_singular"] > 1e-8


def test_extraction_round_trip():
    geom = so3_coadjoint_example()
    for pt in geom.sample_points(6, seed=3):
        frame = assemble_dirac(geom, pt)
        out = extract_geometric_data(frame)
        assert out["consistency"] < 1e-10
        assert out["omega_asymmetry"] < 1e-10
        assert out["pi_asymmetry"] < 1e-10
        np.testing.assert_allclose(out["connection"],
                                   geom.conn_matrix(pt), atol=1e-10)
        np.testing.assert_allclose(out["pi"], geom.pi_matrix(pt),
                                   atol=1e-10)
        np.testing.assert_allclose(out["omega"], geom.omega_matrix(pt),
                                   atol=1e-10)


@pytest.mark.parametrize("name,builder,expect",
                         [(n, b, e) for n, b, e in INSTANCES],
                         ids=[n for n, _, _ in INSTANCES])
def test_conditions_and_oracle_agree(name, builder, expect):
    geom = builder()
    cond = check_coupling_conditions(geom, count=48, seed=0)
    closure = dirac_closure_residual(geom, count=10, seed=0)
    assert bool(cond["max"] < ORACLE_TOL) is expect, cond
    assert bool(closure < ORACLE_TOL) is expect, closure


def test_broken_instances_fail_the_named_condition():
    cond = check_coupling_conditions(non_poisson_vertical(), count=24)
    assert cond["vertical_poisson"] > 1e-2
    cond = check_coupling_conditions(so3_fiber_transport(stretch=True),
                                     count=24)
    assert cond["transport_invariance"] > 1e-2
    cond = check_coupling_conditions(fiber_scaled_plane(broken=True),
                                     count=24)
    assert cond["covariant_closure"] > 1e-2
    cond = check_coupling_conditions(curvature_mismatch(), count=24)
    assert cond["curvature_match"] > 1e-2


def test_leaf_two_form_is_scaled_round_form(hopf):
    for pt in hopf.sample_points(10, seed=4):
        vecs, leaf = leaf_two_form(assemble_dirac(hopf, pt))
        u, v, x = pt
        s = 1.0 + u * u + v * v
        expected = (2.0 * x + 1.0) * 4.0 / (s * s)
        n = len(leaf)
        for r in range(n):
            for c in range(n):
                want = expected if (r, c) == (0, 1) else (
                    -expected if (r, c) == (1, 0) else 0.0)
                assert abs(dm.value_of(leaf[r][c]) - want) < CONDITION_TOL


def test_leaf_vectors_span_the_lift(hopf):
    pt = [0.3, -0.4, 0.5]
    frame = assemble_dirac(hopf, pt)
    vecs, _ = leaf_two_form(frame)
    a = hopf.conn_matrix(pt)
    for row, e in zip(vecs[:2], ([1.0, 0.0], [0.0, 1.0])):
        lift = list(e) + [sum(a[k][j] * e[j] for j in range(2))
                          for k in range(1)]
        assert max(abs(dm.value_of(x) - y)
                   for x, y in zip(row, lift)) < 1e-12


def test_splitting_brackets_vanish_on_couplings():
    assert splitting_bracket_residual(
        so3_coadjoint_example(), count=6)["max"] < 1e-6
    assert splitting_bracket_residual(
        hopf_flat_example(lambda x: 2.0 * x + 1.0), count=6)["max"] < 1e-6


def test_splitting_brackets_with_chosen_sections():
    geom = so3_coadjoint_example()
    out = splitting_bracket_residual(
        geom, count=4,
        alpha_fn=lambda x: [0.3 * x[0], -0.1, 0.2 * x[2]],
        beta_fn=lambda x: [x[1], 0.4 * x[0], -0.2],
        v=[1.0, -0.5], w=[0.3, 0.8])
    assert out["max"] < 1e-6
    assert set(out) >= {"vertical_vertical", "horizontal_vertical",
                        "horizontal_horizontal", "max"}


def test_condition_report_shape(hopf):
    cond = check_coupling_conditions(hopf, count=8)
    assert set(cond) == {"vertical_poisson", "transport_invariance",
                         "covariant_closure", "curvature_match", "max"}
    assert cond["max"] == max(v for k, v in cond.items() if k != "max")
