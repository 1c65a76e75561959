"""Pair-groupoid checks for coupling data.

Over a simply connected coordinate patch the arrow space is the pair
groupoid M × M, where every construction is finitely computable: a closed
two-form ω on M induces the multiplicative form Ω = t*ω − s*ω on arrows,
and the checks here verify multiplicativity, presymplectic nondegeneracy
at units, and — for the coupling form ω_H ⊕ π_V⁻¹ of a geometric triple —
the integrated-data formulas: fiber nondegeneracy of Ω over the base pair
groupoid, the horizontal-lift identity, and source–target orthogonality
of the invariant lifts.

Conventions (recorded in reports): arrows are concatenated coordinate
blocks (y ‖ x) with t(y, x) = y and s(y, x) = x; the left-invariant lift
of a vertical covector η is the block field (0, ♯η) and the right-
invariant lift is (♯ξ, 0).
"""

from __future__ import annotations

from . import dual as dm
from . import fields
from ._numerics import (intersection_dimension, nullspace, sample_unit_cube)

MULT_TOL = 1e-12
CLOSED_TOL = 1e-10
ORTHO_TOL = 1e-10
IDENTITY_TOL = 1e-8


def _dot(a, b):
    acc = 0.0
    for x, y in zip(a, b):
        acc = acc + x * y
    return acc


def _matvec(m, v):
    return [_dot(row, v) for row in m]


def _form_value(mat, u, v):
    return _dot(u, _matvec(mat, v))


def _inv_small(mat):
    """Inverse of a 1–3 dimensional matrix by cofactors; the entries stay
    dual-compatible, which lets exterior derivatives pass through."""
    n = len(mat)
    if n == 1:
        return [[1.0 / mat[0][0]]]
    if n == 2:
        a, b = mat[0]
        c, d = mat[1]
        det = a * d - b * c
        return [[d / det, -b / det], [-c / det, a / det]]
    if n == 3:
        m = mat
        cof = [[m[(i + 1) % 3][(j + 1) % 3] * m[(i + 2) % 3][(j + 2) % 3]
                - m[(i + 1) % 3][(j + 2) % 3] * m[(i + 2) % 3][(j + 1) % 3]
                for j in range(3)] for i in range(3)]
        det = sum(m[0][j] * cof[0][j] for j in range(3))
        return [[cof[j][i] / det for j in range(3)] for i in range(3)]
    raise ValueError("cofactor inverse implemented for dims 1-3")


# -- the pair groupoid ----------------------------------------------------------------

class PairGroupoid:
    """The pair groupoid of a coordinate patch: arrows are concatenated
    blocks (y ‖ x), composition concatenates matching middles."""

    def __init__(self, dim, name=""):
        self.dim = dim
        self.name = name or f"pair-groupoid({dim})"

    def source(self, arrow):
        return list(arrow[self.dim:])

    def target(self, arrow):
        return list(arrow[:self.dim])

    def unit(self, x):
        return list(x) + list(x)

    def inverse(self, arrow):
        return list(arrow[self.dim:]) + list(arrow[:self.dim])

    def multiply(self, second, first, tol=1e-12):
        """m(second, first) for second = (z, y), first = (y, x)."""
        mid_a = second[self.dim:]
        mid_b = first[:self.dim]
        gap = max(abs(a - b) for a, b in zip(mid_a, mid_b))
        if gap > tol:
            raise ValueError(f"arrows are not composable (middle points "
                             f"differ by {gap:.3e})")
        return list(second[:self.dim]) + list(first[self.dim:])

    def axioms_residual(self, count=8, seed=0, box=1.5):
        """Max defect of the groupoid axioms over sampled triples — the
        structure maps are coordinate projections, so this is exactly 0."""
        pts = [[box * (2.0 * c - 1.0) for c in row]
               for row in sample_unit_cube(4 * count, self.dim, seed=seed)]
        worst = 0.0
        for k in range(count):
            w, z, y, x = pts[4 * k:4 * k + 4]
            g, h, f = z + y, y + x, w + z
            gh = self.multiply(g, h)
            worst = max(worst, max(abs(a - b) for a, b in
                                   zip(self.source(gh), self.source(h))))
            worst = max(worst, max(abs(a - b) for a, b in
                                   zip(self.target(gh), self.target(g))))
            assoc_l = self.multiply(self.multiply(f, g), h)
            assoc_r = self.multiply(f, self.multiply(g, h))
            worst = max(worst, max(abs(a - b) for a, b in
                                   zip(assoc_l, assoc_r)))
            worst = max(worst, max(abs(a - b) for a, b in
                                   zip(self.multiply(h, self.unit(x)), h)))
            worst = max(worst, max(abs(a - b) for a, b in
                                   zip(self.multiply(self.unit(y), h), h)))
            inv = self.multiply(h, self.inverse(h))
            worst = max(worst, max(abs(a - b) for a, b in
                                   zip(inv, self.unit(y))))
        return worst


# -- multiplicative two-forms ---------------------------------------------------------

class PairForm:
    """Ω = t*ω − s*ω on the pair groupoid: block form ω(y) ⊖ ω(x)."""

    def __init__(self, base_form, name=""):
        self.base_form = base_form
        self.dim = base_form.dim
        self.name = name or f"pair({base_form.name})"

    def base_matrix(self, point):
        return fields.antisym_matrix(self.base_form, point)

    def matrix(self, arrow):
        d = self.dim
        my = self.base_matrix(arrow[:d])
        mx = self.base_matrix(arrow[d:])
        out = [[0.0] * (2 * d) for _ in range(2 * d)]
        for i in range(d):
            for j in range(d):
                out[i][j] = my[i][j]
                out[d + i][d + j] = -mx[i][j]
        return out

    def value(self, arrow, u, v):
        d = self.dim
        my = self.base_matrix(arrow[:d])
        mx = self.base_matrix(arrow[d:])
        return (_form_value(my, u[:d], v[:d])
                - _form_value(mx, u[d:], v[d:]))


def pair_form(omega, n_check=6, seed=0, box=1.5, closed_tol=CLOSED_TOL):
    """Build Ω = t*ω − s*ω from a closed two-form on the patch; the
    closedness precondition is verified on sampled points."""
    if omega.degree != 2:
        raise ValueError("pair_form needs a degree-2 form")
    d_omega = fields.exterior_derivative(omega)
    worst = 0.0
    for row in sample_unit_cube(n_check, omega.dim, seed=seed):
        pt = [box * (2.0 * c - 1.0) for c in row]
        vals = d_omega(pt)
        worst = max(worst, max((abs(dm.value_of(v)) for v in vals),
                               default=0.0))
    if worst >= closed_tol:
        raise ValueError(f"the base form is not closed (|dω| = {worst:.3e} "
                         f"on samples, tolerance {closed_tol:.0e})")
    return PairForm(omega)


def multiplicativity_residual(arrow_form, dim, n_samples=12, seed=0,
                              box=1.5):
    """max |m*Ω − pr₁*Ω − pr₂*Ω| over sampled composable pairs of arrows
    and composable tangent pairs.

    `arrow_form(arrow, u, v)` evaluates the candidate form; a composable
    tangent pair at ((z,y),(y,x)) shares its middle block, and dm maps it
    to the outer blocks.
    """
    rows = sample_unit_cube(7 * n_samples, dim, seed=seed)
    pts = [[box * (2.0 * c - 1.0) for c in row] for row in rows]
    worst = 0.0
    for k in range(n_samples):
        z, y, x, dz, dy, dx, extra = pts[7 * k:7 * k + 7]
        second, first, composed = z + y, y + x, z + x
        # two composable tangent pairs (shared middle components)
        u2, u1, u12 = dz + dy, dy + dx, dz + dx
        v2, v1, v12 = extra + dx, dx + dz, extra + dz
        lhs = arrow_form(composed, u12, v12)
        rhs = (arrow_form(second, u2, v2)
               + arrow_form(first, u1, v1))
        worst = max(worst, abs(dm.value_of(lhs) - dm.value_of(rhs)))
    return worst


def presymplectic_nondegeneracy(omega, n_samples=8, seed=0, box=1.5,
                                threshold=1e-8):
    """Kernel report for Ω = t*ω − s*ω at sampled units.

    On the pair groupoid ker ds ∩ ker dt is already {0}, so the triple
    kernel ker Ω ∩ ker ds ∩ ker dt is reported alongside the meaningful
    desk-scale quantity: the kernel of ω on the base patch, whose
    dimension is what jumps when the form degenerates.  Verdict is PASS
    iff the base kernel is trivial at every sample.
    """
    d = omega.dim
    form = PairForm(omega)
    triple_dim = 0
    base_dim = 0
    for row in sample_unit_cube(n_samples, d, seed=seed):
        x = [box * (2.0 * c - 1.0) for c in row]
        unit = x + x
        stacked = [list(r) for r in form.matrix(unit)]
        for i in range(d):         # rows of ds: kill the x-block
            stacked.append([0.0] * d + [1.0 if j == i else 0.0
                                        for j in range(d)])
        for i in range(d):         # rows of dt: kill the y-block
            stacked.append([1.0 if j == i else 0.0
                            for j in range(d)] + [0.0] * d)
        triple_dim = max(triple_dim, len(nullspace(stacked, threshold)))
        base_dim = max(base_dim,
                       len(nullspace(form.base_matrix(x), threshold)))
    return {
        "triple_kernel_dim": triple_dim,
        "base_kernel_dim": base_dim,
        "verdict": "PASS" if base_dim == 0 else "FAIL",
    }


# -- the coupling form and integrated data --------------------------------------------

def coupling_form(geom):
    """The coupling two-form ω_H ⊕ π_V⁻¹ on the total space: ω_H on
    horizontal subspaces (the graph of the connection), the inverse
    vertical structure on fibers, zero mixed pairing.  Requires π_V
    invertible on the fiber."""
    space = geom.space
    nb, nf, dim = space.n_base, space.n_fiber, space.dim

    def matrix(pt):
        w = geom.omega_matrix(pt)
        a = geom.conn_matrix(pt)
        q = _inv_small(geom.pi_matrix(pt))
        qa = [[_dot(qr, [a[i][b] for i in range(nf)]) for b in range(nb)]
              for qr in q]
        atqa = [[_dot([a[i][r] for i in range(nf)],
                      [qa[i][c] for i in range(nf)])
                 for c in range(nb)] for r in range(nb)]
        out = [[0.0] * dim for _ in range(dim)]
        for r in range(nb):
            for c in range(nb):
                out[r][c] = w[r][c] + atqa[r][c]
        for r in range(nf):
            for c in range(nf):
                out[nb + r][nb + c] = q[r][c]
        for r in range(nb):
            for c in range(nf):
                val = -_dot([a[i][r] for i in range(nf)],
                            [q[i][c] for i in range(nf)])
                out[r][nb + c] = val
                out[nb + c][r] = -val
        return out

    def comps(pt):
        m = matrix(pt)
        return [m[i][j] for i, j in fields.combos(dim, 2)]

    return fields.two_form(dim, comps, name=f"coupling({geom.name})")


def _small_det(mat):
    vals = [[dm.value_of(c) for c in row] for row in mat]
    n = len(vals)
    if n == 1:
        return vals[0][0]
    if n == 2:
        return vals[0][0] * vals[1][1] - vals[0][1] * vals[1][0]
    if n == 3:
        return (vals[0][0] * (vals[1][1] * vals[2][2]
                              - vals[1][2] * vals[2][1])
                - vals[0][1] * (vals[1][0] * vals[2][2]
                                - vals[1][2] * vals[2][0])
                + vals[0][2] * (vals[1][0] * vals[2][1]
                                - vals[1][1] * vals[2][0]))
    raise ValueError("determinant implemented for dims 1-3")


def _check_pi_invertible(geom, points):
    for pt in points:
        mat = geom.pi_matrix(pt)
        if len(mat) == 0 or abs(_small_det(mat)) < 1e-10:
            raise ValueError(
                "the vertical structure is not invertible at a sampled "
                "point; the coupling form needs invertible π_V")


def left_lift(geom, eta_fn):
    """Left-invariant lift of a vertical covector field: (0, ♯η) in the
    (y ‖ x) block convention, acting on the source side."""
    space = geom.space

    def field(arrow):
        x = arrow[space.dim:]
        sharp = geom.pi_v.sharp(x, eta_fn(x))
        return [0.0] * space.dim + [0.0] * space.n_base + sharp

    return field


def right_lift(geom, xi_fn):
    """Right-invariant lift: (♯ξ, 0), acting on the target side."""
    space = geom.space

    def field(arrow):
        y = arrow[:space.dim]
        sharp = geom.pi_v.sharp(y, xi_fn(y))
        return [0.0] * space.n_base + sharp + [0.0] * space.dim

    return field


def source_target_orthogonality(geom, form, n_samples=8, seed=0):
    """Ω(left lift, right lift) at sampled arrows — the invariant lifts
    land in complementary blocks, so this vanishes."""
    pts = geom.sample_points(2 * n_samples, seed=seed)
    eta = lambda x: [0.3 + 0.1 * x[0], -0.4, 0.2][:geom.space.n_fiber]
    xi = lambda y: [0.1, 0.5 - 0.2 * y[0], -0.3][:geom.space.n_fiber]
    lf = left_lift(geom, eta)
    rf = right_lift(geom, xi)
    worst = 0.0
    for k in range(n_samples):
        arrow = list(pts[2 * k]) + list(pts[2 * k + 1])
        worst = max(worst, abs(dm.value_of(
            form.value(arrow, lf(arrow), rf(arrow)))))
    return worst


def integrated_data_check(geom, count=6, seed=0):
    """Desk-scale verification of the integrated geometric data for the
    coupling form Ω = pair(ω_H ⊕ π_V⁻¹):

    (a) fiber nondegeneracy over the base pair groupoid — the graph of Ω
        meets Ver_G ⊕ Ver_G⁰ trivially at sampled arrows;
    (b) the horizontal-form identity Ω(HOR(v₁,w₁), HOR(v₂,w₂)) =
        ω_H(h v₁, h v₂)∘t − ω_H(h w₁, h w₂)∘s on coordinate lifts;
    (c) HOR(v, w) projects to (v, w) and is Ω-orthogonal to Ver_G,

    with HOR(v, w) = (h(v) at y, h(w) at x) in the block convention.
    """
    space = geom.space
    nb, nf, dim = space.n_base, space.n_fiber, space.dim
    pts = geom.sample_points(2 * count, seed=seed)
    _check_pi_invertible(geom, pts)
    form = PairForm(coupling_form(geom))

    vecs = sample_unit_cube(4 * count, nb, seed=seed + 1)
    worst_b = 0.0
    worst_proj = 0.0
    worst_orth = 0.0
    max_intersection = 0

    for k in range(count):
        y, x = list(pts[2 * k]), list(pts[2 * k + 1])
        arrow = y + x
        mat = form.matrix(arrow)

        # (a) graph(Ω) against Ver_G ⊕ Ver_G⁰ inside T ⊕ T*
        two_d = 2 * dim
        graph_rows = []
        for i in range(two_d):
            flat = list(mat[i])
            vec = [1.0 if j == i else 0.0 for j in range(two_d)]
            graph_rows.append(vec + flat)
        w_rows = []
        for blk in (0, 1):
            for i in range(nf):
                v = [0.0] * two_d
                v[blk * dim + nb + i] = 1.0
                w_rows.append(v + [0.0] * two_d)
            for i in range(nb):
                a = [0.0] * two_d
                a[blk * dim + i] = 1.0
                w_rows.append([0.0] * two_d + a)
        max_intersection = max(
            max_intersection, intersection_dimension(graph_rows, w_rows))

        # (b) and (c) on coordinate-sampled base vectors
        v1, w1, v2, w2 = ([2.0 * c - 1.0 for c in vecs[4 * k + m]]
                          for m in range(4))
        a_y = geom.conn_matrix(y)
        a_x = geom.conn_matrix(x)

        def hor(v, w):
            return (list(v) + _matvec(a_y, v)
                    + list(w) + _matvec(a_x, w))

        h1 = hor(v1, w1)
        h2 = hor(v2, w2)
        lhs = _form_value(mat, h1, h2)
        rhs = (geom.omega_h.value(y, [v1, v2])
               - geom.omega_h.value(x, [w1, w2]))
        worst_b = max(worst_b, abs(dm.value_of(lhs) - dm.value_of(rhs)))

        proj = h1[:nb] + h1[dim:dim + nb]
        wanted = list(v1) + list(w1)
        worst_proj = max(worst_proj, max(abs(a - b)
                                         for a, b in zip(proj, wanted)))
        for blk in (0, 1):
            for i in range(nf):
                ver = [0.0] * two_d
                ver[blk * dim + nb + i] = 1.0
                worst_orth = max(worst_orth,
                                 abs(dm.value_of(_form_value(mat, h1, ver))))

    ok = (max_intersection == 0 and worst_b < IDENTITY_TOL
          and worst_proj < 1e-10 and worst_orth < ORTHO_TOL)
    return {
        "fiber_nondegeneracy_dim": max_intersection,
        "horizontal_identity": worst_b,
        "hor_projection": worst_proj,
        "hor_vertical_orthogonality": worst_orth,
        "verdict": "PASS" if ok else "FAIL",
    }
