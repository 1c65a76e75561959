"""Fibered spaces with Ehresmann connections: lifts, parallel transport,
curvature, and covariant differentials of horizontal forms.

A fibered space is presented per patch as a product E = B × F with the
projection onto the first factor; points are concatenated coordinate lists
(b, x).  A connection is its local coefficient A(b, x): T_b B → T_x F,
linear in the base vector; the horizontal lift is h(v) = (v, A(b,x)v).

Parallel transport integrates dx/dt = A(γ(t), x)·γ̇(t) with fixed-step RK4.
Because the integrator runs on generic scalars, transporting dual-seeded
initial conditions yields exact differentials of the transport maps.
"""

from __future__ import annotations

import itertools

from . import dual as dm
from .dual import Dual
from ._numerics import DEFAULT_RK4_STEP, rk4_integrate


class IncompleteTransportError(RuntimeError):
    """Raised when transport escapes the fiber chart before finishing."""

    def __init__(self, t_escape, point=None):
        self.t_escape = t_escape
        self.point = point
        super().__init__(f"incomplete transport: escaped the fiber chart at "
                         f"t = {t_escape:.6f}")


class FiberedSpace:
    """A product patch E = B × F with first-factor projection."""

    def __init__(self, base, fiber, name=""):
        self.base = base
        self.fiber = fiber
        self.n_base = base.dim
        self.n_fiber = fiber.dim
        self.dim = base.dim + fiber.dim
        self.name = name or f"{base.name}x{fiber.name}"

    def split(self, point):
        return list(point[:self.n_base]), list(point[self.n_base:])

    def join(self, b, x):
        return list(b) + list(x)

    def base_pairs(self):
        return list(itertools.combinations(range(self.n_base), 2))

    def sample(self, count=256, seed=0):
        """Joint low-discrepancy samples of the total space (b, x)."""
        from ._numerics import sample_unit_cube
        cube = sample_unit_cube(count, self.dim, seed=seed)
        out = []
        for row in cube:
            b = self.base.from_unit(row[:self.n_base])
            x = self.fiber.from_unit(row[self.n_base:])
            out.append(self.join(b, x))
        return out

    def __repr__(self):
        return f"FiberedSpace({self.name!r}, base={self.n_base}, fiber={self.n_fiber})"


class BasePath:
    """A smooth path [0,1] → B given by an evaluator; velocity via duals."""

    def __init__(self, fn, name=""):
        self.fn = fn
        self.name = name

    def __call__(self, t):
        return self.fn(t)

    def velocity(self, t):
        out = self.fn(Dual(t, 1.0))
        return [c.eps if isinstance(c, Dual) else 0.0 for c in out]

    def reversed(self):
        return BasePath(lambda t: self.fn(1.0 - t), name=f"{self.name}~")


class Connection:
    """Connection on E = B × F with coefficient A(b, x) (n_F × n_B)."""

    is_flat = False

    def __init__(self, space, coefficient, name=""):
        self.space = space
        self.coefficient = coefficient
        self.name = name or "connection"

    def coeff(self, b, x):
        return self.coefficient(b, x)

    def lift(self, v, point):
        """Horizontal lift h(v) = (v, A(b,x)v) as a full tangent vector."""
        b, x = self.space.split(point)
        a = self.coeff(b, x)
        fib = [_dot(row, v) for row in a]
        return list(v) + fib

    def lift_field(self, v_fn, name=""):
        """h(v) as a vector field on E for a base vector field v(b)."""
        from .fields import vector_field
        nb = self.space.n_base

        def comps(pt):
            b, x = self.space.split(pt)
            v = v_fn(b)
            a = self.coeff(b, x)
            return list(v) + [_dot(row, v) for row in a]

        return vector_field(self.space.dim, comps, name=name or "h(v)")


class FlatConnection(Connection):
    """The trivialized flat connection: zero coefficient."""

    is_flat = True

    def __init__(self, space):
        def zero(b, x):
            return [[0.0] * space.n_base for _ in range(space.n_fiber)]
        super().__init__(space, zero, name="flat")


def _dot(a, b):
    acc = 0.0
    for x, y in zip(a, b):
        acc = acc + x * y
    return acc


def horizontal_lift(connection, v, point):
    return connection.lift(v, point)


def directional_on_total(connection, v, fn, point):
    """Derivative of fn (scalar or list valued on E) along h(v) at point."""
    hv = connection.lift(v, point)
    seeded = [Dual(p, d) for p, d in zip(point, hv)]
    out = fn(seeded)
    if isinstance(out, (list, tuple)):
        return [c.eps if isinstance(c, Dual) else 0.0 for c in out]
    return out.eps if isinstance(out, Dual) else 0.0


# -- parallel transport -------------------------------------------------------

def parallel_transport(connection, path, x0, t0=0.0, t1=1.0,
                       step=DEFAULT_RK4_STEP):
    """Transport the fiber point x0 along the base path from t0 to t1.

    Raises :class:`IncompleteTransportError` (naming the escape time) when
    the state leaves the fiber chart or turns non-finite.  The state may be
    dual-seeded, in which case the result carries the transport differential.
    """
    space = connection.space
    if connection.is_flat:
        return list(x0)

    def rhs(t, x):
        b = path(t)
        vel = path.velocity(t)
        a = connection.coeff(b, x)
        return [_dot(row, vel) for row in a]

    def guard(t, x):
        if not space.fiber.contains(x):
            raise IncompleteTransportError(t, point=[dm.value_of(c) for c in x])

    return rk4_integrate(rhs, list(x0), t0, t1, step=step, observer=guard)


def transport_samples(connection, path, x0, times, step=DEFAULT_RK4_STEP):
    """States of the transport at the given increasing times (t₀ first)."""
    out = [list(x0)]
    x = list(x0)
    for ta, tb in zip(times[:-1], times[1:]):
        x = parallel_transport(connection, path, x, t0=ta, t1=tb, step=step)
        out.append(list(x))
    return out


def holonomy(connection, loop, x0, step=DEFAULT_RK4_STEP):
    """Transport around a loop (a path with matching endpoints)."""
    return parallel_transport(connection, loop, x0, 0.0, 1.0, step=step)


# -- curvature ------------------------------------------------------------------

def curvature(connection, point, u=None, v=None):
    """Curvature Curv(u, v) = [h(u), h(v)] − h([u, v]) at a point.

    ``u``/``v`` are constant base vectors (coordinate directions by default);
    the value is vertical by construction and returned as fiber components.
    """
    space = connection.space
    nb, nf = space.n_base, space.n_fiber

    def col(pt, w):
        b, x = space.split(pt)
        a = connection.coeff(b, x)
        return [_dot(row, w) for row in a]

    def curv_pair(uu, vv):
        d_u = directional_on_total(connection, uu, lambda pt: col(pt, vv), point)
        d_v = directional_on_total(connection, vv, lambda pt: col(pt, uu), point)
        return [a - b for a, b in zip(d_u, d_v)]

    if u is not None or v is not None:
        if u is None or v is None:
            raise ValueError("supply both u and v or neither")
        return curv_pair(u, v)

    basis = [[1.0 if i == a else 0.0 for i in range(nb)] for a in range(nb)]
    return [curv_pair(basis[a], basis[b]) for a, b in space.base_pairs()]


def curvature_verticality_residual(connection, point):
    """Cross-check: base components of [h(e_a), h(e_b)] − h([e_a,e_b]).

    Zero in exact arithmetic for coordinate fields; evaluated through the
    full Lie bracket of the lifted fields as an independent route.
    """
    from .fields import lie_bracket, vector_field
    space = connection.space
    nb = space.n_base
    worst = 0.0
    for a, b in space.base_pairs():
        ha = connection.lift_field(lambda bb, a=a: [1.0 if i == a else 0.0
                                                    for i in range(nb)])
        hb = connection.lift_field(lambda bb, b2=b: [1.0 if i == b2 else 0.0
                                                     for i in range(nb)])
        br = lie_bracket(ha, hb)(point)
        worst = max(worst, max(abs(dm.value_of(c)) for c in br[:nb]))
    return worst


# -- horizontal forms and the covariant differential ----------------------------

class HorizontalForm:
    """A horizontal k-form: components over sorted base-index tuples,
    coefficients smooth functions of the full point (b, x)."""

    def __init__(self, space, degree, comps, name=""):
        self.space = space
        self.degree = degree
        self.comps = comps
        self.name = name or f"hform{degree}"
        self.combos = list(itertools.combinations(range(space.n_base), degree))

    def __call__(self, point):
        return self.comps(point)

    def value(self, point, base_vectors):
        """Evaluate on k base vectors."""
        vals = self.comps(point)
        acc = 0.0
        for idx, combo in enumerate(self.combos):
            minor = [[vec[i] for i in combo] for vec in base_vectors]
            acc = acc + vals[idx] * _minor_det(minor)
        return acc


def _minor_det(rows):
    n = len(rows)
    if n == 0:
        return 1.0
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    acc = 0.0
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * _minor_det(minor)
        acc = acc + (term if j % 2 == 0 else -term)
    return acc


class VerticalBivector:
    """A vertical bivector: components over sorted fiber-index pairs,
    coefficients smooth functions of the full point."""

    def __init__(self, space, comps, name=""):
        self.space = space
        self.comps = comps
        self.name = name or "pi_V"
        self.pairs = list(itertools.combinations(range(space.n_fiber), 2))

    def __call__(self, point):
        return self.comps(point)

    def matrix(self, point):
        nf = self.space.n_fiber
        vals = self.comps(point)
        mat = [[0.0] * nf for _ in range(nf)]
        for idx, (i, j) in enumerate(self.pairs):
            mat[i][j] = vals[idx]
            mat[j][i] = -vals[idx]
        return mat

    def sharp(self, point, alpha_fiber):
        mat = self.matrix(point)
        return [_dot(row, alpha_fiber) for row in mat]

    def is_zero(self, probe_points=()):
        return all(abs(dm.value_of(c)) == 0.0
                   for pt in probe_points for c in self.comps(pt))


def covariant_differential(connection, form):
    """d_Γ of a horizontal k-form (k ∈ {0, 1, 2}), on coordinate fields:

        (d_Γ ω)(e_{a₀},…,e_{a_k}) = Σ_i (−1)^i L_{h(e_{a_i})} ω(…,ê_{a_i},…)

    (coordinate base fields commute, so no bracket terms appear).  A scalar
    function on E counts as the k = 0 case.
    """
    space = connection.space
    nb = space.n_base

    if callable(form) and not isinstance(form, HorizontalForm):
        # scalar function on E → horizontal 1-form
        def comps1(pt):
            out = []
            for a in range(nb):
                e = [1.0 if i == a else 0.0 for i in range(nb)]
                out.append(directional_on_total(connection, e, form, pt))
            return out
        return HorizontalForm(space, 1, comps1, name="dGamma(f)")

    k = form.degree
    if k not in (1, 2):
        raise ValueError("covariant differential implemented for k in {0,1,2}")
    src_index = {c: i for i, c in enumerate(form.combos)}
    dst = list(itertools.combinations(range(nb), k + 1))

    def comps(pt):
        out = []
        for J in dst:
            acc = 0.0
            for pos, a in enumerate(J):
                rest = J[:pos] + J[pos + 1:]
                e = [1.0 if i == a else 0.0 for i in range(nb)]
                term = directional_on_total(
                    connection, e,
                    lambda q, idx=src_index[rest]: form.comps(q)[idx], pt)
                acc = acc + (term if pos % 2 == 0 else -term)
            out.append(acc)
        return out

    return HorizontalForm(space, k + 1, comps, name=f"dGamma({form.name})")


def second_covariant_residual(connection, scalar_fn, point):
    """Residual of d²_Γ f (e_a, e_b) = L_{Curv(e_a,e_b)} f at a point."""
    space = connection.space
    d1 = covariant_differential(connection, scalar_fn)
    d2 = covariant_differential(connection, d1)
    lhs = d2(point)
    curv = curvature(connection, point)
    nb, nf = space.n_base, space.n_fiber
    worst = 0.0
    for idx, (a, b) in enumerate(space.base_pairs()):
        vert = [0.0] * nb + list(curv[idx])
        seeded = [Dual(p, d) for p, d in zip(point, vert)]
        out = scalar_fn(seeded)
        rhs = out.eps if isinstance(out, Dual) else 0.0
        worst = max(worst, abs(dm.value_of(lhs[idx]) - dm.value_of(rhs)))
    return worst
