"""Transgression of surface transport to the free loop space: holonomy,
the pulled-back 1-form A_F, the fiber-integrated 1-form phi_F, and the
loop-path bigon with its consistency check.

Loops are parameterized by angle fraction z in [0, 1).  The partial arc
entering phi_F runs from angle z to angle 1 counterclockwise; its
orientation, and the slot order of the fiber contraction, are fixed once
against the abelian route comparison (`transgression_consistency` on a
trivial-action module) and recorded here:

* fiber contraction: the variation enters the first slot of B and the
  loop direction the last, phi_F = oint (alpha_{W(z)})_* B(dtau(z), tau'(z)) dz,
  where W(z) transports along the remaining arc z -> 1;
* with this convention the loop-space transport ODE driven by (A_F, phi_F)
  reproduces the inverse H-part of surface transport over the swept
  cylinder bigon.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import expressions as xp
from . import higher_group as hg
from . import lie_core as lc
from .errors import NumericalError
from .forms import ConnectionPair, eval_one_form
from .geometry import (
    DEFAULT_PROFILE,
    Bigon,
    Chart,
    Loop,
    Path,
    SmoothingProfile,
    loop_to_path,
    standard_bigon,
)
from .higher_group import TwoMorphismValue
from .lie_core import AlgebraElement, GroupElement
from .transport import (
    DEFAULT_CONFIG,
    IntegratorConfig,
    TwoFunctor,
    _rk4_sweep,
    _simpson_weights,
    path_transport,
)


@dataclass(frozen=True)
class LoopTangent:
    """A tangent vector to the loop space: a base loop together with the
    variation field along it."""

    base: Loop
    field: object  # callable z -> (..., n), broadcasting, z taken mod 1

    def vector(self, z):
        return self.field(np.asarray(z, dtype=float) % 1.0)


class LoopPath:
    """Smooth family of loops: a map [0,1] x S^1 -> R^n with sitting
    instants in the time slot."""

    def __init__(self, eval_fn, ambient_dim: int, dt_fn=None, dz_fn=None):
        self.eval_fn = eval_fn
        self.ambient_dim = int(ambient_dim)
        self.dt_fn = dt_fn
        self.dz_fn = dz_fn

    def point(self, t, z):
        return self.eval_fn(np.asarray(t, dtype=float), np.asarray(z, dtype=float) % 1.0)

    def dt(self, t, z):
        t = np.asarray(t, dtype=float)
        z = np.asarray(z, dtype=float) % 1.0
        if self.dt_fn is not None:
            return self.dt_fn(t, z)
        h = 1e-6
        tp_ = np.minimum(t + h, 1.0)
        tm = np.maximum(t - h, 0.0)
        return (self.eval_fn(tp_, z) - self.eval_fn(tm, z)) / (tp_ - tm)[..., None]

    def dz(self, t, z):
        t = np.asarray(t, dtype=float)
        z = np.asarray(z, dtype=float) % 1.0
        if self.dz_fn is not None:
            return self.dz_fn(t, z)
        h = 1e-6
        return (self.eval_fn(t, (z + h) % 1.0) - self.eval_fn(t, (z - h) % 1.0)) / (2.0 * h)

    def at_time(self, t: float) -> Loop:
        t = float(t)
        return Loop(
            lambda z: self.point(np.full(np.shape(z), t) if np.shape(z) else t, z),
            self.ambient_dim,
            lambda z: self.dz(np.full(np.shape(z), t) if np.shape(z) else t, z),
        )

    def variation_at(self, t: float) -> LoopTangent:
        t = float(t)
        return LoopTangent(
            self.at_time(t),
            lambda z: self.dt(np.full(np.shape(z), t) if np.shape(z) else t, z),
        )

    def base_path(self) -> Path:
        return Path(
            lambda t: self.point(t, np.zeros(np.shape(t))),
            self.ambient_dim,
            lambda t: self.dt(t, np.zeros(np.shape(t))),
        )


def loop_path_from_expressions(component_exprs, profile: SmoothingProfile = DEFAULT_PROFILE,
                               time_var: str = "t", angle_var: str = "z") -> LoopPath:
    """Loop path from expressions in the time and angle variables; the time
    slot is reparameterized by the sitting profile."""
    exprs = [xp.parse(e) for e in component_exprs]
    dts = [xp.derivative(e, time_var) for e in exprs]
    dzs = [xp.derivative(e, angle_var) for e in exprs]
    n = len(exprs)

    def _stack(items, env, shape):
        return np.stack([np.broadcast_to(np.real(e.evaluate(env)), shape)
                         for e in items], axis=-1).astype(float)

    def ev(t, z):
        w = np.asarray(profile(t), dtype=float)
        z = np.asarray(z, dtype=float)
        shape = np.broadcast_shapes(w.shape, z.shape)
        return _stack(exprs, {time_var: w, angle_var: z}, shape)

    def dt(t, z):
        t = np.asarray(t, dtype=float)
        w = np.asarray(profile(t), dtype=float)
        dw = np.asarray(profile.derivative(t), dtype=float)
        z = np.asarray(z, dtype=float)
        shape = np.broadcast_shapes(w.shape, z.shape)
        return _stack(dts, {time_var: w, angle_var: z}, shape) * \
            np.broadcast_to(dw, shape)[..., None]

    def dz(t, z):
        w = np.asarray(profile(t), dtype=float)
        z = np.asarray(z, dtype=float)
        shape = np.broadcast_shapes(np.shape(w), z.shape)
        return _stack(dzs, {time_var: w, angle_var: z}, shape)

    return LoopPath(ev, n, dt, dz)


def loop_holonomy(pair: ConnectionPair, tau: Loop,
                  cfg: IntegratorConfig = DEFAULT_CONFIG,
                  profile: SmoothingProfile = DEFAULT_PROFILE) -> GroupElement:
    """Group holonomy of the underlying connection around the loop."""
    return path_transport(pair.A, loop_to_path(tau, profile), cfg)


def transgressed_A(pair: ConnectionPair, tangent: LoopTangent) -> AlgebraElement:
    """The loop-space 1-form pulled back from the base point: A evaluated
    at the loop's base point on the base component of the variation."""
    tau = tangent.base
    return eval_one_form(pair.A, tau.base_point(), tangent.vector(0.0))


def _arc_transports(pair: ConnectionPair, tau: Loop, nq: int, retraction: bool):
    """Transports along the loop from angle 0 to each Simpson node, by one
    accumulating ODE sweep, plus the full-turn transport."""
    zz = np.linspace(0.0, 1.0, 2 * nq + 1)
    x = tau.point(zz)
    v = tau.velocity(zz)
    amats = pair.A.matrices_at(x, v)
    u = _rk4_sweep(amats[None], 1.0 / nq, pair.A.descriptor, retraction)[0]
    return zz[::2], u


def transgressed_phi(pair: ConnectionPair, tangent: LoopTangent,
                     cfg: IntegratorConfig = DEFAULT_CONFIG) -> AlgebraElement:
    """Fiber-integrated h-valued loop-space 1-form

        phi_F(tau, dtau) = oint (alpha_{W(z)})_* B(dtau(z), tau'(z)) dz

    with W(z) the transport along the remaining arc from z to 1; partial
    arcs come from one accumulating sweep around the loop.
    """
    tau = tangent.base
    nq = cfg.n_quad_t
    nodes, u = _arc_transports(pair, tau, nq, cfg.retraction)
    w_full = u[-1]
    arcs = w_full @ np.linalg.inv(u)
    bvals = pair.B.matrices_at(tau.point(nodes), tangent.vector(nodes), tau.velocity(nodes))
    integrand = hg.alpha_g_star_matrices(pair.cm, arcs, bvals)
    weights = _simpson_weights(nq)
    val = np.einsum("t,tij->ij", weights, integrand)
    return AlgebraElement(pair.cm.H, val, validate=False)


def _cylinder_chart(lp: LoopPath) -> Chart:
    """Chart (angle, time) -> loop path evaluation, used to sweep the
    loop-path bigon."""

    def ev(p):
        p = np.asarray(p, dtype=float)
        return lp.point(p[..., 1], p[..., 0])

    def jac(p):
        p = np.asarray(p, dtype=float)
        col_s = lp.dz(p[..., 1], p[..., 0])
        col_t = lp.dt(p[..., 1], p[..., 0])
        return np.stack([col_s, col_t], axis=-1)

    return Chart(ev, jac, lp.ambient_dim)


def loop_path_bigon(lp: LoopPath, profile: SmoothingProfile = DEFAULT_PROFILE) -> Bigon:
    """The bigon swept by a loop path: the standard bigon over the full
    (angle, time) rectangle pushed through the cylinder chart."""
    return standard_bigon(_cylinder_chart(lp), 1.0, 1.0, profile)


def loop_path_two_morphism(pair: ConnectionPair, lp: LoopPath,
                           cfg: IntegratorConfig = DEFAULT_CONFIG) -> TwoMorphismValue:
    """Surface transport over the loop-path bigon, packaged as a
    2-morphism; the G-parts transport along base-point and loop edges."""
    return TwoFunctor(pair, cfg).on_bigon(loop_path_bigon(lp))


@dataclass(frozen=True)
class ConsistencyReport:
    route_functor: np.ndarray
    route_forms: np.ndarray
    defect: float


def transgression_consistency(pair: ConnectionPair, lp: LoopPath,
                              cfg: IntegratorConfig = DEFAULT_CONFIG) -> ConsistencyReport:
    """Compare the two routes from a surface transport to loop-space data:

    * the functor route: the inverse H-part of the loop-path bigon's
      surface transport;
    * the differential-form route: the loop-space ODE driven by (A_F,
      phi_F) sampled along the loop path.

    Both converge to the same element; the defect is their distance.
    """
    tv = loop_path_two_morphism(pair, lp, cfg)
    route_functor = np.linalg.inv(tv.h_part.matrix)

    n = cfg.n_steps_surface_s
    tt = np.linspace(0.0, 1.0, 2 * n + 1)
    base = lp.base_path()
    xb = base.point(tt)
    vb = base.velocity(tt)
    a_vals = pair.A.matrices_at(xb, vb)
    dh = pair.cm.H.matrix_dim
    phi_vals = np.empty((tt.size, dh, dh), dtype=complex)
    for i, t in enumerate(tt):
        phi_vals[i] = transgressed_phi(pair, lp.variation_at(float(t)), cfg).matrix

    h_mat = np.eye(dh, dtype=complex)
    step = 1.0 / n

    def rhs(idx, hm):
        return -(phi_vals[idx] @ hm) - hg.alpha_action_diff(pair.cm, a_vals[idx], hm)

    for k in range(n):
        i0, i1, i2 = 2 * k, 2 * k + 1, 2 * k + 2
        k1 = rhs(i0, h_mat)
        k2 = rhs(i1, h_mat + 0.5 * step * k1)
        k3 = rhs(i1, h_mat + 0.5 * step * k2)
        k4 = rhs(i2, h_mat + step * k3)
        h_mat = h_mat + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if cfg.retraction:
            h_mat = lc.retract(pair.cm.H, h_mat[None])[0]
    if not np.all(np.isfinite(h_mat)):
        raise NumericalError("loop-space transport blew up")

    defect = lc.frob(route_functor - h_mat)
    return ConsistencyReport(route_functor, h_mat, defect)
