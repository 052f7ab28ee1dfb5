"""Paths, bigons, and loops in open subsets of R^n.

All evaluators are closures over closed-form data and broadcast over numpy
parameter arrays; discretization happens only in the transport and
quadrature routines.  Sitting instants are realized by a mollifier-based
profile that is genuinely flat near the parameter boundary, so compositions
stay smooth.  Polynomial smoothsteps are only finitely flat and are not
offered.
"""

from __future__ import annotations

import numpy as np

from . import expressions as xp
from .errors import CompositionError, DomainError

_FD_STEP = 1e-6


class SmoothingProfile:
    """C-infinity reparameterization of [0,1] that is exactly 0 on
    [0, epsilon] and exactly 1 on [1-epsilon, 1], built from the standard
    mollifier exp(-1/u)."""

    def __init__(self, epsilon: float = 0.1):
        if not 0.0 < epsilon < 0.5:
            raise DomainError("epsilon must lie in (0, 1/2)")
        self.epsilon = float(epsilon)

    @staticmethod
    def _bump(v):
        v = np.asarray(v, dtype=float)
        out = np.zeros_like(v)
        pos = v > 0
        with np.errstate(divide="ignore", over="ignore", under="ignore"):
            out[pos] = np.exp(-1.0 / v[pos])
        return out

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        eps = self.epsilon
        v = np.clip((u - eps) / (1.0 - 2.0 * eps), 0.0, 1.0)
        b1 = self._bump(v)
        b2 = self._bump(1.0 - v)
        out = b1 / (b1 + b2)
        return out if out.shape else float(out)

    def derivative(self, u):
        u = np.asarray(u, dtype=float)
        eps = self.epsilon
        raw = (u - eps) / (1.0 - 2.0 * eps)
        v = np.clip(raw, 0.0, 1.0)
        b1 = self._bump(v)
        b2 = self._bump(1.0 - v)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore", under="ignore"):
            db1 = np.where(v > 0, b1 / np.maximum(v, 1e-300) ** 2, 0.0)
            db2 = np.where(v < 1, b2 / np.maximum(1.0 - v, 1e-300) ** 2, 0.0)
        denom = (b1 + b2) ** 2
        dpsi = (db1 * b2 + b1 * db2) / denom
        inside = (raw > 0.0) & (raw < 1.0)
        out = np.where(inside, dpsi / (1.0 - 2.0 * eps), 0.0)
        return out if out.shape else float(out)


DEFAULT_PROFILE = SmoothingProfile(0.1)


def _fd_curve_deriv(fn, t, h=_FD_STEP):
    t = np.asarray(t, dtype=float)
    tp = np.minimum(t + h, 1.0)
    tm = np.maximum(t - h, 0.0)
    return (fn(tp) - fn(tm)) / (tp - tm)[..., None]


class Path:
    """Smooth map [0,1] -> R^n.  `eval_fn` must broadcast over parameter
    arrays and return shape (..., n); `deriv_fn` is the exact velocity when
    available, otherwise a central difference is used."""

    def __init__(self, eval_fn, ambient_dim: int, deriv_fn=None, sitting=None):
        self.eval_fn = eval_fn
        self.ambient_dim = int(ambient_dim)
        self.deriv_fn = deriv_fn
        self.sitting = sitting

    def point(self, t):
        return self.eval_fn(t)

    __call__ = point

    def velocity(self, t):
        if self.deriv_fn is not None:
            return self.deriv_fn(t)
        return _fd_curve_deriv(self.eval_fn, t)

    def start(self):
        return self.point(0.0)

    def end(self):
        return self.point(1.0)


def constant_path(x, ambient_dim=None) -> Path:
    x = np.asarray(x, dtype=float)
    n = ambient_dim or x.shape[-1]

    def ev(t):
        t = np.asarray(t, dtype=float)
        return np.broadcast_to(x, t.shape + (n,)).copy()

    def dv(t):
        t = np.asarray(t, dtype=float)
        return np.zeros(t.shape + (n,))

    return Path(ev, n, dv, sitting=DEFAULT_PROFILE)


def line_path(a, b, profile: SmoothingProfile = DEFAULT_PROFILE) -> Path:
    """Straight segment from a to b with sitting instants."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d = b - a

    def ev(t):
        w = np.asarray(profile(t), dtype=float)
        return a + w[..., None] * d

    def dv(t):
        w = np.asarray(profile.derivative(t), dtype=float)
        return w[..., None] * d

    return Path(ev, a.shape[-1], dv, sitting=profile)


def path_from_expressions(component_exprs, profile: SmoothingProfile = DEFAULT_PROFILE,
                          var: str = "t") -> Path:
    """Path from one expression per coordinate in the variable `var`,
    reparameterized by the sitting profile."""
    exprs = [xp.parse(e) for e in component_exprs]
    derivs = [xp.derivative(e, var) for e in exprs]
    n = len(exprs)

    def ev(t):
        w = np.asarray(profile(t), dtype=float)
        env = {var: w}
        return np.stack([np.broadcast_to(np.real(e.evaluate(env)), w.shape)
                         for e in exprs], axis=-1).astype(float)

    def dv(t):
        w = np.asarray(profile(t), dtype=float)
        dw = np.asarray(profile.derivative(t), dtype=float)
        env = {var: w}
        return np.stack([np.broadcast_to(np.real(d.evaluate(env)), w.shape)
                         for d in derivs], axis=-1) * dw[..., None]

    return Path(ev, n, dv, sitting=profile)


def path_compose(gamma1: Path, gamma2: Path, tol: float = 1e-10) -> Path:
    """Concatenation at parameter 1/2; endpoints must agree within tol."""
    gap = float(np.max(np.abs(gamma1.end() - gamma2.start())))
    if gap > tol:
        raise CompositionError(f"endpoint mismatch {gap:.3e} exceeds {tol:.1e}")

    def ev(t):
        t = np.asarray(t, dtype=float)
        p1 = gamma1.point(np.clip(2.0 * t, 0.0, 1.0))
        p2 = gamma2.point(np.clip(2.0 * t - 1.0, 0.0, 1.0))
        return np.where((t < 0.5)[..., None], p1, p2)

    def dv(t):
        t = np.asarray(t, dtype=float)
        v1 = 2.0 * gamma1.velocity(np.clip(2.0 * t, 0.0, 1.0))
        v2 = 2.0 * gamma2.velocity(np.clip(2.0 * t - 1.0, 0.0, 1.0))
        return np.where((t < 0.5)[..., None], v1, v2)

    sitting = None
    if gamma1.sitting is not None and gamma2.sitting is not None:
        sitting = SmoothingProfile(
            min(gamma1.sitting.epsilon, gamma2.sitting.epsilon) / 2.0
        )
    return Path(ev, gamma1.ambient_dim, dv, sitting=sitting)


def path_reverse(gamma: Path) -> Path:
    def ev(t):
        return gamma.point(1.0 - np.asarray(t, dtype=float))

    def dv(t):
        return -gamma.velocity(1.0 - np.asarray(t, dtype=float))

    return Path(ev, gamma.ambient_dim, dv, sitting=gamma.sitting)


def reparameterize(gamma: Path, beta, beta_deriv=None) -> Path:
    """Precompose with an orientation-preserving diffeomorphism of [0,1].

    `beta` may be a SmoothingProfile (derivative known exactly) or a plain
    callable (derivative by finite differences unless given)."""
    if isinstance(beta, SmoothingProfile):
        beta_deriv = beta.derivative

    def ev(t):
        return gamma.point(beta(np.asarray(t, dtype=float)))

    if beta_deriv is not None:
        def dv(t):
            t = np.asarray(t, dtype=float)
            return gamma.velocity(beta(t)) * np.asarray(beta_deriv(t))[..., None]
    else:
        dv = None

    return Path(ev, gamma.ambient_dim, dv, sitting=None)


def sup_distance(p: Path, q: Path, n_nodes: int = 64) -> float:
    """Sampled sup-distance at Chebyshev-like nodes including endpoints."""
    k = np.arange(n_nodes)
    t = 0.5 * (1.0 - np.cos(np.pi * k / (n_nodes - 1)))
    return float(np.max(np.abs(p.point(t) - q.point(t))))


def path_sitting_defect(gamma: Path, n_nodes: int = 16) -> float:
    """Sampled violation of constancy on the sitting strips."""
    if gamma.sitting is None:
        return 0.0
    eps = gamma.sitting.epsilon
    lo = np.linspace(0.0, eps * 0.999, n_nodes)
    hi = np.linspace(1.0 - eps * 0.999, 1.0, n_nodes)
    d0 = np.max(np.abs(gamma.point(lo) - gamma.start()))
    d1 = np.max(np.abs(gamma.point(hi) - gamma.end()))
    return float(max(d0, d1))


class Loop:
    """Smooth map S^1 -> R^n parameterized by angle fraction z in [0,1);
    evaluation wraps z modulo 1."""

    def __init__(self, eval_fn, ambient_dim: int, deriv_fn=None):
        self.eval_fn = eval_fn
        self.ambient_dim = int(ambient_dim)
        self.deriv_fn = deriv_fn

    def point(self, z):
        return self.eval_fn(np.asarray(z, dtype=float) % 1.0)

    __call__ = point

    def velocity(self, z):
        z = np.asarray(z, dtype=float) % 1.0
        if self.deriv_fn is not None:
            return self.deriv_fn(z)
        h = _FD_STEP
        return (self.eval_fn((z + h) % 1.0) - self.eval_fn((z - h) % 1.0)) / (2.0 * h)

    def base_point(self):
        return self.point(0.0)


def loop_from_expressions(component_exprs, var: str = "z") -> Loop:
    exprs = [xp.parse(e) for e in component_exprs]
    derivs = [xp.derivative(e, var) for e in exprs]
    n = len(exprs)

    def ev(z):
        z = np.asarray(z, dtype=float)
        env = {var: z}
        return np.stack([np.broadcast_to(np.real(e.evaluate(env)), z.shape)
                         for e in exprs], axis=-1).astype(float)

    def dv(z):
        z = np.asarray(z, dtype=float)
        env = {var: z}
        return np.stack([np.broadcast_to(np.real(d.evaluate(env)), z.shape)
                         for d in derivs], axis=-1).astype(float)

    return Loop(ev, n, dv)


def loop_to_path(tau: Loop, profile: SmoothingProfile = DEFAULT_PROFILE) -> Path:
    """Based path t -> tau(beta(t)) traversing the loop once from its base
    point, with sitting instants supplied by the profile."""

    def ev(t):
        return tau.point(profile(np.asarray(t, dtype=float)))

    def dv(t):
        t = np.asarray(t, dtype=float)
        return tau.velocity(profile(t)) * np.asarray(profile.derivative(t))[..., None]

    return Path(ev, tau.ambient_dim, dv, sitting=profile)


class Chart:
    """Smooth map R^2 -> R^n with an exact Jacobian, used to push the
    standard bigon family into the ambient space."""

    def __init__(self, eval_fn, jac_fn, ambient_dim: int):
        self.eval_fn = eval_fn
        self.jac_fn = jac_fn  # (...,2) -> (..., n, 2)
        self.ambient_dim = int(ambient_dim)

    def point(self, p):
        return self.eval_fn(p)

    def jacobian(self, p):
        return self.jac_fn(p)


def affine_chart(x, v1, v2) -> Chart:
    """(a, b) -> x + a v1 + b v2."""
    x = np.asarray(x, dtype=float)
    j = np.stack([np.asarray(v1, dtype=float), np.asarray(v2, dtype=float)], axis=-1)

    def ev(p):
        p = np.asarray(p, dtype=float)
        return x + p @ j.T

    def jac(p):
        p = np.asarray(p, dtype=float)
        return np.broadcast_to(j, p.shape[:-1] + j.shape).copy()

    return Chart(ev, jac, x.shape[-1])


def identity_chart() -> Chart:
    return affine_chart(np.zeros(2), np.array([1.0, 0.0]), np.array([0.0, 1.0]))


def chart_from_expressions(component_exprs, vars=("s", "t")) -> Chart:
    exprs = [xp.parse(e) for e in component_exprs]
    partials = [[xp.derivative(e, v) for v in vars] for e in exprs]
    n = len(exprs)

    def ev(p):
        p = np.asarray(p, dtype=float)
        env = {vars[0]: p[..., 0], vars[1]: p[..., 1]}
        return np.stack([np.broadcast_to(np.real(e.evaluate(env)), p.shape[:-1])
                         for e in exprs], axis=-1).astype(float)

    def jac(p):
        p = np.asarray(p, dtype=float)
        env = {vars[0]: p[..., 0], vars[1]: p[..., 1]}
        cols = [
            np.stack([np.broadcast_to(np.real(partials[i][k].evaluate(env)), p.shape[:-1])
                      for i in range(n)], axis=-1)
            for k in range(2)
        ]
        return np.stack(cols, axis=-1).astype(float)

    return Chart(ev, jac, n)


class Bigon:
    """Smooth map [0,1]^2 -> R^n between two paths with common endpoints,
    constant on the boundary strips.  `eval_fn(s, t)` broadcasts over
    parameter arrays; `ds_fn`/`dt_fn` are exact partials when available."""

    def __init__(self, eval_fn, ambient_dim: int, ds_fn=None, dt_fn=None, sitting=None):
        self.eval_fn = eval_fn
        self.ambient_dim = int(ambient_dim)
        self.ds_fn = ds_fn
        self.dt_fn = dt_fn
        self.sitting = sitting

    def point(self, s, t):
        return self.eval_fn(np.asarray(s, dtype=float), np.asarray(t, dtype=float))

    __call__ = point

    def ds(self, s, t):
        if self.ds_fn is not None:
            return self.ds_fn(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
        h = _FD_STEP
        s = np.asarray(s, dtype=float)
        sp, sm = np.minimum(s + h, 1.0), np.maximum(s - h, 0.0)
        return (self.point(sp, t) - self.point(sm, t)) / (sp - sm)[..., None]

    def dt(self, s, t):
        if self.dt_fn is not None:
            return self.dt_fn(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
        h = _FD_STEP
        t = np.asarray(t, dtype=float)
        tp, tm = np.minimum(t + h, 1.0), np.maximum(t - h, 0.0)
        return (self.point(s, tp) - self.point(s, tm)) / (tp - tm)[..., None]

    def source_path(self) -> Path:
        return Path(
            lambda t: self.point(np.zeros_like(np.asarray(t, dtype=float)), t),
            self.ambient_dim,
            lambda t: self.dt(np.zeros_like(np.asarray(t, dtype=float)), t),
            sitting=self.sitting,
        )

    def target_path(self) -> Path:
        return Path(
            lambda t: self.point(np.ones_like(np.asarray(t, dtype=float)), t),
            self.ambient_dim,
            lambda t: self.dt(np.ones_like(np.asarray(t, dtype=float)), t),
            sitting=self.sitting,
        )

    def reparameterized(self, beta_s=None, beta_t=None) -> "Bigon":
        """Precompose both parameters with diffeomorphisms of [0,1]."""
        bs = beta_s if beta_s is not None else (lambda u: u)
        bt = beta_t if beta_t is not None else (lambda u: u)
        dbs = beta_s.derivative if isinstance(beta_s, SmoothingProfile) else None
        dbt = beta_t.derivative if isinstance(beta_t, SmoothingProfile) else None

        def ev(s, t):
            return self.point(bs(s), bt(t))

        ds_fn = None
        dt_fn = None
        if dbs is not None:
            def ds_fn(s, t):
                s = np.asarray(s, dtype=float)
                return self.ds(bs(s), bt(t)) * np.asarray(dbs(s))[..., None]
        if dbt is not None:
            def dt_fn(s, t):
                t = np.asarray(t, dtype=float)
                return self.dt(bs(s), bt(t)) * np.asarray(dbt(t))[..., None]

        return Bigon(ev, self.ambient_dim, ds_fn, dt_fn, sitting=None)


def identity_bigon(gamma: Path) -> Bigon:
    def ev(s, t):
        s = np.asarray(s, dtype=float)
        p = gamma.point(t)
        return np.broadcast_to(p, np.broadcast_shapes(s.shape, p.shape[:-1]) + p.shape[-1:]).copy()

    def dsf(s, t):
        return np.zeros(np.broadcast_shapes(np.shape(s), np.shape(t)) + (gamma.ambient_dim,))

    def dtf(s, t):
        v = gamma.velocity(t)
        s = np.asarray(s, dtype=float)
        return np.broadcast_to(v, np.broadcast_shapes(s.shape, v.shape[:-1]) + v.shape[-1:]).copy()

    return Bigon(ev, gamma.ambient_dim, dsf, dtf, sitting=gamma.sitting or DEFAULT_PROFILE)


def bigon_between(p0: Path, p1: Path, profile: SmoothingProfile = DEFAULT_PROFILE,
                  tol: float = 1e-10) -> Bigon:
    """Linear homotopy bigon p0 => p1 between paths sharing endpoints.
    Valid whenever the ambient region between the paths is contained in the
    domain of interest (e.g. convex domains)."""
    if float(np.max(np.abs(p0.start() - p1.start()))) > tol or \
       float(np.max(np.abs(p0.end() - p1.end()))) > tol:
        raise CompositionError("paths do not share endpoints")
    eps = profile.epsilon
    for p in (p0, p1):
        if p.sitting is not None:
            eps = min(eps, p.sitting.epsilon)
    sitting = SmoothingProfile(eps)

    def ev(s, t):
        w = np.asarray(profile(s), dtype=float)[..., None]
        return (1.0 - w) * p0.point(t) + w * p1.point(t)

    def dsf(s, t):
        dw = np.asarray(profile.derivative(s), dtype=float)[..., None]
        return dw * (p1.point(t) - p0.point(t))

    def dtf(s, t):
        w = np.asarray(profile(s), dtype=float)[..., None]
        return (1.0 - w) * p0.velocity(t) + w * p1.velocity(t)

    return Bigon(ev, p0.ambient_dim, dsf, dtf, sitting=sitting)


def bigon_vcompose(sigma: Bigon, sigma_prime: Bigon, tol: float = 1e-8) -> Bigon:
    """Vertical stacking: sigma for s < 1/2, sigma_prime above; the target
    path of sigma must equal the source path of sigma_prime."""
    gap = sup_distance(sigma.target_path(), sigma_prime.source_path())
    if gap > tol:
        raise CompositionError(f"target/source paths differ by {gap:.3e}")

    def ev(s, t):
        s = np.asarray(s, dtype=float)
        a = sigma.point(np.clip(2.0 * s, 0.0, 1.0), t)
        b = sigma_prime.point(np.clip(2.0 * s - 1.0, 0.0, 1.0), t)
        return np.where((s < 0.5)[..., None], a, b)

    def dsf(s, t):
        s = np.asarray(s, dtype=float)
        a = 2.0 * sigma.ds(np.clip(2.0 * s, 0.0, 1.0), t)
        b = 2.0 * sigma_prime.ds(np.clip(2.0 * s - 1.0, 0.0, 1.0), t)
        return np.where((s < 0.5)[..., None], a, b)

    def dtf(s, t):
        s = np.asarray(s, dtype=float)
        a = sigma.dt(np.clip(2.0 * s, 0.0, 1.0), t)
        b = sigma_prime.dt(np.clip(2.0 * s - 1.0, 0.0, 1.0), t)
        return np.where((s < 0.5)[..., None], a, b)

    return Bigon(ev, sigma.ambient_dim, dsf, dtf, sitting=None)


def bigon_hcompose(sigma1: Bigon, sigma2: Bigon, tol: float = 1e-8) -> Bigon:
    """Horizontal pasting: sigma1 for t < 1/2, sigma2 after; requires the
    end of sigma1's path family to match the start of sigma2's."""
    s_probe = np.linspace(0.0, 1.0, 9)
    gap = float(np.max(np.abs(sigma1.point(s_probe, np.ones(9)) -
                              sigma2.point(s_probe, np.zeros(9)))))
    if gap > tol:
        raise CompositionError(f"path families do not meet (gap {gap:.3e})")

    def ev(s, t):
        t = np.asarray(t, dtype=float)
        a = sigma1.point(s, np.clip(2.0 * t, 0.0, 1.0))
        b = sigma2.point(s, np.clip(2.0 * t - 1.0, 0.0, 1.0))
        return np.where((t < 0.5)[..., None], a, b)

    def dsf(s, t):
        t = np.asarray(t, dtype=float)
        a = sigma1.ds(s, np.clip(2.0 * t, 0.0, 1.0))
        b = sigma2.ds(s, np.clip(2.0 * t - 1.0, 0.0, 1.0))
        return np.where((t < 0.5)[..., None], a, b)

    def dtf(s, t):
        t = np.asarray(t, dtype=float)
        a = 2.0 * sigma1.dt(s, np.clip(2.0 * t, 0.0, 1.0))
        b = 2.0 * sigma2.dt(s, np.clip(2.0 * t - 1.0, 0.0, 1.0))
        return np.where((t < 0.5)[..., None], a, b)

    return Bigon(ev, sigma1.ambient_dim, dsf, dtf, sitting=None)


def standard_bigon(chart, s: float, t: float,
                   profile: SmoothingProfile = DEFAULT_PROFILE) -> Bigon:
    """The canonical bigon sweeping the coordinate rectangle spanned by
    (0,0) and (s,t), pushed forward by `chart`.

    Its source path runs (0,0) -> (0,t) -> (s,t) (second coordinate first)
    and its target path runs (0,0) -> (s,0) -> (s,t); the sweep is the
    straight-line homotopy between the two edge paths.  Orientation fixed
    so that the mixed derivative of surface transport at (s,t)=(0,0)
    recovers the driving 2-form values (see transport module).
    """
    if isinstance(chart, Chart):
        ch = chart
    else:
        raise TypeError("standard_bigon expects a Chart")
    origin = np.zeros(2)
    corner_s = np.array([float(s), 0.0])
    corner_t = np.array([0.0, float(t)])
    corner_st = np.array([float(s), float(t)])

    src = path_compose(line_path(origin, corner_t, profile),
                       line_path(corner_t, corner_st, profile))
    tgt = path_compose(line_path(origin, corner_s, profile),
                       line_path(corner_s, corner_st, profile))
    plane = bigon_between(src, tgt, profile)

    def ev(ss, tt):
        return ch.point(plane.point(ss, tt))

    def dsf(ss, tt):
        p = plane.point(ss, tt)
        return np.einsum("...nk,...k->...n", ch.jacobian(p), plane.ds(ss, tt))

    def dtf(ss, tt):
        p = plane.point(ss, tt)
        return np.einsum("...nk,...k->...n", ch.jacobian(p), plane.dt(ss, tt))

    return Bigon(ev, ch.ambient_dim, dsf, dtf, sitting=plane.sitting)


def contraction_bigon(gamma: Path, profile: SmoothingProfile = DEFAULT_PROFILE) -> Bigon:
    """Radial contraction of a closed loop to its base point: the bigon
    (s, t) -> x0 + beta(s) (gamma(t) - x0) from the constant path to gamma.
    The loop must be star-shaped about its base point within the field's
    domain for the sweep to stay inside."""
    x0 = np.asarray(gamma.start(), dtype=float)
    if float(np.max(np.abs(gamma.end() - x0))) > 1e-10:
        raise CompositionError("contraction_bigon needs a closed loop")

    def ev(s, t):
        w = np.asarray(profile(s), dtype=float)[..., None]
        return x0 + w * (gamma.point(t) - x0)

    def dsf(s, t):
        dw = np.asarray(profile.derivative(s), dtype=float)[..., None]
        return dw * (gamma.point(t) - x0)

    def dtf(s, t):
        w = np.asarray(profile(s), dtype=float)[..., None]
        return w * gamma.velocity(t)

    return Bigon(ev, gamma.ambient_dim, dsf, dtf, sitting=profile)


def bigon_boundary_defect(sigma: Bigon, n_nodes: int = 12) -> float:
    """Sampled violation of the boundary-strip conditions of a bigon."""
    eps = (sigma.sitting.epsilon if sigma.sitting else 0.05) * 0.98
    s = np.linspace(0.0, 1.0, n_nodes)
    x = sigma.point(0.0, 0.0)
    y = sigma.point(0.0, 1.0)
    strip0 = np.linspace(0.0, eps, n_nodes)
    strip1 = np.linspace(1.0 - eps, 1.0, n_nodes)
    d = 0.0
    for tt in strip0:
        d = max(d, float(np.max(np.abs(sigma.point(s, np.full(n_nodes, tt)) - x))))
    for tt in strip1:
        d = max(d, float(np.max(np.abs(sigma.point(s, np.full(n_nodes, tt)) - y))))
    src = sigma.source_path()
    tgt = sigma.target_path()
    t = np.linspace(0.0, 1.0, n_nodes)
    for ss in strip0:
        d = max(d, float(np.max(np.abs(sigma.point(np.full(n_nodes, ss), t) - src.point(t)))))
    for ss in strip1:
        d = max(d, float(np.max(np.abs(sigma.point(np.full(n_nodes, ss), t) - tgt.point(t)))))
    return d
