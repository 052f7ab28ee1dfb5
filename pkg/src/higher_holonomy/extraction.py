"""Differentiation of black-box transport evaluators back into
differential forms, and the residual checks for the morphism calculus.

The one-form of a path evaluator F is read off from straight-line probes:

    A_x(v) = - d/dh F(segment x -> x + h v) |_{h=0},

by a central difference (Richardson-extrapolated by default).  The
two-form of a bigon evaluator uses the 4-point stencil

    (F(h,h) - F(h,-h) - F(-h,h) + F(-h,-h)) / (4 h^2)

applied to the H-projection of the values on standard bigons over the
plane x + s v1 + t v2.  Because the evaluator is the identity along both
axes, the group-element differences are already first-order small, so the
stencil acts on matrices directly and the result is projected to the
algebra; no logarithm is needed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import forms as fm
from . import higher_group as hg
from . import lie_core as lc
from .forms import GroupValuedMap, OneFormField, TwoFormField
from .geometry import affine_chart, line_path, standard_bigon
from .higher_group import CrossedModule
from .lie_core import AlgebraElement


@dataclass(frozen=True)
class FdConfig:
    step: float = 1e-3
    richardson: bool = True

    def __post_init__(self):
        if not 0.0 < self.step < 0.1:
            raise ValueError("fd step must lie in (0, 0.1)")


DEFAULT_FD = FdConfig()


def _richardson(coarse: np.ndarray, fine: np.ndarray) -> np.ndarray:
    # two-step extrapolation for an O(h^2) quotient
    return (4.0 * fine - coarse) / 3.0


def extract_one_form(evaluator, x, v, fd: FdConfig = DEFAULT_FD) -> AlgebraElement:
    """Recover A_x(v) from a path evaluator (Path -> GroupElement)."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)

    def quotient(h):
        gp = evaluator(line_path(x, x + h * v))
        gm = evaluator(line_path(x, x - h * v))
        return (gp.matrix - gm.matrix) / (2.0 * h), gp.descriptor

    d1, desc = quotient(fd.step)
    der = d1
    if fd.richardson:
        d2, _ = quotient(fd.step / 2.0)
        der = _richardson(d1, d2)
    return AlgebraElement(desc, -lc.project_to_algebra(desc, der), validate=False)


def extract_two_form(evaluator, x, v1, v2, fd: FdConfig = DEFAULT_FD) -> AlgebraElement:
    """Recover B_x(v1, v2) from a bigon evaluator (Bigon -> TwoMorphismValue)."""
    chart = affine_chart(np.asarray(x, dtype=float),
                         np.asarray(v1, dtype=float), np.asarray(v2, dtype=float))

    def h_value(a, b):
        return evaluator(standard_bigon(chart, a, b))

    def stencil(h):
        vpp = h_value(h, h)
        vpm = h_value(h, -h)
        vmp = h_value(-h, h)
        vmm = h_value(-h, -h)
        mat = (vpp.h_part.matrix - vpm.h_part.matrix
               - vmp.h_part.matrix + vmm.h_part.matrix) / (4.0 * h * h)
        return mat, vpp.h_part.descriptor

    d1, desc = stencil(fd.step)
    der = d1
    if fd.richardson:
        d2, _ = stencil(fd.step / 2.0)
        der = _richardson(d1, d2)
    return AlgebraElement(desc, -lc.project_to_algebra(desc, der), validate=False)


def one_form_from_evaluator(descriptor, fn, ambient_dim: int) -> OneFormField:
    """Wrap a pointwise evaluator (x, v) -> AlgebraElement as a one-form
    field (components sampled on the coordinate basis)."""
    def component(i):
        def comp(x, i=i):
            e = np.zeros(ambient_dim)
            e[i] = 1.0
            return fn(x, e).matrix
        return comp

    comps = [
        fm.CallableMatrixField(component(i), descriptor.matrix_dim, ambient_dim,
                               vectorized=False)
        for i in range(ambient_dim)
    ]
    return OneFormField(descriptor, comps, ambient_dim)


@dataclass(frozen=True)
class ExtractedTransformation:
    g_map: GroupValuedMap
    phi: OneFormField


def extract_transformation(g_map: GroupValuedMap, rho_h, h_descriptor,
                           ambient_dim: int, fd: FdConfig = DEFAULT_FD) -> ExtractedTransformation:
    """Recover (g, phi) from a pseudonatural transformation given by its
    object components g and its H-component on paths.  The functorial
    repackaging inverts the H-part, so phi is extracted from
    gamma -> rho_H(gamma)^{-1}."""

    def inv_eval(gamma):
        return lc.ginv(rho_h(gamma))

    def phi_eval(x, v):
        return extract_one_form(inv_eval, x, v, fd)

    return ExtractedTransformation(
        g_map, one_form_from_evaluator(h_descriptor, phi_eval, ambient_dim)
    )


def residual_prop1(cm: CrossedModule, a: OneFormField, b: TwoFormField,
                   box=None, n_samples: int = 64, seed: int = 0) -> float:
    """Max sampled defect of dA + [A ^ A] = t_* B."""
    return fm.fake_curvature_residual(cm, a, b, box, n_samples, seed).max_residual


@dataclass(frozen=True)
class MorphismResiduals:
    connection_eq: float
    curving_eq: float

    @property
    def max_residual(self) -> float:
        return max(self.connection_eq, self.curving_eq)


def _d_one_form(phi: OneFormField, x, v1, v2) -> np.ndarray:
    d = phi.descriptor.matrix_dim
    out = np.zeros(np.asarray(x, dtype=float).shape[:-1] + (d, d), dtype=complex)
    v1 = np.asarray(v1, dtype=float)
    v2 = np.asarray(v2, dtype=float)
    for j in range(phi.ambient_dim):
        for i in range(phi.ambient_dim):
            coef = v1[..., i] * v2[..., j] - v2[..., i] * v1[..., j]
            if np.all(coef == 0.0):
                continue
            out = out + phi.components[j].partial(i).eval(x) * coef[..., None, None]
    return out


def residual_prop2(cm: CrossedModule, g_map: GroupValuedMap, phi: OneFormField,
                   a: OneFormField, b: TwoFormField,
                   a_prime: OneFormField, b_prime: TwoFormField,
                   points) -> MorphismResiduals:
    """Max sampled defect of the two equations tying a morphism (g, phi)
    to its source and target pairs:

        A' + t_* phi = Ad_g(A) - g* theta
        B' + alpha_*(A' ^ phi) + d phi + [phi ^ phi] = (alpha_g)_* B
    """
    n = a.ambient_dim
    eye = np.eye(n)
    res1 = 0.0
    res2 = 0.0
    for x in points:
        x = np.asarray(x, dtype=float)
        g_el = g_map.element(x)
        for i in range(n):
            v = eye[i]
            lhs = a_prime.matrices_at(x, v) + hg.t_star(cm, phi(x, v)).matrix
            rhs = (g_el.matrix @ a.matrices_at(x, v) @ np.linalg.inv(g_el.matrix)
                   - g_map.mc_pullback(x, v))
            res1 = max(res1, lc.frob(lhs - rhs))
        for i in range(n):
            for j in range(i + 1, n):
                v1, v2 = eye[i], eye[j]
                phi1 = phi.matrices_at(x, v1)
                phi2 = phi.matrices_at(x, v2)
                lhs = (b_prime.matrices_at(x, v1, v2)
                       + fm.alpha_wedge(cm, a_prime, phi, x, v1, v2).matrix
                       + _d_one_form(phi, x, v1, v2)
                       + phi1 @ phi2 - phi2 @ phi1)
                rhs = hg.alpha_g_star(cm, g_el, b(x, v1, v2)).matrix
                res2 = max(res2, lc.frob(lhs - rhs))
    return MorphismResiduals(res1, res2)


def residual_prop3(cm: CrossedModule, a_map: GroupValuedMap,
                   g1_map: GroupValuedMap, phi1: OneFormField,
                   g2_map: GroupValuedMap, phi2: OneFormField,
                   a_prime: OneFormField, points) -> MorphismResiduals:
    """Max sampled defect of the 2-morphism equations for a: X -> H:

        g2 = (t o a) g1
        phi2 + (r_a^{-1} o alpha_a)_*(A') = Ad_a(phi1) - a* theta
    """
    n = a_prime.ambient_dim
    eye = np.eye(n)
    res_g = 0.0
    res_phi = 0.0
    for x in points:
        x = np.asarray(x, dtype=float)
        a_el = a_map.element(x)
        lhs = g2_map.matrix(x)
        rhs = cm.t(a_el).matrix @ g1_map.matrix(x)
        res_g = max(res_g, lc.frob(lhs - rhs))
        inv_a = np.linalg.inv(a_el.matrix)
        for i in range(n):
            v = eye[i]
            lhs = (phi2.matrices_at(x, v)
                   + hg.alpha_conjugate_star(cm, a_el, a_prime(x, v)).matrix)
            rhs = (a_el.matrix @ phi1.matrices_at(x, v) @ inv_a
                   - a_map.mc_pullback(x, v))
            res_phi = max(res_phi, lc.frob(lhs - rhs))
    return MorphismResiduals(res_g, res_phi)


def compose_z2_morphisms(m1, m2, cm: CrossedModule):
    """Composite of two morphisms (g1, phi1) then (g2, phi2):
    (g2 g1, (alpha_{g2})_* phi1 + phi2)."""
    g1_map, phi1 = m1
    g2_map, phi2 = m2

    def g_eval(x):
        return g2_map.matrix(x) @ g1_map.matrix(x)

    g_map = GroupValuedMap(cm.G, g_eval)
    n = phi1.ambient_dim

    def component(i):
        def comp(x, i=i):
            e = np.zeros(n)
            e[i] = 1.0
            acted = hg.alpha_g_star(cm, g2_map.element(x), phi1(x, e)).matrix
            return acted + phi2.matrices_at(x, e)
        return comp

    comps = [
        fm.CallableMatrixField(component(i), cm.H.matrix_dim, n, vectorized=False)
        for i in range(n)
    ]
    return g_map, OneFormField(cm.H, comps, n)
