"""Matrix Lie groups and algebras: the numerical substrate for every
group-valued computation.

Supported families are U(1), SU(n), SO(n), GL(n) and the unipotent group
of upper triangular matrices with unit diagonal.  Elements are immutable
value objects; every operation here is a pure function, so concurrent use
is safe.

No matrix logarithm is used anywhere: reconstruction is done by ODEs and
extraction by difference quotients, which avoids branch-cut ambiguity
entirely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, MembershipError, NumericalError

U1 = "U1"
SU = "SU"
SO = "SO"
GL = "GL"
UT = "UT"  # upper triangular unipotent

_FAMILIES = (U1, SU, SO, GL, UT)

# Module-wide switch for membership revalidation on element construction.
# On by default; hot loops construct with validate=False instead.
debug_validate = True


def set_debug_validate(flag: bool) -> None:
    global debug_validate
    debug_validate = bool(flag)


@dataclass(frozen=True)
class GroupDescriptor:
    """Names a matrix group family together with its size and base field."""

    family: str
    matrix_dim: int
    field: str = "complex"
    membership_tolerance: float = 1e-9

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown group family {self.family!r}")
        if self.matrix_dim < 1:
            raise ValueError("matrix_dim must be positive")
        if self.membership_tolerance <= 0:
            raise ValueError("membership_tolerance must be positive")
        if self.family == U1 and (self.matrix_dim != 1 or self.field != "complex"):
            raise ValueError("U1 is 1x1 complex")
        if self.family == SU and self.field != "complex":
            raise ValueError("SU(n) is complex")
        if self.family == SO and self.field != "real":
            raise ValueError("SO(n) is real")

    @property
    def is_unitary_family(self) -> bool:
        return self.family in (U1, SU, SO)

    def __str__(self):
        if self.family == U1:
            return "U(1)"
        return f"{self.family}({self.matrix_dim})"


def u1(tol: float = 1e-9) -> GroupDescriptor:
    return GroupDescriptor(U1, 1, "complex", tol)


def su(n: int, tol: float = 1e-9) -> GroupDescriptor:
    return GroupDescriptor(SU, n, "complex", tol)


def so(n: int, tol: float = 1e-9) -> GroupDescriptor:
    return GroupDescriptor(SO, n, "real", tol)


def gl(n: int, field: str = "real", tol: float = 1e-9) -> GroupDescriptor:
    return GroupDescriptor(GL, n, field, tol)


def unipotent(n: int, field: str = "real", tol: float = 1e-9) -> GroupDescriptor:
    return GroupDescriptor(UT, n, field, tol)


def frob(m) -> float:
    """Frobenius norm, tolerant of scalars and stacks."""
    return float(np.sqrt(np.sum(np.abs(np.asarray(m)) ** 2)))


def _as_matrix(desc: GroupDescriptor, matrix) -> np.ndarray:
    m = np.array(matrix, dtype=complex)
    if m.shape != (desc.matrix_dim, desc.matrix_dim):
        raise MembershipError(
            f"expected {desc.matrix_dim}x{desc.matrix_dim} matrix, got {m.shape}"
        )
    m.setflags(write=False)
    return m


def group_defect(desc: GroupDescriptor, m: np.ndarray) -> float:
    """Distance-like residual of the membership predicate; 0 on the group."""
    if not np.all(np.isfinite(m)):
        return math.inf
    n = desc.matrix_dim
    eye = np.eye(n)
    if desc.family == U1:
        return abs(abs(m[0, 0]) - 1.0)
    if desc.family == SU:
        return max(frob(m.conj().T @ m - eye), abs(np.linalg.det(m) - 1.0))
    if desc.family == SO:
        return max(
            frob(m.conj().T @ m - eye),
            abs(np.linalg.det(m) - 1.0),
            frob(m.imag),
        )
    if desc.family == UT:
        lower = np.tril(m, -1)
        diag = np.diagonal(m) - 1.0
        d = max(frob(lower), frob(diag))
        if desc.field == "real":
            d = max(d, frob(m.imag))
        return d
    # GL: invertible with finite entries
    if abs(np.linalg.det(m)) < 1e-12:
        return math.inf
    return frob(m.imag) if desc.field == "real" else 0.0


def algebra_defect(desc: GroupDescriptor, m: np.ndarray) -> float:
    if not np.all(np.isfinite(m)):
        return math.inf
    if desc.family == U1:
        return abs(m[0, 0].real)
    if desc.family == SU:
        return max(frob(m + m.conj().T), abs(np.trace(m)))
    if desc.family == SO:
        return max(frob(m + m.conj().T), frob(m.imag))
    if desc.family == UT:
        d = max(frob(np.tril(m, -1)), frob(np.diagonal(m)))
        if desc.field == "real":
            d = max(d, frob(m.imag))
        return d
    return frob(m.imag) if desc.field == "real" else 0.0


def project_to_algebra(desc: GroupDescriptor, m: np.ndarray) -> np.ndarray:
    """Orthogonal projection of an arbitrary matrix onto the tangent algebra."""
    m = np.asarray(m, dtype=complex)
    if desc.family == U1:
        return np.array([[1j * m[0, 0].imag]])
    if desc.family == SU:
        a = 0.5 * (m - m.conj().T)
        return a - (np.trace(a) / desc.matrix_dim) * np.eye(desc.matrix_dim)
    if desc.family == SO:
        return 0.5 * (m.real - m.real.T).astype(complex)
    if desc.family == UT:
        a = np.triu(m, 1)
        return a.real.astype(complex) if desc.field == "real" else a
    return m.real.astype(complex) if desc.field == "real" else m


@dataclass(frozen=True, eq=False)
class GroupElement:
    """A group-valued quantity: square matrix tagged with its descriptor."""

    descriptor: GroupDescriptor
    matrix: np.ndarray
    validate: bool | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "matrix", _as_matrix(self.descriptor, self.matrix))
        check = debug_validate if self.validate is None else self.validate
        if check:
            d = group_defect(self.descriptor, self.matrix)
            if not d <= self.descriptor.membership_tolerance:
                raise MembershipError(
                    f"matrix not in {self.descriptor} (defect {d:.3e})"
                )

    def __eq__(self, other):
        return (
            isinstance(other, GroupElement)
            and self.descriptor == other.descriptor
            and np.array_equal(self.matrix, other.matrix)
        )


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """A Lie-algebra-valued quantity tagged with its group descriptor."""

    descriptor: GroupDescriptor
    matrix: np.ndarray
    validate: bool | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "matrix", _as_matrix(self.descriptor, self.matrix))
        check = debug_validate if self.validate is None else self.validate
        if check:
            d = algebra_defect(self.descriptor, self.matrix)
            if not d <= self.descriptor.membership_tolerance:
                raise MembershipError(
                    f"matrix not in algebra of {self.descriptor} (defect {d:.3e})"
                )

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraElement)
            and self.descriptor == other.descriptor
            and np.array_equal(self.matrix, other.matrix)
        )


def identity(desc: GroupDescriptor) -> GroupElement:
    return GroupElement(desc, np.eye(desc.matrix_dim), validate=False)


def zero(desc: GroupDescriptor) -> AlgebraElement:
    return AlgebraElement(desc, np.zeros((desc.matrix_dim, desc.matrix_dim)), validate=False)


def expm(m: np.ndarray, order: int = 16) -> np.ndarray:
    """Matrix exponential by scaling-and-squaring with a truncated series.

    Accepts a single matrix or a stack (..., n, n).
    """
    m = np.asarray(m, dtype=complex)
    norm = np.max(np.sqrt(np.sum(np.abs(m) ** 2, axis=(-2, -1)))) if m.size else 0.0
    if not np.isfinite(norm):
        raise NumericalError("non-finite entries in exponential argument")
    squarings = max(0, int(math.ceil(math.log2(norm / 0.5))) if norm > 0.5 else 0)
    a = m / (2.0**squarings)
    eye = np.broadcast_to(np.eye(m.shape[-1]), m.shape).astype(complex)
    result = eye.copy()
    term = eye.copy()
    for k in range(1, order + 1):
        term = term @ a / k
        result = result + term
    for _ in range(squarings):
        result = result @ result
    return result


def exp_map(x: AlgebraElement) -> GroupElement:
    """Exponential of an algebra element; lands on the group within
    10x the membership tolerance."""
    m = expm(x.matrix)
    if not np.all(np.isfinite(m)):
        raise NumericalError("exponential produced non-finite entries")
    d = x.descriptor
    g = GroupElement(d, m, validate=False)
    if debug_validate and group_defect(d, m) > 10 * d.membership_tolerance:
        raise MembershipError(f"exp_map left {d} (defect {group_defect(d, m):.3e})")
    return g


def ginv(g: GroupElement) -> GroupElement:
    try:
        inv = np.linalg.inv(g.matrix)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("singular group element") from exc
    return GroupElement(g.descriptor, inv, validate=False)


def gmul(a: GroupElement, b: GroupElement) -> GroupElement:
    return GroupElement(a.descriptor, a.matrix @ b.matrix, validate=False)


def adjoint(g: GroupElement, x: AlgebraElement) -> AlgebraElement:
    """Adjoint action g x g^{-1}."""
    try:
        inv = np.linalg.inv(g.matrix)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("singular group element in adjoint") from exc
    return AlgebraElement(x.descriptor, g.matrix @ x.matrix @ inv, validate=False)


def bracket(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Commutator [x, y] = xy - yx."""
    return AlgebraElement(
        x.descriptor, x.matrix @ y.matrix - y.matrix @ x.matrix, validate=False
    )


def right_translate_diff(g: GroupElement, x: AlgebraElement) -> np.ndarray:
    """Matrix of dr_g|_1(x): the tangent x pushed to the fiber over g."""
    return x.matrix @ g.matrix


def maurer_cartan_right(curve, t: float, fd_step: float = 1e-5) -> AlgebraElement:
    """Right-logarithmic derivative (dg/dt) g(t)^{-1} of a group-valued
    curve on [0, 1], estimated by a central difference and projected to
    the algebra.
    """
    if t - fd_step < 0.0 or t + fd_step > 1.0:
        raise DomainError(f"t={t} within fd_step of the curve boundary")
    gp = curve(t + fd_step)
    gm = curve(t - fd_step)
    g0 = curve(t)
    der = (gp.matrix - gm.matrix) / (2.0 * fd_step)
    val = der @ np.linalg.inv(g0.matrix)
    return AlgebraElement(g0.descriptor, project_to_algebra(g0.descriptor, val), validate=False)


def polar_retract(m: np.ndarray) -> np.ndarray:
    """Nearest-unitary factor of a stack of near-unitary matrices."""
    h = np.swapaxes(m.conj(), -2, -1) @ m
    w, v = np.linalg.eigh(h)
    w = np.maximum(w.real, 1e-30)
    inv_sqrt = (v * (w ** -0.5)[..., None, :]) @ np.swapaxes(v.conj(), -2, -1)
    return m @ inv_sqrt


def retract(desc: GroupDescriptor, m: np.ndarray) -> np.ndarray:
    """Pull a near-group matrix (or stack) back onto the group manifold.

    Polar retraction for the unitary families, determinant renormalization
    for SU/SO, diagonal normalization for the unipotent family, nothing for
    GL.  Used after each ODE step to prevent drift over long integrations.
    """
    m = np.asarray(m, dtype=complex)
    if desc.family == U1:
        mod = np.abs(m)
        return m / np.where(mod > 0, mod, 1.0)
    if desc.family in (SU, SO):
        q = polar_retract(m)
        det = np.linalg.det(q)
        if np.any(det.real < 0.5) and desc.family == SO:
            raise NumericalError("retraction hit the det=-1 component of O(n)")
        scale = np.exp(-np.log(det) / desc.matrix_dim)
        q = q * scale[..., None, None]
        return q.real.astype(complex) if desc.family == SO else q
    if desc.family == UT:
        q = np.triu(m, 1) + np.broadcast_to(np.eye(desc.matrix_dim), m.shape)
        return q.real.astype(complex) if desc.field == "real" else q
    return m


def random_algebra(desc: GroupDescriptor, rng: np.random.Generator, scale: float = 1.0) -> AlgebraElement:
    """Seeded random algebra element, used by axiom and residual samplers."""
    n = desc.matrix_dim
    raw = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return AlgebraElement(desc, scale * project_to_algebra(desc, raw), validate=False)


def random_group(desc: GroupDescriptor, rng: np.random.Generator, scale: float = 0.7) -> GroupElement:
    return exp_map(random_algebra(desc, rng, scale))
