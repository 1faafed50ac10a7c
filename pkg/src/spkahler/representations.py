"""Kähler vector spaces and the étale affine representation correspondence.

Everything here is at the Lie algebra level: a representation is the pair
``(q, f)`` with ``q: g -> V`` linear and ``x -> f_x`` into kl(V, omega, J).
The open-orbit condition is taken at a single caller-supplied point ``v``,
as invertibility of ``psi_v(x) = q(x) + f_x(v)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra_core import (
    BilinearFormData,
    LieAlgebraData,
    LinearMapData,
    ProductData,
    VerificationItem,
    check_complex,
    check_omega_j_compatible,
)
from .errors import (
    DimensionMismatch,
    NotCertified,
    NotEtaleAtPoint,
    NotFlatSpecial,
    NotKahlerVectorSpace,
    RepresentationInvalid,
)
from .exact_linalg import Matrix, Tensor3, determinant, inverse
from .special_kahler import SpecialKahlerAlgebra, VerificationReport, is_flat_special


@dataclass(frozen=True)
class KahlerVectorSpace:
    dim: int
    omega: BilinearFormData
    J: LinearMapData

    def __post_init__(self):
        if self.omega.dim != self.dim or self.J.dim != self.dim:
            raise DimensionMismatch("omega and J must act on the same space")
        w = self.omega.matrix
        if not w.is_skew() or determinant(w) == 0:
            raise NotKahlerVectorSpace("omega must be skew and nondegenerate")
        if not check_complex(self.J):
            raise NotKahlerVectorSpace("J^2 != -id")
        if not check_omega_j_compatible(self.omega, self.J):
            raise NotKahlerVectorSpace("omega(Jx, Jy) != omega(x, y)")

    @classmethod
    def of(cls, a: SpecialKahlerAlgebra) -> "KahlerVectorSpace":
        return cls(a.dim, a.omega, a.j)

    @property
    def metric(self) -> Matrix:
        return self.omega.matrix @ self.J.matrix


@dataclass(frozen=True)
class AffineRepData:
    """``x -> (q(x), f_x)``.  ``q`` is ``target.dim x source_dim``; ``f[i]`` is ``f_{e_i}``.

    ``source`` carries the bracket of the source algebra so the converse
    construction can rebuild it; it is optional for the checks.
    """

    source_dim: int
    target: KahlerVectorSpace
    q: Matrix
    f: tuple
    source: LieAlgebraData | None = None

    def __post_init__(self):
        object.__setattr__(self, "f", tuple(self.f))
        n, m = self.target.dim, self.source_dim
        if self.q.shape != (n, m):
            raise DimensionMismatch(f"q has shape {self.q.shape}, expected {(n, m)}")
        if len(self.f) != m or any(x.shape != (n, n) for x in self.f):
            raise DimensionMismatch("f needs one target-square matrix per source basis vector")
        if self.source is not None and self.source.dim != m:
            raise DimensionMismatch("source algebra dimension differs from source_dim")

    def f_of(self, x: Matrix) -> Matrix:
        out = Matrix.zeros(self.target.dim)
        for i, c in enumerate(x.entries):
            if c:
                out = out + self.f[i] * c
        return out


def check_kl_membership(A: LinearMapData, V: KahlerVectorSpace) -> VerificationItem:
    if A.dim != V.dim:
        raise DimensionMismatch("map and Kähler vector space dimensions differ")
    a, w, jm = A.matrix, V.omega.matrix, V.J.matrix
    if not (a.T @ w + w @ a).is_zero():
        return VerificationItem("kl_membership", False, None, "omega(Ax, y) + omega(x, Ay) != 0")
    if not a.commutator(jm).is_zero():
        return VerificationItem("kl_membership", False, None, "AJ != JA")
    return VerificationItem("kl_membership", True)


def check_rep_and_cocycle(r: AffineRepData, g: LieAlgebraData) -> VerificationReport:
    if r.source_dim != g.dim:
        raise DimensionMismatch("representation source dimension differs from the algebra")
    m = g.dim
    hom = VerificationItem("f_homomorphism", True)
    coc = VerificationItem("q_cocycle", True)
    for a in range(m):
        for b in range(a + 1, m):
            br = Matrix.column(g.bracket.vector(a, b))
            if hom and r.f_of(br) != r.f[a].commutator(r.f[b]):
                hom = VerificationItem("f_homomorphism", False, (a, b), "f_[x,y] != [f_x, f_y]")
            qa, qb = r.q.column_vector(a), r.q.column_vector(b)
            if coc and r.q @ br != r.f[a] @ qb - r.f[b] @ qa:
                coc = VerificationItem("q_cocycle", False, (a, b), "q([x,y]) != f_x q(y) - f_y q(x)")
    kl = VerificationItem("f_in_kl", True)
    for i, fx in enumerate(r.f):
        item = check_kl_membership(LinearMapData(r.target.dim, fx), r.target)
        if not item:
            kl = VerificationItem("f_in_kl", False, (i,), item.detail)
            break
    return VerificationReport((hom, kl, coc))


def etale_from_algebra(a: SpecialKahlerAlgebra) -> AffineRepData:
    """``x -> (x, L_x)`` on ``V = (g, omega, j)``; needs ``L_x j = j L_x`` for all x."""
    if not a.certified:
        raise NotCertified(f"{a.name or 'input'} is not certified")
    if not is_flat_special(a):
        raise NotFlatSpecial("some L_x does not commute with j")
    n = a.dim
    return AffineRepData(n, KahlerVectorSpace.of(a), Matrix.identity(n),
                         tuple(a.L(i) for i in range(n)), a.lie)


def psi_v(r: AffineRepData, v: Sequence | Matrix) -> LinearMapData:
    """Matrix of ``x -> q(x) + f_x(v)``."""
    n = r.target.dim
    if r.source_dim != n:
        raise DimensionMismatch(f"psi_v is {n}x{r.source_dim}; an étale point needs dim g = dim V")
    v = v if isinstance(v, Matrix) else Matrix.column(list(v))
    if v.shape != (n, 1):
        raise DimensionMismatch(f"point must have {n} coordinates")
    cols = [r.q.column_vector(c) + r.f[c] @ v for c in range(n)]
    return LinearMapData(n, Matrix.from_columns(cols, n) if cols else Matrix.zeros(0))


def algebra_from_etale(r: AffineRepData, v: Sequence | Matrix,
                       g: LieAlgebraData | None = None, name: str = "") -> SpecialKahlerAlgebra:
    """Pull the Kähler structure and ``f`` back along ``psi_v``."""
    g = g or r.source
    if g is None:
        raise RepresentationInvalid("the source Lie algebra is required")
    rep = check_rep_and_cocycle(r, g)
    if not rep.certified:
        bad = rep.first_failure()
        raise RepresentationInvalid(f"{bad.name}: {bad.detail}")
    psi = psi_v(r, v).matrix
    if determinant(psi) == 0:
        raise NotEtaleAtPoint("psi_v is not invertible at the given point")
    pinv = inverse(psi)
    n = g.dim
    left = [pinv @ r.f[i] @ psi for i in range(n)]
    product = Tensor3.from_function((n, n, n), lambda i, j, k: left[i][k, j]) if n else Tensor3.zeros(0)
    return SpecialKahlerAlgebra(
        g,
        BilinearFormData.infer(psi.T @ r.target.omega.matrix @ psi),
        LinearMapData(n, pinv @ r.target.J.matrix @ psi),
        ProductData(n, product),
        name,
    )
