"""The bundle (bracket, omega, j, product) and its verification battery."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple, Sequence

from .algebra_core import (
    BilinearFormData,
    LieAlgebraData,
    LinearMapData,
    ProductData,
    VerificationItem,
    check_antisymmetry,
    check_compatibility,
    check_complex,
    check_integrable,
    check_jacobi,
    check_left_symmetric,
    check_metric,
    check_nondegenerate,
    check_omega_j_compatible,
    check_one_cocycle,
    check_scalar_2cocycle,
    check_skew,
    check_symplectic_product,
    check_unimodular,
    default_names,
    metric_from,
    nabla_j_commutators,
)
from .errors import (
    DegenerateMetric,
    DimensionMismatch,
    NotSubalgebra,
    OddDimension,
    SpecialKahlerError,
)
from .exact_linalg import (
    Matrix,
    Tensor3,
    clear_denominators,
    congruence_signature,
    determinant,
    inverse,
    nullspace,
    solve_in_span,
)

BATTERY = (
    "antisymmetry",
    "jacobi",
    "omega_skew",
    "omega_nondegenerate",
    "scalar_2cocycle",
    "omega_j_compatible",
    "complex_structure",
    "integrable",
    "left_symmetric",
    "compatibility",
    "symplectic_product",
    "one_cocycle",
    "metric_symmetric",
    "metric_nondegenerate",
)


@dataclass(frozen=True)
class VerificationReport:
    items: tuple

    @property
    def certified(self) -> bool:
        return all(self.items)

    def __bool__(self) -> bool:
        return self.certified

    def failed(self) -> list[str]:
        return [it.name for it in self.items if not it.passed]

    def item(self, name: str) -> VerificationItem:
        for it in self.items:
            if it.name == name:
                return it
        raise KeyError(name)

    def first_failure(self) -> VerificationItem | None:
        return next((it for it in self.items if not it.passed), None)

    def summary(self) -> str:
        lines = []
        for it in self.items:
            mark = "PASS" if it.passed else "FAIL"
            extra = ""
            if not it.passed:
                extra = f"  witness={it.witness} {it.detail}".rstrip()
            lines.append(f"{mark} {it.name}{extra}")
        lines.append("certified" if self.certified else "NOT certified")
        return "\n".join(lines)


class Subspace:
    """Span of linearly independent column vectors in an ambient coordinate space."""

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, basis: Sequence = ()):
        vecs = tuple(_as_column(v, ambient_dim) for v in basis)
        if vecs and Matrix.from_columns(vecs, ambient_dim).rank() != len(vecs):
            raise ValueError("subspace basis is linearly dependent")
        self.ambient_dim = ambient_dim
        self.basis = vecs

    @classmethod
    def spanned_by(cls, ambient_dim: int, vectors: Sequence) -> "Subspace":
        """Like the constructor but silently drops dependent vectors."""
        kept: list[Matrix] = []
        for v in vectors:
            v = _as_column(v, ambient_dim)
            trial = kept + [v]
            if Matrix.from_columns(trial, ambient_dim).rank() == len(trial):
                kept.append(v)
        return cls(ambient_dim, kept)

    @classmethod
    def coordinate(cls, ambient_dim: int, indices: Sequence[int]) -> "Subspace":
        return cls(ambient_dim, [[1 if k == i else 0 for k in range(ambient_dim)] for i in indices])

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def matrix(self) -> Matrix:
        """Basis vectors as columns (``ambient_dim x dim``)."""
        return Matrix.from_columns(self.basis, self.ambient_dim)

    def contains(self, v) -> bool:
        v = _as_column(v, self.ambient_dim)
        if not self.basis:
            return v.is_zero()
        return solve_in_span(self.matrix, v) is not None

    def coordinates(self, v) -> Matrix:
        c = solve_in_span(self.matrix, _as_column(v, self.ambient_dim))
        if c is None:
            raise ValueError("vector is not in the subspace")
        return c

    def is_subspace_of(self, other: "Subspace") -> bool:
        return all(other.contains(v) for v in self.basis)

    def same_span(self, other: "Subspace") -> bool:
        return self.dim == other.dim and self.is_subspace_of(other)

    def __repr__(self) -> str:
        return f"Subspace(ambient_dim={self.ambient_dim}, basis={[list(v.entries) for v in self.basis]})"


def _as_column(v, n: int) -> Matrix:
    if isinstance(v, Matrix):
        if v.shape != (n, 1):
            raise DimensionMismatch(f"expected a column of length {n}, got shape {v.shape}")
        return v
    v = list(v)
    if len(v) != n:
        raise DimensionMismatch(f"expected {n} coordinates, got {len(v)}")
    return Matrix.column(v)


@dataclass(frozen=True, eq=False)
class SpecialKahlerAlgebra:
    lie: LieAlgebraData
    omega: BilinearFormData
    j: LinearMapData
    product: ProductData
    name: str = ""

    def __post_init__(self):
        n = self.lie.dim
        if {self.omega.dim, self.j.dim, self.product.dim} != {n}:
            raise DimensionMismatch("bracket, omega, j and product must share one dimension")
        if n % 2:
            raise OddDimension(f"dimension {n} is odd")

    @classmethod
    def build(cls, dim: int, *, brackets: dict | None = None, omega=None, j=None,
              product: dict | None = None, name: str = "", basis_names: Sequence[str] = ()) -> "SpecialKahlerAlgebra":
        """Convenience constructor from sparse dictionaries and row lists.

        ``brackets`` maps ``(i, j)`` with ``i < j`` to ``{k: coeff}``;
        ``product`` maps every nonzero ``(i, j)`` to ``{k: coeff}``.
        """
        lie = LieAlgebraData.from_brackets(dim, brackets or {}, basis_names)
        w = Matrix.from_rows(omega, dim) if omega is not None else Matrix.zeros(dim)
        jm = Matrix.from_rows(j, dim) if j is not None else Matrix.zeros(dim)
        return cls(lie, BilinearFormData.infer(w), LinearMapData(dim, jm),
                   ProductData(dim, Tensor3.from_sparse(dim, product or {})), name)

    @classmethod
    def from_arrays(cls, bracket: Tensor3, omega: Matrix, j: Matrix, product: Tensor3,
                    name: str = "", basis_names: Sequence[str] = ()) -> "SpecialKahlerAlgebra":
        n = omega.rows
        return cls(LieAlgebraData(n, bracket, tuple(basis_names)), BilinearFormData.infer(omega),
                   LinearMapData(n, j), ProductData(n, product), name)

    @property
    def dim(self) -> int:
        return self.lie.dim

    @property
    def basis_names(self) -> tuple:
        return self.lie.basis_names

    @cached_property
    def report(self) -> VerificationReport:
        return verify_full(self)

    @property
    def certified(self) -> bool:
        return self.report.certified

    @cached_property
    def metric(self) -> BilinearFormData:
        return metric_from(self.omega, self.j)

    def L(self, i: int) -> Matrix:
        return self.product.left(i)

    def same_structure(self, other: "SpecialKahlerAlgebra") -> bool:
        """Tensor-exact equality of all four structures (names ignored)."""
        return (self.lie.bracket == other.lie.bracket
                and self.omega.matrix == other.omega.matrix
                and self.j.matrix == other.j.matrix
                and self.product.product == other.product.product)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SpecialKahlerAlgebra):
            return NotImplemented
        return self.same_structure(other)

    def __hash__(self) -> int:
        return hash((self.lie.bracket, self.omega.matrix, self.j.matrix, self.product.product))

    def change_basis(self, p: Matrix, name: str | None = None,
                     basis_names: Sequence[str] = ()) -> "SpecialKahlerAlgebra":
        """Re-express the structure in the basis given by the columns of ``p``."""
        n = self.dim
        if p.shape != (n, n):
            raise DimensionMismatch("basis change must be square of the algebra's dimension")
        pinv = inverse(p)
        return SpecialKahlerAlgebra.from_arrays(
            transport_tensor(self.lie.bracket, p, pinv),
            p.T @ self.omega.matrix @ p,
            pinv @ self.j.matrix @ p,
            transport_tensor(self.product.product, p, pinv),
            self.name if name is None else name,
            basis_names,
        )

    def restrict(self, sub: "Subspace | Matrix", name: str = "",
                 basis_names: Sequence[str] = ()) -> "SpecialKahlerAlgebra":
        """Structure induced on a subspace closed under bracket, product and j."""
        s = sub.matrix if isinstance(sub, Subspace) else sub
        m = s.columns()
        k = len(m)

        def coords(v: Matrix, what: str) -> list:
            c = solve_in_span(s, v) if k else (Matrix.column([]) if v.is_zero() else None)
            if c is None:
                raise NotSubalgebra(f"subspace not closed under {what}")
            return list(c.entries)

        br = [[coords(self.lie.bracket_of(m[a], m[b]), "bracket") for b in range(k)] for a in range(k)]
        pr = [[coords(self.product.mul(m[a], m[b]), "product") for b in range(k)] for a in range(k)]
        jc = [coords(self.j.matrix @ m[a], "j") for a in range(k)]
        return SpecialKahlerAlgebra.from_arrays(
            Tensor3.from_nested(br) if k else Tensor3.zeros(0),
            s.T @ self.omega.matrix @ s,
            Matrix.from_columns(jc, k) if k else Matrix.zeros(0),
            Tensor3.from_nested(pr) if k else Tensor3.zeros(0),
            name,
            basis_names,
        )


def transport_tensor(t: Tensor3, p: Matrix, pinv: Matrix) -> Tensor3:
    """Structure constants of a bilinear map in the basis given by the columns of ``p``."""
    n = p.rows
    dp, rows = clear_denominators(p.to_rows())
    cols = [[rows[r][a] for r in range(n)] for a in range(n)]
    di, pin = clear_denominators(pinv.to_rows())
    dt, nested = clear_denominators(t.to_nested())
    scale = dp * dp * di * dt
    out = []
    for a in range(n):
        plane = []
        for b in range(n):
            v = [0] * n
            for i, x in enumerate(cols[a]):
                if not x:
                    continue
                for j, y in enumerate(cols[b]):
                    if not y:
                        continue
                    s = x * y
                    for k, c in enumerate(nested[i][j]):
                        if c:
                            v[k] += s * c
            plane.append([Fraction(sum(r[k] * v[k] for k in range(n) if r[k] and v[k]), scale) for r in pin])
        out.append(plane)
    return Tensor3((n, n, n), [x for plane in out for row in plane for x in row]) if n else Tensor3.zeros(0)


def _guard(name: str, fn, *args) -> VerificationItem:
    try:
        return fn(*args)
    except SpecialKahlerError as exc:
        return VerificationItem(name, False, None, f"{type(exc).__name__}: {exc}")


def verify_full(a: SpecialKahlerAlgebra) -> VerificationReport:
    """Run every axiom in battery order; errors become failed items."""
    g, w, j, p = a.lie, a.omega, a.j, a.product
    items = [
        _guard("antisymmetry", check_antisymmetry, g),
        _guard("jacobi", check_jacobi, g),
        _guard("omega_skew", check_skew, w),
        _guard("omega_nondegenerate", check_nondegenerate, w),
        _guard("scalar_2cocycle", check_scalar_2cocycle, g, w),
        _guard("omega_j_compatible", check_omega_j_compatible, w, j),
        _guard("complex_structure", check_complex, j),
        _guard("integrable", check_integrable, g, j),
        _guard("left_symmetric", check_left_symmetric, p),
        _guard("compatibility", check_compatibility, g, p),
        _guard("symplectic_product", check_symplectic_product, w, p),
        _guard("one_cocycle", check_one_cocycle, p, j, g),
    ]
    try:
        items.extend(check_metric(metric_from(w, j)))
    except SpecialKahlerError as exc:
        msg = f"{type(exc).__name__}: {exc}"
        items.append(VerificationItem("metric_symmetric", False, None, msg))
        items.append(VerificationItem("metric_nondegenerate", False, None, msg))
    return VerificationReport(tuple(items))


def signature(a: SpecialKahlerAlgebra) -> tuple[int, int]:
    """``(#positive, #negative)`` of ``k(x, y) = omega(x, j y)``."""
    p, q, z = congruence_signature(a.metric.matrix)
    if z:
        raise DegenerateMetric(f"metric has a {z}-dimensional radical")
    return p, q


def is_flat_special(a: SpecialKahlerAlgebra) -> bool:
    return all(c.is_zero() for c in nabla_j_commutators(a.product, a.j))


def is_geodesically_complete(a: SpecialKahlerAlgebra) -> bool:
    return check_unimodular(a.lie).passed


def omega_perp(a: SpecialKahlerAlgebra, s: Subspace) -> Subspace:
    n = a.dim
    if s.ambient_dim != n:
        raise DimensionMismatch("subspace lives in a different ambient space")
    if s.dim == 0:
        return Subspace.coordinate(n, range(n))
    return Subspace(n, nullspace(s.matrix.T @ a.omega.matrix))


class IdealPredicates(NamedTuple):
    left_ideal: bool
    right_ideal: bool
    bilateral: bool
    totally_isotropic: bool
    complex: bool
    nondegenerate: bool


def ideal_predicates(a: SpecialKahlerAlgebra, s: Subspace) -> IdealPredicates:
    n = a.dim
    if s.ambient_dim != n:
        raise DimensionMismatch("subspace lives in a different ambient space")
    e = [Matrix.column([1 if k == i else 0 for k in range(n)]) for i in range(n)]
    left = all(s.contains(a.product.mul(x, v)) for x in e for v in s.basis)
    right = all(s.contains(a.product.mul(v, x)) for x in e for v in s.basis)
    restricted = s.matrix.T @ a.omega.matrix @ s.matrix if s.dim else Matrix.zeros(0)
    return IdealPredicates(
        left_ideal=left,
        right_ideal=right,
        bilateral=left and right,
        totally_isotropic=restricted.is_zero(),
        complex=all(s.contains(a.j.matrix @ v) for v in s.basis),
        nondegenerate=determinant(restricted) != 0,
    )


def model(n: int) -> SpecialKahlerAlgebra:
    """Flat model ``R^{2n}`` with ``omega_0 = sum e_k* ^ e_{n+k}*``, ``J_0 e_k = e_{n+k}``, zero product."""
    dim = 2 * n
    w = Matrix.from_function(dim, dim, lambda r, c: 1 if c == r + n else (-1 if r == c + n else 0))
    jm = Matrix.from_function(dim, dim, lambda r, c: 1 if r == c + n else (-1 if c == r + n else 0))
    return SpecialKahlerAlgebra(LieAlgebraData.abelian(dim), BilinearFormData(dim, w, "skew"),
                                LinearMapData(dim, jm), ProductData.zero(dim), f"model({n})")


__all__ = [
    "BATTERY", "IdealPredicates", "SpecialKahlerAlgebra", "Subspace", "VerificationReport",
    "default_names", "ideal_predicates", "is_flat_special", "is_geodesically_complete",
    "model", "omega_perp", "signature", "transport_tensor", "verify_full",
]
