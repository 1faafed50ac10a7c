"""Structure tensors and the individual axiom checks.

Index conventions used throughout the package:

* bracket tensor ``c[i, j, k]`` is the coefficient of ``e_k`` in ``[e_i, e_j]``;
* product tensor ``p[i, j, k]`` is the coefficient of ``e_k`` in ``e_i . e_j``;
* a bilinear form matrix has ``B[i, j] = B(e_i, e_j)``;
* a linear map matrix has column ``c`` equal to the image of ``e_c``.

Every check brute-forces its identity over basis elements and returns a
:class:`VerificationItem` carrying the first violating index tuple.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from typing import Sequence

from .errors import DimensionMismatch, NotSkew, NotSymmetric, PrerequisiteFailed
from .exact_linalg import Matrix, Tensor3, determinant
from .exact_linalg import clear_denominators as _cleared

FORM_KINDS = ("skew", "symmetric", "unconstrained")


@dataclass(frozen=True)
class VerificationItem:
    name: str
    passed: bool
    witness: tuple | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.passed


@dataclass(frozen=True)
class LieAlgebraData:
    """Bracket structure constants.  Antisymmetry and Jacobi are checks."""

    dim: int
    bracket: Tensor3
    basis_names: tuple = ()

    def __post_init__(self):
        if self.bracket.dims != (self.dim,) * 3:
            raise DimensionMismatch(f"bracket tensor {self.bracket.dims} for dim {self.dim}")
        if not self.basis_names:
            object.__setattr__(self, "basis_names", default_names(self.dim))
        else:
            object.__setattr__(self, "basis_names", tuple(self.basis_names))
            if len(self.basis_names) != self.dim:
                raise DimensionMismatch("one basis name per dimension required")

    @classmethod
    def abelian(cls, dim: int, basis_names: Sequence[str] = ()) -> "LieAlgebraData":
        return cls(dim, Tensor3.zeros(dim), tuple(basis_names))

    @classmethod
    def from_brackets(cls, dim: int, brackets: dict, basis_names: Sequence[str] = ()) -> "LieAlgebraData":
        """Build from ``{(i, j): {k: c}}`` given for ``i < j``; antisymmetry is filled in."""
        full = {}
        for (i, j), coeffs in brackets.items():
            full[(i, j)] = coeffs
            full[(j, i)] = {k: -Fraction(c) for k, c in coeffs.items()}
        return cls(dim, Tensor3.from_sparse(dim, full), tuple(basis_names))

    def ad(self, i: int) -> Matrix:
        n = self.dim
        return Matrix.from_function(n, n, lambda r, c: self.bracket[i, c, r])

    def bracket_of(self, x: Matrix, y: Matrix) -> Matrix:
        return apply_bilinear(self.bracket, x, y)


@dataclass(frozen=True)
class BilinearFormData:
    dim: int
    matrix: Matrix
    kind: str = "unconstrained"

    def __post_init__(self):
        if self.kind not in FORM_KINDS:
            raise ValueError(f"unknown form kind {self.kind!r}")
        if self.matrix.shape != (self.dim, self.dim):
            raise DimensionMismatch(f"form matrix {self.matrix.shape} for dim {self.dim}")
        if self.kind == "skew" and not self.matrix.is_skew():
            raise NotSkew("matrix declared skew is not skew-symmetric")
        if self.kind == "symmetric" and not self.matrix.is_symmetric():
            raise NotSymmetric("matrix declared symmetric is not symmetric")

    @classmethod
    def infer(cls, matrix: Matrix) -> "BilinearFormData":
        """Tag the matrix with the strongest kind it satisfies."""
        if matrix.is_skew():
            kind = "skew"
        elif matrix.is_symmetric():
            kind = "symmetric"
        else:
            kind = "unconstrained"
        return cls(matrix.rows, matrix, kind)

    def __call__(self, x: Matrix, y: Matrix) -> Fraction:
        return (x.T @ self.matrix @ y)[0, 0]


@dataclass(frozen=True)
class LinearMapData:
    dim: int
    matrix: Matrix

    def __post_init__(self):
        if self.matrix.shape != (self.dim, self.dim):
            raise DimensionMismatch(f"linear map matrix {self.matrix.shape} for dim {self.dim}")

    def __call__(self, x: Matrix) -> Matrix:
        return self.matrix @ x


@dataclass(frozen=True)
class ProductData:
    dim: int
    product: Tensor3
    _left: tuple = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        if self.product.dims != (self.dim,) * 3:
            raise DimensionMismatch(f"product tensor {self.product.dims} for dim {self.dim}")

    @classmethod
    def zero(cls, dim: int) -> "ProductData":
        return cls(dim, Tensor3.zeros(dim))

    def left(self, i: int) -> Matrix:
        """Matrix of left multiplication ``L_{e_i}``."""
        n = self.dim
        return Matrix.from_function(n, n, lambda r, c: self.product[i, c, r])

    def left_of(self, x: Matrix) -> Matrix:
        out = Matrix.zeros(self.dim)
        for i in range(self.dim):
            if x[i, 0]:
                out = out + self.left(i) * x[i, 0]
        return out

    def mul(self, x: Matrix, y: Matrix) -> Matrix:
        return apply_bilinear(self.product, x, y)


@dataclass(frozen=True)
class MetricLieAlgebra:
    """A Lie algebra with a scalar product; the input of the cotangent construction."""

    lie: LieAlgebraData
    metric: BilinearFormData
    name: str = ""

    def __post_init__(self):
        if self.metric.dim != self.lie.dim:
            raise DimensionMismatch("metric and Lie algebra dimensions differ")

    @property
    def dim(self) -> int:
        return self.lie.dim


def default_names(n: int) -> tuple:
    return tuple(f"e{i + 1}" for i in range(n))


def basis_vector(n: int, i: int) -> Matrix:
    return Matrix.column([1 if k == i else 0 for k in range(n)])


def apply_bilinear(t: Tensor3, x: Matrix, y: Matrix) -> Matrix:
    n1, n2, n3 = t.dims
    out = [Fraction(0)] * n3
    for i in range(n1):
        xi = x[i, 0]
        if not xi:
            continue
        for j in range(n2):
            yj = y[j, 0]
            if not yj:
                continue
            s = xi * yj
            for k, c in enumerate(t.vector(i, j)):
                if c:
                    out[k] += s * c
    return Matrix.column(out)


# ---------------------------------------------------------------- internals
# Checks run on plain nested lists; Matrix construction per basis triple is
# too slow for the property tests.  Every identity below is homogeneous in
# each tensor, so the loops clear denominators once and work on Python ints.

def _planes(t: Tensor3) -> list:
    return t.to_nested()


def _mul_vec(tn: list, x: list, y: list) -> list:
    n = len(tn)
    out = [0] * n
    for i, xi in enumerate(x):
        if not xi:
            continue
        row = tn[i]
        for j, yj in enumerate(y):
            if not yj:
                continue
            s = xi * yj
            for k, c in enumerate(row[j]):
                if c:
                    out[k] += s * c
    return out


def _unit(n: int, i: int) -> list:
    v = [0] * n
    v[i] = 1
    return v


def _matvec(m: list, v: list) -> list:
    return [sum(a * b for a, b in zip(row, v) if a and b) for row in m]


def _form(m: list, x: list, y: list):
    return sum(xi * m[i][j] * yj for i, xi in enumerate(x) if xi
               for j, yj in enumerate(y) if yj)


def _alternating_ok(c: list) -> bool:
    # with an antisymmetric bracket the cyclic sums are alternating, so i < j < k suffices
    n = len(c)
    return all(c[i][j][k] == -c[j][i][k] for i in range(n) for j in range(n) for k in range(n))


def _triples(n: int, alternating: bool):
    if alternating:
        return ((i, j, k) for i in range(n) for j in range(i + 1, n) for k in range(j + 1, n))
    return iproduct(range(n), repeat=3)


def _vsub(a: list, b: list) -> list:
    return [x - y for x, y in zip(a, b)]


def _vadd(a: list, b: list) -> list:
    return [x + y for x, y in zip(a, b)]


def _same_dim(*dims: int) -> None:
    if len(set(dims)) != 1:
        raise DimensionMismatch(f"dimensions differ: {dims}")


def _require_skew(w: BilinearFormData) -> None:
    if not w.matrix.is_skew():
        raise NotSkew("bilinear form is not skew-symmetric")


# ---------------------------------------------------------------- checks

def check_antisymmetry(g: LieAlgebraData) -> VerificationItem:
    n = g.dim
    for i, j in iproduct(range(n), repeat=2):
        if i <= j:
            a, b = g.bracket.vector(i, j), g.bracket.vector(j, i)
            if any(x != -y for x, y in zip(a, b)):
                return VerificationItem("antisymmetry", False, (i, j), "[e_i,e_j] != -[e_j,e_i]")
    return VerificationItem("antisymmetry", True)


def check_jacobi(g: LieAlgebraData) -> VerificationItem:
    """Cyclic sum ``[[x,y],z] + [[y,z],x] + [[z,x],y]`` on every basis triple."""
    n = g.dim
    _, c = _cleared(_planes(g.bracket))
    e = [_unit(n, i) for i in range(n)]
    # the first failing triple in lexicographic order is always a sorted one
    for i, j, k in _triples(n, _alternating_ok(c)):
        s = _mul_vec(c, c[i][j], e[k])
        s = _vadd(s, _mul_vec(c, c[j][k], e[i]))
        s = _vadd(s, _mul_vec(c, c[k][i], e[j]))
        if any(s):
            return VerificationItem("jacobi", False, (i, j, k), "Jacobi cyclic sum nonzero")
    return VerificationItem("jacobi", True)


def check_skew(w: BilinearFormData) -> VerificationItem:
    m = w.matrix
    for i in range(w.dim):
        for j in range(i, w.dim):
            if m[i, j] != -m[j, i]:
                return VerificationItem("omega_skew", False, (i, j), "omega(x,y) != -omega(y,x)")
    return VerificationItem("omega_skew", True)


def check_scalar_2cocycle(g: LieAlgebraData, w: BilinearFormData) -> VerificationItem:
    _same_dim(g.dim, w.dim)
    _require_skew(w)
    n = g.dim
    _, c = _cleared(_planes(g.bracket))
    _, m = _cleared(w.matrix.to_rows())
    e = [_unit(n, i) for i in range(n)]
    for i, j, k in _triples(n, _alternating_ok(c)):
        s = _form(m, c[i][j], e[k]) + _form(m, c[j][k], e[i]) + _form(m, c[k][i], e[j])
        if s:
            return VerificationItem("scalar_2cocycle", False, (i, j, k), "cyclic sum of omega([x,y],z) nonzero")
    return VerificationItem("scalar_2cocycle", True)


def check_nondegenerate(w: BilinearFormData, name: str = "omega_nondegenerate") -> VerificationItem:
    if determinant(w.matrix) != 0:
        return VerificationItem(name, True)
    return VerificationItem(name, False, None, "determinant is zero")


def check_left_symmetric(p: ProductData) -> VerificationItem:
    """Associator symmetry ``(x,y,z) = (y,x,z)`` on basis triples."""
    n = p.dim
    _, t = _cleared(_planes(p.product))
    e = [_unit(n, i) for i in range(n)]
    for i, j in iproduct(range(n), repeat=2):
        if j < i:
            continue
        for k in range(n):
            lhs = _vsub(_mul_vec(t, e[i], t[j][k]), _mul_vec(t, t[i][j], e[k]))
            rhs = _vsub(_mul_vec(t, e[j], t[i][k]), _mul_vec(t, t[j][i], e[k]))
            if lhs != rhs:
                return VerificationItem("left_symmetric", False, (i, j, k), "associator not symmetric")
    return VerificationItem("left_symmetric", True)


def check_compatibility(g: LieAlgebraData, p: ProductData) -> VerificationItem:
    _same_dim(g.dim, p.dim)
    n = g.dim
    for i, j in iproduct(range(n), repeat=2):
        a, b, c = p.product.vector(i, j), p.product.vector(j, i), g.bracket.vector(i, j)
        if any(x - y != z for x, y, z in zip(a, b, c)):
            return VerificationItem("compatibility", False, (i, j), "[x,y] != x.y - y.x")
    return VerificationItem("compatibility", True)


def check_symplectic_product(w: BilinearFormData, p: ProductData) -> VerificationItem:
    """``omega(x.y, z) + omega(y, x.z) = 0``, i.e. each ``L_x`` lies in sp(omega)."""
    _same_dim(w.dim, p.dim)
    _require_skew(w)
    n = p.dim
    _, t = _cleared(_planes(p.product))
    _, m = _cleared(w.matrix.to_rows())
    e = [_unit(n, i) for i in range(n)]
    for i, j, k in iproduct(range(n), repeat=3):
        if _form(m, t[i][j], e[k]) + _form(m, e[j], t[i][k]):
            return VerificationItem("symplectic_product", False, (i, j, k), "L_x not in sp(omega)")
    return VerificationItem("symplectic_product", True)


def check_complex(j: LinearMapData) -> VerificationItem:
    n = j.dim
    sq = j.matrix @ j.matrix
    for r, c in iproduct(range(n), repeat=2):
        if sq[r, c] != (-1 if r == c else 0):
            return VerificationItem("complex_structure", False, (r, c), "j^2 != -id")
    return VerificationItem("complex_structure", True)


def check_integrable(g: LieAlgebraData, j: LinearMapData) -> VerificationItem:
    """``[jx, jy] - [x, y] = j[jx, y] + j[x, jy]`` on basis pairs."""
    _same_dim(g.dim, j.dim)
    if not check_complex(j):
        raise PrerequisiteFailed("integrability needs j^2 = -id")
    n = g.dim
    _, c = _cleared(_planes(g.bracket))
    # j enters twice on every term except [x, y], which takes s^2 instead
    s, jm = _cleared(j.matrix.to_rows())
    jc = [[jm[r][i] for r in range(n)] for i in range(n)]
    for a, b in iproduct(range(n), repeat=2):
        if b < a:
            continue
        lhs = _vsub(_mul_vec(c, jc[a], jc[b]), [s * s * v for v in c[a][b]])
        rhs = _matvec(jm, _vadd(_mul_vec(c, jc[a], _unit(n, b)), _mul_vec(c, _unit(n, a), jc[b])))
        if lhs != rhs:
            return VerificationItem("integrable", False, (a, b), "Nijenhuis identity fails")
    return VerificationItem("integrable", True)


def check_one_cocycle(p: ProductData, j: LinearMapData, g: LieAlgebraData) -> VerificationItem:
    """``j[x, y] = x . j(y) - y . j(x)`` on basis pairs."""
    _same_dim(p.dim, j.dim, g.dim)
    n = g.dim
    _, c, t = _cleared(_planes(g.bracket), _planes(p.product))
    _, jm = _cleared(j.matrix.to_rows())
    jc = [[jm[r][i] for r in range(n)] for i in range(n)]
    for a, b in iproduct(range(n), repeat=2):
        if b <= a:
            continue
        lhs = _matvec(jm, c[a][b])
        rhs = _vsub(_mul_vec(t, _unit(n, a), jc[b]), _mul_vec(t, _unit(n, b), jc[a]))
        if lhs != rhs:
            return VerificationItem("one_cocycle", False, (a, b), "j not an L-1-cocycle")
    return VerificationItem("one_cocycle", True)


def check_omega_j_compatible(w: BilinearFormData, j: LinearMapData) -> VerificationItem:
    _same_dim(w.dim, j.dim)
    _require_skew(w)
    lhs = j.matrix.T @ w.matrix @ j.matrix
    for r, c in iproduct(range(w.dim), repeat=2):
        if lhs[r, c] != w.matrix[r, c]:
            return VerificationItem("omega_j_compatible", False, (r, c), "omega(jx,jy) != omega(x,y)")
    return VerificationItem("omega_j_compatible", True)


def metric_from(w: BilinearFormData, j: LinearMapData) -> BilinearFormData:
    """``k(x, y) = omega(x, j y)``, tagged symmetric when it is.

    Use :func:`check_metric` for the symmetry/nondegeneracy diagnostics.
    """
    _same_dim(w.dim, j.dim)
    _require_skew(w)
    return BilinearFormData.infer(w.matrix @ j.matrix)


def check_metric(k: BilinearFormData) -> list[VerificationItem]:
    m = k.matrix
    sym = VerificationItem("metric_symmetric", True)
    for r in range(k.dim):
        for c in range(r + 1, k.dim):
            if m[r, c] != m[c, r]:
                sym = VerificationItem("metric_symmetric", False, (r, c), "k(x,y) != k(y,x)")
                break
        if not sym:
            break
    return [sym, check_nondegenerate(k, "metric_nondegenerate")]


def check_hessian(k: BilinearFormData, p: ProductData) -> VerificationItem:
    """``k(x.y - y.x, z) = k(x, y.z) - k(y, x.z)`` on basis triples."""
    _same_dim(k.dim, p.dim)
    if not k.matrix.is_symmetric():
        raise NotSymmetric("Hessian condition needs a symmetric form")
    n = p.dim
    _, t = _cleared(_planes(p.product))
    _, m = _cleared(k.matrix.to_rows())
    e = [_unit(n, i) for i in range(n)]
    for a, b, c in iproduct(range(n), repeat=3):
        lhs = _form(m, _vsub(t[a][b], t[b][a]), e[c])
        rhs = _form(m, e[a], t[b][c]) - _form(m, e[b], t[a][c])
        if lhs != rhs:
            return VerificationItem("hessian", False, (a, b, c), "left-symmetric scalar product identity fails")
    return VerificationItem("hessian", True)


def nabla_j_commutators(p: ProductData, j: LinearMapData) -> list[Matrix]:
    """``[L_{e_i}, j]`` for each basis index; all zero exactly when the connection parallelizes j."""
    _same_dim(p.dim, j.dim)
    return [p.left(i) @ j.matrix - j.matrix @ p.left(i) for i in range(p.dim)]


def check_unimodular(g: LieAlgebraData) -> VerificationItem:
    for i in range(g.dim):
        tr = sum((g.bracket[i, k, k] for k in range(g.dim)), Fraction(0))
        if tr:
            return VerificationItem("unimodular", False, (i,), f"tr ad_e{i + 1} = {tr}")
    return VerificationItem("unimodular", True)


def check_flat(p: ProductData, g: LieAlgebraData) -> VerificationItem:
    """``[L_x, L_y] = L_[x,y]`` on basis pairs."""
    _same_dim(p.dim, g.dim)
    n = g.dim
    left = [p.left(i) for i in range(n)]
    for a, b in iproduct(range(n), repeat=2):
        if b <= a:
            continue
        rhs = Matrix.zeros(n)
        for k, c in enumerate(g.bracket.vector(a, b)):
            if c:
                rhs = rhs + left[k] * c
        if left[a].commutator(left[b]) != rhs:
            return VerificationItem("flat", False, (a, b), "curvature [L_x,L_y] - L_[x,y] nonzero")
    return VerificationItem("flat", True)
