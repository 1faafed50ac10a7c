"""Cotangent (Hess), twisted product and double extension, with their inverses.

Basis conventions of the outputs:

* ``cotangent_hess``: ``(e_1..e_n, e_1*..e_n*)`` with ``e_i*(e_j) = delta_ij``;
* ``twisted_product``: the basis of the first factor followed by the second;
* ``double_extension``: ``(e, base basis, d)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import NamedTuple, Sequence

from .algebra_core import (
    BilinearFormData,
    LieAlgebraData,
    LinearMapData,
    MetricLieAlgebra,
    ProductData,
    VerificationItem,
    check_flat,
    default_names,
)
from .errors import (
    ComplementNotJInvariant,
    DegenerateMetric,
    DegenerateRestriction,
    DimensionMismatch,
    DoesNotCommuteWithJ,
    NotBilateralIdeal,
    NotCertified,
    NotComplex,
    NotDerivation,
    NotFlat,
    NotIsotropic,
    NotLeftIdeal,
    NotNormalizable,
    NotSymmetric,
    NotSymplecticDerivation,
    ReductionParameterNonzero,
    TwistConditionsFailed,
)
from .exact_linalg import Matrix, Tensor3, determinant, inverse, nullspace
from .special_kahler import (
    SpecialKahlerAlgebra,
    Subspace,
    VerificationReport,
    ideal_predicates,
    omega_perp,
)


def _require_certified(*algebras: SpecialKahlerAlgebra) -> None:
    for a in algebras:
        if not a.certified:
            failed = ", ".join(a.report.failed())
            raise NotCertified(f"{a.name or 'input'} is not certified (fails {failed})")


def _combo(mats: Sequence[Matrix], coeffs) -> Matrix:
    """``sum_i coeffs[i] * mats[i]``; ``mats`` must be non-empty or coeffs empty."""
    out = None
    for m, c in zip(mats, coeffs):
        if c:
            out = m * c if out is None else out + m * c
    return out


def _apply_rep(images: Sequence[Matrix], x: Matrix, dim: int) -> Matrix:
    m = _combo(images, x.entries)
    return Matrix.zeros(dim) if m is None else m


def _unique_names(names: Sequence[str]) -> tuple:
    return tuple(names) if len(set(names)) == len(names) else default_names(len(names))


# ---------------------------------------------------------------- cotangent

def levi_civita(g: LieAlgebraData, k: BilinearFormData) -> ProductData:
    """Koszul formula ``2k(x.y, z) = k([x,y],z) - k([y,z],x) + k([z,x],y)``."""
    n = g.dim
    if k.dim != n:
        raise DimensionMismatch("metric and Lie algebra dimensions differ")
    if not k.matrix.is_symmetric():
        raise NotSymmetric("Levi-Civita product needs a symmetric form")
    if determinant(k.matrix) == 0:
        raise DegenerateMetric("Levi-Civita product needs a nondegenerate form")
    kinv = inverse(k.matrix)
    km = k.matrix.to_rows()
    c = g.bracket.to_nested()

    def kv(v, z):
        return sum((v[a] * km[a][z] for a in range(n) if v[a]), Fraction(0))

    nested = []
    for i in range(n):
        plane = []
        for j in range(n):
            rhs = [(kv(c[i][j], z) - kv(c[j][z], i) + kv(c[z][i], j)) / 2 for z in range(n)]
            plane.append(list((kinv @ Matrix.column(rhs)).entries))
        nested.append(plane)
    return ProductData(n, Tensor3.from_nested(nested) if n else Tensor3.zeros(0))


def cotangent_hess(g: LieAlgebraData | MetricLieAlgebra, k: BilinearFormData | None = None,
                   name: str = "") -> SpecialKahlerAlgebra:
    """Special Kähler structure on ``g + g*`` from a flat pseudo-Riemannian metric."""
    if isinstance(g, MetricLieAlgebra):
        name = name or (f"T*{g.name}" if g.name else "")
        g, k = g.lie, g.metric
    if k is None:
        raise TypeError("a metric is required")
    p = levi_civita(g, k)
    flat = check_flat(p, g)
    if not flat:
        raise NotFlat(f"Levi-Civita product is not flat: {flat.detail} at {flat.witness}")
    n = g.dim
    N = 2 * n
    pr = p.product
    br = g.bracket
    bracket: dict = {}
    product: dict = {}
    for i in range(n):
        for j in range(n):
            bv = {kk: c for kk, c in enumerate(br.vector(i, j)) if c}
            if bv:
                bracket[(i, j)] = bv
            pv = {kk: c for kk, c in enumerate(pr.vector(i, j)) if c}
            if pv:
                product[(i, j)] = pv
            # L*_{e_i} e_j* = -sum_k P[i,k,j] e_k*
            dual = {n + kk: -pr[i, kk, j] for kk in range(n) if pr[i, kk, j]}
            if dual:
                product[(i, n + j)] = dual
                bracket[(i, n + j)] = dual
                bracket[(n + j, i)] = {kk: -c for kk, c in dual.items()}
    w = Matrix.from_function(N, N, lambda r, c: -1 if c == r + n else (1 if r == c + n else 0))
    kinv = inverse(k.matrix)
    jm = Matrix.from_function(
        N, N,
        lambda r, c: kinv[r, c - n] if r < n <= c else (-k.matrix[r - n, c] if c < n <= r else 0))
    names = tuple(g.basis_names) + tuple(f"{s}*" for s in g.basis_names)
    return SpecialKahlerAlgebra(
        LieAlgebraData(N, Tensor3.from_sparse(N, bracket), names),
        BilinearFormData(N, w, "skew"),
        LinearMapData(N, jm),
        ProductData(N, Tensor3.from_sparse(N, product)),
        name,
    )


# ---------------------------------------------------------------- twisted product

@dataclass(frozen=True)
class RepresentationPair:
    """``theta[i]`` is the matrix of theta(e_i) on g2; ``rho[i]`` that of rho(f_i) on g1."""

    theta: tuple
    rho: tuple

    def __post_init__(self):
        object.__setattr__(self, "theta", tuple(self.theta))
        object.__setattr__(self, "rho", tuple(self.rho))
        d2 = len(self.rho)
        d1 = len(self.theta)
        for m in self.theta:
            if m.shape != (d2, d2):
                raise DimensionMismatch(f"theta image of shape {m.shape}, expected {d2}x{d2}")
        for m in self.rho:
            if m.shape != (d1, d1):
                raise DimensionMismatch(f"rho image of shape {m.shape}, expected {d1}x{d1}")

    @classmethod
    def zero(cls, dim1: int, dim2: int) -> "RepresentationPair":
        return cls(tuple(Matrix.zeros(dim2) for _ in range(dim1)),
                   tuple(Matrix.zeros(dim1) for _ in range(dim2)))

    @property
    def dims(self) -> tuple[int, int]:
        return len(self.theta), len(self.rho)


def _check_homomorphism(name: str, images, lie: LieAlgebraData, dim: int, labels) -> VerificationItem:
    for a in range(lie.dim):
        for b in range(a + 1, lie.dim):
            lhs = _apply_rep(images, Matrix.column(lie.bracket.vector(a, b)), dim)
            if lhs != images[a].commutator(images[b]):
                return VerificationItem(name, False, (a, b),
                                        f"{name} failed at ({labels[a]}, {labels[b]})")
    return VerificationItem(name, True)


def _check_in_kl(name: str, images, target: SpecialKahlerAlgebra, labels) -> VerificationItem:
    w, jm = target.omega.matrix, target.j.matrix
    for a, m in enumerate(images):
        if not (m.T @ w + w @ m).is_zero():
            return VerificationItem(name, False, (a,), f"image of {labels[a]} is not symplectic")
        if not m.commutator(jm).is_zero():
            return VerificationItem(name, False, (a,), f"image of {labels[a]} does not commute with j")
    return VerificationItem(name, True)


def check_twist_conditions(a1: SpecialKahlerAlgebra, a2: SpecialKahlerAlgebra,
                           r: RepresentationPair) -> VerificationReport:
    n1, n2 = a1.dim, a2.dim
    if r.dims != (n1, n2):
        raise DimensionMismatch(f"representation pair has dims {r.dims}, algebras {(n1, n2)}")
    l1 = a1.basis_names
    l2 = a2.basis_names
    items = [
        _check_homomorphism("theta_homomorphism", r.theta, a1.lie, n2, l1),
        _check_homomorphism("rho_homomorphism", r.rho, a2.lie, n1, l2),
        _check_in_kl("theta_in_kl", r.theta, a2, l1),
        _check_in_kl("rho_in_kl", r.rho, a1, l2),
    ]
    L1 = [a1.L(i) for i in range(n1)]
    L2 = [a2.L(i) for i in range(n2)]
    e1 = [Matrix.column([1 if k == i else 0 for k in range(n1)]) for i in range(n1)]
    e2 = [Matrix.column([1 if k == i else 0 for k in range(n2)]) for i in range(n2)]

    def first_violation(tag: str, fn) -> VerificationItem:
        for x1 in range(n1):
            for x2 in range(n2):
                if not fn(x1, x2):
                    return VerificationItem(tag, False, (x1, x2),
                                            f"{tag} failed at (x1={l1[x1]}, x2={l2[x2]})")
        return VerificationItem(tag, True)

    def twisted1(x1: int, x2: int) -> bool:
        rho = r.rho[x2]
        lhs = L1[x1] @ rho - rho @ L1[x1]
        rhs = (_apply_rep(r.rho, r.theta[x1] @ e2[x2], n1)
               - _apply_rep(L1, rho @ e1[x1], n1))
        return lhs == rhs

    def twisted2(x1: int, x2: int) -> bool:
        th = r.theta[x1]
        lhs = L2[x2] @ th - th @ L2[x2]
        rhs = (_apply_rep(r.theta, r.rho[x2] @ e1[x1], n2)
               - _apply_rep(L2, th @ e2[x2], n2))
        return lhs == rhs

    items.append(first_violation("Twisted1", twisted1))
    items.append(first_violation("Twisted2", twisted2))
    return VerificationReport(tuple(items))


def twisted_product(a1: SpecialKahlerAlgebra, a2: SpecialKahlerAlgebra, r: RepresentationPair,
                    name: str = "", basis_names: Sequence[str] = ()) -> SpecialKahlerAlgebra:
    _require_certified(a1, a2)
    rep = check_twist_conditions(a1, a2, r)
    if not rep.certified:
        bad = rep.first_failure()
        raise TwistConditionsFailed(bad.detail or bad.name)
    n1, n2 = a1.dim, a2.dim
    N = n1 + n2
    bracket: dict = {}
    product: dict = {}

    def put(target: dict, key, vec: dict) -> None:
        vec = {k: c for k, c in vec.items() if c}
        if vec:
            target[key] = vec

    for a in range(n1):
        for b in range(n1):
            put(bracket, (a, b), dict(enumerate(a1.lie.bracket.vector(a, b))))
            put(product, (a, b), dict(enumerate(a1.product.product.vector(a, b))))
    for a in range(n2):
        for b in range(n2):
            put(bracket, (n1 + a, n1 + b), {n1 + k: c for k, c in enumerate(a2.lie.bracket.vector(a, b))})
            put(product, (n1 + a, n1 + b), {n1 + k: c for k, c in enumerate(a2.product.product.vector(a, b))})
    for x1 in range(n1):
        for x2 in range(n2):
            th = {n1 + k: r.theta[x1][k, x2] for k in range(n2)}   # x1 . x2
            rh = {k: r.rho[x2][k, x1] for k in range(n1)}          # x2 . x1
            put(product, (x1, n1 + x2), th)
            put(product, (n1 + x2, x1), rh)
            mixed = {**th, **{k: -c for k, c in rh.items()}}
            put(bracket, (x1, n1 + x2), mixed)
            put(bracket, (n1 + x2, x1), {k: -c for k, c in mixed.items()})
    names = tuple(basis_names) or _unique_names(a1.basis_names + a2.basis_names)
    return SpecialKahlerAlgebra(
        LieAlgebraData(N, Tensor3.from_sparse(N, bracket), names),
        BilinearFormData.infer(Matrix.block_diag(a1.omega.matrix, a2.omega.matrix)),
        LinearMapData(N, Matrix.block_diag(a1.j.matrix, a2.j.matrix)),
        ProductData(N, Tensor3.from_sparse(N, product)),
        name,
    )


class SplitResult(NamedTuple):
    a1: SpecialKahlerAlgebra
    a2: SpecialKahlerAlgebra
    reps: RepresentationPair
    basis: Matrix  # columns: basis of I followed by basis of its omega-orthogonal


def split_by_ideal(a: SpecialKahlerAlgebra, ideal: Subspace) -> SplitResult:
    """Decompose along a complex nondegenerate left ideal ``I`` and ``I^perp``.

    ``twisted_product(a1, a2, reps)`` equals ``a.change_basis(basis)``.
    """
    _require_certified(a)
    preds = ideal_predicates(a, ideal)
    if not preds.left_ideal:
        raise NotLeftIdeal("subspace is not a left ideal of the product")
    if not preds.complex:
        raise NotComplex("subspace is not j-invariant")
    if not preds.nondegenerate:
        raise DegenerateRestriction("omega restricted to the subspace is degenerate")
    perp = omega_perp(a, ideal)
    a1 = a.restrict(ideal, f"{a.name}|I" if a.name else "")
    a2 = a.restrict(perp, f"{a.name}|I^perp" if a.name else "")
    n1, n2 = ideal.dim, perp.dim
    theta = []
    for x1 in ideal.basis:
        cols = [perp.coordinates(a.product.mul(x1, x2)) for x2 in perp.basis]
        theta.append(Matrix.from_columns(cols, n2) if cols else Matrix.zeros(0))
    rho = []
    for x2 in perp.basis:
        cols = [ideal.coordinates(a.product.mul(x2, x1)) for x1 in ideal.basis]
        rho.append(Matrix.from_columns(cols, n1) if cols else Matrix.zeros(0))
    basis = Matrix.from_columns(ideal.basis + perp.basis, a.dim)
    return SplitResult(a1, a2, RepresentationPair(tuple(theta), tuple(rho)), basis)


# ---------------------------------------------------------------- double extension

def _solve_space(a: SpecialKahlerAlgebra, derivation: bool) -> list[Matrix]:
    """Nullspace of the linear conditions on the n^2 entries of D (index r*n + c)."""
    n = a.dim
    w = a.omega.matrix
    jm = a.j.matrix
    rows: list[list[Fraction]] = []

    def blank():
        return [Fraction(0)] * (n * n)

    for p in range(n):
        for q in range(n):
            row = blank()           # (D^T W + W D)[p][q]
            for r in range(n):
                row[r * n + p] += w[r, q]
                row[r * n + q] += w[p, r]
            rows.append(row)
            row = blank()           # (D J - J D)[p][q]
            for r in range(n):
                row[p * n + r] += jm[r, q]
                row[r * n + q] -= jm[p, r]
            rows.append(row)
    if derivation:
        t = a.product.product
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    row = blank()   # D(e_i.e_j) - D(e_i).e_j - e_i.D(e_j), component k
                    for m in range(n):
                        row[k * n + m] += t[i, j, m]
                        row[m * n + i] -= t[m, j, k]
                        row[m * n + j] -= t[i, m, k]
                    rows.append(row)
    if n == 0:
        return []
    basis = nullspace(Matrix.from_rows(rows, n * n))
    return [Matrix(n, n, v.entries) for v in basis]


def sp_commutant_space(a: SpecialKahlerAlgebra) -> list[Matrix]:
    """Basis of ``{D : D^T omega + omega D = 0, D j = j D}``."""
    _require_certified(a)
    return _solve_space(a, derivation=False)


def derivation_space(a: SpecialKahlerAlgebra) -> list[Matrix]:
    """Basis of the admissible double-extension derivations."""
    _require_certified(a)
    return _solve_space(a, derivation=True)


def is_product_derivation(p: ProductData, d: Matrix) -> bool:
    n = p.dim
    for i in range(n):
        for j in range(n):
            ei = Matrix.column([1 if k == i else 0 for k in range(n)])
            ej = Matrix.column([1 if k == j else 0 for k in range(n)])
            if d @ p.mul(ei, ej) != p.mul(d @ ei, ej) + p.mul(ei, d @ ej):
                return False
    return True


@dataclass(frozen=True)
class DoubleExtensionInput:
    base: SpecialKahlerAlgebra
    derivation: LinearMapData

    def __post_init__(self):
        d = self.derivation
        if isinstance(d, Matrix):
            d = LinearMapData(d.rows, d)
            object.__setattr__(self, "derivation", d)
        if d.dim != self.base.dim:
            raise DimensionMismatch("derivation and base dimensions differ")
        _require_certified(self.base)
        w, jm, m = self.base.omega.matrix, self.base.j.matrix, d.matrix
        if not (m.T @ w + w @ m).is_zero():
            raise NotSymplecticDerivation("D is not in sp(omega)")
        if not m.commutator(jm).is_zero():
            raise DoesNotCommuteWithJ("[D, j] != 0")
        if not is_product_derivation(self.base.product, m):
            raise NotDerivation("D is not a derivation of the left-symmetric product")


def _fresh(label: str, taken) -> str:
    while label in taken:
        label += "'"
    return label


def double_extension(inp: DoubleExtensionInput | SpecialKahlerAlgebra, derivation=None,
                     name: str = "") -> SpecialKahlerAlgebra:
    """``R e + g + R d`` with e central, ``[d, x] = d.x = D x``, ``omega(e, d) = 1``, ``j e = d``."""
    if not isinstance(inp, DoubleExtensionInput):
        inp = DoubleExtensionInput(inp, derivation)
    base, D = inp.base, inp.derivation.matrix
    n = base.dim
    N = n + 2
    E, Dd = 0, n + 1
    bracket: dict = {}
    product: dict = {}
    for a in range(n):
        for b in range(n):
            bv = {1 + k: c for k, c in enumerate(base.lie.bracket.vector(a, b)) if c}
            if bv:
                bracket[(1 + a, 1 + b)] = bv
            pv = {1 + k: c for k, c in enumerate(base.product.product.vector(a, b)) if c}
            if pv:
                product[(1 + a, 1 + b)] = pv
        dx = {1 + r: D[r, a] for r in range(n) if D[r, a]}
        if dx:
            bracket[(Dd, 1 + a)] = dx
            bracket[(1 + a, Dd)] = {k: -c for k, c in dx.items()}
            product[(Dd, 1 + a)] = dx

    def omega(r, c):
        if 0 < r <= n and 0 < c <= n:
            return base.omega.matrix[r - 1, c - 1]
        return {(E, Dd): 1, (Dd, E): -1}.get((r, c), 0)

    def jmap(r, c):
        if 0 < r <= n and 0 < c <= n:
            return base.j.matrix[r - 1, c - 1]
        return {(Dd, E): 1, (E, Dd): -1}.get((r, c), 0)

    names = base.basis_names
    e_name = _fresh("e", names)
    d_name = _fresh("d", set(names) | {e_name})
    return SpecialKahlerAlgebra(
        LieAlgebraData(N, Tensor3.from_sparse(N, bracket), (e_name, *names, d_name)),
        BilinearFormData.infer(Matrix.from_function(N, N, omega)),
        LinearMapData(N, Matrix.from_function(N, N, jmap)),
        ProductData(N, Tensor3.from_sparse(N, product)),
        name,
    )


class ReductionResult(NamedTuple):
    base: SpecialKahlerAlgebra
    derivation: Matrix
    basis: Matrix  # adapted basis (e, B, d) as columns in the input coordinates


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q <= 0:
        return None
    rn, rd = isqrt(q.numerator), isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def reduce_by_line(a: SpecialKahlerAlgebra, e) -> ReductionResult:
    """Invert a double extension along the line spanned by ``e``.

    ``e`` is rescaled to ``k(e, e) = 1`` and ``d = j(e)``; the base is realized
    on ``e^perp`` intersected with ``d^perp``.  ``double_extension(base, D)``
    equals ``a.change_basis(basis)``.
    """
    _require_certified(a)
    n = a.dim
    line = Subspace(n, [e])
    ev = line.basis[0]
    preds = ideal_predicates(a, line)
    if not preds.bilateral:
        raise NotBilateralIdeal("span{e} is not a bilateral ideal of the product")
    if not preds.totally_isotropic:
        raise NotIsotropic("span{e} is not totally isotropic")
    perp = omega_perp(a, line)
    if not ideal_predicates(a, perp).bilateral:
        raise NotBilateralIdeal("the omega-orthogonal of span{e} is not a bilateral ideal")
    kee = (ev.T @ a.metric.matrix @ ev)[0, 0]
    if kee == 0:
        raise ComplementNotJInvariant("k(e, e) = 0, so j(e) lies in the omega-orthogonal of e")
    root = _rational_sqrt(kee)
    if root is None:
        raise NotNormalizable(f"k(e, e) = {kee} is not the square of a positive rational")
    ev = ev * (1 / root)
    dv = a.j.matrix @ ev
    cond = Matrix.from_rows([list((ev.T @ a.omega.matrix).entries),
                             list((dv.T @ a.omega.matrix).entries)], n)
    comp = nullspace(cond)
    comp_space = Subspace(n, comp)
    if not all(comp_space.contains(a.j.matrix @ v) for v in comp):
        raise ComplementNotJInvariant("complement of the line is not j-invariant")
    basis = Matrix.from_columns([ev, *comp, dv], n)
    A = a.change_basis(basis)
    m = n - 2
    E, Dd = 0, n - 1
    B = range(1, m + 1)
    br, pr = A.lie.bracket, A.product.product

    def nonzero(name: str, value) -> None:
        if any(value):
            raise ReductionParameterNonzero(f"{name} != 0")

    nonzero("lambda", [pr[Dd, E, E]])
    nonzero("mu", [br[Dd, E, E]])
    nonzero("beta", [pr[Dd, Dd, E]])
    nonzero("x0", [pr[Dd, Dd, b] for b in B])
    nonzero("z0", [br[Dd, b, E] for b in B])
    nonzero("u", [pr[b, Dd, c] for b in B for c in B])
    D = Matrix.from_function(m, m, lambda r, c: pr[Dd, 1 + c, 1 + r])
    sub = [E + 1 + i for i in range(m)]
    base = SpecialKahlerAlgebra.from_arrays(
        Tensor3.from_function((m, m, m), lambda i, j, k: br[1 + i, 1 + j, 1 + k]),
        A.omega.matrix.submatrix(sub, sub),
        A.j.matrix.submatrix(sub, sub),
        Tensor3.from_function((m, m, m), lambda i, j, k: pr[1 + i, 1 + j, 1 + k]),
        f"{a.name}/e" if a.name else "",
    )
    rebuilt = double_extension(base, D)
    if not rebuilt.same_structure(A):
        raise ReductionParameterNonzero("structure is not of double-extension form in the adapted basis")
    return ReductionResult(base, D, basis)
