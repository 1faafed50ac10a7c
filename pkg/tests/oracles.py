"""Independent oracles: sympy linear algebra and brute-force loops on raw arrays.

Nothing here calls the library's checks or kernels; data is pulled out as
nested lists and everything is recomputed from the definitions.
"""
from itertools import product as iproduct

from fractions import Fraction

import sympy as sp


def raw(a):
    """(C, P, W, J) as nested lists of Fractions, C[i][j][k] = coeff of e_k in [e_i, e_j]."""
    C = [[[Fraction(x) for x in row] for row in plane] for plane in a.lie.bracket.to_nested()]
    P = [[[Fraction(x) for x in row] for row in plane] for plane in a.product.product.to_nested()]
    W = [[Fraction(x) for x in r] for r in a.omega.matrix.to_rows()]
    J = [[Fraction(x) for x in r] for r in a.j.matrix.to_rows()]
    return C, P, W, J


def sym(m):
    return sp.Matrix([[sp.Rational(x.numerator, x.denominator) for x in r] for r in m.to_rows()])


def mul(T, x, y):
    n = len(x)
    out = [Fraction(0)] * n
    for i in range(n):
        if not x[i]:
            continue
        for j in range(n):
            if not y[j]:
                continue
            c = x[i] * y[j]
            row = T[i][j]
            for k in range(n):
                if row[k]:
                    out[k] += c * row[k]
    return out


def unit(n, i):
    return [Fraction(1) if k == i else Fraction(0) for k in range(n)]


def matvec(M, v):
    return [sum(M[r][c] * v[c] for c in range(len(v))) for r in range(len(M))]


def form(W, x, y):
    return sum(x[r] * W[r][c] * y[c] for r in range(len(x)) for c in range(len(y)))


def sub(a, b):
    return [x - y for x, y in zip(a, b)]


def add(a, b):
    return [x + y for x, y in zip(a, b)]


def axioms(C, P, W, J) -> dict:
    """Every axiom recomputed from the definitions on all basis tuples."""
    n = len(W)
    e = [unit(n, i) for i in range(n)]
    col = lambda M, i: [M[r][i] for r in range(n)]
    Jc = [col(J, i) for i in range(n)]
    br = lambda x, y: mul(C, x, y)
    pr = lambda x, y: mul(P, x, y)
    WM, JM = _sp(W), _sp(J)
    K = WM * JM
    out = {}
    out["antisymmetry"] = all(C[i][j][k] == -C[j][i][k] for i, j, k in iproduct(range(n), repeat=3))
    out["jacobi"] = all(
        all(v == 0 for v in add(add(br(br(e[i], e[j]), e[k]), br(br(e[j], e[k]), e[i])), br(br(e[k], e[i]), e[j])))
        for i, j, k in iproduct(range(n), repeat=3))
    out["omega_skew"] = WM.T == -WM
    out["omega_nondegenerate"] = WM.det() != 0
    out["scalar_2cocycle"] = all(
        form(W, br(e[i], e[j]), e[k]) + form(W, br(e[j], e[k]), e[i]) + form(W, br(e[k], e[i]), e[j]) == 0
        for i, j, k in iproduct(range(n), repeat=3))
    out["omega_j_compatible"] = JM.T * WM * JM == WM
    out["complex_structure"] = JM * JM == -sp.eye(n)
    out["integrable"] = all(
        sub(sub(sub(br(Jc[i], Jc[j]), matvec(J, br(Jc[i], e[j]))), matvec(J, br(e[i], Jc[j]))), br(e[i], e[j]))
        == [0] * n for i, j in iproduct(range(n), repeat=2))
    out["left_symmetric"] = all(
        sub(pr(pr(e[i], e[j]), e[k]), pr(e[i], pr(e[j], e[k])))
        == sub(pr(pr(e[j], e[i]), e[k]), pr(e[j], pr(e[i], e[k])))
        for i, j, k in iproduct(range(n), repeat=3))
    out["compatibility"] = all(sub(pr(e[i], e[j]), pr(e[j], e[i])) == br(e[i], e[j])
                               for i, j in iproduct(range(n), repeat=2))
    out["symplectic_product"] = all(form(W, pr(e[i], e[j]), e[k]) + form(W, e[j], pr(e[i], e[k])) == 0
                                    for i, j, k in iproduct(range(n), repeat=3))
    out["one_cocycle"] = all(matvec(J, br(e[i], e[j])) == sub(pr(e[i], Jc[j]), pr(e[j], Jc[i]))
                             for i, j in iproduct(range(n), repeat=2))
    out["metric_symmetric"] = K == K.T
    out["metric_nondegenerate"] = K.det() != 0
    return out


def _sp(M):
    return sp.Matrix([[sp.Rational(x.numerator, x.denominator) for x in r] for r in M])


def hessian(K, P) -> bool:
    n = len(K)
    e = [unit(n, i) for i in range(n)]
    pr = lambda x, y: mul(P, x, y)
    return all(form(K, sub(pr(e[a], e[b]), pr(e[b], e[a])), e[c])
               == form(K, e[a], pr(e[b], e[c])) - form(K, e[b], pr(e[a], e[c]))
               for a, b, c in iproduct(range(n), repeat=3))


def flat(C, P) -> bool:
    n = len(C)
    L = [_sp([[P[i][c][r] for c in range(n)] for r in range(n)]) for i in range(n)]
    C = [[[sp.Rational(x.numerator, x.denominator) for x in row] for row in plane] for plane in C]
    return all(L[a] * L[b] - L[b] * L[a] == sum((L[k] * C[a][b][k] for k in range(n)), sp.zeros(n))
               for a, b in iproduct(range(n), repeat=2))


def signature(M) -> tuple:
    """(p, q) from the exact real roots of the characteristic polynomial."""
    M = sp.Matrix(M) if isinstance(M, sp.MatrixBase) else _sp(M)
    x = sp.Symbol("x")
    roots = sp.Poly(M.charpoly(x).as_expr(), x).real_roots()
    assert len(roots) == M.shape[0]
    return sum(1 for r in roots if r > 0), sum(1 for r in roots if r < 0)


def solution_space(W, J, P=None):
    """Basis (as sympy matrices) of D with D in sp(W), [D, J] = 0 and, if P is given, D a derivation of P."""
    n = len(W)
    syms = sp.symbols(f"d0:{n * n}")
    D = sp.Matrix(n, n, syms)
    WM, JM = _sp(W), _sp(J)
    eqs = list(D.T * WM + WM * D) + list(D * JM - JM * D)
    if P is not None:
        Ps = [[[sp.Rational(x.numerator, x.denominator) for x in row] for row in plane] for plane in P]
        smul = lambda x, y: [sum(x[a] * y[b] * Ps[a][b][k] for a in range(n) for b in range(n)) for k in range(n)]
        e = [[sp.Integer(int(k == i)) for k in range(n)] for i in range(n)]
        Dv = lambda v: list(D * sp.Matrix(v))
        for i, j in iproduct(range(n), repeat=2):
            lhs = Dv(smul(e[i], e[j]))
            rhs = add(smul(Dv(e[i]), e[j]), smul(e[i], Dv(e[j])))
            eqs += [l - r for l, r in zip(lhs, rhs)]
    A, _ = sp.linear_eq_to_matrix([sp.expand(q) for q in eqs], syms)
    return [sp.Matrix(n, n, list(v)) for v in A.nullspace()]


def same_span(mats_a, mats_b) -> bool:
    """Equality of the spans of two lists of matrices (flattened)."""
    flat_a = [list(m) for m in mats_a]
    flat_b = [list(m) for m in mats_b]
    if not flat_a and not flat_b:
        return True
    ra = sp.Matrix(flat_a).rank() if flat_a else 0
    rb = sp.Matrix(flat_b).rank() if flat_b else 0
    rab = sp.Matrix(flat_a + flat_b).rank()
    return ra == rb == rab


def from_sym(M):
    """sympy matrix -> library Matrix (through the string form, so no shared code)."""
    from spkahler.exact_linalg import Matrix
    return Matrix.from_rows([[str(x) for x in M.row(r)] for r in range(M.rows)], M.cols)
