"""Worked examples as structure-tensor bundles, with their expected outcomes.

Every entry is typed in directly from its multiplication table rather than
produced by a construction, so the construction tests compare two
independent sources.  Group-level data is evaluated at the identity.

``Fixture.basis_change`` (when present) is the matrix ``P`` with
``construct().change_basis(P) == fixture.data``, where ``construct`` is the
recipe named in ``Fixture.construction``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .algebra_core import BilinearFormData, LieAlgebraData, MetricLieAlgebra
from .errors import ParseError, UnknownFixture
from .exact_linalg import Matrix, as_rational, format_rational
from .special_kahler import SpecialKahlerAlgebra, model as _model


@dataclass(frozen=True)
class Expected:
    certified: bool | None = None
    failing_axiom: str | None = None
    signature: tuple | None = None          # computed (#positive, #negative)
    signature_paper: str | None = None      # as printed in the source example
    flat_special: bool | None = None
    complete: bool | None = None


@dataclass(frozen=True)
class Fixture:
    name: str
    data: SpecialKahlerAlgebra | MetricLieAlgebra
    expected: Expected
    basis_change: Matrix | None = None
    construction: str = ""
    notes: str = field(default="", compare=False)

    @property
    def is_partial(self) -> bool:
        return isinstance(self.data, MetricLieAlgebra)


def _v(**coeffs) -> dict:
    return coeffs


def _sparse(table: dict) -> dict:
    """``{(i, j): [(k, c), ...]}`` with 1-based indices -> 0-based sparse dict."""
    return {(i - 1, j - 1): {k - 1: c for k, c in entries} for (i, j), entries in table.items()}


def _dense(n: int, entries: dict) -> list:
    """1-based ``{(r, c): value}`` -> row list."""
    rows = [[0] * n for _ in range(n)]
    for (r, c), x in entries.items():
        rows[r - 1][c - 1] = x
    return rows


def _wedge(n: int, pairs: Sequence[tuple]) -> list:
    """Matrix of ``sum s * e_a* ^ e_b*`` for ``(a, b, s)`` with 1-based indices."""
    rows = [[0] * n for _ in range(n)]
    for a, b, s in pairs:
        rows[a - 1][b - 1] += s
        rows[b - 1][a - 1] -= s
    return rows


def _complex(n: int, pairs: Sequence[tuple]) -> list:
    """j with ``j(e_a) = e_b`` (hence ``j(e_b) = -e_a``), 1-based."""
    rows = [[0] * n for _ in range(n)]
    for a, b in pairs:
        rows[b - 1][a - 1] = 1
        rows[a - 1][b - 1] = -1
    return rows


def _names(n: int) -> tuple:
    return tuple(f"e{i}" for i in range(1, n + 1))


# ---------------------------------------------------------------- positive examples

def g1_dim4() -> Fixture:
    a = SpecialKahlerAlgebra.build(
        4,
        brackets=_sparse({(1, 2): [(2, 1)], (1, 3): [(3, 1)], (1, 4): [(4, -1)]}),
        omega=_wedge(4, [(3, 1, 1), (4, 2, 1)]),
        j=_complex(4, [(3, 2), (4, 1)]),
        product=_sparse({(1, 1): [(1, -1)], (1, 2): [(2, 1)], (1, 3): [(3, 1)], (1, 4): [(4, -1)]}),
        name="g1_dim4",
    )
    return Fixture("g1_dim4", a, Expected(True, None, (2, 2), "(2,2)", True, False),
                   Matrix.identity(4), "cotangent_hess(affR_lorentz)",
                   "omega = e3*^e1* + e4*^e2* (group form at t = 0)")


def g2_dim6() -> Fixture:
    a = SpecialKahlerAlgebra.build(
        6,
        brackets=_sparse({(1, 2): [(3, 1)], (2, 4): [(5, -1)], (2, 6): [(4, 1)]}),
        omega=_wedge(6, [(5, 2, 1), (4, 1, 1), (6, 3, 1)]),
        j=_complex(6, [(4, 1), (5, 3), (6, 2)]),
        product=_sparse({(2, 1): [(3, -1)], (2, 2): [(1, 1)], (2, 4): [(5, -1)], (2, 6): [(4, 1)]}),
        name="g2_dim6",
    )
    # columns: g2 basis vectors written in the cotangent basis (e1, e2, e3, e1*, e2*, e3*)
    p = Matrix.from_columns([
        [0, -1, 0, 0, 0, 0],
        [1, 0, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0],
        [0, 0, 0, 0, -1, 0],
        [0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 0, 1],
    ])
    return Fixture("g2_dim6", a, Expected(True, None, (4, 2), "(2,4)", True, True),
                   p, "cotangent_hess(h3_lorentz)",
                   "omega = e5*^e2* + e4*^e1* + e6*^e3* (group form at t = 0)")


_G3_BRACKETS = {(1, 2): [(2, 1), (4, -1)], (1, 4): [(2, 1), (4, -1)],
                (3, 2): [(2, 1), (4, -1)], (3, 4): [(2, 1), (4, -1)]}
_G3_ROW_ODD = [(1, -1), (3, 1)], [(2, 1), (4, -1)]
_G3_ROW_EVEN = [(1, 2), (3, -2)]


def _g3_product() -> dict:
    t = {}
    for x in (1, 3):
        t[(x, 1)] = t[(x, 3)] = _G3_ROW_ODD[0]
        t[(x, 2)] = t[(x, 4)] = _G3_ROW_ODD[1]
    for x in (2, 4):
        t[(x, 2)] = t[(x, 4)] = _G3_ROW_EVEN
    return t


def _g3_brackets_full() -> dict:
    # (3,2) is given with i > j in the source; store as (2,3) with the sign flipped
    out = {}
    for (i, j), v in _G3_BRACKETS.items():
        if i < j:
            out[(i, j)] = v
        else:
            out[(j, i)] = [(k, -c) for k, c in v]
    return out


def g3_dim4() -> Fixture:
    a = SpecialKahlerAlgebra.build(
        4,
        brackets=_sparse(_g3_brackets_full()),
        omega=_wedge(4, [(1, 2, 1), (3, 4, -1)]),
        j=_complex(4, [(1, 2), (3, 4)]),
        product=_sparse(_g3_product()),
        name="g3_dim4",
    )
    return Fixture("g3_dim4", a, Expected(True, None, (2, 2), "(2,2)", False, True))


def d_a(a) -> Matrix:
    """The admissible derivation family of g3 (``b = 0, c = a, d = -a``)."""
    a = as_rational(a)
    return Matrix.from_rows([[0, a, 0, a], [-a, 0, -a, 0], [0, -a, 0, -a], [a, 0, a, 0]])


def d_general(a=0, b=0, c=0, d=0) -> Matrix:
    """General element of sp(g3, omega) commuting with j."""
    a, b, c, d = map(as_rational, (a, b, c, d))
    return Matrix.from_rows([[0, a, b, c], [-a, 0, -c, b], [b, -c, 0, d], [c, b, -d, 0]])


def ga_dim6(a=1) -> Fixture:
    a = as_rational(a)
    D = d_a(a)
    n = 6   # basis (e, e1, e2, e3, e4, d)
    sh = {(i + 1, j + 1): [(k + 1, c) for k, c in v] for (i, j), v in _g3_brackets_full().items()}
    pr = {(i + 1, j + 1): [(k + 1, c) for k, c in v] for (i, j), v in _g3_product().items()}
    for col in range(4):
        image = [(r + 2, D[r, col]) for r in range(4) if D[r, col]]
        sh[(col + 2, 6)] = [(k, -c) for k, c in image]     # [e_i, d] = -D(e_i)
        pr[(6, col + 2)] = image                          # d . e_i = D(e_i)
    alg = SpecialKahlerAlgebra.build(
        n,
        brackets=_sparse(sh),
        omega=_wedge(n, [(1, 6, 1), (2, 3, 1), (4, 5, -1)]),
        j=_complex(n, [(1, 6), (2, 3), (4, 5)]),
        product=_sparse(pr),
        name=f"ga_dim6({format_rational(a)})",
        basis_names=("e", "e1", "e2", "e3", "e4", "d"),
    )
    return Fixture(alg.name, alg, Expected(True, None, (4, 2), "(4,2)", False, True),
                   Matrix.identity(6), f"double_extension(g3_dim4, D_a({format_rational(a)}))")


def model(n: int = 1) -> Fixture:
    n = int(n)
    return Fixture(f"model({n})", _model(n), Expected(True, None, (2 * n, 0), None, True, True))


def twisted_g3_R2n(n: int = 1, T: Sequence | None = None, a=1) -> Fixture:
    """g3 + R^{2n} with theta = 0 and rho(f_k) = T_k D_a."""
    n = int(n)
    T = [as_rational(t) for t in (T if T is not None else [1] + [0] * (2 * n - 1))]
    if len(T) != 2 * n:
        raise ValueError(f"T needs {2 * n} entries")
    a = as_rational(a)
    D = d_a(a)
    N = 4 + 2 * n
    br = dict(_g3_brackets_full())
    pr = dict(_g3_product())
    for k in range(2 * n):
        if not T[k]:
            continue
        for col in range(4):
            image = [(r + 1, T[k] * D[r, col]) for r in range(4) if D[r, col]]
            if image:
                br[(col + 1, 5 + k)] = [(kk, -c) for kk, c in image]   # [e_j, f_k] = -T_k D(e_j)
                pr[(5 + k, col + 1)] = image                         # f_k . e_j = T_k D(e_j)
    w = _wedge(N, [(1, 2, 1), (3, 4, -1)] + [(5 + k, 5 + n + k, 1) for k in range(n)])
    jm = _complex(N, [(1, 2), (3, 4)] + [(5 + k, 5 + n + k) for k in range(n)])
    tag = ",".join(format_rational(t) for t in T)
    alg = SpecialKahlerAlgebra.build(
        N, brackets=_sparse(br), omega=w, j=jm, product=_sparse(pr),
        name=f"twisted_g3_R2n({n})" if (T == [1] + [0] * (2 * n - 1) and a == 1)
        else f"twisted_g3_R2n({n},[{tag}],{format_rational(a)})",
        basis_names=("e1", "e2", "e3", "e4") + tuple(f"f{k}" for k in range(1, 2 * n + 1)),
    )
    return Fixture(alg.name, alg, Expected(True, None, (2 * n + 2, 2), f"(2,{2 * n + 2})", False, True),
                   Matrix.identity(N), f"twisted_product(g3_dim4, model({n}), theta=0, rho=T*D_a)")


def dext_model_J0(n: int = 1) -> Fixture:
    """Double extension of the model by D = J_0 in the source ordering (d, R^{2n}, e)."""
    n = int(n)
    N = 2 * n + 2
    br = {}
    pr = {}
    for k in range(1, 2 * n + 1):
        # J_0 e_k = e_{n+k} for k <= n, J_0 e_{n+k} = -e_k; shifted by one
        img = (k + n + 1, 1) if k <= n else (k - n + 1, -1)
        br[(1, k + 1)] = [img]
        pr[(1, k + 1)] = [img]
    w = _wedge(N, [(1 + k, 1 + n + k, 1) for k in range(1, n + 1)] + [(1, N, -1)])
    jm = _complex(N, [(1 + k, 1 + n + k) for k in range(1, n + 1)] + [(N, 1)])
    alg = SpecialKahlerAlgebra.build(N, brackets=_sparse(br), omega=w, j=jm, product=_sparse(pr),
                                     name=f"dext_model_J0({n})")
    # construction order is (e, R^{2n}, d): source e_1 = d is old index N-1, source e_N = e is old 0
    cols = [[1 if r == N - 1 else 0 for r in range(N)]]
    cols += [[1 if r == k else 0 for r in range(N)] for k in range(1, N - 1)]
    cols += [[1 if r == 0 else 0 for r in range(N)]]
    return Fixture(alg.name, alg, Expected(True, None, (N, 0), "Riemannian", True, True),
                   Matrix.from_columns(cols), f"double_extension(model({n}), J_0)",
                   "algebra-level omega restricts to omega_0 on R^{2n}")


# ---------------------------------------------------------------- negative examples

_NEG_OMEGA = [[0, 1], [-1, 0]]
_NEG_J = [[0, -1], [1, 0]]


def neg_r2_connection() -> Fixture:
    a = SpecialKahlerAlgebra.build(2, omega=_NEG_OMEGA, j=_NEG_J,
                                   product={(0, 0): {1: 1}}, name="neg_r2_connection")
    return Fixture(a.name, a, Expected(False, "one_cocycle", (2, 0)))


def neg_affR_1() -> Fixture:
    a = SpecialKahlerAlgebra.build(2, brackets={(0, 1): {1: 1}}, omega=_NEG_OMEGA, j=_NEG_J,
                                   product={(0, 0): {0: -1}, (0, 1): {1: 1}}, name="neg_affR_1")
    return Fixture(a.name, a, Expected(False, "one_cocycle", (2, 0)))


def neg_affR_2() -> Fixture:
    h = Fraction(1, 2)
    a = SpecialKahlerAlgebra.build(2, brackets={(0, 1): {1: 1}}, omega=_NEG_OMEGA, j=_NEG_J,
                                   product={(0, 0): {0: -h}, (0, 1): {1: h}, (1, 0): {1: -h}},
                                   name="neg_affR_2")
    return Fixture(a.name, a, Expected(False, "one_cocycle", (2, 0)))


# ---------------------------------------------------------------- metric Lie algebras

def affR_lorentz() -> Fixture:
    g = LieAlgebraData.from_brackets(2, {(0, 1): {1: 1}})
    k = BilinearFormData(2, Matrix.from_rows([[0, 1], [1, 0]]), "symmetric")
    return Fixture("affR_lorentz", MetricLieAlgebra(g, k, "affR_lorentz"),
                   Expected(complete=False), notes="k_1 at the identity in the frame (x d/dx, x d/dy)")


def h3_lorentz() -> Fixture:
    g = LieAlgebraData.from_brackets(3, {(0, 1): {2: 1}})
    k = BilinearFormData(3, Matrix.from_rows([[0, 0, 1], [0, 1, 0], [1, 0, 0]]), "symmetric")
    return Fixture("h3_lorentz", MetricLieAlgebra(g, k, "h3_lorentz"),
                   Expected(complete=True),
                   notes="k_2 at the identity; frame from (x,y,z)(x',y',z') = (x+x', y+y', z+z'+xy')")


# ---------------------------------------------------------------- registry

_REGISTRY: dict[str, Callable[..., Fixture]] = {
    "affR_lorentz": affR_lorentz,
    "dext_model_J0": dext_model_J0,
    "g1_dim4": g1_dim4,
    "g2_dim6": g2_dim6,
    "g3_dim4": g3_dim4,
    "ga_dim6": ga_dim6,
    "h3_lorentz": h3_lorentz,
    "model": model,
    "neg_affR_1": neg_affR_1,
    "neg_affR_2": neg_affR_2,
    "neg_r2_connection": neg_r2_connection,
    "twisted_g3_R2n": twisted_g3_R2n,
}

PARAMETRIC = ("dext_model_J0", "ga_dim6", "model", "twisted_g3_R2n")

_CALL_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\((.*)\))?\s*$")


def _split_args(text: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            out.append(cur.strip())
            cur = ""
        else:
            cur += ch
    if cur.strip():
        out.append(cur.strip())
    return out


def _parse_arg(text: str):
    if text.startswith("["):
        if not text.endswith("]"):
            raise ParseError(f"unbalanced list argument {text!r}")
        return [as_rational(x.strip()) for x in text[1:-1].split(",") if x.strip()]
    q = as_rational(text)
    return int(q) if q.denominator == 1 else q


def get(name: str, *args, **kwargs) -> Fixture:
    """Look up a fixture; parametric ones accept ``"ga_dim6(7/3)"`` style names."""
    m = _CALL_RE.match(name)
    if not m or m.group(1) not in _REGISTRY:
        raise UnknownFixture(name)
    base, argtext = m.group(1), m.group(2)
    if argtext:
        if base not in PARAMETRIC:
            raise UnknownFixture(f"{base} takes no parameters")
        args = tuple(_parse_arg(a) for a in _split_args(argtext)) + args
    return _REGISTRY[base](*args, **kwargs)


def list_names() -> list[str]:
    return sorted(_REGISTRY)


# the registry API is spelled ``fixtures.list()``
list = list_names  # noqa: A001

# names exported as files next to the package
SHIPPED = (
    "g1_dim4", "g2_dim6", "g3_dim4",
    "ga_dim6(0)", "ga_dim6(1)", "ga_dim6(-2)", "ga_dim6(7/3)",
    "model(1)", "model(2)", "model(3)",
    "twisted_g3_R2n(1)", "twisted_g3_R2n(2)",
    "dext_model_J0(1)", "dext_model_J0(2)",
    "neg_r2_connection", "neg_affR_1", "neg_affR_2",
    "affR_lorentz", "h3_lorentz",
)


def file_stem(name: str) -> str:
    """``"ga_dim6(7/3)"`` -> ``"ga_dim6_7_3"``; ``"ga_dim6(-2)"`` -> ``"ga_dim6_m2"``."""
    s = name.replace("-", "m")
    s = re.sub(r"[^A-Za-z0-9_]+", "_", s)
    return s.strip("_")
