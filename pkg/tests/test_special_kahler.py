import pytest
import sympy as sp

from oracles import axioms, from_sym, raw, signature as sig_oracle, sym
from spkahler import fixtures as F
from spkahler.constructions import cotangent_hess, double_extension
from spkahler.errors import DegenerateMetric, DimensionMismatch, NotSubalgebra, OddDimension
from spkahler.exact_linalg import Matrix, Tensor3
from spkahler.special_kahler import (
    BATTERY,
    SpecialKahlerAlgebra,
    Subspace,
    ideal_predicates,
    is_flat_special,
    is_geodesically_complete,
    model,
    omega_perp,
    signature,
    verify_full,
)


def fx(name):
    return F.get(name).data


def test_battery_order():
    rep = verify_full(fx("g1_dim4"))
    assert tuple(it.name for it in rep.items) == BATTERY
    assert len(BATTERY) == 14


def test_verify_g1_certified():
    rep = verify_full(fx("g1_dim4"))
    assert rep.certified and rep.failed() == []
    assert rep.summary().endswith("certified")


def test_verify_negative_affR_1():
    rep = verify_full(fx("neg_affR_1"))
    assert rep.failed() == ["one_cocycle"]
    assert rep.first_failure().name == "one_cocycle"
    assert rep.summary().endswith("NOT certified")


def test_verify_model3():
    assert verify_full(model(3)).certified
    assert model(3) == fx("model(3)")


@pytest.mark.parametrize("name", F.SHIPPED[:17])
def test_verify_agrees_with_oracle(name):
    a = fx(name)
    ax = axioms(*raw(a))
    assert [k for k in BATTERY if not ax[k]] == a.report.failed()


def test_verify_wraps_prerequisite_errors():
    # j^2 != -id: integrability cannot be evaluated, reported as a failure instead of raising
    a = SpecialKahlerAlgebra.build(2, omega=[[0, 1], [-1, 0]], j=[[1, 0], [0, 1]])
    rep = verify_full(a)
    assert not rep.item("complex_structure") and not rep.item("integrable")


def test_construction_errors():
    with pytest.raises(OddDimension):
        SpecialKahlerAlgebra.build(3)
    a = model(1)
    with pytest.raises(DimensionMismatch):
        SpecialKahlerAlgebra(a.lie, fx("model(2)").omega, a.j, a.product)


def test_signatures():
    assert sorted(signature(fx("g2_dim6"))) == [2, 4]
    assert signature(fx("g2_dim6")) == sig_oracle(sym(fx("g2_dim6").metric.matrix))
    for n in (1, 2, 3):
        assert signature(model(n)) == (2 * n, 0)
    for n in (1, 2):
        s = signature(fx(f"twisted_g3_R2n({n})"))
        assert sorted(s) == sorted((2, 2 * n + 2))
        assert s == sig_oracle(sym(fx(f"twisted_g3_R2n({n})").metric.matrix))


def test_signature_degenerate():
    a = SpecialKahlerAlgebra.build(2, omega=[[0, 1], [-1, 0]])
    with pytest.raises(DegenerateMetric):
        signature(a)


def test_flat_special():
    assert is_flat_special(fx("g1_dim4"))
    assert not is_flat_special(fx("g3_dim4"))
    assert is_flat_special(model(2))


def test_complete():
    for a in (0, 1, -2, "7/3"):
        assert is_geodesically_complete(fx(f"ga_dim6({a})"))
    assert not is_geodesically_complete(fx("g1_dim4"))
    assert is_geodesically_complete(model(2))


def test_omega_perp_full():
    a = model(2)
    assert omega_perp(a, Subspace.coordinate(4, range(4))).dim == 0
    assert omega_perp(a, Subspace(4)).dim == 4


def test_omega_perp_in_double_extension():
    g = fx("ga_dim6(1)")   # basis (e, e1..e4, d)
    e = Subspace.coordinate(6, [0])
    perp = omega_perp(g, e)
    assert perp.same_span(Subspace.coordinate(6, range(5)))
    assert not perp.contains([0, 0, 0, 0, 0, 1])


def test_omega_perp_lagrangian_in_cotangent():
    a = cotangent_hess(fx("h3_lorentz"))
    g = Subspace.coordinate(6, [0, 1, 2])
    assert omega_perp(a, g).same_span(g)


def test_omega_perp_is_involution():
    a = fx("g2_dim6")
    s = Subspace.spanned_by(6, [[1, 0, 2, 0, 0, 0], [0, 1, 0, 0, -1, 3]])
    assert omega_perp(a, omega_perp(a, s)).same_span(s)


def test_ideal_predicates_line_in_double_extension():
    g = double_extension(fx("g3_dim4"), F.d_a(1))
    p = ideal_predicates(g, Subspace.coordinate(6, [0]))
    assert p.bilateral and p.left_ideal and p.right_ideal
    assert p.totally_isotropic and not p.complex


def test_ideal_predicates_full_space():
    a = fx("g3_dim4")
    p = ideal_predicates(a, Subspace.coordinate(4, range(4)))
    assert p == (True, True, True, False, True, True)


def test_ideal_predicates_twisted_block():
    a = fx("twisted_g3_R2n(1)")
    p = ideal_predicates(a, Subspace.coordinate(6, [4, 5]))
    assert p.left_ideal and p.complex and p.nondegenerate


def _transport_oracle(a, P):
    C, Pr, W, J = raw(a)
    n = a.dim
    Ps = sym(P)
    Pinv = Ps.inv()

    def t(T):
        Ts = [[sp.Matrix([sp.Rational(x.numerator, x.denominator) for x in T[i][j]]) for j in range(n)]
              for i in range(n)]
        out = [[[0] * n for _ in range(n)] for _ in range(n)]
        for a_ in range(n):
            for b in range(n):
                v = sp.zeros(n, 1)
                for i in range(n):
                    for j in range(n):
                        v += Ps[i, a_] * Ps[j, b] * Ts[i][j]
                w = Pinv * v
                for k in range(n):
                    out[a_][b][k] = str(w[k])
        return Tensor3.from_nested(out)

    return t(C), from_sym(Ps.T * sym(a.omega.matrix) * Ps), from_sym(Pinv * sym(a.j.matrix) * Ps), t(Pr)


def test_change_basis_against_oracle():
    a = fx("g3_dim4")
    P = Matrix.from_rows([[1, 2, 0, 0], [0, 1, 0, 1], [1, 0, 1, 0], [0, 0, 3, 1]])
    b = a.change_basis(P)
    C, W, J, Pr = _transport_oracle(a, P)
    assert b.lie.bracket == C and b.omega.matrix == W and b.j.matrix == J and b.product.product == Pr
    assert b.certified
    assert b.change_basis(from_sym(sym(P).inv())) == a


def test_restrict():
    a = model(2)
    sub = Subspace.coordinate(4, [0, 2])
    assert a.restrict(sub) == model(1)
    with pytest.raises(NotSubalgebra):
        fx("g3_dim4").restrict(Subspace.coordinate(4, [0, 2]))


def test_subspace_rejects_dependent():
    with pytest.raises(ValueError):
        Subspace(3, [[1, 0, 0], [2, 0, 0]])
    s = Subspace.spanned_by(3, [[1, 0, 0], [2, 0, 0], [0, 1, 0]])
    assert s.dim == 2 and s.contains([3, -1, 0]) and not s.contains([0, 0, 1])


def test_equality_and_hash():
    assert model(2) == fx("model(2)")
    assert hash(model(2)) == hash(fx("model(2)"))
    assert model(1) != model(2)
