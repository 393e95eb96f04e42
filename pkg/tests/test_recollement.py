import numpy as np
import pytest

from gluecat.algebra import Quiver, path_algebra
from gluecat.complexes import cone, homology_dims, stalk_complex
from gluecat.field import PrimeField
from gluecat.modules import projective_module, regular_module, simple_module
from gluecat.recollement import (
    FunctorExpr,
    NotStratifyingError,
    TagMismatchError,
    build_recollement,
    default_menus,
    original_diagram,
    primitive_adjunctions,
    verify_axioms,
)

from oracles import paths_between_sets, paths_through, paths_with_source, paths_with_target


@pytest.fixture(scope="module")
def rec_f1():
    gf = PrimeField(32003)
    a = path_algebra(Quiver(2, ((0, 1),)), gf)
    return build_recollement(a, [1], seed=17)


@pytest.fixture(scope="module")
def rec_f2():
    gf = PrimeField(32003)
    a = path_algebra(Quiver(3, ((0, 1), (1, 2))), gf)
    return build_recollement(a, [2], seed=17)


@pytest.fixture(scope="module")
def rec_f3():
    gf = PrimeField(32003)
    a = path_algebra(Quiver(2, ((0, 1), (0, 1))), gf)
    return build_recollement(a, [1], seed=17)


# ----------------------------------------------------------------------
# construction
# ----------------------------------------------------------------------


def test_f1_builder_dimensions(rec_f1):
    arrows = [(0, 1)]
    assert rec_f1.quotient_algebra.dim == 1
    assert rec_f1.corner_algebra.dim == len(paths_between_sets(2, arrows, [1], [1])) == 1
    assert rec_f1.eA_rows.shape[0] == len(paths_with_target(2, arrows, 1)) == 2
    assert rec_f1.Ae_rows.shape[0] == len(paths_with_source(2, arrows, 1)) == 1
    assert rec_f1.ideal_rows.shape[0] == len(paths_through(2, arrows, [1])) == 2
    assert rec_f1.stratifying_certificate.certified


def test_f2_builder_dimensions(rec_f2):
    assert rec_f2.quotient_algebra.dim == 3
    assert rec_f2.corner_algebra.dim == 1
    assert rec_f2.global_dimensions == {"A": 1, "B": 1, "C": 0}


def test_f3_builder_dimensions(rec_f3):
    arrows = [(0, 1), (0, 1)]
    assert rec_f3.eA_rows.shape[0] == len(paths_with_target(2, arrows, 1)) == 3
    assert rec_f3.Ae_rows.shape[0] == 1
    assert rec_f3.ideal_rows.shape[0] == len(paths_through(2, arrows, [1])) == 3


def test_middle_vertex_of_a3_is_stratifying(alg_a3):
    # hereditary algebras have stratifying idempotent ideals, even for
    # vertex sets that are not successor-closed
    rec = build_recollement(alg_a3, [1], seed=3)
    assert rec.stratifying_certificate.certified


def test_non_stratifying_algebra_is_rejected():
    # kA_3 with the relation (2->3)(1->2) = 0, e at the middle vertex:
    # Ae (x)_C eA has dimension 4 but AeA only 3
    from gluecat.algebra import Algebra

    gf = PrimeField(32003)
    labels = ["e1", "e2", "e3", "a", "b"]
    mul = np.zeros((5, 5, 5), dtype=np.int64)
    for i in range(3):
        mul[i, i, i] = 1
    mul[1, 3, 3] = 1  # e2 * a = a
    mul[3, 0, 3] = 1  # a * e1 = a
    mul[2, 4, 4] = 1  # e3 * b = b
    mul[4, 1, 4] = 1  # b * e2 = b
    unit = np.array([1, 1, 1, 0, 0], dtype=np.int64)
    a = Algebra(gf, labels, mul, unit, [0, 1, 2], name="kA3/(ba)")
    with pytest.raises(NotStratifyingError):
        build_recollement(a, [1], seed=3)


# ----------------------------------------------------------------------
# functor evaluation
# ----------------------------------------------------------------------


def test_jstar_on_projectives(rec_f1):
    a = rec_f1.algebra
    p2 = stalk_complex(projective_module(a, 1)[0])
    p1 = stalk_complex(projective_module(a, 0)[0])
    out2 = rec_f1.functor("j^*").apply(p2)
    out1 = rec_f1.functor("j^*").apply(p1)
    assert homology_dims(out2) == {0: 1}
    assert homology_dims(out1) == {}


def test_istar_on_projectives(rec_f1):
    a = rec_f1.algebra
    p1 = stalk_complex(projective_module(a, 0)[0])
    p2 = stalk_complex(projective_module(a, 1)[0])
    assert homology_dims(rec_f1.functor("i^*").apply(p1)) == {0: 1}
    assert homology_dims(rec_f1.functor("i^*").apply(p2)) == {}


def test_jlower_shriek_of_regular_corner(rec_f1):
    c_reg = stalk_complex(regular_module(rec_f1.corner_algebra))
    out = rec_f1.functor("j_!").apply(c_reg)
    # j_! C = eA = P2
    assert homology_dims(out) == {0: 2}


def test_istar_lower_restriction(rec_f1):
    b_reg = stalk_complex(regular_module(rec_f1.quotient_algebra))
    out = rec_f1.functor("i_*").apply(b_reg)
    assert out.algebra is rec_f1.algebra
    assert homology_dims(out) == {0: 1}


def test_tag_mismatch_rejected(rec_f1):
    b_reg = stalk_complex(regular_module(rec_f1.quotient_algebra))
    with pytest.raises(TagMismatchError):
        rec_f1.apply_expr(FunctorExpr(("j^*",)), b_reg)
    with pytest.raises(TagMismatchError):
        FunctorExpr(("i_*", "j_!")).signature(rec_f1.registry)


def test_ishriek_and_jstar_compose(rec_f2):
    # j^* i_* = 0 on the regular B-module
    b_reg = stalk_complex(regular_module(rec_f2.quotient_algebra))
    out = rec_f2.apply_expr(FunctorExpr(("i_*", "j^*")), b_reg)
    assert homology_dims(out) == {}


def test_ishriek_output_injective_flag(rec_f2):
    a = rec_f2.algebra
    p3 = stalk_complex(projective_module(a, 2)[0])
    out = rec_f2.functor("i^!").apply(p3)
    assert out.injective_terms


# ----------------------------------------------------------------------
# adjunction providers
# ----------------------------------------------------------------------


def _roundtrip_check(provider, x, y):
    ctx = provider.ctx
    fld = x.field
    fwd = provider.forward_matrix(x, y)
    bwd = provider.backward_matrix(x, y)
    assert fwd.shape[0] == fwd.shape[1], (provider.name, fwd.shape)
    assert np.array_equal(fld.matmul(fwd, bwd), fld.identity(fwd.shape[0]))
    assert np.array_equal(fld.matmul(bwd, fwd), fld.identity(bwd.shape[0]))
    lhs = ctx.derived_hom_dims(provider.F_apply(x), y)
    rhs = ctx.derived_hom_dims(x, provider.G_apply(y))
    assert lhs == rhs


def test_star_pullback_adjunction_f1(rec_f1):
    providers = primitive_adjunctions(rec_f1)
    prov = providers["(i^*, i_*)"]
    a = rec_f1.algebra
    p1 = stalk_complex(projective_module(a, 0)[0], name="P1")
    b_reg = stalk_complex(regular_module(rec_f1.quotient_algebra), name="B")
    lhs = rec_f1.ctx.derived_hom_dims(prov.F_apply(p1), b_reg)
    assert lhs.get(0, 0) == 1
    _roundtrip_check(prov, p1, b_reg)


def test_shriek_pullback_adjunction_f1(rec_f1):
    providers = primitive_adjunctions(rec_f1)
    prov = providers["(j_!, j^*)"]
    a = rec_f1.algebra
    c_reg = stalk_complex(regular_module(rec_f1.corner_algebra), name="C")
    p2 = stalk_complex(projective_module(a, 1)[0], name="P2")
    lhs = rec_f1.ctx.derived_hom_dims(prov.F_apply(c_reg), p2)
    rhs = rec_f1.ctx.derived_hom_dims(c_reg, prov.G_apply(p2))
    assert lhs.get(0, 0) == 1 and rhs.get(0, 0) == 1
    _roundtrip_check(prov, c_reg, p2)


def test_push_shriek_adjunction_f1(rec_f1):
    providers = primitive_adjunctions(rec_f1)
    prov = providers["(i_*, i^!)"]
    b_reg = stalk_complex(regular_module(rec_f1.quotient_algebra), name="B")
    a = rec_f1.algebra
    for v in range(2):
        p = stalk_complex(projective_module(a, v)[0], name=f"P{v+1}")
        _roundtrip_check(prov, b_reg, p)


def test_star_push_adjunction_f1(rec_f1):
    providers = primitive_adjunctions(rec_f1)
    prov = providers["(j^*, j_*)"]
    c_reg = stalk_complex(regular_module(rec_f1.corner_algebra), name="C")
    a = rec_f1.algebra
    for v in range(2):
        p = stalk_complex(projective_module(a, v)[0], name=f"P{v+1}")
        _roundtrip_check(prov, p, c_reg)


def test_all_adjunctions_f2_simple_objects(rec_f2):
    providers = primitive_adjunctions(rec_f2)
    a = rec_f2.algebra
    b, c = rec_f2.quotient_algebra, rec_f2.corner_algebra
    xa = stalk_complex(simple_module(a, 1), name="S2")
    xb = stalk_complex(simple_module(b, 0), name="S1B")
    xc = stalk_complex(regular_module(c), name="C")
    _roundtrip_check(providers["(i^*, i_*)"], xa, xb)
    _roundtrip_check(providers["(i_*, i^!)"], xb, xa)
    _roundtrip_check(providers["(j_!, j^*)"], xc, xa)
    _roundtrip_check(providers["(j^*, j_*)"], xa, xc)


def test_unit_of_jstar_push_on_p1_is_zero(rec_f1):
    # j^* P1 = 0, so the unit P1 -> j_* j^* P1 lands in a zero complex
    providers = primitive_adjunctions(rec_f1)
    prov = providers["(j^*, j_*)"]
    a = rec_f1.algebra
    p1 = stalk_complex(projective_module(a, 0)[0], name="P1")
    eta = prov.unit(p1)
    assert eta.map.is_zero()
    assert prov.G_apply(prov.F_apply(p1)).is_zero()


def test_counit_of_istar_pullback_certifies(rec_f1):
    providers = primitive_adjunctions(rec_f1)
    prov = providers["(i^*, i_*)"]
    b_reg = stalk_complex(regular_module(rec_f1.quotient_algebra), name="B")
    eps = prov.counit(b_reg)
    cert = rec_f1.ctx.certificate_for_map(eps.map)
    assert cert.certified


def test_triangle_cone_matches_third_vertex(rec_f1):
    # cone(j_! j^* X -> X) is i_* i^* X for X = P2
    providers = primitive_adjunctions(rec_f1)
    prov = providers["(j_!, j^*)"]
    a = rec_f1.algebra
    p2 = stalk_complex(projective_module(a, 1)[0], name="P2")
    eps = prov.counit(p2)
    third = rec_f1.apply_expr(FunctorExpr(("i^*", "i_*")), p2)
    c = cone(eps.map)
    assert homology_dims(c) == homology_dims(third)
    cert = rec_f1.ctx.derived_iso_certificate(c, third, seed=5)
    assert cert.certified


# ----------------------------------------------------------------------
# verify_axioms on the original diagram
# ----------------------------------------------------------------------


@pytest.mark.parametrize("fixture_name", ["rec_f1", "rec_f2", "rec_f3"])
def test_original_recollement_axioms(request, fixture_name):
    rec = request.getfixturevalue(fixture_name)
    diagram = original_diagram(rec)
    menus = default_menus(rec)
    for tag in ("A", "B", "C"):
        assert len(menus[tag]) >= 6
    report = verify_axioms(diagram, menus, seed=11)
    bad = [c for c in report.cells if c.verdict != "pass"]
    assert not bad, [f"{c.axiom} {c.objects} {c.note}: {c.actual}" for c in bad[:8]]


def test_corrupted_diagram_fails_r11(rec_f2):
    # swap i^* and i^! (keeping dimension-only checks) and expect an
    # R1.1 dimension mismatch somewhere on the menu
    diagram = original_diagram(rec_f2)
    diagram.pairs["P1"].F, diagram.pairs["P1"].provider = diagram.emb_right, None
    diagram.pairs["P2"].G, diagram.pairs["P2"].provider = diagram.emb_left, None
    menus = default_menus(rec_f2)
    report = verify_axioms(diagram, menus, seed=11)
    r11_fail = [c for c in report.cells if c.axiom == "R1.1" and c.verdict == "fail"]
    assert r11_fail


def test_convenience_wrappers(rec_f1):
    from gluecat.recollement import primitive_adjunction_iso, unit_counit
    from gluecat.complexes import projective_resolution

    a = rec_f1.algebra
    c_reg = stalk_complex(regular_module(rec_f1.corner_algebra), name="C")
    p2 = stalk_complex(projective_module(a, 1)[0], name="P2")
    m = primitive_adjunction_iso(rec_f1, "(j_!, j^*)", c_reg, p2)
    assert m.shape == (1, 1) and m[0, 0] != 0
    eta = unit_counit(rec_f1, "(i^*, i_*)", stalk_complex(projective_module(a, 0)[0]), "unit")
    assert eta.map is not None
    s2 = simple_module(a, 1)
    res, aug = projective_resolution(s2, cap=4)
    assert res.lo == -1 and res.hi == 0
    aug.validate()


def test_composite_iso_wrapper(rec_f1):
    from gluecat.reflect import composite_adjunction_iso
    from gluecat.serre import attach_serre

    sd = attach_serre(rec_f1)
    b_reg = stalk_complex(regular_module(rec_f1.quotient_algebra), name="B")
    p1 = stalk_complex(projective_module(rec_f1.algebra, 0)[0], name="P1")
    m = composite_adjunction_iso(sd, "(i_!, i^*)", b_reg, p1)
    assert m.shape == (1, 1) and m[0, 0] != 0


def test_triangle_euler_additivity(rec_f1):
    # per-degree alternating sums of j_! j^* X, X, i_* i^* X agree
    from gluecat.complexes import euler_characteristic
    from gluecat.recollement import default_menus

    menus = default_menus(rec_f1)
    for xn, x in menus["A"]:
        left = rec_f1.apply_expr(FunctorExpr(("j^*", "j_!")), x)
        right = rec_f1.apply_expr(FunctorExpr(("i^*", "i_*")), x)
        assert euler_characteristic(left) + euler_characteristic(right) == euler_characteristic(x), xn


def test_embedding_fully_faithful_at_dimension_level(rec_f2):
    from gluecat.recollement import default_menu

    ctx = rec_f2.ctx
    istar = rec_f2.functor("i_*")
    menu_b = default_menu(rec_f2, "B")
    for xn, x in menu_b:
        for yn, y in menu_b:
            upstairs = ctx.derived_hom_dims(istar.apply(x), istar.apply(y))
            downstairs = ctx.derived_hom_dims(x, y)
            assert upstairs == downstairs, (xn, yn)


def test_unit_at_zero_object_is_zero(rec_f1):
    from gluecat.complexes import zero_complex

    prov = primitive_adjunctions(rec_f1)["(i^*, i_*)"]
    eta = prov.unit(zero_complex(rec_f1.algebra))
    assert eta.map.is_zero()
