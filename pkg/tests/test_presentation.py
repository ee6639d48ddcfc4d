import pytest

from wsa.field import FieldSpec
from wsa.presentation import (
    XI_CLAUSE_F_VIRTUAL,
    ZETA_CLAUSE_F2_VIRTUAL,
    ZETA_CLAUSE_SHORT_BAR,
    AssumptionViolated,
    PathIllFormed,
    WeightedPresentation,
    exception_equivalence,
    extra_socle_configurations,
    gabriel_quiver,
    generate_relations,
    generic_parameters,
    make_path,
    opposite,
    singular_configurations,
    xi_case,
    xi_exception,
    xi_to_opposite_zeta,
    zeta_case,
    zeta_exception,
)
from wsa.quiver import InvalidWeights, catalog, make_triangulation_quiver

from conftest import CATALOG, presentation, triangle


def test_distinguished_paths_in_triangle(T):
    assert T.B("abar").arrows == ("abar", "abar")
    assert T.A("abar").arrows == ("abar",)
    assert T.B("alpha").arrows == ("alpha", "gamma", "delta", "beta")
    assert T.A("alpha").arrows == ("alpha", "gamma", "delta")


@pytest.mark.parametrize("name", CATALOG)
def test_distinguished_path_shapes(name):
    pres = presentation(name)
    for a in pres.arrows:
        B, A = pres.B(a), pres.A(a)
        assert len(A) == len(B) - 1 == pres.mn(a) - 1
        assert B.source == B.target == pres.tq.s(a)
        assert B.arrows[:-1] == A.arrows


def test_path_composition_and_errors(T):
    p = make_path(T.tq, "alpha*beta")
    assert (p.source, p.target, len(p)) == ("1", "1", 2)
    assert str(p * make_path(T.tq, ["abar"])) == "alpha*beta*abar"
    assert str(make_path(T.tq, [], source="2")) == "e_2"
    with pytest.raises(PathIllFormed):
        make_path(T.tq, "alpha*gamma*alpha")
    with pytest.raises(PathIllFormed):
        make_path(T.tq, ["alpha"]) * make_path(T.tq, ["alpha"])


def test_parameters_are_per_cycle_and_nonzero():
    tq, m = catalog("T")
    pres = WeightedPresentation(tq, m, {"abar": 3, "gamma": 5, "eps": 7})
    assert {pres.c[a] for a in ("alpha", "beta", "gamma", "delta")} == {5}
    with pytest.raises(InvalidWeights):
        WeightedPresentation(tq, m, {"abar": 0, "alpha": 5, "eps": 7})
    with pytest.raises(InvalidWeights):
        WeightedPresentation(tq, m, {"abar": 1, "alpha": 1})


def test_assumption_checked_at_construction():
    tq = make_triangulation_quiver(
        ["1", "2"],
        [("abar", "1", "1"), ("alpha", "1", "2"), ("beta", "2", "1"), ("gamma", "2", "2")],
        [("abar", "alpha", "beta"), ("gamma",)])
    with pytest.raises(AssumptionViolated) as err:
        WeightedPresentation(tq, {"abar": 2, "alpha": 1}, {"abar": 1, "alpha": 1})
    assert err.value.violations[0].clause == 3
    pres = WeightedPresentation(tq, {"abar": 2, "alpha": 1}, {"abar": 1, "alpha": 1}, check=False)
    assert pres.violations


def test_triangle_commutativity_relation(T):
    rels = generate_relations(T)
    (rel,) = [r for r in rels.commutativity if r.arrow == "alpha"]
    F = T.field
    assert [(c, p.arrows) for c, p in rel.terms] == [(1, ("alpha", "beta")), (F.neg(T.c["abar"]), ("abar",))]


def test_triangle_exceptions(T):
    rels = generate_relations(T)
    assert rels.exceptions == {
        ("zeta", "alpha"): ZETA_CLAUSE_F2_VIRTUAL,
        ("zeta", "delta"): ZETA_CLAUSE_F2_VIRTUAL,
        ("xi", "beta"): XI_CLAUSE_F_VIRTUAL,
        ("xi", "gamma"): XI_CLAUSE_F_VIRTUAL,
    }
    # f^2(beta) = alpha is not virtual, so the zeta monomial of beta is a relation
    assert zeta_exception(T, "beta") is None
    assert ("beta", "abar", "abar") in rels.zero_monomials()


def test_glued_short_cycle_clause():
    pres = presentation("GLUED(1)")
    hits = [a for a in pres.arrows if zeta_exception(pres, a) == ZETA_CLAUSE_SHORT_BAR]
    assert hits == ["fbeta1"]
    ab = pres.tq.bar["fbeta1"]
    assert pres.m[ab] == 1 and pres.n(ab) == 3 and pres.is_virtual(pres.tq.f[ab])
    assert zeta_case(pres, "fbeta1") == "b"


@pytest.mark.parametrize("name", CATALOG)
def test_relation_counts(name):
    pres = presentation(name)
    rels = generate_relations(pres)
    k = len(pres.arrows)
    assert len(rels.commutativity) == k
    assert len(rels.zeta) + sum(1 for kind, _ in rels.exceptions if kind == "zeta") == k
    assert len(rels.xi) + sum(1 for kind, _ in rels.exceptions if kind == "xi") == k


@pytest.mark.parametrize("name", CATALOG)
def test_clauses_match_product_hypotheses(name):
    pres = presentation(name)
    checks = exception_equivalence(pres)
    assert len(checks) == len(pres.arrows)
    assert all(c.passed for c in checks), [c.detail for c in checks if not c.passed]


def test_gabriel_quivers():
    gT = gabriel_quiver(presentation("T"))
    assert (len(gT.vertices), len(gT.arrows)) == (3, 4)
    assert {a.id for a in gT.arrows} == {"alpha", "beta", "gamma", "delta"}
    gS = gabriel_quiver(presentation("S"))
    assert (len(gS.vertices), len(gS.arrows)) == (6, 8)


def test_gabriel_quiver_without_virtual_arrows_is_unchanged():
    tq, m = catalog("T")
    pres = WeightedPresentation(tq, {"abar": 3, "alpha": 1, "eps": 3}, {"abar": 1, "alpha": 2, "eps": 3})
    assert not pres.virtual
    assert gabriel_quiver(pres) == tq.quiver


@pytest.mark.parametrize("name", CATALOG)
def test_opposite_exceptions_correspond(name):
    pres = presentation(name)
    op = opposite(pres)
    for a in pres.arrows:
        y = xi_to_opposite_zeta(pres, a)
        assert (xi_exception(pres, a) is None) == (zeta_exception(op, y) is None)
        assert (xi_case(pres, a) is None) == (zeta_case(op, y) is None)
        assert tuple(reversed(op.path([y, op.tq.f[y], op.tq.g[op.tq.f[y]]]).arrows)) == \
            (a, pres.tq.g[a], pres.tq.f[pres.tq.g[a]])


def test_opposite_twice_is_the_original():
    pres = presentation("S")
    back = opposite(opposite(pres))
    assert back.tq == pres.tq and back.m == pres.m and back.c == pres.c


def test_triangle_has_one_extra_socle_configuration():
    configs = extra_socle_configurations(triangle(1, 2, 1))
    assert [(c.vertex, c.degenerate) for c in configs] == [("2", False)]
    assert extra_socle_configurations(triangle(1, 1, 1))[0].degenerate


def test_singular_triangle_scalar():
    F = FieldSpec(101)
    sing = singular_configurations(triangle(1, 1, 1))
    assert sorted((s.kind, s.vertex, s.scalar) for s in sing) == [("triangle", "1", 0), ("triangle", "3", 0)]
    regular = singular_configurations(triangle(1, 2, 1))
    assert all(s.scalar == F(-3) for s in regular)


def test_no_singular_configuration_in_glued():
    assert singular_configurations(presentation("GLUED(1)")) == []


def test_spherical_has_singular_configurations(S):
    kinds = {s.kind for s in singular_configurations(S)}
    assert kinds == {"spherical"}


def test_generic_parameters_avoid_degenerate_loci():
    tq, m = catalog("T")
    for seed in range(20):
        c = generic_parameters(tq, m, seed=seed)
        pres = WeightedPresentation(tq, m, c)
        assert not any(s.scalar == 0 for s in singular_configurations(pres))
        assert not any(x.degenerate for x in extra_socle_configurations(pres))
    assert generic_parameters(tq, m, seed=5) == generic_parameters(tq, m, seed=5)
