import pytest

from wsa.algebra import build_algebra
from wsa.homology import (
    NotPeriodic4,
    NotVirtualBar,
    SingularAlgebraDetected,
    ZeroModule,
    check_period4,
    detect_singular,
    omega,
    phi_element,
    projective,
    projective_cover,
    resolve,
    simple,
)
from wsa.presentation import singular_configurations

from conftest import SMALL, algebra, presentation, triangle


def test_simple_and_projective_dimensions(AT):
    assert simple(AT, "1").dim_vector() == {"1": 1, "2": 0, "3": 0}
    P1 = projective(AT, "1")
    assert P1.dim == 6
    assert simple(AT, "1").check_representation()
    assert P1.check_representation()


@pytest.mark.parametrize("name", SMALL)
def test_projectives_are_representations(name):
    A = algebra(name)
    for v in A.tq.vertices:
        P = projective(A, v)
        assert P.check_representation()
        assert P.dim == A.projective_dims()[v]


def test_cover_of_simple_is_the_projective(AT):
    step = projective_cover(simple(AT, "2"))
    assert step.cover.summands == ["2"]
    assert step.kernel.dim == AT.projective_dims()["2"] - 1


def test_projective_has_no_syzygy(AT):
    assert omega(projective(AT, "3")).dim == 0


def test_zero_module_has_no_cover(AT):
    with pytest.raises(ZeroModule):
        projective_cover(omega(projective(AT, "1")))


def test_cover_of_first_syzygy_in_triangle(AT):
    om1 = omega(simple(AT, "1"))
    assert projective_cover(om1).cover.summands == ["2"]


def test_second_syzygy_dimension_in_triangle(T, AT):
    assert omega(simple(AT, "1"), 2).dim == T.mn("alpha") - 1 == 3


@pytest.mark.parametrize("name", SMALL)
def test_resolutions_are_certified(name):
    A = algebra(name)
    for v in A.tq.vertices:
        res = resolve(simple(A, v), 5)
        assert res.certificate == {"d_squared_zero": True, "exact": True, "minimal": True}
        assert all(st.kernel.check_representation() for st in res.steps[:2])


def test_period_four_in_triangle(AT):
    rep = check_period4(AT, "1")
    assert rep.setting == "virtual-loop"
    assert rep.omega4_simple and rep.passed
    assert rep.terms[1] == ["2"] and rep.terms[2] == ["2"]
    assert rep.syzygy_dims[1] == 3
    assert rep.checks["phi-annihilation"] and rep.checks["phi-generates-omega2"]


def test_phi_element_in_triangle(T, AT):
    phi, a, ab = phi_element(AT, "1")
    assert (a, ab) == ("alpha", "abar")
    assert (phi * AT.path(T.tq.f["alpha"])).is_zero()
    with pytest.raises(NotVirtualBar):
        phi_element(AT, "2")


def test_period_four_in_sphere(S, AS):
    verts = [v for v in S.vertices if any(S.is_virtual(a) for a in S.tq.quiver.out_arrows(v))]
    assert verts
    for v in verts:
        rep = check_period4(AS, v)
        assert rep.setting == "virtual-arrow"
        assert rep.passed and rep.omega4_simple
        phi, a, ab = phi_element(AS, v)
        assert (phi * AS.path(S.tq.f[S.tq.f[ab]])).is_zero()
        assert rep.syzygy_dims[1] == S.mn(S.tq.f[a]) - 1
        j, y = S.tq.t(a), S.tq.t(S.tq.f[ab])
        assert rep.terms[1] == [j] and rep.terms[2] == [y]


@pytest.mark.parametrize("name", SMALL)
def test_every_simple_has_period_four(name):
    A = algebra(name)
    for v in A.tq.vertices:
        rep = check_period4(A, v)
        assert rep.omega4_simple


def test_singular_triangle_is_detected():
    A = build_algebra(triangle(1, 1, 1))
    with pytest.raises(SingularAlgebraDetected) as err:
        check_period4(A, "1")
    assert not err.value.report.omega4_simple
    rep = check_period4(A, "1", raise_on_failure=False)
    assert not rep.passed and rep.singular


def test_singular_classification():
    found = detect_singular(triangle(1, 1, 1))
    assert sorted((x.kind, x.vertex, x.status) for x in found) == [
        ("triangle", "1", "SINGULAR"), ("triangle", "3", "SINGULAR")]
    regular = detect_singular(triangle(1, 2, 1))
    assert {x.status for x in regular} == {"REGULAR"}
    assert {x.scalar for x in regular} == {98}      # 1 - 4 = -3 over F_101
    assert detect_singular(presentation("GLUED(1)")) == []


def test_singular_sphere_is_detected(S):
    (cfg, *_) = singular_configurations(S)
    F = S.field
    # choose c on the fourth cycle so the unit scalar vanishes
    c = dict(S.cycle_parameters())
    others = F.mul(F.mul(S.c[cfg.abar], S.c[cfg.alpha]), S.c[S.tq.f[S.tq.g[cfg.alpha]]])
    target = S.tq.g_cycles.representative(S.tq.f[cfg.alpha])
    c[target] = F.inv(others)
    bad = S.with_parameters({target: c[target]})
    assert any(x.status == "SINGULAR" and x.vertex == cfg.vertex for x in detect_singular(bad))
    A = build_algebra(bad)
    with pytest.raises((SingularAlgebraDetected, NotPeriodic4)):
        check_period4(A, cfg.vertex)
