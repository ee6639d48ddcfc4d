import pytest
from hypothesis import given, settings, strategies as st

from wsa.quiver import (
    FCubeNotIdentity,
    FNotPermutation,
    FTargetMismatch,
    InvalidWeights,
    MalformedQuiver,
    NotConnected,
    NotTwoRegular,
    TooFewVertices,
    UnknownCatalogEntry,
    catalog,
    check_assumptions,
    classify_virtual,
    expand_per_cycle,
    find_qprime_configs,
    generate_glued,
    loops_in_three_cycles,
    make_triangulation_quiver,
    qprime_impossibilities,
    virtual_facts,
)

T_ARROWS = [("abar", "1", "1"), ("alpha", "1", "2"), ("beta", "2", "1"),
            ("gamma", "2", "3"), ("delta", "3", "2"), ("eps", "3", "3")]
T_F = [("abar", "alpha", "beta"), ("gamma", "eps", "delta")]


def triangulation_invariants(tq):
    f, bar, g = tq.f, tq.bar, tq.g
    assert len(tq.arrows) == 2 * len(tq.vertices)
    for a in tq.arrows:
        assert f[f[f[a]]] == a
        assert tq.t(a) == tq.s(f[a])
        assert bar[a] != a and bar[bar[a]] == a and tq.s(bar[a]) == tq.s(a)
        assert g[a] == bar[f[a]]
    for v in tq.vertices:
        assert len(tq.quiver.out_arrows(v)) == 2 and len(tq.quiver.in_arrows(v)) == 2
    assert tq.quiver.is_connected()


def test_triangle_quiver_from_plain_data():
    tq = make_triangulation_quiver(["1", "2", "3"], T_ARROWS, T_F)
    assert len(tq.vertices) == 3 and len(tq.arrows) == 6
    assert tq.f_cycles.cycles == (("abar", "alpha", "beta"), ("delta", "gamma", "eps"))
    triangulation_invariants(tq)


def test_triangle_g_cycles():
    tq, _ = catalog("T")
    assert tq.g_cycles.cycles == (("abar",), ("alpha", "gamma", "delta", "beta"), ("eps",))


def test_spherical_g_cycle_lengths():
    tq, _ = catalog("S")
    assert sorted(len(c) for c in tq.g_cycles.cycles) == [2, 2, 4, 4]


def test_loop_pair_has_virtual_loop_and_virtual_two_cycle():
    tq, m = catalog("LOOP-PAIR")
    virtual = classify_virtual(tq, m)
    assert "abar" in virtual and tq.is_loop("abar")
    assert {"p", "r"} <= virtual and not tq.is_loop("p")


def test_cycles_are_rotation_normalised():
    tq, _ = catalog("S")
    for decomposition in (tq.f_cycles, tq.g_cycles):
        for cyc in decomposition.cycles:
            assert cyc[0] == min(cyc)


def test_retargeted_arrow_rejected():
    arrows = [("alpha", "1", "3") if a[0] == "alpha" else a for a in T_ARROWS]
    with pytest.raises(FTargetMismatch) as err:
        make_triangulation_quiver(["1", "2", "3"], arrows, T_F)
    assert err.value.subject == "alpha"


def test_out_degree_three_rejected():
    arrows = [("a", "1", "1"), ("b", "1", "2"), ("c", "2", "1"),
              ("d", "1", "3"), ("e", "3", "1"), ("h", "2", "2")]
    with pytest.raises(NotTwoRegular) as err:
        make_triangulation_quiver(["1", "2", "3"], arrows, [("d", "e", "a"), ("b", "h", "c")])
    assert err.value.subject == "1"


def test_f_of_order_four_rejected():
    with pytest.raises(FCubeNotIdentity):
        make_triangulation_quiver(["1", "2", "3"], T_ARROWS,
                                  [("alpha", "gamma", "delta", "beta"), ("abar",), ("eps",)])


def test_disconnected_rejected():
    arrows = T_ARROWS + [(a + "2", str(int(s) + 3), str(int(t) + 3)) for a, s, t in T_ARROWS]
    f = T_F + [tuple(a + "2" for a in c) for c in T_F]
    with pytest.raises(NotConnected):
        make_triangulation_quiver([str(k) for k in range(1, 7)], arrows, f)


def test_f_must_be_a_permutation():
    with pytest.raises(FNotPermutation):
        make_triangulation_quiver(["1", "2", "3"], T_ARROWS, [("abar", "alpha", "beta")])
    with pytest.raises(FNotPermutation):
        make_triangulation_quiver(["1", "2", "3"], T_ARROWS, T_F + [("alpha",)])


def test_malformed_quiver_data():
    with pytest.raises(MalformedQuiver):
        make_triangulation_quiver(["1", "1"], T_ARROWS, T_F)
    with pytest.raises(MalformedQuiver):
        make_triangulation_quiver(["1", "2"], T_ARROWS, T_F)


def test_single_vertex_rejected():
    with pytest.raises(TooFewVertices):
        make_triangulation_quiver(["1"], [("x", "1", "1"), ("y", "1", "1")], [("x",), ("y",)])


def test_unknown_catalog_entry():
    with pytest.raises(UnknownCatalogEntry):
        catalog("Q")


def test_triangle_virtual_arrows():
    tq, m = catalog("T")
    assert classify_virtual(tq, m) == {"abar", "eps"}


def test_spherical_virtual_arrows():
    tq, m = catalog("S")
    virtual = classify_virtual(tq, m)
    assert len(virtual) == 4
    assert all(tq.n(a) == 2 for a in virtual)


def test_triangle_assumption_holds_and_unit_weights_too():
    tq, m = catalog("T")
    assert check_assumptions(tq, m) == []
    assert check_assumptions(tq, {"abar": 2, "alpha": 1, "eps": 2}) == []


def test_three_cycle_beside_virtual_loop_violates_clause_three():
    tq = make_triangulation_quiver(
        ["1", "2"],
        [("abar", "1", "1"), ("alpha", "1", "2"), ("beta", "2", "1"), ("gamma", "2", "2")],
        [("abar", "alpha", "beta"), ("gamma",)])
    violations = check_assumptions(tq, expand_per_cycle(tq, {"abar": 2, "alpha": 1}, "weight"))
    assert [(v.arrow, v.clause, v.value) for v in violations] == [("alpha", 3, 3)]


@pytest.mark.parametrize("name", ["T", "S", "LOOP-PAIR", "GLUED(1)", "GLUED(2)", "GLUED(3)"])
def test_virtual_facts_hold(name):
    tq, m = catalog(name)
    facts = virtual_facts(tq, m)
    assert len(facts) == 3
    assert all(f.passed for f in facts), [f.witnesses for f in facts]


def test_no_qprime_in_triangle_or_sphere():
    assert find_qprime_configs(catalog("T")[0]) == []
    assert find_qprime_configs(catalog("S")[0]) == []


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_glued_qprime_hits(n):
    tq = generate_glued(n)
    hits = find_qprime_configs(tq)
    assert len(hits) == n
    for h in hits:
        assert h.observation_holds
        assert h.short_length == 3 and h.long_length >= 5
    assert qprime_impossibilities(tq) == []
    assert loops_in_three_cycles(tq) == []


def test_glued_catalog_delegates():
    assert catalog("GLUED(2)")[0] == generate_glued(2)


@settings(max_examples=8, deadline=None)
@given(st.integers(1, 8))
def test_glued_is_a_triangulation_quiver(n):
    tq = generate_glued(n)
    triangulation_invariants(tq)
    tq, m = catalog(f"GLUED({n})")
    assert check_assumptions(tq, m) == []


@pytest.mark.parametrize("name", ["T", "S", "LOOP-PAIR"])
def test_catalog_invariants(name):
    tq, m = catalog(name)
    triangulation_invariants(tq)
    assert qprime_impossibilities(tq) == []
    if len(tq.vertices) >= 3:
        assert loops_in_three_cycles(tq) == []


def test_weights_must_be_constant_on_g_cycles():
    tq, _ = catalog("T")
    with pytest.raises(InvalidWeights):
        expand_per_cycle(tq, {"alpha": 1, "beta": 2, "abar": 2, "eps": 2}, "weight")
    with pytest.raises(InvalidWeights):
        expand_per_cycle(tq, {"alpha": 1}, "weight")
