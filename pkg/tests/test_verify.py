import json
from pathlib import Path

import pytest

from wsa.algebra import build_algebra
from wsa.document import parse_document
from wsa.presentation import extra_socle_configurations, opposite
from wsa.verify import (
    CHECK_IDS,
    FAIL,
    NA,
    PASS,
    detect_extra_socle,
    verify_all,
    verify_opposite_duality,
    verify_symmetrizing_form,
)

from conftest import CATALOG, SMALL, algebra, opposite_algebra, presentation, report, triangle

DATA = Path(__file__).parent / "data"


@pytest.mark.parametrize("name", CATALOG)
def test_catalog_is_verified(name):
    rep = report(name)
    assert rep.verdict == "VERIFIED", rep.text()
    assert [c.id for c in rep.checks] == list(CHECK_IDS)
    assert all(c.status in (PASS, NA) for c in rep.checks)
    assert rep.extra_socle in ("ABSENT", "REGULAR")
    assert rep.singular == []


@pytest.mark.parametrize("name", CATALOG)
def test_core_checks_apply_everywhere(name):
    rep = report(name)
    for cid in ("assumption", "virtual-facts", "exception-clauses", "stabilization", "idempotents",
                "associativity", "exception-duality", "socle-facts", "socle-dimension",
                "symmetrizing-form", "extra-socle", "opposite-duality"):
        assert rep.check(cid).status == PASS, cid


def test_applicability_follows_the_quiver():
    t, s, g2 = report("T"), report("S"), report("GLUED(2)")
    assert t.check("loop-products").status == PASS
    assert s.check("loop-products").status == NA
    assert t.check("singular-triangle").status == PASS
    assert t.check("singular-spherical").status == NA
    assert s.check("singular-spherical").status == PASS
    assert g2.check("qprime-long-cycle").status == PASS
    assert t.check("qprime-long-cycle").status == NA
    assert t.check("period-4").status == PASS and s.check("period-4").status == PASS


def test_report_json_shape():
    data = report("T").to_json()
    assert json.loads(json.dumps(data)) == data
    assert data["verdict"] == "VERIFIED" and data["dimension"] == 20
    assert data["classification"] == {"extra_socle": "REGULAR", "singular": []}
    assert len(data["checks"]) == len(CHECK_IDS)


def test_report_text_is_deterministic():
    first = verify_all(presentation("T"), "T").text()
    assert first == report("T").text()
    assert first.endswith("verdict: VERIFIED WEIGHTED SURFACE ALGEBRA")


def test_degenerate_extra_socle_has_witness():
    A = build_algebra(triangle(1, 1, 1))
    status, findings = detect_extra_socle(A)
    assert status == "DEGENERATE"
    (hit,) = findings
    assert (hit.vertex, hit.alpha, hit.abar, hit.product) == ("2", "beta", "gamma", 1)
    assert hit.confirmed
    F = A.field
    zeta = A.path("beta", "alpha") + A.path("gamma", "delta").scale(F.neg(1))
    assert A.format_element(zeta) == hit.witness
    assert A.products([zeta], A.radical_basis()).dim == 0
    assert not A.subspace([A.evaluate(A.pres.B("beta"))]).contains(zeta.coeffs)
    assert A.socle_right("2").dim == 2


def test_degenerate_parameters_break_symmetry_certificate():
    A = build_algebra(triangle(1, 1, 1))
    assert verify_symmetrizing_form(A).status == FAIL
    rep = verify_all(A.pres, "T", algebra=A)
    assert rep.extra_socle == "DEGENERATE"
    assert rep.check("extra-socle").witness[0]["zeta"] == "beta*alpha + 100*gamma*delta"
    assert rep.verdict == "FAILED"


@pytest.mark.parametrize("params", [(1, 2, 1), (2, 1, 1), (3, 5, 7)])
def test_off_locus_parameters_are_regular(params):
    A = build_algebra(triangle(*params))
    status, findings = detect_extra_socle(A)
    assert status == "REGULAR" and all(x.confirmed for x in findings)
    assert A.socle_right("2").dim == 1


def test_absent_when_no_configuration():
    assert extra_socle_configurations(presentation("LOOP-PAIR")) == []
    assert detect_extra_socle(algebra("LOOP-PAIR")) == ("ABSENT", [])


@pytest.mark.parametrize("name", SMALL)
def test_duality_with_opposite(name):
    res = verify_opposite_duality(algebra(name), opposite_algebra(name))
    assert res.status == PASS, res.witness


def test_duality_detects_a_mismatch():
    # pairing T with the opposite of a different parameter choice changes scalars
    res = verify_opposite_duality(algebra("T"), build_algebra(opposite(triangle(3, 5, 7)), check_stable=False))
    assert res.status == FAIL


def test_assumption_failure_short_circuits():
    doc = parse_document((DATA / "bad_assumption.json").read_text())
    pres = doc.presentation(check=False)
    rep = verify_all(pres, "bad")
    assert rep.check("assumption").status == FAIL
    assert rep.check("assumption").witness
    assert all(c.status == NA for c in rep.checks[1:])
    assert len(rep.checks) == len(CHECK_IDS) and rep.verdict == "FAILED"


def test_stabilization_failure_is_reported():
    rep = verify_all(presentation("T"), "T", bound=3)
    assert rep.check("stabilization").status == FAIL
    assert rep.verdict == "FAILED"
    assert all(c.status == NA for c in rep.checks[rep.checks.index(rep.check("stabilization")) + 1:])
