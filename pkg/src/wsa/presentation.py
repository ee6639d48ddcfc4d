"""Weights, parameters, the distinguished paths A and B, and the relation set
of a weighted surface algebra, including the exception clauses for the two
families of zero relations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .field import FieldSpec
from .quiver import (
    Arrow,
    InvalidWeights,
    Quiver,
    QuiverError,
    TriangulationQuiver,
    check_assumptions,
    expand_per_cycle,
)


class AssumptionViolated(QuiverError):
    def __init__(self, violations):
        self.violations = list(violations)
        first = self.violations[0]
        super().__init__("weights violate the assumption: " + "; ".join(map(str, self.violations)), first.arrow)


class PathIllFormed(ValueError):
    pass


@dataclass(frozen=True)
class Path:
    source: str
    target: str
    arrows: tuple[str, ...] = ()

    def __len__(self):
        return len(self.arrows)

    @property
    def is_trivial(self) -> bool:
        return not self.arrows

    def __mul__(self, other: "Path") -> "Path":
        if self.target != other.source:
            raise PathIllFormed(f"cannot compose {self} with {other}")
        return Path(self.source, other.target, self.arrows + other.arrows)

    def __str__(self):
        return "*".join(self.arrows) if self.arrows else f"e_{self.source}"


def make_path(tq: TriangulationQuiver, arrows: Sequence[str] | str, source: str | None = None) -> Path:
    """Path from arrow ids (or ``"a*b*c"``); ``source`` is required for the trivial path."""
    if isinstance(arrows, str):
        arrows = [x for x in arrows.replace(" ", "").split("*") if x]
    arrows = tuple(arrows)
    if not arrows:
        if source is None or source not in tq.vertices:
            raise PathIllFormed(f"trivial path needs a vertex, got {source!r}")
        return Path(source, source)
    for a in arrows:
        if a not in tq.f:
            raise PathIllFormed(f"unknown arrow {a!r}")
    for a, b in zip(arrows, arrows[1:]):
        if tq.t(a) != tq.s(b):
            raise PathIllFormed(f"{a} ends at {tq.t(a)} but {b} starts at {tq.s(b)}")
    if source is not None and source != tq.s(arrows[0]):
        raise PathIllFormed(f"path does not start at {source}")
    return Path(tq.s(arrows[0]), tq.t(arrows[-1]), arrows)


class WeightedPresentation:
    """Triangulation quiver with weights ``m`` and nonzero parameters ``c``.

    ``m`` and ``c`` may be keyed by any arrow of each g-cycle; they are expanded
    to every arrow.  With ``check=True`` the weight assumption is enforced.
    """

    def __init__(self, tq: TriangulationQuiver, m: Mapping[str, int], c: Mapping[str, object],
                 field: FieldSpec = FieldSpec(101), check: bool = True):
        self.tq = tq
        self.field = field
        m = expand_per_cycle(tq, m, "weight")
        for a, val in m.items():
            if not isinstance(val, int) or isinstance(val, bool) or val < 1:
                raise InvalidWeights(f"weight of {a} must be a positive integer, got {val!r}", a)
        raw_c = expand_per_cycle(tq, c, "parameter")
        self.m = m
        self.c = {}
        for a, val in raw_c.items():
            x = field(val)
            if x == 0:
                raise InvalidWeights(f"parameter of {a} must be nonzero", a)
            self.c[a] = x
        self.virtual = frozenset(a for a in tq.arrows if self.mn(a) == 2)
        self.violations = check_assumptions(tq, m)
        if check and self.violations:
            raise AssumptionViolated(self.violations)

    # shorthand
    def n(self, a: str) -> int:
        return self.tq.n(a)

    def mn(self, a: str) -> int:
        return self.m[a] * self.tq.n(a)

    def is_virtual(self, a: str) -> bool:
        return a in self.virtual

    @property
    def arrows(self):
        return self.tq.arrows

    @property
    def vertices(self):
        return self.tq.vertices

    def g_power_path(self, a: str, length: int) -> Path:
        arrows = []
        x = a
        for _ in range(length):
            arrows.append(x)
            x = self.tq.g[x]
        return make_path(self.tq, arrows, source=self.tq.s(a))

    def B(self, a: str) -> Path:
        return self.g_power_path(a, self.mn(a))

    def A(self, a: str) -> Path:
        return self.g_power_path(a, self.mn(a) - 1)

    def path(self, arrows, source=None) -> Path:
        return make_path(self.tq, arrows, source)

    def with_parameters(self, c: Mapping[str, object], check: bool = True) -> "WeightedPresentation":
        new_c = dict(self.c)
        for rep, val in c.items():
            for a in self.tq.g_cycles.cycle(rep):
                new_c[a] = val
        return WeightedPresentation(self.tq, self.m, new_c, self.field, check)

    def cycle_parameters(self) -> dict[str, object]:
        return {cyc[0]: self.c[cyc[0]] for cyc in self.tq.g_cycles.cycles}

    def cycle_weights(self) -> dict[str, int]:
        return {cyc[0]: self.m[cyc[0]] for cyc in self.tq.g_cycles.cycles}

    def __repr__(self):
        return f"WeightedPresentation({self.tq!r}, F_{self.field.characteristic or 'Q'})"


# -- relations ----------------------------------------------------------------

ZETA_CLAUSE_F2_VIRTUAL = "f^2(a) virtual"
ZETA_CLAUSE_SHORT_BAR = "f(abar) virtual and m_abar=1, n_abar=3"
XI_CLAUSE_F_VIRTUAL = "f(a) virtual"
XI_CLAUSE_SHORT_F = "f^2(a) virtual and m_f(a)=1, n_f(a)=3"


@dataclass(frozen=True)
class Relation:
    kind: str  # "commutativity", "zeta" or "xi"
    arrow: str
    terms: tuple  # ((scalar, Path), ...)

    def format(self, field: FieldSpec) -> str:
        parts = []
        for k, (coef, p) in enumerate(self.terms):
            if k == 0 and coef == field.one:
                parts.append(str(p))
                continue
            neg = field.neg(coef)
            if k > 0 and field.characteristic == 0 and coef < 0:
                parts.append(f"- {field.format(neg)}*{p}")
            else:
                parts.append(("+ " if k else "") + f"{field.format(coef)}*{p}")
        return " ".join(parts)


def zeta_monomial(pres: WeightedPresentation, a: str) -> Path:
    f, g = pres.tq.f, pres.tq.g
    return pres.path([a, f[a], g[f[a]]])


def xi_monomial(pres: WeightedPresentation, a: str) -> Path:
    f, g = pres.tq.f, pres.tq.g
    return pres.path([a, g[a], f[g[a]]])


def zeta_exception(pres: WeightedPresentation, a: str) -> str | None:
    """The clause exempting the zeta monomial of ``a`` from the relations, if any."""
    f, bar = pres.tq.f, pres.tq.bar
    if pres.is_virtual(f[f[a]]):
        return ZETA_CLAUSE_F2_VIRTUAL
    ab = bar[a]
    if pres.is_virtual(f[ab]) and pres.m[ab] == 1 and pres.n(ab) == 3:
        return ZETA_CLAUSE_SHORT_BAR
    return None


def xi_exception(pres: WeightedPresentation, a: str) -> str | None:
    f = pres.tq.f
    if pres.is_virtual(f[a]):
        return XI_CLAUSE_F_VIRTUAL
    if pres.is_virtual(f[f[a]]) and pres.m[f[a]] == 1 and pres.n(f[a]) == 3:
        return XI_CLAUSE_SHORT_F
    return None


def zeta_case(pres: WeightedPresentation, a: str) -> str | None:
    """Which hypothesis makes the zeta product of ``a`` a nonzero multiple of ``A_a``.

    ``"a"``: bar(a) virtual.  ``"b"``: n(bar a) = m n(bar a) = 3 and f(bar a) virtual.
    """
    ab = pres.tq.bar[a]
    if pres.is_virtual(ab):
        return "a"
    if pres.n(ab) == 3 and pres.mn(ab) == 3 and pres.is_virtual(pres.tq.f[ab]):
        return "b"
    return None


def xi_case(pres: WeightedPresentation, a: str) -> str | None:
    """``"a"``: f(a) virtual (xi ~ A_abar).  ``"b"``: n(f a) = m n(f a) = 3 and bar(a) virtual (xi ~ A_a)."""
    fa = pres.tq.f[a]
    if pres.is_virtual(fa):
        return "a"
    if pres.n(fa) == 3 and pres.mn(fa) == 3 and pres.is_virtual(pres.tq.bar[a]):
        return "b"
    return None


def zeta_scalar(pres: WeightedPresentation, a: str):
    """Predicted ``lambda`` with ``zeta = lambda * A_a`` (``None`` when the product is a relation)."""
    F, c, f, bar = pres.field, pres.c, pres.tq.f, pres.tq.bar
    case = zeta_case(pres, a)
    if case == "a":
        return F.mul(c[bar[a]], c[a])
    if case == "b":
        return F.mul(F.mul(c[bar[a]], c[f[bar[a]]]), c[a])
    return None


def xi_scalar(pres: WeightedPresentation, a: str):
    """Predicted ``(lambda, target)`` with ``xi = lambda * A_target``."""
    F, c, f, bar = pres.field, pres.c, pres.tq.f, pres.tq.bar
    case = xi_case(pres, a)
    if case == "a":
        return F.mul(c[f[a]], c[bar[a]]), bar[a]
    if case == "b":
        return F.mul(F.mul(c[f[a]], c[bar[a]]), c[a]), a
    return None


@dataclass
class RelationSet:
    commutativity: list[Relation] = field(default_factory=list)
    zeta: list[Relation] = field(default_factory=list)
    xi: list[Relation] = field(default_factory=list)
    exceptions: dict[tuple[str, str], str] = field(default_factory=dict)

    def all(self) -> list[Relation]:
        return self.commutativity + self.zeta + self.xi

    def zero_monomials(self) -> set[tuple[str, ...]]:
        return {r.terms[0][1].arrows for r in self.zeta + self.xi}

    def report(self, field: FieldSpec) -> str:
        lines = []
        for r in self.commutativity:
            lines.append(f"[{r.kind} {r.arrow}] {r.format(field)}")
        for r in self.zeta + self.xi:
            lines.append(f"[{r.kind} {r.arrow}] {r.format(field)}")
        for (kind, a), clause in sorted(self.exceptions.items()):
            lines.append(f"[{kind} {a}] excepted: {clause}")
        return "\n".join(lines)


def generate_relations(pres: WeightedPresentation) -> RelationSet:
    F, f, bar = pres.field, pres.tq.f, pres.tq.bar
    rels = RelationSet()
    for a in pres.arrows:
        ab = bar[a]
        rels.commutativity.append(Relation(
            "commutativity", a,
            ((F.one, pres.path([a, f[a]])), (F.neg(pres.c[ab]), pres.A(ab))),
        ))
    for a in pres.arrows:
        clause = zeta_exception(pres, a)
        if clause is None:
            rels.zeta.append(Relation("zeta", a, ((F.one, zeta_monomial(pres, a)),)))
        else:
            rels.exceptions[("zeta", a)] = clause
        clause = xi_exception(pres, a)
        if clause is None:
            rels.xi.append(Relation("xi", a, ((F.one, xi_monomial(pres, a)),)))
        else:
            rels.exceptions[("xi", a)] = clause
    return rels


@dataclass
class ArrowCheck:
    arrow: str
    passed: bool
    detail: str = ""


def exception_equivalence(pres: WeightedPresentation) -> list[ArrowCheck]:
    """Per arrow: each exception clause agrees with the matching product hypothesis.

    Also checks the identity ``f^2(bar a) = g^-1(a)`` on which the agreement rests.
    """
    tq = pres.tq
    f, bar, g_inv = tq.f, tq.bar, tq.g_inv
    out = []
    for a in pres.arrows:
        problems = []
        if f[f[bar[a]]] != g_inv[a]:
            problems.append("f^2(bar a) != g^-1(a)")
        if pres.is_virtual(f[f[a]]) != pres.is_virtual(bar[a]):
            problems.append("f^2(a) virtual differs from bar(a) virtual")
        if (zeta_exception(pres, a) is not None) != (zeta_case(pres, a) is not None):
            problems.append("zeta clause differs from zeta hypothesis")
        if (xi_exception(pres, a) is not None) != (xi_case(pres, a) is not None):
            problems.append("xi clause differs from xi hypothesis")
        out.append(ArrowCheck(a, not problems, "; ".join(problems)))
    return out


def gabriel_quiver(pres: WeightedPresentation) -> Quiver:
    return pres.tq.quiver.without(pres.virtual)


def opposite(pres: WeightedPresentation) -> WeightedPresentation:
    """Presentation of the opposite algebra: arrows reversed, ``f`` inverted.

    Arrow ids are kept, so the zeta product of ``f(g(a))`` in the opposite
    algebra is the reversal of the xi product of ``a``.
    """
    tq = pres.tq
    q = tq.quiver
    rev = Quiver(q.vertices, tuple(Arrow(a.id, a.target, a.source) for a in q.arrows))
    op_tq = TriangulationQuiver(rev, dict(tq.f_inv))
    return WeightedPresentation(op_tq, pres.m, pres.c, pres.field, check=False)


def xi_to_opposite_zeta(pres: WeightedPresentation, a: str) -> str:
    """Arrow whose zeta product in the opposite algebra reverses the xi product of ``a``."""
    return pres.tq.f[pres.tq.g[a]]


# -- degenerate parameter loci ----------------------------------------------------


@dataclass(frozen=True)
class ExtraSocleConfig:
    """Vertex where both arrows are non-virtual, both f-images virtual and both m n = 4."""

    vertex: str
    alpha: str
    abar: str
    product: object  # c_f(alpha) c_abar c_alpha c_f(abar)
    degenerate: bool


def extra_socle_configurations(pres: WeightedPresentation) -> list[ExtraSocleConfig]:
    tq, F, c = pres.tq, pres.field, pres.c
    f, g, bar = tq.f, tq.g, tq.bar
    out = []
    for v in tq.vertices:
        a, ab = tq.quiver.out_arrows(v)
        if pres.is_virtual(a) or pres.is_virtual(ab):
            continue
        if not (pres.is_virtual(f[a]) and pres.is_virtual(f[ab])):
            continue
        if pres.mn(a) != 4 or pres.mn(ab) != 4:
            continue
        # the two length-2 initial paths must end together with crossed continuations
        if not (g[g[a]] == f[g[ab]] and f[g[a]] == g[g[ab]]):
            continue
        prod = F.mul(F.mul(c[f[a]], c[ab]), F.mul(c[a], c[f[ab]]))
        out.append(ExtraSocleConfig(v, a, ab, prod, prod == F.one))
    return out


@dataclass(frozen=True)
class SingularConfig:
    kind: str  # "triangle" or "spherical"
    vertex: str
    abar: str  # the virtual arrow at the vertex
    alpha: str
    scalar: object

    @property
    def singular(self) -> bool:
        return self.scalar == 0


def singular_configurations(pres: WeightedPresentation) -> list[SingularConfig]:
    """Triangle and spherical configurations with the scalar whose vanishing breaks periodicity.

    triangle (virtual loop abar, m n(alpha) = 4, f(g(alpha)) virtual):
        1 - c_abar c_alpha^2 c_f(g(alpha))
    spherical (virtual non-loop abar, m n(alpha) = n(alpha) = 4, f(g(alpha)) virtual,
    m n(f(alpha)) = 4, t(alpha) != t(f(abar))):
        1 - c_abar c_alpha c_f(g(alpha)) c_f(alpha)
    """
    tq, F, c = pres.tq, pres.field, pres.c
    f, g, bar = tq.f, tq.g, tq.bar
    out = []
    for ab in sorted(pres.virtual):
        a = bar[ab]
        fga = f[g[a]]
        if tq.is_loop(ab):
            if pres.mn(a) == 4 and pres.is_virtual(fga):
                val = F.sub(F.one, F.mul(F.mul(c[ab], F.mul(c[a], c[a])), c[fga]))
                out.append(SingularConfig("triangle", tq.s(ab), ab, a, val))
        else:
            if (pres.mn(a) == 4 and pres.n(a) == 4 and pres.is_virtual(fga)
                    and pres.mn(f[a]) == 4 and tq.t(a) != tq.t(f[ab])):
                val = F.sub(F.one, F.mul(F.mul(c[ab], c[a]), F.mul(c[fga], c[f[a]])))
                out.append(SingularConfig("spherical", tq.s(ab), ab, a, val))
    return out


def degenerate_reasons(pres: WeightedPresentation) -> list[str]:
    reasons = [f"extra socle at {cfg.vertex}" for cfg in extra_socle_configurations(pres) if cfg.degenerate]
    reasons += [f"singular {cfg.kind} at {cfg.vertex}" for cfg in singular_configurations(pres) if cfg.singular]
    return reasons


def generic_parameters(tq: TriangulationQuiver, m: Mapping[str, int], field: FieldSpec = FieldSpec(101),
                       seed: int = 0, fixed: Mapping[str, object] | None = None,
                       max_attempts: int = 1000) -> dict[str, object]:
    """Seeded pseudorandom nonzero parameters per g-cycle avoiding the known degenerate loci.

    ``fixed`` pins some cycles (by any arrow of the cycle); the rest are redrawn
    until no degeneracy condition holds.
    """
    rng = random.Random(seed)
    fixed = dict(fixed or {})
    pinned = {tq.g_cycles.representative(k): v for k, v in fixed.items()}
    reps = [cyc[0] for cyc in tq.g_cycles.cycles]
    for _ in range(max_attempts):
        c = {rep: pinned.get(rep, field.random_nonzero(rng)) for rep in reps}
        pres = WeightedPresentation(tq, m, c, field, check=False)
        if not degenerate_reasons(pres):
            return c
        if all(rep in pinned for rep in reps):
            return c
    raise RuntimeError("could not draw generic parameters")
