"""Right modules as quiver representations, projective covers, syzygies and
minimal projective resolutions, plus the period-four checks around a virtual
arrow.

A module of dimension ``N`` has a basis in which every vector lives at one
vertex; each arrow ``a`` acts on row vectors by an ``N x N`` matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .algebra import AlgebraElement, QuotientAlgebra
from .field import Subspace, left_kernel, matmul, rank
from .presentation import Path, generate_relations, singular_configurations


class ZeroModule(ValueError):
    pass


class NotVirtualBar(ValueError):
    pass


class SingularAlgebraDetected(RuntimeError):
    def __init__(self, report: "PeriodReport"):
        self.report = report
        super().__init__(f"singular configuration at {report.vertex}: {report.summary()}")


class NotPeriodic4(RuntimeError):
    def __init__(self, report: "PeriodReport"):
        self.report = report
        super().__init__(f"fourth syzygy at {report.vertex} is not the simple module: {report.summary()}")


class RightModule:
    def __init__(self, algebra: QuotientAlgebra, vertex_of: Sequence[str], action: dict):
        self.algebra = algebra
        self.vertex_of = list(vertex_of)
        self.action = action  # arrow -> N x N matrix (rows act on the right)
        self.dim = len(self.vertex_of)

    @property
    def field(self):
        return self.algebra.field

    def dim_vector(self) -> dict:
        out = {v: 0 for v in self.algebra.tq.vertices}
        for v in self.vertex_of:
            out[v] += 1
        return out

    def act(self, vec: Sequence, arrows: Sequence[str]) -> list:
        F = self.field
        vec = list(vec)
        for a in arrows:
            M = self.action[a]
            out = [F.zero] * self.dim
            for i, x in enumerate(vec):
                if x != 0:
                    for j, y in enumerate(M[i]):
                        if y != 0:
                            out[j] = F.add(out[j], F.mul(x, y))
            vec = out
        return vec

    def act_element(self, vec: Sequence, x: AlgebraElement) -> list:
        F = self.field
        out = [F.zero] * self.dim
        for k, c in x.coeffs.items():
            p = self.algebra.basis[k]
            w = self._act_path(vec, p)
            out = [F.add(a, F.mul(c, b)) for a, b in zip(out, w)]
        return out

    def _act_path(self, vec, p: Path) -> list:
        F = self.field
        # the idempotent e_v keeps the part of vec at v
        vec = [x if self.vertex_of[i] == p.source else F.zero for i, x in enumerate(vec)]
        return self.act(vec, p.arrows)

    def radical(self) -> Subspace:
        return Subspace(self.field, self.dim, [row for M in self.action.values() for row in M])

    def top_generators(self) -> list[int]:
        """Basis vectors whose classes form a basis of the top (greedy lift)."""
        span = self.radical()
        chosen = []
        for i in range(self.dim):
            unit = {i: self.field.one}
            if span.add(unit):
                chosen.append(i)
        return chosen

    def is_simple_at(self, v: str) -> bool:
        return self.dim == 1 and self.vertex_of[0] == v and all(
            all(x == 0 for row in M for x in row) for M in self.action.values())

    def check_representation(self) -> bool:
        """Arrow matrices respect vertices and every relation acts as zero."""
        A = self.algebra
        tq = A.tq
        for a, M in self.action.items():
            for i, row in enumerate(M):
                for j, x in enumerate(row):
                    if x != 0 and not (self.vertex_of[i] == tq.s(a) and self.vertex_of[j] == tq.t(a)):
                        return False
        for rel in generate_relations(A.pres).all():
            for i in range(self.dim):
                unit = [self.field.zero] * self.dim
                unit[i] = self.field.one
                total = [self.field.zero] * self.dim
                for coef, p in rel.terms:
                    w = self._act_path(unit, p)
                    total = [self.field.add(x, self.field.mul(coef, y)) for x, y in zip(total, w)]
                if any(total):
                    return False
        return True


def _zero_action(A: QuotientAlgebra, n: int) -> dict:
    F = A.field
    return {a: [[F.zero] * n for _ in range(n)] for a in A.tq.arrows}


def simple(A: QuotientAlgebra, v: str) -> RightModule:
    return RightModule(A, [v], _zero_action(A, 1))


def projective(A: QuotientAlgebra, v: str) -> "FreeModule":
    return FreeModule(A, [v])


class FreeModule(RightModule):
    """Direct sum of indecomposable projectives ``e_v Lambda``, basis by summand then basis path."""

    def __init__(self, algebra: QuotientAlgebra, summands: Sequence[str]):
        F = algebra.field
        self.summands = list(summands)
        self.blocks = []  # (offset, [global basis indices])
        vertex_of = []
        offset = 0
        for v in self.summands:
            idx = algebra.out_of(v)
            self.blocks.append((offset, idx))
            vertex_of += [algebra.basis[k].target for k in idx]
            offset += len(idx)
        n = offset
        action = _zero_action(algebra, n)
        for off, idx in self.blocks:
            local = {k: off + t for t, k in enumerate(idx)}
            for t, k in enumerate(idx):
                for a in algebra.tq.arrows:
                    if algebra.basis[k].target != algebra.tq.s(a):
                        continue
                    ai = algebra.index_of(Path(algebra.tq.s(a), algebra.tq.t(a), (a,)))
                    for kk, x in algebra.mul_basis(k, ai).items():
                        action[a][off + t][local[kk]] = x
        super().__init__(algebra, vertex_of, action)

    def generator(self, s: int) -> list:
        """Coordinates of the idempotent generating summand ``s``."""
        F = self.field
        off, idx = self.blocks[s]
        v = [F.zero] * self.dim
        v[off + idx.index(self.algebra.index_of(Path(self.summands[s], self.summands[s])))] = F.one
        return v

    def element_in_summand(self, s: int, x: AlgebraElement) -> list:
        F = self.field
        off, idx = self.blocks[s]
        local = {k: off + t for t, k in enumerate(idx)}
        v = [F.zero] * self.dim
        for k, c in x.coeffs.items():
            v[local[k]] = c
        return v

    def to_algebra(self, vec: Sequence) -> AlgebraElement:
        """For a single summand: the vector as an element of ``e_v Lambda``."""
        assert len(self.summands) == 1
        off, idx = self.blocks[0]
        return AlgebraElement(self.algebra, {idx[t]: vec[off + t] for t in range(len(idx)) if vec[off + t] != 0})


def submodule(M: RightModule, rows: list[list]) -> RightModule:
    """Submodule spanned by ``rows`` (vertex-homogeneous, jointly in reduced echelon form)."""
    F = M.field
    space = Subspace(F, M.dim, rows)
    basis = space.basis
    vertex_of = []
    for row in basis:
        verts = {M.vertex_of[i] for i, x in enumerate(row) if x != 0}
        assert len(verts) == 1, "submodule basis must be vertex-homogeneous"
        vertex_of.append(verts.pop())
    n = len(basis)
    action = _zero_action(M.algebra, n)
    for a, mat in M.action.items():
        for i, row in enumerate(basis):
            img = matmul(F, [list(row)], mat, ncols=M.dim)[0]
            coords = space.coordinates(img)
            if coords is None:
                raise ValueError("rows do not span a submodule")
            action[a][i] = coords
    sub = RightModule(M.algebra, vertex_of, action)
    sub.embedding = [list(r) for r in basis]
    sub.parent = M
    return sub


@dataclass
class CoverStep:
    module: RightModule
    cover: FreeModule
    generators: list          # module basis indices lifting the top
    projection: list          # dim(cover) x dim(module) matrix
    kernel: RightModule       # syzygy, embedded in the cover


def projective_cover(M: RightModule) -> CoverStep:
    if M.dim == 0:
        raise ZeroModule("the zero module has no projective cover")
    A = M.algebra
    F = M.field
    gens = M.top_generators()
    P = FreeModule(A, [M.vertex_of[i] for i in gens])
    proj = []
    for s, gi in enumerate(gens):
        off, idx = P.blocks[s]
        unit = [F.zero] * M.dim
        unit[gi] = F.one
        for k in idx:
            proj.append(M._act_path(unit, A.basis[k]))
    kernel_rows = []
    for v in A.tq.vertices:
        at_v = [i for i in range(P.dim) if P.vertex_of[i] == v]
        if not at_v:
            continue
        ker = left_kernel(F, [proj[i] for i in at_v], M.dim)
        for vec in ker:
            full = [F.zero] * P.dim
            for t, x in zip(at_v, vec):
                full[t] = x
            kernel_rows.append(full)
    K = submodule(P, kernel_rows)
    return CoverStep(M, P, gens, proj, K)


def omega(M: RightModule, k: int = 1) -> RightModule:
    for _ in range(k):
        M = projective_cover(M).kernel
    return M


@dataclass
class Resolution:
    """``P_k -> ... -> P_0 -> M`` with differentials as matrices (row convention)."""

    module: RightModule
    steps: list                   # CoverStep per term
    differentials: list           # d_k : P_k -> P_{k-1} for k >= 1
    certificate: dict = field(default_factory=dict)

    @property
    def terms(self) -> list[list[str]]:
        return [st.cover.summands for st in self.steps]

    @property
    def syzygies(self) -> list[RightModule]:
        return [st.kernel for st in self.steps]


def resolve(M: RightModule, length: int) -> Resolution:
    """Minimal projective resolution with ``length`` terms, certified exact and minimal."""
    F = M.field
    steps = []
    cur = M
    for _ in range(length):
        if cur.dim == 0:
            break
        st = projective_cover(cur)
        steps.append(st)
        cur = st.kernel
    diffs = []
    for k in range(1, len(steps)):
        # P_k -> Omega^k = kernel in P_{k-1}
        proj = steps[k].projection
        emb = steps[k - 1].kernel.embedding
        diffs.append(matmul(F, proj, emb, ncols=steps[k - 1].cover.dim))
    cert = {"d_squared_zero": True, "exact": True, "minimal": True}
    for k in range(1, len(diffs)):
        prod = matmul(F, diffs[k], diffs[k - 1], ncols=steps[k - 1].cover.dim)
        if any(x != 0 for row in prod for x in row):
            cert["d_squared_zero"] = False
    # exactness: rank of incoming map equals dimension of the kernel of the outgoing map
    ranks = [rank(F, st.projection) if st.projection else 0 for st in steps]
    for k in range(1, len(steps)):
        if rank(F, diffs[k - 1]) != steps[k - 1].cover.dim - ranks[k - 1]:
            cert["exact"] = False
    for k, d in enumerate(diffs, start=1):
        rad = steps[k - 1].cover.radical()
        if not all(rad.contains(row) for row in d):
            cert["minimal"] = False
    for st, r in zip(steps, ranks):
        if r != st.module.dim:
            cert["exact"] = False
    return Resolution(M, steps, diffs, cert)


# -- period four ---------------------------------------------------------------------------


@dataclass
class PeriodReport:
    vertex: str
    setting: str                       # "virtual-loop", "virtual-arrow" or "general"
    terms: list                        # summand vertices of P_0..P_3
    syzygy_dims: list                  # dim Omega^1 .. Omega^4
    checks: dict = field(default_factory=dict)
    singular: list = field(default_factory=list)
    omega4_simple: bool = False

    @property
    def passed(self) -> bool:
        return self.omega4_simple and all(self.checks.values())

    def summary(self) -> str:
        failed = [k for k, ok in self.checks.items() if not ok]
        parts = [f"terms {self.terms}", f"syzygy dims {self.syzygy_dims}",
                 f"Omega^4 simple: {self.omega4_simple}"]
        if failed:
            parts.append("failed: " + ", ".join(failed))
        if self.singular:
            parts.append("singular: " + ", ".join(self.singular))
        return "; ".join(parts)

    def to_json(self) -> dict:
        return {"vertex": self.vertex, "setting": self.setting, "terms": self.terms,
                "syzygy_dims": self.syzygy_dims, "checks": self.checks,
                "singular": self.singular, "omega4_simple": self.omega4_simple,
                "passed": self.passed}


def phi_element(A: QuotientAlgebra, v: str) -> tuple[AlgebraElement, str, str]:
    """The element generating the second syzygy of the simple at ``v``.

    ``v`` must carry a virtual arrow ``abar``; with ``alpha`` the other arrow
    and ``A'_alpha`` the path ``A_alpha`` without its first arrow:

    * ``abar`` a loop:   f(alpha) alpha - c_abar c_alpha A'_alpha   (at j = t(alpha))
    * otherwise:         f(alpha) f(abar) - c_abar c_alpha A'_alpha

    Returns ``(phi, alpha, abar)``.
    """
    pres = A.pres
    tq, F = pres.tq, pres.field
    virt = [a for a in tq.quiver.out_arrows(v) if pres.is_virtual(a)]
    if not virt:
        raise NotVirtualBar(f"no virtual arrow starts at {v}")
    ab = virt[0]
    a = tq.bar[ab]
    if pres.is_virtual(a):
        raise NotVirtualBar(f"both arrows at {v} are virtual")
    f = tq.f
    Ap = pres.A(a).arrows[1:]
    lead = A.path(f[a], a) if tq.is_loop(ab) else A.path(f[a], f[ab])
    tail = A.path(*Ap) if Ap else A.e(tq.t(a))
    scalar = F.mul(pres.c[ab], pres.c[a])
    return lead - tail.scale(scalar), a, ab


def _local_subspace(A: QuotientAlgebra, v: str, elements) -> Subspace:
    """Subspace of ``e_v Lambda`` in the local coordinates of :class:`FreeModule` ``[v]``."""
    idx = A.out_of(v)
    pos = {k: t for t, k in enumerate(idx)}
    return Subspace(A.field, len(idx), [{pos[k]: c for k, c in x.coeffs.items()} for x in elements])


def check_period4(A: QuotientAlgebra, v: str, raise_on_failure: bool = True) -> PeriodReport:
    """Compute ``Omega^k(S_v)`` for ``k <= 4`` and compare with the expected shape.

    At a vertex with a virtual arrow the checks also cover: the annihilation
    identity of ``phi``, ``dim Omega^2 = m n - 1``, ``phi Lambda = Omega^2``,
    ``Omega^2 = {x in e_j Lambda : alpha x = 0}``, the middle terms, the third
    syzygy and an Euler-characteristic count.
    """
    pres = A.pres
    tq, F = pres.tq, pres.field
    f = tq.f
    steps = []
    cur: RightModule = simple(A, v)
    for _ in range(4):
        st = projective_cover(cur)
        steps.append(st)
        cur = st.kernel
    terms = [st.cover.summands for st in steps]
    dims = [st.kernel.dim for st in steps]
    omega4 = steps[3].kernel
    report = PeriodReport(v, "general", terms, dims, omega4_simple=omega4.is_simple_at(v))
    report.checks["resolution-exact"] = resolve(simple(A, v), 4).certificate == {
        "d_squared_zero": True, "exact": True, "minimal": True}
    report.singular = [f"{cfg.kind} scalar {F.format(cfg.scalar)}" for cfg in singular_configurations(pres)
                       if cfg.vertex == v and cfg.singular]
    virt = [a for a in tq.quiver.out_arrows(v) if pres.is_virtual(a)]
    if virt and not pres.is_virtual(tq.bar[virt[0]]):
        phi, a, ab = phi_element(A, v)
        j = tq.t(a)
        loop = tq.is_loop(ab)
        report.setting = "virtual-loop" if loop else "virtual-arrow"
        y = j if loop else tq.t(f[ab])
        killer = f[a] if loop else f[f[ab]]
        expected_dim = pres.mn(a) - 1 if loop else pres.mn(f[a]) - 1
        report.checks["phi-annihilation"] = (phi * A.path(killer)).is_zero()
        report.checks["middle-terms"] = terms[1] == [j] and terms[2] == [y]
        report.checks["omega2-dimension"] = dims[1] == expected_dim
        om2 = steps[1].kernel
        if terms[1] == [j]:
            om2_space = Subspace(F, om2.parent.dim, om2.embedding)
            idx = A.out_of(j)
            phi_lambda = _local_subspace(A, j, [phi * A.basis_element(k) for k in A.out_of(y)])
            report.checks["phi-generates-omega2"] = phi_lambda == om2_space
            alpha_el = A.path(a)
            ann = [[A.mul_basis(ai, k) for ai in alpha_el.coeffs] for k in idx]
            cols: dict = {}
            rows = []
            for prods in ann:
                row = {}
                for prod in prods:
                    for kk, x in prod.items():
                        row[cols.setdefault(kk, len(cols))] = x
                rows.append(row)
            dense = [[r.get(c, F.zero) for c in range(len(cols))] for r in rows]
            ker = left_kernel(F, dense, len(cols)) if cols else \
                [[F.one if s == t else F.zero for t in range(len(idx))] for s in range(len(idx))]
            report.checks["omega2-annihilator"] = Subspace(F, len(idx), ker) == om2_space
        else:
            report.checks["phi-generates-omega2"] = False
            report.checks["omega2-annihilator"] = False
        om3 = steps[2].kernel
        if terms[2] == [y]:
            gen = A.path(killer)
            inside = _local_subspace(A, y, [gen * A.basis_element(k) for k in A.out_of(tq.t(killer))])
            om3_space = Subspace(F, om3.parent.dim, om3.embedding)
            report.checks["omega3-generated"] = inside.dim == om3.dim and inside <= om3_space
        else:
            report.checks["omega3-generated"] = False
        pdim = A.projective_dims()
        # 0 -> Omega^3 -> P_y -> P_j -> Omega^1 -> 0 with Omega^3 = Omega^{-1}(S_v)
        euler = dims[2] - pdim[y] + pdim[j] - dims[0]
        report.checks["euler-count"] = euler == 0
    if raise_on_failure and not report.passed:
        if report.singular:
            raise SingularAlgebraDetected(report)
        raise NotPeriodic4(report)
    return report


@dataclass(frozen=True)
class SingularClassification:
    kind: str          # "triangle" or "spherical"
    vertex: str
    scalar: object
    status: str        # "REGULAR" or "SINGULAR"


def detect_singular(pres) -> list[SingularClassification]:
    """Classify every triangle/spherical configuration by its unit scalar.

    An empty list means the presentation has neither configuration.
    """
    return [SingularClassification(cfg.kind, cfg.vertex, cfg.scalar, "SINGULAR" if cfg.singular else "REGULAR")
            for cfg in singular_configurations(pres)]
