"""Finite-dimensional quotient of the path algebra by the relations.

The ideal is generated by commutativity relations (two terms) and zero
monomials of length three.  Paths containing a zero monomial vanish, so only
"allowed" paths (no forbidden window) below a length bound are kept as
columns.  Two-sided multiples ``p * r * q`` of every commutativity relation
are then row reduced against a monomial order that puts longer paths first,
which leaves a monomial basis made of the non-pivot paths.  The computation
is repeated with a larger bound to certify that the truncation was harmless.
"""

from __future__ import annotations

import random
from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, Sequence

from .field import FieldSpec, Subspace, left_kernel
from .presentation import (
    Path,
    PathIllFormed,
    WeightedPresentation,
    generate_relations,
    make_path,
)


class TruncationUnstable(RuntimeError):
    def __init__(self, bound: int, before: dict, after: dict):
        self.bound = bound
        self.before = before
        self.after = after
        diff = {k: (before.get(k, 0), after.get(k, 0)) for k in set(before) | set(after)
                if before.get(k, 0) != after.get(k, 0)}
        super().__init__(f"dimensions change between length bounds {bound} and {bound + 1}: {diff}")


class NotSymmetricCandidate(RuntimeError):
    def __init__(self, vertex: str, socle_dim: int):
        self.vertex = vertex
        self.socle_dim = socle_dim
        super().__init__(f"socle of the projective at {vertex} has dimension {socle_dim}, expected 1")


class FormNotSymmetric(RuntimeError):
    def __init__(self, pair):
        self.pair = pair
        super().__init__(f"no symmetric form of the socle shape; witness pair {pair[0]}, {pair[1]}")


class FormDegenerate(RuntimeError):
    def __init__(self, element):
        self.element = element
        super().__init__(f"form is degenerate: {element} pairs to zero with everything")


# -- truncated quotient -------------------------------------------------------------


def _forbidden_windows(pres: WeightedPresentation) -> set[tuple[str, str, str]]:
    return generate_relations(pres).zero_monomials()


def _allowed_paths(pres: WeightedPresentation, bound: int, forbidden) -> list[tuple]:
    """Keys ``(source, arrows)`` of paths shorter than ``bound`` with no forbidden window."""
    tq = pres.tq
    tgt = {a: tq.t(a) for a in tq.arrows}
    outs = {v: tuple(tq.quiver.out_arrows(v)) for v in tq.vertices}
    out = []
    frontier = []
    for v in tq.vertices:
        out.append((v, ()))
        for a in outs[v]:
            frontier.append((v, (a,)))
    length = 1
    while frontier and length < bound:
        out.extend(frontier)
        nxt = []
        for v, arr in frontier:
            last = arr[-1]
            prev = arr[-2] if len(arr) >= 2 else None
            for b in outs[tgt[last]]:
                if (prev, last, b) in forbidden:
                    continue
                nxt.append((v, arr + (b,)))
        frontier = nxt
        length += 1
    return out


def _junction_ok(left: tuple, right: tuple, forbidden) -> bool:
    if not left or not right:
        return True
    if len(left) >= 2 and (left[-2], left[-1], right[0]) in forbidden:
        return False
    if len(right) >= 2 and (left[-1], right[0], right[1]) in forbidden:
        return False
    return True


def _order_key(key):
    v, arr = key
    return (len(arr), arr, v)


@dataclass
class _Core:
    keys: list            # allowed path keys, column order (largest first)
    col: dict             # key -> column index
    nf: dict              # column -> {basis column: scalar}
    basis_cols: list      # non-pivot columns, in column order


def _quotient(pres: WeightedPresentation, bound: int) -> _Core:
    F = pres.field
    tq = pres.tq
    f, bar = tq.f, tq.bar
    forbidden = _forbidden_windows(pres)
    keys = _allowed_paths(pres, bound, forbidden)
    keys.sort(key=_order_key, reverse=True)
    col = {k: i for i, k in enumerate(keys)}

    tgt = {a: tq.t(a) for a in tq.arrows}
    ending: dict[str, list[tuple]] = {v: [] for v in tq.vertices}
    groups: dict[str, dict[tuple, list[tuple]]] = {v: {} for v in tq.vertices}
    for v, arr in keys:
        ending[tgt[arr[-1]] if arr else v].append(arr)
        groups[v].setdefault(arr[:2], []).append(arr)
    group_lengths: dict[str, list] = {}
    for v in tq.vertices:
        entries = []
        for head, qs in groups[v].items():
            qs.sort(key=len)
            entries.append((head, qs, [len(q) for q in qs]))
        group_lengths[v] = entries

    # Every row has at most two terms and stays so under elimination, so a
    # pivot is stored as ``lead -> (other, coef)`` meaning lead + coef*other = 0.
    pivots: dict[int, tuple] = {}
    add, sub, mul, inv, neg = F.add, F.sub, F.mul, F.inv, F.neg
    zero = F.zero

    def insert(c1, a1, c2, a2):
        # row = a1*[c1] + a2*[c2]; c2 is None for monomial rows
        while True:
            if c2 is not None and c2 < c1:
                c1, a1, c2, a2 = c2, a2, c1, a1
            hit = pivots.get(c1)
            if hit is None:
                if c2 is None:
                    pivots[c1] = (None, zero)
                else:
                    pivots[c1] = (c2, mul(a2, inv(a1)))
                return
            other, b = hit
            # subtract a1*(c1 + b*other)
            if other is None:
                if c2 is None:
                    return
                c1, a1, c2, a2 = c2, a2, None, zero
            elif c2 is None:
                c1, a1 = other, neg(mul(a1, b))
            elif other == c2:
                val = sub(a2, mul(a1, b))
                if val == 0:
                    return
                c1, a1, c2, a2 = c2, val, None, zero
            else:
                c1, a1, c2, a2 = c2, a2, other, neg(mul(a1, b))

    srcs = {a: tq.s(a) for a in tq.arrows}
    one = F.one
    for a in tq.arrows:
        ab = bar[a]
        mono1 = (a, f[a])
        mono2 = pres.A(ab).arrows
        coef2 = neg(pres.c[ab])
        src, dst = tq.s(a), tq.t(f[a])
        for p in ending[src]:
            ok1 = len(p) + 2 < bound and _junction_ok(p, mono1, forbidden)
            ok2 = len(p) + len(mono2) < bound and _junction_ok(p, mono2, forbidden)
            if not (ok1 or ok2):
                continue
            pm1 = p + mono1
            pm2 = p + mono2
            base = srcs[p[0]] if p else src
            lim1 = bound - len(pm1) if ok1 else 0
            lim2 = bound - len(pm2) if ok2 else 0
            for head, qs, lens in group_lengths[dst]:
                g1 = lim1 > 0 and _junction_ok(pm1, head, forbidden)
                g2 = lim2 > 0 and _junction_ok(pm2, head, forbidden)
                if not (g1 or g2):
                    continue
                stop = bisect_left(lens, max(lim1 if g1 else 0, lim2 if g2 else 0))
                for q in qs[:stop]:
                    lq = len(q)
                    t1 = g1 and lq < lim1
                    t2 = g2 and lq < lim2
                    if t1 and t2:
                        insert(col[(base, pm1 + q)], one, col[(base, pm2 + q)], coef2)
                    elif t1:
                        insert(col[(base, pm1 + q)], one, None, zero)
                    else:
                        insert(col[(base, pm2 + q)], coef2, None, zero)

    # back substitution: each pivot column in terms of non-pivot columns
    reduced: dict[int, dict[int, object]] = {}
    for pc in sorted(pivots, reverse=True):
        other, b = pivots[pc]
        if other is None:
            reduced[pc] = {}
            continue
        value = {}
        for k, y in reduced.get(other, {other: F.one}).items():
            val = neg(mul(b, y))
            if val != 0:
                value[k] = val
        reduced[pc] = value
    nf = {}
    basis_cols = [i for i in range(len(keys)) if i not in pivots]
    for i in basis_cols:
        nf[i] = {i: F.one}
    nf.update(reduced)
    return _Core(keys, col, nf, basis_cols)


def _block_dims(core: _Core, tq) -> dict:
    dims: dict = {}
    for i in core.basis_cols:
        v, arr = core.keys[i]
        t = tq.t(arr[-1]) if arr else v
        dims[(v, t)] = dims.get((v, t), 0) + 1
    return dims


# -- algebra ---------------------------------------------------------------------


class AlgebraElement:
    """Sparse linear combination of basis paths."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: "QuotientAlgebra", coeffs: dict):
        self.algebra = algebra
        self.coeffs = {k: v for k, v in coeffs.items() if v != 0}

    def _F(self):
        return self.algebra.field

    def __add__(self, other):
        F = self._F()
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = F.add(out.get(k, F.zero), v)
        return AlgebraElement(self.algebra, out)

    def __neg__(self):
        F = self._F()
        return AlgebraElement(self.algebra, {k: F.neg(v) for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        F = self._F()
        s = F(s)
        return AlgebraElement(self.algebra, {k: F.mul(s, v) for k, v in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return self.algebra.mul(self, other)
        return self.scale(other)

    def __rmul__(self, s):
        return self.scale(s)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def is_zero(self) -> bool:
        return not self.coeffs

    def vector(self) -> list:
        F = self._F()
        v = [F.zero] * self.algebra.dim
        for k, x in self.coeffs.items():
            v[k] = x
        return v

    def proportional_to(self, other: "AlgebraElement"):
        """``s`` with ``self == s * other`` (``other`` nonzero), else ``None``."""
        F = self._F()
        if other.is_zero():
            return None
        k0 = next(iter(other.coeffs))
        s = F.div(self.coeffs.get(k0, F.zero), other.coeffs[k0])
        return s if self == other.scale(s) else None

    def __repr__(self):
        return self.algebra.format_element(self)


class QuotientAlgebra:
    """The algebra with a monomial basis and a lazily cached multiplication table."""

    def __init__(self, pres: WeightedPresentation, bound: int, core: _Core, checked_bound: int | None):
        self.pres = pres
        self.field: FieldSpec = pres.field
        self.tq = pres.tq
        self.bound = bound
        self.checked_bound = checked_bound
        self._core = core
        order = sorted(core.basis_cols, key=lambda i: (self.tq.vertices.index(core.keys[i][0]),
                                                       len(core.keys[i][1]), core.keys[i][1]))
        self._col_to_idx = {c: k for k, c in enumerate(order)}
        self.basis: list[Path] = []
        for c in order:
            v, arr = core.keys[c]
            self.basis.append(Path(v, self.tq.t(arr[-1]) if arr else v, arr))
        self.dim = len(self.basis)
        self._index = {p: k for k, p in enumerate(self.basis)}
        self._mul_cache: dict = {}
        self._by_source: dict[str, list[int]] = {v: [] for v in self.tq.vertices}
        self._by_target: dict[str, list[int]] = {v: [] for v in self.tq.vertices}
        for k, p in enumerate(self.basis):
            self._by_source[p.source].append(k)
            self._by_target[p.target].append(k)

    # construction helpers
    def _nf_key(self, key) -> dict:
        c = self._core.col.get(key)
        if c is None:
            return {}
        return {self._col_to_idx[b]: x for b, x in self._core.nf[c].items()}

    def _nf_arrows(self, source: str, arrows: tuple) -> dict:
        if len(arrows) >= self.bound:
            return {}
        return self._nf_key((source, arrows))

    # elements
    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, {})

    def one(self) -> AlgebraElement:
        return AlgebraElement(self, {self._index[Path(v, v)]: self.field.one for v in self.tq.vertices})

    def e(self, v: str) -> AlgebraElement:
        return AlgebraElement(self, {self._index[Path(v, v)]: self.field.one})

    def basis_element(self, k: int) -> AlgebraElement:
        return AlgebraElement(self, {k: self.field.one})

    def evaluate(self, x) -> AlgebraElement:
        """Normal form of a path, arrow list, ``"a*b"`` string or ``[(scalar, path), ...]``."""
        if isinstance(x, AlgebraElement):
            return x
        if isinstance(x, Path):
            return AlgebraElement(self, self._nf_arrows(x.source, x.arrows))
        if isinstance(x, str) and x.startswith("e_"):
            return self.e(x[2:])
        if isinstance(x, (str, tuple)) or (isinstance(x, list) and all(isinstance(a, str) for a in x)):
            return self.evaluate(make_path(self.tq, x))
        total = self.zero()
        for coef, p in x:
            total = total + self.evaluate(p).scale(coef)
        return total

    def path(self, *arrows: str) -> AlgebraElement:
        return self.evaluate(make_path(self.tq, arrows))

    def mul_basis(self, i: int, j: int) -> dict:
        key = (i, j)
        hit = self._mul_cache.get(key)
        if hit is None:
            p, q = self.basis[i], self.basis[j]
            if p.target != q.source:
                hit = {}
            else:
                hit = self._nf_arrows(p.source, p.arrows + q.arrows)
            self._mul_cache[key] = hit
        return hit

    def mul(self, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
        F = self.field
        out: dict = {}
        for i, a in x.coeffs.items():
            for j, b in y.coeffs.items():
                ab = F.mul(a, b)
                for k, c in self.mul_basis(i, j).items():
                    out[k] = F.add(out.get(k, F.zero), F.mul(ab, c))
        return AlgebraElement(self, out)

    # structure
    def index_of(self, p: Path) -> int:
        return self._index[p]

    def out_of(self, v: str) -> list[int]:
        """Basis indices of ``e_v * Lambda``."""
        return list(self._by_source[v])

    def into(self, v: str) -> list[int]:
        """Basis indices of ``Lambda * e_v``."""
        return list(self._by_target[v])

    def block_dims(self) -> dict:
        dims: dict = {}
        for p in self.basis:
            dims[(p.source, p.target)] = dims.get((p.source, p.target), 0) + 1
        return dims

    def projective_dims(self) -> dict:
        return {v: len(self._by_source[v]) for v in self.tq.vertices}

    def subspace(self, elements: Iterable[AlgebraElement]) -> Subspace:
        return Subspace(self.field, self.dim, [x.coeffs for x in elements])

    def radical_power(self, k: int) -> Subspace:
        """``J^k``, computed as ``J^(k-1)`` times the arrows.

        The relations are not homogeneous, so a long path can reduce to a
        multiple of a short basis path; lengths of basis paths do not give the
        filtration beyond ``k = 1``.
        """
        cache = self.__dict__.setdefault("_radical_cache", {})
        if k in cache:
            return cache[k]
        F = self.field
        if k == 0:
            space = Subspace(F, self.dim, [{i: F.one} for i in range(self.dim)])
        elif k == 1:
            space = Subspace(F, self.dim, [{i: F.one} for i, p in enumerate(self.basis) if len(p) >= 1])
        else:
            prev = self.radical_power(k - 1)
            arrows = [self.index_of(Path(self.tq.s(a), self.tq.t(a), (a,))) for a in self.tq.arrows]
            space = Subspace(F, self.dim)
            for row in prev.sparse_basis:
                x = AlgebraElement(self, row)
                for ai in arrows:
                    space.add((x * self.basis_element(ai)).coeffs)
        cache[k] = space
        return space

    def radical_power_basis(self, k: int) -> list[AlgebraElement]:
        return [AlgebraElement(self, row) for row in self.radical_power(k).sparse_basis]

    def radical_basis(self) -> list[AlgebraElement]:
        return [self.basis_element(i) for i, p in enumerate(self.basis) if len(p) >= 1]

    def loewy_length(self) -> int:
        k = 1
        while self.radical_power(k).dim:
            k += 1
        return k

    def products(self, left: Iterable[AlgebraElement], right: Iterable[AlgebraElement]) -> Subspace:
        right = list(right)
        return self.subspace(x * y for x in left for y in right)

    def ideal_times_radical(self, x: AlgebraElement, power: int = 1, side: str = "right") -> Subspace:
        """``x J^power`` (``side="right"``) or ``J^power x``."""
        gens = self.radical_power_basis(power)
        if side == "right":
            return self.subspace(x * y for y in gens)
        return self.subspace(y * x for y in gens)

    def _annihilated(self, indices: list[int], side: str) -> Subspace:
        F = self.field
        columns: dict = {}
        rows = []
        for i in indices:
            row: dict = {}
            for a in self.tq.arrows:
                ai = self._index[Path(self.tq.s(a), self.tq.t(a), (a,))]
                prod = self.mul_basis(i, ai) if side == "right" else self.mul_basis(ai, i)
                for k, x in prod.items():
                    c = columns.setdefault((a, k), len(columns))
                    row[c] = x
            rows.append(row)
        dense = [[r.get(c, F.zero) for c in range(len(columns))] for r in rows]
        kernel = left_kernel(F, dense, len(columns)) if columns else \
            [[F.one if i == j else F.zero for j in range(len(indices))] for i in range(len(indices))]
        vecs = [{indices[t]: x for t, x in enumerate(v) if x != 0} for v in kernel]
        return Subspace(F, self.dim, vecs)

    def socle_right(self, v: str) -> Subspace:
        """Socle of the right module ``e_v Lambda``: elements killed by every arrow on the right."""
        return self._annihilated(self.out_of(v), "right")

    def socle_left(self, v: str) -> Subspace:
        """Socle of the left module ``Lambda e_v``."""
        return self._annihilated(self.into(v), "left")

    # formatting
    def format_element(self, x: AlgebraElement) -> str:
        if x.is_zero():
            return "0"
        F = self.field
        parts = []
        for k in sorted(x.coeffs):
            c = x.coeffs[k]
            p = str(self.basis[k])
            parts.append(p if c == F.one else f"{F.format(c)}*{p}")
        return " + ".join(parts)

    def dump_basis(self, normal_forms: bool = True) -> str:
        """Basis listing, then every other path below the bound with its normal form."""
        lines = []
        for k, p in enumerate(self.basis):
            lines.append(f"{k}\t{p.source}->{p.target}\t{p}")
        if normal_forms:
            core = self._core
            basis_cols = set(core.basis_cols)
            rest = sorted((c for c in range(len(core.keys)) if c not in basis_cols),
                          key=lambda c: (self.tq.vertices.index(core.keys[c][0]),
                                         len(core.keys[c][1]), core.keys[c][1]))
            for c in rest:
                v, arr = core.keys[c]
                p = Path(v, self.tq.t(arr[-1]) if arr else v, arr)
                nf = AlgebraElement(self, {self._col_to_idx[b]: x for b, x in core.nf[c].items()})
                lines.append(f"nf\t{p} = {self.format_element(nf)}")
        return "\n".join(lines)

    def dump_table(self) -> str:
        lines = []
        for i, p in enumerate(self.basis):
            for j in self._by_source[p.target]:
                prod = AlgebraElement(self, self.mul_basis(i, j))
                if not prod.is_zero():
                    lines.append(f"{p} * {self.basis[j]} = {self.format_element(prod)}")
        return "\n".join(lines)

    # checks
    def check_associativity(self, exhaustive_limit: int = 30, samples: int = 5000, seed: int = 0) -> dict:
        """Compare ``(xy)z`` with ``x(yz)`` on composable basis triples.

        Exhaustive when ``dim <= exhaustive_limit``, otherwise a seeded sample.
        Returns ``{"checked": n, "failures": [...], "exhaustive": bool}``.
        """
        triples = []
        exhaustive = self.dim <= exhaustive_limit
        if exhaustive:
            for i, p in enumerate(self.basis):
                for j in self._by_source[p.target]:
                    for k in self._by_source[self.basis[j].target]:
                        triples.append((i, j, k))
        else:
            rng = random.Random(seed)
            for _ in range(samples):
                i = rng.randrange(self.dim)
                j = rng.choice(self._by_source[self.basis[i].target])
                k = rng.choice(self._by_source[self.basis[j].target])
                triples.append((i, j, k))
        failures = []
        for i, j, k in triples:
            x, y, z = self.basis_element(i), self.basis_element(j), self.basis_element(k)
            if (x * y) * z != x * (y * z):
                failures.append((str(self.basis[i]), str(self.basis[j]), str(self.basis[k])))
        return {"checked": len(triples), "failures": failures, "exhaustive": exhaustive}

    def symmetrizing_form(self) -> "SymmetrizingForm":
        return symmetrizing_form(self)


def build_algebra(pres: WeightedPresentation, bound: int | None = None, check_stable: bool = True) -> QuotientAlgebra:
    """Build the quotient with paths shorter than ``bound`` (default: max m n + 2).

    With ``check_stable`` the construction is repeated at ``bound + 1`` and the
    block dimensions must agree, otherwise :class:`TruncationUnstable` is raised.
    """
    if bound is None:
        bound = max(pres.mn(a) for a in pres.arrows) + 2
    core = _quotient(pres, bound)
    checked = None
    if check_stable:
        bigger = _quotient(pres, bound + 1)
        d1, d2 = _block_dims(core, pres.tq), _block_dims(bigger, pres.tq)
        if d1 != d2:
            raise TruncationUnstable(bound, d1, d2)
        checked = bound + 1
    return QuotientAlgebra(pres, bound, core, checked)


# -- symmetrizing form ----------------------------------------------------------------


@dataclass
class SymmetrizingForm:
    """Linear form given by its values on the closed basis paths (all others map to 0).

    ``socle_index[v]`` is the basis monomial spanning the socle of ``e_v Lambda``;
    its value is nonzero.  Subtracting suitable multiples of these socle
    monomials from the other closed basis paths gives a basis in which the
    form is supported on the socle alone.
    """

    algebra: QuotientAlgebra
    socle_index: dict       # vertex -> basis index
    values: dict            # basis index -> scalar (closed paths only, nonzero entries)
    pairs_checked: int

    def __call__(self, x: AlgebraElement):
        F = self.algebra.field
        total = F.zero
        for k, c in x.coeffs.items():
            val = self.values.get(k)
            if val:
                total = F.add(total, F.mul(val, c))
        return total

    @property
    def weights(self) -> dict:
        return {v: self.values[k] for v, k in self.socle_index.items()}

    def off_socle_support(self) -> list[Path]:
        socle = set(self.socle_index.values())
        return [self.algebra.basis[k] for k in sorted(self.values) if k not in socle]


def symmetrizing_form(A: QuotientAlgebra, seed: int = 0) -> SymmetrizingForm:
    """Find and certify a symmetric nondegenerate linear form.

    The socle of every ``e_v Lambda`` must be one-dimensional and spanned by a
    basis monomial.  The form is solved from ``phi(xy) = phi(yx)`` over all
    basis pairs with unknown values on the closed basis paths, then the
    identity is rechecked pair by pair and the pairing ``(x, y) -> phi(xy)`` is
    shown to have full rank on every block ``e_u Lambda e_v x e_v Lambda e_u``.
    """
    F = A.field
    socle_index = {}
    for v in A.tq.vertices:
        soc = A.socle_right(v)
        if soc.dim != 1:
            raise NotSymmetricCandidate(v, soc.dim)
        socle_index[v] = soc.pivots[0]
    closed = [k for k, p in enumerate(A.basis) if p.source == p.target]
    pos = {k: t for t, k in enumerate(closed)}

    def coeff_row(i, j):
        row = [F.zero] * len(closed)
        for k, x in A.mul_basis(i, j).items():
            if k in pos:
                row[pos[k]] = F.add(row[pos[k]], x)
        for k, x in A.mul_basis(j, i).items():
            if k in pos:
                row[pos[k]] = F.sub(row[pos[k]], x)
        return row

    pairs = [(i, j) for i in range(A.dim) for j in range(i + 1, A.dim)
             if A.basis[i].target == A.basis[j].source or A.basis[j].target == A.basis[i].source]
    rows = []
    seen = set()
    for i, j in pairs:
        r = coeff_row(i, j)
        t = tuple(r)
        if any(r) and t not in seen:
            seen.add(t)
            rows.append((r, (i, j)))
    if rows:
        kernel = left_kernel(F, [list(col) for col in zip(*(r for r, _ in rows))], len(rows))
    else:
        kernel = [[F.one if s == t else F.zero for t in range(len(closed))] for s in range(len(closed))]
    socle_pos = [pos[k] for k in socle_index.values()]
    rng = random.Random(seed)

    def pick(kernel):
        for attempt in range(20):
            w = [F.zero] * len(closed)
            for vec in kernel:
                s = F.one if attempt == 0 else F.random_nonzero(rng)
                w = [F.add(a, F.mul(s, b)) for a, b in zip(w, vec)]
            if all(w[t] != 0 for t in socle_pos):
                cand = SymmetrizingForm(A, socle_index, {closed[t]: x for t, x in enumerate(w) if x != 0},
                                        len(pairs))
                if _degenerate_witness(A, cand) is None:
                    return cand
        return None

    form = pick(kernel)
    if form is not None:
        # push the form onto the socle: vanish on every other closed path that allows it
        socle_set = set(socle_pos)
        for t in range(len(closed)):
            if t in socle_set or all(vec[t] == 0 for vec in kernel):
                continue
            restricted = _restrict_zero(F, kernel, t)
            cand = pick(restricted)
            if cand is not None:
                kernel, form = restricted, cand
    if form is None:
        # no form of this shape is nonzero on every socle monomial
        ones = SymmetrizingForm(A, socle_index, {k: F.one for k in socle_index.values()}, 0)
        witness = next(((A.basis[i], A.basis[j]) for i, j in pairs
                        if ones(A.basis_element(i) * A.basis_element(j))
                        != ones(A.basis_element(j) * A.basis_element(i))), (A.basis[0], A.basis[0]))
        raise FormNotSymmetric(witness)
    for i, j in pairs:
        x, y = A.basis_element(i), A.basis_element(j)
        if form(x * y) != form(y * x):
            raise FormNotSymmetric((A.basis[i], A.basis[j]))
    bad = _degenerate_witness(A, form)
    if bad is not None:
        raise FormDegenerate(bad)
    return form


def _restrict_zero(F: FieldSpec, kernel: list, t: int) -> list:
    """Subspace of span(kernel) whose coordinate ``t`` vanishes."""
    pivot = next((vec for vec in kernel if vec[t] != 0), None)
    if pivot is None:
        return kernel
    inv = F.inv(pivot[t])
    out = []
    for vec in kernel:
        if vec is pivot:
            continue
        a = F.mul(vec[t], inv)
        out.append([F.sub(x, F.mul(a, y)) for x, y in zip(vec, pivot)])
    return out


def _degenerate_witness(A: QuotientAlgebra, form: SymmetrizingForm):
    """An element of the left radical of ``(x, y) -> phi(xy)``, or ``None``."""
    F = A.field
    for (u, v), _ in sorted(A.block_dims().items()):
        left = [i for i in A.out_of(u) if A.basis[i].target == v]
        right = [j for j in A.out_of(v) if A.basis[j].target == u]
        gram = [[form(AlgebraElement(A, A.mul_basis(i, j))) for j in right] for i in left]
        ker = left_kernel(F, gram, len(right)) if right else [[F.one]]
        if ker or len(left) != len(right):
            vec = ker[0] if ker else [F.one] + [F.zero] * (len(left) - 1)
            return A.format_element(AlgebraElement(A, {left[t]: x for t, x in enumerate(vec)}))
    return None
