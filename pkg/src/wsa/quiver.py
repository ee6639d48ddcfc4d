"""Triangulation quivers: validation, the involution ``bar``, the permutations
``f`` and ``g``, virtual arrows, the weight assumption, and example generators.

Arrow and vertex identifiers are strings; the canonical order everywhere is
lexicographic so that reports are deterministic.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping


class QuiverError(ValueError):
    """Base class for invalid quiver input.  ``subject`` names the offending vertex or arrow."""

    def __init__(self, message: str, subject=None):
        super().__init__(message)
        self.subject = subject

    @property
    def name(self) -> str:
        return type(self).__name__


class NotTwoRegular(QuiverError):
    pass


class NotConnected(QuiverError):
    pass


class FNotPermutation(QuiverError):
    pass


class FCubeNotIdentity(QuiverError):
    pass


class FTargetMismatch(QuiverError):
    pass


class TooFewVertices(QuiverError):
    pass


class MalformedQuiver(QuiverError):
    """Duplicate ids, dangling endpoints and similar structural problems."""


class InvalidWeights(QuiverError):
    """Weights or parameters that are not constant on g-cycles, missing, or out of range."""


class UnknownCatalogEntry(QuiverError):
    pass


@dataclass(frozen=True)
class Arrow:
    id: str
    source: str
    target: str

    @property
    def is_loop(self) -> bool:
        return self.source == self.target


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise MalformedQuiver("duplicate vertex identifier")
        seen = set()
        for a in self.arrows:
            if a.id in seen:
                raise MalformedQuiver(f"duplicate arrow identifier {a.id!r}", a.id)
            seen.add(a.id)
            for end in (a.source, a.target):
                if end not in self.vertices:
                    raise MalformedQuiver(f"arrow {a.id!r} uses unknown vertex {end!r}", a.id)

    @property
    def arrow_ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.arrows)

    def arrow(self, a: str) -> Arrow:
        return self._by_id[a]

    @property
    def _by_id(self) -> dict[str, Arrow]:
        cache = self.__dict__.get("_cache_by_id")
        if cache is None:
            cache = {a.id: a for a in self.arrows}
            object.__setattr__(self, "_cache_by_id", cache)
        return cache

    def source(self, a: str) -> str:
        return self._by_id[a].source

    def target(self, a: str) -> str:
        return self._by_id[a].target

    def out_arrows(self, v: str) -> list[str]:
        return sorted(a.id for a in self.arrows if a.source == v)

    def in_arrows(self, v: str) -> list[str]:
        return sorted(a.id for a in self.arrows if a.target == v)

    def is_loop(self, a: str) -> bool:
        return self._by_id[a].is_loop

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj: dict[str, set[str]] = {v: set() for v in self.vertices}
        for a in self.arrows:
            adj[a.source].add(a.target)
            adj[a.target].add(a.source)
        seen = {self.vertices[0]}
        queue = deque(seen)
        while queue:
            v = queue.popleft()
            for w in adj[v] - seen:
                seen.add(w)
                queue.append(w)
        return len(seen) == len(self.vertices)

    def without(self, removed: Iterable[str]) -> "Quiver":
        removed = set(removed)
        return Quiver(self.vertices, tuple(a for a in self.arrows if a.id not in removed))


@dataclass(frozen=True)
class CycleDecomposition:
    """Cycles of a permutation, each rotated so that its smallest arrow id comes first."""

    cycles: tuple[tuple[str, ...], ...]
    cycle_of: Mapping[str, tuple[int, int]] = field(compare=False, repr=False)

    @classmethod
    def of(cls, perm: Mapping[str, str]) -> "CycleDecomposition":
        cycles = []
        seen: set[str] = set()
        for start in sorted(perm):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            nxt = perm[start]
            while nxt != start:
                cyc.append(nxt)
                seen.add(nxt)
                nxt = perm[nxt]
            cycles.append(tuple(cyc))
        cycles.sort()
        cycle_of = {a: (i, pos) for i, cyc in enumerate(cycles) for pos, a in enumerate(cyc)}
        return cls(tuple(cycles), cycle_of)

    def cycle(self, a: str) -> tuple[str, ...]:
        return self.cycles[self.cycle_of[a][0]]

    def length(self, a: str) -> int:
        return len(self.cycle(a))

    def representative(self, a: str) -> str:
        return self.cycle(a)[0]


def _cycles_to_perm(cycles: Iterable[Iterable[str]], arrows: Iterable[str]) -> dict[str, str]:
    arrows = set(arrows)
    perm: dict[str, str] = {}
    for cyc in cycles:
        cyc = list(cyc)
        if not cyc:
            raise FNotPermutation("empty cycle in f")
        for k, a in enumerate(cyc):
            if a not in arrows:
                raise FNotPermutation(f"f mentions unknown arrow {a!r}", a)
            if a in perm:
                raise FNotPermutation(f"arrow {a!r} occurs twice in f", a)
            perm[a] = cyc[(k + 1) % len(cyc)]
    missing = sorted(arrows - set(perm))
    if missing:
        raise FNotPermutation(f"f does not move or fix arrow {missing[0]!r}", missing[0])
    return perm


class TriangulationQuiver:
    """A connected 2-regular quiver with a permutation ``f`` of order dividing 3.

    ``bar`` and ``g`` are derived from ``f`` and never read from input.
    """

    def __init__(self, quiver: Quiver, f: Mapping[str, str] | Iterable[Iterable[str]]):
        if not isinstance(f, Mapping):
            f = _cycles_to_perm(f, quiver.arrow_ids)
        f = dict(f)
        ids = set(quiver.arrow_ids)
        if set(f) != ids or set(f.values()) != ids:
            bad = sorted((ids ^ set(f)) | (ids ^ set(f.values())))
            raise FNotPermutation(f"f is not a permutation of the arrows (at {bad[0]!r})", bad[0])
        for a in sorted(ids):
            if quiver.target(a) != quiver.source(f[a]):
                raise FTargetMismatch(
                    f"t({a}) = {quiver.target(a)} but s(f({a})) = s({f[a]}) = {quiver.source(f[a])}", a
                )
        for a in sorted(ids):
            if f[f[f[a]]] != a:
                raise FCubeNotIdentity(f"f^3({a}) = {f[f[f[a]]]} != {a}", a)
        if len(quiver.vertices) < 2:
            raise TooFewVertices("a triangulation quiver needs at least two vertices")
        for v in quiver.vertices:
            n_out, n_in = len(quiver.out_arrows(v)), len(quiver.in_arrows(v))
            if n_out != 2 or n_in != 2:
                raise NotTwoRegular(f"vertex {v} has {n_out} outgoing and {n_in} incoming arrows", v)
        if not quiver.is_connected():
            raise NotConnected("quiver is not connected", quiver.vertices[0])

        self.quiver = quiver
        self.f = f
        self.f_inv = {b: a for a, b in f.items()}
        self.bar = {}
        for v in quiver.vertices:
            a, b = quiver.out_arrows(v)
            self.bar[a], self.bar[b] = b, a
        self.g = {a: self.bar[f[a]] for a in f}
        self.g_inv = {b: a for a, b in self.g.items()}
        self.f_cycles = CycleDecomposition.of(self.f)
        self.g_cycles = CycleDecomposition.of(self.g)

    # conveniences
    @property
    def arrows(self) -> tuple[str, ...]:
        return tuple(sorted(self.quiver.arrow_ids))

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.quiver.vertices

    def s(self, a: str) -> str:
        return self.quiver.source(a)

    def t(self, a: str) -> str:
        return self.quiver.target(a)

    def n(self, a: str) -> int:
        """Length of the g-cycle through ``a``."""
        return self.g_cycles.length(a)

    def is_loop(self, a: str) -> bool:
        return self.quiver.is_loop(a)

    def __eq__(self, other):
        if not isinstance(other, TriangulationQuiver):
            return NotImplemented
        return (set(self.quiver.vertices) == set(other.quiver.vertices)
                and set(self.quiver.arrows) == set(other.quiver.arrows)
                and self.f == other.f)

    def __repr__(self):
        return f"TriangulationQuiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"


def make_triangulation_quiver(vertices, arrows, f_cycles) -> TriangulationQuiver:
    """Build from plain data: ``arrows`` is an iterable of ``(id, source, target)``."""
    q = Quiver(tuple(vertices), tuple(Arrow(*a) for a in arrows))
    return TriangulationQuiver(q, [tuple(c) for c in f_cycles])


def derive_g(tq: TriangulationQuiver) -> CycleDecomposition:
    return tq.g_cycles


# -- weights ---------------------------------------------------------------


def expand_per_cycle(tq: TriangulationQuiver, values: Mapping[str, object], what: str) -> dict[str, object]:
    """Spread per-g-cycle values (keyed by any arrow of the cycle) over all arrows."""
    out: dict[str, object] = {}
    for rep, val in values.items():
        if rep not in tq.f:
            raise InvalidWeights(f"{what} given for unknown arrow {rep!r}", rep)
        for a in tq.g_cycles.cycle(rep):
            if a in out and out[a] != val:
                raise InvalidWeights(f"{what} not constant on the g-cycle of {rep!r}", rep)
            out[a] = val
    missing = [a for a in tq.arrows if a not in out]
    if missing:
        raise InvalidWeights(f"no {what} for the g-cycle of {missing[0]!r}", missing[0])
    return out


def classify_virtual(tq: TriangulationQuiver, m: Mapping[str, int]) -> frozenset[str]:
    m = expand_per_cycle(tq, m, "weight")
    return frozenset(a for a in tq.arrows if m[a] * tq.n(a) == 2)


@dataclass(frozen=True)
class AssumptionViolation:
    arrow: str
    clause: int
    value: int
    required: int

    def __str__(self):
        return f"clause ({self.clause}): m*n = {self.value} < {self.required} for arrow {self.arrow}"


def check_assumptions(tq: TriangulationQuiver, m: Mapping[str, int]) -> list[AssumptionViolation]:
    m = expand_per_cycle(tq, m, "weight")
    virtual = classify_virtual(tq, m)
    out = []
    for a in tq.arrows:
        mn = m[a] * tq.n(a)
        abar = tq.bar[a]
        if mn < 2:
            out.append(AssumptionViolation(a, 1, mn, 2))
        elif abar in virtual and not tq.is_loop(abar) and mn < 3:
            out.append(AssumptionViolation(a, 2, mn, 3))
        elif abar in virtual and tq.is_loop(abar) and mn < 4:
            out.append(AssumptionViolation(a, 3, mn, 4))
    return out


@dataclass
class FactCheck:
    name: str
    passed: bool
    witnesses: list = field(default_factory=list)


def virtual_facts(tq: TriangulationQuiver, m: Mapping[str, int]) -> list[FactCheck]:
    """The three combinatorial facts about virtual arrows, each with failing witnesses."""
    virtual = classify_virtual(tq, m)
    f, bar, g_inv = tq.f, tq.bar, tq.g_inv
    fact1 = FactCheck("virtual iff f^2(bar) virtual", True)
    for a in tq.arrows:
        if f[f[bar[a]]] != g_inv[a]:
            fact1.passed = False
            fact1.witnesses.append(("f^2(bar a) != g^-1(a)", a))
        if (a in virtual) != (f[f[bar[a]]] in virtual):
            fact1.passed = False
            fact1.witnesses.append(("equivalence fails", a))
    fact2 = FactCheck("at most one virtual arrow per f-cycle", True)
    for cyc in tq.f_cycles.cycles:
        hits = [a for a in cyc if a in virtual]
        if len(hits) > 1:
            fact2.passed = False
            fact2.witnesses.append(tuple(hits))
    fact3 = FactCheck("bar of a virtual arrow is not virtual", True)
    for a in sorted(virtual):
        if bar[a] in virtual:
            fact3.passed = False
            fact3.witnesses.append((a, bar[a]))
    return [fact1, fact2, fact3]


# -- the Q' configuration ---------------------------------------------------


@dataclass(frozen=True)
class QPrimeHit:
    """A g-3-cycle meeting a g-2-cycle at a vertex.

    ``abar`` lies on the 3-cycle, ``alpha = bar(abar)`` on the 2-cycle.
    """

    abar: str
    alpha: str
    beta: str
    f_beta: str
    f2_beta: str
    short_length: int
    long_length: int
    three_cycle_ok: bool

    @property
    def observation_holds(self) -> bool:
        return self.three_cycle_ok and self.short_length == 3 and self.long_length >= 5


def find_qprime_configs(tq: TriangulationQuiver) -> list[QPrimeHit]:
    f, g, bar = tq.f, tq.g, tq.bar
    hits = []
    for abar in tq.arrows:
        alpha = bar[abar]
        if tq.n(abar) != 3 or tq.n(alpha) != 2:
            continue
        beta = g[abar]
        hits.append(QPrimeHit(
            abar=abar,
            alpha=alpha,
            beta=beta,
            f_beta=f[beta],
            f2_beta=f[f[beta]],
            short_length=tq.n(beta),
            long_length=tq.n(f[abar]),
            three_cycle_ok=tq.g_cycles.cycle(abar) == tq.g_cycles.cycle(f[f[alpha]])
            and g[beta] == f[f[alpha]],
        ))
    return hits


def qprime_impossibilities(tq: TriangulationQuiver) -> list[tuple[str, str]]:
    """Arrows realising either forbidden pattern of g-cycle lengths near a Q' configuration.

    Pattern (2): n(abar) = n(f(abar)) = 3 and n(bar abar) = 2.
    Pattern (3): n(f(abar)) = 2 and n(abar) = n(f(bar abar)) = 3.
    """
    f, bar, n = tq.f, tq.bar, tq.n
    bad = []
    for ab in tq.arrows:
        a = bar[ab]
        if n(ab) == 3 and n(f[ab]) == 3 and n(a) == 2:
            bad.append(("pattern-2", ab))
        if n(f[ab]) == 2 and n(ab) == 3 and n(f[a]) == 3:
            bad.append(("pattern-3", ab))
    return bad


def loops_in_three_cycles(tq: TriangulationQuiver) -> list[str]:
    return [a for a in tq.arrows if tq.n(a) == 3 and tq.is_loop(a)]


# -- generators ---------------------------------------------------------------


def generate_glued(n: int) -> TriangulationQuiver:
    """Cyclic quiver on ``n`` vertices with a copy of Q' attached at every vertex.

    Copy ``i`` has vertices ``a_i b_i c_i d_i`` plus ``w_i`` (the cyclic vertex).
    The cyclic arrow ``w_i -> w_{i+1}`` is split through a new vertex ``v_i``
    into ``xs_i: w_i -> v_i`` and ``xt_i: v_i -> w_{i+1}``, and a new arrow
    ``y_i: v_{i+1} -> v_i`` closes the f-triangle ``(xt_i, xs_{i+1}, y_i)``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    vertices, arrows, f_cycles = [], [], []
    for i in range(1, n + 1):
        j = i % n + 1
        a, b, c, d, w, v = (f"{x}{i}" for x in "abcdwv")
        vertices += [a, b, c, d, w, v]
        arrows += [
            (f"abar{i}", a, c), (f"sigma{i}", c, b), (f"tau{i}", b, a),
            (f"alpha{i}", a, b), (f"fa{i}", b, d), (f"ffa{i}", d, a),
            (f"beta{i}", c, d), (f"fbeta{i}", d, w), (f"ffbeta{i}", w, c),
            (f"xs{i}", w, v), (f"xt{i}", v, f"w{j}"), (f"y{i}", f"v{j}", v),
        ]
        f_cycles += [
            (f"abar{i}", f"sigma{i}", f"tau{i}"),
            (f"alpha{i}", f"fa{i}", f"ffa{i}"),
            (f"beta{i}", f"fbeta{i}", f"ffbeta{i}"),
            (f"xt{i}", f"xs{j}", f"y{i}"),
        ]
    return make_triangulation_quiver(vertices, arrows, f_cycles)


def glued_weights(tq: TriangulationQuiver, n: int) -> dict[str, int]:
    """Weights for :func:`generate_glued`: m = 1 except on the inner ``y`` cycle."""
    m = {rep: 1 for rep in (c[0] for c in tq.g_cycles.cycles)}
    y_rep = tq.g_cycles.representative("y1")
    m[y_rep] = max(1, -(-3 // n))
    return m


_TRIANGLE = dict(
    vertices=["1", "2", "3"],
    arrows=[("abar", "1", "1"), ("alpha", "1", "2"), ("beta", "2", "1"),
            ("gamma", "2", "3"), ("delta", "3", "2"), ("eps", "3", "3")],
    f=[("abar", "alpha", "beta"), ("gamma", "eps", "delta")],
    m={"abar": 2, "alpha": 1, "eps": 2},
)

_SPHERICAL = dict(
    vertices=["i", "j", "k", "u", "v", "y"],
    arrows=[("alpha", "i", "j"), ("falpha", "j", "k"), ("ffalpha", "k", "i"),
            ("abar", "i", "k"), ("fabar", "k", "y"), ("ffabar", "y", "i"),
            ("a1", "j", "u"), ("a2", "u", "v"), ("a3", "v", "j"),
            ("b1", "y", "v"), ("b2", "v", "u"), ("b3", "u", "y")],
    f=[("alpha", "falpha", "ffalpha"), ("abar", "fabar", "ffabar"),
       ("a1", "a2", "a3"), ("b1", "b2", "b3")],
    m={"alpha": 1, "falpha": 1, "abar": 1, "a2": 1},
)

# A virtual loop at vertex 1 and a virtual 2-cycle (p, r) between vertices 3
# and 4, joined through a g-cycle of length 7: both local pictures around a
# virtual arrow (loop and non-loop) inside one quiver.
_LOOP_PAIR = dict(
    vertices=["1", "2", "3", "4", "5"],
    arrows=[("abar", "1", "1"), ("alpha", "1", "2"), ("falpha", "2", "1"),
            ("gamma", "2", "3"), ("p", "3", "4"), ("q", "4", "2"),
            ("r", "4", "3"), ("s", "3", "5"), ("t", "5", "4"), ("z", "5", "5")],
    f=[("abar", "alpha", "falpha"), ("gamma", "p", "q"), ("r", "s", "t"), ("z",)],
    m={"abar": 2, "p": 1, "alpha": 1},
)


def _named(data) -> TriangulationQuiver:
    return make_triangulation_quiver(data["vertices"], data["arrows"], data["f"])


CATALOG_NAMES = ("T", "S", "LOOP-PAIR", "GLUED(n)")


def parse_glued_name(name: str) -> int | None:
    text = name.strip().upper()
    for prefix in ("GLUED(", "GLUED:", "GLUED"):
        if text.startswith(prefix):
            body = text[len(prefix):].rstrip(")")
            if body.isdigit() and int(body) >= 1:
                return int(body)
    return None


def catalog(name: str) -> tuple[TriangulationQuiver, dict[str, int]]:
    """Named example quivers with weights satisfying the assumption.

    Returns ``(quiver, weights)``; weights are keyed by g-cycle representative.
    Parameters are drawn separately (see :func:`wsa.presentation.generic_parameters`).
    """
    key = name.strip().upper()
    n = parse_glued_name(name)
    if n is not None:
        tq = generate_glued(n)
        return tq, glued_weights(tq, n)
    if key in ("T", "TRIANGLE"):
        data = _TRIANGLE
    elif key in ("S", "SPHERICAL"):
        data = _SPHERICAL
    elif key == "LOOP-PAIR":
        data = _LOOP_PAIR
    else:
        raise UnknownCatalogEntry(f"unknown catalog entry {name!r}; known: {', '.join(CATALOG_NAMES)}", name)
    tq = _named(data)
    m = {c[0]: 1 for c in tq.g_cycles.cycles}
    for rep, val in data["m"].items():
        m[tq.g_cycles.representative(rep)] = val
    return tq, m
