"""Roots, stems, connections and the largest nilpotent ideal of a pseudo-nilpotent semigroup.

Throughout, the principal series is indexed from 0 at the top:
``chain[k] = S_k`` and ``J_k = S_k \\ S_{k+1}`` is factor k.  For factor k,
``F_k`` holds the elements above S_k that multiply J_k back into J_k on some
side (the nonzero elements of F_{J_k}(S/S_{k+1})), and ``F'_k`` the rest of
S \\ S_k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .core import (FiniteSemigroup, PreconditionError, bits, enumerate_ideals, is_closed,
                   is_ideal, popcount, rees_quotient)
from .graphs import (ComponentDecomposition, NilpotencyCache, NonNilpotentGraph, bfs_distances,
                     decompose, induced_diameter, lower_graph, upper_graph)
from .nilpotency import group_nilpotency_class, is_nilpotent
from .pseudo import is_pseudo_nilpotent
from .structure import (C0SConstraint, FactorKind, PrincipalSeries, check_c0s_pseudo_constraint,
                        green_classes, principal_series)


# -- frame sets -------------------------------------------------------------

@dataclass(frozen=True)
class FrameSets:
    ideal_j: int
    f_j: int
    f_prime_j: int


def frame_sets(s: FiniteSemigroup, ideal: int) -> FrameSets:
    """F_J and F'_J for an ideal J containing the zero of ``s``.

    F_J = {x not in J : xj != θ or jx != θ for some j in J}; F'_J is the rest
    of S \\ J together with θ.
    """
    if s.zero is None:
        raise PreconditionError("frame sets need a semigroup with zero")
    if not ideal >> s.zero & 1 or not is_ideal(s, ideal):
        raise PreconditionError(f"{s.labels(ideal)} is not an ideal containing the zero")
    t = s.table
    z = s.zero
    f = 0
    for x in range(s.order):
        if ideal >> x & 1:
            continue
        if any(t[x][j] != z or t[j][x] != z for j in bits(ideal)):
            f |= 1 << x
    rest = s.full_mask & ~ideal & ~f
    return FrameSets(ideal, f, rest | 1 << z)


def series_frame(series: PrincipalSeries, k: int) -> tuple[int, int]:
    """(F_k, F'_k) as element masks of S."""
    s = series.semigroup
    t = s.table
    j = series.factors[k].j_class
    above = s.full_mask & ~series.chain[k]
    f = 0
    for x in bits(above):
        if any(j >> t[x][y] & 1 or j >> t[y][x] & 1 for y in bits(j)):
            f |= 1 << x
    return f, above & ~f


# -- Φ ------------------------------------------------------------------------

@dataclass
class PhiHom:
    """Map of S onto the rectangular band (I × Λ)^0 induced by factor ``factor``."""

    factor: int
    rows: int
    cols: int
    image: dict[int, tuple[int, int] | None]

    def classes(self) -> list[int]:
        """Fibres of the non-θ values, ordered by (row, column)."""
        fib: dict[tuple[int, int], int] = {}
        for x, v in self.image.items():
            if v is not None:
                fib[v] = fib.get(v, 0) | 1 << x
        return [fib[k] for k in sorted(fib)]

    def class_count(self, mask: int) -> int:
        return len({self.image[x] for x in bits(mask) if self.image[x] is not None})

    @staticmethod
    def band_mul(u, v):
        if u is None or v is None:
            return None
        return (u[0], v[1])

    def homomorphism_failures(self, s: FiniteSemigroup) -> list[tuple[int, int]]:
        t = s.table
        return [(x, y) for x in range(s.order) for y in range(s.order)
                if self.image[t[x][y]] != self.band_mul(self.image[x], self.image[y])]

    def is_onto(self) -> bool:
        got = {v for v in self.image.values() if v is not None}
        return len(got) == self.rows * self.cols

    def as_dict(self, s: FiniteSemigroup) -> dict:
        return {
            "factor": self.factor,
            "rows": self.rows,
            "cols": self.cols,
            "image": {s.names[x]: (None if v is None else list(v)) for x, v in sorted(self.image.items())},
            "classes": [s.labels(c) for c in self.classes()],
        }


def phi_homomorphism(series: PrincipalSeries, k: int, frame: tuple[int, int] | None = None) -> PhiHom:
    """Φ_k(a) = (row of a·J_k, column of J_k·a) on F_k ∪ J_k, θ elsewhere."""
    s = series.semigroup
    fac = series.factors[k]
    if fac.kind is FactorKind.NULL or fac.nilpotent:
        raise PreconditionError(f"factor {k} is nilpotent; it induces no homomorphism")
    rees = fac.rees
    if not rees.all_nonzero():
        raise PreconditionError(f"factor {k} has a zero sandwich entry")
    f, _ = frame or series_frame(series, k)
    t = s.table
    j = fac.j_class
    image: dict[int, tuple[int, int] | None] = {x: None for x in range(s.order)}
    for a in bits(f | j):
        rows = set()
        cols = set()
        for y in bits(j):
            ay, ya = t[a][y], t[y][a]
            if not (j >> ay & 1 and j >> ya & 1):
                raise PreconditionError(f"{s.names[a]} sends part of factor {k} outside it")
            rows.add(rees.coords[ay][1])
            cols.add(rees.coords[ya][2])
        if len(rows) != 1 or len(cols) != 1:
            raise PreconditionError(f"{s.names[a]} meets several rows or columns of factor {k}")
        image[a] = (rows.pop(), cols.pop())
    return PhiHom(k, len(rees.rows), len(rees.cols), image)


# -- the decomposition ------------------------------------------------------

@dataclass
class StemAnalysis:
    semigroup: FiniteSemigroup
    series: PrincipalSeries
    graph: NonNilpotentGraph
    components: ComponentDecomposition
    frames: dict[int, tuple[int, int]]
    roots: list[int]
    isolated_subsets: list[int]
    K: int
    stems: dict[int, int]  # root -> S^(root)
    connections: list[tuple[int, int, int]]  # (factor, root, root)
    phi: dict[int, PhiHom]
    pseudo_checked: bool = True

    def j(self, k: int) -> int:
        return self.series.factors[k].j_class

    def stem_of_factor(self, k: int) -> int:
        """F_k ∪ J_k, defined for every factor."""
        return self.frames[k][0] | self.j(k)

    def nilpotent_factor(self, k: int) -> bool:
        return self.series.factors[k].nilpotent

    def connected_roots(self) -> list[tuple[int, int]]:
        return sorted({(r1, r2) for _, r1, r2 in self.connections})

    def as_dict(self) -> dict:
        s = self.semigroup
        lab = s.labels
        return {
            "series": [lab(f.j_class) for f in self.series.factors],
            "roots": [lab(self.j(r)) for r in self.roots],
            "isolated_subsets": [lab(self.j(k)) for k in self.isolated_subsets],
            "K": lab(self.K),
            "stems": [{"root": lab(self.j(r)), "stem": lab(m)} for r, m in self.stems.items()],
            "connections": [{"connection": lab(self.j(k)), "between": [lab(self.j(r1)), lab(self.j(r2))]}
                            for k, r1, r2 in self.connections],
            "phi": {str(k): p.as_dict(s) for k, p in self.phi.items()},
        }


def analyze(s: FiniteSemigroup, tie_break: str = "lex", check_pseudo: bool = True,
            graph: NonNilpotentGraph | None = None, **pseudo_kw) -> StemAnalysis:
    """Roots, isolated subsets, K, stems, connections and Φ maps.

    The structure theory presumes pseudo-nilpotency, which is decided first
    unless ``check_pseudo`` is False (for semigroups beyond the search
    capacity whose pseudo-nilpotency is known by other means).
    """
    if check_pseudo:
        res = is_pseudo_nilpotent(s, witness=False, **pseudo_kw)
        if not res.holds:
            raise PreconditionError("the semigroup is not pseudo-nilpotent")
    series = principal_series(s, tie_break)
    graph = graph or upper_graph(s)
    comps = decompose(graph)
    m = len(series.factors)
    frames = {k: series_frame(series, k) for k in range(m)}

    roots = []
    for k, fac in enumerate(series.factors):
        if fac.nilpotent:
            continue
        below = series.chain[k + 1]
        if not any(graph.adjacency[x] & below for x in bits(fac.j_class)):
            roots.append(k)
    isolated = []
    for k, fac in enumerate(series.factors):
        if k in roots:
            continue
        if all(series.factors[j].nilpotent for j in range(m)
               if fac.j_class & ~frames[j][0] == 0):
            isolated.append(k)
    K = 0
    for k in isolated:
        K |= series.factors[k].j_class
    stems = {r: frames[r][0] | series.factors[r].j_class for r in roots}
    connections = []
    for r1, r2 in combinations(roots, 2):
        if stems[r1] == stems[r2]:
            continue
        shared = stems[r1] & stems[r2]
        for k, fac in enumerate(series.factors):
            if fac.j_class & ~shared == 0:
                connections.append((k, r1, r2))
    phi = {}
    for k, fac in enumerate(series.factors):
        if not fac.nilpotent and fac.rees is not None and fac.rees.all_nonzero():
            phi[k] = phi_homomorphism(series, k, frames[k])
    return StemAnalysis(s, series, graph, comps, frames, roots, isolated, K, stems,
                        connections, phi, check_pseudo)


# -- strong pseudo-nilpotency -----------------------------------------------

@dataclass
class StrongReport:
    holds: bool
    violations: list[dict] = field(default_factory=list)


def strong_violations(a: StemAnalysis) -> list[dict]:
    s = a.semigroup
    out = []
    for k, r1, r2 in a.connections:
        for r in (r1, r2):
            if r not in a.phi or a.phi[r].class_count(a.j(k)) < 2:
                out.append({"condition": "H1", "connection": s.labels(a.j(k)),
                            "root": s.labels(a.j(r))})
    m = len(a.series.factors)
    for i in range(m):
        for j in range(i + 1, m):
            ji, jj = a.j(i), a.j(j)
            edge = any(a.graph.adjacency[x] & jj for x in bits(ji))
            if edge and ji & ~a.frames[j][0]:
                out.append({"condition": "H2", "upper": s.labels(ji), "lower": s.labels(jj)})
    return out


def is_strong_pseudo_nilpotent(s: FiniteSemigroup, analysis: StemAnalysis | None = None,
                               **kw) -> StrongReport:
    a = analysis or analyze(s, **kw)
    v = strong_violations(a)
    return StrongReport(not v, v)


# -- K_a ------------------------------------------------------------------------

@dataclass(frozen=True)
class KaSet:
    a: int
    members: int
    right_members: int  # {s : sa not in K}

    @property
    def agrees(self) -> bool:
        return self.members == self.right_members


def k_a_sets(a: StemAnalysis) -> list[KaSet]:
    s = a.semigroup
    t = s.table
    out = []
    for x in bits(s.full_mask & ~a.K):
        left = sum(1 << y for y in range(s.order) if not a.K >> t[x][y] & 1)
        right = sum(1 << y for y in range(s.order) if not a.K >> t[y][x] & 1)
        out.append(KaSet(x, left, right))
    return out


def maximal_k_a(sets: list[KaSet]) -> list[int]:
    masks = sorted({k.members for k in sets}, key=lambda m: m & -m)
    return [m for m in masks if not any(m != o and m & ~o == 0 for o in masks)]


# -- conformance ---------------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ConformanceReport:
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def as_dict(self) -> dict:
        return {"passed": self.passed,
                "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks]}


def largest_nilpotent_ideal(s: FiniteSemigroup) -> int:
    """Union of all nilpotent ideals, checked to be nilpotent itself (0 if there are none)."""
    nil = [i for i in enumerate_ideals(s) if i and is_nilpotent(s, i)]
    best = 0
    for i in nil:
        best |= i
    if best and best not in nil:
        raise PreconditionError("the nilpotent ideals have no largest element")
    return best


def verify_conformance(a: StemAnalysis, strong: bool | None = None) -> ConformanceReport:
    """Instantiate every structural consequence of pseudo-nilpotency on this semigroup."""
    s = a.semigroup
    t = s.table
    lab = s.labels
    series = a.series
    m = len(series.factors)
    g = a.graph
    checks: list[CheckResult] = []

    def add(name, ok, detail=""):
        checks.append(CheckResult(name, bool(ok), "" if ok else detail))

    # series soundness
    for k in range(m + 1):
        add(f"series ideal S_{k}", is_ideal(s, series.chain[k]), lab(series.chain[k]))
    if s.order <= 12:
        ideals = enumerate_ideals(s)
        for k in range(m):
            hi, lo = series.chain[k], series.chain[k + 1]
            between = [i for i in ideals if i != hi and i != lo and i & ~hi == 0 and lo & ~i == 0]
            add(f"no ideal strictly between S_{k} and S_{k + 1}", not between,
                str([lab(i) for i in between]))

    # regular factors
    for k, fac in enumerate(series.factors):
        if fac.kind is FactorKind.NULL:
            continue
        add(f"Rees reconstruction of factor {k}", fac.rees.reconstruct(s, fac.below))
        verdict = check_c0s_pseudo_constraint(s, fac)
        add(f"factor {k} is nilpotent or a union of nilpotent groups",
            verdict is not C0SConstraint.VIOLATES, lab(fac.j_class))
        inverse = fac.rees.is_inverse() and group_nilpotency_class(s, fac.rees.group) is not None
        add(f"factor {k} nilpotent iff inverse with nilpotent group", inverse == fac.nilpotent)

    # frame sets and Φ for non-nilpotent factors
    for k, phi in a.phi.items():
        j = a.j(k)
        f, fp = a.frames[k]
        rhs = 0
        for x in bits(s.full_mask & ~series.chain[k]):
            if all(j >> t[x][y] & 1 and j >> t[y][x] & 1 and all(j >> t[t[z][x]][y] & 1 for z in bits(j))
                   for y in bits(j)):
                rhs |= 1 << x
        add(f"F of factor {k} is where every jx, xj, j'xj stays in the factor", f == rhs,
            f"{lab(f)} vs {lab(rhs)}")
        add(f"F of factor {k} with the factor is a subsemigroup", is_closed(s, f | j))
        add(f"F' of factor {k} with S_{k + 1} is an ideal", is_ideal(s, fp | series.chain[k + 1]))
        add(f"S minus F of factor {k} is an ideal", is_ideal(s, s.full_mask & ~f))
        bad = phi.homomorphism_failures(s)
        add(f"Φ_{k} is a homomorphism", not bad, str(bad[:3]))
        add(f"Φ_{k} is onto", phi.is_onto())
        add(f"Φ_{k} is θ exactly off F ∪ J", all((phi.image[x] is None) == (not (f | j) >> x & 1)
                                                  for x in range(s.order)))
        # Φ(a) is the unique block of the factor that a has no edge to, in S/S_{k+1}
        q = rees_quotient(s, series.chain[k + 1]) if series.chain[k + 1] else None
        qs = q.semigroup if q else s
        qg = upper_graph(qs)
        rees = series.factors[k].rees
        ok = True
        for x in bits(f | j):
            qx = q.from_parent(x) if q else x
            for y in bits(j):
                qy = q.from_parent(y) if q else y
                same = rees.coords[y][1:] == phi.image[x]
                if x != y and qg.has_edge(qx, qy) == same:
                    ok = False
        add(f"Φ_{k} blocks are exactly the non-neighbours inside the factor", ok)
        ok = all(phi.image[x] == phi.image[y] or qg.has_edge(q.from_parent(x) if q else x,
                                                             q.from_parent(y) if q else y)
                 for x in bits(f | j) for y in bits(f | j) if x != y)
        add(f"different Φ_{k} values are adjacent", ok)

    # K
    iso = a.components.isolated
    add("K equals the isolated vertices of N_S", a.K == iso, f"{lab(a.K)} vs {lab(iso)}")
    lni = largest_nilpotent_ideal(s)
    add("K equals the largest nilpotent ideal", a.K == lni, f"{lab(a.K)} vs {lab(lni)}")
    add("K is an ideal", is_ideal(s, a.K))
    add("K is nilpotent", a.K == 0 or is_nilpotent(s, a.K))

    all_stems = {k: a.stem_of_factor(k) for k in range(m)}

    def within(k, mask):
        return a.j(k) & ~mask == 0

    # stem membership: transitivity and Φ compatibility
    ok, ok_phi = True, True
    for i1 in range(m):
        for i2 in range(m):
            if not within(i1, all_stems[i2]):
                continue
            for i3 in range(m):
                if not within(i2, all_stems[i3]):
                    continue
                if not within(i1, all_stems[i3]):
                    ok = False
                if i2 in a.phi and i3 in a.phi:
                    p2, p3 = a.phi[i2], a.phi[i3]
                    rees2 = series.factors[i2].rees
                    for x in bits(a.j(i1)):
                        if p2.image[x] is None:
                            continue
                        i, lam = p2.image[x]
                        for gg in bits(rees2.group):
                            if p3.image[x] != p3.image[rees2.element(gg, i, lam, s)]:
                                ok_phi = False
    add("stem membership is transitive", ok)
    add("Φ values are compatible along stems", ok_phi)

    # every non-root, non-isolated factor hangs below a root
    for k in range(m):
        if k in a.roots or k in a.isolated_subsets:
            continue
        add(f"factor {k} lies in the stem of a lower root",
            any(r > k and within(k, a.stems[r]) for r in a.roots), lab(a.j(k)))
    # stems cover S minus K
    union = 0
    for st in a.stems.values():
        union |= st
    add("S minus K is the union of the stems", union == s.full_mask & ~a.K,
        f"{lab(union)} vs {lab(s.full_mask & ~a.K)}")
    # stems are closed
    for r, st in a.stems.items():
        add(f"stem of root {r} is a subsemigroup", is_closed(s, st), lab(st))

    # products across stems vanish into K
    def same_stem(i, j):
        return any(within(i, st) and within(j, st) for st in a.stems.values())

    ok = True
    for i in range(m):
        for j in range(m):
            prod_in_k = all(a.K >> t[x][y] & 1 for x in bits(a.j(i)) for y in bits(a.j(j)))
            if prod_in_k == same_stem(i, j):
                ok = False
    add("products of factors fall in K iff they share no stem", ok)

    # edges stay inside stems
    ok = all(any((st >> x & 1) and (st >> y & 1) for st in a.stems.values()) for x, y in g.edges())
    add("every edge lies inside a stem", ok)

    # diameters
    for r, st in a.stems.items():
        d = induced_diameter_global(g, st)
        add(f"stem of root {r} has diameter at most 2", d is not None and d <= 2, f"diameter {d}")
    if a.K == 0:
        add("with K empty there is a single stem covering S",
            len(set(a.stems.values())) == 1 and s.full_mask in a.stems.values())
        d = induced_diameter_global(g, s.full_mask)
        add("with K empty N_S has diameter at most 2", d is not None and d <= 2, f"diameter {d}")
    nontrivial = a.components.nontrivial()
    if not a.connections:
        stem_sets = set(a.stems.values())
        add("without connections each component is a stem",
            all(c in stem_sets and is_closed(s, c) for c in nontrivial))
    for k, r1, r2 in a.connections:
        d = induced_diameter(g, a.stems[r1] | a.stems[r2])
        add(f"stems {r1} and {r2} joined by factor {k} span a connected set of diameter at most 4",
            d is not None and d <= 4, f"diameter {d}")

    # components
    for c in nontrivial:
        parts = [st for st in a.stems.values() if st & c]
        cover = 0
        for st in parts:
            cover |= st
        add(f"component {lab(c)} is a union of stems", cover == c and all(st & ~c == 0 for st in parts))
    for c in a.components.components:
        add(f"component {lab(c)} with K is a subsemigroup", is_closed(s, c | a.K))
    ok = all(a.K >> t[x][y] & 1 for c1 in nontrivial for c2 in nontrivial if c1 != c2
             for x in bits(c1) for y in bits(c2))
    add("S/K is the 0-disjoint union of the components", ok)

    # monoids
    if s.identity is not None:
        add("a pseudo-nilpotent monoid is nilpotent", is_nilpotent(s))

    # graph facts
    if g.is_empty():
        add("empty N_S forces nilpotency", is_nilpotent(s))
    lg = lower_graph(s)
    add("L_S is a subgraph of N_S", lg.is_subgraph_of(g))
    if lg.is_empty():
        add("empty L_S forces empty N_S", g.is_empty())
    cache = NilpotencyCache(s)
    for ideal in enumerate_ideals(s):
        if not ideal or ideal == s.full_mask:
            continue
        if is_nilpotent(s, ideal) and is_nilpotent(rees_quotient(s, ideal).semigroup):
            add(f"nilpotent ideal {lab(ideal)} with nilpotent quotient forces nilpotency",
                is_nilpotent(s))
        if all(cache.generated_nilpotent(1 << x | 1 << y) for x in bits(ideal) for y in bits(ideal)):
            add(f"ideal {lab(ideal)} with empty graph consists of isolated vertices",
                ideal & ~iso == 0)

    # K_a
    kas = k_a_sets(a)
    add("K_a is the same from both sides", all(k.agrees for k in kas),
        str([s.names[k.a] for k in kas if not k.agrees]))

    if strong is None:
        strong = not strong_violations(a)
    if strong:
        # transitivity of connections between stems
        linked = {frozenset((r1, r2)) for _, r1, r2 in a.connections}
        roots = a.roots
        ok = all(frozenset((r1, r3)) in linked
                 for r1 in roots for r2 in roots for r3 in roots
                 if len({r1, r2, r3}) == 3 and frozenset((r1, r2)) in linked
                 and frozenset((r2, r3)) in linked and a.stems[r1] != a.stems[r3])
        add("connections between stems are transitive", ok)
        ok = True
        for r1, r2 in combinations(roots, 2):
            if a.stems[r1] != a.stems[r2] and frozenset((r1, r2)) not in linked:
                if a.components.component_of(next(bits(a.j(r1)))) == \
                        a.components.component_of(next(bits(a.j(r2)))):
                    ok = False
        add("unconnected stems lie in different components", ok)
        add("maximal K_a sets are the non-trivial components",
            sorted(maximal_k_a(kas)) == sorted(nontrivial),
            f"{[lab(x) for x in maximal_k_a(kas)]} vs {[lab(c) for c in nontrivial]}")
        ok = True
        rest = list(bits(s.full_mask & ~a.K))
        for x in rest:
            for y in rest:
                same = a.components.component_of(x) == a.components.component_of(y)
                z_exists = any(not a.K >> t[x][z] & 1 and not a.K >> t[z][y] & 1 for z in range(s.order))
                if same != z_exists:
                    ok = False
        add("components are detected by a common middle factor z", ok)
    return ConformanceReport(checks)


def induced_diameter_global(g: NonNilpotentGraph, mask: int) -> int | None:
    """Largest N_S distance between members of ``mask`` (paths may leave the set)."""
    members = list(bits(mask))
    if len(members) < 2:
        return 0
    d = bfs_distances(g.adjacency, members)[:, members]
    if (d < 0).any():
        return None
    return int(d.max())
