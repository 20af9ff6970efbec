"""Change-of-flag retractions and weak-map comparisons.

Two flags on the same matroid induce different sphere complexes on the same
vertex set; a cross-polytope shared by both supports a simplicial homotopy
equivalence between them.  Weak maps are decided by exhaustive rank or
covector comparison, and the representation-level obstruction is found by
exhaustive search over sign-preserving vertex assignments.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Mapping

from .lattice import Flag, GeometricLattice, MatroidInputError, make_flag
from .oriented import CovectorSet, cov_leq
from .report import ValidationReport
from .spheres import FlagRepresentation, Vertex
from . import topology
from .topology import SimplicialComplex


class SelectionError(RuntimeError):
    """No cross-coatom selection exists (should not happen for geometric input)."""


@dataclass(frozen=True)
class CrossSelection:
    """Coatoms C_0..C_{r-1}, one per block of the first flag's partition,
    landing in pairwise distinct blocks of the second flag's partition."""

    coatoms: tuple[frozenset, ...]
    f_parts: tuple[int, ...]
    g_parts: tuple[int, ...]

    def distinct(self) -> bool:
        return (
            len(set(self.f_parts)) == len(self.f_parts)
            and len(set(self.g_parts)) == len(self.g_parts)
        )


def select_cross_coatoms(
    lattice: GeometricLattice, flag_f: Flag, flag_g: Flag
) -> CrossSelection:
    """Pick one coatom per F-block so the G-blocks are also all distinct.

    Blocks of the two partitions form a bipartite graph with an edge where
    blocks share a coatom; the required selection is a perfect matching in
    that graph, built greedily with lexicographic preference so the result
    is deterministic.
    """
    rep_f = FlagRepresentation(lattice, flag_f)
    rep_g = FlagRepresentation(lattice, flag_g)
    r = lattice.r
    options: dict[tuple[int, int], list[frozenset]] = {}
    for i in range(r):
        for c in rep_f.parts[i]:
            options.setdefault((i, rep_g.part_of[c]), []).append(c)

    def matchable(fixed: dict[int, int], start: int) -> bool:
        # Kuhn's algorithm on the remaining blocks
        used_g = set(fixed.values())
        match_g: dict[int, int] = {}

        def augment(i: int, seen: set[int]) -> bool:
            for j in range(r):
                if j in used_g or j in seen or (i, j) not in options:
                    continue
                seen.add(j)
                if j not in match_g or augment(match_g[j], seen):
                    match_g[j] = i
                    return True
            return False

        return all(augment(i, set()) for i in range(start, r))

    chosen: dict[int, int] = {}
    for i in range(r):
        for j in sorted(set(j for (fi, j) in options if fi == i)):
            if j in chosen.values():
                continue
            chosen[i] = j
            if matchable(chosen, i + 1):
                break
            del chosen[i]
        if i not in chosen:
            raise SelectionError("no cross-coatom selection exists")
    coatoms = tuple(
        min(options[(i, chosen[i])], key=lattice.key) for i in range(r)
    )
    return CrossSelection(coatoms, tuple(range(r)), tuple(chosen[i] for i in range(r)))


@dataclass(frozen=True)
class RetractDescriptor:
    """Vertex collapse of one sphere complex onto a cross-polytope shared
    with the other flag's complex."""

    selection: CrossSelection
    source: FlagRepresentation
    target: FlagRepresentation
    vertex_map: Mapping[Vertex, Vertex]
    polytope: SimplicialComplex


def retraction_map(
    lattice: GeometricLattice, flag_f: Flag, flag_g: Flag
) -> RetractDescriptor:
    """Send every signed coatom in block i onto the selected coatom C_i."""
    sel = select_cross_coatoms(lattice, flag_f, flag_g)
    rep_f = FlagRepresentation(lattice, flag_f)
    rep_g = FlagRepresentation(lattice, flag_g)
    vmap: dict[Vertex, Vertex] = {}
    for i, block in enumerate(rep_f.parts):
        for c in block:
            for s in ("+", "-"):
                vmap[rep_f.vertex(c, s)] = rep_f.vertex(sel.coatoms[i], s)
    faces = []
    from itertools import product

    for signs in product(("+", "-"), repeat=lattice.r):
        faces.append([rep_f.vertex(c, s) for c, s in zip(sel.coatoms, signs)])
    polytope = SimplicialComplex(faces, vertex_order=rep_f.vertex_order(sel.coatoms))
    return RetractDescriptor(sel, rep_f, rep_g, vmap, polytope)


def verify_retraction(desc: RetractDescriptor) -> ValidationReport:
    """Certify the retraction: simplicial, idempotent onto the shared
    cross-polytope, and homologically a sphere on both sides."""
    rep = ValidationReport()
    lattice = desc.source.lattice
    s_f = desc.source.build(lattice.bottom).complex
    s_g = desc.target.build(lattice.bottom).complex

    rep.add("selection-distinct", desc.selection.distinct())
    rep.add("polytope-in-source", desc.polytope.is_subcomplex_of(s_f))
    rep.add("polytope-in-target", desc.polytope.is_subcomplex_of(s_g))
    rep.add("simplicial", topology.simplicial_map_check(s_f, desc.polytope, desc.vertex_map))
    idempotent = all(
        desc.vertex_map[desc.vertex_map[v]] == desc.vertex_map[v] for v in s_f.vertices
    )
    rep.add("idempotent", idempotent)
    rep.add(
        "composite-simplicial",
        topology.simplicial_map_check(s_f, s_g, desc.vertex_map),
    )
    want = topology.sphere_profile(lattice.r - 1)
    rep.add("source-sphere", topology.reduced_homology(s_f) == want)
    rep.add("target-sphere", topology.reduced_homology(s_g) == want)
    rep.add("polytope-sphere", topology.reduced_homology(desc.polytope) == want)
    return rep


# -- weak maps -----------------------------------------------------------------


@dataclass(frozen=True)
class WeakMapReport:
    verdict: bool
    witnesses: tuple = ()
    note: str = ""


def is_weak_map_matroid(m: GeometricLattice, n: GeometricLattice) -> WeakMapReport:
    """Rank never increases on any subset of the shared ground set."""
    if set(m.elements) != set(n.elements):
        raise MatroidInputError("weak map comparison needs a shared ground set")
    witnesses = []
    elements = m.elements
    for k in range(len(elements) + 1):
        for subset in combinations(elements, k):
            if m.rank_of_subset(subset) < n.rank_of_subset(subset):
                witnesses.append(tuple(subset))
    return WeakMapReport(not witnesses, tuple(witnesses))


def is_weak_map_covectors(m: CovectorSet, n: CovectorSet) -> WeakMapReport:
    """Every covector of the target lies below some covector of the source."""
    if m.elements != n.elements:
        raise MatroidInputError("weak map comparison needs a shared ground set")
    witnesses = tuple(
        x for x in sorted(n.covectors) if not any(cov_leq(x, y) for y in m.covectors)
    )
    note = ""
    if not witnesses:
        from .oriented import underlying_matroid

        under = is_weak_map_matroid(underlying_matroid(m), underlying_matroid(n))
        note = "underlying matroid weak map: " + ("yes" if under.verdict else "NO")
    return WeakMapReport(not witnesses, witnesses, note)


# -- the representation-level obstruction ---------------------------------------


@dataclass(frozen=True)
class SearchResult:
    found: bool
    vertex_map: Mapping[Vertex, Vertex] | None
    obstruction: tuple | None  # (face, forced images, reason)
    obstructions: tuple = ()
    nodes: int = 0
    cap_hit: bool = False
    reason: str = ""


class SearchCapExceeded(RuntimeError):
    pass


def poset_map_search(
    m: GeometricLattice,
    n: GeometricLattice,
    flag: Flag,
    max_assignments: int = 10**7,
) -> SearchResult:
    """Search for a sign-preserving simplicial map between representations.

    Each source vertex C_eps (C a coatom of m) may go to H_eps for a coatom
    H of n containing the n-closure of C; the map must send every face of
    the source complex to a face of the target complex.  Returns the map
    when one exists, otherwise the inclusion-minimal obstructed faces in
    canonical order.
    """
    if set(m.elements) != set(n.elements):
        raise MatroidInputError("search needs a shared ground set")
    try:
        flag_n = make_flag(n, flag.chain)
    except MatroidInputError as exc:
        return SearchResult(
            False, None, ((), (), f"flag is not a complete flag in the target: {exc}"),
            reason="flag-not-complete-in-target",
        )
    rep_m = FlagRepresentation(m, make_flag(m, flag.chain))
    rep_n = FlagRepresentation(n, flag_n)
    source = rep_m.build(m.bottom).complex
    target = rep_n.build(n.bottom).complex

    candidates: dict[Vertex, list[Vertex]] = {}
    for v in source.vertices:
        closure = n.closure(frozenset(v[0]))
        candidates[v] = [
            rep_n.vertex(h, v[1]) for h in sorted(n.coat_above(closure), key=n.key)
        ]

    order = list(source.vertices)
    position = {v: i for i, v in enumerate(order)}
    incident = {
        v: [mface for mface in source.maximal_faces if v in mface] for v in order
    }
    assignment: dict[Vertex, Vertex] = {}
    nodes = 0

    def consistent(v: Vertex) -> bool:
        for mface in incident[v]:
            image = {assignment[u] for u in mface if u in assignment}
            if not any(image <= t for t in target.maximal_faces):
                return False
        return True

    def backtrack(i: int) -> bool:
        nonlocal nodes
        if i == len(order):
            return True
        v = order[i]
        for cand in candidates[v]:
            nodes += 1
            if nodes > max_assignments:
                raise SearchCapExceeded(f"assignment cap {max_assignments} exceeded")
            assignment[v] = cand
            if consistent(v) and backtrack(i + 1):
                return True
            del assignment[v]
        return False

    found = backtrack(0)
    if found:
        return SearchResult(True, dict(assignment), None, nodes=nodes)

    # minimal obstructed faces: every candidate-consistent image fails
    obstructions = []
    single_bad = {v for v in order if not candidates[v]}
    for v in sorted(single_bad, key=position.__getitem__):
        obstructions.append((frozenset({v}), (), "no admissible image vertex"))
    for face in sorted(
        (f for f in topology.all_faces(source) if len(f) == 2),
        key=source.face_key,
    ):
        u, v = sorted(face, key=position.__getitem__)
        if u in single_bad or v in single_bad:
            continue
        if all(
            not target.has_face({cu, cv})
            for cu in candidates[u]
            for cv in candidates[v]
        ):
            forced = ()
            if len(candidates[u]) == 1 and len(candidates[v]) == 1:
                forced = (candidates[u][0], candidates[v][0])
            obstructions.append((face, forced, "image vertices share no face"))
    reason = "exhaustive search found no admissible map"
    primary = obstructions[0] if obstructions else ((), (), reason)
    return SearchResult(
        False, None, primary, tuple(obstructions), nodes=nodes, reason=reason
    )
