"""Realizable oriented matroids: covectors, the underlying matroid, and the
order embedding of the covector poset into the sphere representation.

Only rational vector configurations are accepted as input; covectors are
sign vectors over the ground set, stored as tuples over {-1, 0, 1} in
ground order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .lattice import (
    Flag,
    GeometricLattice,
    MatroidInputError,
    default_flag,
    linear_matroid,
)
from .linalg import nullspace_q, rank_q
from .report import ValidationReport
from .spheres import FlagRepresentation, swap_sign
from . import topology
from .topology import CoverFamily, Poset, SimplicialComplex, full_simplex

Covector = tuple[int, ...]


def sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def neg(x: Covector) -> Covector:
    return tuple(-a for a in x)


def compose(x: Covector, y: Covector) -> Covector:
    """x with y filling in the zero coordinates."""
    return tuple(a if a != 0 else b for a, b in zip(x, y))


def cov_leq(x: Covector, y: Covector) -> bool:
    return all(a == 0 or a == b for a, b in zip(x, y))


def restrict_zero(x: Covector, positions: Iterable[int]) -> Covector:
    zs = set(positions)
    return tuple(0 if i in zs else a for i, a in enumerate(x))


def extend(x: Covector, value: int, position: int | None = None) -> Covector:
    """Extend a sign vector by one new coordinate (appended by default)."""
    if position is None:
        position = len(x)
    if not (0 <= position <= len(x)):
        raise ValueError("new coordinate must extend the domain")
    return x[:position] + (value,) + x[position:]


def render(x: Covector) -> str:
    return "".join("+" if a > 0 else "-" if a < 0 else "0" for a in x)


@dataclass(frozen=True)
class VectorConfig:
    """Exact rational vector configuration, one column per element."""

    elements: tuple[str, ...]
    columns: tuple[tuple[Fraction, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.columns[0])

    def column(self, e: str) -> tuple[Fraction, ...]:
        return self.columns[self.elements.index(e)]

    def delete(self, e: str) -> "VectorConfig":
        keep = [i for i, x in enumerate(self.elements) if x != e]
        return VectorConfig(
            tuple(self.elements[i] for i in keep),
            tuple(self.columns[i] for i in keep),
        )


def vector_config(columns: Sequence[Sequence], elements: Sequence[str] | None = None) -> VectorConfig:
    cols = tuple(tuple(Fraction(str(x)) for x in col) for col in columns)
    if elements is None:
        elements = tuple(str(i) for i in range(1, len(cols) + 1))
    if len({len(c) for c in cols}) != 1:
        raise MatroidInputError("columns must share a dimension")
    return VectorConfig(tuple(str(e) for e in elements), cols)


@dataclass(frozen=True)
class CovectorSet:
    """Covectors of an oriented matroid as a set of sign vectors.

    Includes the zero vector; cocircuits are the minimal nonzero members.
    """

    elements: tuple[str, ...]
    covectors: frozenset
    cocircuits: frozenset

    @property
    def zero(self) -> Covector:
        return (0,) * len(self.elements)

    def nonzero(self) -> list[Covector]:
        return sorted(x for x in self.covectors if x != self.zero)

    def zero_set(self, x: Covector) -> frozenset:
        return frozenset(e for e, a in zip(self.elements, x) if a == 0)

    def validate(self) -> ValidationReport:
        rep = ValidationReport()
        rep.add("contains-zero", self.zero in self.covectors)
        rep.add("negation-closed", all(neg(x) in self.covectors for x in self.covectors))
        rep.add(
            "composition-closed",
            all(compose(x, y) in self.covectors for x in self.covectors for y in self.covectors),
        )
        nz = [x for x in self.covectors if x != self.zero]
        minimal = {x for x in nz if not any(y != x and cov_leq(y, x) for y in nz)}
        rep.add("cocircuits-minimal", minimal == set(self.cocircuits))
        pairs = all(neg(x) in self.cocircuits for x in self.cocircuits)
        rep.add("cocircuits-antipodal", pairs)
        return rep


def cocircuits_from_vectors(config: VectorConfig) -> frozenset:
    """Cocircuits of the configuration: one antipodal pair per coatom.

    For each corank-1 flat of the linear matroid, an exact rational normal
    to the span of its columns produces the pair of sign vectors whose zero
    set is that coatom.
    """
    r = config.dimension
    if rank_q(config.columns) != r:
        raise MatroidInputError("vector configuration is rank-deficient")
    lattice = underlying_from_config(config)
    out: set[Covector] = set()
    for coatom in lattice.coatoms():
        rows = [config.column(e) for e in sorted(coatom)]
        basis = nullspace_q(rows, r) if rows else [
            tuple(Fraction(int(i == k)) for i in range(r)) for k in range(r)
        ]
        if len(basis) != 1:
            raise MatroidInputError(f"coatom {sorted(coatom)} does not have a unique normal")
        x = basis[0]
        cocirc = tuple(sign(sum(a * b for a, b in zip(x, col))) for col in config.columns)
        if frozenset(e for e, a in zip(config.elements, cocirc) if a == 0) != coatom:
            raise MatroidInputError("normal vanishes outside its coatom")
        out.add(cocirc)
        out.add(neg(cocirc))
    return frozenset(out)


def covector_span(elements: Sequence[str], cocircuits: Iterable[Covector]) -> CovectorSet:
    """Smallest composition-closed set containing the cocircuits and zero."""
    cocircuits = frozenset(cocircuits)
    zero = (0,) * len(tuple(elements))
    covectors = set(cocircuits) | {zero}
    frontier = set(covectors)
    while frontier:
        fresh = set()
        for x in frontier:
            for y in covectors:
                for z in (compose(x, y), compose(y, x)):
                    if z not in covectors:
                        fresh.add(z)
        covectors |= fresh
        frontier = fresh
    return CovectorSet(tuple(str(e) for e in elements), frozenset(covectors), cocircuits)


def covectors_from_vectors(config: VectorConfig) -> CovectorSet:
    return covector_span(config.elements, cocircuits_from_vectors(config))


def underlying_from_config(config: VectorConfig) -> GeometricLattice:
    return linear_matroid(config.columns, None, config.elements)


def underlying_matroid(cs: CovectorSet) -> GeometricLattice:
    """Lattice of covector zero sets, ordered by inclusion."""
    return GeometricLattice(cs.elements, {cs.zero_set(x) for x in cs.covectors})


def covector_flat(cs: CovectorSet, flat: Iterable[str]) -> list[Covector]:
    """Covectors vanishing on the flat (the zero vector included)."""
    f = frozenset(str(e) for e in flat)
    if f not in {cs.zero_set(x) for x in cs.covectors}:
        raise MatroidInputError(f"{sorted(f)} is not a flat of the underlying matroid")
    positions = [cs.elements.index(e) for e in f]
    return sorted(x for x in cs.covectors if all(x[i] == 0 for i in positions))


def covector_poset(covectors: Iterable[Covector]) -> Poset:
    return Poset(sorted(covectors), cov_leq)


def delta_complex(covectors: Iterable[Covector]) -> SimplicialComplex:
    """Order complex of a set of covectors under the conformal order."""
    covs = [c for c in covectors]
    if not covs:
        return SimplicialComplex([])
    return topology.order_complex(covector_poset(covs))


# -- the embedding ------------------------------------------------------------


@dataclass(frozen=True)
class Embedding:
    """Order embedding of the nonzero covectors into the sphere complex.

    pivots[i] is an element of flag[i+1] - flag[i]; a cocircuit lands on the
    signed vertex of its zero-set coatom, with the sign it takes on the
    first pivot it does not annihilate.
    """

    cs: CovectorSet
    lattice: GeometricLattice
    flag: Flag
    rep: FlagRepresentation
    pivots: tuple[str, ...]

    @property
    def pivot_positions(self) -> tuple[int, ...]:
        return tuple(self.cs.elements.index(p) for p in self.pivots)

    def first_pivot(self, x: Covector) -> int:
        for i, pos in enumerate(self.pivot_positions):
            if x[pos] != 0:
                return i
        raise ValueError("covector vanishes on every pivot")

    def iota(self, x: Covector) -> frozenset:
        """Image face in S_bottom of a nonzero covector."""
        if x == self.cs.zero:
            raise ValueError("the zero covector has no image")
        if x in self.cs.cocircuits:
            i = self.first_pivot(x)
            s = "+" if x[self.pivot_positions[i]] > 0 else "-"
            return frozenset({self.rep.vertex(self.cs.zero_set(x), s)})
        below = [c for c in self.cs.cocircuits if cov_leq(c, x)]
        return frozenset().union(*[self.iota(c) for c in below])


def build_embedding(
    config: VectorConfig,
    flag: Flag | None = None,
    pivots: Sequence[str] | None = None,
) -> Embedding:
    cs = covectors_from_vectors(config)
    lattice = underlying_matroid(cs)
    if flag is None:
        flag = default_flag(lattice)
    if pivots is None:
        pivots = default_pivots(lattice, flag)
    pivots = tuple(str(p) for p in pivots)
    for i, p in enumerate(pivots):
        if p not in flag[i + 1] - flag[i]:
            raise MatroidInputError(
                f"pivot {p!r} must lie in flag[{i + 1}] minus flag[{i}]"
            )
    return Embedding(cs, lattice, flag, FlagRepresentation(lattice, flag), pivots)


def default_pivots(lattice: GeometricLattice, flag: Flag) -> tuple[str, ...]:
    """Lexicographically least element of each flag step."""
    out = []
    for i in range(lattice.r):
        step = lattice.sorted_elements(flag[i + 1] - flag[i])
        out.append(step[0])
    return tuple(out)


def pivots_check(emb: Embedding) -> ValidationReport:
    """Coatoms over flag[i] are exactly the cocircuit zero sets containing
    the first i pivots; checked for every i by direct enumeration."""
    rep = ValidationReport()
    lattice, cs = emb.lattice, emb.cs
    for i in range(lattice.r + 1):
        prefix = set(emb.pivots[:i])
        from_cocircuits = {
            cs.zero_set(x) for x in cs.cocircuits if prefix <= cs.zero_set(x)
        }
        expected = set(lattice.coat_above(emb.flag[i]))
        rep.add(f"coatoms@{i}", from_cocircuits == expected)
    return rep


def verify_embedding(emb: Embedding) -> ValidationReport:
    """Full certification of the covector-to-sphere embedding."""
    rep = ValidationReport()
    cs, lattice = emb.cs, emb.lattice
    nonzero = cs.nonzero()
    images = {x: emb.iota(x) for x in nonzero}

    rep.extend(pivots_check(emb), prefix="pivots/")

    well = True
    same_sign = True
    for x, face in images.items():
        zflat = cs.zero_set(x)
        if not emb.rep.build(zflat).complex.has_face(face):
            well = False
        by_part: dict[int, set[str]] = {}
        for v in face:
            by_part.setdefault(emb.rep.part_of[frozenset(v[0])], set()).add(v[1])
        if any(len(s) > 1 for s in by_part.values()):
            same_sign = False
    rep.add("well-defined", well, "every image is a face of S over the zero set")
    rep.add("block-signs-agree", same_sign)

    rep.add("injective", len(set(images.values())) == len(nonzero))
    order_ok = all(
        images[x] <= images[y]
        for x in nonzero
        for y in nonzero
        if x != y and cov_leq(x, y)
    )
    rep.add("order-preserving", order_ok)

    into = all(
        emb.rep.build(g).complex.has_face(images[x])
        for g in lattice.flats
        for x in covector_flat(cs, g)
        if x != cs.zero
    )
    rep.add("covector-flats-into-spheres", into)

    z2 = all(images[neg(x)] == frozenset(swap_sign(v) for v in images[x]) for x in nonzero)
    rep.add("z2-equivariant", z2)

    whole = topology.reduced_homology(delta_complex(nonzero))
    ambient = topology.reduced_homology(emb.rep.build(lattice.bottom).complex)
    expected = topology.sphere_profile(lattice.r - 1)
    rep.add("homology-ambient", whole == ambient == expected)

    flats_ok = True
    for g in lattice.flats:
        sub = [x for x in covector_flat(cs, g) if x != cs.zero]
        left = topology.reduced_homology(delta_complex(sub))
        right = topology.reduced_homology(emb.rep.build(g).complex)
        if not (left == right == topology.sphere_profile(lattice.corank(g) - 1)):
            flats_ok = False
    rep.add("homology-per-flat", flats_ok)
    return rep


# -- carrier covers ------------------------------------------------------------


def _sign_vectors(r: int, zeros: bool) -> list[tuple[int, ...]]:
    vals = (1, -1, 0) if zeros else (1, -1)
    return [tuple(v) for v in product(vals, repeat=r)]


def first_pivot_member(emb: Embedding, flat: frozenset, vec: tuple[int, ...]) -> list[Covector]:
    """Covectors over the flat whose own first-pivot sign matches vec.

    This is the membership rule used by the deletion argument: deleting a
    non-pivot element preserves it, and each deletion fiber has a unique
    minimal element.  (It is not the carrier cover; see cover_member.)
    """
    out = []
    for x in covector_flat(emb.cs, flat):
        if x == emb.cs.zero:
            continue
        i = emb.first_pivot(x)
        if x[emb.pivot_positions[i]] == vec[i]:
            out.append(x)
    return out


def cover_member(emb: Embedding, flat: frozenset, vec: tuple[int, ...]) -> list[Covector]:
    """A_vec over the flat: covectors whose image face lies in the vec-carrier.

    Membership asks that every cocircuit below the covector lands on a
    vec-signed vertex; on cocircuits this is the first-pivot sign rule, and
    it is exactly the pullback of the B-cover through the embedding, which
    makes the carrier hypotheses hold.
    """
    carrier = emb.rep.sigma(vec, flat)
    out = []
    for x in covector_flat(emb.cs, flat):
        if x == emb.cs.zero:
            continue
        if emb.iota(x) <= carrier:
            out.append(x)
    return out


def build_covers(emb: Embedding, flat: Iterable[str]) -> tuple[CoverFamily, CoverFamily]:
    """The paired covers of the covector order complex and of S_G.

    One member per sign vector in {+,-}^r: on the covector side the order
    complex of A_vec, on the sphere side the full simplex whose vertices are
    the vec-signed coatoms over the flat.
    """
    flat = frozenset(str(e) for e in flat)
    r = emb.lattice.r
    a_members = []
    b_members = []
    for vec in _sign_vectors(r, zeros=False):
        key = tuple("+" if s > 0 else "-" for s in vec)
        a_members.append((key, delta_complex(cover_member(emb, flat, vec))))
        b_members.append((key, full_simplex(emb.rep.sigma(vec, flat))))
    sub = [x for x in covector_flat(emb.cs, flat) if x != emb.cs.zero]
    a_cover = CoverFamily(delta_complex(sub), tuple(a_members))
    b_cover = CoverFamily(emb.rep.build(flat).complex, tuple(b_members))
    return a_cover, b_cover


def carrier_inputs(emb: Embedding, flat: Iterable[str]):
    """(vertex_images, A cover, B cover) ready for the carrier check."""
    flat = frozenset(str(e) for e in flat)
    a_cover, b_cover = build_covers(emb, flat)
    images = {x: emb.iota(x) for x in a_cover.ambient.vertices}
    return images, a_cover, b_cover
