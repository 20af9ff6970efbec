from itertools import product

import pytest

from matroid_spheres import (
    MatroidInputError,
    build_covers,
    build_embedding,
    carrier_check,
    cocircuits_from_vectors,
    covector_flat,
    covector_span,
    covectors_from_vectors,
    is_homology_point,
    make_flag,
    pivots_check,
    quillen_fibers_check,
    reduced_homology,
    sphere_profile,
    underlying_matroid,
    uniform_matroid,
    vector_config,
    verify_embedding,
)
from matroid_spheres import oriented
from matroid_spheres.oriented import compose, cov_leq, extend, neg, render, restrict_zero


def by_render(covs):
    return sorted(render(x) for x in covs)


# -- sign vector algebra -------------------------------------------------------


def test_compose():
    assert compose((0, 1, 1, -1), (1, 0, 1, 1)) == (1, 1, 1, -1)


def test_restrict_zero():
    assert restrict_zero((1, -1, 0, 1), [0, 1]) == (0, 0, 0, 1)


def test_extend():
    assert extend((1, -1), 0) == (1, -1, 0)
    assert extend((1, -1), 1, position=0) == (1, 1, -1)
    with pytest.raises(ValueError):
        extend((1, -1), 0, position=5)


# -- cocircuits ------------------------------------------------------------------


def test_cocircuits_u24(u24_vec):
    cocircs = cocircuits_from_vectors(u24_vec)
    assert len(cocircs) == 8
    assert (0, 1, 1, -1) in cocircs and (0, -1, -1, 1) in cocircs  # coatom {1}
    assert (1, 0, 1, 1) in cocircs  # coatom {2}
    zero_sets = {
        frozenset(e for e, a in zip(u24_vec.elements, x) if a == 0) for x in cocircs
    }
    assert zero_sets == {frozenset({str(i)}) for i in range(1, 5)}


def test_cocircuits_coordinate(coord2_vec):
    assert cocircuits_from_vectors(coord2_vec) == frozenset(
        {(0, 1), (0, -1), (1, 0), (-1, 0)}
    )


def test_cocircuits_rank_deficient():
    with pytest.raises(MatroidInputError):
        cocircuits_from_vectors(vector_config([[1, 0], [2, 0]]))


# -- covector span ----------------------------------------------------------------


def test_span_coordinate_rank2(coord2_vec):
    cs = covectors_from_vectors(coord2_vec)
    assert len(cs.covectors) == 9
    assert cs.covectors == frozenset(product((1, 0, -1), repeat=2))


def test_span_u24_17_covectors(u24_vec):
    cs = covectors_from_vectors(u24_vec)
    assert len(cs.covectors) == 17  # 0 + 8 rays + 8 sectors
    assert len(cs.cocircuits) == 8


def test_span_single_element():
    cs = covectors_from_vectors(vector_config([[1]]))
    assert cs.covectors == frozenset({(0,), (1,), (-1,)})


def test_covector_set_axioms(u24_vec, u34_vec, coord2_vec):
    for cfg in (u24_vec, u34_vec, coord2_vec):
        assert covectors_from_vectors(cfg).validate().ok


# -- underlying matroid -------------------------------------------------------------


def test_underlying_u24(u24_vec, u24):
    lattice = underlying_matroid(covectors_from_vectors(u24_vec))
    assert set(lattice.flats) == set(u24.flats)
    assert lattice.r == 2


def test_underlying_coordinate(coord2_vec):
    lattice = underlying_matroid(covectors_from_vectors(coord2_vec))
    assert len(lattice.flats) == 4  # Boolean on 2 elements


def test_underlying_n134(n134_vec, n134):
    lattice = underlying_matroid(covectors_from_vectors(n134_vec))
    assert set(lattice.flats) == set(n134.flats)
    assert frozenset({"1", "3", "4"}) in lattice.coatoms()


def test_underlying_vs_linear_loader(u24_vec, u34_vec, n134_vec):
    from matroid_spheres import linear_matroid

    for cfg in (u24_vec, u34_vec, n134_vec):
        via_covectors = underlying_matroid(covectors_from_vectors(cfg))
        via_columns = linear_matroid(cfg.columns, None, cfg.elements)
        assert set(via_covectors.flats) == set(via_columns.flats)


# -- covector flats -----------------------------------------------------------------


def test_covector_flat_examples(u24_vec):
    cs = covectors_from_vectors(u24_vec)
    m1 = covector_flat(cs, {"1"})
    assert set(m1) == {(0, 0, 0, 0), (0, 1, 1, -1), (0, -1, -1, 1)}
    assert covector_flat(cs, {"1", "2", "3", "4"}) == [(0, 0, 0, 0)]
    assert set(covector_flat(cs, set())) == set(cs.covectors)
    with pytest.raises(MatroidInputError):
        covector_flat(cs, {"1", "2"})  # not a flat of U_{2,4}


# -- pivots ---------------------------------------------------------------------------


def test_pivots_check_u24(u24_vec):
    emb = build_embedding(u24_vec)
    assert emb.pivots == ("1", "2")
    assert pivots_check(emb).ok


def test_pivot_precondition(u24_vec):
    lattice = underlying_matroid(covectors_from_vectors(u24_vec))
    flag = make_flag(lattice, [[], ["1"], ["1", "2", "3", "4"]])
    with pytest.raises(MatroidInputError):
        build_embedding(u24_vec, flag, ["2", "3"])  # 2 not in flag[1]-flag[0]


def test_pivots_check_nonfano(nonfano_vec):
    emb = build_embedding(nonfano_vec)
    assert pivots_check(emb).ok


# -- iota ------------------------------------------------------------------------------


def test_iota_cocircuits(u24_vec):
    emb = build_embedding(u24_vec)
    assert emb.iota((0, 1, 1, -1)) == frozenset({(("1",), "+")})
    assert emb.iota((1, 0, 1, 1)) == frozenset({(("2",), "+")})


def test_iota_tope(u24_vec):
    emb = build_embedding(u24_vec)
    assert emb.iota((1, 1, 1, 1)) == frozenset({(("2",), "+"), (("4",), "+")})


def test_iota_zero_rejected(u24_vec):
    emb = build_embedding(u24_vec)
    with pytest.raises(ValueError):
        emb.iota((0, 0, 0, 0))


def test_iota_two_to_one_on_cocircuits(u24_vec, u34_vec):
    for cfg in (u24_vec, u34_vec):
        emb = build_embedding(cfg)
        for x in emb.cs.cocircuits:
            (v,) = emb.iota(x)
            (w,) = emb.iota(neg(x))
            assert v[0] == w[0] and v[1] != w[1]


# -- verify_embedding ----------------------------------------------------------------


def test_verify_embedding_u24(u24_vec):
    report = verify_embedding(build_embedding(u24_vec))
    assert report.ok, report.lines()


def test_verify_embedding_coordinate(coord2_vec):
    report = verify_embedding(build_embedding(coord2_vec))
    assert report.ok, report.lines()


def test_verify_embedding_u34(u34_vec):
    emb = build_embedding(u34_vec)
    report = verify_embedding(emb)
    assert report.ok, report.lines()
    profile = reduced_homology(oriented.delta_complex(emb.cs.nonzero()))
    assert profile == sphere_profile(2)


# -- covers and carrier ----------------------------------------------------------------


def test_build_covers_meet_law_and_emptiness(u24_vec):
    emb = build_embedding(u24_vec)
    for flat in emb.lattice.flats:
        members = {
            v: set(oriented.cover_member(emb, flat, v))
            for v in product((1, -1, 0), repeat=2)
        }
        for v in members:
            for w in members:
                meet = tuple(a if a == b else 0 for a, b in zip(v, w))
                assert members[v] & members[w] == members[meet]
            b_simplex = emb.rep.sigma(v, flat)
            assert bool(members[v]) == bool(b_simplex)
        # spec emptiness direction: vec supported inside the flag below G
        for v in members:
            if all(emb.flag[i + 1] <= flat for i, s in enumerate(v) if s != 0):
                assert not members[v] and not emb.rep.sigma(v, flat)


def test_build_covers_b_side_is_sigma(u24_vec):
    emb = build_embedding(u24_vec)
    _, b_cover = build_covers(emb, frozenset())
    for key, simplex in b_cover.members:
        vec = tuple(1 if s == "+" else -1 for s in key)
        expected = emb.rep.sigma(vec, frozenset())
        assert simplex.maximal_faces == (
            frozenset({expected}) if expected else frozenset()
        )


def test_carrier_check_all_flats(u24_vec, u34_vec, coord2_vec):
    for cfg in (u24_vec, u34_vec, coord2_vec):
        emb = build_embedding(cfg)
        for flat in emb.lattice.flats:
            images, a_cover, b_cover = oriented.carrier_inputs(emb, flat)
            report = carrier_check(images, a_cover, b_cover)
            assert report.ok, (sorted(flat), report.lines())


def test_a_cover_members_contractible(u24_vec):
    emb = build_embedding(u24_vec)
    for v in product((1, -1), repeat=2):
        member = oriented.cover_member(emb, frozenset(), v)
        assert is_homology_point(oriented.delta_complex(member))


# -- deletion fibers ---------------------------------------------------------------------


def test_deletion_fibers_unique_minimum(u24_vec):
    # deleting a non-pivot element preserves first-pivot membership and
    # every fiber has a unique minimal element, so the fiber check passes
    emb = build_embedding(u24_vec)
    deleted = build_embedding(u24_vec.delete("4"))
    for v in product((1, -1), repeat=2):
        member = oriented.first_pivot_member(emb, frozenset(), v)
        member_deleted = oriented.first_pivot_member(deleted, frozenset(), v)
        fmap = {x: x[:3] for x in member}
        assert set(fmap.values()) <= set(member_deleted)
        for y in set(fmap.values()):
            fiber = [x for x in member if fmap[x] == y]
            minima = [x for x in fiber if not any(cov_leq(z, x) and z != x for z in fiber)]
            assert len(minima) == 1
        report = quillen_fibers_check(
            fmap,
            oriented.covector_poset(member),
            oriented.covector_poset(member_deleted),
        )
        assert report.ok


# -- order homotopies on covector posets ----------------------------------------------------


def test_lowering_homotopy_on_coordinate_om(coord3_vec):
    # the first retraction step on a coordinate block with a zero entry:
    # v = (+,0,+) makes X -> X/{e_2} a lowering self-map of the block
    from matroid_spheres import order_homotopy_image

    emb = build_embedding(coord3_vec)
    member = oriented.first_pivot_member(emb, frozenset(), (1, 0, 1))
    poset = oriented.covector_poset(member)
    fmap = {x: restrict_zero(x, [1]) for x in poset.elements}
    assert set(fmap.values()) <= set(poset.elements)
    result = order_homotopy_image(poset, fmap)
    assert result.report.ok
    assert len(result.image) < len(poset)


def test_retraction_sequence_on_coordinate_om(coord3_vec):
    # the four-step order-homotopy sequence retracting the (+,0,+) block of
    # a coordinate orientation: each step preserves the homology profile
    from matroid_spheres import order_homotopy_image

    emb = build_embedding(coord3_vec)
    current = oriented.first_pivot_member(emb, frozenset(), (1, 0, 1))

    def apply(fmap_fn):
        nonlocal current
        poset = oriented.covector_poset(current)
        fmap = {x: fmap_fn(x) for x in poset.elements}
        assert set(fmap.values()) <= set(poset.elements)
        result = order_homotopy_image(poset, fmap)
        assert result.report.ok
        current = list(result.image.elements)

    apply(lambda x: restrict_zero(x, [1]))  # zero the skipped coordinate
    apply(lambda x: restrict_zero(x, [2]) if x[2] == -1 else x)  # drop minus side
    apply(lambda x: compose(x, (0, 0, 1)))  # raising: fill with plus
    apply(lambda x: restrict_zero(x, [0]))  # drop the leading coordinate
    assert set(current) == {(0, 0, 1)}
