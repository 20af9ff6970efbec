from itertools import combinations

import pytest

from matroid_spheres import (
    FlagRepresentation,
    MatroidInputError,
    all_complete_flags,
    covectors_from_vectors,
    default_flag,
    is_weak_map_covectors,
    is_weak_map_matroid,
    make_flag,
    poset_map_search,
    retraction_map,
    select_cross_coatoms,
    uniform_matroid,
    vector_config,
    verify_retraction,
)

PAPER_FLAG = [[], ["1"], ["1", "2"], ["1", "2", "3", "4"]]


def brute_force_selection_exists(lattice, flag_f, flag_g, selection):
    """Re-verify the selection independently over all r-subsets of coatoms."""
    rep_f = FlagRepresentation(lattice, flag_f)
    rep_g = FlagRepresentation(lattice, flag_g)
    r = lattice.r
    got = set(selection.coatoms)
    valid = []
    for sub in combinations(lattice.coatoms(), r):
        f_parts = [rep_f.part_of[c] for c in sub]
        g_parts = [rep_g.part_of[c] for c in sub]
        if len(set(f_parts)) == r and len(set(g_parts)) == r:
            valid.append(frozenset(sub))
    return frozenset(got) in valid


# -- cross-coatom selection -----------------------------------------------------


def test_selection_identical_flags(u24):
    flag = default_flag(u24)
    sel = select_cross_coatoms(u24, flag, flag)
    assert sel.distinct()
    # lex-least coatom of each block
    assert sel.coatoms == (frozenset({"2"}), frozenset({"1"}))


def test_selection_u34_pair(u34):
    f = make_flag(u34, [[], ["1"], ["1", "2"], ["1", "2", "3", "4"]])
    g = make_flag(u34, [[], ["3"], ["3", "4"], ["1", "2", "3", "4"]])
    sel = select_cross_coatoms(u34, f, g)
    assert sel.distinct()
    assert brute_force_selection_exists(u34, f, g, sel)


def test_selection_rank_one():
    lattice = uniform_matroid(1, 1)
    flag = default_flag(lattice)
    sel = select_cross_coatoms(lattice, flag, flag)
    assert sel.coatoms == (frozenset(),)


def test_selection_all_flag_pairs(u24, u34, bool3, n134):
    for lattice in (u24, u34, bool3, n134):
        flags = all_complete_flags(lattice)
        for f in flags:
            for g in flags:
                sel = select_cross_coatoms(lattice, f, g)
                assert sel.distinct()
                assert brute_force_selection_exists(lattice, f, g, sel)


def test_selection_fano_sample(fano):
    flags = all_complete_flags(fano)
    sample = [flags[0], flags[1], flags[-1], flags[len(flags) // 2]]
    for f in sample:
        for g in sample:
            sel = select_cross_coatoms(fano, f, g)
            assert sel.distinct()
            assert brute_force_selection_exists(fano, f, g, sel)


# -- retraction -------------------------------------------------------------------


def test_retraction_same_flag_u24(u24):
    flag = default_flag(u24)
    desc = retraction_map(u24, flag, flag)
    # image is the square boundary on the selected coatoms
    assert len(desc.polytope.vertices) == 4
    assert len(desc.polytope.maximal_faces) == 4
    assert verify_retraction(desc).ok


def test_retraction_bool3_is_relabelling(bool3):
    flags = all_complete_flags(bool3)
    desc = retraction_map(bool3, flags[0], flags[1])
    # singleton blocks force a bijection onto the octahedron
    assert len(set(desc.vertex_map.values())) == len(desc.vertex_map)
    assert len(desc.polytope.maximal_faces) == 8
    assert verify_retraction(desc).ok


def test_retraction_u34_images_are_polytope_facets(u34):
    f = make_flag(u34, [[], ["1"], ["1", "2"], ["1", "2", "3", "4"]])
    g = make_flag(u34, [[], ["3"], ["3", "4"], ["1", "2", "3", "4"]])
    desc = retraction_map(u34, f, g)
    source = desc.source.build(u34.bottom).complex
    for mface in source.maximal_faces:
        image = frozenset(desc.vertex_map[v] for v in mface)
        assert image in desc.polytope.maximal_faces
    assert verify_retraction(desc).ok


def test_retraction_all_flag_pairs(u24, u34, bool3, n134):
    from matroid_spheres import reduced_homology, sphere_profile

    for lattice in (u24, u34, bool3, n134):
        flags = all_complete_flags(lattice)
        profiles = {}
        for f in flags:
            rep = FlagRepresentation(lattice, f)
            profiles[f.chain] = reduced_homology(rep.build(lattice.bottom).complex)
        want = sphere_profile(lattice.r - 1)
        assert all(p == want for p in profiles.values())
        for f in flags:
            for g in flags:
                desc = retraction_map(lattice, f, g)
                report = verify_retraction(desc)
                assert report.ok, (f.chain, g.chain, report.lines())


def test_retraction_fano_pairs(fano):
    flags = all_complete_flags(fano)
    pairs = [(flags[0], flags[1]), (flags[0], flags[-1])]
    for f, g in pairs:
        assert verify_retraction(retraction_map(fano, f, g)).ok


# -- weak maps ----------------------------------------------------------------------


def test_weak_map_matroid(u34, n134):
    assert is_weak_map_matroid(u34, n134).verdict
    assert is_weak_map_matroid(u34, u34).verdict
    back = is_weak_map_matroid(n134, u34)
    assert not back.verdict
    assert tuple(sorted(back.witnesses[0])) == ("1", "3", "4")


def test_weak_map_requires_same_ground_set(u24, bool3):
    with pytest.raises(MatroidInputError):
        is_weak_map_matroid(u24, bool3)


def test_weak_map_antisymmetry(u24, u34, n134):
    # mutual weak maps force identical rank functions
    from itertools import combinations as comb

    for m, n in ((u34, n134), (n134, u34)):
        both = is_weak_map_matroid(m, n).verdict and is_weak_map_matroid(n, m).verdict
        same_rank = all(
            m.rank_of_subset(s) == n.rank_of_subset(s)
            for k in range(5)
            for s in comb(m.elements, k)
        )
        assert both == same_rank


def test_weak_map_covectors(u24_vec):
    m = covectors_from_vectors(u24_vec)
    assert is_weak_map_covectors(m, m).verdict
    # rotate element 3 onto element 2's line: a specialization
    degenerate = vector_config([[1, 0], [0, 1], [0, 1], [1, -1]])
    n = covectors_from_vectors(degenerate)
    forward = is_weak_map_covectors(m, n)
    assert forward.verdict
    assert "yes" in forward.note
    back = is_weak_map_covectors(n, m)
    assert not back.verdict
    assert back.witnesses


# -- the obstruction search ------------------------------------------------------------


def test_search_identity_found(u34):
    flag = make_flag(u34, PAPER_FLAG)
    result = poset_map_search(u34, u34, flag)
    assert result.found
    assert all(src == dst for src, dst in result.vertex_map.items())


def test_search_obstruction_u34_to_n134(u34, n134):
    flag = make_flag(u34, PAPER_FLAG)
    result = poset_map_search(u34, n134, flag)
    assert not result.found
    assert not result.cap_hit
    faces = {face: (forced, reason) for face, forced, reason in result.obstructions}
    edge = frozenset({(("3", "4"), "+"), (("1", "4"), "-")})
    assert edge in faces
    forced, _ = faces[edge]
    assert set(forced) == {(("1", "3", "4"), "+"), (("1", "3", "4"), "-")}
    # the forced pair shares no face in the target: same coatom, both signs
    target = FlagRepresentation(n134, make_flag(n134, PAPER_FLAG)).build(n134.bottom)
    assert not target.complex.has_face(set(forced))
    # every reported obstruction is a face of the source whose image cannot be one
    source = FlagRepresentation(u34, flag).build(u34.bottom)
    for face in faces:
        assert source.complex.has_face(face)


def test_search_obstacle_flag_not_complete_in_target(u34, n134):
    flag = make_flag(u34, [[], ["1"], ["1", "3"], ["1", "2", "3", "4"]])
    result = poset_map_search(u34, n134, flag)
    assert not result.found
    assert result.reason == "flag-not-complete-in-target"


def test_search_cap(u34, n134):
    from matroid_spheres.maps import SearchCapExceeded

    flag = make_flag(u34, PAPER_FLAG)
    with pytest.raises(SearchCapExceeded):
        poset_map_search(u34, u34, flag, max_assignments=3)
