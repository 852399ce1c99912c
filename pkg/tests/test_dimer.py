from __future__ import annotations

from dimermirror import (
    Arrow,
    Dimer,
    Face,
    anti_zigzag,
    dimer_isomorphic,
    dual_dimer,
    is_zigzag_consistent,
    parallel_classes,
    strips,
    surface_invariants,
    zigzag_cycles,
)
from dimermirror.dimer import cyclic_equal
from dimermirror.matchings import matching_polytope


def c3_variant(shift_z=(-1, -1), plus_boundary=("z", "y", "x")):
    return Dimer(
        "c3var",
        vertices=("v",),
        arrows=(
            Arrow("x", "v", "v", (1, 0)),
            Arrow("y", "v", "v", (0, 1)),
            Arrow("z", "v", "v", shift_z),
        ),
        faces=(Face(+1, tuple(plus_boundary)), Face(-1, ("y", "z", "x"))),
    )


def test_bundled_dimers_are_valid(dimers):
    for d in dimers.values():
        assert d.validate().ok


def test_face_too_short_is_reported():
    d = Dimer(
        "bigon",
        vertices=("v",),
        arrows=(Arrow("x", "v", "v", (1, 0)), Arrow("y", "v", "v", (-1, 0))),
        faces=(Face(+1, ("x", "y")), Face(-1, ("x", "y"))),
    )
    rep = d.validate()
    assert not rep.ok
    assert "face_too_short" in rep.codes()


def test_shift_sum_violation_is_reported():
    rep = c3_variant(shift_z=(0, 0)).validate()
    assert not rep.ok
    assert "face_shift" in rep.codes()


def test_short_positive_face_is_reported():
    rep = c3_variant(plus_boundary=("y", "x")).validate()
    assert not rep.ok
    assert "face_too_short" in rep.codes()


def test_unknown_arrow_in_boundary_is_reported():
    d = Dimer(
        "broken",
        vertices=("v",),
        arrows=(Arrow("x", "v", "v", (1, 0)),),
        faces=(Face(+1, ("x", "w", "q")), Face(-1, ("x",) * 3)),
    )
    rep = d.validate()
    assert not rep.ok
    assert "unknown_arrow" in rep.codes()


def test_c3_zigzag_cycles(dimers):
    cycles = zigzag_cycles(dimers["c3"])
    assert len(cycles) == 3
    assert all(len(z) == 2 for z in cycles)
    total = tuple(sum(c) for c in zip(*(z.homology for z in cycles)))
    assert total == (0, 0)
    # pairwise independent classes
    homs = [z.homology for z in cycles]
    for i in range(3):
        for j in range(i + 1, 3):
            assert homs[i][0] * homs[j][1] - homs[i][1] * homs[j][0] != 0


def test_spp_zigzag_cycles_match_known_words(dimers):
    cycles = zigzag_cycles(dimers["spp"])
    words = [z.arrows for z in cycles]
    expected = [("f", "b"), ("a", "d", "c", "f"), ("e", "c"), ("g", "a"), ("d", "g", "b", "e")]
    assert len(words) == 5
    for w in expected:
        assert any(cyclic_equal(w, got) for got in words), w
    by_class = {}
    for z in cycles:
        by_class.setdefault(z.class_index, []).append(z)
    assert sorted(len(v) for v in by_class.values()) == [1, 1, 1, 2]
    ec = next(z for z in cycles if cyclic_equal(z.arrows, ("e", "c")))
    ga = next(z for z in cycles if cyclic_equal(z.arrows, ("g", "a")))
    assert ec.class_index == ga.class_index
    assert ec.homology == ga.homology == (1, 0)


def test_conifold_zigzag_cycles(dimers):
    cycles = zigzag_cycles(dimers["conifold"])
    assert len(cycles) == 4
    assert all(len(z) == 2 for z in cycles)
    assert len({z.homology for z in cycles}) == 4


def test_zig_zag_completeness(dimers):
    for d in dimers.values():
        cycles = zigzag_cycles(d)
        assert sum(len(z) for z in cycles) == 2 * len(d.arrows)
        zigs = sorted((a for z in cycles for a in z.zigs), key=str)
        zags = sorted((a for z in cycles for a in z.zags), key=str)
        allarrows = sorted(d.arrow_by_id, key=str)
        assert zigs == allarrows and zags == allarrows


def test_c3_anti_zigzag_of_x_cycle(dimers):
    d = dimers["c3"]
    z = next(z for z in zigzag_cycles(d) if z.zigs == ("x",))
    assert z.zags == ("y",)
    assert anti_zigzag(d, z, +1) == ("z",)


def test_anti_zigzag_homology(dimers):
    for d in dimers.values():
        for z in zigzag_cycles(d):
            for sign in (+1, -1):
                o = anti_zigzag(d, z, sign)
                assert d.word_shift(o) == (-z.homology[0], -z.homology[1])


def test_spp_anti_zigzag_from_file(dimers):
    d = dimers["spp"]
    ec = next(z for z in zigzag_cycles(d) if cyclic_equal(z.arrows, ("e", "c")))
    assert cyclic_equal(anti_zigzag(d, ec, +1), ("f", "b"))
    ga = next(z for z in zigzag_cycles(d) if cyclic_equal(z.arrows, ("g", "a")))
    assert anti_zigzag(d, ga, +1) == ("d",)


def test_builtins_zigzag_consistent(dimers):
    for d in dimers.values():
        ok, witness = is_zigzag_consistent(d)
        assert ok, witness


def test_parallel_classes(dimers):
    spp = parallel_classes(dimers["spp"])
    assert [len(members) for _, members in spp] == [1, 1, 2, 1]
    assert len(parallel_classes(dimers["c3"])) == 3
    assert len(parallel_classes(dimers["conifold"])) == 4


def test_parallel_cycles_share_no_arrow(dimers):
    for _, members in parallel_classes(dimers["spp"]):
        if len(members) == 2:
            assert not set(members[0].arrows) & set(members[1].arrows)


def test_strips_single_class(dimers):
    for name in ("c3", "conifold"):
        d = dimers[name]
        n = len(parallel_classes(d))
        for i in range(1, n + 1):
            sd = strips(d, i)
            assert len(sd.strips) == 1
            assert set(sd.strips[0][1]) == set(d.vertices)


def test_spp_strips_partition_vertices(dimers):
    d = dimers["spp"]
    sd = strips(d, 3)
    assert len(sd.strips) == 2
    v1 = set(sd.strips[0][1])
    v2 = set(sd.strips[1][1])
    assert v1 | v2 == set(d.vertices) and not v1 & v2
    assert d.vertices[0] in v1


def test_dual_surfaces(dimers):
    expected = {"c3": (0, 3), "conifold": (0, 4), "spp": (0, 5)}
    for name, d in dimers.items():
        dd = dual_dimer(d)
        g, n, chi = surface_invariants(dd)
        assert (g, n) == expected[name]
        assert chi == 2 - 2 * g


def test_double_duality(dimers):
    for d in dimers.values():
        assert dimer_isomorphic(dual_dimer(dual_dimer(d)), d)


def test_pick_identity(dimers):
    for d in dimers.values():
        mp = matching_polytope(d)
        g, n, _ = surface_invariants(dual_dimer(d))
        assert g == mp.interior_count
        assert n == mp.boundary_count
        assert len(d.vertices) == 2 * mp.interior_count + mp.boundary_count - 2
        assert mp.normalized_area == len(d.vertices)


def test_null_homologous_cycle_is_inconsistent():
    # degenerate shift marking: one zigzag cycle has vanishing homology class
    d = Dimer(
        "conifold_degenerate",
        vertices=(1, 2),
        arrows=(
            Arrow("a1", 1, 2, (0, 0)),
            Arrow("a2", 1, 2, (-1, 0)),
            Arrow("b1", 2, 1, (0, 0)),
            Arrow("b2", 2, 1, (1, 0)),
        ),
        faces=(
            Face(+1, ("a1", "b2", "a2", "b1")),
            Face(-1, ("a1", "b1", "a2", "b2")),
        ),
    )
    assert d.validate().ok
    ok, witness = is_zigzag_consistent(d)
    assert not ok
    assert witness[0] == "null_homologous_cycle"


def test_solve_parallel_arithmetic():
    from dimermirror.dimer import _solve_parallel

    assert _solve_parallel(2, 3, 0) == (3, 2)  # smallest nontrivial on the line
    n, m = _solve_parallel(2, 3, 1)
    assert n * 2 - m * 3 == 1 and n >= 0 and m >= 0
    assert _solve_parallel(2, 4, 1) is None  # gcd 2 does not divide 1
    assert _solve_parallel(2, -3, 7) == (2, 1)
    assert _solve_parallel(2, -3, -1) is None  # the form is nonnegative
    assert _solve_parallel(-2, 3, -7) == (2, 1)
    assert _solve_parallel(-2, 3, 5) is None
    n, m = _solve_parallel(-2, -3, 1)
    assert n * -2 - m * -3 == 1 and n >= 0 and m >= 0


def test_inconsistent_detection():
    # two vertices, doubled arrows forming two squares whose zigzag cycles are
    # null-homologous: the consistency check must reject it
    d = Dimer(
        "torus_square",
        vertices=(1, 2),
        arrows=(
            Arrow("p", 1, 2, (0, 0)),
            Arrow("q", 2, 1, (0, 0)),
            Arrow("r", 1, 2, (1, 0)),
            Arrow("s", 2, 1, (-1, 0)),
        ),
        faces=(
            Face(+1, ("p", "q")),
            Face(+1, ("r", "s")),
            Face(-1, ("p", "s")),
            Face(-1, ("r", "q")),
        ),
    )
    rep = d.validate()
    assert not rep.ok  # bigons are rejected before consistency is reached


def test_ray_intersection_witness():
    # subdividing an arrow creates a 2-valent vertex; the dimer stays valid
    # but the zig and zag rays at the first half re-meet at the second half
    d = Dimer(
        "spp_subdivided",
        vertices=(1, 2, 3, "w"),
        arrows=(
            Arrow("a", 3, 1, (0, 0)),
            Arrow("b", 3, 2, (-1, 1)),
            Arrow("c1", 1, "w", (0, 0)),
            Arrow("c2", "w", 2, (0, 0)),
            Arrow("d", 1, 1, (-1, 0)),
            Arrow("e", 2, 1, (1, 0)),
            Arrow("f", 2, 3, (0, -1)),
            Arrow("g", 1, 3, (1, 0)),
        ),
        faces=(
            Face(+1, ("d", "g", "a")),
            Face(+1, ("c1", "c2", "f", "b", "e")),
            Face(-1, ("d", "c1", "c2", "e")),
            Face(-1, ("g", "b", "f", "a")),
        ),
    )
    assert d.validate().ok
    ok, witness = is_zigzag_consistent(d)
    assert not ok
    e0, f0, n, m = witness
    assert {e0, f0} == {"c1", "c2"} or (e0 in ("c1", "c2"))
