from __future__ import annotations

import itertools

import pytest

from dimermirror.mirror_sh import E, F, P_EDGE, SHElement, UNIT_LABEL


def test_basis_counts_c3(sh_models):
    sh = sh_models["c3"]
    b = sh.sh_basis(2)
    assert b.odd_rank == 2
    assert len(b.e_labels) == 6 and len(b.f_labels) == 6


@pytest.mark.parametrize("name, rank", [("c3", 2), ("conifold", 3), ("spp", 4)])
def test_odd_rank(sh_models, name, rank):
    assert sh_models[name].sh_basis(1).odd_rank == rank


def test_odd_rank_identity(sh_models, dimers):
    for name, sh in sh_models.items():
        b = sh.sh_basis(1)
        assert b.odd_rank == len(dimers[name].vertices) + 1


def test_winding_products(sh_models):
    sh = sh_models["spp"]
    e1 = SHElement.of(E(3, 1, 1))
    e2 = SHElement.of(E(3, 1, 2))
    assert sh.mul(e1, e2) == SHElement.of(E(3, 1, 3))
    assert sh.mul(e1, SHElement.of(E(3, 2, 1))).is_zero()
    assert sh.mul(e1, SHElement.of(F(3, 1, 1))) == SHElement.of(F(3, 1, 2))
    assert sh.mul(SHElement.of(F(3, 1, 1)), SHElement.of(F(3, 1, 5))).is_zero()
    unit = SHElement.of(UNIT_LABEL)
    assert sh.mul(unit, e1) == e1


def test_pairing_row_property(sh_models):
    for sh in sh_models.values():
        for e in sh.dimer.arrow_by_id:
            occurrences = []
            for key, z in sh.cycles.items():
                occurrences += [+1] * sum(1 for a in z.zigs if a == e)
                occurrences += [-1] * sum(1 for a in z.zags if a == e)
            assert sorted(occurrences) == [-1, 1]
            # consequence: total pairing over all punctures vanishes
            assert sum(sh.pairing(e, key) for key in sh.cycles) == 0


def test_ring_axioms_on_label_triples(sh_models):
    sh = sh_models["conifold"]
    labels = [UNIT_LABEL, E(1, 1, 1), E(2, 1, 1), F(1, 1, 1), P_EDGE("a1"), P_EDGE("b2")]
    parity = {l: 0 if l[0] in ("unit", "E") else 1 for l in labels}
    for a, b, c in itertools.product(labels, repeat=3):
        lhs = sh.mul(sh.mul(SHElement.of(a), SHElement.of(b)), SHElement.of(c))
        rhs = sh.mul(SHElement.of(a), sh.mul(SHElement.of(b), SHElement.of(c)))
        assert lhs == rhs, (a, b, c)
    for a, b in itertools.product(labels, repeat=2):
        ab = sh.mul(SHElement.of(a), SHElement.of(b))
        ba = sh.mul(SHElement.of(b), SHElement.of(a))
        sign = -1 if parity[a] and parity[b] else 1
        assert ab == ba.scale(sign), (a, b)


def test_p_pairing_against_corner_differences(sh_models, complexes):
    for name, sh in sh_models.items():
        K = complexes[name]
        od = sh.distinguished_odd(1)
        m0 = sh.m[1]
        m_prev = sh.m[(1 - 2) % sh.n_classes + 1]
        for i in range(1, sh.n_classes + 1):
            eta = K.eta(i)
            assert sh.odd_pairing_vector(od["p"], i) == [m0 * K.V_eval(eta)] * sh.m[i]
            assert sh.odd_pairing_vector(od["q"], i) == [m_prev * K.U_eval(eta)] * sh.m[i]


def test_xi_base_vertex_is_zero(sh_models):
    for sh in sh_models.values():
        od = sh.distinguished_odd(1)
        assert od["xi"][sh.dimer.vertices[0]].is_zero()
        for v in sh.dimer.vertices:
            assert v in od["xi"]


def test_c3_p_q_rank_two(sh_models):
    sh = sh_models["c3"]
    od = sh.distinguished_odd(1)
    rows = []
    for elem in (od["p"], od["q"]):
        row = []
        for i in range(1, sh.n_classes + 1):
            row.extend(sh.odd_pairing_vector(elem, i))
        rows.append(row)
    # the two pairing vectors on the three punctures span a rank-2 lattice
    mat = list(zip(*rows))
    rank2 = any(
        mat[i][0] * mat[j][1] - mat[i][1] * mat[j][0] != 0
        for i in range(3)
        for j in range(3)
    )
    assert rank2


def test_alpha_xi_product_structure(sh_models):
    # alpha_{i,j'} . xi equals the pairing multiple of the odd winding class
    sh = sh_models["spp"]
    path = sh.xi_for_strip(3, [2, 3])
    assert path is not None
    xi = sh.xi_from_path(path)
    for j in (1, 2):
        got = sh.mul(xi, SHElement.of(E(3, j, 1)))
        expect = SHElement.of(F(3, j, 1), sh.odd_pairing_vector(xi, 3)[j - 1])
        assert got == expect


def test_zigzag_paths_are_deterministic(sh_models):
    sh = sh_models["spp"]
    a = sh.zigzag_paths_from(sh.dimer.vertices[0])
    b = sh.zigzag_paths_from(sh.dimer.vertices[0])
    assert a == b
    assert all(len(p) <= 4 * len(sh.dimer.arrows) for p in a)
