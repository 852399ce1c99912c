from __future__ import annotations

import pytest

from dimermirror import Arrow, Dimer, Face, load_bundled
from dimermirror.ks import det_int


def test_det_int():
    assert det_int([]) == 1
    assert det_int([[5]]) == 5
    assert det_int([[1, 1], [1, 0]]) == -1
    assert det_int([[2, 0, 0], [0, 3, 0], [0, 0, 4]]) == 24
    assert det_int([[1, 2], [2, 4]]) == 0


def test_verify_all_passes(verifiers):
    for name, v in verifiers.items():
        rep = v.verify_all()
        assert rep.passed, [c for c in rep.checks if c.status == "fail"]


def test_dimension_counts_match(verifiers):
    for v in verifiers.values():
        rep = v.verify_dimension_match()
        for c in rep.checks:
            assert c.status == "pass", c


def test_determinants_are_unimodular(verifiers):
    for v in verifiers.values():
        rep = v.verify_dimension_match()
        for c in rep.checks:
            if c.name.startswith("det.") and "sh_image" not in c.name:
                assert c.detail["det"] in (1, -1), c
            if c.name.startswith("coefficient.c."):
                assert c.detail["c"] != 0


def test_ks_even_images_c3(verifiers):
    v = verifiers["c3"]
    images = v.ks_even_images()
    assert all(img["image"].kind == "x_eta" for img in images)  # no psi on c3


def test_ks_even_images_spp(verifiers):
    v = verifiers["spp"]
    images = v.ks_even_images()
    psi_imgs = [img for img in images if img["image"].kind == "psi"]
    assert {(img["image"].i, img["image"].j) for img in psi_imgs} == {(3, 2)}
    alpha3 = next(
        img
        for img in images
        if img["source"]["kind"] == "alpha" and img["source"]["i"] == 3 and img["source"]["n"] == 1
    )
    assert len(alpha3["source"]["labels"]) == 2  # two parallel orbits summed


def test_ks_odd_images(verifiers):
    for name, v in verifiers.items():
        images = v.ks_odd_images()
        kinds = [img["source"]["kind"] for img in images]
        assert kinds.count("q") == 1 and kinds.count("p") == 1
        xi0 = [img for img in images if img["source"]["kind"] == "xi"]
        assert len(xi0) == len(v.dimer.vertices) - 1
        for img in images:
            assert img["lift"] != "missing"


def test_c3_odd_positive_winding_has_no_theta(verifiers):
    v = verifiers["c3"]
    for img in v.ks_odd_images():
        if img["source"]["kind"] == "alpha_xi":
            pytest.fail("single-vertex dimer must have no positive-winding theta")


def test_singularity_reports(verifiers):
    expected = {
        "c3": (0, 0),  # no psi families, no theta classes: smooth
        "conifold": (0, 1),
        "spp": (1, 2),
    }
    for name, v in verifiers.items():
        rep = v.singularity_report()
        psi_families = 0
        theta = None
        for c in rep.checks:
            assert c.status == "pass", c
            if c.name.startswith("singularity.edge."):
                psi_families += 1 if c.detail["psi_families"] > 0 else 0
            if c.name == "singularity.fixed_point":
                theta = c.detail["theta_classes"]
        assert (psi_families, theta) == expected[name]


def test_chain_identities(verifiers):
    for v in verifiers.values():
        rep = v.verify_chain_identities()
        assert rep.passed, [c for c in rep.checks if c.status == "fail"]


def test_report_has_skipped_dw_psi(verifiers):
    rep = verifiers["c3"].verify_all()
    assert any(c.status == "skipped" and c.name == "dW.psi" for c in rep.checks)


def corrupted_spp(kind: str) -> Dimer:
    d = load_bundled("spp")
    arrows = list(d.arrows)
    faces = list(d.faces)
    if kind == "sign":
        faces[0] = Face(-1, faces[0].boundary)
    elif kind == "shift":
        a = arrows[0]
        arrows[0] = Arrow(a.id, a.tail, a.head, (1, 1))
    elif kind == "boundary":
        b = list(faces[0].boundary)
        b[0], b[1] = b[1], b[0]
        faces[0] = Face(+1, tuple(b))
    return Dimer("spp_corrupt", d.vertices, tuple(arrows), tuple(faces))


@pytest.mark.parametrize("kind", ["sign", "shift", "boundary"])
def test_negative_controls(kind):
    d = corrupted_spp(kind)
    rep = d.validate()
    assert not rep.ok
    assert rep.issues  # a concrete witness is reported


def test_ring_compatibility_spot_checks(verifiers, sh_models):
    # multiplying winding families is compatible with the image bookkeeping:
    # alpha_i^n alpha_i^m sums to alpha_i^{n+m}, and alpha_i^n tau_{i,j}
    # reproduces tau at winding n+1
    from dimermirror.mirror_sh import E as E_label, SHElement

    for name, v in verifiers.items():
        sh = sh_models[name]
        for i in range(1, sh.n_classes + 1):
            m = sh.m[i]
            alpha = lambda n: sum(
                (SHElement.of(E_label(i, j, n)) for j in range(1, m + 1)), SHElement()
            )
            assert sh.mul(alpha(2), alpha(3)) == alpha(5)
            for j in range(2, m + 1):
                tau = lambda n: sum(
                    (SHElement.of(E_label(i, l, n)) for l in range(1, j)), SHElement()
                )
                assert sh.mul(alpha(1), tau(1)) == tau(2)
