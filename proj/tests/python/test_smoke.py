import procosh as pc


def test_hom_counts():
    assert len(pc.hom_set(pc.fin_set(2), pc.fin_set(3))) == 9
    assert len(pc.hom_set(pc.cyclic(2), pc.cyclic(4))) == 2
    assert len(pc.hom_set(pc.cyclic(3), pc.cyclic(4))) == 1


def test_product_iso():
    obj, p1, p2 = pc.product(pc.cyclic(2), pc.cyclic(3))
    assert obj.size == 6
    assert pc.find_iso(obj, pc.cyclic(6)) is not None
    assert pc.find_iso(pc.klein_four(), pc.cyclic(4)) is None


def test_image_and_joint_image():
    z4 = pc.cyclic(4)
    dbl = pc.fin_mor(z4, z4, [0, 2, 0, 2])
    repi, mono = pc.image_factor(dbl)
    assert mono.dom.size == 2
    assert pc.compose(mono, repi) == dbl
    sub, incl = pc.joint_image([dbl])
    assert sub.size == 2


def test_global_cosections_orders():
    a = pc.constant_cosheaf(pc.cyclic(2), pc.cantor_space())
    gc = pc.global_cosections_chain(a)
    assert [gc.level(n).size for n in range(4)] == [2, 4, 16, 256]


def test_cosections_and_costalk():
    k = pc.cantor_space()
    a = pc.constant_cosheaf(pc.fin_set(2), k)
    u = pc.clopen(k, 1, [0])
    cu = pc.cosections(a, u)
    assert [cu.level(j).size for j in range(3)] == [2, 4, 8]
    stalk = pc.costalk(a, pc.cantor_thread(k, 0))
    assert stalk.level(3).size == 2


def test_skyscraper_off_point_is_initial():
    k = pc.cantor_space()
    sky = pc.skyscraper(pc.cantor_thread(k, 0), pc.fin_set(3), k)
    away = pc.costalk(sky, pc.cantor_thread(k, 1))
    assert away.level(0).size == 3
    assert away.level(2).size == 0


def test_bundle_round_trip():
    fam = pc.fam_obj("set", [pc.fin_set(2), pc.fin_set(3)])
    a = pc.cosheaf_from_json(
        pc.cosheaf_to_json(pc.constant_cosheaf(pc.fin_set(2), pc.finite_space(2)), 2)
    )
    b = pc.to_bundle(a)
    back = pc.from_bundle(b)
    assert pc.fam_find_iso(back.level(0), a.level(0)) is not None
    assert fam.index_size == 2


def test_group_object_checks():
    g = pc.constant_cosheaf(pc.cyclic(2, "grp"), pc.finite_space(2))
    data = pc.to_group_object(g)
    rep = pc.check_group_object(data, 2)
    assert rep["ok"]
    back = pc.from_group_object(data, "grp")
    assert pc.fam_find_iso(back.level(0), g.level(0)) is not None


def test_capability_errors():
    import pytest

    g = pc.fam_obj("grp", [pc.symmetric3()])
    with pytest.raises(pc.CapabilityError):
        pc.fam_global_cosections(g)


def test_suite_runner():
    report = pc.run_suite("costalk", seed=7)
    assert report["cases"] == report["passed"]
    assert report["failures"] == []
    assert "key-lemma" in pc.suite_names()
