"""Groupoid diagrams over hypercover chains: transitions and strictness."""

import pytest

import toposdescent as td
from conftest import point


def two_node_chain():
    """Nested covers with all components connected (singletons)."""
    pt = point()
    cover_a = td.family_from_parts(pt, {"1": td.constant_presheaf(("a",), pt)})
    cover_b = td.family_from_parts(
        pt,
        {"1": td.constant_presheaf(("a",), pt), "2": td.constant_presheaf(("b",), pt)},
    )
    fam_a = td.connected_refinement(cover_a)
    fam_b = td.connected_refinement(cover_b)
    return cover_a, cover_b, fam_a, fam_b


def nested_class_chain():
    """Same cover, a smaller and a larger class of connected vertices."""
    pt = point()
    cover = td.family_from_parts(
        pt,
        {"1": td.constant_presheaf(("a",), pt), "2": td.constant_presheaf(("b",), pt)},
    )
    comps = td.family_components(cover)
    ident = [
        td.ClassSpan(i, i, u, td.PresheafMap.identity(u), td.PresheafMap.identity(u))
        for i, u in sorted(comps.items())
    ]
    reps = td.representable_spans(cover)
    small = td.SpanClassSp(tuple(ident + reps))
    extra = []
    for ii in sorted(comps):
        for jj in sorted(comps):
            for v in (comps["1"], comps["2"]):
                for u in td.hom_enumerate(v, comps[ii]):
                    for w in td.hom_enumerate(v, comps[jj]):
                        extra.append(td.ClassSpan(ii, jj, v, u, w))
    big = td.SpanClassSp(tuple(ident + reps + extra))
    return (
        cover,
        td.one_span_refinement(cover, small),
        td.one_span_refinement(cover, big),
    )


def test_inclusion_morphism_validates():
    cover_a, cover_b, fam_a, fam_b = two_node_chain()
    m = td.inclusion_morphism(fam_a, fam_b)
    assert td.validate_simplicial_family_morphism(m) == []
    assert td.morphism_commutes_with_dualities(m, fam_a, fam_b) == []


def test_identity_transition_is_strict():
    _, cover_b, _, fam_b = two_node_chain()
    m = td.inclusion_morphism(fam_b, fam_b)
    pres = td.g_fundamental_presentation(fam_b)
    fd = td.transition_functor(m, pres, pres)
    rep = td.is_strict(fd)
    assert rep.strict


def test_unreached_object_is_not_strict():
    cover_a, cover_b, fam_a, fam_b = two_node_chain()
    m = td.inclusion_morphism(fam_a, fam_b)
    pi = td.HypercoverIndex(
        {"A": cover_a, "B": cover_b}, {"A": fam_a, "B": fam_b}, {("A", "B"): m}
    )
    _, report = td.assemble(pi)
    rep = report[("A", "B")]
    assert not rep.strict
    assert any("object '2'" in f for f in rep.failures)


def test_nested_class_chain_is_strict():
    cover, small, big = nested_class_chain()
    m = td.inclusion_morphism(small, big)
    pi = td.HypercoverIndex(
        {"S": cover, "L": cover}, {"S": small, "L": big}, {("S", "L"): m}
    )
    pro, report = td.assemble(pi)
    rep = report[("S", "L")]
    assert rep.strict and not rep.undetermined
    assert set(pro.groupoids) == {"S", "L"}


def test_transition_functor_preserves_relations():
    cover, small, big = nested_class_chain()
    m = td.inclusion_morphism(small, big)
    ps, pb = td.g_fundamental_presentation(small), td.g_fundamental_presentation(big)
    fd = td.transition_functor(m, ps, pb)
    assert set(fd.object_map) == set(ps.objects)
    for g, w in fd.gen_map.items():
        assert len(w.letters) == 1


def test_transition_collapses_related_spans():
    # two source generators related by a span morphism map to words already
    # certified equal in the target
    cover, small, big = nested_class_chain()
    m = td.inclusion_morphism(small, big)
    ps, pb = td.g_fundamental_presentation(small), td.g_fundamental_presentation(big)
    fd = td.transition_functor(m, ps, pb)
    pairs = td.span_morphism_pairs(small.base)
    assert pairs
    l, t = pairs[0]
    assert (
        td.word_equal(pb, fd.word_image(ps.word(l)), fd.word_image(ps.word(t)), 10)
        is td.Verdict.EQUAL
    )


def test_index_requires_valid_nodes(fixture_cover):
    cech = td.cech_simplicial_family(fixture_cover)
    pi = td.HypercoverIndex({"C": fixture_cover}, {"C": cech}, {})
    msgs = td.validate_index(pi)
    assert any("filling" in m for m in msgs)
    with pytest.raises(ValueError):
        td.assemble(pi)


def test_index_rejects_cycles():
    cover_a, cover_b, fam_a, fam_b = two_node_chain()
    m = td.inclusion_morphism(fam_b, fam_b)
    with pytest.raises(ValueError):
        td.HypercoverIndex(
            {"A": cover_b, "B": cover_b},
            {"A": fam_b, "B": fam_b},
            {("A", "B"): m, ("B", "A"): m},
        )


def test_assemble_checks_composites():
    cover, small, big = nested_class_chain()
    m_sb = td.inclusion_morphism(small, big)
    m_ss = td.inclusion_morphism(small, small)
    m_bb = td.inclusion_morphism(big, big)
    pi = td.HypercoverIndex(
        {"S": cover, "M": cover, "L": cover},
        {"S": small, "M": big, "L": big},
        {
            ("S", "M"): m_sb,
            ("M", "L"): m_bb,
            ("S", "L"): m_sb,
        },
    )
    pro, report = td.assemble(pi)
    assert all(rep.strict for rep in report.values())


def test_classifying_category_trivial(singleton_cover):
    nerve, _ = td.cech_nerve(singleton_cover)
    pres = td.fundamental_presentation(nerve)
    cat = td.classifying_category(pres, 2)
    # one action per carrier size: the category of sets of size <= 2
    assert len(cat.objects) == 3
    assert cat.identities_ok and cat.composition_ok
    sizes = sorted(len(a.carrier["1"]) for a in cat.objects)
    assert sizes == [0, 1, 2]
    empty = [n for n, a in enumerate(cat.objects) if not a.carrier["1"]]
    assert len(empty) == 1
    # the empty action is initial: exactly one morphism out of it
    for n, a in enumerate(cat.objects):
        assert len(cat.homs[(empty[0], n)]) == 1


def test_classifying_category_indiscrete(full_nerve):
    nerve, _ = full_nerve
    pres = td.fundamental_presentation(nerve)
    cat = td.classifying_category(pres, 1)
    # actions: both carriers empty, or both singletons
    assert len(cat.objects) == 2
    assert cat.identities_ok and cat.composition_ok


def test_classifying_objects_match_consistent_data(fixture_cover):
    ref = td.connected_refinement(fixture_cover)
    pres = td.g_fundamental_presentation(ref)
    cat = td.classifying_category(pres, 2)
    data = [
        d
        for d in td.enumerate_s_descent_data(ref.base.sset, 2)
        if td.is_consistent(d, ref)
    ]
    assert len(cat.objects) == len(data)
