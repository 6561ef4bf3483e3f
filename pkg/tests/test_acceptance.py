"""Acceptance suite: one test per criterion, each printing a verdict line
and enforcing its runtime budget.

Run with ``pytest tests/test_acceptance.py -s`` to see the verdict lines.
"""

import time

import toposdescent as td
from conftest import (
    full_nerve_cover,
    generated_covers,
    point,
    swap_datum,
)


def _fixture_cover():
    pt = point()
    return td.family_from_parts(
        pt,
        {
            "1": td.constant_presheaf(("a",), pt),
            "2": td.constant_presheaf(("b", "c"), pt),
        },
    )


def _two_singleton_cover():
    pt = point()
    return td.family_from_parts(
        pt,
        {"1": td.constant_presheaf(("a",), pt), "2": td.constant_presheaf(("b",), pt)},
    )


def _singleton_cover():
    pt = point()
    return td.family_from_parts(pt, {"1": td.constant_presheaf(("a",), pt)})


def _chain_cover():
    from conftest import chain2, named_representable

    poset = chain2()
    return td.family_from_parts(poset, {"1": named_representable(poset, "b", "u")})


def _verdict(n, label, t0, limit):
    elapsed = time.monotonic() - t0
    print(f"ACCEPTANCE {n}: PASS ({elapsed:.2f}s / limit {limit}s) {label}")
    assert elapsed < limit, f"criterion {n} exceeded its {limit}s budget"


def test_criterion_1_nerve_duality_suite():
    t0 = time.monotonic()
    covers = generated_covers()
    assert len(covers) >= 10
    for name, cover in covers:
        nerve, tau = td.cech_nerve(cover)
        assert td.validate(nerve) == [], name
        assert td.validate_duality(nerve, tau) == [], name
        assert td.check_selfdual_groupoid_condition(nerve, tau), name
    _verdict(1, f"nerve/duality on {len(covers)} covers", t0, 1.0)


def test_criterion_2_groupoid_suite():
    t0 = time.monotonic()
    nerve, _ = td.cech_nerve(full_nerve_cover())
    pres = td.fundamental_presentation(nerve)
    w = pres.word(("1", "2"), ("2", "1"))
    assert td.word_equal(pres, w, td.Word("1", ()), 10) is td.Verdict.EQUAL

    families = [
        td.connected_refinement(_fixture_cover()),
        td.connected_refinement(_two_singleton_cover()),
        td.connected_refinement(_chain_cover()),
    ]
    comps = td.family_components(_two_singleton_cover())
    families.append(
        td.zero_span_refinement(
            _two_singleton_cover(), td.SpanClass((comps["1"], comps["2"]))
        )
    )
    checked = 0
    for fam in families:
        assert td.condition_g(fam)
        gp = td.g_fundamental_presentation(fam)
        for l in fam.base.sset.s1:
            i = fam.base.sset.d(1, 1, l)
            lop = fam.tau_s.op1(l)
            word = td.Word(i, ((l, 1), (lop, 1)))
            ident = td.Word(i, ((fam.base.sset.deg(0, 0, i), 1),))
            assert td.word_equal(gp, word, ident, 10) is td.Verdict.EQUAL
            checked += 1
    _verdict(2, f"inverse law certified for {checked} generators", t0, 1.0)


def test_criterion_3_descent_equals_action():
    t0 = time.monotonic()
    nerve, _ = td.cech_nerve(full_nerve_cover())
    pres = td.fundamental_presentation(nerve)
    fixed = {"1": (0, 1), "2": (0, 1)}
    data_fixed = td.enumerate_s_descent_data(nerve, carriers=fixed)
    acts_fixed = td.enumerate_actions(pres, 0, carriers=fixed)
    assert len(data_fixed) == len(acts_fixed)
    data = td.enumerate_s_descent_data(nerve, 2)
    acts = td.enumerate_actions(pres, 2)
    assert len(data) == len(acts)
    for d in data:
        a = td.s_to_action(nerve, d)
        back = td.action_to_s(nerve, a, pres)
        assert back.carrier == d.carrier and back.s == d.s
    act_keys = {
        (
            tuple(sorted(a.carrier.items())),
            tuple(sorted((g, tuple(sorted(m.items()))) for g, m in a.gen_action.items())),
        )
        for a in acts
    }
    for d in data:
        a = td.s_to_action(nerve, d)
        key = (
            tuple(sorted(a.carrier.items())),
            tuple(sorted((g, tuple(sorted(m.items()))) for g, m in a.gen_action.items())),
        )
        assert key in act_keys
    _verdict(3, f"{len(data)} descent data = {len(acts)} actions, round trips", t0, 5.0)


def test_criterion_4_transfer_bijection():
    t0 = time.monotonic()
    cover = _fixture_cover()
    ref = td.connected_refinement(cover)
    hdata = td.enumerate_h_descent_data(ref, 2)
    udata = td.enumerate_u_descent_data(cover, 2)
    assert len(hdata) == len(udata)
    for u in udata:
        h = td.u_to_h(u, ref)
        back = td.h_to_u(h, cover)
        assert back.sigma == u.sigma and back.carrier == u.carrier
    for h in hdata:
        u = td.h_to_u(h, cover)
        back = td.u_to_h(u, ref)
        assert back.sigma_hat == h.sigma_hat and back.carrier == h.carrier
    _verdict(4, f"{len(hdata)} family data <-> {len(udata)} cover data", t0, 30.0)


def test_criterion_5_glue_extract_round_trip():
    t0 = time.monotonic()
    cover = _fixture_cover()
    udata = td.enumerate_u_descent_data(cover, 2)
    for u in udata:
        lc = td.glue(cover, u)
        back = td.extract_descent(lc)
        assert back.carrier == u.carrier and back.sigma == u.sigma
        lc2 = td.glue(cover, back)
        assert lc2.space == lc.space
        assert all(lc2.theta[i].comp == lc.theta[i].comp for i in lc.theta)
    swap = swap_datum(cover)
    assert td.glue(cover, swap).space.size() == 2
    _verdict(5, f"glue/extract identity on {len(udata)} data, swap |X| = 2", t0, 5.0)


def test_criterion_6_construction_conformance():
    t0 = time.monotonic()
    single = _singleton_cover()
    two = _two_singleton_cover()
    fixture = _fixture_cover()
    chain = _chain_cover()

    jobs = []
    comps1 = td.family_components(single)
    jobs.append((single, td.SpanClass((comps1["1"],))))
    comps2 = td.family_components(two)
    jobs.append((two, td.SpanClass((comps2["1"], comps2["2"]))))
    compsc = td.family_components(chain)
    jobs.append(
        (
            chain,
            td.SpanClass(
                (compsc["1"],)
                + tuple(td.representable(chain.total.base, p) for p in chain.total.base.points)
            ),
        )
    )

    ident = [
        td.ClassSpan(i, i, u, td.PresheafMap.identity(u), td.PresheafMap.identity(u))
        for i, u in sorted(comps2.items())
    ]
    sp_jobs = [
        (two, td.SpanClassSp(tuple(ident))),
        (two, td.SpanClassSp(tuple(ident + td.representable_spans(two)))),
        (fixture, None),
        (chain, None),
    ]

    for cover, cls in jobs:
        ref = td.zero_span_refinement(cover, cls)
        assert td.validate_selfdual(ref) == []
        assert td.condition_g(ref)
        if td.check_epi_criteria(cover, cls):
            assert td.is_hypercover(ref.base, cover)
    for cover, csp in sp_jobs:
        ref = td.connected_refinement(cover) if csp is None else td.one_span_refinement(cover, csp)
        assert td.validate_selfdual(ref) == []
        assert td.condition_g(ref)
        if csp is None or td.check_epi_criteria(cover, csp):
            assert td.is_hypercover(ref.base, cover)
    _verdict(6, f"{len(jobs)} zero-span and {len(sp_jobs)} one-span refinements", t0, 10.0)


def test_criterion_7_main1_pipeline():
    t0 = time.monotonic()
    cover = _fixture_cover()
    udata = td.enumerate_u_descent_data(cover, 2)
    for u in udata:
        fam, sdatum = td.main1_forward(cover, u)
        assert td.is_consistent(sdatum, fam)
        back = td.h_to_u(td.induced_h_from_s(sdatum, fam), cover)
        assert back.sigma == u.sigma and back.carrier == u.carrier
    _verdict(7, f"forward pipeline round-trips {len(udata)} data", t0, 30.0)


def test_criterion_8_main2_equivalence():
    t0 = time.monotonic()
    cover = _fixture_cover()
    ref = td.connected_refinement(cover)
    rep = td.main2_equivalence(cover, ref, 2)
    assert rep.object_count_data == rep.object_count_actions
    assert rep.hom_counts_data == rep.hom_counts_actions
    assert rep.round_trips_identity and not rep.mismatches
    _verdict(
        8,
        f"{rep.object_count_data} objects each side, hom tables match",
        t0,
        60.0,
    )


def test_criterion_9_covering_projection_everywhere():
    t0 = time.monotonic()
    fixtures = [
        _fixture_cover(),
        _two_singleton_cover(),
        _singleton_cover(),
        _chain_cover(),
    ]
    total = 0
    for cover in fixtures:
        for u in td.enumerate_u_descent_data(cover, 2):
            assert td.is_covering_projection(cover, u)
            total += 1
    _verdict(9, f"{total} data over {len(fixtures)} fixtures", t0, 5.0)


def test_criterion_10_strictness():
    t0 = time.monotonic()
    pt = point()
    cover = _two_singleton_cover()
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
    fam_small = td.one_span_refinement(cover, small)
    fam_big = td.one_span_refinement(cover, big)
    m = td.inclusion_morphism(fam_small, fam_big)
    pi = td.HypercoverIndex(
        {"S": cover, "L": cover}, {"S": fam_small, "L": fam_big}, {("S", "L"): m}
    )
    _, report = td.assemble(pi)
    assert all(rep.strict for rep in report.values())

    cover_a = _singleton_cover()
    fam_a = td.connected_refinement(cover_a)
    fam_b = td.connected_refinement(cover)
    m2 = td.inclusion_morphism(fam_a, fam_b)
    pi2 = td.HypercoverIndex(
        {"A": cover_a, "B": cover}, {"A": fam_a, "B": fam_b}, {("A", "B"): m2}
    )
    _, report2 = td.assemble(pi2)
    rep = report2[("A", "B")]
    assert not rep.strict
    assert any("object '2'" in f for f in rep.failures)
    _verdict(10, "nested chain strict; injected object reported with witness", t0, 10.0)
