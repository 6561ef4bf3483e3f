"""Span refinements of a cover and the hypercover conditions.

A refinement replaces each pair of components by a class of spans between
them; the refinement is a hypercover when the spans jointly cover every
pairwise product and every boundary-triangle limit.  The refinement by
identity spans plus all representable-vertex spans (the connected
generators of a presheaf topos) always qualifies.
"""

import toposdescent as td

pt = td.FinPoset.point()
cover = td.family_from_parts(
    pt,
    {"1": td.constant_presheaf(("a",), pt), "2": td.constant_presheaf(("b", "c"), pt)},
)

ref = td.connected_refinement(cover)
print("connected refinement: S1 =", len(ref.base.sset.s1), " S2 =", len(ref.base.sset.s2))
print("self-duality laws:", "ok" if not td.validate_selfdual(ref) else "violated")
print("filling condition:", td.condition_g(ref))
print("hypercover:", td.is_hypercover(ref.base, cover))

# the comparison into the canonical family of the cover
m = td.counit(ref.base)
print("comparison map valid:", not td.validate_simplicial_family_morphism(m))
cech = td.cech_simplicial_family(cover)
print("commutes with dualities:", not td.morphism_commutes_with_dualities(m, ref, cech))

# starving the class breaks joint surjectivity, and the report names what
# is missed
comps = td.family_components(cover)
ident = [
    td.ClassSpan(i, i, u, td.PresheafMap.identity(u), td.PresheafMap.identity(u))
    for i, u in sorted(comps.items())
]
starved = td.one_span_refinement(cover, td.SpanClassSp(tuple(ident)))
print("\nidentity spans only:")
print("  hypercover:", td.is_hypercover(starved.base, cover))
report = td.hypercover_report(starved.base)
for pair, missed in sorted(report["level1"].items()):
    if missed:
        print(f"  uncovered over {pair}: {missed}")

# the joint-surjectivity criteria computed straight from a class
cls = td.SpanClass((comps["1"], comps["2"]))
print("\ncomponent class satisfies the covering criteria:", td.check_epi_criteria(cover, cls))
