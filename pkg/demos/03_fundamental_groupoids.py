"""Fundamental groupoid presentations and the bounded word problem.

The index simplicial set presents a groupoid: vertices are objects,
1-simplices generate, triangles impose relations, degenerate edges are
identities.  Over a self-dual family with the filling condition, parallel
1-simplices linked by a span morphism are identified too, which makes
every generator invertible by an explicit two-step rewrite.
"""

import toposdescent as td

pt = td.FinPoset.point()
two = td.family_from_parts(
    pt,
    {"1": td.constant_presheaf(("a",), pt), "2": td.constant_presheaf(("b",), pt)},
)
nerve, tau = td.cech_nerve(two)
pres = td.fundamental_presentation(nerve)
print("objects:", pres.objects)
print("generators:", pres.generators)
print("relations:", len(pres.relations))

w = pres.word(("1", "2"), ("2", "1"))
print(
    "(2,1)(1,2) equals the identity at 1:",
    td.word_equal(pres, w, td.Word("1", ()), 10).value,
)

# the refined presentation of a span refinement
cover = td.family_from_parts(
    pt,
    {"1": td.constant_presheaf(("a",), pt), "2": td.constant_presheaf(("b", "c"), pt)},
)
ref = td.connected_refinement(cover)
gp = td.g_fundamental_presentation(ref)
print("\nrefinement generators:", len(gp.generators), " relations:", len(gp.relations))
for l in ref.base.sset.s1[:3]:
    i = ref.base.sset.d(1, 1, l)
    word = td.Word(i, ((l, 1), (ref.tau_s.op1(l), 1)))
    ident = td.Word(i, ((ref.base.sset.deg(0, 0, i), 1),))
    print("  l.op after l ~ identity:", td.word_equal(gp, word, ident, 10).value)

# actions and separating actions
acts = td.enumerate_actions(gp, 2)
print("\nactions with carriers of size <= 2:", len(acts))
two_cross = [l for l in ref.base.sset.s1 if ref.base.sset.endpoints(l) == ("1", "2")]
wa, wb = gp.word(two_cross[0]), gp.word(two_cross[1])
print(
    "two distinct singleton spans compared:",
    td.word_equal(gp, wa, wb, 10).value,
)
