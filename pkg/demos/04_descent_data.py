"""Descent data at the index, family, and cover levels.

An index datum is a bijection per 1-simplex obeying the identity and
cocycle laws (the same thing as an action of the fundamental groupoid).
A family datum assigns bijections elementwise along the level-one
components; a cover datum does the same along pairwise products.  Over a
hypercover refinement the two determine each other uniquely.
"""

import toposdescent as td

pt = td.FinPoset.point()
cover = td.family_from_parts(
    pt,
    {"1": td.constant_presheaf(("a",), pt), "2": td.constant_presheaf(("b", "c"), pt)},
)
ref = td.connected_refinement(cover)

udata = td.enumerate_u_descent_data(cover, 2)
hdata = td.enumerate_h_descent_data(ref, 2)
print("cover descent data with carriers <= 2:", len(udata))
print("family descent data over the refinement:", len(hdata))

for u in udata:
    h = td.u_to_h(u, ref)
    assert td.h_to_u(h, cover).sigma == u.sigma
print("transfer is a bijection: round trips are the identity")

# a concrete datum: both carriers {0,1}, constant swap across components
swap = [
    u
    for u in udata
    if u.carrier == {"1": (0, 1), "2": (0, 1)}
    and u.value("1", "2", "pt", "a", "b") == {0: 1, 1: 0}
    and u.value("1", "2", "pt", "a", "c") == {0: 1, 1: 0}
][0]
print("\nswap datum over (1,2):", {k: swap.value("1", "2", "pt", *k) for k in (("a", "b"), ("a", "c"))})

# index data on the refinement correspond to groupoid actions
sdata = td.enumerate_s_descent_data(ref.base.sset, 2)
consistent = [d for d in sdata if td.is_consistent(d, ref)]
pres = td.g_fundamental_presentation(ref)
actions = td.enumerate_actions(pres, 2)
print("\nindex data:", len(sdata), " consistent:", len(consistent), " actions:", len(actions))
for d in consistent:
    a = td.consistent_to_g_action(d, ref, pres)
    back = td.action_to_consistent(a, ref, pres)
    assert back.s == d.s
print("consistent data <-> actions: round trips are the identity")
