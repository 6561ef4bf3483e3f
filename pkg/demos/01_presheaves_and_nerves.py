"""Finite presheaves and the nerve of a cover.

Builds the running example (two components of sizes one and two over the
one-point base), computes its nerve with the tuple-reversal duality, and
checks the simplicial laws.  Also shows a poset base, where presheaves
carry restriction maps.
"""

import toposdescent as td
from toposdescent.dot import sset_dot

# --- finite sets are presheaves on the one-point poset --------------------
pt = td.FinPoset.point()
u1 = td.constant_presheaf(("a",), pt)
u2 = td.constant_presheaf(("b", "c"), pt)
cover = td.family_from_parts(pt, {"1": u1, "2": u2})
print("cover components:", {i: c.fibers["pt"] for i, c in td.family_components(cover).items()})

nerve, tau = td.cech_nerve(cover)
print("nerve sizes:", len(nerve.s0), len(nerve.s1), len(nerve.s2))
print("faces of (1,2,1):", [nerve.d(2, i, ("1", "2", "1")) for i in (2, 1, 0)])
print("duality swaps tuples:", ("1", "2"), "->", tau.op1(("1", "2")))
print("simplicial identities:", "ok" if not td.validate(nerve) else "violated")
print("duality laws:", "ok" if not td.validate_duality(nerve, tau) else "violated")
print("groupoid filling condition:", td.check_selfdual_groupoid_condition(nerve, tau))

# --- a base with genuine restrictions --------------------------------------
chain = td.FinPoset.from_pairs(("low", "high"), [("low", "high")])
y_high = td.representable(chain, "high")
print("\nrepresentable on the chain:", {p: y_high.fibers[p] for p in chain.points})
prod, _, _ = td.product(y_high, td.representable(chain, "low"))
print("product with the lower representable:", {p: prod.fibers[p] for p in chain.points})

print("\nDOT of the 1-skeleton:\n")
print(sset_dot(nerve))
