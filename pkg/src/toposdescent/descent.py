"""Descent data over an index simplicial set, over a simplicial family, and
over a cover, with the correspondences between them.

An index descent datum assigns a bijection of carriers to every
1-simplex, trivially on degenerate simplices and compatibly with every
triangle; these are the same thing as actions of the fundamental
groupoid.  A family descent datum assigns bijections elementwise along
the components of level one (stored in the first-projection form, one
bijection per component element per point); a cover descent datum does
the same along the pairwise products of the cover.  Over a hypercover
refinement the family data and the cover data determine each other by
composing with, respectively solving against, the canonical comparison
maps.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import IncompatibleFamilyError
from .fintopos import Family, family_components
from .family import SelfDualFamily, span_morphism_pairs
from .groupoid import (
    GroupoidAction,
    GroupoidPresentation,
    solve_bijection_slots,
    validate_action,
)
from .hypercover import is_hypercover
from .simplicial import TruncSSet, cech_nerve


def bijections(dom, cod):
    """All bijections between two finite label tuples, deterministically."""
    if len(dom) != len(cod):
        return []
    return [dict(zip(dom, perm)) for perm in itertools.permutations(cod)]


def _is_bijection(m, dom, cod):
    return (
        set(m) == set(dom)
        and set(m.values()) == set(cod)
        and len(set(m.values())) == len(m)
    )


def _compose(outer, inner):
    return {x: outer[y] for x, y in inner.items()}


@dataclass
class SDescentDatum:
    """Carriers per vertex and a bijection per 1-simplex."""

    carrier: dict
    s: dict


def validate_s_descent(sset: TruncSSet, d: SDescentDatum):
    """Empty iff identity and cocycle laws hold over the index."""
    out = []
    for i in sset.s0:
        if i not in d.carrier:
            out.append(f"carrier missing at {i!r}")
    if out:
        return out
    for l in sset.s1:
        m = d.s.get(l)
        i, j = sset.endpoints(l)
        if m is None:
            out.append(f"no bijection for 1-simplex {l!r}")
        elif not _is_bijection(m, d.carrier[i], d.carrier[j]):
            out.append(f"value at {l!r} is not a bijection of the carriers")
    if out:
        return out
    for i in sset.s0:
        m = d.s[sset.deg(0, 0, i)]
        if any(m[x] != x for x in d.carrier[i]):
            out.append(f"identity law fails at vertex {i!r}")
    for w in sset.s2:
        lhs = d.s[sset.d(2, 1, w)]
        rhs = _compose(d.s[sset.d(2, 0, w)], d.s[sset.d(2, 2, w)])
        if lhs != rhs:
            out.append(f"cocycle fails at 2-simplex {w!r}")
    return out


def s_to_action(sset: TruncSSet, d: SDescentDatum) -> GroupoidAction:
    """The action of the fundamental groupoid with each generator acting by
    its bijection; inverse to :func:`action_to_s`."""
    bad = validate_s_descent(sset, d)
    if bad:
        raise ValueError("invalid descent datum: " + "; ".join(bad))
    return GroupoidAction(carrier=dict(d.carrier), gen_action={l: dict(d.s[l]) for l in sset.s1})


def action_to_s(sset: TruncSSet, a: GroupoidAction, pres: GroupoidPresentation = None) -> SDescentDatum:
    from .groupoid import fundamental_presentation

    pres = pres or fundamental_presentation(sset)
    bad = validate_action(pres, a)
    if bad:
        raise ValueError("invalid action: " + "; ".join(bad))
    return SDescentDatum(carrier=dict(a.carrier), s={l: dict(a.gen_action[l]) for l in sset.s1})


def enumerate_s_descent_data(sset: TruncSSet, size_bound: int = None, carriers=None):
    """All valid index descent data with canonical carriers of size at most
    the bound, or on fixed carriers.

    One slot per 1-simplex (degenerate ones pinned to the identity), with
    the triangles as composition constraints, solved by backtracking.
    """
    if carriers is None:
        choices = itertools.product(range(size_bound + 1), repeat=len(sset.s0))
        carrier_list = [
            {i: tuple(range(n)) for i, n in zip(sset.s0, sizes)} for sizes in choices
        ]
    else:
        carrier_list = [dict(carriers)]
    ident = {sset.deg(0, 0, i) for i in sset.s0}
    slot_of = {l: k for k, l in enumerate(sset.s1)}
    constraints = sorted(
        {
            (
                slot_of[sset.d(2, 2, w)],
                slot_of[sset.d(2, 0, w)],
                slot_of[sset.d(2, 1, w)],
            )
            for w in sset.s2
        }
    )
    out = []
    for carrier in carrier_list:
        if any(
            len(carrier[sset.d(1, 1, l)]) != len(carrier[sset.d(1, 0, l)])
            for l in sset.s1
        ):
            continue
        domains = []
        for l in sset.s1:
            i, j = sset.endpoints(l)
            if l in ident:
                domains.append([{x: x for x in carrier[i]}])
            else:
                domains.append(bijections(carrier[i], carrier[j]))
        for combo in solve_bijection_slots(domains, constraints):
            cand = SDescentDatum(
                carrier=dict(carrier), s={l: dict(m) for l, m in zip(sset.s1, combo)}
            )
            assert not validate_s_descent(sset, cand)
            out.append(cand)
    return out


@dataclass
class HDescentDatum:
    """Carriers per vertex and, for each 1-simplex, a bijection per element
    of its component at each point of the base (the first-projection form
    of an isomorphism over the leg swap)."""

    family: SelfDualFamily
    carrier: dict
    sigma_hat: dict

    def value(self, l, p, e):
        return self.sigma_hat[l][p][e]


def validate_h_descent(d: HDescentDatum):
    """Empty iff the elementwise bijections are natural in the base point,
    trivial on degenerate images, and compatible with every triangle."""
    f = d.family.base
    sset = f.sset
    out = []
    for i in sset.s0:
        if i not in d.carrier:
            out.append(f"carrier missing at {i!r}")
    if out:
        return out
    for l in sset.s1:
        i, j = sset.endpoints(l)
        comp = f.component(1, l)
        table = d.sigma_hat.get(l, {})
        for p in comp.base.points:
            for e in comp.fibers[p]:
                m = table.get(p, {}).get(e)
                if m is None:
                    out.append(f"missing value at {l!r}, point {p!r}, element {e!r}")
                elif not _is_bijection(m, d.carrier[i], d.carrier[j]):
                    out.append(f"value at {l!r}, {e!r} is not a carrier bijection")
        if out:
            return out
        for p, q in comp.base.strict_pairs():
            for e in comp.fibers[q]:
                if table[p][comp.restrict(p, q, e)] != table[q][e]:
                    out.append(f"value at {l!r} is not natural at {e!r}")
    for i in sset.s0:
        l = sset.deg(0, 0, i)
        s0 = f.component_degen(0, 0, i)
        comp0 = f.component(0, i)
        for p in comp0.base.points:
            for x in comp0.fibers[p]:
                m = d.value(l, p, s0.apply(p, x))
                if any(m[y] != y for y in d.carrier[i]):
                    out.append(f"identity law fails at vertex {i!r} on {x!r}")
    for w in sset.s2:
        comp = f.component(2, w)
        d2 = f.component_face(2, 2, w)
        d1 = f.component_face(2, 1, w)
        d0 = f.component_face(2, 0, w)
        l, t, r = sset.d(2, 2, w), sset.d(2, 1, w), sset.d(2, 0, w)
        for p in comp.base.points:
            for x in comp.fibers[p]:
                lhs = _compose(d.value(r, p, d0.apply(p, x)), d.value(l, p, d2.apply(p, x)))
                if lhs != d.value(t, p, d1.apply(p, x)):
                    out.append(f"cocycle fails at 2-simplex {w!r} on {x!r}")
    return out


def induced_h_from_s(d: SDescentDatum, f: SelfDualFamily) -> HDescentDatum:
    """Extend an index datum to the family: the bijection of a 1-simplex is
    taken constantly on its whole component."""
    bad = validate_s_descent(f.base.sset, d)
    if bad:
        raise ValueError("invalid descent datum: " + "; ".join(bad))
    sigma = {}
    for l in f.base.sset.s1:
        comp = f.base.component(1, l)
        sigma[l] = {
            p: {e: dict(d.s[l]) for e in comp.fibers[p]} for p in comp.base.points
        }
    return HDescentDatum(family=f, carrier=dict(d.carrier), sigma_hat=sigma)


@dataclass
class UDescentDatum:
    """Carriers per cover index and, for each nerve pair, a bijection per
    element of the pairwise product at each point."""

    cover: Family
    carrier: dict
    sigma: dict

    def value(self, i, j, p, x, y):
        return self.sigma[(i, j)][p][(x, y)]


def validate_u_descent(u: UDescentDatum):
    """Empty iff the datum is total on the pairwise products, natural in the
    point, trivial on diagonals, and compatible on triple products."""
    out = []
    comps = family_components(u.cover)
    nerve, _ = cech_nerve(u.cover)
    for i in nerve.s0:
        if i not in u.carrier:
            out.append(f"carrier missing at {i!r}")
    if out:
        return out
    base = u.cover.total.base
    for i, j in nerve.s1:
        table = u.sigma.get((i, j), {})
        for p in base.points:
            for x in comps[i].fibers[p]:
                for y in comps[j].fibers[p]:
                    m = table.get(p, {}).get((x, y))
                    if m is None:
                        out.append(f"missing value over ({i!r},{j!r}) at {p!r} on ({x!r},{y!r})")
                    elif not _is_bijection(m, u.carrier[i], u.carrier[j]):
                        out.append(f"value over ({i!r},{j!r}) on ({x!r},{y!r}) is not a carrier bijection")
        if out:
            return out
        for p, q in base.strict_pairs():
            for x in comps[i].fibers[q]:
                for y in comps[j].fibers[q]:
                    down = table[p][(comps[i].restrictions[(p, q)][x], comps[j].restrictions[(p, q)][y])]
                    if down != table[q][(x, y)]:
                        out.append(f"value over ({i!r},{j!r}) is not natural on ({x!r},{y!r})")
    for i in nerve.s0:
        for p in base.points:
            for x in comps[i].fibers[p]:
                m = u.value(i, i, p, x, x)
                if any(m[y] != y for y in u.carrier[i]):
                    out.append(f"identity law fails over {i!r} on {x!r}")
    for i, j, k in nerve.s2:
        for p in base.points:
            for x in comps[i].fibers[p]:
                for y in comps[j].fibers[p]:
                    for z in comps[k].fibers[p]:
                        lhs = _compose(u.value(j, k, p, y, z), u.value(i, j, p, x, y))
                        if lhs != u.value(i, k, p, x, z):
                            out.append(
                                f"cocycle fails over ({i!r},{j!r},{k!r}) on ({x!r},{y!r},{z!r})"
                            )
    return out


def u_to_h(u: UDescentDatum, f: SelfDualFamily) -> HDescentDatum:
    """Pull a cover datum back along the comparison maps: the value on an
    element of a component is the value on its pair of face images."""
    bad = validate_u_descent(u)
    if bad:
        raise ValueError("invalid descent datum: " + "; ".join(bad))
    fam = f.base
    sigma = {}
    for l in fam.sset.s1:
        i, j = fam.sset.endpoints(l)
        comp = fam.component(1, l)
        d1 = fam.component_face(1, 1, l)
        d0 = fam.component_face(1, 0, l)
        sigma[l] = {
            p: {
                e: dict(u.value(i, j, p, d1.apply(p, e), d0.apply(p, e)))
                for e in comp.fibers[p]
            }
            for p in comp.base.points
        }
    out = HDescentDatum(family=f, carrier=dict(u.carrier), sigma_hat=sigma)
    bad = validate_h_descent(out)
    if bad:
        raise ValueError("pulled-back datum is invalid: " + "; ".join(bad))
    return out


def h_to_u(d: HDescentDatum, cover: Family) -> UDescentDatum:
    """Solve a cover datum from a family datum over a hypercover refinement.

    The family of comparison maps is jointly surjective onto each pairwise
    product, so the elementwise bijections determine a unique table on the
    products; inconsistent values mean the input was not a genuine family
    datum for this refinement."""
    f = d.family.base
    if not is_hypercover(f, cover):
        raise ValueError("the family is not a hypercover refinement of the cover")
    bad = validate_h_descent(d)
    if bad:
        raise ValueError("invalid descent datum: " + "; ".join(bad))
    base = cover.total.base
    sigma = {}
    for l in f.sset.s1:
        i, j = f.sset.endpoints(l)
        comp = f.component(1, l)
        d1 = f.component_face(1, 1, l)
        d0 = f.component_face(1, 0, l)
        table = sigma.setdefault((i, j), {})
        for p in comp.base.points:
            for e in comp.fibers[p]:
                key = (d1.apply(p, e), d0.apply(p, e))
                val = d.value(l, p, e)
                prev = table.setdefault(p, {}).setdefault(key, val)
                if prev != val:
                    raise IncompatibleFamilyError(
                        f"incompatible family: values disagree over ({i!r},{j!r}) at {key!r}"
                    )
    for pair in sigma:
        for p in base.points:
            sigma[pair].setdefault(p, {})
    out = UDescentDatum(cover=cover, carrier=dict(d.carrier), sigma=sigma)
    bad = validate_u_descent(out)
    if bad:
        raise IncompatibleFamilyError("incompatible family: " + "; ".join(bad))
    return out


def is_consistent(d: SDescentDatum, f: SelfDualFamily) -> bool:
    """Whether the datum assigns equal bijections to every pair of parallel
    1-simplices linked by a span morphism."""
    bad = validate_s_descent(f.base.sset, d)
    if bad:
        raise ValueError("invalid descent datum: " + "; ".join(bad))
    return all(d.s[l] == d.s[t] for l, t in span_morphism_pairs(f.base))


def consistent_to_g_action(
    d: SDescentDatum, f: SelfDualFamily, pres: GroupoidPresentation = None
) -> GroupoidAction:
    """A consistent datum acts through the refined fundamental groupoid."""
    from .groupoid import g_fundamental_presentation

    if not is_consistent(d, f):
        raise ValueError("descent datum is not consistent")
    pres = pres or g_fundamental_presentation(f)
    action = GroupoidAction(
        carrier=dict(d.carrier), gen_action={l: dict(d.s[l]) for l in f.base.sset.s1}
    )
    bad = validate_action(pres, action)
    if bad:
        raise ValueError("datum does not define an action: " + "; ".join(bad))
    return action


def action_to_consistent(
    a: GroupoidAction, f: SelfDualFamily, pres: GroupoidPresentation = None
) -> SDescentDatum:
    from .groupoid import g_fundamental_presentation

    pres = pres or g_fundamental_presentation(f)
    bad = validate_action(pres, a)
    if bad:
        raise ValueError("invalid action: " + "; ".join(bad))
    d = SDescentDatum(carrier=dict(a.carrier), s={l: dict(a.gen_action[l]) for l in f.base.sset.s1})
    if not is_consistent(d, f):
        raise ValueError("action does not yield a consistent datum")
    return d


def _carrier_list(objects, size_bound, carriers):
    if carriers is not None:
        return [dict(carriers)]
    choices = itertools.product(range(size_bound + 1), repeat=len(objects))
    return [{i: tuple(range(n)) for i, n in zip(objects, sizes)} for sizes in choices]


def enumerate_h_descent_data(f: SelfDualFamily, size_bound: int = None, carriers=None):
    """All valid family descent data with carriers up to the bound (or on
    fixed carriers).

    Naturality means one bijection per restriction orbit of each component;
    the identity law pins the orbits meeting a degenerate image, and the
    cocycle law becomes composition constraints between orbit slots, solved
    by backtracking.
    """
    from .fintopos import connected_components

    fam = f.base
    sset = fam.sset
    slots, slot_of = [], {}
    for l in sset.s1:
        comp = fam.component(1, l)
        for orbit in connected_components(comp):
            idx = len(slots)
            slots.append((l, orbit))
            for el in orbit.elements():
                slot_of[(l, el)] = idx
    pinned = set()
    for i in sset.s0:
        l = sset.deg(0, 0, i)
        s0 = fam.component_degen(0, 0, i)
        comp0 = fam.component(0, i)
        for p in comp0.base.points:
            for x in comp0.fibers[p]:
                pinned.add(slot_of[(l, (p, s0.apply(p, x)))])
    constraints = set()
    for w in sset.s2:
        comp = fam.component(2, w)
        d2 = fam.component_face(2, 2, w)
        d1 = fam.component_face(2, 1, w)
        d0 = fam.component_face(2, 0, w)
        l, t, r = sset.d(2, 2, w), sset.d(2, 1, w), sset.d(2, 0, w)
        for p in comp.base.points:
            for x in comp.fibers[p]:
                constraints.add(
                    (
                        slot_of[(l, (p, d2.apply(p, x)))],
                        slot_of[(r, (p, d0.apply(p, x)))],
                        slot_of[(t, (p, d1.apply(p, x)))],
                    )
                )
    out = []
    for carrier in _carrier_list(sset.s0, size_bound, carriers):
        if any(
            len(carrier[sset.d(1, 1, l)]) != len(carrier[sset.d(1, 0, l)])
            for l in sset.s1
        ):
            continue
        domains = []
        for idx, (l, orbit) in enumerate(slots):
            i, j = sset.endpoints(l)
            if idx in pinned:
                domains.append([{x: x for x in carrier[i]}])
            else:
                domains.append(bijections(carrier[i], carrier[j]))
        for combo in solve_bijection_slots(domains, sorted(constraints)):
            sigma = {}
            for (l, orbit), m in zip(slots, combo):
                table = sigma.setdefault(l, {})
                for p, e in orbit.elements():
                    table.setdefault(p, {})[e] = dict(m)
            for l in sset.s1:
                table = sigma.setdefault(l, {})
                for p in fam.h0.base.points:
                    table.setdefault(p, {})
            cand = HDescentDatum(family=f, carrier=dict(carrier), sigma_hat=sigma)
            assert not validate_h_descent(cand)
            out.append(cand)
    return out


def enumerate_u_descent_data(cover: Family, size_bound: int = None, carriers=None):
    """All valid cover descent data with carriers up to the bound (or on
    fixed carriers); same orbit-and-constraint search as the family case."""
    from .fintopos import connected_components, product

    comps = family_components(cover)
    nerve, _ = cech_nerve(cover)
    base = cover.total.base
    slots, slot_of = [], {}
    for i, j in nerve.s1:
        prod, _, _ = product(comps[i], comps[j])
        for orbit in connected_components(prod):
            idx = len(slots)
            slots.append(((i, j), orbit))
            for el in orbit.elements():
                slot_of[((i, j), el)] = idx
    pinned = set()
    for i in nerve.s0:
        for p in base.points:
            for x in comps[i].fibers[p]:
                pinned.add(slot_of[((i, i), (p, (x, x)))])
    constraints = set()
    for i, j, k in nerve.s2:
        for p in base.points:
            for x in comps[i].fibers[p]:
                for y in comps[j].fibers[p]:
                    for z in comps[k].fibers[p]:
                        constraints.add(
                            (
                                slot_of[((i, j), (p, (x, y)))],
                                slot_of[((j, k), (p, (y, z)))],
                                slot_of[((i, k), (p, (x, z)))],
                            )
                        )
    out = []
    for carrier in _carrier_list(nerve.s0, size_bound, carriers):
        if any(len(carrier[i]) != len(carrier[j]) for (i, j) in nerve.s1):
            continue
        domains = []
        for idx, ((i, j), orbit) in enumerate(slots):
            if idx in pinned:
                domains.append([{x: x for x in carrier[i]}])
            else:
                domains.append(bijections(carrier[i], carrier[j]))
        for combo in solve_bijection_slots(domains, sorted(constraints)):
            sigma = {}
            for ((i, j), orbit), m in zip(slots, combo):
                table = sigma.setdefault((i, j), {})
                for p, e in orbit.elements():
                    table.setdefault(p, {})[e] = dict(m)
            for pair in sigma:
                for p in base.points:
                    sigma[pair].setdefault(p, {})
            cand = UDescentDatum(cover=cover, carrier=dict(carrier), sigma=sigma)
            assert not validate_u_descent(cand)
            out.append(cand)
    return out
