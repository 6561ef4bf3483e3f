"""Coskeleton data, hypercover checks, and span refinements of a cover.

The refinement constructions build a self-dual simplicial family over a
cover out of a class of spans: 1-simplices are spans over pairs of
components, 2-simplices are commuting two-storey spans, faces forget
storeys, and the duality swaps legs.  The coskeleton data (pairwise
products ``P_ij`` and boundary-triangle limits ``P_ltr``) supports the
hypercover test: the canonical component maps into them must be jointly
epimorphic at levels one and two.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import ClosureError, EmptyComponentError
from .fintopos import (
    Family,
    Presheaf,
    PresheafMap,
    constant_presheaf,
    coproduct,
    cover_is_epi,
    family_components,
    hom_enumerate,
    is_connected,
    label_key,
    pairing,
    product,
    representable,
    sorted_labels,
)
from .family import SelfDualFamily, SimplicialFamily, Span1
from .simplicial import StrictDuality, TruncSSet


@dataclass
class CoskData:
    """Pairwise products and boundary-triangle limits of a family, with the
    canonical component maps into them."""

    nerve_pairs: tuple
    pair_limit: dict
    pair_proj: dict
    t2: tuple
    triple_limit: dict
    can1: dict
    can2: dict


def _triangle_limit(base, sl: Span1, st: Span1, sr: Span1) -> Presheaf:
    """Limit of the boundary of a two-storey span: compatible leg triples."""
    fibers = {}
    for p in base.points:
        out = []
        for a in sl.vertex.fibers[p]:
            for b in st.vertex.fibers[p]:
                if st.left.apply(p, b) != sl.left.apply(p, a):
                    continue
                for c in sr.vertex.fibers[p]:
                    if sr.left.apply(p, c) == sl.right.apply(p, a) and sr.right.apply(
                        p, c
                    ) == st.right.apply(p, b):
                        out.append((a, b, c))
        fibers[p] = sorted_labels(out)
    rest = {
        (p, q): {
            (a, b, c): (
                sl.vertex.restrict(p, q, a),
                st.vertex.restrict(p, q, b),
                sr.vertex.restrict(p, q, c),
            )
            for (a, b, c) in fibers[q]
        }
        for (p, q) in base.strict_pairs()
    }
    return Presheaf(base, fibers, rest)


def _composable_boundaries(sset: TruncSSet):
    """Triples (l, t, r) of 1-simplices forming a triangle boundary."""
    out = []
    for l in sset.s1:
        i, j = sset.endpoints(l)
        for t in sset.s1:
            if sset.d(1, 1, t) != i:
                continue
            k = sset.d(1, 0, t)
            for r in sset.s1:
                if sset.d(1, 1, r) == j and sset.d(1, 0, r) == k:
                    out.append((l, t, r))
    return out


def cosk_data(f: SimplicialFamily) -> CoskData:
    """Compute the coskeleton data of a simplicial family.

    Uses only the level-0 and level-1 data, so it is meaningful even when
    the family has no 2-simplices.
    """
    from .family import span_of_1simplex

    base = f.h0.base
    comps = {i: f.component(0, i) for i in f.sset.s0}
    supp = {i: set(comps[i].support()) for i in f.sset.s0}
    pairs = tuple(
        (i, j) for i in f.sset.s0 for j in f.sset.s0 if supp[i] & supp[j]
    )
    pair_limit, pair_proj, can1 = {}, {}, {}
    for i, j in pairs:
        prod, p1, p0 = product(comps[i], comps[j])
        pair_limit[(i, j)] = prod
        pair_proj[(i, j)] = (p1, p0)
    for l in f.sset.s1:
        ij = f.sset.endpoints(l)
        can1[l] = pairing(
            [f.component_face(1, 1, l), f.component_face(1, 0, l)], pair_limit[ij]
        )
    spans = {l: span_of_1simplex(f, l) for l in f.sset.s1}
    t2, triple_limit = [], {}
    for l, t, r in _composable_boundaries(f.sset):
        lim = _triangle_limit(base, spans[l], spans[t], spans[r])
        if not lim.is_initial():
            t2.append((l, t, r))
            triple_limit[(l, t, r)] = lim
    can2 = {}
    for w in f.sset.s2:
        key = (f.sset.d(2, 2, w), f.sset.d(2, 1, w), f.sset.d(2, 0, w))
        lim = triple_limit[key]
        d2, d1, d0 = (f.component_face(2, i, w) for i in (2, 1, 0))
        dom = f.component(2, w)
        comp = {
            p: {
                e: (d2.apply(p, e), d1.apply(p, e), d0.apply(p, e))
                for e in dom.fibers[p]
            }
            for p in base.points
        }
        can2[w] = PresheafMap(dom, lim, comp)
    return CoskData(pairs, pair_limit, pair_proj, tuple(t2), triple_limit, can1, can2)


def hypercover_report(f: SimplicialFamily) -> dict:
    """Coverage tables: for each pair and boundary triple, the limit elements
    not hit by any canonical component map."""
    data = cosk_data(f)
    ls_by_pair = {}
    for l in f.sset.s1:
        ls_by_pair.setdefault(f.sset.endpoints(l), []).append(l)
    ws_by_key = {}
    for w in f.sset.s2:
        key = (f.sset.d(2, 2, w), f.sset.d(2, 1, w), f.sset.d(2, 0, w))
        ws_by_key.setdefault(key, []).append(w)
    level1 = {}
    for ij in data.nerve_pairs:
        lim = data.pair_limit[ij]
        missed = []
        for p in lim.base.points:
            hit = set()
            for l in ls_by_pair.get(ij, ()):
                hit.update(data.can1[l].comp[p].values())
            missed.extend((p, e) for e in lim.fibers[p] if e not in hit)
        level1[ij] = missed
    level2 = {}
    for key in data.t2:
        lim = data.triple_limit[key]
        missed = []
        for p in lim.base.points:
            hit = set()
            for w in ws_by_key.get(key, ()):
                hit.update(data.can2[w].comp[p].values())
            missed.extend((p, e) for e in lim.fibers[p] if e not in hit)
        level2[key] = missed
    return {"level1": level1, "level2": level2}


def is_hypercover(f: SimplicialFamily, cover: Family) -> bool:
    """Whether the family refines the cover as a hypercover: level 0 agrees
    with the cover and the canonical maps to the coskeleton data are jointly
    epimorphic at levels one and two."""
    if tuple(f.sset.s0) != tuple(cover.index) or f.h0 != cover.total:
        raise ValueError("level-0 mismatch with the cover")
    if f.zeta[0].comp != cover.struct_map.comp:
        raise ValueError("level-0 mismatch with the cover")
    if not cover_is_epi(cover):
        raise ValueError("the total of the cover does not cover the terminal object")
    report = hypercover_report(f)
    return all(not v for v in report["level1"].values()) and all(
        not v for v in report["level2"].values()
    )


@dataclass
class SpanClass:
    """A finite list of non-initial vertex candidates (representatives of an
    isomorphism-closed class)."""

    members: tuple

    def __post_init__(self):
        seen, out = set(), []
        for m in self.members:
            if m.is_initial():
                raise EmptyComponentError("span class contains an initial presheaf")
            k = m.key()
            if k not in seen:
                seen.add(k)
                out.append(m)
        self.members = tuple(out)


@dataclass
class ClassSpan:
    """A 1-span over a pair of component indices."""

    i: object
    j: object
    vertex: Presheaf
    left: PresheafMap
    right: PresheafMap

    def data_key(self):
        return (self.i, self.j, self.vertex.key(), self.left.key(), self.right.key())

    def dual(self) -> "ClassSpan":
        return ClassSpan(self.j, self.i, self.vertex, self.right, self.left)


@dataclass
class SpanClassSp:
    """A finite list of 1-spans, meant to be closed under duals and the two
    degenerate spans of each member and to contain every identity span."""

    members: tuple

    def __post_init__(self):
        seen, out = set(), []
        for m in self.members:
            if m.vertex.is_initial():
                raise EmptyComponentError("span class contains a span with initial vertex")
            k = m.data_key()
            if k not in seen:
                seen.add(k)
                out.append(m)
        self.members = tuple(out)

    def vertices(self):
        seen, out = set(), []
        for m in self.members:
            k = m.vertex.key()
            if k not in seen:
                seen.add(k)
                out.append(m.vertex)
        return tuple(out)


def _check_closure(spans, comps):
    keys = {s.data_key() for s in spans}
    missing = []
    for i, u in comps.items():
        ident = ClassSpan(i, i, u, PresheafMap.identity(u), PresheafMap.identity(u))
        if ident.data_key() not in keys:
            missing.append(f"identity span at {i!r} missing")
    for s in spans:
        if s.dual().data_key() not in keys:
            missing.append(f"dual span of one over ({s.i!r}, {s.j!r}) missing")
        for degen in (
            ClassSpan(s.i, s.i, s.vertex, s.left, s.left),
            ClassSpan(s.j, s.j, s.vertex, s.right, s.right),
        ):
            if degen.data_key() not in keys:
                missing.append(f"degenerate span over ({degen.i!r}, {degen.j!r}) missing")
    if missing:
        raise ClosureError("; ".join(sorted(set(missing))))


def _build_refinement(cover: Family, spans, vertices) -> SelfDualFamily:
    """Assemble the self-dual simplicial family determined by a span class.

    1-simplices are the given spans, 2-simplices all commuting two-storey
    spans with apex in ``vertices`` over composable boundary spans.  Labels
    encode the class index of the vertex and the ordinals of the legs in
    the deterministic hom enumeration, so the output is reproducible.
    """
    comps = family_components(cover)
    base = cover.total.base
    vkeys = {v.key(): ci for ci, v in enumerate(vertices)}

    homs = {}

    def hom_list(ci, target_key, target):
        if (ci, target_key) not in homs:
            lst = hom_enumerate(vertices[ci], target)
            homs[(ci, target_key)] = (lst, {m.key(): o for o, m in enumerate(lst)})
        return homs[(ci, target_key)]

    span_label = {}
    record = {}
    for s in spans:
        ci = vkeys[s.vertex.key()]
        _, uord = hom_list(ci, ("comp", s.i), comps[s.i])
        _, vord = hom_list(ci, ("comp", s.j), comps[s.j])
        lab = ("sp", s.i, s.j, ci, uord[s.left.key()], vord[s.right.key()])
        span_label[s.data_key()] = lab
        record[lab] = (s, ci)
    s1 = tuple(record)

    ident_lab = {}
    for i, u in comps.items():
        ident = ClassSpan(i, i, u, PresheafMap.identity(u), PresheafMap.identity(u))
        if ident.data_key() not in span_label:
            raise ClosureError(f"identity span at {i!r} missing from the class")
        ident_lab[i] = span_label[ident.data_key()]

    by_pair = {}
    for lab, (s, ci) in record.items():
        by_pair.setdefault((s.i, s.j), []).append(lab)

    # 2-simplices: hash-join the commuting leg triples per boundary triangle.
    s2_faces = {}
    cache = {}

    def maps_with_keys(ci_w, s: ClassSpan, lab):
        if (ci_w, lab) not in cache:
            lst, _ = hom_list(ci_w, ("vtx", s.vertex.key()), s.vertex)
            cache[(ci_w, lab)] = [
                (o, m, s.left.after(m).key(), s.right.after(m).key())
                for o, m in enumerate(lst)
            ]
        return cache[(ci_w, lab)]

    index = sorted(comps, key=label_key)
    for i, j in itertools.product(index, repeat=2):
        for k in index:
            for llab in by_pair.get((i, j), ()):
                sl, _ = record[llab]
                for tlab in by_pair.get((i, k), ()):
                    st, _ = record[tlab]
                    for rlab in by_pair.get((j, k), ()):
                        sr, _ = record[rlab]
                        for ci_w in range(len(vertices)):
                            xs = maps_with_keys(ci_w, sl, llab)
                            ys = maps_with_keys(ci_w, st, tlab)
                            zs = maps_with_keys(ci_w, sr, rlab)
                            y_by_left = {}
                            for yo, my, kyl, kyr in ys:
                                y_by_left.setdefault(kyl, []).append((yo, my, kyr))
                            z_by_legs = {}
                            for zo, mz, kzl, kzr in zs:
                                z_by_legs.setdefault((kzl, kzr), []).append((zo, mz))
                            for xo, mx, kxl, kxr in xs:
                                for yo, my, kyr in y_by_left.get(kxl, ()):
                                    for zo, mz in z_by_legs.get((kxr, kyr), ()):
                                        wlab = ("sp2", llab, tlab, rlab, ci_w, xo, yo, zo)
                                        s2_faces[wlab] = (
                                            (llab, tlab, rlab),
                                            ci_w,
                                            (mx, my, mz),
                                        )
    s2 = tuple(s2_faces)

    face = {
        (1, 0): {lab: lab[2] for lab in s1},
        (1, 1): {lab: lab[1] for lab in s1},
        (2, 0): {w: s2_faces[w][0][2] for w in s2},
        (2, 1): {w: s2_faces[w][0][1] for w in s2},
        (2, 2): {w: s2_faces[w][0][0] for w in s2},
    }

    def degen1(lab, which):
        # hom enumeration is deterministic, so the leg ordinals recorded in
        # the span label are valid ordinals for the 2-simplex legs too.
        s, ci = record[lab]
        _, idords = hom_list(ci, ("vtx", s.vertex.key()), s.vertex)
        idord = idords[PresheafMap.identity(s.vertex).key()]
        if which == 0:
            return ("sp2", ident_lab[s.i], lab, lab, ci, lab[4], idord, idord)
        return ("sp2", lab, lab, ident_lab[s.j], ci, idord, idord, lab[5])

    degen = {
        (0, 0): {i: ident_lab[i] for i in index},
        (1, 0): {lab: degen1(lab, 0) for lab in s1},
        (1, 1): {lab: degen1(lab, 1) for lab in s1},
    }
    # Degenerate 2-simplices built above must have been enumerated.
    for m in degen[(1, 0)].values():
        assert m in s2_faces, m
    for m in degen[(1, 1)].values():
        assert m in s2_faces, m

    sset = TruncSSet(tuple(index), s1, s2, face, degen)

    def op1(lab):
        return ("sp", lab[2], lab[1], lab[3], lab[5], lab[4])

    def op2(w):
        _, llab, tlab, rlab, ci, xo, yo, zo = w
        return ("sp2", op1(rlab), op1(tlab), op1(llab), ci, zo, yo, xo)

    tau_s = StrictDuality(
        tau1={lab: op1(lab) for lab in s1}, tau2={w: op2(w) for w in s2}
    )
    for lab in s1:
        assert tau_s.tau1[lab] in record, lab
    for w in s2:
        assert tau_s.tau2[w] in s2_faces, w

    h0 = cover.total
    verts1 = [record[lab][0].vertex for lab in sset.s1]
    h1 = coproduct(verts1, list(sset.s1))
    apexes = [vertices[s2_faces[w][1]] for w in sset.s2]
    if apexes:
        h2 = coproduct(apexes, list(sset.s2))
    else:
        h2 = constant_presheaf((), base)

    def tagmap(dom, cod, f):
        return PresheafMap(
            dom, cod, {p: {e: f(p, e) for e in dom.fibers[p]} for p in base.points}
        )

    hface = {
        (1, 0): tagmap(h1, h0, lambda p, e: record[e[0]][0].right.apply(p, e[1])),
        (1, 1): tagmap(h1, h0, lambda p, e: record[e[0]][0].left.apply(p, e[1])),
        (2, 0): tagmap(h2, h1, lambda p, e: (s2_faces[e[0]][0][2], s2_faces[e[0]][2][2].apply(p, e[1]))),
        (2, 1): tagmap(h2, h1, lambda p, e: (s2_faces[e[0]][0][1], s2_faces[e[0]][2][1].apply(p, e[1]))),
        (2, 2): tagmap(h2, h1, lambda p, e: (s2_faces[e[0]][0][0], s2_faces[e[0]][2][0].apply(p, e[1]))),
    }
    hdegen = {
        (0, 0): tagmap(h0, h1, lambda p, e: (ident_lab[cover.zeta(p, e)], e)),
        (1, 0): tagmap(h1, h2, lambda p, e: (degen[(1, 0)][e[0]], e[1])),
        (1, 1): tagmap(h1, h2, lambda p, e: (degen[(1, 1)][e[0]], e[1])),
    }
    zeta = (
        cover.struct_map,
        tagmap(h1, constant_presheaf(sset.s1, base), lambda p, e: e[0]),
        tagmap(h2, constant_presheaf(sset.s2, base), lambda p, e: e[0]),
    )
    fam = SimplicialFamily(h0, h1, h2, hface, hdegen, sset, zeta)
    tau1 = tagmap(h1, h1, lambda p, e: (tau_s.tau1[e[0]], e[1]))
    tau2 = tagmap(h2, h2, lambda p, e: (tau_s.tau2[e[0]], e[1]))
    return SelfDualFamily(fam, tau_s, tau1, tau2)


def _all_spans(cover: Family, cls: SpanClass):
    comps = family_components(cover)
    index = sorted(comps, key=label_key)
    spans = []
    for i, j in itertools.product(index, repeat=2):
        for v in cls.members:
            for u in hom_enumerate(v, comps[i]):
                for w in hom_enumerate(v, comps[j]):
                    spans.append(ClassSpan(i, j, v, u, w))
    return spans


def zero_span_refinement(cover: Family, cls: SpanClass) -> SelfDualFamily:
    """Refinement whose 1-simplices are all spans with vertex in the class.

    Every component of the cover must itself be a class member (the
    degenerate 1-simplices are its identity spans).
    """
    comps = family_components(cover)
    vkeys = {v.key() for v in cls.members}
    for i, u in comps.items():
        if u.key() not in vkeys:
            raise ValueError(f"component {i!r} is not a member of the span class")
    return _build_refinement(cover, _all_spans(cover, cls), cls.members)


def one_span_refinement(cover: Family, csp: SpanClassSp) -> SelfDualFamily:
    """Refinement whose 1-simplices are exactly the given spans.

    The class must contain every identity span and be closed under duals
    and under the two degenerate spans of each member.
    """
    comps = family_components(cover)
    _check_closure(csp.members, comps)
    return _build_refinement(cover, list(csp.members), csp.vertices())


def representable_spans(cover: Family):
    """All spans with representable vertex over pairs of components; by the
    Yoneda correspondence these are the elements of the pairwise products."""
    comps = family_components(cover)
    base = cover.total.base
    index = sorted(comps, key=label_key)
    spans = []
    for p in base.points:
        rep = representable(base, p)
        for i, j in itertools.product(index, repeat=2):
            for u in hom_enumerate(rep, comps[i]):
                for v in hom_enumerate(rep, comps[j]):
                    spans.append(ClassSpan(i, j, rep, u, v))
    return spans


def connected_refinement(cover: Family, *, require_connected: bool = False) -> SelfDualFamily:
    """The refinement by connected generators: identity spans plus all spans
    with representable vertex.

    Representables over a poset are always connected, so the only possibly
    disconnected components of the result are the covers' own (which enter
    through the mandatory identity spans).  Pass ``require_connected`` to
    insist that the cover components are connected too.
    """
    comps = family_components(cover)
    if require_connected:
        for i, u in comps.items():
            if not is_connected(u):
                raise ValueError(f"component {i!r} is disconnected")
    spans = [
        ClassSpan(i, i, u, PresheafMap.identity(u), PresheafMap.identity(u))
        for i, u in sorted(comps.items(), key=lambda kv: label_key(kv[0]))
    ]
    spans += representable_spans(cover)
    return one_span_refinement(cover, SpanClassSp(tuple(spans)))


def check_epi_criteria(cover: Family, cls) -> bool:
    """The joint-surjectivity criteria guaranteeing the span refinement is a
    hypercover, computed directly from the class (not from the refinement):
    all maps from class vertices must jointly cover each pairwise product,
    and each boundary-triangle limit."""
    comps = family_components(cover)
    base = cover.total.base
    index = sorted(comps, key=label_key)
    supp = {i: set(comps[i].support()) for i in index}
    if isinstance(cls, SpanClass):
        spans = _all_spans(cover, cls)
        verts = cls.members
        level1_all_homs = True
    else:
        spans = list(cls.members)
        verts = cls.vertices()
        level1_all_homs = False
    by_pair = {}
    for s in spans:
        by_pair.setdefault((s.i, s.j), []).append(s)
    for i, j in itertools.product(index, repeat=2):
        if not (supp[i] & supp[j]):
            continue
        prod, _, _ = product(comps[i], comps[j])
        maps = []
        if level1_all_homs:
            for v in verts:
                maps.extend(hom_enumerate(v, prod))
        else:
            for s in by_pair.get((i, j), ()):
                maps.append(pairing([s.left, s.right], prod))
        for p in base.points:
            hit = set()
            for m in maps:
                hit.update(m.comp[p].values())
            if hit != set(prod.fibers[p]):
                return False
    for sl, st, sr in _composable_span_triples(by_pair, index):
        lim = _triangle_limit(
            base,
            Span1(sl.vertex, sl.left, sl.right),
            Span1(st.vertex, st.left, st.right),
            Span1(sr.vertex, sr.left, sr.right),
        )
        if lim.is_initial():
            continue
        for p in base.points:
            hit = set()
            for v in verts:
                for m in hom_enumerate(v, lim):
                    hit.update(m.comp[p].values())
            if hit != set(lim.fibers[p]):
                return False
    return True


def _composable_span_triples(by_pair, index):
    for i, j in itertools.product(index, repeat=2):
        for k in index:
            for sl in by_pair.get((i, j), ()):
                for st in by_pair.get((i, k), ()):
                    for sr in by_pair.get((j, k), ()):
                        yield sl, st, sr
