"""Fundamental groupoid presentations, words, actions, and bounded word
equality.

The fundamental presentation of a truncated simplicial set has the
vertices as objects, the 1-simplices as generator arrows, one relation
per 2-simplex identifying the long edge with the composite of the short
edges, the degenerate 1-simplices designated as identities, and formal
inverses throughout.  The refined presentation of a self-dual family
additionally identifies parallel 1-simplices connected by a span
morphism; under the filling condition this forces every generator to be
invertible by a short rewrite.

Word equality in a finitely presented groupoid is undecidable in
general, so :func:`word_equal` is a three-valued bounded procedure:
a breadth-first rewriting search certifies equality, a search for a
separating action of bounded size certifies inequality, and otherwise
the verdict is unknown.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

from .errors import ConditionGFailure
from .fintopos import label_key
from .simplicial import TruncSSet


@dataclass(frozen=True)
class Word:
    """A composable sequence of signed generators with a base object.

    Letters apply left to right; the base object is the source of the
    first letter (and the only data of an empty word).
    """

    start: object
    letters: tuple


class Verdict(enum.Enum):
    EQUAL = "equal"
    DISTINCT = "distinct"
    UNKNOWN = "unknown"


@dataclass
class GroupoidPresentation:
    """Objects, generator arrows, relation word-pairs, identity generators."""

    objects: tuple
    generators: tuple
    src: dict
    tgt: dict
    relations: tuple
    identities: dict

    def __post_init__(self):
        for g in self.generators:
            if g not in self.src or g not in self.tgt:
                raise ValueError(f"generator {g!r} lacks endpoints")
        for i, g in self.identities.items():
            if self.src[g] != i or self.tgt[g] != i:
                raise ValueError(f"identity generator at {i!r} is not an endo-arrow")
        for a, b in self.relations:
            self.check_word(a)
            self.check_word(b)
            if self.word_ends(a) != self.word_ends(b):
                raise ValueError("relation words are not parallel")

    def letter_ends(self, letter):
        g, sign = letter
        return (self.src[g], self.tgt[g]) if sign > 0 else (self.tgt[g], self.src[g])

    def check_word(self, w: Word):
        at = w.start
        if at not in set(self.objects):
            raise ValueError(f"word based at unknown object {at!r}")
        for letter in w.letters:
            a, b = self.letter_ends(letter)
            if a != at:
                raise ValueError("word letters do not compose")
            at = b

    def word_ends(self, w: Word):
        at = w.start
        for letter in w.letters:
            at = self.letter_ends(letter)[1]
        return (w.start, at)

    def word(self, *gens, start=None) -> Word:
        letters = tuple((g, 1) for g in gens)
        if start is None:
            if not gens:
                raise ValueError("empty word needs an explicit base object")
            start = self.src[gens[0]]
        w = Word(start, letters)
        self.check_word(w)
        return w

    def inverse_word(self, w: Word) -> Word:
        return Word(self.word_ends(w)[1], tuple((g, -s) for g, s in reversed(w.letters)))

    def concat(self, a: Word, b: Word) -> Word:
        if self.word_ends(a)[1] != b.start:
            raise ValueError("concatenation endpoints do not match")
        return Word(a.start, a.letters + b.letters)


def fundamental_presentation(s: TruncSSet) -> GroupoidPresentation:
    """Presentation of the fundamental groupoid of a truncated simplicial
    set: generators are 1-simplices, each triangle identifies its long edge
    with the composite of the short ones, degenerate edges are identities."""
    src = {l: s.d(1, 1, l) for l in s.s1}
    tgt = {l: s.d(1, 0, l) for l in s.s1}
    identities = {i: s.deg(0, 0, i) for i in s.s0}
    relations = []
    for w in s.s2:
        l, t, r = s.d(2, 2, w), s.d(2, 1, w), s.d(2, 0, w)
        relations.append((Word(src[t], ((t, 1),)), Word(src[l], ((l, 1), (r, 1)))))
    for i in s.s0:
        relations.append((Word(i, ((identities[i], 1),)), Word(i, ())))
    return GroupoidPresentation(
        objects=s.s0,
        generators=s.s1,
        src=src,
        tgt=tgt,
        relations=tuple(relations),
        identities=identities,
    )


def g_fundamental_presentation(sf) -> GroupoidPresentation:
    """Refined presentation of a self-dual family satisfying the filling
    condition: the fundamental presentation of the index plus one relation
    for every ordered pair of parallel 1-simplices whose spans are linked
    by a span morphism."""
    from .family import condition_g, span_morphism_pairs

    if not condition_g(sf):
        raise ConditionGFailure("the family does not satisfy the filling condition")
    base = fundamental_presentation(sf.base.sset)
    extra = []
    seen = set()
    for l, t in span_morphism_pairs(sf.base):
        key = tuple(sorted((l, t), key=label_key))
        if key in seen:
            continue
        seen.add(key)
        extra.append((Word(base.src[l], ((l, 1),)), Word(base.src[t], ((t, 1),))))
    return GroupoidPresentation(
        objects=base.objects,
        generators=base.generators,
        src=base.src,
        tgt=base.tgt,
        relations=base.relations + tuple(extra),
        identities=base.identities,
    )


@dataclass
class GroupoidAction:
    """Finite sets per object and a bijection per generator arrow."""

    carrier: dict
    gen_action: dict

    def carrier_at(self, i):
        return self.carrier[i]


def validate_action(p: GroupoidPresentation, a: GroupoidAction):
    """Empty iff the data is an action: total bijective generator maps that
    satisfy every relation, with identity generators acting trivially."""
    out = []
    for i in p.objects:
        if i not in a.carrier:
            out.append(f"carrier missing at {i!r}")
    if out:
        return out
    for g in p.generators:
        m = a.gen_action.get(g)
        if m is None:
            out.append(f"no action for generator {g!r}")
            continue
        dom, cod = set(a.carrier[p.src[g]]), set(a.carrier[p.tgt[g]])
        if set(m) != dom or set(m.values()) != cod or len(set(m.values())) != len(m):
            out.append(f"action of {g!r} is not a bijection onto the target carrier")
    if out:
        return out
    for i, g in p.identities.items():
        if any(a.gen_action[g][x] != x for x in a.carrier[i]):
            out.append(f"identity generator at {i!r} does not act as the identity")
    for n, (wa, wb) in enumerate(p.relations):
        for x in a.carrier[wa.start]:
            if act(a, wa, x) != act(a, wb, x):
                out.append(f"relation {n} fails on {x!r}")
                break
    return out


def act(a: GroupoidAction, w: Word, x):
    """Apply a word to an element of the carrier at its base."""
    if x not in set(a.carrier[w.start]):
        raise ValueError(f"{x!r} is not in the carrier at {w.start!r}")
    for g, sign in w.letters:
        m = a.gen_action[g]
        x = m[x] if sign > 0 else {v: k for k, v in m.items()}[x]
    return x


def solve_bijection_slots(domains, comp_constraints, eq_pairs=()):
    """All assignments of one value per slot satisfying composition
    constraints ``(a, b, c)`` (choice[b] after choice[a] equals choice[c])
    and equality pairs; depth-first, checking each constraint as soon as
    its last slot is assigned."""
    by_last = {}
    for a, b, c in comp_constraints:
        by_last.setdefault(max(a, b, c), []).append((a, b, c))
    eq_by_last = {}
    for a, b in eq_pairs:
        eq_by_last.setdefault(max(a, b), []).append((a, b))
    out = []
    assigned = [None] * len(domains)

    def extend(k):
        if k == len(domains):
            out.append(tuple(assigned))
            return
        for choice in domains[k]:
            assigned[k] = choice
            if all(assigned[a] == assigned[b] for a, b in eq_by_last.get(k, ())) and all(
                {x: assigned[b][y] for x, y in assigned[a].items()} == assigned[c]
                for a, b, c in by_last.get(k, ())
            ):
                extend(k + 1)
        assigned[k] = None

    extend(0)
    return out


def enumerate_actions(p: GroupoidPresentation, size_bound: int, carriers=None):
    """All actions with carriers of size at most the bound (canonical
    carriers 0..n-1), or on the given fixed carriers.

    Identity generators are pinned to the identity; relations whose sides
    are short positive words become equality or composition constraints for
    a backtracking search, and any remaining relations are checked on the
    solutions.  Deduplication is by equality of raw data, not isomorphism.
    """
    objs = p.objects
    slot_of = {g: k for k, g in enumerate(p.generators)}
    pinned = {slot_of[g] for g in p.identities.values()}
    comp_constraints, eq_pairs, leftover = set(), set(), []
    for wa, wb in p.relations:
        small, big = sorted((wa, wb), key=lambda w: len(w.letters))
        ls, lb = small.letters, big.letters
        if all(sign > 0 for _, sign in ls + lb):
            if len(lb) == 0:
                continue
            if len(ls) == 0 and len(lb) == 1:
                pinned.add(slot_of[lb[0][0]])
                continue
            if len(ls) == 1 and len(lb) == 1:
                eq_pairs.add((slot_of[ls[0][0]], slot_of[lb[0][0]]))
                continue
            if len(ls) == 1 and len(lb) == 2:
                comp_constraints.add(
                    (slot_of[lb[0][0]], slot_of[lb[1][0]], slot_of[ls[0][0]])
                )
                continue
        leftover.append((wa, wb))

    if carriers is None:
        size_choices = itertools.product(range(size_bound + 1), repeat=len(objs))
        carrier_choices = [
            {i: tuple(range(n)) for i, n in zip(objs, sizes)} for sizes in size_choices
        ]
    else:
        carrier_choices = [dict(carriers)]

    out = []
    for carrier in carrier_choices:
        if any(len(carrier[p.src[g]]) != len(carrier[p.tgt[g]]) for g in p.generators):
            continue
        domains = []
        for k, g in enumerate(p.generators):
            dom, cod = carrier[p.src[g]], carrier[p.tgt[g]]
            if k in pinned:
                domains.append([{x: x for x in dom}])
            else:
                domains.append([dict(zip(dom, perm)) for perm in itertools.permutations(cod)])
        for combo in solve_bijection_slots(domains, sorted(comp_constraints), sorted(eq_pairs)):
            cand = GroupoidAction(
                carrier=dict(carrier), gen_action=dict(zip(p.generators, combo))
            )
            if leftover and any(
                any(act(cand, wa, x) != act(cand, wb, x) for x in carrier[wa.start])
                for wa, wb in leftover
            ):
                continue
            assert not validate_action(p, cand)
            out.append(cand)
    return out


def _rules(p: GroupoidPresentation):
    """Rewrite rules from the relations: both orientations of each pair and
    of its formal inverse.  Cached on the presentation."""
    cached = getattr(p, "_rules_cache", None)
    if cached is not None:
        return cached
    rules, seen = [], set()
    for wa, wb in p.relations:
        for lhs, rhs in ((wa, wb), (wb, wa)):
            for rule in ((lhs, rhs), (p.inverse_word(lhs), p.inverse_word(rhs))):
                if rule[0] != rule[1] and rule not in seen:
                    seen.add(rule)
                    rules.append(rule)
    p._rules_cache = rules
    return rules


def generator_congruence(p: GroupoidPresentation):
    """Union-find closure of the relations whose sides are single positive
    letters or empty: a sound, fast fragment of word equality.

    Returns (find, trivial) where ``find`` canonicalizes a generator and
    ``trivial`` holds the generators provably equal to an identity.
    """
    cached = getattr(p, "_congruence_cache", None)
    if cached is not None:
        return cached
    parent = {g: g for g in p.generators}

    def find(g):
        while parent[g] != g:
            parent[g] = parent[parent[g]]
            g = parent[g]
        return g

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb, key=label_key)] = min(ra, rb, key=label_key)

    trivial_seed = set(p.identities.values())
    for wa, wb in p.relations:
        sides = (wa.letters, wb.letters)
        if all(len(s) == 1 and s[0][1] > 0 for s in sides):
            union(wa.letters[0][0], wb.letters[0][0])
        elif {len(s) for s in (wa.letters, wb.letters)} == {0, 1}:
            letter = (wa.letters or wb.letters)[0]
            if letter[1] > 0:
                trivial_seed.add(letter[0])
    trivial = {g for g in p.generators if any(find(g) == find(t) for t in trivial_seed)}
    result = (find, trivial)
    p._congruence_cache = result
    return result


def _object_path(p: GroupoidPresentation, w: Word):
    path = [w.start]
    for letter in w.letters:
        path.append(p.letter_ends(letter)[1])
    return tuple(path)


def _neighbors(p: GroupoidPresentation, w: Word, rules):
    """All words one rewrite away: free reductions and rule applications
    (including insertions of relation sides at matching objects)."""
    out = []
    letters = w.letters
    for k in range(len(letters) - 1):
        (g1, s1), (g2, s2) = letters[k], letters[k + 1]
        if g1 == g2 and s1 == -s2:
            out.append(Word(w.start, letters[:k] + letters[k + 2 :]))
    path = _object_path(p, w)
    for lhs, rhs in rules:
        n = len(lhs.letters)
        if n == 0:
            for k in range(len(letters) + 1):
                if path[k] == lhs.start:
                    out.append(Word(w.start, letters[:k] + rhs.letters + letters[k:]))
        else:
            for k in range(len(letters) - n + 1):
                if letters[k : k + n] == lhs.letters:
                    out.append(Word(w.start, letters[:k] + rhs.letters + letters[k + n :]))
    return out


def word_equal(
    p: GroupoidPresentation,
    w1: Word,
    w2: Word,
    budget: int = 10,
    *,
    action_bound: int = 2,
    max_states: int = 50000,
    separate: bool = True,
) -> Verdict:
    """Three-valued bounded word equality.

    Runs a bidirectional breadth-first rewriting search of depth ``budget``
    (capped at ``max_states`` explored words, deterministically); on
    failure, searches for a separating action with carriers of size at most
    ``action_bound`` (skipped when ``separate`` is false, leaving UNKNOWN).
    """
    p.check_word(w1)
    p.check_word(w2)
    if p.word_ends(w1) != p.word_ends(w2):
        raise ValueError("word endpoints do not match")
    if w1 == w2:
        return Verdict.EQUAL
    rules = _rules(p)
    seen1, seen2 = {w1}, {w2}
    front1, front2 = [w1], [w2]
    for _ in range(budget):
        if len(seen1) + len(seen2) > max_states:
            break
        if len(front1) <= len(front2):
            front, seen, other = front1, seen1, seen2
            grow1 = True
        else:
            front, seen, other = front2, seen2, seen1
            grow1 = False
        new = []
        for w in front:
            for v in _neighbors(p, w, rules):
                if v in other:
                    return Verdict.EQUAL
                if v not in seen:
                    seen.add(v)
                    new.append(v)
        if grow1:
            front1 = new
        else:
            front2 = new
        if not front1 and not front2:
            break
    if separate:
        for action in enumerate_actions(p, action_bound):
            if any(
                act(action, w1, x) != act(action, w2, x)
                for x in action.carrier[w1.start]
            ):
                return Verdict.DISTINCT
    return Verdict.UNKNOWN
