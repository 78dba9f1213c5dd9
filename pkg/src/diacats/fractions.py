"""Left calculus of fractions on a finite category, the localization by
cospans, saturation, and the 2-out-of-6 / retract-closure checks.

Hom-classes of the localization are cospans (f : X -> Z, w : Y -> Z with
w in W) modulo the zig-zag closure of the one-step relation given by a
connecting morphism under both cospans.  All class computations are over
the full finite cospan set at once; representatives are lexicographically
least.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import fincat as fc
from .errors import FractionsFailed


@dataclass(frozen=True)
class CospanRep:
    """A morphism X -> Y of the localization: X -f-> Z <-w- Y, w in W."""

    f: str
    w: str


def check_left_fractions(c: fc.FinCat, w):
    """Square completion and coequalization, by exhaustive search.

    Returns (ok, witnesses, failure): `witnesses` maps each instance to
    its first completion; `failure` names the first failing instance.
    """
    w = set(w)
    witnesses = {}
    for wm in sorted(w):
        y, z = c.dom(wm), c.cod(wm)
        for g in c.morphisms:
            if g.dom != y:
                continue
            found = None
            for x in c.objects:
                for cap_f in c.hom(g.cod, x):
                    if cap_f not in w:
                        continue
                    for cap_g in c.hom(z, x):
                        if c.comp(cap_f, g.id) == c.comp(cap_g, wm):
                            found = (cap_f, cap_g)
                            break
                    if found:
                        break
                if found:
                    break
            if found is None:
                return False, witnesses, ("square", wm, g.id)
            witnesses[("square", wm, g.id)] = found
    for h in sorted(w):
        y, z = c.dom(h), c.cod(h)
        for f in c.morphisms:
            if f.dom != z:
                continue
            for g in c.hom(z, f.cod):
                if g == f.id:
                    continue
                if c.comp(f.id, h) != c.comp(g, h):
                    continue
                found = None
                for rho in c.morphisms:
                    if rho.dom != f.cod or rho.id not in w:
                        continue
                    if c.comp(rho.id, f.id) == c.comp(rho.id, g):
                        found = rho.id
                        break
                if found is None:
                    return False, witnesses, ("coequalize", h, f.id, g)
                witnesses[("coequalize", h, f.id, g)] = found
    return True, witnesses, None


def _closed_class(c: fc.FinCat, w):
    w = set(w)
    for x in c.objects:
        if c.id_of(x) not in w:
            return False, ("identity", x)
    for a in w:
        for b in w:
            if c.cod(a) == c.dom(b) and c.comp(b, a) not in w:
                return False, ("composition", a, b)
    return True, None


@dataclass
class LocalizedCat:
    base: fc.FinCat
    w: set
    homs: dict                 # (x, y) -> list of representative CospanReps
    class_of: dict             # (x, y, CospanRep) -> representative
    comp_table: dict           # (rep2, rep1) -> rep of the composite
    loc: dict                  # base morphism id -> its class representative

    def compose(self, g: CospanRep, f: CospanRep) -> CospanRep:
        return self.comp_table[(g, f)]

    def hom(self, x, y):
        return list(self.homs.get((x, y), []))

    def is_iso_class(self, x, y, rep: CospanRep):
        idx = self.loc[self.base.id_of(x)]
        idy = self.loc[self.base.id_of(y)]
        for inv in self.hom(y, x):
            if self.compose(inv, rep) == idx and self.compose(rep, inv) == idy:
                return inv
        return None


def localize_fractions(c: fc.FinCat, w) -> LocalizedCat:
    """The localization C[W^{-1}] presented by cospans.

    Fails (FractionsFailed) unless W contains identities, is closed under
    composition, and admits a left calculus of fractions.  Functoriality
    and W-inversion of the canonical functor are verified exhaustively.
    """
    w = set(w)
    ok, why = _closed_class(c, w)
    if not ok:
        raise FractionsFailed("W is not a composition-closed wide class: %r" % (why,))
    ok, _, failure = check_left_fractions(c, w)
    if not ok:
        raise FractionsFailed("no left calculus of fractions: %r" % (failure,))

    cospans = {}
    for x in c.objects:
        for y in c.objects:
            items = []
            for f in c.morphisms:
                if f.dom != x:
                    continue
                for wm in c.hom(y, f.cod):
                    if wm in w:
                        items.append(CospanRep(f.id, wm))
            cospans[(x, y)] = sorted(items, key=lambda r: (r.f, r.w))

    class_of = {}
    homs = {}
    for (x, y), items in cospans.items():
        parent = {r: r for r in items}

        def find(r):
            while parent[r] != r:
                parent[r] = parent[parent[r]]
                r = parent[r]
            return r

        for r1, r2 in itertools.combinations(items, 2):
            if find(r1) == find(r2):
                continue
            z1, z2 = c.cod(r1.f), c.cod(r2.f)
            linked = any(c.comp(u, r1.f) == r2.f and c.comp(u, r1.w) == r2.w
                         for u in c.hom(z1, z2))
            linked = linked or any(
                c.comp(u, r2.f) == r1.f and c.comp(u, r2.w) == r1.w
                for u in c.hom(z2, z1))
            if linked:
                parent[find(r1)] = find(r2)
        groups = {}
        for r in items:
            groups.setdefault(find(r), []).append(r)
        reps = {}
        for members in groups.values():
            rep = min(members, key=lambda r: (r.f, r.w))
            for m in members:
                reps[m] = rep
        for r, rep in reps.items():
            class_of[(x, y, r)] = rep
        homs[(x, y)] = sorted(set(reps.values()), key=lambda r: (r.f, r.w))

    completion_memo = {}

    def completion(w1, f2):
        """First square completion (F in W, G) for w1 in W against f2."""
        key = (w1, f2)
        if key in completion_memo:
            return completion_memo[key]
        z1, z2 = c.cod(w1), c.cod(f2)
        for q in c.objects:
            for cap_f in c.hom(z2, q):
                if cap_f not in w:
                    continue
                for cap_g in c.hom(z1, q):
                    if c.comp(cap_f, f2) == c.comp(cap_g, w1):
                        completion_memo[key] = (cap_f, cap_g)
                        return cap_f, cap_g
        raise FractionsFailed("no completion for (%r, %r)" % (w1, f2))

    def compose_raw(r2: CospanRep, r1: CospanRep) -> CospanRep:
        cap_f, cap_g = completion(r1.w, r2.f)
        return CospanRep(c.comp(cap_g, r1.f), c.comp(cap_f, r2.w))

    comp_table = {}
    for (x, y), items1 in homs.items():
        for (y2, t), items2 in homs.items():
            if y2 != y:
                continue
            for r1 in items1:
                for r2 in items2:
                    raw = compose_raw(r2, r1)
                    comp_table[(r2, r1)] = class_of[(x, t, raw)]

    loc = {}
    for m in c.morphisms:
        loc[m.id] = class_of[(m.dom, m.cod, CospanRep(m.id, c.id_of(m.cod)))]
    out = LocalizedCat(c, w, homs, class_of, comp_table, loc)

    # exhaustive checks: composition well-defined on classes, functoriality,
    # and W-inversion
    for (x, y), items in cospans.items():
        for (y2, t), items2 in cospans.items():
            if y2 != y:
                continue
            for r1 in items:
                for r2 in items2:
                    raw = compose_raw(class_of[(y, t, r2)], class_of[(x, y, r1)])
                    raw2 = compose_raw(r2, r1)
                    if class_of[(x, t, raw)] != class_of[(x, t, raw2)]:
                        raise FractionsFailed(
                            "composition not class-invariant at (%r, %r)" % (r1, r2))
    for (g, f), h in c.compose_table.items():
        lhs = out.compose(loc[g], loc[f])
        if lhs != loc[h]:
            raise FractionsFailed("localization functor breaks composition at (%r,%r)"
                                  % (g, f))
    for wm in w:
        if out.is_iso_class(c.dom(wm), c.cod(wm), loc[wm]) is None:
            raise FractionsFailed("localization does not invert %r" % wm)
    return out


def saturation(c: fc.FinCat, w):
    """Morphisms inverted by the localization functor."""
    lc_ = localize_fractions(c, w)
    out = set()
    for m in c.morphisms:
        if lc_.is_iso_class(m.dom, m.cod, lc_.loc[m.id]) is not None:
            out.add(m.id)
    return out


def check_two_out_of_six(w, c: fc.FinCat):
    """Violations of 2-out-of-6 over all composable triples."""
    w = set(w)
    violations = []
    for f in c.morphisms:
        for g in c.morphisms:
            if g.dom != f.cod:
                continue
            gf = c.comp(g.id, f.id)
            for h in c.morphisms:
                if h.dom != g.cod:
                    continue
                hg = c.comp(h.id, g.id)
                if gf in w and hg in w:
                    hgf = c.comp(h.id, gf)
                    for x in (f.id, g.id, h.id, hgf):
                        if x not in w:
                            violations.append((f.id, g.id, h.id, x))
    return violations


def check_retract_closed(w, c: fc.FinCat):
    """Violations of retract closure: f a retract of g in the arrow
    category with g in W but f not."""
    w = set(w)
    violations = []
    for f in c.morphisms:
        if f.id in w:
            continue
        for g in c.morphisms:
            if g.id not in w:
                continue
            for i in c.hom(f.dom, g.dom):
                for r in c.hom(g.dom, f.dom):
                    if c.comp(r, i) != c.id_of(f.dom):
                        continue
                    for j in c.hom(f.cod, g.cod):
                        for s in c.hom(g.cod, f.cod):
                            if c.comp(s, j) != c.id_of(f.cod):
                                continue
                            if c.comp(g.id, i) == c.comp(j, f.id) and \
                                    c.comp(f.id, r) == c.comp(s, g.id):
                                violations.append((f.id, g.id, i, r, j, s))
    return violations


def localized_as_fincat(lc_: LocalizedCat) -> fc.FinCat:
    """Materialize the localization as a finite category (classes as
    morphisms)."""
    c = lc_.base
    mors, identity, mid = [], {}, {}
    for (x, y), reps in sorted(lc_.homs.items()):
        for r in reps:
            i = "[%s|%s]:%s->%s" % (r.f, r.w, x, y)
            mid[(x, y, r)] = i
            mors.append(fc.Mor(i, x, y))
    for x in c.objects:
        identity[x] = mid[(x, x, lc_.loc[c.id_of(x)])]
    comp = {}
    for (x, y), reps1 in lc_.homs.items():
        for (y2, t), reps2 in lc_.homs.items():
            if y2 != y:
                continue
            for r1 in reps1:
                for r2 in reps2:
                    comp[(mid[(y, t, r2)], mid[(x, y, r1)])] = \
                        mid[(x, t, lc_.comp_table[(r2, r1)])]
    return fc.FinCat.build("%s[W^-1]" % c.name, c.objects, mors, identity, comp)
