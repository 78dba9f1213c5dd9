"""Diagrams in a site and their 2-category: objects (I, S), morphisms
(alpha, f), 2-morphisms, comma fiber products, the Grothendieck
construction, nerves, and Hom-diagrams.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import fincat as fc
from . import simplicial as sp
from .errors import (
    EndpointMismatch,
    InvalidFunctor,
    InvalidNatTransf,
    LimitAbsent,
    TargetMismatch,
)
from .site import Site, CoprodObj


class DiaObj:
    """A diagram (I, S): a finite shape with a labeling functor into the
    site category."""

    def __init__(self, shape: fc.FinCat, labels: fc.FinFunctor, name=None):
        self.shape = shape
        if labels.source is not shape:
            # accept a structurally identical shape instance
            labels = fc.FinFunctor(labels.name, shape, labels.target,
                                   labels.object_map, labels.morphism_map)
        self.labels = labels
        self.name = name or ("(%s)" % shape.name)

    @property
    def scat(self):
        return self.labels.target

    def validate(self):
        self.labels.validate()
        return self

    def key(self):
        return (tuple(self.shape.objects),
                tuple((m.id, m.dom, m.cod) for m in self.shape.morphisms),
                tuple(sorted(self.labels.object_map.items())),
                tuple(sorted(self.labels.morphism_map.items())))

    def __repr__(self):
        return "DiaObj(%s: %d objects over %s)" % (
            self.name, len(self.shape.objects), self.scat.name)


def point_dia(scat: fc.FinCat, s: str, name=None) -> DiaObj:
    pt = fc.terminal_category()
    return DiaObj(pt, fc.FinFunctor("lbl", pt, scat, {"*": s},
                                    {"id_*": scat.id_of(s)}),
                  name or ("pt(%s)" % s)).validate()


class DiaMor:
    """(alpha, f) : (I, S) -> (J, T) with f_i : S(i) -> T(alpha i), natural."""

    def __init__(self, src: DiaObj, tgt: DiaObj, shape_map: fc.FinFunctor,
                 label_transf, name=None):
        self.src = src
        self.tgt = tgt
        self.shape_map = shape_map
        self.label_transf = dict(label_transf)
        self.name = name or "mor"

    def validate(self):
        self.shape_map.validate()
        scat = self.src.scat
        S, T, a = self.src.labels, self.tgt.labels, self.shape_map
        for i in self.src.shape.objects:
            p = self.label_transf.get(i)
            if p is None:
                raise InvalidNatTransf("missing label part at %r" % i)
            m = scat.mor(p)
            if m.dom != S.ob(i) or m.cod != T.ob(a.ob(i)):
                raise InvalidNatTransf("label part endpoints wrong at %r" % i)
        for m in self.src.shape.morphisms:
            left = scat.comp(T.mo(a.mo(m.id)), self.label_transf[m.dom])
            right = scat.comp(self.label_transf[m.cod], S.mo(m.id))
            if left != right:
                raise InvalidNatTransf("label naturality fails at %r" % m.id)
        return self

    def is_pure_diagram_type(self):
        scat = self.src.scat
        return all(scat.is_identity(p) for p in self.label_transf.values())

    def is_fixed_shape(self):
        a = self.shape_map
        return (self.src.shape is self.tgt.shape or
                (a.object_map == {x: x for x in self.src.shape.objects}
                 and a.morphism_map == {m.id: m.id for m in self.src.shape.morphisms}))

    def key(self):
        return (self.src.key(), self.tgt.key(),
                tuple(sorted(self.shape_map.object_map.items())),
                tuple(sorted(self.shape_map.morphism_map.items())),
                tuple(sorted(self.label_transf.items())))

    def then(self, other: "DiaMor") -> "DiaMor":
        if other.src is not self.tgt and other.src.key() != self.tgt.key():
            raise EndpointMismatch("diagram morphisms not composable")
        scat = self.src.scat
        lt = {i: scat.comp(other.label_transf[self.shape_map.ob(i)],
                           self.label_transf[i])
              for i in self.src.shape.objects}
        return DiaMor(self.src, other.tgt, self.shape_map.then(other.shape_map),
                      lt, "%s;%s" % (self.name, other.name))

    @staticmethod
    def identity(d: DiaObj) -> "DiaMor":
        return DiaMor(d, d, fc.FinFunctor.identity(d.shape),
                      {i: d.scat.id_of(d.labels.ob(i)) for i in d.shape.objects},
                      "id")

    def __repr__(self):
        return "DiaMor(%s: %s -> %s)" % (self.name, self.src.name, self.tgt.name)


def factor_mor(m: DiaMor):
    """(alpha, f) = (diagram type) o (fixed shape):
    (I,S) --(id,f)--> (I, alpha^* T) --(alpha, id)--> (J, T)."""
    a, T = m.shape_map, m.tgt.labels
    mid_labels = fc.FinFunctor("a*T", m.src.shape, m.src.scat,
                               {i: T.ob(a.ob(i)) for i in m.src.shape.objects},
                               {x.id: T.mo(a.mo(x.id)) for x in m.src.shape.morphisms})
    mid = DiaObj(m.src.shape, mid_labels, "a*" + m.tgt.name).validate()
    fixed = DiaMor(m.src, mid, fc.FinFunctor.identity(m.src.shape),
                   dict(m.label_transf), "fixed").validate()
    scat = m.src.scat
    diag = DiaMor(mid, m.tgt, a,
                  {i: scat.id_of(mid_labels.ob(i)) for i in m.src.shape.objects},
                  "diagramtype").validate()
    return fixed, diag


class Dia2Mor:
    """mu : (alpha, f) => (beta, g), a natural transformation of the shape
    maps satisfying mu^* T o f = g."""

    def __init__(self, source: DiaMor, target: DiaMor, mu: fc.NatTransf):
        self.source = source
        self.target = target
        self.mu = mu

    def validate(self):
        f, g = self.source, self.target
        if f.src is not g.src or f.tgt is not g.tgt:
            raise EndpointMismatch("parallel morphisms required")
        self.mu.validate()
        scat = f.src.scat
        T = f.tgt.labels
        for i in f.src.shape.objects:
            if scat.comp(T.mo(self.mu.at(i)), f.label_transf[i]) != g.label_transf[i]:
                raise InvalidNatTransf("2-morphism compatibility fails at %r" % i)
        return self


def all_dia_mors(d1: DiaObj, d2: DiaObj):
    """Every DiaMor d1 -> d2, in canonical order."""
    scat = d1.scat
    out = []
    for a in fc.all_functors(d1.shape, d2.shape):
        objs = list(d1.shape.objects)
        choices = [scat.hom(d1.labels.ob(i), d2.labels.ob(a.ob(i))) for i in objs]
        for combo in itertools.product(*choices):
            m = DiaMor(d1, d2, a, dict(zip(objs, combo)))
            try:
                m.validate()
            except (InvalidNatTransf, InvalidFunctor):
                continue
            out.append(m)
    return out


def two_morphisms(f: DiaMor, g: DiaMor):
    """All 2-morphisms f => g."""
    if f.src is not g.src or f.tgt is not g.tgt:
        return []
    out = []
    for mu in fc.all_nat_transfs(f.shape_map, g.shape_map):
        c = Dia2Mor(f, g, mu)
        try:
            c.validate()
        except (InvalidNatTransf, EndpointMismatch):
            continue
        out.append(c)
    return out


def homotopy_related(a: DiaMor, b: DiaMor) -> bool:
    """Zig-zag connectivity of a and b through 2-morphisms among all
    parallel morphisms."""
    if a.src is not b.src or a.tgt is not b.tgt:
        raise EndpointMismatch("morphisms are not parallel")
    pool = all_dia_mors(a.src, a.tgt)
    keys = [m.key() for m in pool]
    index = {k: i for i, k in enumerate(keys)}
    ia, ib = index[a.key()], index[b.key()]
    parent = list(range(len(pool)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, m1 in enumerate(pool):
        for j, m2 in enumerate(pool):
            if i < j and (two_morphisms(m1, m2) or two_morphisms(m2, m1)):
                parent[find(i)] = find(j)
    return find(ia) == find(ib)


# ---------------------------------------------------------------------------
# comma fiber products


def _pullback_label(scat, a, b):
    """Label of a comma object: the target of a and b is shared; when one
    leg is an identity the other side is taken verbatim, otherwise the
    canonical pullback.  Returns (label, leg to dom a, leg to dom b)."""
    if scat.is_identity(a):
        return scat.dom(b), b, scat.id_of(scat.dom(b))
    if scat.is_identity(b):
        return scat.dom(a), scat.id_of(scat.dom(a)), a
    pb = fc.pullback(scat, a, b)
    if pb is None:
        raise LimitAbsent("comma label pullback of (%r, %r) absent" % (a, b))
    return pb


def comma_fiber_product(p: DiaMor, q: DiaMor):
    """The non-commutative fiber product of p : (I,S) -> (K,U) and
    q : (J,T) -> (K,U); shape is the comma category I x_{/K} J.

    Returns (DiaObj, projection DiaMor to p.src, projection DiaMor to q.src).
    """
    if p.tgt is not q.tgt and p.tgt.key() != q.tgt.key():
        raise TargetMismatch("comma factors must share their target")
    scat = p.src.scat
    S, T, U = p.src.labels, q.src.labels, p.tgt.labels
    shape, pr_i, pr_j, okey, mkey = fc.comma_category(p.shape_map, q.shape_map)
    label_ob, leg_s, leg_t = {}, {}, {}
    for (i, j, phi), oid in okey.items():
        a = scat.comp(U.mo(phi), p.label_transf[i])    # S(i) -> U(beta j)
        b = q.label_transf[j]                          # T(j) -> U(beta j)
        lab, la, lb = _pullback_label(scat, a, b)
        label_ob[oid] = lab
        leg_s[oid] = la
        leg_t[oid] = lb
    label_mo = {}
    for (o1, o2, u, v), mid in mkey.items():
        want_s = scat.comp(S.mo(u), leg_s[o1])
        want_t = scat.comp(T.mo(v), leg_t[o1])
        cands = [h for h in scat.hom(label_ob[o1], label_ob[o2])
                 if scat.comp(leg_s[o2], h) == want_s
                 and scat.comp(leg_t[o2], h) == want_t]
        if len(cands) != 1:
            raise LimitAbsent("no unique comma label map at %r" % mid)
        label_mo[mid] = cands[0]
    labels = fc.FinFunctor("lbl", shape, scat, label_ob, label_mo).validate()
    dia = DiaObj(shape, labels,
                 "%s x/%s %s" % (p.src.name, p.tgt.name, q.src.name)).validate()
    proj_p = DiaMor(dia, p.src, pr_i, {oid: leg_s[oid] for oid in label_ob},
                    "pr1").validate()
    proj_q = DiaMor(dia, q.src, pr_j, {oid: leg_t[oid] for oid in label_ob},
                    "pr2").validate()
    dia.comma_okey = okey
    dia.comma_mkey = mkey
    return dia, proj_p, proj_q


def induced_comma_map(w: DiaMor, p1: DiaMor, p2: DiaMor, q: DiaMor):
    """For a strict triangle p2 o w = p1 over a common target and a probe
    q : E -> target, the induced morphism

        p1.src x_{/target} E  ->  p2.src x_{/target} E.
    """
    check = w.then(p2)
    if check.key() != p1.key():
        raise TargetMismatch("triangle does not commute strictly")
    c1, c1_p, c1_q = comma_fiber_product(p1, q)
    c2, c2_p, c2_q = comma_fiber_product(p2, q)
    scat = w.src.scat
    omap, mmap, lt = {}, {}, {}
    for (i, e, phi), oid in c1.comma_okey.items():
        tgt_key = (w.shape_map.ob(i), e, phi)
        oid2 = c2.comma_okey[tgt_key]
        omap[oid] = oid2
        want_s = scat.comp(w.label_transf[i], c1_p.label_transf[oid])
        want_t = c1_q.label_transf[oid]
        cands = [h for h in scat.hom(c1.labels.ob(oid), c2.labels.ob(oid2))
                 if scat.comp(c2_p.label_transf[oid2], h) == want_s
                 and scat.comp(c2_q.label_transf[oid2], h) == want_t]
        if len(cands) != 1:
            raise LimitAbsent("no unique induced comma label at %r" % oid)
        lt[oid] = cands[0]
    for (o1, o2, u, v), mid in c1.comma_mkey.items():
        i1, e1, phi1 = next(k for k, val in c1.comma_okey.items() if val == o1)
        i2, e2, phi2 = next(k for k, val in c1.comma_okey.items() if val == o2)
        mid2 = c2.comma_mkey[(omap[o1], omap[o2], w.shape_map.mo(u), v)]
        mmap[mid] = mid2
    shape_map = fc.FinFunctor("w_k", c1.shape, c2.shape, omap, mmap).validate()
    return DiaMor(c1, c2, shape_map, lt, "induced").validate(), (c1, c2)


# ---------------------------------------------------------------------------
# Grothendieck construction


class DiaFunctor:
    """A strict functor from a finite base category into diagrams: an
    object assignment a -> DiaObj and a morphism assignment m -> DiaMor."""

    def __init__(self, base: fc.FinCat, ob, mo, name="F"):
        self.base = base
        self.ob = dict(ob)
        self.mo = dict(mo)
        self.name = name

    def validate(self):
        for a in self.base.objects:
            self.ob[a].validate()
        for m in self.base.morphisms:
            dm = self.mo[m.id]
            dm.validate()
            if dm.src.key() != self.ob[m.dom].key() or dm.tgt.key() != self.ob[m.cod].key():
                raise InvalidFunctor("diagram functor endpoints wrong at %r" % m.id)
        for a in self.base.objects:
            if self.mo[self.base.id_of(a)].key() != DiaMor.identity(self.ob[a]).key():
                raise InvalidFunctor("diagram functor not strict at id_%r" % a)
        for (g, f), h in self.base.compose_table.items():
            if self.mo[f].then(self.mo[g]).key() != self.mo[h].key():
                raise InvalidFunctor("diagram functor not strict at (%r,%r)" % (g, f))
        return self


def grothendieck_construction(F: DiaFunctor):
    """int F = (int I, S): objects (a, i), morphisms (m, g) with
    g : alpha_m(i) -> i', labeled S_a(i).  Returns (DiaObj, projection
    functor to the base, fiber inclusion DiaMors)."""
    A = F.base
    objs, okey = [], {}
    for a in A.objects:
        for i in F.ob[a].shape.objects:
            oid = "(%s|%s)" % (a, i)
            okey[(a, i)] = oid
            objs.append(oid)
    mors, mkey, identity = [], {}, {}
    for a in A.objects:
        for m in A.out(a):
            a2 = A.cod(m)
            am = F.mo[m].shape_map
            for i in F.ob[a].shape.objects:
                for g in F.ob[a2].shape.out(am.ob(i)):
                    mid = "(%s|%s):%s->%s" % (m, g, okey[(a, i)],
                                              okey[(a2, F.ob[a2].shape.cod(g))])
                    mkey[(a, i, m, g)] = mid
                    mors.append(fc.Mor(mid, okey[(a, i)],
                                       okey[(a2, F.ob[a2].shape.cod(g))]))
                    if m == A.id_of(a) and g == F.ob[a].shape.id_of(i):
                        identity[okey[(a, i)]] = mid
    comp = {}
    for (a, i, m, g), mid in mkey.items():
        a2 = A.cod(m)
        i2 = F.ob[a2].shape.cod(g)
        for m2 in A.out(a2):
            a3 = A.cod(m2)
            am2 = F.mo[m2].shape_map
            for g2 in F.ob[a3].shape.out(am2.ob(i2)):
                mid2 = mkey[(a2, i2, m2, g2)]
                mm = A.comp(m2, m)
                gg = F.ob[a3].shape.comp(g2, am2.mo(g))
                comp[(mid2, mid)] = mkey[(a, i, mm, gg)]
    shape = fc.FinCat.build("int(%s)" % F.name, objs, mors, identity, comp,
                            full_check=False)
    scat = F.ob[A.objects[0]].scat
    lab_ob = {okey[(a, i)]: F.ob[a].labels.ob(i) for (a, i) in okey}
    lab_mo = {}
    for (a, i, m, g), mid in mkey.items():
        a2 = A.cod(m)
        lab_mo[mid] = scat.comp(F.ob[a2].labels.mo(g), F.mo[m].label_transf[i])
    labels = fc.FinFunctor("lbl", shape, scat, lab_ob, lab_mo).validate()
    dia = DiaObj(shape, labels, "int(%s)" % F.name).validate()
    proj = fc.FinFunctor("proj", shape, A,
                         {okey[(a, i)]: a for (a, i) in okey},
                         {mid: k[2] for k, mid in mkey.items()}).validate()
    incl = {}
    for a in A.objects:
        Ia = F.ob[a].shape
        incl[a] = DiaMor(
            F.ob[a], dia,
            fc.FinFunctor("inc_%s" % a, Ia, shape,
                          {i: okey[(a, i)] for i in Ia.objects},
                          {m.id: mkey[(a, m.dom, A.id_of(a), m.id)]
                           for m in Ia.morphisms}),
            {i: scat.id_of(F.ob[a].labels.ob(i)) for i in Ia.objects},
            "iota_%s" % a).validate()
    dia.groth_okey = okey
    dia.groth_mkey = mkey
    return dia, proj, incl


def span_diafunctor(f: DiaMor, g: DiaMor, name="X"):
    """A span-shaped diagram functor from two morphisms with common source:
    b <-f- a -g-> c."""
    from .fixtures import span_shape
    if f.src is not g.src:
        raise EndpointMismatch("span legs must share their source")
    sh = span_shape()
    ob = {"a": f.src, "b": f.tgt, "c": g.tgt}
    mo = {sh.id_of("a"): DiaMor.identity(f.src),
          sh.id_of("b"): DiaMor.identity(f.tgt),
          sh.id_of("c"): DiaMor.identity(g.tgt),
          "a<=b": f, "a<=c": g}
    return DiaFunctor(sh, ob, mo, name).validate()


# ---------------------------------------------------------------------------
# nerves and hom diagrams


def nerve(d: DiaObj, trunc: int) -> sp.SplitSimpObj:
    """The nerve N(I, S): chains labeled by the value at their first
    object."""
    return sp.nerve_labeled(d.shape, d.labels, trunc, "N(%s)" % d.name)


def nerve_mor(m: DiaMor, trunc: int, na=None, nb=None) -> sp.SplitMor:
    """N applied to a morphism of diagrams (optionally against pre-built
    nerves of the endpoints)."""
    na = na or nerve(m.src, trunc)
    nb = nb or nerve(m.tgt, trunc)
    a = m.shape_map
    c2 = m.tgt.shape
    val, part = {}, {}
    for lev, ids in enumerate(na.levels):
        for sid in ids:
            x0, ms = na.chain_of[sid]
            mapped = [a.mo(x) for x in ms]
            stripped = tuple(x for x in mapped if not c2.is_identity(x))
            epi = [0]
            v = 0
            for x in mapped:
                if not c2.is_identity(x):
                    v += 1
                epi.append(v)
            val[sid] = (tuple(epi), sp.chain_id((a.ob(x0), stripped)))
            part[sid] = m.label_transf[x0]
    return sp.SplitMor(na, nb, val, part, "N(%s)" % m.name).validate()


def nerve_diagram(F: DiaFunctor, trunc: int):
    """Nerves of every value of a diagram functor, with the induced
    morphisms between the shared nerve objects."""
    from .homotopy import SplitDiagram
    nerves = {a: nerve(F.ob[a], trunc) for a in F.base.objects}
    mors = {m.id: nerve_mor(F.mo[m.id], trunc, nerves[m.dom], nerves[m.cod])
            for m in F.base.morphisms}
    return SplitDiagram(F.base, nerves, mors, "N(%s)" % F.name).validate()


def hom_diagram(site_or_cat, x, d: DiaObj):
    """The category of elements of i -> Hom(x, S(i)) with its projection
    to the shape of d (a discrete-fiber opfibration).

    `x` is a site object or a CoprodObj; elements are tagged accordingly.
    """
    scat = d.scat
    cat = site_or_cat.cat if isinstance(site_or_cat, Site) else site_or_cat

    def homs(s):
        if isinstance(x, CoprodObj):
            return [("%d:%s" % (i, m), i, m)
                    for i, c in enumerate(x.components) for m in cat.hom(c, s)]
        return [(m, None, m) for m in cat.hom(x, s)]

    objs, okey = [], {}
    for i in d.shape.objects:
        for tag, comp, h in homs(d.labels.ob(i)):
            oid = "(%s|%s)" % (i, tag)
            okey[(i, tag)] = (oid, comp, h)
            objs.append(oid)
    mors, mkey, identity = [], {}, {}
    for (i, tag), (oid, comp, h) in okey.items():
        for phi in d.shape.out(i):
            i2 = d.shape.cod(phi)
            h2 = scat.comp(d.labels.mo(phi), h)
            tag2 = ("%d:%s" % (comp, h2)) if comp is not None else h2
            oid2 = okey[(i2, tag2)][0]
            mid = "(%s):%s->%s" % (phi, oid, oid2)
            mkey[(i, tag, phi)] = mid
            mors.append(fc.Mor(mid, oid, oid2))
            if phi == d.shape.id_of(i):
                identity[oid] = mid
    comp_table = {}
    for (i, tag, phi), mid in mkey.items():
        i2 = d.shape.cod(phi)
        oid, comp, h = okey[(i, tag)]
        h2 = scat.comp(d.labels.mo(phi), h)
        tag2 = ("%d:%s" % (comp, h2)) if comp is not None else h2
        for phi2 in d.shape.out(i2):
            comp_table[(mkey[(i2, tag2, phi2)], mid)] = mkey[(i, tag, d.shape.comp(phi2, phi))]
    cat_el = fc.FinCat.build("Hom(%s,%s)" % (x, d.name), objs, mors, identity,
                             comp_table, full_check=False)
    proj = fc.FinFunctor("proj", cat_el, d.shape,
                         {okey[k][0]: k[0] for k in okey},
                         {mid: k[2] for k, mid in mkey.items()}).validate()
    cat_el.hom_okey = okey
    return cat_el, proj
