"""Localizer-axiom checking over a finite diagram universe and the sound
fixpoint under-approximation of the smallest localizer.

A universe fixes finitely many diagrams and morphisms (closed under
composition).  Rule instances whose auxiliary data (comma fibers, covers)
cannot be resolved inside the universe are skipped and reported.  The
closure engine is monotone on a finite lattice, records provenance per
admitted member, and never claims completeness: it computes a sound
under-approximation of the smallest localizer restricted to the universe.

Comma fibers are resolved up to isomorphism: the auxiliary comma diagram is
translated onto a universe object by isomorphism search when possible;
membership of the translated morphism is what the rules consult
(membership of a localizer is isomorphism-invariant by weak saturation).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import algtop as at
from . import diagram as dg
from . import fincat as fc
from .errors import LimitAbsent, TargetMismatch
from .site import Site


@dataclass
class UMor:
    id: str
    src: str
    tgt: str
    mor: dg.DiaMor


class DiagramUniverse:
    def __init__(self, site: Site):
        self.site = site
        self.objects = {}
        self.morphisms = {}
        self.comp = {}
        self.identity = {}
        self._okey = {}
        self._mkey = {}
        self._next = [0, 0]

    def add_object(self, d: dg.DiaObj) -> str:
        k = d.key()
        if k in self._okey:
            return self._okey[k]
        oid = "D%d" % self._next[0]
        self._next[0] += 1
        self.objects[oid] = d
        self._okey[k] = oid
        return oid

    def add_morphism(self, m: dg.DiaMor) -> str:
        k = m.key()
        if k in self._mkey:
            return self._mkey[k]
        src = self.add_object(m.src)
        tgt = self.add_object(m.tgt)
        mid = "m%d" % self._next[1]
        self._next[1] += 1
        self.morphisms[mid] = UMor(mid, src, tgt, m)
        self._mkey[k] = mid
        return mid

    def lookup(self, m: dg.DiaMor):
        return self._mkey.get(m.key())

    def lookup_object(self, d: dg.DiaObj):
        return self._okey.get(d.key())

    def close_composition(self, max_rounds=None):
        for oid, d in list(self.objects.items()):
            self.identity[oid] = self.add_morphism(dg.DiaMor.identity(d))
        changed = True
        rounds = 0
        while changed:
            changed = False
            rounds += 1
            if max_rounds is not None and rounds > max_rounds:
                raise LimitAbsent("composition closure did not stabilize")
            mors = list(self.morphisms.items())
            by_src = {}
            for mid, um in mors:
                by_src.setdefault(um.src, []).append((mid, um))
            for fid, fm in mors:
                for gid, gm in by_src.get(fm.tgt, []):
                    if (gid, fid) in self.comp:
                        continue
                    h = fm.mor.then(gm.mor)
                    hid = self.lookup(h)
                    if hid is None:
                        hid = self.add_morphism(h)
                        changed = True
                    self.comp[(gid, fid)] = hid
        return self

    def validate(self):
        for (g, f), h in self.comp.items():
            if self.morphisms[f].tgt != self.morphisms[g].src:
                raise TargetMismatch("composition table pairs non-composable ids")
            if h not in self.morphisms:
                raise TargetMismatch("composite %r missing" % h)
        return self


@dataclass
class MorClass:
    members: set = field(default_factory=set)
    provenance: dict = field(default_factory=dict)

    def admit(self, mid, why):
        if mid not in self.members:
            self.members.add(mid)
            self.provenance[mid] = why
            return True
        return False

    def copy(self):
        return MorClass(set(self.members), dict(self.provenance))


# ---------------------------------------------------------------------------
# shape classification (quotient by isomorphism)


class ShapeTranslator:
    """Translate an arbitrary diagram onto a universe object via
    isomorphism search, caching results by structural key."""

    def __init__(self, universe: DiagramUniverse):
        self.u = universe
        self.cache = {}

    def translate(self, d: dg.DiaObj):
        """Return (oid, iso FinFunctor d.shape -> universe shape) or None.

        Only shape-level translation is attempted for diagrams whose
        labels are constant (trivial-labeled universes); otherwise exact
        key lookup is used."""
        k = d.key()
        if k in self.cache:
            return self.cache[k]
        oid = self.u.lookup_object(d)
        if oid is not None:
            res = (oid, fc.FinFunctor.identity(d.shape))
            self.cache[k] = res
            return res
        for oid, cand in self.u.objects.items():
            if len(cand.shape.objects) != len(d.shape.objects):
                continue
            if sorted(cand.labels.object_map.values()) != \
                    sorted(d.labels.object_map.values()):
                continue
            iso = fc.find_isomorphism(d.shape, cand.shape)
            if iso is None:
                continue
            # labels must be respected on the nose
            if all(cand.labels.ob(iso.ob(x)) == d.labels.ob(x)
                   for x in d.shape.objects) and \
               all(cand.labels.mo(iso.mo(m.id)) == d.labels.mo(m.id)
                   for m in d.shape.morphisms):
                res = (oid, iso)
                self.cache[k] = res
                return res
        self.cache[k] = None
        return None

    def translate_mor(self, m: dg.DiaMor):
        """Find the universe morphism matching m after translating both
        endpoints; None when either endpoint or the conjugate is absent."""
        rs = self.translate(m.src)
        rt = self.translate(m.tgt)
        if rs is None or rt is None:
            return None
        (so, siso), (to, tiso) = rs, rt
        src_d, tgt_d = self.u.objects[so], self.u.objects[to]
        scat = src_d.scat
        inv = {siso.ob(x): x for x in m.src.shape.objects}
        minv = {siso.mo(x.id): x.id for x in m.src.shape.morphisms}
        omap = {y: tiso.ob(m.shape_map.ob(inv[y])) for y in src_d.shape.objects}
        mmap = {y.id: tiso.mo(m.shape_map.mo(minv[y.id]))
                for y in src_d.shape.morphisms}
        lt = {y: m.label_transf[inv[y]] for y in src_d.shape.objects}
        cand = dg.DiaMor(src_d, tgt_d, fc.FinFunctor("t", src_d.shape,
                                                     tgt_d.shape, omap, mmap), lt)
        return self.u.lookup(cand)


# ---------------------------------------------------------------------------
# rule instance enumeration


def _final_collapse(d: dg.DiaObj):
    """The (L2) collapse (I, F) -> (e, F(e)) when a final object exists."""
    e = fc.detect_extremal(d.shape)["final"]
    if e is None:
        return None
    pt = dg.point_dia(d.scat, d.labels.ob(e))
    shape_map = fc.FinFunctor("!e", d.shape, pt.shape,
                              {x: "*" for x in d.shape.objects},
                              {m.id: "id_*" for m in d.shape.morphisms})
    lt = {x: d.labels.mo(d.shape.hom(x, e)[0]) for x in d.shape.objects}
    return dg.DiaMor(d, pt, shape_map, lt, "collapse").validate()


def ws_instances(u: DiagramUniverse):
    """(WS1), (WS2), (WS3) instances over the universe."""
    ws1 = [self_id for self_id in u.identity.values()]
    ws2 = [(f, g, h) for (g, f), h in u.comp.items()]
    ws3 = []
    for (p, s), h in u.comp.items():
        if h in u.identity.values() and (s, p) in u.comp:
            ws3.append((p, s, u.comp[(s, p)]))
    return ws1, ws2, ws3


def l2_instances(u: DiagramUniverse, translator: ShapeTranslator = None):
    """(oid, collapse mid or None) per diagram with a final object."""
    translator = translator or ShapeTranslator(u)
    out = []
    for oid, d in u.objects.items():
        c = _final_collapse(d)
        if c is None:
            continue
        out.append((oid, translator.translate_mor(c)))
    return out


def cover_families(site: Site, x: str, refine_bound: int = 2):
    """Declared families of x plus refinement chains up to the bound."""
    fams = [tuple(f) for f in site.families_of(x)]
    depth = 1
    frontier = list(fams)
    while depth < refine_bound:
        depth += 1
        nxt = []
        for fam in frontier:
            for i, m in enumerate(fam):
                for sub in site.families_of(site.cat.dom(m)):
                    if sub == [site.cat.id_of(site.cat.dom(m))]:
                        continue
                    newfam = tuple(fam[:i] + tuple(
                        site.cat.comp(m, m2) for m2 in sub) + fam[i + 1:])
                    if newfam not in fams:
                        fams.append(newfam)
                        nxt.append(newfam)
        frontier = nxt
    return [list(f) for f in fams]


def l3_instances(u: DiagramUniverse, refine_bound: int = 2,
                 translator: ShapeTranslator = None, max_instances=None):
    """Triangles (w over D3) with per-(k, cover) comma morphisms resolved
    in the universe.

    Returns (instances, skipped): an instance is (w, p2, k, family,
    [comma mids]); skipped records triangles whose commas are missing.
    """
    translator = translator or ShapeTranslator(u)
    site = u.site
    comma_cache = {}
    instances, skipped = [], []
    by_src = {}
    for mid, um in u.morphisms.items():
        by_src.setdefault(um.src, []).append((mid, um))
    count = 0
    for wid, wm in u.morphisms.items():
        for p2id, p2m in by_src.get(wm.tgt, []):
            p1id = u.comp[(p2id, wid)]
            p1m = u.morphisms[p1id]
            d3 = p2m.mor.tgt
            all_ok = True
            per_k = []
            for k in d3.shape.objects:
                fams = cover_families(site, d3.labels.ob(k), refine_bound)
                fam_entries = []
                for fam in fams:
                    mids = []
                    ok = True
                    for member in fam:
                        key = (p1id, p2id, wid, k, member)
                        if key not in comma_cache:
                            comma_cache[key] = _resolve_comma(
                                u, translator, wm.mor, p1m.mor, p2m.mor, k, member)
                        mid = comma_cache[key]
                        if mid is None:
                            ok = False
                            break
                        mids.append(mid)
                    if ok:
                        fam_entries.append((fam, mids))
                if not fam_entries:
                    all_ok = False
                    break
                per_k.append((k, fam_entries))
            if all_ok:
                instances.append((wid, p2id, per_k))
                count += 1
                if max_instances is not None and count >= max_instances:
                    return instances, skipped
            else:
                skipped.append((wid, p2id))
    return instances, skipped


def _resolve_comma(u, translator, w, p1, p2, k, member):
    """The universe id of w x_{/D3} (k, U_member), or None."""
    probe_label = u.site.cat.dom(member)
    probe = dg.point_dia(u.site.cat, probe_label)
    q = dg.DiaMor(probe, p1.tgt,
                  fc.FinFunctor("k", probe.shape, p1.tgt.shape,
                                {"*": k}, {"id_*": p1.tgt.shape.id_of(k)}),
                  {"*": member}, "probe")
    try:
        q.validate()
        induced, (c1, c2) = dg.induced_comma_map(w, p1, p2, q)
    except (LimitAbsent, TargetMismatch):
        return None
    return translator.translate_mor(induced)


def l4_instances(u: DiagramUniverse, trunc: int = 3):
    """Pure-diagram-type morphisms whose slices (or fibers, for
    fibrations) all carry a sufficient contractibility certificate."""
    out = []
    for mid, um in u.morphisms.items():
        m = um.mor
        if not m.is_pure_diagram_type():
            continue
        alpha = m.shape_map
        certs = []
        ok = True
        for j in m.tgt.shape.objects:
            sl, _, _, _ = fc.slice_under(j, alpha)
            cert = at.contractibility_certificate(sl, trunc)
            if cert is None or cert.necessary_only:
                ok = False
                break
            certs.append((j, cert.kind))
        if ok:
            out.append((mid, "slices", certs))
            continue
        fib_ok, _ = fc.is_fibration(alpha)
        if fib_ok:
            certs = []
            ok = True
            for j in m.tgt.shape.objects:
                fb, _ = fc.fiber(alpha, j)
                cert = at.contractibility_certificate(fb, trunc)
                if cert is None or cert.necessary_only:
                    ok = False
                    break
                certs.append((j, cert.kind))
            if ok:
                out.append((mid, "fibers", certs))
    return out


def homotopy_classes(u: DiagramUniverse):
    """Partition of the universe morphisms into 2-morphism zig-zag classes
    (per parallel pair of endpoints)."""
    parent = {mid: mid for mid in u.morphisms}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    groups = {}
    for mid, um in u.morphisms.items():
        groups.setdefault((um.src, um.tgt), []).append(mid)
    for (s, t), mids in groups.items():
        for a, b in itertools.combinations(mids, 2):
            ma, mb = u.morphisms[a].mor, u.morphisms[b].mor
            if dg.two_morphisms(ma, mb) or dg.two_morphisms(mb, ma):
                parent[find(a)] = find(b)
    classes = {}
    for mid in u.morphisms:
        classes.setdefault(find(mid), []).append(mid)
    return classes


def adjunction_instances(u: DiagramUniverse):
    """Morphisms of the form (s, id) with s a right adjoint, together with
    the partner (p, unit-induced) when present in the universe."""
    out = []
    for mid, um in u.morphisms.items():
        m = um.mor
        if not m.is_pure_diagram_type():
            continue
        s = m.shape_map
        I, J = s.source, s.target
        for p in fc.all_functors(J, I):
            for unit in fc.all_nat_transfs(fc.FinFunctor.identity(J), p.then(s)):
                for counit in fc.all_nat_transfs(s.then(p), fc.FinFunctor.identity(I)):
                    w = fc.AdjunctionWitness(p, s, unit, counit)
                    ok, _ = fc.check_adjunction(w)
                    if not ok:
                        continue
                    scat = m.src.scat
                    T = m.tgt.labels
                    partner = dg.DiaMor(
                        m.tgt, m.src, p,
                        {j: T.mo(unit.at(j)) for j in J.objects}, "padj")
                    try:
                        partner.validate()
                    except Exception:
                        continue
                    pid = u.lookup(partner)
                    out.append((mid, pid, p.name))
                    break
                else:
                    continue
                break
            else:
                continue
            break
    return out


# ---------------------------------------------------------------------------
# axiom checks (report-valued)


def check_ws(w: MorClass, u: DiagramUniverse):
    ws1, ws2, ws3 = ws_instances(u)
    violations = []
    for mid in ws1:
        if mid not in w.members:
            violations.append(("WS1", mid))
    for (f, g, h) in ws2:
        known = (f in w.members) + (g in w.members) + (h in w.members)
        if known == 2:
            for x in (f, g, h):
                if x not in w.members:
                    violations.append(("WS2", f, g, h, x))
    for (p, s, sp_) in ws3:
        if sp_ in w.members and p not in w.members:
            violations.append(("WS3", p, s))
    return violations


def check_L2(w: MorClass, u: DiagramUniverse):
    violations, missing = [], []
    for oid, mid in l2_instances(u):
        if mid is None:
            missing.append(("MissingCollapseMorphism", oid))
        elif mid not in w.members:
            violations.append(("L2", oid, mid))
    return violations, missing


def check_L3(w: MorClass, u: DiagramUniverse, refine_bound: int = 2):
    instances, skipped = l3_instances(u, refine_bound)
    violations = []
    for (wid, p2id, per_k) in instances:
        if wid in w.members:
            continue
        triggered = True
        for (k, fam_entries) in per_k:
            if not any(all(m in w.members for m in mids)
                       for fam, mids in fam_entries):
                triggered = False
                break
        if triggered:
            violations.append(("L3", wid, p2id))
    return violations, skipped


def check_L4(w: MorClass, u: DiagramUniverse, trunc: int = 3):
    violations = []
    for (mid, how, certs) in l4_instances(u, trunc):
        if mid not in w.members:
            violations.append(("L4", mid, how, certs))
    return violations


# ---------------------------------------------------------------------------
# the closure fixpoint


def closure_fixpoint(seed: MorClass, u: DiagramUniverse, trunc: int = 3,
                     refine_bound: int = 2, use_adjunctions: bool = True):
    """Iterate (WS1-3), (L2), (L3), (L4), homotopy closure, and adjunction
    membership until no change.

    Monotone on a finite lattice, so termination is guaranteed; the result
    is a sound under-approximation of the smallest localizer restricted to
    the universe, with one provenance entry per member.
    """
    w = seed.copy()
    translator = ShapeTranslator(u)
    ws1, ws2, ws3 = ws_instances(u)
    l2s = l2_instances(u, translator)
    l3s, l3_skipped = l3_instances(u, refine_bound, translator)
    l4s = l4_instances(u, trunc)
    classes = homotopy_classes(u)
    class_of = {m: root for root, ms in classes.items() for m in ms}
    adjs = adjunction_instances(u) if use_adjunctions else []

    for mid in ws1:
        w.admit(mid, ("WS1",))
    for (mid, how, certs) in l4s:
        w.admit(mid, ("L4", how, tuple(certs)))
    for (oid, mid) in l2s:
        if mid is not None:
            w.admit(mid, ("L2", oid))
    for (mid, pid, pname) in adjs:
        w.admit(mid, ("ADJ", pname))
        if pid is not None:
            w.admit(pid, ("ADJ-partner", mid))

    changed = True
    while changed:
        changed = False
        for (f, g, h) in ws2:
            inw = (f in w.members, g in w.members, h in w.members)
            if inw == (True, True, False):
                changed |= w.admit(h, ("WS2-compose", f, g))
            elif inw == (True, False, True):
                changed |= w.admit(g, ("WS2-right", f, h))
            elif inw == (False, True, True):
                changed |= w.admit(f, ("WS2-left", g, h))
        for (p, s, sp_) in ws3:
            if sp_ in w.members:
                changed |= w.admit(p, ("WS3", s, sp_))
                changed |= w.admit(s, ("WS3-section", p, sp_))
        for (wid, p2id, per_k) in l3s:
            if wid in w.members:
                continue
            good = True
            chosen = []
            for (k, fam_entries) in per_k:
                pick = None
                for fam, mids in fam_entries:
                    if all(m in w.members for m in mids):
                        pick = (k, tuple(fam))
                        break
                if pick is None:
                    good = False
                    break
                chosen.append(pick)
            if good:
                changed |= w.admit(wid, ("L3", p2id, tuple(chosen)))
        for root, mids in classes.items():
            if any(m in w.members for m in mids):
                rep = next(m for m in mids if m in w.members)
                for m in mids:
                    if m not in w.members:
                        changed |= w.admit(m, ("HTP", rep))
    w.skipped_l3 = l3_skipped
    return w


def replay_provenance(w: MorClass, u: DiagramUniverse):
    """Re-derive every member from its recorded rule instance; returns the
    list of members whose premises are not themselves members."""
    bad = []
    for mid, why in w.provenance.items():
        rule = why[0]
        if rule in ("WS2-compose", "WS2-right", "WS2-left", "WS3", "WS3-section"):
            premises = [x for x in why[1:] if isinstance(x, str) and x in u.morphisms]
            if not all(p in w.members for p in premises):
                bad.append(mid)
        elif rule == "HTP":
            if why[1] not in w.members:
                bad.append(mid)
    return bad


# ---------------------------------------------------------------------------
# universe builders


POSET_SHAPES = {
    0: [("E0", [])],
    1: [("P1", [("x", [])])],
    2: [("C2", [("0", ["1"]), ("1", [])]),
        ("D2", [("x", []), ("y", [])])],
    3: [("C3", [("0", ["1", "2"]), ("1", ["2"]), ("2", [])]),
        ("V", [("a", ["b", "c"]), ("b", []), ("c", [])]),
        ("W", [("a", ["c"]), ("b", ["c"]), ("c", [])]),
        ("L21", [("0", ["1"]), ("1", []), ("z", [])]),
        ("D3", [("x", []), ("y", []), ("z", [])])],
}


def poset_shapes(max_objects: int = 3, include_empty: bool = True):
    """Canonical posets on up to `max_objects` elements, up to isomorphism."""
    out = []
    for n in range(0 if include_empty else 1, max_objects + 1):
        for name, rels in POSET_SHAPES.get(n, []):
            above = {x: set(up) for x, up in rels}
            objs = [x for x, _ in rels]
            out.append(fc.poset_category(
                name, objs, lambda a, b, ab=above: a == b or b in ab[a]))
    return out


def poset_universe(site: Site, max_objects: int = 3, label=None):
    """All canonical poset shapes with constant labels, every diagram
    morphism between them, closed under composition."""
    label = label or site.cat.objects[0]
    u = DiagramUniverse(site)
    dias = []
    for shape in poset_shapes(max_objects):
        d = dg.DiaObj(shape, fc.FinFunctor.constant(shape, site.cat, label),
                      shape.name).validate()
        u.add_object(d)
        dias.append(d)
    for d1 in dias:
        for d2 in dias:
            for m in dg.all_dia_mors(d1, d2):
                u.add_morphism(m)
    u.close_composition()
    return u.validate()


def universe_from(site: Site, objects, morphisms=None, all_mors=False):
    """Universe from explicit diagrams; optionally with every diagram
    morphism between them, always closed under composition."""
    u = DiagramUniverse(site)
    for d in objects:
        u.add_object(d)
    if all_mors:
        for d1 in objects:
            for d2 in objects:
                for m in dg.all_dia_mors(d1, d2):
                    u.add_morphism(m)
    for m in morphisms or []:
        u.add_morphism(m)
    u.close_composition()
    return u.validate()


def nerve_soundness_report(w: MorClass, u: DiagramUniverse, trunc: int = 4):
    """The homology necessary check: every member's nerve must be a
    quasi-isomorphism in the valid range.  Returns the offending ids."""
    bad = []
    for mid in sorted(w.members):
        m = u.morphisms[mid].mor
        nm = dg.nerve_mor(m, trunc)
        if not at.quasi_iso(nm.underlying()).ok:
            bad.append(mid)
    return bad
