"""Finite categories, functors, natural transformations and the exhaustive
constructions on them: comma categories, slices, fibers, (op)fibration
checks, brute-force limits, twisted arrows and nerves.

Everything is a plain immutable value.  Object and morphism identifiers are
strings; declaration order is the canonical order and every search iterates
in canonical order, returning the first witness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import (
    TargetMismatch,
    DomCodMismatch,
    EndpointMismatch,
    InvalidFunctor,
    InvalidNatTransf,
    MissingIdentity,
    NonAssociative,
    ObjectNotInTarget,
    PartialCompositionTable,
)


@dataclass(frozen=True)
class Mor:
    id: str
    dom: str
    cod: str


class FinCat:
    """A finite category with a total composition table.

    `compose[(g, f)] = g o f` for every composable pair (cod f == dom g).
    Use :func:`validate_category` or :meth:`FinCat.build` to construct; the
    constructor itself only stores and indexes.
    """

    def __init__(self, name, objects, morphisms, identity, compose):
        self.name = name
        self.objects = tuple(objects)
        self.morphisms = tuple(morphisms)
        self.identity = dict(identity)
        self.compose_table = dict(compose)
        self._mor_by_id = {m.id: m for m in self.morphisms}
        self._hom = {}
        for m in self.morphisms:
            self._hom.setdefault((m.dom, m.cod), []).append(m.id)
        self._out = {}
        self._in = {}
        for m in self.morphisms:
            self._out.setdefault(m.dom, []).append(m.id)
            self._in.setdefault(m.cod, []).append(m.id)

    # -- basic queries ----------------------------------------------------

    def mor(self, mid: str) -> Mor:
        return self._mor_by_id[mid]

    def dom(self, mid: str) -> str:
        return self._mor_by_id[mid].dom

    def cod(self, mid: str) -> str:
        return self._mor_by_id[mid].cod

    def hom(self, x: str, y: str) -> list:
        return list(self._hom.get((x, y), []))

    def out(self, x: str) -> list:
        return list(self._out.get(x, []))

    def into(self, x: str) -> list:
        return list(self._in.get(x, []))

    def id_of(self, x: str) -> str:
        return self.identity[x]

    def is_identity(self, mid: str) -> bool:
        m = self._mor_by_id[mid]
        return m.dom == m.cod and self.identity[m.dom] == mid

    def comp(self, g: str, f: str) -> str:
        """g o f (apply f first)."""
        return self.compose_table[(g, f)]

    def comp_path(self, path) -> str:
        """Compose a list of morphism ids given in diagrammatic order
        (first applied first).  Empty paths are not allowed."""
        acc = path[0]
        for nxt in path[1:]:
            acc = self.comp(nxt, acc)
        return acc

    def is_iso(self, mid: str):
        m = self._mor_by_id[mid]
        for inv in self.hom(m.cod, m.dom):
            if (self.comp(inv, mid) == self.identity[m.dom]
                    and self.comp(mid, inv) == self.identity[m.cod]):
                return inv
        return None

    def is_mono(self, mid: str) -> bool:
        m = self._mor_by_id[mid]
        for x in self.objects:
            for g in self.hom(x, m.dom):
                for h in self.hom(x, m.dom):
                    if g != h and self.comp(mid, g) == self.comp(mid, h):
                        return False
        return True

    def nonidentity_out(self, x: str) -> list:
        return [m for m in self.out(x) if not self.is_identity(m)]

    def opposite(self) -> "FinCat":
        mors = [Mor(m.id, m.cod, m.dom) for m in self.morphisms]
        comp = {(f, g): h for (g, f), h in self.compose_table.items()}
        return FinCat(self.name + "^op", self.objects, mors, self.identity, comp)

    def __repr__(self):
        return "FinCat(%s: %d objects, %d morphisms)" % (
            self.name, len(self.objects), len(self.morphisms))

    # -- construction ------------------------------------------------------

    @staticmethod
    def build(name, objects, morphisms, identity, compose,
              full_check=True) -> "FinCat":
        """Construct and validate.  `full_check=False` skips the exhaustive
        associativity sweep (cubic in the morphism count) and is reserved
        for internally generated categories whose composition tables are
        associative by construction; totality, identity laws and dom/cod
        consistency are always checked."""
        cat = FinCat(name, objects, morphisms, identity, compose)
        report = validate_report(cat, full=full_check)
        if report:
            exc, msg = report[0]
            raise exc(msg)
        return cat


def validate_report(cat: FinCat, full=True) -> list:
    """Collect category-axiom violations as (exception class, message)."""
    problems = []
    ids = set()
    for m in cat.morphisms:
        if m.id in ids:
            problems.append((DomCodMismatch, "duplicate morphism id %r" % m.id))
        ids.add(m.id)
        if m.dom not in cat.objects or m.cod not in cat.objects:
            problems.append((DomCodMismatch, "morphism %r has unknown endpoint" % m.id))
    for x in cat.objects:
        if x not in cat.identity:
            problems.append((MissingIdentity, "object %r has no identity" % x))
            continue
        i = cat.identity[x]
        if i not in cat._mor_by_id:
            problems.append((MissingIdentity, "identity of %r is not a morphism" % x))
            continue
        m = cat.mor(i)
        if m.dom != x or m.cod != x:
            problems.append((MissingIdentity, "identity of %r has wrong endpoints" % x))
    if problems:
        return problems
    for m in cat.morphisms:
        for f in cat.morphisms:
            if f.cod == m.dom:
                if (m.id, f.id) not in cat.compose_table:
                    problems.append((PartialCompositionTable,
                                     "missing composite (%r, %r)" % (m.id, f.id)))
                else:
                    h = cat.compose_table[(m.id, f.id)]
                    if h not in cat._mor_by_id:
                        problems.append((PartialCompositionTable,
                                         "composite (%r,%r) -> unknown id" % (m.id, f.id)))
                    else:
                        hm = cat.mor(h)
                        if hm.dom != f.dom or hm.cod != m.cod:
                            problems.append((DomCodMismatch,
                                             "composite (%r,%r) has wrong endpoints" % (m.id, f.id)))
    if problems:
        return problems
    for m in cat.morphisms:
        i, j = cat.identity[m.dom], cat.identity[m.cod]
        if cat.compose_table[(m.id, i)] != m.id or cat.compose_table[(j, m.id)] != m.id:
            problems.append((MissingIdentity, "identity law fails at %r" % m.id))
    if not full:
        return problems
    for f in cat.morphisms:
        for g in cat.morphisms:
            if g.dom != f.cod:
                continue
            gf = cat.compose_table[(g.id, f.id)]
            for h in cat.morphisms:
                if h.dom != g.cod:
                    continue
                hg = cat.compose_table[(h.id, g.id)]
                if cat.compose_table[(h.id, gf)] != cat.compose_table[(hg, f.id)]:
                    problems.append((NonAssociative,
                                     "associativity fails on (%r,%r,%r)" % (h.id, g.id, f.id)))
                    return problems
    return problems


def validate_category(raw: dict, name: str = "C") -> FinCat:
    """Validate a raw description {objects, morphisms, identities, compose}.

    Raises the first violation found (MissingIdentity, NonAssociative,
    DomCodMismatch or PartialCompositionTable).
    """
    mors = [Mor(m["id"], m["dom"], m["cod"]) for m in raw["morphisms"]]
    comp = {(g, f): h for g, f, h in raw.get("compose", [])}
    return FinCat.build(name, raw["objects"], mors, raw["identities"], comp)


# ---------------------------------------------------------------------------
# standard builders


def terminal_category(obj: str = "*") -> FinCat:
    i = "id_" + obj
    return FinCat.build("1", [obj], [Mor(i, obj, obj)], {obj: i}, {(i, i): i})


def poset_category(name, elements, leq) -> FinCat:
    """The category of a finite poset.  `leq(a, b)` decides a <= b."""
    elements = list(elements)
    mors, identity, hom = [], {}, {}
    for a in elements:
        for b in elements:
            if leq(a, b):
                mid = "%s<=%s" % (a, b)
                mors.append(Mor(mid, a, b))
                hom[(a, b)] = mid
                if a == b:
                    identity[a] = mid
    comp = {}
    for (a, b), f in hom.items():
        for (b2, c), g in hom.items():
            if b2 == b:
                comp[(g, f)] = hom[(a, c)]
    return FinCat.build(name, elements, mors, identity, comp)


def chain_category(n: int) -> FinCat:
    """The poset [n] = {0 < 1 < ... < n}."""
    return poset_category("[%d]" % n, [str(i) for i in range(n + 1)],
                          lambda a, b: int(a) <= int(b))


def discrete_category(name, elements) -> FinCat:
    return poset_category(name, elements, lambda a, b: a == b)


def product_category(c: FinCat, d: FinCat) -> FinCat:
    objs = ["(%s,%s)" % (x, y) for x in c.objects for y in d.objects]
    mors, identity, comp = [], {}, {}
    mid = {}
    for f in c.morphisms:
        for g in d.morphisms:
            m = "(%s,%s)" % (f.id, g.id)
            mid[(f.id, g.id)] = m
            mors.append(Mor(m, "(%s,%s)" % (f.dom, g.dom), "(%s,%s)" % (f.cod, g.cod)))
    for x in c.objects:
        for y in d.objects:
            identity["(%s,%s)" % (x, y)] = mid[(c.id_of(x), d.id_of(y))]
    for (f1, g1), m1 in mid.items():
        for (f2, g2), m2 in mid.items():
            if c.cod(f2) == c.dom(f1) and d.cod(g2) == d.dom(g1):
                comp[(m1, m2)] = mid[(c.comp(f1, f2), d.comp(g1, g2))]
    return FinCat.build("%sx%s" % (c.name, d.name), objs, mors, identity, comp,
                        full_check=False)


# ---------------------------------------------------------------------------
# functors, natural transformations, adjunctions


class FinFunctor:
    def __init__(self, name, source: FinCat, target: FinCat, object_map, morphism_map):
        self.name = name
        self.source = source
        self.target = target
        self.object_map = dict(object_map)
        self.morphism_map = dict(morphism_map)

    def ob(self, x: str) -> str:
        return self.object_map[x]

    def mo(self, m: str) -> str:
        return self.morphism_map[m]

    def validate(self) -> "FinFunctor":
        s, t = self.source, self.target
        for x in s.objects:
            if self.object_map.get(x) not in t.objects:
                raise InvalidFunctor("object %r not mapped into target" % x)
        for m in s.morphisms:
            fm = self.morphism_map.get(m.id)
            if fm is None or fm not in t._mor_by_id:
                raise InvalidFunctor("morphism %r not mapped" % m.id)
            if t.dom(fm) != self.ob(m.dom) or t.cod(fm) != self.ob(m.cod):
                raise InvalidFunctor("functor breaks dom/cod at %r" % m.id)
        for x in s.objects:
            if self.mo(s.id_of(x)) != t.id_of(self.ob(x)):
                raise InvalidFunctor("functor breaks identity at %r" % x)
        for (g, f), h in s.compose_table.items():
            if t.comp(self.mo(g), self.mo(f)) != self.mo(h):
                raise InvalidFunctor("functor breaks composition at (%r, %r)" % (g, f))
        return self

    def __call__(self, x):
        return self.object_map[x] if x in self.object_map else self.morphism_map[x]

    def then(self, other: "FinFunctor") -> "FinFunctor":
        if other.source is not self.target and not (
                other.source.objects == self.target.objects
                and set(other.source._mor_by_id) == set(self.target._mor_by_id)):
            raise EndpointMismatch("functors not composable")
        return FinFunctor("%s;%s" % (self.name, other.name), self.source, other.target,
                          {x: other.ob(y) for x, y in self.object_map.items()},
                          {m: other.mo(n) for m, n in self.morphism_map.items()})

    def key(self):
        return (tuple(sorted(self.object_map.items())),
                tuple(sorted(self.morphism_map.items())))

    @staticmethod
    def identity(c: FinCat) -> "FinFunctor":
        return FinFunctor("id", c, c, {x: x for x in c.objects},
                          {m.id: m.id for m in c.morphisms})

    @staticmethod
    def constant(source: FinCat, target: FinCat, obj: str) -> "FinFunctor":
        return FinFunctor("const_%s" % obj, source, target,
                          {x: obj for x in source.objects},
                          {m.id: target.id_of(obj) for m in source.morphisms})


class NatTransf:
    """Components x -> morphism F(x) -> G(x) of the target category."""

    def __init__(self, source: FinFunctor, target: FinFunctor, components):
        self.source = source
        self.target = target
        self.components = dict(components)

    def at(self, x: str) -> str:
        return self.components[x]

    def validate(self) -> "NatTransf":
        F, G = self.source, self.target
        if F.source is not G.source or F.target is not G.target:
            raise EndpointMismatch("natural transformation endpoints differ")
        t = F.target
        for x in F.source.objects:
            c = self.components.get(x)
            if c is None or t.dom(c) != F.ob(x) or t.cod(c) != G.ob(x):
                raise InvalidNatTransf("component at %r has wrong endpoints" % x)
        for m in F.source.morphisms:
            left = t.comp(self.at(m.cod), F.mo(m.id))
            right = t.comp(G.mo(m.id), self.at(m.dom))
            if left != right:
                raise InvalidNatTransf("naturality fails at %r" % m.id)
        return self


def all_functors(source: FinCat, target: FinCat):
    """Enumerate every functor source -> target in canonical order."""
    objs = list(source.objects)
    results = []
    for images in itertools.product(target.objects, repeat=len(objs)):
        omap = dict(zip(objs, images))
        # extend over morphisms by backtracking
        mors = [m for m in source.morphisms if not source.is_identity(m.id)]
        mmap = {source.id_of(x): target.id_of(omap[x]) for x in objs}

        def extend(k):
            if k == len(mors):
                f = FinFunctor("F", source, target, omap, dict(mmap))
                try:
                    f.validate()
                except InvalidFunctor:
                    return
                results.append(f)
                return
            m = mors[k]
            for im in target.hom(omap[m.dom], omap[m.cod]):
                mmap[m.id] = im
                ok = True
                # partial composition check against already-assigned ones
                for n in mors[:k] + [m]:
                    if n.cod == m.dom and (m.id, n.id) in source.compose_table:
                        c = source.comp(m.id, n.id)
                        if c in mmap and target.comp(mmap[m.id], mmap[n.id]) != mmap[c]:
                            ok = False
                            break
                    if m.cod == n.dom and (n.id, m.id) in source.compose_table:
                        c = source.comp(n.id, m.id)
                        if c in mmap and target.comp(mmap[n.id], mmap[m.id]) != mmap[c]:
                            ok = False
                            break
                if ok:
                    extend(k + 1)
                del mmap[m.id]

        extend(0)
    return results


def all_nat_transfs(F: FinFunctor, G: FinFunctor):
    """Enumerate natural transformations F => G."""
    t = F.target
    xs = list(F.source.objects)
    choices = [t.hom(F.ob(x), G.ob(x)) for x in xs]
    out = []
    for combo in itertools.product(*choices):
        comps = dict(zip(xs, combo))
        try:
            out.append(NatTransf(F, G, comps).validate())
        except (InvalidNatTransf, EndpointMismatch):
            pass
    return out


@dataclass
class AdjunctionWitness:
    left: FinFunctor   # L : C -> D
    right: FinFunctor  # R : D -> C
    unit: NatTransf    # id_C => R o L
    counit: NatTransf  # L o R => id_D


def check_adjunction(w: AdjunctionWitness):
    """Verify both triangle identities; returns (ok, failing description)."""
    L, R = w.left, w.right
    if L.source is not R.target or L.target is not R.source:
        raise EndpointMismatch("left/right functors do not close")
    C, D = L.source, L.target
    for x in C.objects:
        # counit_{L x} o L(unit_x) = id_{L x}
        lhs = D.comp(w.counit.at(L.ob(x)), L.mo(w.unit.at(x)))
        if lhs != D.id_of(L.ob(x)):
            return False, ("triangle L at %r" % x)
    for y in D.objects:
        # R(counit_y) o unit_{R y} = id_{R y}
        lhs = C.comp(R.mo(w.counit.at(y)), w.unit.at(R.ob(y)))
        if lhs != C.id_of(R.ob(y)):
            return False, ("triangle R at %r" % y)
    return True, None


# ---------------------------------------------------------------------------
# comma constructions


def comma_category(F: FinFunctor, G: FinFunctor):
    """Comma category of F : A -> C and G : B -> C.

    Objects are triples (a, b, phi : F a -> G b); a morphism
    (a,b,phi) -> (a',b',phi') is a pair (u : a -> a', v : b -> b') with
    phi' o F u = G v o phi.  Returns (category, projection to A,
    projection to B, key->id maps).
    """
    if F.target is not G.target and F.target.name != G.target.name:
        raise TargetMismatch("comma factors must share a target")
    A, B, C = F.source, G.source, F.target
    objs, okey = [], {}
    for a in A.objects:
        for b in B.objects:
            for phi in C.hom(F.ob(a), G.ob(b)):
                oid = "(%s|%s|%s)" % (a, b, phi)
                okey[(a, b, phi)] = oid
                objs.append(oid)
    mors, mkey, identity = [], {}, {}
    for (a, b, phi), oid in okey.items():
        for (a2, b2, phi2), oid2 in okey.items():
            for u in A.hom(a, a2):
                for v in B.hom(b, b2):
                    if C.comp(phi2, F.mo(u)) == C.comp(G.mo(v), phi):
                        mid = "(%s|%s):%s->%s" % (u, v, oid, oid2)
                        mkey[(oid, oid2, u, v)] = mid
                        mors.append(Mor(mid, oid, oid2))
                        if u == A.id_of(a) and v == B.id_of(b) and oid == oid2:
                            identity[oid] = mid
    comp = {}
    by_src = {}
    for (o1, o2, u, v), mid in mkey.items():
        by_src.setdefault(o1, []).append((o1, o2, u, v, mid))
    for (o1, o2, u, v), mid in mkey.items():
        for (p1, p2, u2, v2, mid2) in by_src.get(o2, []):
            comp[(mkey[(o2, p2, u2, v2)], mid)] = mkey[(o1, p2, A.comp(u2, u), B.comp(v2, v))]
    cat = FinCat.build("(%s/%s)" % (F.name, G.name), objs, mors, identity, comp,
                       full_check=False)
    proj_a = FinFunctor("pr1", cat, A,
                        {okey[k]: k[0] for k in okey},
                        {mid: u for (o1, o2, u, v), mid in mkey.items()})
    proj_b = FinFunctor("pr2", cat, B,
                        {okey[k]: k[1] for k in okey},
                        {mid: v for (o1, o2, u, v), mid in mkey.items()})
    return cat, proj_a, proj_b, okey, mkey


def const_functor_at(c: FinCat, j: str) -> FinFunctor:
    if j not in c.objects:
        raise ObjectNotInTarget("object %r not in %r" % (j, c.name))
    pt = terminal_category()
    return FinFunctor("<%s>" % j, pt, c, {"*": j}, {"id_*": c.id_of(j)})


def slice_under(j: str, alpha: FinFunctor):
    """The comma category j x_{/J} I for alpha : I -> J, with projection to I.

    Objects are pairs (i, phi : j -> alpha(i)).
    """
    if j not in alpha.target.objects:
        raise ObjectNotInTarget("object %r not in %r" % (j, alpha.target.name))
    cat, _, proj, okey, mkey = comma_category(const_functor_at(alpha.target, j), alpha)
    return cat, proj, okey, mkey


def slice_over(alpha: FinFunctor, j: str):
    """The comma category I x_{/J} j: pairs (i, phi : alpha(i) -> j)."""
    if j not in alpha.target.objects:
        raise ObjectNotInTarget("object %r not in %r" % (j, alpha.target.name))
    cat, proj, _, okey, mkey = comma_category(alpha, const_functor_at(alpha.target, j))
    return cat, proj, okey, mkey


def fiber(alpha: FinFunctor, j: str):
    """Full subcategory of I on objects over j and morphisms over id_j."""
    I, J = alpha.source, alpha.target
    if j not in J.objects:
        raise ObjectNotInTarget("object %r not in %r" % (j, J.name))
    objs = [x for x in I.objects if alpha.ob(x) == j]
    keep = [m for m in I.morphisms
            if m.dom in objs and m.cod in objs and alpha.mo(m.id) == J.id_of(j)]
    ids = {m.id for m in keep}
    comp = {(g, f): h for (g, f), h in I.compose_table.items()
            if g in ids and f in ids and h in ids}
    identity = {x: I.id_of(x) for x in objs}
    cat = FinCat.build("%s_%s" % (I.name, j), objs, keep, identity, comp)
    incl = FinFunctor("incl", cat, I, {x: x for x in objs}, {m.id: m.id for m in keep})
    return cat, incl


def detect_extremal(c: FinCat) -> dict:
    """Find an initial and/or a final object (unique arrow to/from all)."""
    initial = final = None
    for x in c.objects:
        if all(len(c.hom(x, y)) == 1 for y in c.objects):
            initial = x
            break
    for x in c.objects:
        if all(len(c.hom(y, x)) == 1 for y in c.objects):
            final = x
            break
    return {"initial": initial, "final": final}


# ---------------------------------------------------------------------------
# fibration checks


def _cocartesian(alpha: FinFunctor, m: str) -> bool:
    I, J = alpha.source, alpha.target
    i, i2 = I.dom(m), I.cod(m)
    g = alpha.mo(m)
    for m2 in I.out(i):
        # factorisations h of alpha(m2) through g
        for h in J.hom(J.cod(g), alpha.ob(I.cod(m2))):
            if J.comp(h, g) != alpha.mo(m2):
                continue
            lifts = [u for u in I.hom(i2, I.cod(m2))
                     if alpha.mo(u) == h and I.comp(u, m) == m2]
            if len(lifts) != 1:
                return False
    return True


def is_opfibration(alpha: FinFunctor):
    """Exhaustive cocartesian-lift search.  Returns (bool, witness).

    On success the witness maps (object, target morphism) to the chosen
    cocartesian lift; on failure it is the offending pair.
    """
    I, J = alpha.source, alpha.target
    witness = {}
    for i in I.objects:
        for g in J.out(alpha.ob(i)):
            lift = None
            for m in I.out(i):
                if alpha.mo(m) == g and _cocartesian(alpha, m):
                    lift = m
                    break
            if lift is None:
                return False, (i, g)
            witness[(i, g)] = lift
    return True, witness


def is_fibration(alpha: FinFunctor):
    """Dual of :func:`is_opfibration` (cartesian lifts)."""
    I, J = alpha.source, alpha.target
    op_alpha = FinFunctor(alpha.name + "^op", I.opposite(), J.opposite(),
                          alpha.object_map, alpha.morphism_map)
    return is_opfibration(op_alpha)


# ---------------------------------------------------------------------------
# limits by exhaustion


def _cones(D: FinFunctor):
    """All cones over D, as (apex, legs dict)."""
    J, C = D.source, D.target
    cones = []
    for apex in C.objects:
        legsets = [C.hom(apex, D.ob(j)) for j in J.objects]
        for combo in itertools.product(*legsets):
            legs = dict(zip(J.objects, combo))
            if all(C.comp(D.mo(m.id), legs[m.dom]) == legs[m.cod]
                   for m in J.morphisms):
                cones.append((apex, legs))
    return cones


def limit_cone(D: FinFunctor):
    """Brute-force limit of D : J -> C; returns (apex, legs) or None.

    Universality is verified against every cone; the first universal cone
    in canonical order is returned.
    """
    J, C = D.source, D.target
    cones = _cones(D)
    for apex, legs in cones:
        universal = True
        for apex2, legs2 in cones:
            facts = [u for u in C.hom(apex2, apex)
                     if all(C.comp(legs[j], u) == legs2[j] for j in J.objects)]
            if len(facts) != 1:
                universal = False
                break
        if universal:
            return apex, legs
    return None


def cone_factorization(C: FinCat, limit, legs_from, objects):
    """The unique morphism apex2 -> limit apex through the limit cone."""
    apex, legs = limit
    src = None
    # legs_from: dict j -> morphism from apex2; recover apex2 from any leg
    for j, leg in legs_from.items():
        src = C.dom(leg)
        break
    facts = [u for u in C.hom(src, apex)
             if all(C.comp(legs[j], u) == legs_from[j] for j in objects)]
    if len(facts) != 1:
        return None
    return facts[0]


def _two_object_diagram(C: FinCat, a: str, b: str):
    J = discrete_category("2", ["l", "r"])
    return FinFunctor("D", J, C, {"l": a, "r": b},
                      {J.id_of("l"): C.id_of(a), J.id_of("r"): C.id_of(b)})


def product(C: FinCat, a: str, b: str):
    return limit_cone(_two_object_diagram(C, a, b))


def pullback(C: FinCat, f: str, g: str):
    """Pullback of the cospan dom f -> cod f <- dom g; cod f == cod g."""
    if C.cod(f) != C.cod(g):
        raise DomCodMismatch("pullback needs a cospan")
    J = poset_category("cospan", ["l", "m", "r"],
                       lambda x, y: x == y or y == "m")
    D = FinFunctor("D", J, C,
                   {"l": C.dom(f), "m": C.cod(f), "r": C.dom(g)},
                   {J.id_of("l"): C.id_of(C.dom(f)),
                    J.id_of("m"): C.id_of(C.cod(f)),
                    J.id_of("r"): C.id_of(C.dom(g)),
                    "l<=m": f, "r<=m": g})
    res = limit_cone(D)
    if res is None:
        return None
    apex, legs = res
    return apex, legs["l"], legs["r"]


def wide_pullback(C: FinCat, legs, x: str):
    """Limit of a wide cospan: each `legs[i]` is a morphism into x.

    Returns (apex, projections list) or None.  Duplicate legs are allowed
    and share projections.
    """
    n = len(legs)
    names = ["s%d" % i for i in range(n)]
    J = poset_category("wide", names + ["m"], lambda a, b: a == b or b == "m")
    omap = {"m": x}
    mmap = {J.id_of("m"): C.id_of(x)}
    for nm, leg in zip(names, legs):
        omap[nm] = C.dom(leg)
        mmap[J.id_of(nm)] = C.id_of(C.dom(leg))
        mmap["%s<=m" % nm] = leg
    D = FinFunctor("D", J, C, omap, mmap)
    res = limit_cone(D)
    if res is None:
        return None
    apex, conelegs = res
    return apex, [conelegs[nm] for nm in names]


def is_preorder(c: FinCat) -> bool:
    return all(len(c.hom(x, y)) <= 1 for x in c.objects for y in c.objects)


def preorder_diagnostic(c: FinCat):
    """Binary products everywhere force hom-sets of size <= 1; report when a
    category claims products but is not a preorder."""
    if is_preorder(c):
        return None
    if all(product(c, a, a) is not None for a in c.objects):
        return ("category %r has all self-products but is not a preorder; "
                "finite completeness is impossible" % c.name)
    return None


# ---------------------------------------------------------------------------
# twisted arrows


def twisted_arrow(I: FinCat, variant: str = "tw"):
    """tw(I) / twc(I) with their projections.

    tw(I): objects are the morphisms of I; a morphism nu -> nu' is a pair
    (a : dom nu -> dom nu', b : cod nu' -> cod nu) with nu = b o nu' o a.
    pi1 lands in I, pi3 in I^op.

    twc(I): objects are composable pairs; morphisms are triples (a, b, c)
    filling the displayed ladder; pi1, pi3 both land in I and mu : pi1 => pi3
    is given by the pair's composite.
    """
    if variant == "tw":
        objs = [m.id for m in I.morphisms]
        okey = {m.id: m.id for m in I.morphisms}
        mors, mkey, identity = [], {}, {}
        for nu in I.morphisms:
            for nu2 in I.morphisms:
                for a in I.hom(nu.dom, nu2.dom):
                    for b in I.hom(nu2.cod, nu.cod):
                        if I.comp(b, I.comp(nu2.id, a)) == nu.id:
                            mid = "(%s|%s):%s->%s" % (a, b, nu.id, nu2.id)
                            mkey[(nu.id, nu2.id, a, b)] = mid
                            mors.append(Mor(mid, nu.id, nu2.id))
                            if nu.id == nu2.id and I.is_identity(a) and I.is_identity(b):
                                identity[nu.id] = mid
        comp = {}
        for (o1, o2, a, b), m1 in mkey.items():
            for (p1, p2, a2, b2), m2 in mkey.items():
                if p1 == o2:
                    comp[(m2, m1)] = mkey[(o1, p2, I.comp(a2, a), I.comp(b, b2))]
        cat = FinCat.build("tw(%s)" % I.name, objs, mors, identity, comp,
                           full_check=False)
        pi1 = FinFunctor("pi1", cat, I, {m.id: I.dom(m.id) for m in I.morphisms},
                         {mid: a for (o1, o2, a, b), mid in mkey.items()})
        iop = I.opposite()
        pi3 = FinFunctor("pi3", cat, iop, {m.id: I.cod(m.id) for m in I.morphisms},
                         {mid: b for (o1, o2, a, b), mid in mkey.items()})
        return cat, pi1, pi3, None
    if variant != "twc":
        raise ValueError("variant must be 'tw' or 'twc'")
    pairs = [(f.id, g.id) for f in I.morphisms for g in I.morphisms
             if I.cod(f.id) == I.dom(g.id)]
    okey = {p: "(%s,%s)" % p for p in pairs}
    objs = [okey[p] for p in pairs]
    mors, mkey, identity = [], {}, {}
    for (f1, f2) in pairs:
        for (g1, g2) in pairs:
            for a in I.hom(I.dom(f1), I.dom(g1)):
                for b in I.hom(I.cod(g1), I.cod(f1)):
                    if I.comp(b, I.comp(g1, a)) != f1:
                        continue
                    for c in I.hom(I.cod(f2), I.cod(g2)):
                        if I.comp(c, I.comp(f2, b)) == g2:
                            mid = "(%s|%s|%s):%s->%s" % (a, b, c, okey[(f1, f2)], okey[(g1, g2)])
                            mkey[((f1, f2), (g1, g2), a, b, c)] = mid
                            mors.append(Mor(mid, okey[(f1, f2)], okey[(g1, g2)]))
                            if (f1, f2) == (g1, g2) and I.is_identity(a) \
                                    and I.is_identity(b) and I.is_identity(c):
                                identity[okey[(f1, f2)]] = mid
    comp = {}
    for (o1, o2, a, b, c), m1 in mkey.items():
        for (p1, p2, a2, b2, c2), m2 in mkey.items():
            if p1 == o2:
                comp[(m2, m1)] = mkey[(o1, p2, I.comp(a2, a), I.comp(b, b2), I.comp(c2, c))]
    cat = FinCat.build("twc(%s)" % I.name, objs, mors, identity, comp,
                       full_check=False)
    pi1 = FinFunctor("pi1", cat, I, {okey[p]: I.dom(p[0]) for p in pairs},
                     {mid: k[2] for k, mid in mkey.items()})
    pi3 = FinFunctor("pi3", cat, I, {okey[p]: I.cod(p[1]) for p in pairs},
                     {mid: k[4] for k, mid in mkey.items()})
    mu = NatTransf(pi1, pi3, {okey[(f, g)]: I.comp(g, f) for (f, g) in pairs}).validate()
    return cat, pi1, pi3, mu


# ---------------------------------------------------------------------------
# isomorphism search


def _wl_colors(c: FinCat, rounds: int = 4):
    colors = {}
    for x in c.objects:
        colors[x] = (len(c.out(x)), len(c.into(x)),
                     sorted(len(c.hom(x, y)) for y in c.objects),
                     sorted(len(c.hom(y, x)) for y in c.objects))
    colors = _canon_colors(colors)
    for _ in range(rounds):
        nxt = {}
        for x in c.objects:
            outp = sorted((colors[c.cod(m)] for m in c.out(x)))
            inp = sorted((colors[c.dom(m)] for m in c.into(x)))
            nxt[x] = (colors[x], tuple(outp), tuple(inp))
        colors = _canon_colors(nxt)
    return colors


def _canon_colors(colors):
    vals = sorted(set(map(repr, colors.values())))
    rank = {v: i for i, v in enumerate(vals)}
    return {x: rank[repr(v)] for x, v in colors.items()}


def _mor_profile(c: FinCat, colors):
    prof = {}
    for m in c.morphisms:
        prof[m.id] = (colors[m.dom], colors[m.cod], c.is_identity(m.id),
                      c.is_iso(m.id) is not None)
    return prof


def find_isomorphism(c: FinCat, d: FinCat, max_nodes: int = 2_000_000):
    """Backtracking isomorphism search guided by WL colour refinement.

    Returns a FinFunctor witnessing c ~= d, or None.
    """
    if len(c.objects) != len(d.objects) or len(c.morphisms) != len(d.morphisms):
        return None
    cc, dc = _wl_colors(c), _wl_colors(d)
    if sorted(cc.values()) != sorted(dc.values()):
        return None
    cgroups = {}
    for x, col in cc.items():
        cgroups.setdefault(col, []).append(x)
    dgroups = {}
    for x, col in dc.items():
        dgroups.setdefault(col, []).append(x)
    if any(len(cgroups[k]) != len(dgroups.get(k, [])) for k in cgroups):
        return None
    xs = sorted(c.objects, key=lambda x: (len(cgroups[cc[x]]), cc[x], x))
    assignment = {}
    used = set()
    budget = [max_nodes]

    def feasible(x, y):
        for x2, y2 in assignment.items():
            if len(c.hom(x, x2)) != len(d.hom(y, y2)):
                return False
            if len(c.hom(x2, x)) != len(d.hom(y2, y)):
                return False
        return True

    def match_objects(k):
        if budget[0] <= 0:
            return None
        budget[0] -= 1
        if k == len(xs):
            return match_morphisms()
        x = xs[k]
        for y in dgroups[cc[x]]:
            if y in used or not feasible(x, y):
                continue
            assignment[x] = y
            used.add(y)
            res = match_objects(k + 1)
            if res is not None:
                return res
            del assignment[x]
            used.discard(y)
        return None

    def match_morphisms():
        # per-homset bijections, backtracking with composition checks
        homs = []
        for x in c.objects:
            for y in c.objects:
                hc = c.hom(x, y)
                hd = d.hom(assignment[x], assignment[y])
                if len(hc) != len(hd):
                    return None
                if hc:
                    homs.append((hc, hd))
        mmap = {}

        def consistent(f):
            m = c.mor(f)
            for g in list(mmap):
                n = c.mor(g)
                if n.cod == m.dom:
                    h = c.comp(f, g)
                    if h in mmap and d.comp(mmap[f], mmap[g]) != mmap[h]:
                        return False
                if m.cod == n.dom:
                    h = c.comp(g, f)
                    if h in mmap and d.comp(mmap[g], mmap[f]) != mmap[h]:
                        return False
            return True

        flat = [f for hc, hd in homs for f in hc]
        pool = {f: hd for hc, hd in homs for f in hc}

        def assign(k):
            if budget[0] <= 0:
                return None
            budget[0] -= 1
            if k == len(flat):
                return dict(mmap)
            f = flat[k]
            m = c.mor(f)
            forced = None
            if c.is_identity(f):
                forced = d.id_of(assignment[m.dom])
            for g in ([forced] if forced else pool[f]):
                if g in mmap.values():
                    continue
                mmap[f] = g
                if consistent(f) and assign(k + 1) is not None:
                    return dict(mmap)
                del mmap[f]
            return None

        res = assign(0)
        if res is None:
            return None
        return FinFunctor("iso", c, d, dict(assignment), res)

    out = match_objects(0)
    if out is not None:
        try:
            out.validate()
        except InvalidFunctor:
            return None
    return out


def verify_isomorphism(F: FinFunctor) -> bool:
    """Check that a given functor is bijective on objects and morphisms and
    functorial (a complete isomorphism proof)."""
    try:
        F.validate()
    except InvalidFunctor:
        return False
    if sorted(F.object_map.values()) != sorted(F.target.objects):
        return False
    if sorted(F.morphism_map.values()) != sorted(m.id for m in F.target.morphisms):
        return False
    return True


# ---------------------------------------------------------------------------
# nerve


def nerve_simpset(c: FinCat, trunc: int):
    """Truncated nerve of a finite category; see simplicial.nerve_of_category."""
    from . import simplicial
    return simplicial.nerve_of_category(c, trunc)


# ---------------------------------------------------------------------------
# DOT export


def generators(c: FinCat) -> list:
    """Non-identity morphisms that admit no factorization into two
    non-identity morphisms."""
    out = []
    for m in c.morphisms:
        if c.is_identity(m.id):
            continue
        composite = False
        for (g, f), h in c.compose_table.items():
            if h == m.id and not c.is_identity(g) and not c.is_identity(f) \
                    and g != m.id and f != m.id:
                composite = True
                break
        if not composite:
            out.append(m.id)
    return out


def to_dot(c: FinCat) -> str:
    """Graphviz export: objects as nodes, non-identity generators as edges."""
    gens = set(generators(c))
    lines = ["digraph %s {" % _dot_name(c.name)]
    for x in c.objects:
        lines.append('  "%s";' % x)
    for m in c.morphisms:
        if m.id in gens:
            lines.append('  "%s" -> "%s" [label="%s"];' % (m.dom, m.cod, m.id))
    lines.append("}")
    return "\n".join(lines)


def _dot_name(s: str) -> str:
    return "".join(ch if ch.isalnum() else "_" for ch in s)
