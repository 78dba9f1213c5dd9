"""Truncated simplicial sets and split simplicial objects in the free
coproduct completion of a finite category.

A simplex value is a pair (epi, nd): the nondegenerate simplex `nd` it
collapses onto, together with the order-preserving surjection `epi`
(stored as the tuple of its images).  Every level reconstructs as

    X_n  =  X_{n,nd}  u  u_{[n] ->> [m], n != m}  X_{m,nd}

and all structure maps are derived from the stored face data of the
nondegenerate simplices.  Degeneracies never move labels, so a split
object only stores a label per nondegenerate simplex and a label part
per (simplex, face index).
"""

from __future__ import annotations

import itertools

from .errors import (
    InvalidSimplicial,
    LimitAbsent,
    NonSplitMorphism,
    TruncationExceeded,
)
from . import fincat as fc


# ---------------------------------------------------------------------------
# monotone map utilities ([k] -> [n] stored as the tuple of images)


def mt_id(n):
    return tuple(range(n + 1))


def mt_comp(outer, inner):
    """outer o inner, both monotone tuples."""
    return tuple(outer[i] for i in inner)


def mt_delta(i, n):
    """delta_i : [n-1] -> [n], skipping i."""
    return tuple(j if j < i else j + 1 for j in range(n))


def mt_sigma(j, n):
    """sigma_j : [n+1] -> [n], hitting j twice."""
    return tuple(x if x <= j else x - 1 for x in range(n + 2))


def mt_is_epi(u):
    return set(u) == set(range(max(u) + 1)) if u else False


def mt_is_mono(u):
    return all(u[i] < u[i + 1] for i in range(len(u) - 1))


def epi_mono_factor(u):
    """u = mono o epi with epi an ordered surjection, mono an injection."""
    image = sorted(set(u))
    rank = {v: i for i, v in enumerate(image)}
    return tuple(rank[v] for v in u), tuple(image)


def all_epis(n, m):
    """All order-preserving surjections [n] ->> [m], lexicographic."""
    if m > n or m < 0:
        return []
    out = []
    # tuples of length n+1 over 0..m, start 0, end m, steps in {0, 1}
    for steps in itertools.combinations(range(1, n + 1), m):
        t, v = [0], 0
        for i in range(1, n + 1):
            if i in steps:
                v += 1
            t.append(v)
        out.append(tuple(t))
    return out


def all_monotone(k, n):
    """All order-preserving maps [k] -> [n]."""
    return [t for t in itertools.combinations_with_replacement(range(n + 1), k + 1)]


# ---------------------------------------------------------------------------
# plain truncated simplicial sets


class SimpSet:
    """Truncated simplicial set, stored by nondegenerate simplices.

    `levels[k]` lists nondegenerate simplex ids (globally unique strings);
    `faces[(s, i)]` is the value of d_i(s) as a pair (epi, nd).
    """

    def __init__(self, trunc, levels, faces, name="X"):
        self.trunc = trunc
        self.levels = [tuple(l) for l in levels]
        while len(self.levels) < trunc + 1:
            self.levels.append(())
        self.faces = dict(faces)
        self.name = name
        self.level_of = {}
        for k, ids in enumerate(self.levels):
            for s in ids:
                if s in self.level_of:
                    raise InvalidSimplicial("duplicate simplex id %r" % s)
                self.level_of[s] = k

    def nd_value(self, s):
        return (mt_id(self.level_of[s]), s)

    def value_level(self, v):
        return len(v[0]) - 1

    def face_value(self, s, i):
        return self.faces[(s, i)]

    def apply(self, op, value):
        """Apply the operator op : [k] -> [n] to a value of level n."""
        epi, nd = value
        if len(op) == 0:
            raise InvalidSimplicial("empty operator")
        comp = mt_comp(epi, op)
        e, mono = epi_mono_factor(comp)
        w = self._resolve_mono(mono, nd)
        return (mt_comp(w[0], e), w[1])

    def _resolve_mono(self, mono, nd):
        m = self.level_of[nd]
        if mono == mt_id(m):
            return (mt_id(m), nd)
        missing = max(j for j in range(m + 1) if j not in mono)
        v1 = self.faces[(nd, missing)]
        mono2 = tuple(x if x < missing else x - 1 for x in mono)
        return self.apply(mono2, v1)

    def full_level(self, n):
        """Every simplex of level n as a value, canonically ordered."""
        if n > self.trunc:
            raise TruncationExceeded("level %d beyond truncation %d" % (n, self.trunc))
        out = []
        for m in range(n + 1):
            for e in all_epis(n, m):
                for nd in self.levels[m]:
                    out.append((e, nd))
        return out

    def size(self):
        return sum(len(l) for l in self.levels)

    def validate(self):
        for (s, i), v in self.faces.items():
            k = self.level_of[s]
            if not (0 <= i <= k) or k == 0:
                raise InvalidSimplicial("face index %d invalid at %r" % (i, s))
            epi, nd = v
            if len(epi) != k or nd not in self.level_of:
                raise InvalidSimplicial("malformed face value at (%r,%d)" % (s, i))
            if not mt_is_epi(epi) or max(epi) != self.level_of[nd]:
                raise InvalidSimplicial("face value epi malformed at (%r,%d)" % (s, i))
        for k in range(1, self.trunc + 1):
            for s in self.levels[k]:
                for i in range(k + 1):
                    if (s, i) not in self.faces:
                        raise InvalidSimplicial("missing face (%r,%d)" % (s, i))
        # d_i d_j = d_{j-1} d_i  (i < j)
        for k in range(2, self.trunc + 1):
            for s in self.levels[k]:
                for j in range(1, k + 1):
                    for i in range(j):
                        a = self.apply(mt_delta(i, k - 1), self.faces[(s, j)])
                        b = self.apply(mt_delta(j - 1, k - 1), self.faces[(s, i)])
                        if a != b:
                            raise InvalidSimplicial(
                                "simplicial identity fails at %r (i=%d,j=%d)" % (s, i, j))
        return self

    def __repr__(self):
        return "SimpSet(%s: %s)" % (self.name, [len(l) for l in self.levels])


def simpset_equal(a: SimpSet, b: SimpSet) -> bool:
    """Literal equality: same truncation, same ids per level, same faces."""
    if a.trunc != b.trunc:
        return False
    if any(sorted(x) != sorted(y) for x, y in zip(a.levels, b.levels)):
        return False
    return a.faces == b.faces


# ---------------------------------------------------------------------------
# split simplicial objects


class SplitSimpObj:
    """Split simplicial object over the site category `scat`.

    On top of the underlying SimpSet: `label[nd]` is the carrier object,
    `part[(nd, i)]` the morphism label(nd) -> label(face nd) of d_i.
    """

    def __init__(self, scat: fc.FinCat, uset: SimpSet, label, part, name="X"):
        self.scat = scat
        self.uset = uset
        self.label = dict(label)
        self.part = dict(part)
        self.name = name

    @property
    def trunc(self):
        return self.uset.trunc

    @property
    def levels(self):
        return self.uset.levels

    def nd_value(self, s):
        return self.uset.nd_value(s)

    def value_label(self, v):
        return self.label[v[1]]

    def apply(self, op, value):
        return self.uset.apply(op, value)

    def apply_with_part(self, op, value):
        """Apply op, returning (value, part : label(value) -> label(result))."""
        epi, nd = value
        comp = mt_comp(epi, op)
        e, mono = epi_mono_factor(comp)
        w, p = self._resolve_mono_part(mono, nd)
        return (mt_comp(w[0], e), w[1]), p

    def _resolve_mono_part(self, mono, nd):
        m = self.uset.level_of[nd]
        if mono == mt_id(m):
            return (mt_id(m), nd), self.scat.id_of(self.label[nd])
        missing = max(j for j in range(m + 1) if j not in mono)
        v1 = self.uset.faces[(nd, missing)]
        p1 = self.part[(nd, missing)]
        mono2 = tuple(x if x < missing else x - 1 for x in mono)
        w, p2 = self.apply_with_part(mono2, v1)
        return w, self.scat.comp(p2, p1)

    def full_level(self, n):
        return self.uset.full_level(n)

    def reconstruct_level(self, n):
        """Level n as the canonical list of (m, epi, nd) component triples."""
        if n > self.trunc:
            raise TruncationExceeded("level %d beyond truncation %d" % (n, self.trunc))
        out = []
        for m in range(n + 1):
            for e in all_epis(n, m):
                for nd in self.levels[m]:
                    out.append((m, e, nd))
        return out

    def size(self):
        return self.uset.size()

    def validate(self):
        self.uset.validate()
        for k, ids in enumerate(self.levels):
            for s in ids:
                if self.label.get(s) not in self.scat.objects:
                    raise InvalidSimplicial("missing label at %r" % s)
                for i in range(k + 1):
                    if k == 0:
                        break
                    p = self.part.get((s, i))
                    if p is None:
                        raise InvalidSimplicial("missing part at (%r,%d)" % (s, i))
                    tgt = self.label[self.uset.faces[(s, i)][1]]
                    m = self.scat.mor(p)
                    if m.dom != self.label[s] or m.cod != tgt:
                        raise InvalidSimplicial("part endpoints wrong at (%r,%d)" % (s, i))
        # identity d_i d_j = d_{j-1} d_i also on label parts
        for k in range(2, self.trunc + 1):
            for s in self.levels[k]:
                v = self.nd_value(s)
                for j in range(1, k + 1):
                    for i in range(j):
                        op1 = mt_comp(mt_delta(j, k), mt_delta(i, k - 1))
                        a, pa = self.apply_with_part(op1, v)
                        op2 = mt_comp(mt_delta(i, k), mt_delta(j - 1, k - 1))
                        b, pb = self.apply_with_part(op2, v)
                        if a != b or pa != pb:
                            raise InvalidSimplicial(
                                "split identity fails at %r (i=%d,j=%d)" % (s, i, j))
        return self

    def __repr__(self):
        return "SplitSimpObj(%s: %s)" % (self.name, [len(l) for l in self.levels])


def split_equal(a: SplitSimpObj, b: SplitSimpObj) -> bool:
    return (simpset_equal(a.uset, b.uset) and a.label == b.label
            and a.part == b.part)


# ---------------------------------------------------------------------------
# morphisms


class SimpMap:
    """Simplicial map between truncated simplicial sets: the value of every
    nondegenerate simplex of the source."""

    def __init__(self, src: SimpSet, tgt: SimpSet, val, name="f"):
        self.src = src
        self.tgt = tgt
        self.val = dict(val)
        self.name = name

    def map_value(self, v):
        epi, nd = v
        return self.tgt.apply(epi, self.val[nd])

    def validate(self):
        for k, ids in enumerate(self.src.levels):
            for s in ids:
                w = self.val.get(s)
                if w is None or self.tgt.value_level(w) != k:
                    raise InvalidSimplicial("map misses simplex %r" % s)
                for i in range(k + 1):
                    if k == 0:
                        break
                    a = self.tgt.apply(mt_delta(i, k), w)
                    b = self.map_value(self.src.faces[(s, i)])
                    if a != b:
                        raise InvalidSimplicial("map not simplicial at (%r,%d)" % (s, i))
        return self

    @staticmethod
    def identity(x: SimpSet):
        return SimpMap(x, x, {s: x.nd_value(s) for l in x.levels for s in l}, "id")


class SplitMor:
    """Morphism of split simplicial objects: per nondegenerate simplex a
    target value plus the label part label_src(nd) -> label_tgt(value)."""

    def __init__(self, src: SplitSimpObj, tgt: SplitSimpObj, val, part, name="f"):
        self.src = src
        self.tgt = tgt
        self.val = dict(val)
        self.part = dict(part)
        self.name = name

    def map_value(self, v):
        epi, nd = v
        return self.tgt.apply(epi, self.val[nd])

    def map_value_part(self, v):
        epi, nd = v
        return self.tgt.apply(epi, self.val[nd]), self.part[nd]

    def underlying(self) -> SimpMap:
        return SimpMap(self.src.uset, self.tgt.uset, self.val, self.name)

    def validate(self):
        scat = self.src.scat
        for k, ids in enumerate(self.src.levels):
            for s in ids:
                w = self.val.get(s)
                p = self.part.get(s)
                if w is None or p is None or self.tgt.uset.value_level(w) != k:
                    raise InvalidSimplicial("split map misses simplex %r" % s)
                m = scat.mor(p)
                if m.dom != self.src.label[s] or m.cod != self.tgt.label[w[1]]:
                    raise InvalidSimplicial("split map part endpoints wrong at %r" % s)
                for i in range(k + 1):
                    if k == 0:
                        break
                    a, pa = self.tgt.apply_with_part(mt_delta(i, k), w)
                    pa_tot = scat.comp(pa, p)
                    vv = self.src.uset.faces[(s, i)]
                    q = self.src.part[(s, i)]
                    b, pb = self.map_value_part(vv)
                    pb_tot = scat.comp(pb, q)
                    if a != b or pa_tot != pb_tot:
                        raise InvalidSimplicial("split map not simplicial at (%r,%d)" % (s, i))
        return self

    def is_levelwise_split(self):
        """True when every level map is a coproduct injection after
        reconstruction (injective with identity parts)."""
        for s in self.part:
            if not self.src.scat.is_identity(self.part[s]):
                return False
        for n in range(self.src.trunc + 1):
            seen = set()
            for v in self.src.full_level(n):
                w = self.map_value(v)
                if w in seen:
                    return False
                seen.add(w)
        return True

    @staticmethod
    def identity(x: SplitSimpObj):
        return SplitMor(x, x, {s: x.nd_value(s) for l in x.levels for s in l},
                        {s: x.scat.id_of(x.label[s]) for l in x.levels for s in l},
                        "id")

    def then(self, other: "SplitMor") -> "SplitMor":
        scat = self.src.scat
        val, part = {}, {}
        for l in self.src.levels:
            for s in l:
                w, p = other.map_value_part(self.val[s])
                val[s] = w
                part[s] = scat.comp(p, self.part[s])
        return SplitMor(self.src, other.tgt, val, part,
                        "%s;%s" % (self.name, other.name))


# ---------------------------------------------------------------------------
# generic constructors from full-level presentations


def from_full_levels(trunc, levels, face_fn, degen_fn, id_fn=None, name="X"):
    """Build a SimpSet from full levels and elementary structure maps.

    `levels[n]` lists hashable elements; `face_fn(n, i, e)` and
    `degen_fn(n, j, e)` give d_i e (level n-1) and s_j e (level n+1).
    """
    canon = {}
    nd_levels = [[] for _ in range(trunc + 1)]
    ids = {}

    def default_id(n, e):
        return "%s[%d]#%d" % (name, n, len(nd_levels[n]))

    id_fn = id_fn or default_id
    for n in range(trunc + 1):
        marks = {}
        if n > 0:
            for j in range(n):
                for y in levels[n - 1]:
                    marks.setdefault(degen_fn(n - 1, j, y), (j, y))
        for e in levels[n]:
            if e in marks:
                j, y = marks[e]
                ey, ndy = canon[(n - 1, y)]
                canon[(n, e)] = (mt_comp(ey, mt_sigma(j, n - 1)), ndy)
            else:
                sid = id_fn(n, e)
                ids[(n, e)] = sid
                nd_levels[n].append(sid)
                canon[(n, e)] = (mt_id(n), sid)
    faces = {}
    for n in range(1, trunc + 1):
        for e in levels[n]:
            if (n, e) in ids:
                for i in range(n + 1):
                    faces[(ids[(n, e)], i)] = canon[(n - 1, face_fn(n, i, e))]
    sset = SimpSet(trunc, nd_levels, faces, name).validate()
    elem_of = {v: k for k, v in ids.items()}
    return sset, canon, ids, elem_of


def from_full_levels_split(scat, trunc, levels, face_fn, degen_fn,
                           label_fn, part_fn, id_fn=None, name="X"):
    """Split variant: `label_fn(e)` and `part_fn(n, i, e)` supply carrier
    objects and face label-parts.  Degeneracies must preserve labels."""
    sset, canon, ids, elem_of = from_full_levels(
        trunc, levels, face_fn, degen_fn, id_fn, name)
    label, part = {}, {}
    for (n, e), sid in ids.items():
        label[sid] = label_fn(e)
        for i in range(n + 1):
            if n == 0:
                break
            part[(sid, i)] = part_fn(n, i, e)
    obj = SplitSimpObj(scat, sset, label, part, name).validate()
    return obj, canon, ids, elem_of


# ---------------------------------------------------------------------------
# standard simplicial sets


def delta_simpset(n, trunc, name=None):
    """Standard simplex Delta_n, truncated."""
    levels = [[] for _ in range(trunc + 1)]
    for k in range(min(n, trunc) + 1):
        levels[k] = ["(%s)" % ",".join(map(str, t))
                     for t in itertools.combinations(range(n + 1), k + 1)]
    faces = {}
    for k in range(1, min(n, trunc) + 1):
        for t in itertools.combinations(range(n + 1), k + 1):
            sid = "(%s)" % ",".join(map(str, t))
            for i in range(k + 1):
                sub = t[:i] + t[i + 1:]
                faces[(sid, i)] = (mt_id(k - 1), "(%s)" % ",".join(map(str, sub)))
    return SimpSet(trunc, levels, faces, name or ("D%d" % n)).validate()


def boundary_delta(n, trunc, name=None):
    """The boundary of Delta_n (all proper faces)."""
    full = delta_simpset(n, trunc, name or ("dD%d" % n))
    top = "(%s)" % ",".join(map(str, range(n + 1)))
    return subcomplex(full, [s for l in full.levels for s in l if s != top],
                      name or ("dD%d" % n))


def subcomplex(x: SimpSet, keep_nds, name="A"):
    """Full subcomplex on a face-closed set of nondegenerate simplices."""
    keep = set(keep_nds)
    # close downward under faces
    changed = True
    while changed:
        changed = False
        for s in list(keep):
            k = x.level_of[s]
            for i in range(k + 1):
                if k == 0:
                    break
                nd = x.faces[(s, i)][1]
                if nd not in keep:
                    keep.add(nd)
                    changed = True
    levels = [[s for s in l if s in keep] for l in x.levels]
    faces = {(s, i): v for (s, i), v in x.faces.items() if s in keep}
    return SimpSet(x.trunc, levels, faces, name).validate()


def inclusion_map(a: SimpSet, b: SimpSet) -> SimpMap:
    """Inclusion of a subcomplex whose simplex ids are shared with b."""
    return SimpMap(a, b, {s: b.nd_value(s) for l in a.levels for s in l}, "incl").validate()


def simpset_product(a: SimpSet, b: SimpSet, name=None):
    """Product simplicial set, normalized (jointly nondegenerate pairs)."""
    trunc = min(a.trunc, b.trunc)
    levels = [[(u, v) for u in a.full_level(n) for v in b.full_level(n)]
              for n in range(trunc + 1)]

    def face_fn(n, i, e):
        return (a.apply(mt_delta(i, n), e[0]), b.apply(mt_delta(i, n), e[1]))

    def degen_fn(n, j, e):
        return (a.apply(mt_sigma(j, n), e[0]), b.apply(mt_sigma(j, n), e[1]))

    sset, canon, ids, elem_of = from_full_levels(
        trunc, levels, face_fn, degen_fn, None, name or ("%sx%s" % (a.name, b.name)))
    return sset, canon, ids, elem_of


def prism_horn(n, e, trunc):
    """Lambda_e(Delta_n x Delta_1) inside Delta_n x Delta_1.

    Returns (horn subcomplex, full product, product bookkeeping).
    """
    dn = delta_simpset(n, trunc)
    d1 = delta_simpset(1, trunc)
    prod, canon, ids, elem_of = simpset_product(dn, d1, "D%dxD1" % n)
    full_vertex_set = set(range(n + 1))
    keep = []
    for (lev, elem), sid in ids.items():
        u, v = elem
        k_vertices = set(int(t) for t in u[1].strip("()").split(","))
        l_vertices = set(int(t) for t in v[1].strip("()").split(","))
        if l_vertices == {e} or k_vertices != full_vertex_set:
            keep.append(sid)
    horn = subcomplex(prod, keep, "L%d(D%dxD1)" % (e, n))
    return horn, prod, (canon, ids, elem_of)


# ---------------------------------------------------------------------------
# constant objects, coproducts, tensor


def constant_split(scat: fc.FinCat, s: str, trunc: int, name=None) -> SplitSimpObj:
    name = name or ("c(%s)" % s)
    sid = "%s.v" % name
    sset = SimpSet(trunc, [[sid]] + [[] for _ in range(trunc)], {}, name)
    return SplitSimpObj(scat, sset, {sid: s}, {}, name).validate()


def coproduct_split(parts, name="U"):
    """Disjoint union of split objects over the same site category."""
    scat = parts[0].scat
    trunc = parts[0].trunc
    levels = [[] for _ in range(trunc + 1)]
    faces, label, part = {}, {}, {}
    for idx, p in enumerate(parts):
        if p.trunc != trunc:
            raise TruncationExceeded("coproduct of mismatched truncations")
        pref = "%d:" % idx
        for k, ids in enumerate(p.levels):
            for s in ids:
                levels[k].append(pref + s)
                label[pref + s] = p.label[s]
        for (s, i), (e, nd) in p.uset.faces.items():
            faces[(pref + s, i)] = (e, pref + nd)
        for (s, i), q in p.part.items():
            part[(pref + s, i)] = q
    sset = SimpSet(trunc, levels, faces, name)
    return SplitSimpObj(scat, sset, label, part, name).validate()


def as_split(scat: fc.FinCat, x: SimpSet, s: str, name=None) -> SplitSimpObj:
    """A plain simplicial set regarded as a split object with constant
    carrier s (all parts identities)."""
    label = {nd: s for l in x.levels for nd in l}
    part = {(nd, i): scat.id_of(s)
            for k, l in enumerate(x.levels) if k > 0 for nd in l for i in range(k + 1)}
    return SplitSimpObj(scat, x, label, part, name or x.name).validate()


def tensor(k: SimpSet, x: SplitSimpObj, name=None) -> SplitSimpObj:
    """Levelwise (K tensor X)_n = a copy of X_n per n-simplex of K,
    normalized to jointly nondegenerate pairs.

    The result carries `nd_elem` (nondegenerate id -> (level, pair)) and
    `elem_canon` ((level, pair) -> value) for exact pair bookkeeping.
    """
    trunc = min(k.trunc, x.trunc)
    levels = [[(u, v) for u in k.full_level(n) for v in x.full_level(n)]
              for n in range(trunc + 1)]

    def face_fn(n, i, e):
        return (k.apply(mt_delta(i, n), e[0]), x.apply(mt_delta(i, n), e[1]))

    def degen_fn(n, j, e):
        return (k.apply(mt_sigma(j, n), e[0]), x.apply(mt_sigma(j, n), e[1]))

    def label_fn(e):
        return x.label[e[1][1]]

    def part_fn(n, i, e):
        _, p = x.apply_with_part(mt_delta(i, n), e[1])
        return p

    obj, canon, ids, elem_of = from_full_levels_split(
        x.scat, trunc, levels, face_fn, degen_fn, label_fn, part_fn, None,
        name or ("%s(x)%s" % (k.name, x.name)))
    obj.nd_elem = elem_of
    obj.elem_canon = canon
    return obj


def tensor_value(kx: SplitSimpObj, u, w):
    """Canonical value of the pair (u, w) inside a tensor built by
    :func:`tensor`."""
    n = len(u[0]) - 1
    return kx.elem_canon[(n, (u, w))]


def tensor_mor(k: SimpSet, f: SplitMor, ka=None, kb=None, name=None) -> SplitMor:
    """K tensor f : K tensor A -> K tensor B."""
    ka = ka or tensor(k, f.src)
    kb = kb or tensor(k, f.tgt)
    val, part = {}, {}
    for lev, ids in enumerate(ka.levels):
        for sid in ids:
            u, v = ka.nd_elem[sid][1]
            w, p = f.map_value_part(v)
            val[sid] = tensor_value(kb, u, w)
            part[sid] = p
    return SplitMor(ka, kb, val, part, name or ("K(x)%s" % f.name)).validate()


# ---------------------------------------------------------------------------
# bisimplicial presentations and the diagonal


class BisimpSplit:
    """A doubly simplicial presentation: full levels plus elementary
    structure maps in both directions, with labels on elements.

    `elems(n, m)` lists the elements of bidegree (n, m); horizontal maps
    act on n, vertical on m.  Parts follow the vertical/horizontal faces.
    """

    def __init__(self, scat, trunc, elems, hface, hdegen, vface, vdegen,
                 label, hpart, vpart, name="B"):
        self.scat = scat
        self.trunc = trunc
        self.elems = elems
        self.hface = hface
        self.hdegen = hdegen
        self.vface = vface
        self.vdegen = vdegen
        self.label = label
        self.hpart = hpart
        self.vpart = vpart
        self.name = name

    def validate_sample(self):
        """Spot-check the two simplicial directions and their commutation.

        Structure maps take (n, m, index, element) where (n, m) is the
        bidegree of the element itself.
        """
        t = self.trunc
        for n in range(1, t + 1):
            for m in range(1, t + 1):
                for e in self.elems(n, m):
                    for i in range(n + 1):
                        for j in range(m + 1):
                            a = self.vface(n - 1, m, j, self.hface(n, m, i, e))
                            b = self.hface(n, m - 1, i, self.vface(n, m, j, e))
                            if a != b:
                                raise InvalidSimplicial(
                                    "bisimplicial commutation fails at %r" % (e,))
        return self


def external_product(a: SimpSet, b: SimpSet):
    """Set-level external product a [x] b as a bisimplicial presentation."""
    trunc = min(a.trunc, b.trunc)

    def elems(n, m):
        return [(u, v) for u in a.full_level(n) for v in b.full_level(m)]

    def hface(n, m, i, e):
        return (a.apply(mt_delta(i, n), e[0]), e[1])

    def hdegen(n, m, j, e):
        return (a.apply(mt_sigma(j, n), e[0]), e[1])

    def vface(n, m, j, e):
        return (e[0], b.apply(mt_delta(j, m), e[1]))

    def vdegen(n, m, j, e):
        return (e[0], b.apply(mt_sigma(j, m), e[1]))

    return BisimpSplit(None, trunc, elems, hface, hdegen, vface, vdegen,
                       None, None, None, "%s[x]%s" % (a.name, b.name))


def diagonal(bi: BisimpSplit, name=None):
    """Diagonal split object: level n is the bidegree (n, n) part."""
    trunc = bi.trunc
    levels = [list(bi.elems(n, n)) for n in range(trunc + 1)]

    def face_fn(n, i, e):
        return bi.vface(n - 1, n, i, bi.hface(n, n, i, e))

    def degen_fn(n, j, e):
        return bi.vdegen(n + 1, n, j, bi.hdegen(n, n, j, e))

    if bi.label is None:
        sset, canon, ids, elem_of = from_full_levels(
            trunc, levels, face_fn, degen_fn, None, name or ("diag(%s)" % bi.name))
        return sset, canon, ids, elem_of

    def label_fn(e):
        return bi.label(e)

    def part_fn(n, i, e):
        p1 = bi.hpart(n, n, i, e)
        e1 = bi.hface(n, n, i, e)
        p2 = bi.vpart(n - 1, n, i, e1)
        return bi.scat.comp(p2, p1)

    obj, canon, ids, elem_of = from_full_levels_split(
        bi.scat, trunc, levels, face_fn, degen_fn, label_fn, part_fn, None,
        name or ("diag(%s)" % bi.name))
    return obj, canon, ids, elem_of


# ---------------------------------------------------------------------------
# pushouts along split maps and the pushout product


def pushout_along_split(f: SplitMor, g: SplitMor, name=None):
    """Pushout of C <-g- A -f-> B where f is levelwise split.

    Returns (P, in_b : B -> P, in_c : C -> P).
    """
    if f.src is not g.src and not split_equal(f.src, g.src):
        raise NonSplitMorphism("pushout legs must share their source")
    if not f.is_levelwise_split():
        raise NonSplitMorphism("first leg is not levelwise split")
    a, b, c = f.src, f.tgt, g.tgt
    scat = a.scat
    fimg = {}
    for l in a.levels:
        for s in l:
            w = f.val[s]
            if w[0] != mt_id(len(w[0]) - 1):
                raise NonSplitMorphism("split leg maps %r to a degenerate value" % s)
            fimg[w[1]] = s
    trunc = a.trunc
    levels = [[] for _ in range(trunc + 1)]
    faces, label, part = {}, {}, {}
    cpre, bpre = "C:", "B:"
    for k, ids in enumerate(c.levels):
        for s in ids:
            levels[k].append(cpre + s)
            label[cpre + s] = c.label[s]
    for (s, i), (e, nd) in c.uset.faces.items():
        faces[(cpre + s, i)] = (e, cpre + nd)
        part[(cpre + s, i)] = c.part[(s, i)]

    def route_b_value(v, p):
        """Value (and accumulated part) of a B-value inside the pushout."""
        e, nd = v
        if nd in fimg:
            aa = fimg[nd]
            w, q = g.map_value_part(a.nd_value(aa))
            # f has identity parts, so label_a(aa) == label_b(nd)
            return (mt_comp(w[0], e), cpre + w[1]), scat.comp(q, p)
        return (e, bpre + nd), p

    for k, ids in enumerate(b.levels):
        for s in ids:
            if s in fimg:
                continue
            levels[k].append(bpre + s)
            label[bpre + s] = b.label[s]
            for i in range(k + 1):
                if k == 0:
                    break
                (v, p) = b.uset.faces[(s, i)], b.part[(s, i)]
                faces[(bpre + s, i)], part[(bpre + s, i)] = route_b_value(v, p)
    sset = SimpSet(trunc, levels, faces, name or "P")
    p_obj = SplitSimpObj(scat, sset, label, part, name or "P").validate()
    in_c = SplitMor(c, p_obj, {s: (mt_id(c.uset.level_of[s]), cpre + s)
                               for l in c.levels for s in l},
                    {s: scat.id_of(c.label[s]) for l in c.levels for s in l},
                    "in_C").validate()
    bval, bpart = {}, {}
    for l in b.levels:
        for s in l:
            if s in fimg:
                w, q = g.map_value_part(a.nd_value(fimg[s]))
                bval[s] = (w[0], cpre + w[1])
                bpart[s] = q
            else:
                bval[s] = (mt_id(b.uset.level_of[s]), bpre + s)
                bpart[s] = scat.id_of(b.label[s])
    in_b = SplitMor(b, p_obj, bval, bpart, "in_B").validate()
    return p_obj, in_b, in_c


def pushout_product(l: SimpSet, k: SimpSet, f: SplitMor, name=None):
    """(L -> K) pushout-product f for a subcomplex inclusion L of K.

    Returns (domain object P, comparison SplitMor P -> K tensor B).
    """
    la = tensor(l, f.src)
    ka = tensor(k, f.src)
    lb = tensor(l, f.tgt)
    lb_mor = tensor_mor(l, f, la, lb)
    # inclusion L tensor A -> K tensor A: pair elements are shared
    val, part = {}, {}
    for lev, ids in enumerate(la.levels):
        for sid in ids:
            u, v = la.nd_elem[sid][1]
            val[sid] = tensor_value(ka, u, v)
            part[sid] = la.scat.id_of(la.label[sid])
    incl = SplitMor(la, ka, val, part, "L(x)A->K(x)A").validate()
    p_obj, in_ka, in_lb = pushout_along_split(incl, lb_mor, name or "pp")
    kb = tensor(k, f.tgt)
    cval, cpart = {}, {}
    for lev, ids in enumerate(p_obj.levels):
        for sid in ids:
            if sid.startswith("C:"):
                u, v = lb.nd_elem[sid[2:]][1]
                cval[sid] = tensor_value(kb, u, v)
                cpart[sid] = p_obj.scat.id_of(p_obj.label[sid])
            else:
                u, v = ka.nd_elem[sid[2:]][1]
                w, p = f.map_value_part(v)
                cval[sid] = tensor_value(kb, u, w)
                cpart[sid] = p
    cmp_mor = SplitMor(p_obj, kb, cval, cpart, "pp-cmp").validate()
    return p_obj, cmp_mor


def prism_inclusion(n, e, scat, s, trunc):
    """Lambda_e(Delta_n x Delta_1) tensor s -> (Delta_n x Delta_1) tensor s."""
    horn, prod, _ = prism_horn(n, e, trunc)
    xs = constant_split(scat, s, trunc)
    hx = tensor(horn, xs)
    px = tensor(prod, xs)
    val, part = {}, {}
    for lev, ids in enumerate(hx.levels):
        for sid in ids:
            u, v = hx.nd_elem[sid][1]
            val[sid] = tensor_value(px, u, v)
            part[sid] = scat.id_of(hx.label[sid])
    return SplitMor(hx, px, val, part, "prism%d,%d" % (n, e)).validate()


# ---------------------------------------------------------------------------
# Cech covers


def cech_cover(site, family, trunc, name=None):
    """The Cech object of a covering family (list of morphism ids into a
    common single object X), with its augmentation to the constant X.

    Level n is the (n+1)-fold fiber power of u U^(i) over X, so level 0 is
    the coproduct itself.  Requires every leg to be a monomorphism so that
    the canonical wide pullbacks give a genuinely split presentation.
    """
    cat = site.cat
    if not family:
        raise LimitAbsent("empty covering family")
    x = cat.cod(family[0])
    if any(cat.cod(m) != x for m in family):
        raise LimitAbsent("covering family legs must share their target")
    for m in family:
        if not cat.is_mono(m):
            raise NonSplitMorphism(
                "leg %r is not mono; the Cech object would not be split" % m)
    apexes = {}

    def apex_of(tset):
        legs = tuple(sorted(set(family[i] for i in tset)))
        if legs not in apexes:
            res = fc.wide_pullback(cat, list(legs), x)
            if res is None:
                raise LimitAbsent("missing wide pullback of %r" % (legs,))
            apexes[legs] = (res[0], dict(zip(legs, res[1])))
        return apexes[legs]

    def proj(tbig, tsmall):
        """Unique morphism apex(tbig) -> apex(tsmall) over the legs."""
        abig, legb = apex_of(tbig)
        asml, legs = apex_of(tsmall)
        if set(legb) == set(legs):
            return cat.id_of(abig)
        cands = [h for h in cat.hom(abig, asml)
                 if all(cat.comp(legs[m], h) == legb[m] for m in legs)]
        if len(cands) != 1:
            raise LimitAbsent("no unique projection between fiber powers")
        return cands[0]

    levels = [[] for _ in range(trunc + 1)]
    faces, label, part = {}, {}, {}
    tup_of = {}
    r = range(len(family))

    def tup_id(t):
        return "U(%s)" % ",".join(map(str, t))

    for n in range(trunc + 1):
        for t in itertools.product(r, repeat=n + 1):
            if any(t[i] == t[i + 1] for i in range(n)):
                continue
            sid = tup_id(t)
            tup_of[sid] = t
            levels[n].append(sid)
            label[sid] = apex_of(t)[0]
            for i in range(n + 1):
                if n == 0:
                    break
                t2 = t[:i] + t[i + 1:]
                # reduce adjacent duplicates, recording the collapse epi
                keep = [0]
                for q in range(1, n):
                    if t2[q] != t2[q - 1]:
                        keep.append(q)
                red = tuple(t2[q] for q in keep)
                epi, c = [], 0
                for q in range(n):
                    if q in keep[1:]:
                        c += 1
                    epi.append(c)
                faces[(sid, i)] = (tuple(epi), tup_id(red))
                part[(sid, i)] = proj(t, red)
    sset = SimpSet(trunc, levels, faces, name or "Cech")
    u = SplitSimpObj(site.cat, sset, label, part, name or "Cech").validate()
    u.tuple_of = tup_of
    target = constant_split(cat, x, trunc, "c(%s)" % x)
    vtx = target.levels[0][0]
    aug_val, aug_part = {}, {}
    for n, ids in enumerate(u.levels):
        for sid in ids:
            aug_val[sid] = ((0,) * (n + 1), vtx)
            t = tup_of[sid]
            t0 = t[0]
            apx, legmap = apex_of((t0,))
            leg = legmap[family[t0]]
            aug_part[sid] = cat.comp(family[t0], cat.comp(leg, proj(t, (t0,))))
    aug = SplitMor(u, target, aug_val, aug_part, "aug").validate()
    return u, aug


# ---------------------------------------------------------------------------
# hom into a split object


def hom_into(site, x, y: SplitSimpObj, name=None) -> SimpSet:
    """Levelwise Hom(x, y_n), with the induced simplicial structure."""
    cat = site.cat if hasattr(site, "cat") else site
    trunc = y.trunc
    levels = []
    for n in range(trunc + 1):
        lev = []
        for v in y.full_level(n):
            for h in cat.hom(x, y.label[v[1]]):
                lev.append((v, h))
        levels.append(lev)

    def face_fn(n, i, e):
        v, h = e
        w, p = y.apply_with_part(mt_delta(i, n), v)
        return (w, cat.comp(p, h))

    def degen_fn(n, j, e):
        v, h = e
        return (y.apply(mt_sigma(j, n), v), h)

    def id_fn(n, e):
        return "h(%s|%s)" % (e[0][1], e[1])

    sset, canon, ids, elem_of = from_full_levels(
        trunc, levels, face_fn, degen_fn, id_fn,
        name or ("Hom(%s,%s)" % (x, y.name)))
    return sset


# ---------------------------------------------------------------------------
# nerves of finite categories


def nerve_chains(c: fc.FinCat, trunc: int):
    """Nondegenerate chains per level: (start object, tuple of composable
    non-identity morphism ids)."""
    levels = [[(x, ()) for x in c.objects]]
    for k in range(1, trunc + 1):
        lev = []
        for (x0, ms) in levels[k - 1]:
            tail = c.cod(ms[-1]) if ms else x0
            for m in c.out(tail):
                if not c.is_identity(m):
                    lev.append((x0, ms + (m,)))
        levels.append(lev)
    return levels


def chain_id(chain):
    x0, ms = chain
    return "c(%s)" % "|".join([str(x0)] + list(ms))


def chain_face_value(c: fc.FinCat, chain, i):
    """The face d_i of a nondegenerate chain, as (epi, nondeg chain)."""
    x0, ms = chain
    k = len(ms)
    if i == 0:
        new = (c.cod(ms[0]), ms[1:])
    elif i == k:
        new = (x0, ms[:-1])
    else:
        comp = c.comp(ms[i], ms[i - 1])
        new = (x0, ms[:i - 1] + (comp,) + ms[i + 1:])
    y0, l = new
    stripped = tuple(m for m in l if not c.is_identity(m))
    epi = [0]
    v = 0
    for m in l:
        if not c.is_identity(m):
            v += 1
        epi.append(v)
    return tuple(epi), (y0, stripped)


def nerve_of_category(c: fc.FinCat, trunc: int, name=None) -> SimpSet:
    """The nerve of a finite category, truncated.  Nondegenerate
    k-simplices are the chains of k composable non-identity morphisms."""
    chains = nerve_chains(c, trunc)
    levels = [[chain_id(ch) for ch in lev] for lev in chains]
    faces = {}
    for k in range(1, trunc + 1):
        for ch in chains[k]:
            for i in range(k + 1):
                e, nd = chain_face_value(c, ch, i)
                faces[(chain_id(ch), i)] = (e, chain_id(nd))
    sset = SimpSet(trunc, levels, faces, name or ("N(%s)" % c.name)).validate()
    sset.chain_of = {chain_id(ch): ch for lev in chains for ch in lev}
    return sset


def nerve_labeled(c: fc.FinCat, labels: fc.FinFunctor, trunc: int,
                  name=None) -> SplitSimpObj:
    """The nerve of (c, labels): each chain is carried by the label of its
    first object; only d_0 moves the carrier."""
    scat = labels.target
    uset = nerve_of_category(c, trunc, name)
    label, part = {}, {}
    for lev, ids in enumerate(uset.levels):
        for sid in ids:
            x0, ms = uset.chain_of[sid]
            label[sid] = labels.ob(x0)
            for i in range(lev + 1):
                if lev == 0:
                    break
                if i == 0:
                    part[(sid, i)] = labels.mo(ms[0])
                else:
                    part[(sid, i)] = scat.id_of(labels.ob(x0))
    obj = SplitSimpObj(scat, uset, label, part, name or ("N(%s)" % c.name)).validate()
    obj.chain_of = uset.chain_of
    return obj


# ---------------------------------------------------------------------------
# split object isomorphism search


def split_isomorphic(a: SplitSimpObj, b: SplitSimpObj):
    """Search for a levelwise label-preserving isomorphism of split objects.

    Returns the per-simplex bijection or None.  Labels must match on the
    nose (site objects are compared by equality).
    """
    if a.trunc != b.trunc:
        return None
    if [len(l) for l in a.levels] != [len(l) for l in b.levels]:
        return None
    bij = {}

    def extend(k):
        if k > a.trunc:
            return True
        asims = list(a.levels[k])
        bsims = list(b.levels[k])

        def backtrack(idx, used):
            if idx == len(asims):
                return extend(k + 1)
            s = asims[idx]
            for t in bsims:
                if t in used or a.label[s] != b.label[t]:
                    continue
                ok = True
                for i in range(k + 1):
                    if k == 0:
                        break
                    (e1, nd1) = a.uset.faces[(s, i)]
                    (e2, nd2) = b.uset.faces[(t, i)]
                    if e1 != e2 or bij.get(nd1) != nd2 \
                            or a.part[(s, i)] != b.part[(t, i)]:
                        ok = False
                        break
                if ok:
                    bij[s] = t
                    used.add(t)
                    if backtrack(idx + 1, used):
                        return True
                    del bij[s]
                    used.discard(t)
            return False

        return backtrack(0, set())

    if extend(0):
        return dict(bij)
    return None
