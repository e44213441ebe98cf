"""Finite categories, functors and the constructions built from them.

A :class:`FinCat` keeps its objects and morphisms in a fixed order; that order
drives every enumeration (nerve chains, hom-sets, matrix bases), which is what
makes all downstream matrices reproducible.  Morphism ids may be any hashable
value.  Loaded categories use strings; internal constructions use tuples, for
example ``(f, alpha, beta)`` for a morphism of a factorization category.
"""
from __future__ import annotations

import os
from typing import Callable, Hashable, Optional

from .errors import (
    BadIdentity,
    BrokenAssociativity,
    CyclicQuiver,
    InvalidCategory,
    MissingComposite,
    NotAFunctor,
    ObjectNotFound,
    SizeGuard,
)

DEFAULT_SIZE_GUARD = 200


def default_size_guard() -> int:
    env = os.environ.get("CATCOHOM_SIZE_GUARD")
    return int(env) if env else DEFAULT_SIZE_GUARD


class FinCat:
    """A finite category with ordered objects and morphisms.

    ``compose`` is either a dict keyed by ``(g, f)`` (meaning g∘f) or a
    function of ``(g, f)``; function results are memoised.
    """

    def __init__(self, objects, morphisms, identities, compose, name=None):
        self.name = name
        self.objects = tuple(objects)
        self._obj_index = {x: i for i, x in enumerate(self.objects)}
        if len(self._obj_index) != len(self.objects):
            raise InvalidCategory("duplicate object ids")
        mors = []
        self._src = {}
        self._tgt = {}
        for m, s, t in morphisms:
            if m in self._src:
                raise InvalidCategory(f"duplicate morphism id {m!r}")
            for x in (s, t):
                if x not in self._obj_index:
                    raise ObjectNotFound(f"morphism {m!r} refers to unknown object {x!r}")
            self._src[m] = s
            self._tgt[m] = t
            mors.append(m)
        self.morphisms = tuple(mors)
        self._index = {m: i for i, m in enumerate(self.morphisms)}
        self._id = {}
        for x in self.objects:
            if x not in identities:
                raise BadIdentity(f"object {x!r} has no identity")
            i = identities[x]
            if i not in self._src or self._src[i] != x or self._tgt[i] != x:
                raise BadIdentity(f"identity of {x!r} is not an endomorphism of it")
            self._id[x] = i
        self._ids = frozenset(self._id.values())
        if len(self._ids) != len(self.objects):
            raise BadIdentity("two objects share an identity")
        if callable(compose):
            self._fn = compose
            self._table = {}
        else:
            self._fn = None
            self._table = dict(compose)
        self._out = {x: [] for x in self.objects}
        self._in = {x: [] for x in self.objects}
        self._hom = {}
        for m in self.morphisms:
            s, t = self._src[m], self._tgt[m]
            self._out[s].append(m)
            self._in[t].append(m)
            self._hom.setdefault((s, t), []).append(m)

    # -- basic queries -----------------------------------------------------

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<FinCat{label}: {len(self.objects)} objects, {len(self.morphisms)} morphisms>"

    def __len__(self):
        return len(self.morphisms)

    def src(self, f):
        return self._src[f]

    def tgt(self, f):
        return self._tgt[f]

    def id(self, x):
        try:
            return self._id[x]
        except KeyError:
            raise ObjectNotFound(f"no object {x!r}") from None

    def is_identity(self, f) -> bool:
        return f in self._ids

    def has_object(self, x) -> bool:
        return x in self._obj_index

    def has_morphism(self, f) -> bool:
        return f in self._src

    def index(self, f) -> int:
        return self._index[f]

    def object_index(self, x) -> int:
        return self._obj_index[x]

    def hom(self, x, y) -> list:
        return self._hom.get((x, y), [])

    def out_of(self, x) -> list:
        return self._out[x]

    def into(self, y) -> list:
        return self._in[y]

    def comp(self, g, f):
        """g∘f."""
        key = (g, f)
        try:
            return self._table[key]
        except KeyError:
            pass
        if self._tgt[f] != self._src[g]:
            raise MissingComposite(f"{g!r}∘{f!r} is not composable")
        if self._fn is None:
            raise MissingComposite(f"no entry for {g!r}∘{f!r}")
        h = self._fn(g, f)
        self._table[key] = h
        return h

    def compose_many(self, *fs):
        """f_1∘f_2∘...∘f_k (leftmost applied last)."""
        out = fs[-1]
        for g in reversed(fs[:-1]):
            out = self.comp(g, out)
        return out

    def composable_pairs(self):
        for f in self.morphisms:
            for g in self._out[self._tgt[f]]:
                yield g, f

    def composition_table(self) -> dict:
        return {(g, f): self.comp(g, f) for g, f in self.composable_pairs()}

    def identities(self) -> dict:
        return dict(self._id)

    def is_iso(self, f) -> bool:
        return self.inverse(f) is not None

    def inverse(self, f):
        s, t = self._src[f], self._tgt[f]
        for g in self.hom(t, s):
            if self.comp(g, f) == self._id[s] and self.comp(f, g) == self._id[t]:
                return g
        return None

    def is_loop_free(self) -> bool:
        """Every endomorphism is an identity and no two distinct objects map both ways.

        For such categories nondegenerate nerve chains have bounded length.
        """
        for x in self.objects:
            if len(self.hom(x, x)) != 1:
                return False
        for (x, y) in self._hom:
            if x != y and (y, x) in self._hom:
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, FinCat):
            return NotImplemented
        return (self.objects == other.objects
                and [(m, self.src(m), self.tgt(m)) for m in self.morphisms]
                == [(m, other.src(m), other.tgt(m)) for m in other.morphisms]
                and self._id == other._id
                and self.composition_table() == other.composition_table())

    __hash__ = object.__hash__

    def __getstate__(self):
        # composition closures do not pickle; ship the materialised table instead
        state = dict(self.__dict__)
        if self._fn is not None:
            state["_table"] = self.composition_table()
            state["_fn"] = None
        return state

    # -- validation --------------------------------------------------------

    def validate(self, size_guard: Optional[int] = None) -> "FinCat":
        """Exhaustively check composition, identity laws and associativity."""
        if size_guard is not None and len(self.morphisms) > size_guard:
            raise SizeGuard(
                f"{len(self.morphisms)} morphisms exceeds the size guard of {size_guard}")
        for g, f in self.composable_pairs():
            h = self.comp(g, f)
            if h not in self._src:
                raise MissingComposite(f"{g!r}∘{f!r} = {h!r} is not a morphism")
            if self._src[h] != self._src[f] or self._tgt[h] != self._tgt[g]:
                raise InvalidCategory(f"{g!r}∘{f!r} = {h!r} has the wrong source or target")
        if self._fn is None:
            for (g, f) in self._table:
                if g not in self._src or f not in self._src or self._tgt[f] != self._src[g]:
                    raise InvalidCategory(f"composition entry for non-composable pair ({g!r}, {f!r})")
        for f in self.morphisms:
            if self.comp(self._id[self._tgt[f]], f) != f or self.comp(f, self._id[self._src[f]]) != f:
                raise BadIdentity(f"identity law fails for {f!r}")
        for f in self.morphisms:
            for g in self._out[self._tgt[f]]:
                gf = self.comp(g, f)
                for h in self._out[self._tgt[g]]:
                    if self.comp(h, gf) != self.comp(self.comp(h, g), f):
                        raise BrokenAssociativity((h, g, f))
        return self


def make_category(objects, morphisms, identities, compose, name=None,
                  check=True, size_guard=None) -> FinCat:
    C = FinCat(objects, morphisms, identities, compose, name=name)
    if check:
        C.validate(size_guard)
    return C


class FinFunctor:
    """Object and morphism maps between two finite categories."""

    def __init__(self, source: FinCat, target: FinCat, object_map, morphism_map, name=None):
        self.source = source
        self.target = target
        self.object_map = dict(object_map)
        self.morphism_map = dict(morphism_map)
        self.name = name

    def __repr__(self):
        return f"<FinFunctor {self.name or ''} {self.source!r} -> {self.target!r}>"

    def ob(self, x):
        return self.object_map[x]

    def __call__(self, f):
        return self.morphism_map[f]

    def validate(self) -> "FinFunctor":
        S, T = self.source, self.target
        for x in S.objects:
            if x not in self.object_map:
                raise NotAFunctor(f"object {x!r} is not mapped")
            if not T.has_object(self.object_map[x]):
                raise NotAFunctor(f"object {x!r} maps outside the target")
        for f in S.morphisms:
            if f not in self.morphism_map:
                raise NotAFunctor(f"morphism {f!r} is not mapped")
            g = self.morphism_map[f]
            if not T.has_morphism(g):
                raise NotAFunctor(f"morphism {f!r} maps outside the target")
            if T.src(g) != self.object_map[S.src(f)] or T.tgt(g) != self.object_map[S.tgt(f)]:
                raise NotAFunctor(f"morphism {f!r} does not preserve source/target")
        for x in S.objects:
            if self.morphism_map[S.id(x)] != T.id(self.object_map[x]):
                raise NotAFunctor(f"identity of {x!r} is not preserved")
        for g, f in S.composable_pairs():
            if self.morphism_map[S.comp(g, f)] != T.comp(self.morphism_map[g], self.morphism_map[f]):
                raise NotAFunctor(f"composite {g!r}∘{f!r} is not preserved")
        return self

    def then(self, other: "FinFunctor") -> "FinFunctor":
        """other∘self."""
        return FinFunctor(
            self.source, other.target,
            {x: other.object_map[y] for x, y in self.object_map.items()},
            {f: other.morphism_map[g] for f, g in self.morphism_map.items()},
        )

    def __eq__(self, other):
        if not isinstance(other, FinFunctor):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.object_map == other.object_map
                and self.morphism_map == other.morphism_map)

    __hash__ = object.__hash__


def identity_functor(C: FinCat) -> FinFunctor:
    return FinFunctor(C, C, {x: x for x in C.objects}, {f: f for f in C.morphisms}, name="id")


def to_terminal(C: FinCat, T: Optional[FinCat] = None) -> FinFunctor:
    T = T or terminal()
    (x,) = T.objects
    return FinFunctor(C, T, {a: x for a in C.objects}, {f: T.id(x) for f in C.morphisms})


def is_equivalence(F: FinFunctor) -> bool:
    """Fully faithful and essentially surjective, decided by exhaustive search."""
    S, T = F.source, F.target
    for x in S.objects:
        for y in S.objects:
            images = [F(f) for f in S.hom(x, y)]
            if len(set(images)) != len(images):
                return False
            if len(images) != len(T.hom(F.ob(x), F.ob(y))):
                return False
    image = {F.ob(x) for x in S.objects}
    for z in T.objects:
        if z in image:
            continue
        if not any(T.is_iso(f) for w in image for f in T.hom(w, z)):
            return False
    return True


# ---------------------------------------------------------------------------
# standard examples


def terminal(obj="*") -> FinCat:
    return make_category([obj], [("id", obj, obj)], {obj: "id"}, {("id", "id"): "id"},
                         name="terminal")


def discrete(names) -> FinCat:
    names = list(names)
    return make_category(names, [(f"id_{x}", x, x) for x in names],
                         {x: f"id_{x}" for x in names},
                         {(f"id_{x}", f"id_{x}"): f"id_{x}" for x in names}, name="discrete")


def poset_category(elements, leq: Callable[[Hashable, Hashable], bool], name=None) -> FinCat:
    """Thin category with a morphism ``x<=y`` for each relation (ids ``"x<=y"``)."""
    elements = list(elements)
    mors = []
    label = {}
    for x in elements:
        for y in elements:
            if leq(x, y):
                m = f"id_{x}" if x == y else f"{x}<={y}"
                label[(x, y)] = m
                mors.append((m, x, y))
    for x in elements:
        if (x, x) not in label:
            raise InvalidCategory(f"relation is not reflexive at {x!r}")
    table = {}
    for (y, z), g in label.items():
        for (x, y2), f in label.items():
            if y2 == y:
                if (x, z) not in label:
                    raise MissingComposite(f"relation is not transitive at {x!r} <= {y!r} <= {z!r}")
                table[(g, f)] = label[(x, z)]
    return make_category(elements, mors, {x: label[(x, x)] for x in elements}, table,
                         name=name or "poset")


def chain_poset(length: int) -> FinCat:
    """The ordinal 0 < 1 < ... < length (``length + 1`` objects)."""
    elems = [str(i) for i in range(length + 1)]
    return poset_category(elems, lambda a, b: int(a) <= int(b), name=f"chain{length}")


def arrow() -> FinCat:
    """0 -> 1 with the non-identity morphism named ``f``."""
    return make_category(
        ["0", "1"], [("id_0", "0", "0"), ("id_1", "1", "1"), ("f", "0", "1")],
        {"0": "id_0", "1": "id_1"},
        {("id_0", "id_0"): "id_0", ("id_1", "id_1"): "id_1",
         ("f", "id_0"): "f", ("id_1", "f"): "f"}, name="arrow")


def walking_iso() -> FinCat:
    return make_category(
        ["a", "b"],
        [("id_a", "a", "a"), ("id_b", "b", "b"), ("i", "a", "b"), ("j", "b", "a")],
        {"a": "id_a", "b": "id_b"},
        {("id_a", "id_a"): "id_a", ("id_b", "id_b"): "id_b",
         ("i", "id_a"): "i", ("id_b", "i"): "i", ("j", "id_b"): "j", ("id_a", "j"): "j",
         ("j", "i"): "id_a", ("i", "j"): "id_b"}, name="walking-iso")


def monoid_category(elements, mult, unit, obj="*", name=None) -> FinCat:
    """One-object category; ``mult(g, f)`` is the composite g∘f."""
    elements = list(elements)
    table = {(g, f): mult(g, f) for g in elements for f in elements}
    return make_category([obj], [(e, obj, obj) for e in elements], {obj: unit}, table,
                         name=name or "monoid")


def cyclic_group(n: int) -> FinCat:
    """BZ/n with elements ``e, g, g2, ..., g{n-1}``."""
    names = ["e", "g"] + [f"g{k}" for k in range(2, n)]
    names = names[:n]
    return monoid_category(names, lambda a, b: names[(names.index(a) + names.index(b)) % n],
                           "e", name=f"BZ/{n}")


def free_category(objects, arrows, name=None) -> FinCat:
    """Path category of a finite acyclic quiver.

    ``arrows`` is a list of ``(name, src, tgt)``.  Non-identity morphisms are
    paths, named by joining arrow names with ``"."`` in composition order
    (``"b.a"`` is b∘a).
    """
    objects = list(objects)
    arrows = list(arrows)
    succ = {x: [] for x in objects}
    for a, s, t in arrows:
        if s not in succ or t not in succ:
            raise ObjectNotFound(f"arrow {a!r} refers to an unknown object")
        succ[s].append(t)
    state = {}

    def visit(x):
        state[x] = 1
        for y in succ[x]:
            if state.get(y) == 1:
                raise CyclicQuiver(f"quiver has a directed cycle through {y!r}")
            if y not in state:
                visit(y)
        state[x] = 2

    for x in objects:
        if x not in state:
            visit(x)
    # paths as tuples of arrows, first-applied last
    paths = []
    frontier = [((a,), s, t) for a, s, t in arrows]
    while frontier:
        paths.extend(frontier)
        nxt = []
        for p, s, t in frontier:
            for a, s2, t2 in arrows:
                if s2 == t:
                    nxt.append(((a,) + p, s, t2))
        frontier = nxt
    ids = {x: f"id_{x}" for x in objects}
    names = {p: ".".join(p) for p, _, _ in paths}
    mors = [(ids[x], x, x) for x in objects] + [(names[p], s, t) for p, s, t in paths]
    path_of = {names[p]: p for p, _, _ in paths}

    def comp(g, f):
        if g in ids.values():
            return f
        if f in ids.values():
            return g
        return names[path_of[g] + path_of[f]]

    return make_category(objects, mors, ids, comp, name=name or "free")


def product(C: FinCat, D: FinCat) -> FinCat:
    objects = [(x, y) for x in C.objects for y in D.objects]
    mors = [((f, g), (C.src(f), D.src(g)), (C.tgt(f), D.tgt(g)))
            for f in C.morphisms for g in D.morphisms]
    ids = {(x, y): (C.id(x), D.id(y)) for x, y in objects}
    return FinCat(objects, mors, ids,
                  lambda b, a: (C.comp(b[0], a[0]), D.comp(b[1], a[1])),
                  name=f"{C.name}x{D.name}")


def projection(P: FinCat, C: FinCat, D: FinCat, which: int) -> FinFunctor:
    return FinFunctor(P, (C, D)[which], {x: x[which] for x in P.objects},
                      {f: f[which] for f in P.morphisms})


def opposite(C: FinCat) -> FinCat:
    return FinCat(C.objects, [(f, C.tgt(f), C.src(f)) for f in C.morphisms], C.identities(),
                  lambda g, f: C.comp(f, g), name=f"{C.name}^op")


def factorization(C: FinCat):
    """Factorization category F C with its projection to C^op x C.

    Objects are the morphisms of C; a morphism ``(f, alpha, beta)`` goes from f
    to beta∘f∘alpha, and ``(f', a', b')∘(f, a, b) = (f, a∘a', b'∘b)``.
    """
    mors = []
    for f in C.morphisms:
        for a in C.into(C.src(f)):
            fa = C.comp(f, a)
            for b in C.out_of(C.tgt(f)):
                mors.append(((f, a, b), f, C.comp(b, fa)))
    ids = {f: (f, C.id(C.src(f)), C.id(C.tgt(f))) for f in C.morphisms}

    def comp(m2, m1):
        f, a, b = m1
        _, a2, b2 = m2
        return (f, C.comp(a, a2), C.comp(b2, b))

    FC = FinCat(C.morphisms, mors, ids, comp, name=f"F({C.name})")
    op = opposite(C)
    P = product(op, C)
    proj = FinFunctor(FC, P, {f: (C.src(f), C.tgt(f)) for f in C.morphisms},
                      {m: (m[1], m[2]) for m in FC.morphisms})
    return FC, proj


def factorization_functor(u: FinFunctor, FE: FinCat = None, FB: FinCat = None) -> FinFunctor:
    """F u : F E -> F B."""
    FE = FE or factorization(u.source)[0]
    FB = FB or factorization(u.target)[0]
    return FinFunctor(FE, FB, {f: u(f) for f in FE.objects},
                      {(f, a, b): (u(f), u(a), u(b)) for (f, a, b) in FE.morphisms})


def comma_under(u: FinFunctor, b):
    """b/u with its forgetful functor to the source of u.

    Objects ``(e, phi)`` with ``phi: b -> u(e)``; the morphism ``(g, phi)``
    goes from ``(src g, phi)`` to ``(tgt g, u(g)∘phi)``.
    """
    E, B = u.source, u.target
    if not B.has_object(b):
        raise ObjectNotFound(f"{b!r} is not an object of the base")
    objects = [(e, phi) for e in E.objects for phi in B.hom(b, u.ob(e))]
    mors = []
    for e, phi in objects:
        for g in E.out_of(e):
            mors.append(((g, phi), (e, phi), (E.tgt(g), B.comp(u(g), phi))))
    ids = {(e, phi): (E.id(e), phi) for e, phi in objects}
    comma = FinCat(objects, mors, ids, lambda m2, m1: (E.comp(m2[0], m1[0]), m1[1]),
                   name=f"{b}/u")
    Q = FinFunctor(comma, E, {x: x[0] for x in objects}, {m: m[0] for m in comma.morphisms})
    return comma, Q


def comma_over(u: FinFunctor, b):
    """u/b with its forgetful functor.

    Objects ``(e, psi)`` with ``psi: u(e) -> b``; the morphism ``(g, psi)``
    goes from ``(src g, psi∘u(g))`` to ``(tgt g, psi)``.
    """
    E, B = u.source, u.target
    if not B.has_object(b):
        raise ObjectNotFound(f"{b!r} is not an object of the base")
    objects = [(e, psi) for e in E.objects for psi in B.hom(u.ob(e), b)]
    mors = []
    for e, psi in objects:
        for g in E.into(e):
            mors.append(((g, psi), (E.src(g), B.comp(psi, u(g))), (e, psi)))
    ids = {(e, psi): (E.id(e), psi) for e, psi in objects}
    comma = FinCat(objects, mors, ids, lambda m2, m1: (E.comp(m2[0], m1[0]), m2[1]),
                   name=f"u/{b}")
    Q = FinFunctor(comma, E, {x: x[0] for x in objects}, {m: m[0] for m in comma.morphisms})
    return comma, Q


def full_subcategory(C: FinCat, objects) -> FinCat:
    keep = set(objects)
    objs = [x for x in C.objects if x in keep]
    mors = [(f, C.src(f), C.tgt(f)) for f in C.morphisms
            if C.src(f) in keep and C.tgt(f) in keep]
    return FinCat(objs, mors, {x: C.id(x) for x in objs}, C.comp, name=C.name)


def relabel(C: FinCat, name=None):
    """Copy of C with string ids; returns ``(C', F: C -> C')``, F an isomorphism."""
    ob = {x: label(x) for x in C.objects}
    mo = {f: label(f) for f in C.morphisms}
    if len(set(ob.values())) != len(ob) or len(set(mo.values())) != len(mo):
        raise InvalidCategory("string labels collide")
    table = {(mo[g], mo[f]): mo[C.comp(g, f)] for g, f in C.composable_pairs()}
    D = FinCat([ob[x] for x in C.objects],
               [(mo[f], ob[C.src(f)], ob[C.tgt(f)]) for f in C.morphisms],
               {ob[x]: mo[C.id(x)] for x in C.objects}, table, name=name or C.name)
    return D, FinFunctor(C, D, ob, mo)


def label(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, tuple):
        return "(" + ",".join(label(y) for y in x) + ")"
    return str(x)


# ---------------------------------------------------------------------------
# nerve


class Nerve:
    """Chains ``C_0 <-f_1- C_1 <- ... <-f_n- C_n`` of a finite category.

    Degree 0 chains are the objects.  Chains of positive length are tuples
    ``(f_1, ..., f_n)`` listed lexicographically by morphism index.  With
    ``normalized=True`` only nondegenerate chains (no identity entries) are kept.
    """

    def __init__(self, C: FinCat, normalized: bool = False):
        self.C = C
        self.normalized = normalized
        self._levels = [[(x, C.id(x)) for x in C.objects]]
        self._index = []

    def _extend(self, n):
        C = self.C
        while len(self._levels) <= n:
            k = len(self._levels)
            level = []
            if k == 1:
                for f in C.morphisms:
                    if not (self.normalized and C.is_identity(f)):
                        level.append(((f,), f))
            else:
                for chain, comp in self._levels[k - 1]:
                    for f in C.into(C.src(chain[-1])):
                        if self.normalized and C.is_identity(f):
                            continue
                        level.append((chain + (f,), C.comp(comp, f)))
            self._levels.append(level)

    def level(self, n) -> list:
        """List of ``(chain, composite)`` pairs in degree n."""
        self._extend(n)
        return self._levels[n]

    def chains(self, n) -> list:
        return [c for c, _ in self.level(n)]

    def index(self, n) -> dict:
        while len(self._index) <= n:
            k = len(self._index)
            self._index.append({c: i for i, (c, _) in enumerate(self.level(k))})
        return self._index[n]

    def count(self, n) -> int:
        return len(self.level(n))

    def is_degenerate(self, chain) -> bool:
        if not isinstance(chain, tuple) or not chain:
            return False
        return any(self.C.is_identity(f) for f in chain)


def nerve_counts(C: FinCat, n_max: int):
    """``(full, nondegenerate)`` chain counts for degrees 0..n_max."""
    full, nondeg = Nerve(C), Nerve(C, normalized=True)
    return ([full.count(n) for n in range(n_max + 1)],
            [nondeg.count(n) for n in range(n_max + 1)])


def nondegenerate_chain_counts(C: FinCat) -> list:
    """Counts of nondegenerate chains in every degree of a loop-free category.

    Uses dynamic programming over objects rather than chain enumeration.
    """
    if not C.is_loop_free():
        raise InvalidCategory("category has nontrivial endomorphisms or isomorphism cycles")
    # ways[x] = number of nondegenerate chains of the current length ending at C_n = x
    ways = {x: 1 for x in C.objects}
    counts = [len(C.objects)]
    while True:
        nxt = {x: 0 for x in C.objects}
        for f in C.morphisms:
            if not C.is_identity(f):
                nxt[C.src(f)] += ways[C.tgt(f)]
        total = sum(nxt.values())
        if not total:
            return counts
        counts.append(total)
        ways = nxt


def euler_characteristic(C: FinCat) -> int:
    return sum((-1) ** n * c for n, c in enumerate(nondegenerate_chain_counts(C)))
