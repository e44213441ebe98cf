"""Strict actions, their Grothendieck constructions, fibers and Cartan-Leray pages.

A strict action ``G`` of B assigns a category G(b) to each object and a functor
``G(beta): G(b') -> G(b)`` to each ``beta: b -> b'`` with G(id) = id and
G(beta'∘beta) = G(beta)∘G(beta').  The total category has objects ``(b, x)``
and morphisms ``(beta, x', m)`` from ``(src beta, src m)`` to ``(tgt beta, x')``
where ``m: x -> G(beta)(x')``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .andre import E2Page, check_consistency
from .errors import (
    InvalidCategory,
    NotAFibration,
    NotCartesianInverting,
    NotStrict,
    RingNotField,
)
from .exactalg import (
    MatrixBuilder,
    cohomology_at,
    induced_map,
    inverse,
    is_invertible,
)
from .fincat import (
    FinCat,
    FinFunctor,
    comma_under,
    identity_functor,
)
from .homcalc import (
    bw_cochain_complex,
    bw_cohomology_range,
    module_cohomology_range,
    restriction_chain_map,
)
from .natsys import Module, NaturalSystem, pullback


@dataclass(eq=False)
class StrictAction:
    base: FinCat
    fibers: dict   # object of base -> FinCat
    maps: dict     # morphism beta: b -> b' of base -> FinFunctor G(b') -> G(b)

    def validate(self) -> "StrictAction":
        B = self.base
        for b in B.objects:
            if b not in self.fibers:
                raise NotStrict(f"no fiber category over {b!r}")
        for beta in B.morphisms:
            F = self.maps.get(beta)
            if F is None:
                raise NotStrict(f"no functor assigned to {beta!r}")
            if F.source is not self.fibers[B.tgt(beta)] and F.source != self.fibers[B.tgt(beta)]:
                raise NotStrict(f"functor of {beta!r} has the wrong source")
            if F.target is not self.fibers[B.src(beta)] and F.target != self.fibers[B.src(beta)]:
                raise NotStrict(f"functor of {beta!r} has the wrong target")
            F.validate()
        for b in B.objects:
            F = self.maps[B.id(b)]
            if any(F.ob(x) != x for x in F.source.objects) or \
                    any(F(f) != f for f in F.source.morphisms):
                raise NotStrict(f"identity of {b!r} does not act as the identity functor")
        for beta, beta2 in ((f, g) for g, f in B.composable_pairs()):
            # beta: b -> b', beta2: b' -> b''; need G(beta2∘beta) = G(beta)∘G(beta2)
            lhs = self.maps[B.comp(beta2, beta)]
            first, second = self.maps[beta2], self.maps[beta]
            for x in lhs.source.objects:
                if lhs.ob(x) != second.ob(first.ob(x)):
                    raise NotStrict(f"G({beta2!r}∘{beta!r}) != G({beta!r})G({beta2!r}) on {x!r}")
            for f in lhs.source.morphisms:
                if lhs(f) != second(first(f)):
                    raise NotStrict(f"G({beta2!r}∘{beta!r}) != G({beta!r})G({beta2!r}) on {f!r}")
        return self


def constant_action(B: FinCat, C: FinCat) -> StrictAction:
    idf = identity_functor(C)
    return StrictAction(B, {b: C for b in B.objects}, {beta: idf for beta in B.morphisms})


def group_action(G: FinCat, C: FinCat, act: Callable) -> StrictAction:
    """Action of a one-object group category on C; ``act(g)`` gives the functor G(g)."""
    (star,) = G.objects
    return StrictAction(G, {star: C}, {g: act(g) for g in G.morphisms})


@dataclass(eq=False)
class Fibration:
    total: FinCat
    base: FinCat
    u: FinFunctor
    lift: Callable  # (beta, e) -> cartesian morphism over beta with target e

    def check(self) -> "Fibration":
        """Verify that every chosen lift lies over its base morphism and is cartesian."""
        E, B, u = self.total, self.base, self.u
        for e in E.objects:
            b2 = u.ob(e)
            for beta in B.into(b2):
                phi = self.lift(beta, e)
                if u(phi) != beta or E.tgt(phi) != e:
                    raise NotAFibration(f"lift of {beta!r} at {e!r} is not over it")
                if not is_cartesian(self, phi):
                    raise NotAFibration(f"lift {phi!r} is not cartesian")
        for b in B.objects:
            for e in E.objects:
                if u.ob(e) == b and self.lift(B.id(b), e) != E.id(e):
                    raise NotAFibration(f"lift of the identity at {e!r} is not an identity")
        return self


def is_cartesian(fib: Fibration, phi) -> bool:
    E, B, u = fib.total, fib.base, fib.u
    e0, e = E.src(phi), E.tgt(phi)
    beta = u(phi)
    for g in E.into(e):
        e2 = E.src(g)
        for gamma in B.hom(u.ob(e2), u.ob(e0)):
            if B.comp(beta, gamma) != u(g):
                continue
            sols = [h for h in E.hom(e2, e0) if u(h) == gamma and E.comp(phi, h) == g]
            if len(sols) != 1:
                return False
    return True


def grothendieck(action: StrictAction, check=True) -> Fibration:
    if check:
        action.validate()
    B, G = action.base, action.fibers
    objects = [(b, x) for b in B.objects for x in G[b].objects]
    mors = []
    for beta in B.morphisms:
        b, b2 = B.src(beta), B.tgt(beta)
        F = action.maps[beta]
        for x2 in G[b2].objects:
            y = F.ob(x2)
            for m in G[b].into(y):
                mors.append(((beta, x2, m), (b, G[b].src(m)), (b2, x2)))
    ids = {(b, x): (B.id(b), x, G[b].id(x)) for b, x in objects}

    def comp(second, first):
        beta2, x3, m2 = second
        beta, _, m = first
        b = B.src(beta)
        return (B.comp(beta2, beta), x3, G[b].comp(action.maps[beta](m2), m))

    E = FinCat(objects, mors, ids, comp, name="total")
    if check:
        E.validate()
    u = FinFunctor(E, B, {e: e[0] for e in objects}, {f: f[0] for f in E.morphisms})

    def lift(beta, e):
        x2 = e[1]
        b = B.src(beta)
        return (beta, x2, G[b].id(action.maps[beta].ob(x2)))

    fib = Fibration(E, B, u, lift)
    if check:
        u.validate()
    return fib


def identity_fibration(B: FinCat) -> Fibration:
    return Fibration(B, B, identity_functor(B), lambda beta, e: beta)


def is_free(action: StrictAction) -> bool:
    """No nonidentity element fixes an object or a morphism."""
    B = action.base
    for g in B.morphisms:
        if B.is_identity(g):
            continue
        F = action.maps[g]
        if any(F.ob(x) == x for x in F.source.objects):
            return False
        if any(F(f) == f for f in F.source.morphisms):
            return False
    return True


def orbit_category(action: StrictAction):
    """C/G for a free group action on a thin category; returns (C/G, comparison from the total category)."""
    B = action.base
    (star,) = B.objects
    C = action.fibers[star]
    if not is_free(action):
        raise InvalidCategory("orbit categories are only built for free actions")
    if any(len(C.hom(x, y)) > 1 for x in C.objects for y in C.objects):
        raise InvalidCategory("orbit categories are only built over thin categories")
    orbit_ob, orbit_mor = {}, {}
    for x in C.objects:
        if x not in orbit_ob:
            for g in B.morphisms:
                orbit_ob.setdefault(action.maps[g].ob(x), x)
    for f in C.morphisms:
        if f not in orbit_mor:
            for g in B.morphisms:
                orbit_mor.setdefault(action.maps[g](f), f)
    reps = [x for x in C.objects if orbit_ob[x] == x]
    mreps = [f for f in C.morphisms if orbit_mor[f] == f]

    def translate(f, x):
        """The translate of f whose source is x."""
        for g in B.morphisms:
            h = action.maps[g](f)
            if C.src(h) == x:
                return h
        raise InvalidCategory("objects in different orbits")

    def comp(second, first):
        return orbit_mor[C.comp(translate(second, C.tgt(first)), first)]

    Q = FinCat(reps, [(f, orbit_ob[C.src(f)], orbit_ob[C.tgt(f)]) for f in mreps],
               {x: orbit_mor[C.id(x)] for x in reps}, comp, name="orbit")
    Q.validate()
    fib = grothendieck(action)
    comparison = FinFunctor(fib.total, Q, {e: orbit_ob[e[1]] for e in fib.total.objects},
                            {m: orbit_mor[m[2]] for m in fib.total.morphisms}).validate()
    return Q, comparison


# ---------------------------------------------------------------------------
# fiber data


@dataclass(eq=False)
class FiberData:
    b: object
    fiber: FinCat        # E_b
    i: FinFunctor        # E_b -> E
    comma: FinCat        # b/u
    Q: FinFunctor        # b/u -> E
    j: FinFunctor        # E_b -> b/u
    R: FinFunctor        # b/u -> E_b


def fiber_data(fib: Fibration, b) -> FiberData:
    E, B, u = fib.total, fib.base, fib.u
    idb = B.id(b)
    objs = [e for e in E.objects if u.ob(e) == b]
    mors = [(f, E.src(f), E.tgt(f)) for f in E.morphisms if u(f) == idb]
    Eb = FinCat(objs, mors, {e: E.id(e) for e in objs}, E.comp, name=f"fiber {b}")
    i = FinFunctor(Eb, E, {e: e for e in objs}, {f: f for f, _, _ in mors})
    comma, Q = comma_under(fib.u, b)
    j = FinFunctor(Eb, comma, {e: (e, idb) for e in objs}, {f: (f, idb) for f, _, _ in mors})
    robj = {}
    for (e, phi) in comma.objects:
        robj[(e, phi)] = E.src(fib.lift(phi, e))
    rmor = {}
    for m in comma.morphisms:
        g, phi = m
        x, y = comma.src(m), comma.tgt(m)
        k1 = fib.lift(x[1], x[0])
        k2 = fib.lift(y[1], y[0])
        target = E.comp(g, k1)
        sols = [h for h in Eb.hom(robj[x], robj[y]) if E.comp(k2, h) == target]
        if len(sols) != 1:
            raise NotAFibration(f"no unique factorization through the lift at {m!r}")
        rmor[m] = sols[0]
    R = FinFunctor(comma, Eb, robj, rmor)
    data = FiberData(b, Eb, i, comma, Q, j, R)
    _check_adjunction(fib, data)
    return data


def _check_adjunction(fib: Fibration, d: FiberData):
    """R j = Id on the nose, and the counit gives hom-set bijections."""
    E = fib.total
    for e in d.fiber.objects:
        if d.R.ob(d.j.ob(e)) != e:
            raise NotAFibration(f"R j differs from the identity at {e!r}")
    for f in d.fiber.morphisms:
        if d.R(d.j(f)) != f:
            raise NotAFibration(f"R j differs from the identity at {f!r}")
    idb = fib.base.id(d.b)

    def counit(x):
        e, phi = x
        return (fib.lift(phi, e), idb)

    for x in d.comma.objects:
        eps = counit(x)
        if d.comma.src(eps) != d.j.ob(d.R.ob(x)) or d.comma.tgt(eps) != x:
            raise NotAFibration(f"counit at {x!r} has the wrong endpoints")
        if d.R(eps) != E.id(d.R.ob(x)):
            raise NotAFibration(f"triangle identity fails at {x!r}")
        for e0 in d.fiber.objects:
            left = d.comma.hom(d.j.ob(e0), x)
            right = d.fiber.hom(e0, d.R.ob(x))
            images = sorted((d.comma.index(d.comma.comp(eps, d.j(h))) for h in right))
            if images != sorted(d.comma.index(m) for m in left):
                raise NotAFibration(f"counit does not induce a bijection at ({e0!r}, {x!r})")
    for e in d.fiber.objects:
        if counit(d.j.ob(e)) != d.comma.id(d.j.ob(e)):
            raise NotAFibration(f"triangle identity fails at {e!r}")


def db_system(fib: Fibration, D: NaturalSystem, b, data: FiberData = None) -> NaturalSystem:
    """D_b = D∘F(i_b)∘F(R_b) on b/u; checks D_b∘F(j_b) = D∘F(i_b) exactly."""
    d = data or fiber_data(fib, b)
    Db = pullback(d.R.then(d.i), D)
    if pullback(d.j, Db) != pullback(d.i, D):
        raise NotAFibration(f"D_b does not restrict to D on the fiber over {b!r}")
    return Db


def is_local(fib: Fibration, D: NaturalSystem, q_max: int) -> list:
    """Per (b, q): does restriction along j_b identify H^q(b/u, D_b) with H^q(E_b, D|)?"""
    out = []
    for b in fib.base.objects:
        d = fiber_data(fib, b)
        Db = db_system(fib, D, b, d)
        top = q_max + 1
        cx = bw_cochain_complex(d.comma, Db, top)
        fx = bw_cochain_complex(d.fiber, pullback(d.i, D), top)
        for q in range(q_max + 1):
            hc = cohomology_at(cx.complex, q)
            hf = cohomology_at(fx.complex, q)
            entry = {"b": b, "q": q, "comma": hc.to_json(), "fiber": hf.to_json()}
            if D.ring.is_field:
                cmap = restriction_chain_map(cx, fx, d.j, (q, q + 1))
                M = induced_map(cx.complex, fx.complex, cmap, q)
                entry["local"] = M.nrows == M.ncols and is_invertible(M)
                entry["method"] = "isomorphic via j_b"
            else:
                entry["local"] = hc == hf
                entry["method"] = "presentation-equal"
            out.append(entry)
    return out


# ---------------------------------------------------------------------------
# Cartan-Leray


def _require_group(B: FinCat):
    if len(B.objects) != 1 or not all(B.is_iso(g) for g in B.morphisms):
        raise InvalidCategory("the base must be a one-object groupoid")


def check_cartesian_inverting(fib: Fibration, D: NaturalSystem):
    E, B = fib.total, fib.base
    for e in E.objects:
        for beta in B.into(fib.u.ob(e)):
            kappa = fib.lift(beta, e)
            for f in E.out_of(e):
                if not is_invertible(D.right[(f, kappa)]):
                    raise NotCartesianInverting(kappa, f)


def cartan_leray(action: StrictAction, D: NaturalSystem, N: int) -> E2Page:
    """E2^{p,q} = H^p(G, H^q(C, D|)) for a group acting on C, with abutment H^*(total, D)."""
    if not D.ring.is_field:
        raise RingNotField(f"Cartan-Leray pages need field coefficients, got {D.ring}")
    B = action.base
    _require_group(B)
    fib = grothendieck(action)
    D.check_structure()
    check_cartesian_inverting(fib, D)
    D.check_functoriality()
    E = fib.total
    (star,) = B.objects
    d = fiber_data(fib, star)
    C = d.fiber
    Dres = pullback(d.i, D)
    top = N + 1
    cx = bw_cochain_complex(C, Dres, top)
    modules, descr = [], []
    for q in range(N + 1):
        maps = {}
        for g in B.morphisms:
            cmap = _action_chain_map(fib, action, D, d, cx, g, (q, q + 1))
            maps[g] = induced_map(cx.complex, cx.complex, cmap, q)
        dim = cohomology_at(cx.complex, q).dim
        M = Module(B, D.ring, {star: dim}, maps, name=f"H^{q}").validate()
        modules.append(M)
        descr.append({"q": q, "dim": dim,
                      "action": [maps[g].to_strings() for g in B.morphisms
                                 if not B.is_identity(g)]})
    grid = {}
    for q in range(N + 1):
        for p, pres in enumerate(module_cohomology_range(B, modules[q], N - q)):
            grid[(p, q)] = pres
    abutment = bw_cohomology_range(E, D, N)
    return E2Page(D.ring, N, grid, abutment, coefficient_modules=descr)


def _action_chain_map(fib, action, D, d: FiberData, cx, g, degrees) -> dict:
    """Cochain map (g.sigma)(lambda) = T_{g, f} sigma(G(g) lambda), f the composite of lambda."""
    E = fib.total
    (star,) = fib.base.objects
    G = action.maps[g]
    ring = D.ring

    def fiber_mor(m):  # fiber morphism of G(star) -> morphism of the total category
        return (fib.base.id(star), action.fibers[star].tgt(m), m)

    def transport(f):
        x, y = E.src(f), E.tgt(f)
        kx, ky = fib.lift(g, x), fib.lift(g, y)
        gf = fiber_mor(G(f[2]))
        a = D.right[(f, kx)]
        b = D.left[(ky, gf)]
        if E.comp(f, kx) != E.comp(ky, gf):
            raise NotAFibration("transport square does not commute")
        return inverse(a) @ b

    out = {}
    for n in degrees:
        Bld = MatrixBuilder(ring, cx.complex.dims[n], cx.complex.dims[n])
        for k, (chain, comp) in enumerate(cx.nerve.level(n)):
            if n == 0:
                image = (star, G.ob(chain[1]))
            else:
                image = tuple(fiber_mor(G(f[2])) for f in chain)
            hit = cx.block_of(n, image)
            if hit is None:
                continue
            c0, _ = hit
            Bld.add_block(cx.offsets[n][k], c0, transport(comp))
        out[n] = Bld.build()
    return out


def cartan_leray_report(page: E2Page) -> dict:
    from .andre import page_json

    return page_json(page, check_consistency(page))
