"""Seeded random instances for property tests.

Random categories are path categories of random acyclic quivers, so any choice
of images for the arrows extends uniquely to a functor out of them; random
coefficients are tensor products L(x) ⊗ R(y) of a random contravariant and a
random covariant representation, which are natural systems by construction.
"""
from __future__ import annotations

import random

from .exactalg import Matrix
from .fincat import FinCat, FinFunctor, free_category
from .natsys import NaturalSystem, trivial_system


def random_quiver(rng: random.Random, max_objects=4, max_arrows=5):
    n = rng.randint(2, max_objects)
    objects = [f"x{i}" for i in range(n)]
    arrows = []
    for k in range(rng.randint(1, max_arrows)):
        i, j = sorted(rng.sample(range(n), 2))
        arrows.append((f"a{k}", objects[i], objects[j]))
    return objects, arrows


def random_free_category(rng: random.Random, max_morphisms=12, **kw):
    """Path category of a random acyclic quiver with at most ``max_morphisms`` morphisms."""
    while True:
        objects, arrows = random_quiver(rng, **kw)
        C = free_category(objects, arrows, name="random")
        if len(C.morphisms) <= max_morphisms:
            return C, arrows


def _path(C: FinCat, f):
    """Arrow names making up a morphism of a free category (empty for identities)."""
    if C.is_identity(f):
        return []
    return f.split(".")


def functor_from_arrows(E: FinCat, B: FinCat, object_map, arrow_map) -> FinFunctor:
    mor = {}
    for f in E.morphisms:
        parts = _path(E, f)
        if not parts:
            mor[f] = B.id(object_map[E.src(f)])
        else:
            mor[f] = B.compose_many(*(arrow_map[a] for a in parts))
    return FinFunctor(E, B, object_map, mor)


def random_functor(rng: random.Random, E: FinCat, arrows, B: FinCat, tries=200) -> FinFunctor:
    for _ in range(tries):
        omap = {x: rng.choice(B.objects) for x in E.objects}
        amap = {}
        for a, s, t in arrows:
            hom = B.hom(omap[s], omap[t])
            if not hom:
                break
            amap[a] = rng.choice(hom)
        else:
            return functor_from_arrows(E, B, omap, amap).validate()
    raise ValueError("no functor found")


def _random_matrix(rng, ring, rows, cols):
    top = ring.p if ring.kind == "Fp" else 3
    return Matrix.from_lists(ring, [[rng.randrange(top) for _ in range(cols)]
                                    for _ in range(rows)], cols)


def random_representation(rng, C: FinCat, arrows, ring, max_dim=2, contravariant=False):
    """Random dims per object and matrices per morphism of a free category."""
    dims = {x: rng.randint(0, max_dim) for x in C.objects}
    gen = {}
    for a, s, t in arrows:
        if contravariant:
            gen[a] = _random_matrix(rng, ring, dims[s], dims[t])
        else:
            gen[a] = _random_matrix(rng, ring, dims[t], dims[s])
    maps = {}
    for f in C.morphisms:
        # names read right to left, so the first arrow applied comes last
        M = Matrix.identity(ring, dims[C.src(f)])
        for a in reversed(_path(C, f)):
            M = (M @ gen[a]) if contravariant else (gen[a] @ M)
        maps[f] = M
    return dims, maps


def tensor_system(C: FinCat, ring, ldims, lmaps, rdims, rmaps, name="tensor") -> NaturalSystem:
    """D(f: x -> y) = L(x) ⊗ R(y); a^* = L(a) ⊗ 1, b_* = 1 ⊗ R(b)."""
    def eye(n):
        return Matrix.identity(ring, n)

    dims = {f: ldims[C.src(f)] * rdims[C.tgt(f)] for f in C.morphisms}
    right = {(f, a): lmaps[a].kron(eye(rdims[C.tgt(f)]))
             for f in C.morphisms for a in C.into(C.src(f))}
    left = {(b, f): eye(ldims[C.src(f)]).kron(rmaps[b])
            for f in C.morphisms for b in C.out_of(C.tgt(f))}
    return NaturalSystem(C, ring, dims, right, left, name=name)


def random_tensor_system(rng, C: FinCat, arrows, ring, max_dim=2) -> NaturalSystem:
    ld, lm = random_representation(rng, C, arrows, ring, max_dim, contravariant=True)
    rd, rm = random_representation(rng, C, arrows, ring, max_dim)
    return tensor_system(C, ring, ld, lm, rd, rm)


def random_instance(rng: random.Random, bases, ring, max_morphisms=12):
    """A random (u: E -> B, D) with E a free category and D a tensor or trivial system."""
    E, arrows = random_free_category(rng, max_morphisms)
    while True:
        B = rng.choice(bases)
        try:
            u = random_functor(rng, E, arrows, B)
            break
        except ValueError:
            continue
    if rng.random() < 0.25:
        D = trivial_system(E, ring)
    else:
        D = random_tensor_system(rng, E, arrows, ring)
    return u, D
