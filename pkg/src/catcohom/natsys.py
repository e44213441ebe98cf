"""Coefficient data: natural systems, bimodules and modules.

All matrices act on column vectors.  For a natural system ``D`` on C:

* ``D.right[(f, a)]`` is ``a^*: D(f) -> D(f∘a)``
* ``D.left[(b, f)]``  is ``b_*: D(f) -> D(b∘f)``

A :class:`Module` is a covariant functor on a category, a :class:`Bimodule`
a functor on C^op x C.  Constructors never trust themselves: every public
constructor can be followed by ``validate()`` and the tests do so.
"""
from __future__ import annotations

from .errors import FunctorialityViolation, MissingStructureMap, RingMismatch
from .exactalg import Matrix, is_invertible
from .fincat import FinCat, FinFunctor


def _eye(ring, n):
    return Matrix.identity(ring, n)


def _shape_check(M, rows, cols, what):
    if M.shape != (rows, cols):
        raise FunctorialityViolation(f"{what} has shape {M.shape}, expected {(rows, cols)}")


class NaturalSystem:
    def __init__(self, base: FinCat, ring, dims: dict, right: dict, left: dict, name=None):
        self.base = base
        self.ring = ring
        self.dims = dict(dims)
        self.right = right
        self.left = left
        self.name = name

    def __repr__(self):
        return f"<NaturalSystem {self.name or ''} on {self.base!r} over {self.ring}>"

    def dim(self, f) -> int:
        return self.dims[f]

    def fc_map(self, m) -> Matrix:
        """Action of the factorization-category morphism ``(f, a, b)``."""
        f, a, b = m
        C = self.base
        return self.left[(b, C.comp(f, a))] @ self.right[(f, a)]

    def validate(self) -> "NaturalSystem":
        self.check_structure()
        self.check_functoriality()
        return self

    def check_structure(self) -> "NaturalSystem":
        """Every structure map is present, over the right ring, with the right shape."""
        C, ring = self.base, self.ring
        for f in C.morphisms:
            if f not in self.dims:
                raise MissingStructureMap(f"no module assigned to {f!r}")
        for f in C.morphisms:
            for a in C.into(C.src(f)):
                M = self.right.get((f, a))
                if M is None:
                    raise MissingStructureMap(f"missing right map for ({f!r}, {a!r})")
                if M.ring != ring:
                    raise RingMismatch(f"right map ({f!r}, {a!r}) over {M.ring}")
                _shape_check(M, self.dims[C.comp(f, a)], self.dims[f], f"right map ({f!r}, {a!r})")
            for b in C.out_of(C.tgt(f)):
                M = self.left.get((b, f))
                if M is None:
                    raise MissingStructureMap(f"missing left map for ({b!r}, {f!r})")
                if M.ring != ring:
                    raise RingMismatch(f"left map ({b!r}, {f!r}) over {M.ring}")
                _shape_check(M, self.dims[C.comp(b, f)], self.dims[f], f"left map ({b!r}, {f!r})")
        return self

    def check_functoriality(self) -> "NaturalSystem":
        C, ring = self.base, self.ring
        for f in C.morphisms:
            s, t = C.src(f), C.tgt(f)
            n = self.dims[f]
            if self.right[(f, C.id(s))] != _eye(ring, n):
                raise FunctorialityViolation(f"identity acts nontrivially on the right of {f!r}",
                                             (f, C.id(s)))
            if self.left[(C.id(t), f)] != _eye(ring, n):
                raise FunctorialityViolation(f"identity acts nontrivially on the left of {f!r}",
                                             (C.id(t), f))
            for a in C.into(s):
                fa = C.comp(f, a)
                ra = self.right[(f, a)]
                for a2 in C.into(C.src(a)):
                    if self.right[(f, C.comp(a, a2))] != self.right[(fa, a2)] @ ra:
                        raise FunctorialityViolation(
                            f"right action not functorial for {a!r}, {a2!r} on {f!r}", (a, a2))
                for b in C.out_of(t):
                    if self.right[(C.comp(b, f), a)] @ self.left[(b, f)] != self.left[(b, fa)] @ ra:
                        raise FunctorialityViolation(
                            f"left and right actions do not commute for {b!r}, {a!r} on {f!r}",
                            (b, a))
            for b in C.out_of(t):
                bf = C.comp(b, f)
                lb = self.left[(b, f)]
                for b2 in C.out_of(C.tgt(b)):
                    if self.left[(C.comp(b2, b), f)] != self.left[(b2, bf)] @ lb:
                        raise FunctorialityViolation(
                            f"left action not functorial for {b2!r}, {b!r} on {f!r}", (b2, b))
        return self

    def __eq__(self, other):
        if not isinstance(other, NaturalSystem):
            return NotImplemented
        return (self.base is other.base or self.base == other.base) and self.ring == other.ring \
            and self.dims == other.dims and self.right == other.right and self.left == other.left

    __hash__ = object.__hash__


class Module:
    """Covariant functor from a finite category to finite free modules."""

    def __init__(self, base: FinCat, ring, values: dict, maps: dict, name=None):
        self.base = base
        self.ring = ring
        self.values = dict(values)
        self.maps = maps
        self.name = name

    def __repr__(self):
        return f"<Module {self.name or ''} on {self.base!r} over {self.ring}>"

    def dim(self, x) -> int:
        return self.values[x]

    def __call__(self, f) -> Matrix:
        return self.maps[f]

    def validate(self) -> "Module":
        C, ring = self.base, self.ring
        for x in C.objects:
            if x not in self.values:
                raise MissingStructureMap(f"no module assigned to object {x!r}")
        for f in C.morphisms:
            M = self.maps.get(f)
            if M is None:
                raise MissingStructureMap(f"missing matrix for {f!r}")
            if M.ring != ring:
                raise RingMismatch(f"matrix of {f!r} over {M.ring}")
            _shape_check(M, self.values[C.tgt(f)], self.values[C.src(f)], f"matrix of {f!r}")
        for x in C.objects:
            if self.maps[C.id(x)] != _eye(ring, self.values[x]):
                raise FunctorialityViolation(f"identity of {x!r} acts nontrivially",
                                             (C.id(x), C.id(x)))
        for g, f in C.composable_pairs():
            if self.maps[C.comp(g, f)] != self.maps[g] @ self.maps[f]:
                raise FunctorialityViolation(f"F({g!r}∘{f!r}) != F({g!r})F({f!r})", (g, f))
        return self

    @property
    def is_local(self) -> bool:
        return all(is_invertible(self.maps[f]) for f in self.base.morphisms)

    def __eq__(self, other):
        if not isinstance(other, Module):
            return NotImplemented
        return (self.base is other.base or self.base == other.base) and self.ring == other.ring \
            and self.values == other.values and self.maps == other.maps

    __hash__ = object.__hash__


class Bimodule:
    """Functor C^op x C -> modules.

    ``maps[(a, b)]`` is ``M(a, b): M(x, y) -> M(x', y')`` for ``a: x' -> x`` and
    ``b: y -> y'``.
    """

    def __init__(self, base: FinCat, ring, values: dict, maps: dict, name=None):
        self.base = base
        self.ring = ring
        self.values = dict(values)
        self.maps = maps
        self.name = name

    def validate(self) -> "Bimodule":
        C, ring = self.base, self.ring
        for x in C.objects:
            for y in C.objects:
                if (x, y) not in self.values:
                    raise MissingStructureMap(f"no module assigned to ({x!r}, {y!r})")
        for a in C.morphisms:
            for b in C.morphisms:
                M = self.maps.get((a, b))
                if M is None:
                    raise MissingStructureMap(f"missing matrix for ({a!r}, {b!r})")
                if M.ring != ring:
                    raise RingMismatch(f"matrix ({a!r}, {b!r}) over {M.ring}")
                _shape_check(M, self.values[(C.src(a), C.tgt(b))],
                             self.values[(C.tgt(a), C.src(b))], f"matrix ({a!r}, {b!r})")
        for x in C.objects:
            for y in C.objects:
                if self.maps[(C.id(x), C.id(y))] != _eye(ring, self.values[(x, y)]):
                    raise FunctorialityViolation(f"identity acts nontrivially on ({x!r}, {y!r})")
        for a in C.morphisms:
            for b in C.morphisms:
                for a2 in C.into(C.src(a)):
                    for b2 in C.out_of(C.tgt(b)):
                        lhs = self.maps[(C.comp(a, a2), C.comp(b2, b))]
                        if lhs != self.maps[(a2, b2)] @ self.maps[(a, b)]:
                            raise FunctorialityViolation(
                                f"bimodule not functorial at ({a!r}, {b!r}) then ({a2!r}, {b2!r})",
                                ((a, b), (a2, b2)))
        return self


# ---------------------------------------------------------------------------
# constructors


def trivial_system(C: FinCat, ring, rank: int = 1) -> NaturalSystem:
    I = _eye(ring, rank)
    right = {(f, a): I for f in C.morphisms for a in C.into(C.src(f))}
    left = {(b, f): I for f in C.morphisms for b in C.out_of(C.tgt(f))}
    return NaturalSystem(C, ring, {f: rank for f in C.morphisms}, right, left, name="trivial")


def constant_module(C: FinCat, ring, rank: int = 1) -> Module:
    I = _eye(ring, rank)
    return Module(C, ring, {x: rank for x in C.objects}, {f: I for f in C.morphisms},
                  name="constant")


def from_bimodule(M: Bimodule) -> NaturalSystem:
    C = M.base
    dims = {f: M.values[(C.src(f), C.tgt(f))] for f in C.morphisms}
    right = {(f, a): M.maps[(a, C.id(C.tgt(f)))] for f in C.morphisms for a in C.into(C.src(f))}
    left = {(b, f): M.maps[(C.id(C.src(f)), b)] for f in C.morphisms for b in C.out_of(C.tgt(f))}
    return NaturalSystem(C, M.ring, dims, right, left, name=M.name)


def from_module(F: Module) -> NaturalSystem:
    """D(f) = F(tgt f), b_* = F(b), a^* = identity."""
    C = F.base
    dims = {f: F.values[C.tgt(f)] for f in C.morphisms}
    right = {(f, a): _eye(F.ring, dims[f]) for f in C.morphisms for a in C.into(C.src(f))}
    left = {(b, f): F.maps[b] for f in C.morphisms for b in C.out_of(C.tgt(f))}
    return NaturalSystem(C, F.ring, dims, right, left, name=F.name)


def zc_bimodule(C: FinCat, ring) -> Bimodule:
    """(a, b) -> free module on Hom(a, b); (a, b) acts by h -> b∘h∘a."""
    values = {(x, y): len(C.hom(x, y)) for x in C.objects for y in C.objects}
    pos = {}
    for x in C.objects:
        for y in C.objects:
            for i, h in enumerate(C.hom(x, y)):
                pos[h] = i
    maps = {}
    for a in C.morphisms:
        for b in C.morphisms:
            x, y = C.tgt(a), C.src(b)
            x2, y2 = C.src(a), C.tgt(b)
            M = Matrix.zeros(ring, values[(x2, y2)], values[(x, y)])
            for h in C.hom(x, y):
                M.rows[pos[C.compose_many(b, h, a)]][pos[h]] = 1
            maps[(a, b)] = M
    return Bimodule(C, ring, values, maps, name="ZC")


def constant_bimodule(C: FinCat, ring, rank: int = 1) -> Bimodule:
    I = _eye(ring, rank)
    return Bimodule(C, ring, {(x, y): rank for x in C.objects for y in C.objects},
                    {(a, b): I for a in C.morphisms for b in C.morphisms}, name="constant")


def pullback(phi: FinFunctor, D: NaturalSystem) -> NaturalSystem:
    """phi^*D = D∘F(phi) on the source of phi."""
    C = phi.source
    dims = {f: D.dims[phi(f)] for f in C.morphisms}
    right = {(f, a): D.right[(phi(f), phi(a))] for f in C.morphisms for a in C.into(C.src(f))}
    left = {(b, f): D.left[(phi(b), phi(f))] for f in C.morphisms for b in C.out_of(C.tgt(f))}
    return NaturalSystem(C, D.ring, dims, right, left, name=D.name)


def module_pullback(phi: FinFunctor, F: Module) -> Module:
    """F∘phi."""
    C = phi.source
    return Module(C, F.ring, {x: F.values[phi.ob(x)] for x in C.objects},
                  {f: F.maps[phi(f)] for f in C.morphisms}, name=F.name)


def as_fc_module(D: NaturalSystem, FC: FinCat) -> Module:
    """D viewed as a covariant module on the factorization category."""
    return Module(FC, D.ring, dict(D.dims), {m: D.fc_map(m) for m in FC.morphisms}, name=D.name)


def bimodule_pullback(phi: FinFunctor, M: Bimodule) -> Bimodule:
    C = phi.source
    return Bimodule(C, M.ring,
                    {(x, y): M.values[(phi.ob(x), phi.ob(y))] for x in C.objects for y in C.objects},
                    {(a, b): M.maps[(phi(a), phi(b))] for a in C.morphisms for b in C.morphisms},
                    name=M.name)
