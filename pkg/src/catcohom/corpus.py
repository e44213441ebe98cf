"""Bundled fixtures, as Python objects and as self-consistent JSON files."""
from __future__ import annotations

import os
import random

from .errors import UnknownFixture
from .exactalg import F2, INT, Matrix, modp
from .fincat import (
    FinCat,
    FinFunctor,
    arrow,
    chain_poset,
    cyclic_group,
    discrete,
    identity_functor,
    terminal,
    walking_iso,
)
from .fibcl import (
    Fibration,
    StrictAction,
    constant_action,
    grothendieck,
    group_action,
    is_cartesian,
)
from .formats import (
    action_json,
    category_json,
    dumps,
    functor_json,
    module_json,
    natsys_json,
)
from .natsys import Module, NaturalSystem, trivial_system


# ---------------------------------------------------------------------------
# object-level fixtures


def swap_action() -> StrictAction:
    """Z/2 exchanging the two objects of a discrete category."""
    G, C = cyclic_group(2), discrete(["0", "1"])

    def act(g):
        if g == "g":
            return FinFunctor(C, C, {"0": "1", "1": "0"}, {"id_0": "id_1", "id_1": "id_0"})
        return identity_functor(C)

    return group_action(G, C, act).validate()


def trivial_action() -> StrictAction:
    """Z/2 acting trivially on the terminal category."""
    G, T = cyclic_group(2), terminal()
    return group_action(G, T, lambda g: identity_functor(T)).validate()


def product_action() -> StrictAction:
    """Constant action of the arrow category on the arrow category."""
    return constant_action(arrow(), arrow()).validate()


def ideal_system(E: FinCat, ideal, ring=F2, name="ideal") -> NaturalSystem:
    """One copy of the ring on each morphism of a two-sided ideal, zero elsewhere."""
    dims = {m: int(m in ideal) for m in E.morphisms}

    def mat(a, b):
        if dims[a] and dims[b]:
            return Matrix.identity(ring, 1)
        return Matrix.zeros(ring, dims[b], dims[a])

    right = {(f, a): mat(f, E.comp(f, a)) for f in E.morphisms for a in E.into(E.src(f))}
    left = {(b, f): mat(f, E.comp(b, f)) for f in E.morphisms for b in E.out_of(E.tgt(f))}
    return NaturalSystem(E, ring, dims, right, left, name=name).validate()


def nonlocal_candidate():
    """Product fibration arrow x chain(2) -> arrow with D vanishing on cartesian images.

    D is the indicator of the largest ideal avoiding every morphism whose fiber
    component is an identity.
    """
    action = constant_action(arrow(), chain_poset(2)).validate()
    fib = grothendieck(action)
    E = fib.total
    outside = {m for m in E.morphisms if not is_cartesian(fib, m)}
    ideal = {m for m in E.morphisms
             if all(E.comp(E.comp(b, m), a) in outside
                    for a in E.into(E.src(m)) for b in E.out_of(E.tgt(m)))}
    return action, fib, ideal_system(E, ideal)


def kronecker_module(ring=INT) -> Module:
    """Arrow category with Z -> Z multiplication by 2."""
    C = arrow()
    return Module(C, ring, {"0": 1, "1": 1},
                  {"id_0": Matrix.identity(ring, 1), "id_1": Matrix.identity(ring, 1),
                   "f": Matrix.from_lists(ring, [[2]], 1)}).validate()


def sign_module(ring=INT) -> Module:
    """BZ/2 acting on Z by -1."""
    C = cyclic_group(2)
    return Module(C, ring, {"*": 1},
                  {"e": Matrix.identity(ring, 1), "g": Matrix.from_lists(ring, [[-1]], 1)}).validate()


# ---------------------------------------------------------------------------
# files


_RING_TAG = {"Z": "z", "Q": "q", "Fp": "f2"}


def _category_files(C, ring, stem):
    return {f"{stem}.json": category_json(C),
            f"trivial_{_RING_TAG[ring.kind]}.json": natsys_json(trivial_system(C, ring), f"{stem}.json")}


def _fibration_files(action: StrictAction, fib: Fibration, D: NaturalSystem, stem, dname):
    return {
        "base.json": category_json(action.base),
        f"{stem}.json": action_json(action, base="base.json"),
        "total.json": category_json(fib.total),
        "u.json" if stem != "swap_action" else "swap_u.json":
            functor_json(fib.u, source="total.json", target="base.json"),
        dname: natsys_json(D, "total.json"),
    }


def _random_files(seed):
    from .sampling import random_instance

    rng = random.Random(seed)
    bases = [terminal(), arrow(), cyclic_group(2), walking_iso()]
    u, D = random_instance(rng, bases, F2)
    return {
        "source.json": category_json(u.source),
        "base.json": category_json(u.target),
        "u.json": functor_json(u, source="source.json", target="base.json"),
        "natsys.json": natsys_json(D, "source.json"),
    }


def _files(name, seed=0):
    if name == "terminal":
        return _category_files(terminal(), INT, "terminal")
    if name == "arrow":
        out = _category_files(arrow(), INT, "arrow")
        out["times2.json"] = module_json(kronecker_module(), "arrow.json")
        return out
    if name == "walking-iso":
        return _category_files(walking_iso(), F2, "walking_iso")
    if name == "bz2":
        out = _category_files(cyclic_group(2), F2, "bz2")
        out["sign_z.json"] = module_json(sign_module(), "bz2.json")
        return out
    if name == "bz3":
        return _category_files(cyclic_group(3), INT, "bz3")
    if name == "chain-posets":
        out = {}
        for n in (1, 2, 3):
            out.update(_category_files(chain_poset(n), INT, f"chain{n}"))
            out[f"chain{n}_trivial_z.json"] = out.pop("trivial_z.json")
            out[f"chain{n}_trivial_z.json"]["category"] = f"chain{n}.json"
        return out
    if name == "swap-action":
        A = swap_action()
        fib = grothendieck(A)
        return _fibration_files(A, fib, trivial_system(fib.total, F2), "swap_action", "trivial_f2.json")
    if name == "trivial-action":
        A = trivial_action()
        fib = grothendieck(A)
        return _fibration_files(A, fib, trivial_system(fib.total, F2), "trivial_action", "trivial_f2.json")
    if name == "product-fibration":
        A = product_action()
        fib = grothendieck(A)
        return _fibration_files(A, fib, trivial_system(fib.total, F2), "product_action", "trivial_f2.json")
    if name == "nonlocal":
        A, fib, D = nonlocal_candidate()
        return _fibration_files(A, fib, D, "nonlocal_action", "ideal_f2.json")
    if name == "random":
        return _random_files(seed)
    raise UnknownFixture(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}")


FIXTURES = ("terminal", "arrow", "walking-iso", "bz2", "bz3", "chain-posets", "swap-action",
            "trivial-action", "product-fibration", "nonlocal", "random")


def write_fixture(name, out_dir, seed=0, pretty=True) -> list:
    files = _files(name, seed)
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for fname in sorted(files):
        path = os.path.join(out_dir, fname)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(dumps(files[fname], pretty))
        written.append(fname)
    return written


# ---------------------------------------------------------------------------
# named coefficient fixtures


def base_categories() -> dict:
    return {
        "terminal": terminal(),
        "arrow": arrow(),
        "walking-iso": walking_iso(),
        "bz2": cyclic_group(2),
        "bz3": cyclic_group(3),
        "chain2": chain_poset(2),
        "chain3": chain_poset(3),
        "swap-total": grothendieck(swap_action()).total,
    }


def natural_systems() -> list:
    """(name, category, natural system) pairs over Z and F_2."""
    from .natsys import from_bimodule, from_module, zc_bimodule

    out = []
    for name, C in base_categories().items():
        out.append((f"{name}/trivial-Z", C, trivial_system(C, INT)))
        out.append((f"{name}/trivial-F2", C, trivial_system(C, F2)))
    out.append(("arrow/times2", arrow(), from_module(kronecker_module())))
    out.append(("bz2/sign", cyclic_group(2), from_module(sign_module())))
    bz2 = cyclic_group(2)
    out.append(("bz2/ZC-F2", bz2, from_bimodule(zc_bimodule(bz2, F2))))
    _, fib, D = nonlocal_candidate()
    out.append(("nonlocal/ideal-F2", fib.total, D))
    return out


def modules() -> list:
    """(name, category, module) pairs over Z and F_2."""
    from .natsys import constant_module

    out = []
    for name, C in base_categories().items():
        out.append((f"{name}/constant-Z", C, constant_module(C, INT)))
        out.append((f"{name}/constant-F2", C, constant_module(C, F2, 2)))
    out.append(("arrow/times2", arrow(), kronecker_module()))
    out.append(("bz2/sign", cyclic_group(2), sign_module()))
    out.append(("bz2/sign-F3", cyclic_group(2), sign_module(modp(3))))
    return out
