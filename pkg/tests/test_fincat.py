import pickle
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catcohom.errors import (
    BadIdentity,
    BrokenAssociativity,
    CyclicQuiver,
    MissingComposite,
    NotAFunctor,
    SizeGuard,
)
from catcohom.fincat import (
    FinCat,
    FinFunctor,
    Nerve,
    arrow,
    chain_poset,
    comma_over,
    comma_under,
    cyclic_group,
    discrete,
    euler_characteristic,
    factorization,
    free_category,
    identity_functor,
    is_equivalence,
    monoid_category,
    nerve_counts,
    nondegenerate_chain_counts,
    opposite,
    product,
    relabel,
    terminal,
    to_terminal,
    walking_iso,
)
from catcohom.sampling import random_free_category


def test_standard_examples_validate():
    for C in (terminal(), arrow(), walking_iso(), cyclic_group(3), chain_poset(3),
              discrete(["x", "y"])):
        C.validate()
    assert len(chain_poset(3).morphisms) == 10
    assert walking_iso().is_iso("i") and walking_iso().inverse("i") == "j"
    assert not arrow().is_iso("f")


def test_composition_and_hom_sets():
    G = cyclic_group(3)
    assert G.comp("g", "g") == "g2"
    assert G.compose_many("g", "g", "g") == "e"
    A = arrow()
    assert A.hom("0", "1") == ["f"] and A.hom("1", "0") == []


def test_idempotent_monoid_is_a_category():
    # g∘g = g is a valid (idempotent) monoid
    C = monoid_category(["e", "g"], lambda x, y: "g" if "g" in (x, y) else "e", "e")
    C.validate()
    assert not C.is_loop_free()


def test_broken_associativity_is_named():
    table = {("a", "a"): "a", ("a", "b"): "b", ("b", "a"): "a", ("b", "b"): "a"}
    for m in ("a", "b"):
        table[("e", m)] = table[(m, "e")] = m
    table[("e", "e")] = "e"
    C = FinCat(["*"], [(m, "*", "*") for m in "eab"], {"*": "e"}, table)
    with pytest.raises(BrokenAssociativity) as info:
        C.validate()
    assert len(info.value.triple) == 3


def test_missing_composite_and_bad_identity():
    table = {("id_0", "id_0"): "id_0", ("id_1", "id_1"): "id_1", ("id_1", "f"): "f"}
    C = FinCat(["0", "1"], [("id_0", "0", "0"), ("id_1", "1", "1"), ("f", "0", "1")],
               {"0": "id_0", "1": "id_1"}, table)
    with pytest.raises(MissingComposite):
        C.validate()
    # e∘a = e on a one-object category: types are fine but e is not an identity
    table = {("e", "e"): "e", ("e", "a"): "e", ("a", "e"): "a", ("a", "a"): "a"}
    C = FinCat(["*"], [("e", "*", "*"), ("a", "*", "*")], {"*": "e"}, table)
    with pytest.raises(BadIdentity):
        C.validate()


def test_size_guard():
    with pytest.raises(SizeGuard):
        chain_poset(6).validate(size_guard=10)


def test_free_category_rejects_cycles():
    with pytest.raises(CyclicQuiver):
        free_category(["x", "y"], [("a", "x", "y"), ("b", "y", "x")])
    C = free_category(["x", "y", "z"], [("a", "x", "y"), ("b", "y", "z")])
    assert C.comp("b", "a") == "b.a"
    assert len(C.morphisms) == 6


def test_factorization_category_sizes():
    FC, proj = factorization(cyclic_group(2))
    assert len(FC.objects) == 2 and len(FC.morphisms) == 8
    FA, _ = factorization(arrow())
    assert len(FA.objects) == 3 and len(FA.morphisms) == 5
    FC.validate()


def test_product_opposite_relabel():
    P = product(arrow(), cyclic_group(2))
    P.validate()
    assert len(P.morphisms) == 6
    O = opposite(arrow())
    O.validate()
    assert O.src("f") == "1"
    R, iso = relabel(P)
    R.validate()
    iso.validate()
    assert all(isinstance(f, str) for f in R.morphisms)


def test_comma_categories_of_identity_have_initial_and_terminal_objects():
    C = chain_poset(2)
    u = identity_functor(C)
    under, Q = comma_under(u, "0")
    over, _ = comma_over(u, "2")
    under.validate()
    over.validate()
    assert len(under.objects) == 3 and len(over.objects) == 3
    Q.validate()


def test_functor_validation_and_equivalence():
    W, T = walking_iso(), terminal()
    assert is_equivalence(to_terminal(W, T))
    assert not is_equivalence(to_terminal(arrow(), T))
    bad = FinFunctor(arrow(), arrow(), {"0": "1", "1": "0"},
                     {"id_0": "id_1", "id_1": "id_0", "f": "f"})
    with pytest.raises(NotAFunctor):
        bad.validate()


def test_pickling_preserves_structure():
    C = cyclic_group(3)
    assert pickle.loads(pickle.dumps(C)) == C


def test_nerve_normalized_counts():
    N = Nerve(cyclic_group(2), normalized=True)
    assert [N.count(n) for n in range(3)] == [1, 1, 1]
    assert nerve_counts(cyclic_group(2), 2) == ([1, 2, 4], [1, 1, 1])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_nondegenerate_counts_agree_with_nerve(seed):
    C, _ = random_free_category(random.Random(seed), max_morphisms=12)
    counts = nondegenerate_chain_counts(C)
    N = Nerve(C, normalized=True)
    for n, c in enumerate(counts):
        assert N.count(n) == c
    assert N.count(len(counts)) == 0
    assert euler_characteristic(C) == sum((-1) ** n * c for n, c in enumerate(counts))
