import random

import pytest

from catcohom.andre import (
    check_consistency,
    coefficient_systems,
    e2_page,
    page_json,
    page_passes,
)
from catcohom.corpus import base_categories
from catcohom.errors import RingNotField, SizeGuard
from catcohom.exactalg import F2, INT
from catcohom.fincat import arrow, chain_poset, cyclic_group, identity_functor, to_terminal
from catcohom.homcalc import bw_homology_range
from catcohom.natsys import trivial_system
from catcohom.sampling import random_instance


def test_field_coefficients_are_required():
    C = arrow()
    with pytest.raises(RingNotField):
        e2_page(identity_functor(C), trivial_system(C, INT), 2)


def test_coefficient_systems_are_natural_systems_on_the_base():
    C = chain_poset(2)
    cs = coefficient_systems(to_terminal(C), trivial_system(C, F2), 2)
    for D in cs.systems:
        D.validate()


def test_bz2_to_terminal_is_column_concentrated():
    C = cyclic_group(2)
    page = e2_page(to_terminal(C), trivial_system(C, F2), 3)
    assert [page.dim(0, q) for q in range(4)] == [1, 1, 1, 1]
    verdict = check_consistency(page)
    assert verdict["degenerate"] == "column" and page_passes(verdict)
    assert verdict["euler"] == "N/A"


def test_tampered_page_is_caught():
    C = chain_poset(2)
    page = e2_page(identity_functor(C), trivial_system(C, F2), 2)
    assert page_passes(check_consistency(page))
    bad = page.copy_with(0, 0, -1)
    verdict = check_consistency(bad)
    assert not page_passes(verdict)
    assert verdict["inequalities"] == "FAIL"


def test_homology_page_degenerates_for_the_identity():
    C = cyclic_group(2)
    D = trivial_system(C, F2)
    page = e2_page(identity_functor(C), D, 3, homology=True)
    assert [g.dim for g in page.abutment] == [p.dim for p in bw_homology_range(C, D, 3)]
    assert all(page.dim(p, 0) == page.abutment[p].dim for p in range(4))


def test_parallel_assembly_matches_serial():
    rng = random.Random(3)
    bc = base_categories()
    u, D = random_instance(rng, [bc["arrow"], bc["bz2"]], F2)
    one = page_json(e2_page(u, D, 2, jobs=1))
    two = page_json(e2_page(u, D, 2, jobs=2))
    assert one == two


def test_comma_guard():
    C = chain_poset(3)
    with pytest.raises(SizeGuard):
        e2_page(to_terminal(C), trivial_system(C, F2), 2, comma_guard=3)


def test_report_is_deterministic():
    C = arrow()
    a = page_json(e2_page(identity_functor(C), trivial_system(C, F2), 2))
    b = page_json(e2_page(identity_functor(C), trivial_system(C, F2), 2))
    assert a == b
    assert [(e["p"], e["q"]) for e in a["grid"]][:3] == [(0, 0), (0, 1), (1, 0)]
