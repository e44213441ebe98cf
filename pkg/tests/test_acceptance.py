"""The ten acceptance criteria; conftest prints one PASS/FAIL line per criterion."""
import io
import json
import random
import time

import pytest

from catcohom.andre import check_consistency, e2_page, page_passes
from catcohom.cli import run
from catcohom.corpus import (
    base_categories,
    modules,
    natural_systems,
    nonlocal_candidate,
    swap_action,
    trivial_action,
)
from catcohom.exactalg import F2, INT, is_invertible, rank
from catcohom.fibcl import cartan_leray, grothendieck, identity_fibration, is_local
from catcohom.fincat import cyclic_group, identity_functor, terminal, to_terminal, walking_iso
from catcohom.homcalc import (
    bw_cohomology_range,
    bw_homology_range,
    cohomology_via_fc_range,
    colimit,
    induced_on_bw,
    limit,
    module_cohomology,
    module_homology,
)
from catcohom.natsys import trivial_system
from catcohom.sampling import random_instance


def _cli(argv):
    out = io.StringIO()
    code = run([str(a) for a in argv], stdout=out)
    return code, json.loads(out.getvalue())


def _fields(pres):
    return [(p.free_rank, tuple(p.torsion)) for p in pres]


# 1 -------------------------------------------------------------------------


def test_c01_two_path_agreement():
    start = time.perf_counter()
    pairs = natural_systems()
    rings = {str(D.ring) for _, _, D in pairs}
    assert len(pairs) >= 6 and {"Z", "Fp:2"} <= rings
    for name, C, D in pairs:
        assert bw_cohomology_range(C, D, 3) == cohomology_via_fc_range(C, D, 3), name
    assert time.perf_counter() - start < 60


# 2 -------------------------------------------------------------------------


def test_c02_degree_zero_is_limit_and_colimit():
    from catcohom.fincat import factorization
    from catcohom.natsys import as_fc_module

    start = time.perf_counter()
    for name, C, F in modules():
        assert module_cohomology(C, F, 0) == limit(C, F), name
        assert module_homology(C, F, 0) == colimit(C, F), name
    for name, C, D in natural_systems():
        FC, _ = factorization(C)
        M = as_fc_module(D, FC)
        assert bw_cohomology_range(C, D, 0)[0] == limit(FC, M), name
        assert bw_homology_range(C, D, 0)[0] == colimit(FC, M), name
    assert time.perf_counter() - start < 10


# 3 -------------------------------------------------------------------------


def test_c03_group_fixtures():
    start = time.perf_counter()
    bz2, bz3 = cyclic_group(2), cyclic_group(3)
    assert [p.dim for p in bw_cohomology_range(bz2, trivial_system(bz2, F2), 4)] == [1] * 5
    D3 = trivial_system(bz3, INT)
    assert _fields(bw_cohomology_range(bz3, D3, 4)) == [
        (1, ()), (0, ()), (0, (3,)), (0, ()), (0, (3,))]
    assert _fields(bw_homology_range(bz3, D3, 3)) == [
        (1, ()), (0, (3,)), (0, ()), (0, (3,))]
    assert time.perf_counter() - start < 30


# 4 -------------------------------------------------------------------------


def test_c04_normalized_equals_full():
    for name, C, D in natural_systems():
        N = 3 if len(C.morphisms) <= 10 else 2
        assert bw_cohomology_range(C, D, N) == bw_cohomology_range(C, D, N, normalized=False), name
        assert bw_homology_range(C, D, N) == bw_homology_range(C, D, N, normalized=False), name


# 5 -------------------------------------------------------------------------


def test_c05_equivalence_invariance():
    W, T = walking_iso(), terminal()
    to_t = to_terminal(W, T)
    from catcohom.fincat import FinFunctor

    from_t = FinFunctor(T, W, {"*": "a"}, {"id": W.id("a")}).validate()
    for rk in (1, 2):
        for phi, D in ((to_t, trivial_system(T, F2, rk)), (from_t, trivial_system(W, F2, rk))):
            for n in range(4):
                M = induced_on_bw(phi, D, n)
                assert M.nrows == M.ncols and rank(M) == M.nrows
                assert M.nrows == 0 or is_invertible(M)


# 6 -------------------------------------------------------------------------


def _degeneration_fixtures():
    bc = base_categories()
    return [(name, bc[name], trivial_system(bc[name], F2))
            for name in ("arrow", "chain2", "walking-iso", "bz2", "swap-total")]


def test_c06_degeneration():
    start = time.perf_counter()
    N = 3
    for name, C, D in _degeneration_fixtures():
        row = e2_page(identity_functor(C), D, N)
        col = e2_page(to_terminal(C), D, N)
        for p in range(N + 1):
            for q in range(N + 1 - p):
                if q >= 1:
                    assert row.dim(p, q) == 0, (name, p, q)
                if p >= 1:
                    assert col.dim(p, q) == 0, (name, p, q)
            assert row.dim(p, 0) == row.abutment[p].dim, name
            assert col.dim(0, p) == col.abutment[p].dim, name
        assert check_consistency(row)["degenerate"] == "row"
        assert check_consistency(col)["degenerate"] in ("column", "row")
        assert page_passes(check_consistency(row)) and page_passes(check_consistency(col))
    assert time.perf_counter() - start < 120


# 7 -------------------------------------------------------------------------


def test_c07_cartan_leray():
    start = time.perf_counter()
    A = trivial_action()
    fib = grothendieck(A)
    D = trivial_system(fib.total, F2)
    page = cartan_leray(A, D, 3)
    assert [page.dim(p, 0) for p in range(4)] == [1, 1, 1, 1]
    assert [g.dim for g in page.abutment] == [1, 1, 1, 1]
    general = e2_page(fib.u, D, 3)
    assert {k: v.dim for k, v in general.grid.items()} == {k: v.dim for k, v in page.grid.items()}

    A = swap_action()
    fib = grothendieck(A)
    D = trivial_system(fib.total, F2)
    page = cartan_leray(A, D, 3)
    assert {k: v.dim for k, v in page.grid.items() if v.dim} == {(0, 0): 1}
    assert [g.dim for g in page.abutment] == [1, 0, 0, 0]
    general = e2_page(fib.u, D, 3)
    assert {k: v.dim for k, v in general.grid.items()} == {k: v.dim for k, v in page.grid.items()}
    assert time.perf_counter() - start < 120


# 8 -------------------------------------------------------------------------


def test_c08_universal_inequality():
    start = time.perf_counter()
    bc = base_categories()
    bases = [bc[k] for k in ("terminal", "arrow", "bz2", "walking-iso", "chain2")]
    loop_free = 0
    for seed in range(25):
        u, D = random_instance(random.Random(seed), bases, F2)
        assert len(u.source.morphisms) <= 12
        page = e2_page(u, D, 2)
        H = bw_cohomology_range(u.source, D, 2)
        for n in range(3):
            assert H[n].dim <= page.diagonal(n), (seed, n)
        verdict = check_consistency(page)
        assert page_passes(verdict), (seed, verdict)
        if page.loop_free:
            loop_free += 1
            assert verdict["euler"] == "PASS", seed
    assert loop_free > 0
    assert time.perf_counter() - start < 600


# 9 -------------------------------------------------------------------------


def test_c09_identity_fibration_is_local():
    for name, C, D in natural_systems():
        if len(C.morphisms) > 10:
            continue
        rows = is_local(identity_fibration(C), D, 2)
        assert all(r["local"] for r in rows), name


@pytest.mark.xfail(strict=True, reason="under D_b = D∘F(i_b)∘F(R_b) every natural system is "
                   "local; no non-local fixture exists (argument recorded in the decisions ledger)")
def test_c09_adversarial_fixture_is_not_local():
    _, fib, D = nonlocal_candidate()
    rows = is_local(fib, D, 2)
    assert not all(r["local"] for r in rows)


# 10 ------------------------------------------------------------------------


def _write(path, data):
    path.write_text(json.dumps(data))
    return path


def test_c10_broken_associativity(tmp_path):
    # identity e; a∘a = a, a∘b = b, b∘a = a, b∘b = a: (b∘a)∘b = b but b∘(a∘b) = a
    table = {("a", "a"): "a", ("a", "b"): "b", ("b", "a"): "a", ("b", "b"): "a"}
    cat = {
        "objects": ["*"],
        "morphisms": [{"name": m, "src": "*", "tgt": "*"} for m in ("e", "a", "b")],
        "identities": {"*": "e"},
        "composition": [[g, f, h] for (g, f), h in table.items()],
    }
    code, out = _cli(["validate", _write(tmp_path / "cat.json", cat)])
    assert code == 2 and out["error"] == "BrokenAssociativity"


def test_c10_non_functorial_natsys(fixture_dir):
    d = fixture_dir("bz2")
    data = json.loads((d / "trivial_f2.json").read_text())
    for entry in data["right"]:
        if entry["f"] == "g" and entry["alpha"] == "g":
            entry["matrix"] = [["0"]]
    code, out = _cli(["validate", _write(d / "bad.json", data)])
    assert code == 2 and out["error"] == "FunctorialityViolation"


def test_c10_non_strict_action(fixture_dir):
    d = fixture_dir("swap-action")
    data = json.loads((d / "swap_action.json").read_text())
    swap = next(m["functor"] for m in data["maps"] if m["beta"] == "g")
    for m in data["maps"]:
        if m["beta"] == "e":
            m["functor"] = swap
    code, out = _cli(["validate", _write(d / "bad_action.json", data)])
    assert code == 2 and out["error"] == "NotStrict"


def test_c10_non_cartesian_inverting(fixture_dir):
    d = fixture_dir("trivial-action")
    data = json.loads((d / "trivial_f2.json").read_text())
    for entry in data["right"]:
        if entry["alpha"].startswith("(g,"):
            entry["matrix"] = [["0"]]
    bad = _write(d / "bad_f2.json", data)
    code, out = _cli(["cartan-leray", "--action", d / "trivial_action.json", "--natsys", bad])
    assert code == 2 and out["error"] == "NotCartesianInverting"
