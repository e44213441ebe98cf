import io
import json
import subprocess
import sys

import pytest

from catcohom.cli import run
from catcohom.corpus import FIXTURES


def cli(*argv):
    out = io.StringIO()
    code = run([str(a) for a in argv], stdout=out)
    return code, out.getvalue()


def cli_json(*argv):
    code, text = cli(*argv)
    return code, json.loads(text)


@pytest.mark.parametrize("name", [n for n in FIXTURES])
def test_every_fixture_validates(fixture_dir, name):
    d = fixture_dir(name)
    paths = sorted(d.iterdir())
    code, out = cli_json("validate", *paths)
    assert code == 0
    assert all(r["valid"] for r in out["results"])


def test_validate_terminal(fixture_dir):
    d = fixture_dir("terminal")
    code, out = cli_json("validate", d / "terminal.json")
    assert code == 0 and out["results"][0]["kind"] == "category"


def test_bz2_cohomology(fixture_dir):
    d = fixture_dir("bz2")
    code, out = cli_json("cohomology", "--cat", d / "bz2.json", "--natsys", d / "trivial_f2.json",
                         "--max-degree", 4)
    assert code == 0 and out["theory"] == "BW"
    assert [r["rank"] for r in out["results"]] == [1, 1, 1, 1, 1]


def test_bz3_full_and_normalized_agree(fixture_dir):
    d = fixture_dir("bz3")
    a = cli("cohomology", "--natsys", d / "trivial_z.json", "--max-degree", 4)
    b = cli("cohomology", "--natsys", d / "trivial_z.json", "--max-degree", 4, "--full")
    assert a == b
    torsion = [r["torsion"] for r in json.loads(a[1])["results"]]
    assert torsion == [[], [], [3], [], [3]]


def test_module_commands(fixture_dir):
    d = fixture_dir("bz2")
    assert cli_json("limit", "--module", d / "sign_z.json")[1]["value"] == {"rank": 0,
                                                                           "torsion": []}
    assert cli_json("colimit", "--module", d / "sign_z.json")[1]["value"] == {"rank": 0,
                                                                             "torsion": [2]}
    code, out = cli_json("cohomology", "--module", d / "sign_z.json", "--max-degree", 2)
    assert out["theory"] == "lim" and out["results"][1]["torsion"] == [2]
    code, out = cli_json("homology", "--module", d / "sign_z.json", "--max-degree", 1)
    assert out["theory"] == "colim" and out["results"][0]["torsion"] == [2]


def test_e2_swap(fixture_dir):
    d = fixture_dir("swap-action")
    code, out = cli_json("e2", "--functor", d / "swap_u.json", "--natsys", d / "trivial_f2.json",
                         "--max-total", 3, "--ring", "F2")
    assert code == 0
    assert out["verdict"]["inequalities"] == "PASS"
    assert {(g["p"], g["q"]) for g in out["grid"] if g["dim"]} == {(0, 0)}


def test_cartan_leray_reports_coefficient_modules(fixture_dir):
    d = fixture_dir("trivial-action")
    code, out = cli_json("cartan-leray", "--action", d / "trivial_action.json",
                         "--natsys", d / "trivial_f2.json", "--max-total", 3)
    assert code == 0 and out["abutment"] == [1, 1, 1, 1]
    assert out["coefficient_modules"][0]["dim"] == 1


def test_locality_identity_fibration(fixture_dir):
    d = fixture_dir("chain-posets")
    code, out = cli_json("locality", "--cat", d / "chain2.json",
                         "--natsys", d / "chain2_trivial_z.json")
    assert code == 0 and out["local"]
    assert {r["method"] for r in out["results"]} == {"presentation-equal"}


def test_grothendieck_writes_a_loadable_functor(fixture_dir, tmp_path):
    d = fixture_dir("swap-action")
    out_path = tmp_path / "u.json"
    code, _ = cli("grothendieck", "--action", d / "swap_action.json", "--out", out_path)
    assert code == 0
    code, out = cli_json("validate", out_path)
    assert code == 0 and out["results"][0]["kind"] == "functor"


def test_locality_candidate_fixture_reports_local(fixture_dir):
    d = fixture_dir("nonlocal")
    code, out = cli_json("locality", "--action", d / "nonlocal_action.json",
                         "--natsys", d / "ideal_f2.json")
    assert code == 0 and out["local"] is True


def test_exit_code_one_on_page_failure(monkeypatch, fixture_dir):
    import catcohom.cli as cli_mod

    real = cli_mod.e2_page

    def tampered(*args, **kw):
        return real(*args, **kw).copy_with(0, 0, -1)

    monkeypatch.setattr(cli_mod, "e2_page", tampered)
    fixture = fixture_dir("swap-action")
    code, out = cli_json("e2", "--functor", fixture / "swap_u.json",
                         "--natsys", fixture / "trivial_f2.json", "--max-total", 2)
    assert code == 1 and out["verdict"]["violations"]


@pytest.mark.parametrize("argv,error", [
    (["example", "nope"], "UnknownFixture"),
    (["bogus"], "UsageError"),
    ([], "UsageError"),
    (["cohomology", "--natsys", "missing.json"], "ParseError"),
    (["cohomology", "--max-degree", "0"], "UsageError"),
])
def test_input_errors_exit_two(tmp_path, argv, error):
    code, out = cli_json(*argv)
    assert code == 2 and out["error"] == error and out["message"]


def test_ring_mismatch(fixture_dir):
    d = fixture_dir("bz2")
    code, out = cli_json("cohomology", "--natsys", d / "trivial_f2.json", "--ring", "Z")
    assert code == 2 and out["error"] == "RingMismatch"


def test_size_guard_env(fixture_dir, monkeypatch):
    d = fixture_dir("chain-posets")
    monkeypatch.setenv("CATCOHOM_SIZE_GUARD", "5")
    code, out = cli_json("validate", d / "chain3.json")
    assert code == 2 and out["error"] == "SizeGuard"
    code, out = cli_json("validate", d / "chain3.json", "--size-guard", "50")
    assert code == 0


def test_pretty_does_not_change_payload(fixture_dir):
    d = fixture_dir("bz3")
    _, a = cli("cohomology", "--natsys", d / "trivial_z.json")
    _, b = cli("cohomology", "--natsys", d / "trivial_z.json", "--pretty")
    assert json.loads(a) == json.loads(b) and a != b


def test_output_is_byte_identical_across_processes(fixture_dir):
    d = fixture_dir("swap-action")
    argv = [sys.executable, "-m", "catcohom", "e2", "--functor", str(d / "swap_u.json"),
            "--natsys", str(d / "trivial_f2.json"), "--max-total", "2"]
    runs = [subprocess.run(argv, capture_output=True, check=True).stdout for _ in range(2)]
    assert runs[0] == runs[1] and runs[0]


def test_random_example_is_seeded(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    cli("example", "random", "--seed", 7, "--out-dir", a)
    cli("example", "random", "--seed", 7, "--out-dir", b)
    for f in a.iterdir():
        assert f.read_bytes() == (b / f.name).read_bytes()
    code, out = cli_json("e2", "--functor", a / "u.json", "--natsys", a / "natsys.json",
                         "--max-total", 2)
    assert code == 0 and out["verdict"]["violations"] == []
