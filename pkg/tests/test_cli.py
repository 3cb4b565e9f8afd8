"""End-to-end tests for the command-line interface."""

import subprocess
import sys

import pytest

from skeinlab.cli import ConfigError, main, parse_config
from skeinlab.skein import Board, canonical_diagram, render_diagram


def test_parse_config_defaults_and_overrides():
    defaults = parse_config("")
    assert defaults["max_n"] == 12
    assert defaults["b_samples"] == 40
    assert defaults["fixture_dir"] == "fixtures"
    values = parse_config(
        "# comment\n\nmax_n = 5\nseed=9\nfixture_dir = other\n"
    )
    assert values["max_n"] == 5
    assert values["seed"] == 9
    assert values["fixture_dir"] == "other"


@pytest.mark.parametrize(
    "text,needle",
    [
        ("wat", "line 1"),
        ("bogus = 3", "unknown key"),
        ("max_n = x", "integer"),
        ("seed = 1\nalso bad", "line 2"),
        ("b_samples = 10", "at least 32"),
        ("max_n = 0", "at least 1"),
    ],
)
def test_parse_config_errors(text, needle):
    with pytest.raises(ConfigError, match=needle):
        parse_config(text)


def test_cheby_cli(capsys):
    assert main(["cheby", "verify", "--max-n", "6"]) == 0
    out = capsys.readouterr().out
    assert "qdiff_closed_form n<=6: PASS" in out
    assert "cosine_from_sines n<=6: PASS" in out
    assert "sine_cosine_product n<=6: PASS" in out
    assert out.strip().endswith("result: PASS")


def test_ncverify_cli(capsys):
    assert main(["ncverify", "--max-n", "3"]) == 0
    out = capsys.readouterr().out
    for n in (1, 2, 3):
        assert f"n={n} commute_many=PASS e_n=PASS" in out
    assert "mutation_detected=PASS" in out
    assert out.strip().endswith("result: PASS")


def test_skein_resolve_and_multiply(tmp_path, capsys):
    board = Board(1)
    text = render_diagram(canonical_diagram(((1,),), board))
    path = tmp_path / "one.diagram"
    path.write_text(text, encoding="utf-8")
    assert main(["skein", "resolve", str(path)]) == 0
    assert capsys.readouterr().out.strip() == "+1 * {1}"
    assert main(["skein", "multiply", str(path), str(path)]) == 0
    assert capsys.readouterr().out.strip() == "+1 * {1|1}"


def test_skein_resolve_input_errors(tmp_path, capsys):
    assert main(["skein", "resolve", str(tmp_path / "missing.diagram")]) == 2
    assert "not found" in capsys.readouterr().err
    bad = tmp_path / "bad.diagram"
    bad.write_text("board holes=1\ncurve junk\n", encoding="utf-8")
    assert main(["skein", "resolve", str(bad)]) == 2
    assert "line 2" in capsys.readouterr().err


def test_fixture_emit_and_verify_cli(tmp_path, capsys):
    target = tmp_path / "fx"
    assert main(["fixtures", "emit", "--dir", str(target)]) == 0
    out = capsys.readouterr().out
    assert "wrote" in out and str(target) in out
    assert main(["skein", "verify-fixture", str(target)]) == 0
    out = capsys.readouterr().out
    assert "fixture r2_hole1: PASS" in out
    assert "SKIPPED" in out
    assert out.strip().endswith("result: PASS")
    # re-emission without --force writes nothing new
    assert main(["fixtures", "emit", "--dir", str(target)]) == 0
    assert "wrote 0 files" in capsys.readouterr().out


def test_chvar_fricke_cli(capsys):
    assert main(["chvar", "fricke", "--trials", "50", "--seed", "1"]) == 0
    out = capsys.readouterr().out
    assert "max_abs_f=" in out
    assert out.strip().endswith("result: PASS")


def test_chvar_scan_cli_deterministic(capsys):
    argv = [
        "chvar",
        "scan",
        "--t-samples",
        "1",
        "--b-samples",
        "32",
        "--n-max",
        "4",
        "--seed",
        "3",
    ]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert sum(1 for line in first.splitlines() if line.startswith("b=")) == 32
    assert "eps_en_ratio_ok=True" in first
    assert first.strip().endswith("result: PASS")
    assert main(argv) == 0
    assert capsys.readouterr().out == first


def test_chvar_scan_rejects_small_grid(capsys):
    argv = ["chvar", "scan", "--t-samples", "1", "--b-samples", "8"]
    assert main(argv) == 2
    assert "at least 32" in capsys.readouterr().err


def test_chvar_scan_rejects_bad_tangles(capsys):
    argv = ["chvar", "scan", "--tangles", "1/3,1/3", "--b-samples", "32"]
    assert main(argv) == 2
    assert "4 tangles" in capsys.readouterr().err


def _write_config(tmp_path, fixture_dir):
    config = tmp_path / "verify.cfg"
    config.write_text(
        "max_n = 6\n"
        "b_samples = 32\n"
        "t_samples = 1\n"
        f"fixture_dir = {fixture_dir}\n",
        encoding="utf-8",
    )
    return config


def test_verify_all_passes_and_is_deterministic(tmp_path, capsys):
    fixtures = tmp_path / "fx"
    assert main(["fixtures", "emit", "--dir", str(fixtures)]) == 0
    capsys.readouterr()
    config = _write_config(tmp_path, fixtures)
    argv = ["verify", "all", "--config", str(config), "--seed", "7"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert first.startswith("seed=7\n")
    assert "cheby.qdiff_closed_form: PASS" in first
    assert "ncrewrite.matrix_lemma: PASS" in first
    assert "ncrewrite.mutation_detected: PASS" in first
    assert "skein.roundtrip: PASS" in first
    assert "skein.epsilon_factorization: PASS" in first
    assert "skein.fixture r2_hole1: PASS" in first
    assert "skein.fixture x1t1: SKIPPED" in first
    assert "chvar.fricke_random: PASS" in first
    assert "chvar.x1_scan: PASS" in first
    assert first.strip().endswith("result: PASS")
    assert main(argv) == 0
    assert capsys.readouterr().out == first


def test_verify_all_without_fixture_dir(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    config = _write_config(tmp_path, tmp_path / "nowhere")
    assert main(["verify", "all", "--config", str(config)]) == 0
    out = capsys.readouterr().out
    assert "skein.fixtures: SKIPPED" in out
    assert out.strip().endswith("result: PASS")


def test_verify_all_flags_corrupt_fixture(tmp_path, capsys):
    fixtures = tmp_path / "fx"
    assert main(["fixtures", "emit", "--dir", str(fixtures)]) == 0
    capsys.readouterr()
    (fixtures / "r2poked.diagram").write_text(
        "board holes=1\ncurve junk\n", encoding="utf-8"
    )
    config = _write_config(tmp_path, fixtures)
    assert main(["verify", "all", "--config", str(config)]) == 1
    out = capsys.readouterr().out
    assert "skein.fixture r2_hole1: FAIL" in out
    assert "skein.fixture x1t1: SKIPPED" in out
    assert out.strip().endswith("result: FAIL")


def test_verify_all_config_errors(tmp_path, capsys):
    config = tmp_path / "broken.cfg"
    config.write_text("max_n = banana\n", encoding="utf-8")
    assert main(["verify", "all", "--config", str(config)]) == 2
    assert "line 1" in capsys.readouterr().err
    assert main(["verify", "all", "--config", str(tmp_path / "nope.cfg")]) == 2
    assert "not found" in capsys.readouterr().err


def test_module_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "skeinlab.cli", "cheby", "verify", "--max-n", "3"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "result: PASS" in proc.stdout
