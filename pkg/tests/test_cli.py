"""End-to-end tests for the loopsoup command line interface."""

import json

import pytest

from loopsoup.cli import main


def run(tmp_path, *argv, name="out.csv"):
    out = tmp_path / name
    rc = main(list(argv) + ["--out", str(out)])
    return rc, out


def test_alpha_annulus_closed_form(tmp_path):
    rc, out = run(tmp_path, "alpha", "--form", "annulus", "--kind", "loop",
                  "--delta", "0.1", "--R", "1.0")
    assert rc == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0].startswith("form,kind,value")
    row = lines[1].split(",")
    assert row[0] == "annulus" and row[1] == "loop"
    assert float(row[2]) == pytest.approx(0.46051701859880922)


def test_manifest_written_with_checksums(tmp_path):
    rc, out = run(tmp_path, "alpha", "--form", "annulus", "--kind", "disk",
                  "--delta", "0.2", "--R", "0.8")
    assert rc == 0
    manifest = json.loads(
        (tmp_path / "out.csv.manifest.json").read_text())
    assert manifest["command"] == "alpha"
    assert manifest["rng_algorithm"].startswith("numpy PCG64")
    assert manifest["wall_clock_seconds"] >= 0
    ((path, digest),) = manifest["checksums"].items()
    assert path.endswith("out.csv")
    assert len(digest) == 64


def test_invalid_beta_is_config_error(tmp_path):
    rc, _ = run(tmp_path, "one-point", "--beta", "7.0", "--soups", "10")
    assert rc == 2


def test_disk_dimension_window_is_config_error(tmp_path):
    rc, _ = run(tmp_path, "sobolev", "--kind", "disk", "--lam", "4.0",
                "--beta", "3.1", "--soups", "8")
    assert rc == 2


def test_unknown_lemma_is_config_error(tmp_path):
    rc, _ = run(tmp_path, "lemma-check", "--lemma", "nonsense")
    assert rc == 2


def test_lemma_check_triple_integral(tmp_path):
    rc, out = run(tmp_path, "lemma-check", "--lemma", "triple-integral",
                  "--a", "0.5", "--b", "0.3", "--c", "0.3", name="lemma.json")
    assert rc == 0
    data = json.loads(out.read_text())
    assert data["lemma_id"] == "disk_triple_integral"
    assert data["pass"] is True


def test_config_file_fills_flags_and_cli_overrides(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# annulus example\nform = annulus\ndelta = 0.2\nR = 0.8\n"
                   "kind = disk\n")
    rc, out = run(tmp_path, "alpha", "--config", str(cfg), name="a.csv")
    assert rc == 0
    row = out.read_text().strip().splitlines()[1].split(",")
    assert row[1] == "disk"
    import numpy as np
    assert float(row[2]) == pytest.approx(np.pi * np.log(0.8 / 0.2))
    # a flag given on the command line wins over the config file
    rc, out2 = run(tmp_path, "alpha", "--config", str(cfg), "--kind", "loop",
                   name="b.csv")
    assert rc == 0
    assert out2.read_text().strip().splitlines()[1].split(",")[1] == "loop"


def test_same_seed_reproduces_output(tmp_path):
    args = ("sample-soup", "--lam", "2.0", "--delta", "0.3", "--seed", "42")
    rc1, out1 = run(tmp_path, *args, name="s1.csv")
    rc2, out2 = run(tmp_path, *args, name="s2.csv")
    assert rc1 == rc2 == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_kernel_command_writes_grid(tmp_path):
    rc, out = run(tmp_path, "kernel", "--kind", "disk", "--delta", "0.3",
                  "--radial", "3", "--angular", "6", name="k.csv")
    assert rc == 0
    assert out.exists() and out.stat().st_size > 0
