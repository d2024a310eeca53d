"""End-to-end coverage of the hodlr-funm command line."""

import subprocess
import sys

import numpy as np
import pytest

from hodlrfunm import (
    funm_eig,
    gen_hermitian_tridiagonal,
    get_function,
    matrix_from_text,
    read_matrix,
    write_matrix,
)
from hodlrfunm.cli import main


def matrix_file(tmp_path, a, name="a.txt"):
    path = tmp_path / name
    write_matrix(str(path), a)
    return str(path)


class TestFunmCommand:
    def test_identity_returns_input(self, tmp_path, capsys):
        a = gen_hermitian_tridiagonal(32, 0)
        rc = main(["funm", matrix_file(tmp_path, a), "--function", "identity"])
        assert rc == 0
        got = matrix_from_text(capsys.readouterr().out)
        assert np.linalg.norm(got - a, 2) <= 1e-12 * np.linalg.norm(a, 2)

    def test_exp_matches_eigendecomposition(self, tmp_path, capsys):
        a = gen_hermitian_tridiagonal(32, 1)
        oracle = funm_eig(a, get_function("exp"))
        rc = main(["funm", matrix_file(tmp_path, a), "--function", "exp"])
        assert rc == 0
        got = matrix_from_text(capsys.readouterr().out)
        assert np.linalg.norm(got - oracle, 2) <= 1e-10 * np.linalg.norm(oracle, 2)

    def test_pole_file(self, tmp_path, capsys):
        a = gen_hermitian_tridiagonal(32, 2)
        poles = tmp_path / "poles.txt"
        poles.write_text("# simple pole of 1/sin at the origin\n0,0 1 1,0\n")
        oracle = funm_eig(a, get_function("exp_over_sin"))
        rc = main([
            "funm", matrix_file(tmp_path, a),
            "--function", "exp_over_sin", "--poles", str(poles),
        ])
        assert rc == 0
        got = matrix_from_text(capsys.readouterr().out)
        assert np.linalg.norm(got - oracle, 2) <= 1e-8 * np.linalg.norm(oracle, 2)

    def test_hodlr_path(self, tmp_path, capsys):
        a = gen_hermitian_tridiagonal(96, 0)
        oracle = funm_eig(a, get_function("exp"))
        # the row-sum heuristic cannot certify this contour, only warn
        with pytest.warns(UserWarning, match="caller's assertion"):
            rc = main(["funm", matrix_file(tmp_path, a), "--function", "exp", "--hodlr"])
        assert rc == 0
        got = matrix_from_text(capsys.readouterr().out)
        assert np.linalg.norm(got - oracle, 2) <= 1e-9 * np.linalg.norm(oracle, 2)

    def test_out_file(self, tmp_path, capsys):
        a = gen_hermitian_tridiagonal(16, 3)
        out = tmp_path / "result.txt"
        rc = main([
            "funm", matrix_file(tmp_path, a),
            "--function", "identity", "--out", str(out),
        ])
        assert rc == 0
        assert capsys.readouterr().out == ""
        got = read_matrix(str(out))
        assert np.linalg.norm(got - a, 2) <= 1e-12 * np.linalg.norm(a, 2)

    def test_missing_matrix_file(self, tmp_path, capsys):
        rc = main(["funm", str(tmp_path / "missing.txt"), "--function", "exp"])
        assert rc == 1
        assert "error:" in capsys.readouterr().err

    def test_malformed_pole_file(self, tmp_path, capsys):
        a = gen_hermitian_tridiagonal(16, 0)
        poles = tmp_path / "poles.txt"
        poles.write_text("just-one-token\n")
        rc = main([
            "funm", matrix_file(tmp_path, a),
            "--function", "exp_over_sin", "--poles", str(poles),
        ])
        assert rc == 1
        assert "error:" in capsys.readouterr().err

    def test_unknown_function_is_usage_error(self, tmp_path):
        a = gen_hermitian_tridiagonal(16, 0)
        with pytest.raises(SystemExit) as exc:
            main(["funm", matrix_file(tmp_path, a), "--function", "gamma"])
        assert exc.value.code == 2


class TestBoundCommand:
    def test_frozen_interval_curve(self, capsys):
        rc = main(["bound", "--enclosure", "interval:0.6", "--lmax", "5"])
        assert rc == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "l,bound"
        values = [float(ln.split(",")[1]) for ln in lines[1:]]
        expected = [
            2.579295300000171,
            0.21914254054597473,
            0.01506874771735176,
            0.0008740874906124161,
            4.311820252783706e-05,
        ]
        assert values == pytest.approx(expected, rel=1e-12)

    def test_disc_curve_decreases(self, capsys):
        rc = main(["bound", "--enclosure", "disc:0.5", "--lmax", "4"])
        assert rc == 0
        lines = capsys.readouterr().out.strip().splitlines()
        values = [float(ln.split(",")[1]) for ln in lines[1:]]
        assert len(values) == 4
        assert all(v > 0 for v in values)
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_out_file(self, tmp_path, capsys):
        out = tmp_path / "curve.csv"
        rc = main(["bound", "--enclosure", "interval:0.6", "--lmax", "2",
                   "--out", str(out)])
        assert rc == 0
        assert capsys.readouterr().out == ""
        assert out.read_text().startswith("l,bound\n1,")

    def test_bad_enclosure_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["bound", "--enclosure", "ball:0.5"])
        assert exc.value.code == 2

    def test_invalid_interval_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["bound", "--enclosure", "interval:1.5"])
        assert exc.value.code == 2


class TestExperimentCommand:
    def test_smoke(self, capsys):
        rc = main(["experiment", "--kind", "tridiag", "--function", "exp",
                   "--m", "16", "--trials", "1"])
        assert rc == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "trial,l,sigma_l,bound_l"
        assert len(lines) == 9

    def test_seed_sources(self, tmp_path, monkeypatch, capsys):
        argv = ["experiment", "--kind", "tridiag", "--m", "16", "--trials", "1"]

        monkeypatch.delenv("HODLR_FUNM_SEED", raising=False)
        main(argv + ["--seed", "3"])
        explicit = capsys.readouterr().out

        monkeypatch.setenv("HODLR_FUNM_SEED", "3")
        main(argv)
        from_env = capsys.readouterr().out

        # an explicit flag beats the environment
        main(argv + ["--seed", "5"])
        flag_wins = capsys.readouterr().out

        monkeypatch.delenv("HODLR_FUNM_SEED")
        main(argv + ["--seed", "5"])
        assert from_env == explicit
        assert flag_wins == capsys.readouterr().out
        assert flag_wins != explicit

    def test_bad_env_seed(self, monkeypatch, capsys):
        monkeypatch.setenv("HODLR_FUNM_SEED", "many")
        rc = main(["experiment", "--kind", "tridiag", "--m", "16", "--trials", "1"])
        assert rc == 1
        assert "HODLR_FUNM_SEED" in capsys.readouterr().err

    def test_out_file(self, tmp_path, capsys):
        out = tmp_path / "decay.csv"
        rc = main(["experiment", "--kind", "tridiag", "--m", "16", "--trials", "1",
                   "--out", str(out)])
        assert rc == 0
        assert capsys.readouterr().out == ""
        assert out.read_text().startswith("trial,l,sigma_l,bound_l\n")


class TestBenchCommand:
    def test_smoke(self, capsys):
        rc = main(["bench-expsin", "--sizes", "32"])
        assert rc == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == (
            "size,t_inv,res_inv,t_sum,res_sum,nResolvents_inv,nResolvents_sum"
        )
        row = lines[1].split(",")
        assert row[0] == "32"
        assert float(row[2]) <= 1e-10
        assert float(row[4]) <= 1e-10


class TestSelftest:
    def test_all_checks_pass(self, capsys):
        rc = main(["selftest"])
        out = capsys.readouterr().out
        assert rc == 0
        lines = out.strip().splitlines()
        assert len(lines) == 6
        assert all(ln.startswith("ok") for ln in lines)


class TestUsage:
    def test_unknown_subcommand(self):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

    def test_no_arguments(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2


class TestInstalledEntryPoint:
    def test_console_script(self):
        proc = subprocess.run(
            ["hodlr-funm", "bound", "--enclosure", "interval:0.6", "--lmax", "2"],
            capture_output=True, text=True, timeout=120,
        )
        assert proc.returncode == 0
        assert proc.stdout.startswith("l,bound\n")

    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "hodlrfunm.cli", "bound",
             "--enclosure", "disc:0.5", "--lmax", "1"],
            capture_output=True, text=True, timeout=120,
        )
        assert proc.returncode == 0
        assert proc.stdout.startswith("l,bound\n")
