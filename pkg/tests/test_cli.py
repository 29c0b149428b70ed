"""Tests for the command line"""

from pathlib import Path

import numpy as np
import orjson
import pytest

from stellar.main import EXIT_DOMAIN, EXIT_IO, EXIT_OK, main

R2 = 1 / np.sqrt(2)


def read(path) -> dict:
    return orjson.loads(Path(path).read_bytes())


def amplitudes(document: dict) -> np.ndarray:
    return np.array([complex(re, im) for re, im in document["amps"]])


@pytest.fixture
def out(tmp_path) -> str:
    return str(tmp_path / "out.json")


class TestPoints:
    """Tests for `stellar points`"""

    def test_noon_state(self, write_state, out):
        """Test that a spin-2 NOON state gives four equatorial points"""
        path = write_state("noon.json", [1, 0, 0, 0, 1], kind="spin", J="2")

        assert main(["--out", out, "points", path]) == EXIT_OK

        group = read(out)["spheres"][0]["groups"][0]
        assert group["j"] == "2"
        assert group["degeneracy"] == [1, 1, 1, 1]
        assert np.allclose(np.array(group["points"])[:, 2], 0.0, atol=1e-10)

    def test_symmetric_qubit_state(self, write_state, out):
        """Test that a symmetric qubit file is read as a spin state"""
        path = write_state("ghz.json", [R2, 0, 0, R2], N=2)

        assert main(["--out", out, "points", "--verbose", path]) == EXIT_OK

        report = read(out)
        assert report["j"] == "1"
        assert len(report["root_residuals"]) == 2
        assert max(report["root_residuals"]) <= 1e-10

    def test_asymmetric_qubit_state(self, write_state, out):
        """Test that a non-symmetric qubit file is a domain error"""
        path = write_state("asym.json", [0, 1, 0, 0], N=2)

        assert main(["--out", out, "points", path]) == EXIT_DOMAIN

    def test_stdout(self, write_state, capsys):
        """Test that documents go to stdout without --out"""
        path = write_state("up.json", [1, 0], kind="spin", J="1/2")

        assert main(["points", path]) == EXIT_OK

        document = orjson.loads(capsys.readouterr().out)
        assert document["spheres"][0]["groups"][0]["points"] == [[0.0, 0.0, 1.0]]


class TestDecompose:
    """Tests for `stellar decompose`"""

    def test_logical_state(self, write_state, logical_state, out):
        """Test the |xi| table and both spheres of the logical example"""
        path = write_state("logical.json", logical_state.amps, N=3)

        assert main(["--out", out, "decompose", path]) == EXIT_OK

        report = read(out)
        assert [b["path"] for b in report["blocks"]] == ["1/2->1->3/2", "1/2->1->1/2", "1/2->0->1/2"]
        assert [b["xi_abs"] for b in report["blocks"]] == pytest.approx([0.0, R2, R2])
        assert report["reconstruction_residual"] <= 1e-10

        representation, multiplicity = report["constellation"]["spheres"]
        assert [g["alpha"] for g in representation["groups"]] == [0, 1]
        assert representation["groups"][0]["points"][0] == pytest.approx([-1.0, 0.0, 0.0], abs=1e-10)
        assert representation["groups"][1]["points"][0] == pytest.approx([1.0, 0.0, 0.0], abs=1e-10)
        assert len(multiplicity["groups"]) == 1
        assert multiplicity["groups"][0]["points"][0] == pytest.approx([1.0, 0.0, 0.0], abs=1e-10)

    def test_spin_file_rejected(self, write_state, out):
        """Test that decompose needs a qubit state"""
        path = write_state("spin.json", [1, 0], kind="spin", J="1/2")

        assert main(["--out", out, "decompose", path]) == EXIT_DOMAIN


class TestEvolve:
    """Tests for `stellar evolve`"""

    def test_permutation(self, write_state, out):
        """Test that (12) swaps the two qubits"""
        path = write_state("ket01.json", [0, 1, 0, 0], N=2)

        assert main(["--out", out, "evolve", path, "--perm", "(12)"]) == EXIT_OK

        assert np.allclose(amplitudes(read(out)), [0, 0, 1, 0])

    def test_one_line_permutation_rejected(self, write_state, out):
        """Test that only cycle notation is accepted"""
        path = write_state("ket01.json", [0, 1, 0, 0], N=2)

        assert main(["--out", out, "evolve", path, "--perm", "21"]) == EXIT_DOMAIN

    def test_su2_rotation(self, write_state, out):
        """Test exp(i pi/2 sigma_z) on |0>"""
        path = write_state("up.json", [1, 0], kind="spin", J="1/2")

        assert main(["--out", out, "evolve", path, "--su2", "z,pi/2"]) == EXIT_OK

        assert np.allclose(amplitudes(read(out)), [1j, 0], atol=1e-12)

    def test_logical_rotation_with_constellations(self, write_state, logical_state, tmp_path, out):
        """Test a logical half turn and the before/after documents"""
        path = write_state("logical.json", logical_state.amps, N=3)
        before, after = str(tmp_path / "before.json"), str(tmp_path / "after.json")

        code = main(
            ["--out", out, "evolve", path, "--logical", "pi,0,0", "--before", before, "--after", after]
        )

        assert code == EXIT_OK
        assert np.allclose(amplitudes(read(out)), -np.asarray(logical_state.amps), atol=1e-10)
        assert read(before)["spheres"][0]["label"] == "representation"
        assert len(read(after)["spheres"][0]["groups"]) == 2

    def test_logical_needs_three_qubits(self, write_state, out):
        """Test that logical rotations on two qubits are refused"""
        path = write_state("ket01.json", [0, 1, 0, 0], N=2)

        assert main(["--out", out, "evolve", path, "--logical", "0,0,0"]) == EXIT_DOMAIN

    def test_singular_matrix(self, write_state, tmp_path, out):
        """Test that a singular matrix file is a domain error"""
        path = write_state("up.json", [1, 0], kind="spin", J="1/2")
        matrix = tmp_path / "m.json"
        matrix.write_bytes(orjson.dumps({"rows": [[[1, 0], [2, 0]], [[2, 0], [4, 0]]]}))

        assert main(["--out", out, "evolve", path, "--matrix", str(matrix)]) == EXIT_DOMAIN


class TestInputErrors:
    """Tests for exit codes on bad input"""

    def test_missing_file(self, tmp_path, out):
        """Test that an unreadable file exits with 1"""
        assert main(["--out", out, "points", str(tmp_path / "missing.json")]) == EXIT_IO

    def test_malformed_json(self, tmp_path, out):
        """Test that broken JSON exits with 1"""
        path = tmp_path / "broken.json"
        path.write_text("{not json")

        assert main(["--out", out, "points", str(path)]) == EXIT_IO

    def test_wrong_amplitude_count(self, write_state, out):
        """Test that the amplitude count must match N"""
        path = write_state("short.json", [1, 0, 0], N=2)

        assert main(["--out", out, "decompose", path]) == EXIT_IO

    def test_missing_kind_field(self, write_state, out):
        """Test that kind 'qubits' requires N"""
        path = write_state("no_n.json", [1, 0])

        assert main(["--out", out, "decompose", path]) == EXIT_IO

    def test_nonpositive_eps(self, out):
        """Test that --eps must be positive"""
        assert main(["--eps", "0", "--out", out, "dims", "--n", "2"]) == EXIT_DOMAIN


class TestVerifyAndDims:
    """Tests for `stellar verify` and `stellar dims`"""

    def test_verify_report(self, out):
        """Test a short dfs run"""
        code = main(["--out", out, "--seed", "5", "verify", "--suite", "dfs", "--trials", "2"])

        report = read(out)
        assert code == EXIT_OK
        assert report["passed"] is True
        assert report["suites"][0]["seed"] == 5

    def test_verify_summary_is_logged(self, out, capsys):
        """Test that the per-property summary goes out as JSON log records"""
        argv = ["--out", out, "--log-level", "INFO", "verify", "--suite", "dfs", "--trials", "2"]

        assert main(argv) == EXIT_OK

        records = [orjson.loads(line) for line in capsys.readouterr().err.splitlines() if line]
        summary = [r for r in records if r.get("suite") == "dfs" and "property" in r]
        assert {r["property"] for r in summary} >= {"algebra", "euler", "commutant"}
        assert all(r["passed"] is True for r in summary)

    def test_dims_table(self, out):
        """Test the four-qubit table and its spin view"""
        assert main(["--out", out, "dims", "--n", "4"]) == EXIT_OK

        table = read(out)
        assert table["total"] == 16
        assert [(r["j"], r["multiplicity"]) for r in table["spin_view"]] == [("2", 1), ("1", 3), ("0", 2)]

    def test_dims_without_spin_view(self, out):
        """Test that d > 2 omits the spin view"""
        assert main(["--out", out, "dims", "--n", "3", "--d", "3"]) == EXIT_OK

        table = read(out)
        assert table["total"] == 27
        assert "spin_view" not in table
