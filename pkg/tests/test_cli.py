import io
import xml.etree.ElementTree as ET

import pytest

from saskit.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSldCommand:
    def test_heavy_water(self, capsys):
        code, out, _ = run_cli(capsys, "sld", "D2O", "--density", "1.1044")
        assert code == 0
        assert "6.35" in out
        assert "1e-6/A^2" in out

    def test_empty_formula(self, capsys):
        code, _, err = run_cli(capsys, "sld", "", "--density", "1")
        assert code == 2
        assert "empty formula" in err

    def test_negative_density(self, capsys):
        code, _, err = run_cli(capsys, "sld", "H2O", "--density", "-1")
        assert code == 2


class TestGenerateCommand:
    def test_lamellar_file(self, capsys, tmp_path):
        out_file = tmp_path / "lam.txt"
        code, out, _ = run_cli(capsys, "generate", "--model", "lamellar",
                               "--set", "thickness=50",
                               "--qmin", "0.01", "--qmax", "1", "--n", "200",
                               "--out", str(out_file))
        assert code == 0
        lines = out_file.read_text().splitlines()
        assert lines[0].startswith("#")
        assert len(lines) == 201

    def test_unknown_model(self, capsys):
        code, _, err = run_cli(capsys, "generate", "--model", "flexible_cylinder")
        assert code == 2
        assert "unknown model" in err

    def test_determinism(self, capsys, tmp_path):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        for target in (a, b):
            code, *_ = run_cli(capsys, "generate", "--model", "sphere",
                               "--noise", "0.02", "--seed", "9",
                               "--out", str(target))
            assert code == 0
        assert a.read_text() == b.read_text()

    def test_svg_well_formed(self, capsys, tmp_path):
        svg = tmp_path / "p.svg"
        code, *_ = run_cli(capsys, "generate", "--model", "sphere",
                           "--plot", str(svg), "--out", str(tmp_path / "d.txt"))
        assert code == 0
        root = ET.fromstring(svg.read_text())
        assert root.tag.endswith("svg")


class TestFitCommand:
    def test_round_trip_with_plot(self, capsys, tmp_path, colloid_mirror_text):
        data = tmp_path / "colloid.txt"
        data.write_text(colloid_mirror_text)
        svg = tmp_path / "fit.svg"
        code, out, _ = run_cli(
            capsys, "fit", str(data), "--model", "sphere",
            "--fix", "sld=1", "--fix", "sld_solvent=6.36",
            "--init", "radius=560", "--bound", "radius=100,1200",
            "--plot", str(svg))
        assert code == 0
        assert "Model: sphere" in out
        assert "radius" in out and "+/-" in out
        assert "sld_solvent = 6.36" in out
        root = ET.fromstring(svg.read_text())
        assert root.tag.endswith("svg")

    def test_missing_file(self, capsys):
        code, _, err = run_cli(capsys, "fit", "/nonexistent.dat",
                               "--model", "sphere")
        assert code == 2
        assert "no such data file" in err

    def test_nonconvergence_exit_code(self, capsys, tmp_path, colloid_mirror_text):
        data = tmp_path / "colloid.txt"
        data.write_text(colloid_mirror_text)
        code, out, _ = run_cli(
            capsys, "fit", str(data), "--model", "sphere",
            "--fix", "sld=1", "--fix", "sld_solvent=6.36",
            "--init", "radius=300", "--bound", "radius=100,1200",
            "--max-iter", "1")
        assert code == 3
        assert "NO" in out


class TestModelsCommand:
    def test_list(self, capsys):
        code, out, _ = run_cli(capsys, "models", "list")
        assert code == 0
        names = [line.split()[0] for line in out.strip().splitlines()]
        assert names == ["cylinder", "ellipsoid", "lamellar", "sphere"]

    def test_doc(self, capsys):
        code, out, _ = run_cli(capsys, "models", "doc", "sphere")
        assert code == 0
        assert "Parameters" in out and "Equation" in out

    def test_doc_requires_name(self, capsys):
        code, _, err = run_cli(capsys, "models", "doc")
        assert code == 2


class TestSearchDocsCommand:
    def test_lamellar_first(self, capsys):
        code, out, _ = run_cli(capsys, "search-docs", "lamellar")
        assert code == 0
        assert out.strip().splitlines()[0].startswith("lamellar")


class TestChatCommand:
    def test_scripted_transcript_deterministic(self, capsys, monkeypatch,
                                               no_network):
        prompts = ("What can you do for me?\n"
                   "Calculate the SLD of heavy water (D2O) with density "
                   "1.1044 g/cm3.\n")
        outputs = []
        for _ in range(2):
            monkeypatch.setattr("sys.stdin", io.StringIO(prompts))
            code = main(["chat", "--backend", "scripted"])
            assert code == 0
            outputs.append(capsys.readouterr().out)
        assert outputs[0] == outputs[1]
        assert "SLD calculation" in outputs[0]
        assert "6.35" in outputs[0]

    def test_preloaded_data_fit(self, capsys, monkeypatch, tmp_path,
                                colloid_mirror_text, no_network):
        data = tmp_path / "colloid.txt"
        data.write_text(colloid_mirror_text)
        monkeypatch.setattr("sys.stdin", io.StringIO(
            "Fit my uploaded data with the sphere model; the solvent is "
            "heavy water and the sample SLD is about 1.\n"))
        code = main(["chat", "--backend", "scripted", "--data", str(data)])
        out = capsys.readouterr().out
        assert code == 0
        assert "radius" in out
        assert "[plots:" in out
