import json
import subprocess
import sys

import pytest

from fringetrees.cli import main
from fringetrees.textio import parse_tree


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_generate_and_compress(tmp_path, capsys):
    code, out, _ = run(["generate", "--model", "bst", "--n", "50", "--seed", "4", "--count", "3"],
                       capsys)
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 3 and all(parse_tree(s).n_leaves == 50 for s in lines)
    code2, out2, _ = run(["generate", "--model", "bst", "--n", "50", "--seed", "4", "--count", "3"],
                         capsys)
    assert out2 == out
    path = tmp_path / "sample.txt"
    path.write_text(out)
    code, summary, _ = run(["compress", "--input", str(path), "--mode", "both"], capsys)
    assert code == 0
    rows = summary.splitlines()
    assert rows[0] == "n,ordered_count,unordered_count" and len(rows) == 4
    code, doc, _ = run(["compress", "--input", str(path), "--format", "dag-json",
                        "--mode", "unordered"], capsys)
    docs = json.loads(doc)
    assert len(docs) == 3 and docs[0]["unordered"]["mode"] == "unordered"


def test_binary_framing(tmp_path):
    gen = subprocess.run([sys.executable, "-m", "fringetrees", "generate", "--model", "uniform",
                          "--n", "300", "--seed", "2", "--count", "2", "--format", "binary"],
                         capture_output=True, check=True)
    path = tmp_path / "trees.bin"
    path.write_bytes(gen.stdout)
    res = subprocess.run([sys.executable, "-m", "fringetrees", "compress", "--input", str(path),
                          "--input-format", "binary"], capture_output=True, text=True, check=True)
    assert len(res.stdout.splitlines()) == 3


@pytest.mark.parametrize("argv", [
    ["generate", "--model", "uniform", "--n", "0", "--seed", "1"],
    ["generate", "--model", "galton", "--n", "5", "--seed", "1"],
    ["generate", "--model", "uniform", "--n", "5"],
    ["generate", "--model", "uniform", "--n", "5", "--seed", "1", "--bogus"],
    ["stats", "exact", "--n", "100000"],
    ["constants", "--precision", "0"],
    ["experiment", "--kind", "counts", "--model", "bst", "--n", "10", "--trials", "1",
     "--seed", "1", "--epsilon", "0.9"],
    ["experiment", "--kind", "concentration", "--model", "uniform", "--n", "100000",
     "--trials", "1", "--seed", "1"],
    ["experiment", "--kind", "clt", "--model", "uniform", "--n", "64", "--trials", "100",
     "--seed", "1", "--statistic", "sym_bst"],
    [],
])
def test_usage_errors(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2
    assert len(err.strip().splitlines()) == 1 and err.startswith("fringetrees: error:")


def test_runtime_errors(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("((LL)\n")
    code, _, err = run(["compress", "--input", str(bad)], capsys)
    assert code == 1 and "position 5" in err
    code, _, err = run(["compress", "--input", str(tmp_path / "none.txt")], capsys)
    assert code == 1 and "none.txt" in err
    code, _, err = run(["experiment", "--kind", "counts", "--model", "bst", "--n", "10",
                        "--trials", "1", "--seed", "1", "--out", str(tmp_path / "no" / "x")],
                       capsys)
    assert code == 1 and len(err.strip().splitlines()) == 1


def test_stats_exact(capsys):
    code, out, _ = run(["stats", "exact", "--n", "4"], capsys)
    assert code == 0
    rows = [r.split(",") for r in out.splitlines()]
    assert rows[0][:4] == ["n", "k", "catalan", "wedderburn_etherington"]
    assert rows[2] == ["4", "2", "1", "1", "6/5", "1/5", "1/5", "4/3"]


def test_constants_json(capsys):
    code, out, _ = run(["constants", "--mu-terms", "100000", "--precision", "8"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["nu"]["reference"] == 0.3795493473
    assert abs(doc["nu"]["value"] - 0.3795493473) < 1e-7
    assert doc["mu"]["tail_bound"] > 0
    code, ref, _ = run(["constants", "--reference-only"], capsys)
    assert json.loads(ref)["c"]["value"] == pytest.approx(1.3285649405, abs=1e-10)


def test_experiment_outputs(tmp_path, capsys):
    for kind, extra in (("counts", []), ("concentration", ["--cut-point", "0.25"]),
                        ("clt", ["--statistic", "sym_bst"])):
        outs = []
        for i in range(2):
            p = tmp_path / f"{kind}{i}.json"
            code, _, err = run(["experiment", "--kind", kind, "--model", "bst", "--n", "2000",
                                "--trials", "100", "--seed", "5", "--format", "json",
                                "--out", str(p), *extra], capsys)
            assert code == 0, err
            outs.append(p.read_bytes())
        assert outs[0] == outs[1]
        assert json.loads(outs[0])["kind"] == kind


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
