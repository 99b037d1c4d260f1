import csv
import json
import math
import subprocess
import sys

import jsonschema
import numpy as np
import pytest

from mdlkit.cli import main, run, sample_path
from mdlkit.schemas import SCHEMAS


@pytest.fixture
def files(tmp_path):
    rng = np.random.default_rng(0)
    out = {}

    def write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        out[name] = str(path)

    X = rng.normal(size=(120, 3))
    y = 1.5 * X[:, 0] + rng.normal(size=120)
    write("reg.csv", "a,b,c,y\n" + "".join(",".join(repr(float(v)) for v in [*r, t]) + "\n" for r, t in zip(X, y)))
    x = rng.integers(0, 2, 200)
    w = np.where(rng.random(200) < 0.2, 1 - x, x)
    write("pair.csv", "rain,wet\n" + "".join(f"{'yes' if a else 'no'},{b}\n" for a, b in zip(x, w)))
    write("letters.csv", "s\n" + "".join(f"{c}\n" for c in rng.choice(list("abc"), 60)))
    write("real.csv", "v\n" + "".join(f"{float(v)!r}\n" for v in rng.normal(size=40)))
    write("const.csv", "v\n" + "1\n" * 100)
    write("empty.csv", "")
    write("header_only.csv", "v\n")
    write("mixed.csv", "v\n1\nfoo\n0.5\n")
    out["dir"] = tmp_path
    return out


def ok(argv):
    code, text, schema = run(argv)
    assert code == 0, argv
    if "--format" not in argv:
        payload = json.loads(text)
        jsonschema.validate(payload, SCHEMAS[schema])
        return payload
    return text


def test_complexity_examples():
    assert ok(["complexity", "--n", "2", "--r", "2"])["value"] == pytest.approx(math.log(2.5))
    assert ok(["complexity", "--n", "50", "--r", "1"])["value"] == 0.0
    exact = ok(["complexity", "--n", "100", "--r", "50"])["value"]
    approx = ok(["complexity", "--n", "100", "--r", "50", "--method", "szpankowski"])["value"]
    assert abs(exact - approx) <= 0.1
    bits = ok(["complexity", "--n", "2", "--bits"])
    assert bits["unit"] == "bits" and bits["value"] == pytest.approx(math.log2(2.5))
    ok(["complexity", "--n", "1000", "--r", "3", "--method", "asymptotic"])


def test_select_bundled_sample_prefers_bernoulli():
    payload = ok(["select"])
    assert payload["winner"] == "bernoulli"
    assert {c["label"] for c in payload["candidates"]} == {"bernoulli", "markov1", "markov2"}
    with open(sample_path()) as fh:
        assert next(csv.reader(fh)) == ["flip"]


def test_varsel(files):
    payload = ok(["varsel", "--input", files["reg.csv"], "--target", "y", "--sigma2", "1"])
    assert payload["winner"] == "{a}" and payload["selected"] == ["a"]


def test_markov_levels_recorded(files):
    payload = ok(["markov", "--input", files["letters.csv"], "--max-order", "1"])
    assert sorted(payload["levels"]) == ["a", "b", "c"]


def test_bn_qnml_orientations_equal(files):
    payload = ok(["bn", "--input", files["pair.csv"], "--score", "qnml"])
    scores = list(payload["orientation_scores"].values())
    assert scores[0] == pytest.approx(scores[1], abs=1e-9)
    assert payload["score"] == pytest.approx(sum(payload["local_scores"].values()))


def test_bn_bdeu_and_fnml(files):
    for score in ("bdeu", "fnml"):
        payload = ok(["bn", "--input", files["pair.csv"], "--score", score, "--alpha", "2"])
        assert sum(len(v) for v in payload["dag"].values()) == 1


def test_preq_curve(files):
    curve = files["dir"] / "curve.csv"
    payload = ok(["preq", "--input", files["letters.csv"], "--predictors", "jeffreys,plugin,laplace", "--curve", str(curve)])
    assert payload["predictors"]["jeffreys"]["final_loss"] == pytest.approx(payload["predictors"]["plugin"]["final_loss"])
    rows = list(csv.reader(curve.open()))
    assert rows[0] == ["step", "jeffreys", "plugin", "laplace"]
    assert len(rows) == 61
    jeff = np.array([float(r[1]) for r in rows[1:]])
    assert np.all(np.diff(jeff) > 0)
    assert jeff[-1] == pytest.approx(payload["predictors"]["jeffreys"]["final_loss"])


def test_preq_constant_column_regret(files):
    payload = ok(["preq", "--input", files["const.csv"], "--predictors", "jeffreys"])
    assert payload["predictors"]["jeffreys"]["regret"] <= 0.5 * math.log(100) + 2


def test_preq_real_and_default_predictors(files):
    payload = ok(["preq", "--input", files["real.csv"]])
    assert set(payload["predictors"]) == {"gauss-plugin", "gauss-bayes"}
    payload = ok(["preq", "--input", files["const.csv"]])
    assert set(payload["predictors"]) == {"uniform", "jeffreys", "nml", "switch"}


def test_preq_true_distribution_near_entropy(tmp_path):
    rng = np.random.default_rng(5)
    z = (rng.random(2000) < 0.5).astype(int)
    path = tmp_path / "fair.csv"
    path.write_text("z\n" + "".join(f"{v}\n" for v in z))
    payload = ok(["preq", "--input", str(path), "--predictors", "uniform"])
    assert payload["predictors"]["uniform"]["final_loss"] / 2000 == pytest.approx(math.log(2), rel=0.1)


def test_test_subcommand(files):
    payload = ok(["test", "--data", files["const.csv"]])
    assert payload["decision"] == "reject"
    fair = ok(["test", "--input", sample_path(), "--alt", "nml"])
    assert fair["decision"] == "retain"


@pytest.mark.slow
def test_test_simulate():
    payload = ok(["test", "--simulate", "10000", "--n", "100"])
    assert payload["within_bound"]
    assert payload["rate"] <= 0.05 + 3 * math.sqrt(0.05 * 0.95 / 10_000)


@pytest.mark.parametrize("name", ["empty.csv", "header_only.csv", "mixed.csv"])
def test_ingestion_errors_exit_2(files, name, capsys):
    assert main(["preq", "--input", files[name]]) == 2
    assert "error" in capsys.readouterr().err


def test_missing_file_and_bad_flags(files):
    assert run(["markov", "--input", str(files["dir"] / "nope.csv")])[0] == 2
    with pytest.raises(SystemExit) as exc:
        run(["complexity", "--n", "3", "--frobnicate"])
    assert exc.value.code == 2
    assert run(["preq", "--input", files["real.csv"], "--predictors", "nml"])[0] == 2


def test_computational_failure_exit_1(tmp_path):
    # two columns of 1001 levels: the collapsed qNML arity exceeds the cap
    path = tmp_path / "wide.csv"
    path.write_text("a,b\n" + "".join(f"v{i},w{i}\n" for i in range(1001)))
    assert run(["bn", "--input", str(path), "--score", "qnml"])[0] == 1


def test_outputs_are_deterministic(files):
    for argv in (
        ["select", "--input", files["letters.csv"]],
        ["bn", "--input", files["pair.csv"], "--seed", "11"],
        ["preq", "--input", files["real.csv"]],
        ["test", "--simulate", "1000", "--n", "20", "--seed", "5"],
    ):
        assert run(argv)[1] == run(argv + ["--threads", "3"])[1] == run(argv)[1]


def test_tsv_and_output_file(files):
    text = ok(["varsel", "--input", files["reg.csv"], "--target", "y", "--sigma2", "1", "--format", "tsv"])
    assert text.splitlines()[0] == "label\tcodelength_nats\trank"
    target = files["dir"] / "out.json"
    code, text, _ = run(["complexity", "--n", "5", "--output", str(target)])
    assert code == 0 and text == ""
    assert json.loads(target.read_text())["n"] == 5


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "mdlkit.cli", "complexity", "--n", "3"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert math.exp(json.loads(proc.stdout)["value"]) == pytest.approx(78 / 27)
