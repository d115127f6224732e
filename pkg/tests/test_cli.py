import json
import subprocess
import sys

import pytest

from brewvec.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    """A synthetic corpus plus a small trained model, built through the CLI."""
    root = tmp_path_factory.mktemp("cli")
    corpus = root / "corpus.jsonl"
    model = root / "model.b2v"
    assert main(["synth", "--clusters", "2", "--beers-per", "4", "--flavors-per", "4",
                 "--checkins-per", "30", "--tags-per", "2", "--noise", "0.0",
                 "--seed", "6", "--output", str(corpus)]) == 0
    assert main(["train", "--input", str(corpus), "--output", str(model),
                 "--dim", "5", "--lr", "0.01", "--batch", "32",
                 "--epochs", "150", "--seed", "42"]) == 0
    truth = json.loads((root / "corpus.jsonl.truth.json").read_text())
    return root, corpus, model, truth


class TestSynth:
    def test_writes_corpus_and_sidecar(self, workdir):
        root, corpus, _, truth = workdir
        lines = corpus.read_text().strip().splitlines()
        assert len(lines) == 2 * 4 * 30
        record = json.loads(lines[0])
        assert set(record) >= {"beer_id", "flavors"}
        assert set(truth) == {"beer_pools", "beer_clusters", "cluster_pools"}
        assert len(truth["beer_pools"]) == 8
        assert sorted(set(truth["beer_clusters"].values())) == [0, 1]

    def test_deterministic_stdout(self, tmp_path, capsys):
        args = ["synth", "--clusters", "1", "--beers-per", "2", "--flavors-per", "3",
                "--checkins-per", "4", "--tags-per", "2", "--seed", "3"]
        c1, out1, _ = run(capsys, *args, "--output", str(tmp_path / "a.jsonl"))
        c2, out2, _ = run(capsys, *args, "--output", str(tmp_path / "b.jsonl"))
        assert c1 == c2 == 0
        assert out1.replace("a.jsonl", "x") == out2.replace("b.jsonl", "x")
        assert (tmp_path / "a.jsonl").read_text() == (tmp_path / "b.jsonl").read_text()


class TestTrain:
    def test_prints_per_epoch_nll(self, workdir, tmp_path, capsys):
        _, corpus, _, _ = workdir
        code, out, err = run(capsys, "train", "--input", str(corpus),
                             "--output", str(tmp_path / "m.b2v"),
                             "--epochs", "3", "--seed", "1")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].startswith("epoch 1/3 nll ")
        assert len(lines) == 3
        assert "saved to" in err

    def test_identical_argv_identical_stdout(self, workdir, tmp_path, capsys):
        _, corpus, _, _ = workdir
        argv = ["train", "--input", str(corpus), "--epochs", "4", "--seed", "9"]
        c1, out1, _ = run(capsys, *argv, "--output", str(tmp_path / "m1.b2v"))
        c2, out2, _ = run(capsys, *argv, "--output", str(tmp_path / "m2.b2v"))
        assert c1 == c2 == 0
        assert out1 == out2
        assert (tmp_path / "m1.b2v").read_bytes() == (tmp_path / "m2.b2v").read_bytes()

    def test_missing_input_is_io_error(self, tmp_path, capsys):
        code, _, err = run(capsys, "train", "--input", str(tmp_path / "absent.jsonl"),
                           "--output", str(tmp_path / "m.b2v"))
        assert code == 4
        assert "error:" in err


class TestQueries:
    def test_similar_top1_shares_cluster(self, workdir, capsys):
        # End-to-end: the trained model's nearest neighbour lies in the same
        # latent cluster as the query, per the generator's sidecar.
        _, _, model, truth = workdir
        clusters = truth["beer_clusters"]
        for beer in list(clusters):
            code, out, _ = run(capsys, "similar", "--model", str(model),
                               "--beer", beer, "-n", "1", "--json")
            assert code == 0
            top = json.loads(out)["results"][0]["id"]
            assert clusters[top] == clusters[beer]

    def test_json_output_schema(self, workdir, capsys):
        _, _, model, truth = workdir
        beer = next(iter(truth["beer_clusters"]))
        code, out, _ = run(capsys, "describe", "--model", str(model),
                           "--beer", beer, "--json")
        assert code == 0
        body = json.loads(out)
        assert set(body) == {"query", "results"}
        assert all(set(r) == {"id", "score"} for r in body["results"])
        assert len(body["results"]) == 3  # describe defaults to top 3

    def test_aligned_text_output(self, workdir, capsys):
        _, _, model, truth = workdir
        beer = next(iter(truth["beer_clusters"]))
        code, out, _ = run(capsys, "similar", "--model", str(model),
                           "--beer", beer, "-n", "2")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].startswith("#")
        assert len(lines) == 3

    def test_profile_bad_weights_exit_3(self, workdir, capsys):
        _, _, model, truth = workdir
        tags = truth["cluster_pools"]["0"]
        code, _, err = run(capsys, "profile", "--model", str(model),
                           "--flavor", f"{tags[0]}=0.5", "--flavor", f"{tags[1]}=0.4")
        assert code == 3
        assert "0.9" in err

    def test_profile_happy_path(self, workdir, capsys):
        _, _, model, truth = workdir
        tags = truth["cluster_pools"]["0"]
        code, out, _ = run(capsys, "profile", "--model", str(model),
                           "--flavor", f"{tags[0]}=0.5", "--flavor", f"{tags[1]}=0.5",
                           "-n", "2", "--json")
        assert code == 0
        assert len(json.loads(out)["results"]) == 2

    def test_unknown_beer_exit_3(self, workdir, capsys):
        _, _, model, _ = workdir
        code, _, err = run(capsys, "similar", "--model", str(model), "--beer", "ghost")
        assert code == 3
        assert "unknown beer" in err

    def test_arith_runs(self, workdir, capsys):
        _, _, model, truth = workdir
        beer = next(iter(truth["beer_clusters"]))
        pool = truth["beer_pools"][beer]
        other = truth["cluster_pools"]["1" if truth["beer_clusters"][beer] == 0 else "0"]
        code, out, _ = run(capsys, "arith", "--model", str(model), "--base", beer,
                           "--minus", pool[0], "--plus", other[0], "--json")
        assert code == 0
        assert beer not in [r["id"] for r in json.loads(out)["results"]]

    def test_recommend_runs(self, workdir, capsys):
        _, _, model, truth = workdir
        beers = list(truth["beer_clusters"])[:2]
        code, out, _ = run(capsys, "recommend", "--model", str(model),
                           "--favorites", *beers, "-n", "3", "--json")
        assert code == 0
        ids = [r["id"] for r in json.loads(out)["results"]]
        assert not set(beers) & set(ids)


class TestExports:
    def test_export_2d_csv(self, workdir, tmp_path, capsys):
        _, _, model, _ = workdir
        out_csv = tmp_path / "coords.csv"
        code, _, _ = run(capsys, "export-2d", "--model", str(model),
                         "--output", str(out_csv))
        assert code == 0
        lines = out_csv.read_text().strip().splitlines()
        assert lines[0] == "flavor,x,y"
        assert len(lines) == 1 + 8
        tag, x, y = lines[1].split(",")
        float(x), float(y)

    def test_export_2d_plot(self, workdir, tmp_path, capsys):
        _, _, model, _ = workdir
        png = tmp_path / "coords.png"
        code, _, _ = run(capsys, "export-2d", "--model", str(model),
                         "--output", str(tmp_path / "c.csv"), "--plot", str(png))
        assert code == 0
        assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

    def test_pca_baseline_csv(self, workdir, tmp_path, capsys):
        _, corpus, _, _ = workdir
        out_csv = tmp_path / "pca.csv"
        code, _, _ = run(capsys, "pca-baseline", "--input", str(corpus),
                         "--components", "3", "--output", str(out_csv))
        assert code == 0
        lines = out_csv.read_text().strip().splitlines()
        assert lines[0] == "beer,pc1,pc2,pc3"
        assert len(lines) == 1 + 8

    def test_pca_baseline_plot(self, workdir, tmp_path, capsys):
        _, corpus, _, _ = workdir
        png = tmp_path / "pca.png"
        code, _, _ = run(capsys, "pca-baseline", "--input", str(corpus),
                         "--output", str(tmp_path / "p.csv"), "--plot", str(png))
        assert code == 0
        assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


class TestUsageErrors:
    def test_unknown_subcommand(self, capsys):
        assert run(capsys, "frobnicate")[0] == 2

    def test_no_subcommand(self, capsys):
        assert run(capsys)[0] == 2

    def test_missing_required_flag(self, capsys):
        assert run(capsys, "similar")[0] == 2

    def test_bad_flavor_weight_syntax(self, workdir, capsys):
        _, _, model, _ = workdir
        code, _, _ = run(capsys, "profile", "--model", str(model),
                         "--flavor", "justatag")
        assert code == 2

    def test_serve_without_model(self, capsys, monkeypatch):
        monkeypatch.delenv("BREWVEC_MODEL", raising=False)
        code, _, err = run(capsys, "serve")
        assert code == 2
        assert "BREWVEC_MODEL" in err


class TestInstalledEntryPoint:
    def test_console_script(self, tmp_path):
        proc = subprocess.run(
            [sys.executable, "-m", "brewvec.cli", "synth", "--clusters", "1",
             "--beers-per", "2", "--flavors-per", "2", "--checkins-per", "2",
             "--tags-per", "1", "--seed", "0", "--output", str(tmp_path / "o.jsonl")],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert (tmp_path / "o.jsonl").exists()
