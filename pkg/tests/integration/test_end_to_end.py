"""
End-to-end integration tests for the counter-fit command line.
"""
import contextlib
import io
import json
import os
import shutil
import sys
import tempfile
import unittest
from unittest import mock

import numpy as np
import pandas as pd

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../..')))

from src.app import EXIT_IO, EXIT_OK, EXIT_VALIDATION, run
from src.config import config
from src.vectors.store import load_vectors
from tests.helpers import file_digest, price_store, write_lines, write_simlex, write_vector_file


class TestEndToEnd(unittest.TestCase):
    """Runs every subcommand against small files in a temp directory."""

    def setUp(self):
        self.tmp = tempfile.mkdtemp(prefix="counterfit-e2e-")
        store = price_store()
        self.vectors = self.path("vectors.txt")
        write_vector_file(self.vectors, store.vocab, store.matrix)
        self.antonyms = self.path("antonyms.txt")
        write_lines(self.antonyms, ["cheap expensive", "cheap unknownword"])
        self.synonyms = self.path("synonyms.txt")
        write_lines(self.synonyms, ["cheap cheapest", "expensive pricey"])
        self.ontology = self.path("ontology.json")
        with open(self.ontology, "w", encoding="utf-8") as f:
            json.dump({"slots": {"pricerange": ["cheap", "expensive"], "name": ["the golden curry"]}}, f)
        self.simlex = self.path("simlex.txt")
        write_simlex(self.simlex, [
            ("cheap", "cheapest", 9.0),
            ("expensive", "pricey", 8.5),
            ("cheap", "expensive", 0.5),
            ("cheap", "filler0", 2.0),
            ("pricey", "filler1", 1.0),
            ("cheap", "missing", 5.0),
        ])

    def tearDown(self):
        shutil.rmtree(self.tmp, ignore_errors=True)

    def path(self, name):
        return os.path.join(self.tmp, name)

    def cli(self, *argv):
        out = io.StringIO()
        with contextlib.redirect_stdout(out):
            code = run(list(argv) + ["--log-level", "WARNING"])
        return code, out.getvalue()

    def counterfit(self, out_name, *extra):
        return self.cli(
            "counterfit", "--vectors", self.vectors, "--antonyms", self.antonyms,
            "--synonyms", self.synonyms, "--out", self.path(out_name), *extra,
        )

    def test_counterfit_writes_vectors_and_trace(self):
        code, _ = self.counterfit("out.txt")
        assert code == EXIT_OK
        fitted = load_vectors(self.path("out.txt"))
        assert fitted.size == 50
        trace = pd.read_csv(self.path("out.cost.csv"))
        assert list(trace.columns) == ["epoch", "ar", "sa", "vsp", "total"]
        assert len(trace) == 21
        cheap, expensive = fitted.index("cheap"), fitted.index("expensive")
        assert 1.0 - float(fitted.matrix[cheap] @ fitted.matrix[expensive]) >= 0.8

    def test_counterfit_is_reproducible_and_leaves_inputs_alone(self):
        inputs = [self.vectors, self.antonyms, self.synonyms]
        before = [file_digest(p) for p in inputs]
        assert self.counterfit("first.txt", "--seed", "3")[0] == EXIT_OK
        assert self.counterfit("second.txt", "--seed", "3")[0] == EXIT_OK
        assert file_digest(self.path("first.txt")) == file_digest(self.path("second.txt"))
        assert [file_digest(p) for p in inputs] == before

    def test_counterfit_with_ontology_and_config(self):
        conf = self.path("run.conf")
        write_lines(conf, ["epochs = 4"])
        code, _ = self.cli(
            "counterfit", "--vectors", self.vectors, "--ontology", self.ontology,
            "--config", conf, "--out", self.path("out.txt"), "--trace", self.path("trace.csv"),
        )
        assert code == EXIT_OK
        assert len(pd.read_csv(self.path("trace.csv"))) == 5

    def test_eval_simlex(self):
        code, output = self.cli("eval-simlex", "--vectors", self.vectors, "--simlex", self.simlex)
        assert code == EXIT_OK
        lines = output.splitlines()
        assert lines[0].startswith("spearman_rho\t")
        assert -1.0 <= float(lines[0].split("\t")[1]) <= 1.0
        assert lines[1] == "coverage\t5/6"

    def test_neighbors(self):
        code, output = self.cli("neighbors", "--vectors", self.vectors, "--word", "cheap", "--k", "2")
        assert code == EXIT_OK
        assert [line.split("\t")[0] for line in output.splitlines()] == ["expensive", "cheapest"]

    def test_make_dict(self):
        out_dir = self.path("dicts")
        code, output = self.cli(
            "make-dict", "--vectors", self.vectors, "--ontology", self.ontology,
            "--t", "0.2", "--t", "0.5", "--out-dir", out_dir, "--save-vectors", self.path("fitted.txt"),
        )
        assert code == EXIT_OK
        assert len(output.splitlines()) == 2
        with open(os.path.join(out_dir, "dictionary_t0.2.json"), encoding="utf-8") as f:
            dictionary = json.load(f)
        assert dictionary["pricerange"]["cheap"] == ["cheapest"]
        assert dictionary["name"]["the golden curry"] == []
        assert os.path.exists(os.path.join(out_dir, "dictionary_t0.5.json"))
        assert os.path.exists(self.path("fitted.txt"))

    def test_make_dict_without_counterfitting(self):
        out_dir = self.path("raw")
        code, _ = self.cli(
            "make-dict", "--vectors", self.vectors, "--ontology", self.ontology,
            "--t", "0.2", "--out-dir", out_dir, "--skip-counterfit",
        )
        assert code == EXIT_OK
        with open(os.path.join(out_dir, "dictionary_t0.2.json"), encoding="utf-8") as f:
            assert "expensive" in json.load(f)["pricerange"]["cheap"]

    def test_ablate(self):
        code, output = self.cli(
            "ablate", "--vectors", self.vectors, "--simlex", self.simlex, "--epochs", "3",
            "--synonyms", f"syn={self.synonyms}", "--antonyms", f"ant={self.antonyms}",
            "--out", self.path("ablation.csv"),
        )
        assert code == EXIT_OK
        frame = pd.read_csv(self.path("ablation.csv"))
        assert frame["constraints"].tolist() == ["baseline", "syn", "ant", "syn and ant"]

    def test_ablate_to_stdout_with_combination(self):
        code, output = self.cli(
            "ablate", "--vectors", self.vectors, "--simlex", self.simlex, "--epochs", "2",
            "--antonyms", f"ant={self.antonyms}", "--combination", "baseline", "--combination", "ant",
        )
        assert code == EXIT_OK
        assert output.splitlines()[0] == "constraints,rho,covered,synonym_pairs,antonym_pairs"
        assert len(output.splitlines()) == 3

    def test_analyse_errors(self):
        assert self.counterfit("out.txt")[0] == EXIT_OK
        code, output = self.cli(
            "analyse-errors", "--before", self.vectors, "--after", self.path("out.txt"),
            "--simlex", self.simlex, "--antonyms", self.antonyms,
        )
        assert code == EXIT_OK
        assert "False synonyms (0)" in output
        assert "False antonyms (0)" in output

    def test_extract_ppdb(self):
        ppdb = self.path("ppdb.txt")
        write_lines(ppdb, [
            "[JJ] ||| expensive ||| pricey ||| PPDB2.0Score=3.1 ||| 0-0 ||| Equivalence",
            "[JJ] ||| expensive ||| cheap ||| PPDB2.0Score=2.0 ||| 0-0 ||| Exclusion",
        ])
        code, output = self.cli(
            "extract-ppdb", "--ppdb", ppdb,
            "--synonyms-out", self.path("syn.txt"), "--antonyms-out", self.path("ant.txt"),
        )
        assert code == EXIT_OK
        assert output.splitlines() == ["synonyms\t1", "antonyms\t1"]
        with open(self.path("ant.txt"), encoding="utf-8") as f:
            assert f.read() == "cheap expensive\n"

    def test_exit_codes(self):
        """Usage and validation problems exit 1, unreadable or malformed files exit 2."""
        assert self.cli("nonsense")[0] == EXIT_VALIDATION
        assert self.cli("neighbors", "--vectors", self.vectors)[0] == EXIT_VALIDATION
        assert self.counterfit("out.txt", "--rho", "3")[0] == EXIT_VALIDATION
        assert self.cli("neighbors", "--vectors", self.vectors, "--word", "absent")[0] == EXIT_VALIDATION
        assert self.cli("neighbors", "--vectors", self.vectors, "--word", "cheap", "--k", "0")[0] == EXIT_VALIDATION
        assert self.cli(
            "make-dict", "--vectors", self.vectors, "--ontology", self.ontology, "--t", "2.5",
        )[0] == EXIT_VALIDATION

        assert self.cli("neighbors", "--vectors", self.path("missing.txt"), "--word", "cheap")[0] == EXIT_IO
        broken = self.path("broken.txt")
        write_lines(broken, ["a 1 0", "b 1"])
        assert self.cli("neighbors", "--vectors", broken, "--word", "a")[0] == EXIT_IO

    def test_undecodable_files_exit_2(self):
        bad_vectors = self.path("bad_vectors.txt")
        with open(bad_vectors, "wb") as f:
            f.write(b"a 1 0\n\xff\xfe 0 1\n")
        assert self.cli("neighbors", "--vectors", bad_vectors, "--word", "a")[0] == EXIT_IO

        bad_simlex = self.path("bad_simlex.txt")
        with open(bad_simlex, "wb") as f:
            f.write(b"word1\tword2\tSimLex999\ncheap\texp\xffnsive\t0.5\n")
        assert self.cli("eval-simlex", "--vectors", self.vectors, "--simlex", bad_simlex)[0] == EXIT_IO

    def test_ontology_values_not_a_list(self):
        with open(self.ontology, "w", encoding="utf-8") as f:
            json.dump({"slots": {"area": "north"}}, f)
        assert self.cli(
            "make-dict", "--vectors", self.vectors, "--ontology", self.ontology, "--out-dir", self.path("dicts"),
        )[0] == EXIT_VALIDATION
        assert not os.path.exists(self.path("dicts"))

    def test_log_level(self):
        """Unknown levels are usage errors; level names are case-insensitive."""
        argv = ["neighbors", "--vectors", self.vectors, "--word", "cheap"]
        with contextlib.redirect_stdout(io.StringIO()):
            assert run(argv + ["--log-level", "LOUD"]) == EXIT_VALIDATION
            assert run(argv + ["--log-level", "warning"]) == EXIT_OK

    def test_bad_environment_settings(self):
        argv = ["neighbors", "--vectors", self.vectors, "--word", "cheap"]
        config._runtime = None
        try:
            with mock.patch.dict(os.environ, {"COUNTERFIT_LOG_LEVEL": "LOUD"}):
                with contextlib.redirect_stdout(io.StringIO()):
                    assert run(argv) == EXIT_VALIDATION
        finally:
            config._runtime = None

    def test_vocab_filter(self):
        vocab = self.path("vocab.txt")
        write_lines(vocab, ["cheap", "expensive", "cheapest"])
        code, output = self.cli("neighbors", "--vectors", self.vectors, "--vocab", vocab, "--word", "cheap", "--k", "2")
        assert code == EXIT_OK
        assert len(output.splitlines()) == 2


if __name__ == "__main__":
    unittest.main()
