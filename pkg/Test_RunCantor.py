import io
import json
import logging
import os
import tempfile
from contextlib import redirect_stderr, redirect_stdout

import pytest

import AcceptanceVerifier
from CantorController import CantorController, published_bclass_count
from RunCantor import EXIT_BUDGET, EXIT_INPUT, EXIT_OK, RunConfig, main, parse_word
from TableauFormat import TableauFormat
from TableauModel import Tableau, TableauInputError

logging.basicConfig(
    level=logging.DEBUG,
    format='%(asctime)s - %(levelname)s - %(threadName)s - %(message)s'
)
logger = logging.getLogger(__name__)

SIX_BY_SIX = "123122/211233/312112/232111/332121/111132"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


class TestCommandLine:
    def test_check(self):
        code, out, _ = run("check", "12/21")
        assert code == EXIT_OK
        assert "cantorian: yes, bi-cantorian: yes" in out

    def test_check_witness(self):
        code, out, _ = run("check", "111/111/222", "--witness")
        assert code == EXIT_OK
        assert "bi-cantorian: no" in out
        assert "witness: column 1 w=112" in out

    def test_structured_output(self):
        code, out, _ = run("--format", "structured", "classify", "113/112/231")
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["schema_version"] == "1.0"
        assert report["command"] == "classify"
        assert report["results"]["cardinality"] == "1944"
        assert report["inputs"]["input"] == "113/112/231"

    def test_permanent(self):
        code, out, _ = run("permanent", "12/21")
        assert code == EXIT_OK
        assert out.strip() == "11 22"
        code, out, _ = run("permanent", "12/21", "--word", "12")
        assert "contains: no" in out

    def test_reduce_from_file(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "t.txt")
            TableauFormat.write(Tableau.from_rows([[2, 3, 1], [2, 2, 2], [2, 3, 1]], 3), path)
            code, out, _ = run("reduce", path)
        assert code == EXIT_OK
        assert "invariant: (3,21,21)" in out
        assert "1 1 1\n1 1 1\n1 2 2" in out

    def test_census(self):
        code, out, _ = run("census", "2", "3", "--bicantorian")
        assert code == EXIT_OK
        assert "1/1, total 36 (1·2^2·3^2)" in out
        assert "bi-cantorian 18 (2·3·3)" in out

    def test_bicensus(self):
        code, out, _ = run("bicensus", "3", "2")
        assert code == EXIT_OK
        assert "B/C = 0.250" in out

    def test_bclasses(self):
        code, out, _ = run("bclasses", "2", "4")
        assert code == EXIT_OK
        assert "3 classes over 84 bi-cantorian tableaux (expected 3: match)" in out

    def test_tables(self):
        code, out, _ = run("tables")
        assert code == EXIT_OK
        assert " 3  3        5" in out
        assert "B/C over two letters: n=2 0.500, n=3 0.250" in out

    def test_hypergraph(self):
        code, out, _ = run("hypergraph", "11/22")
        assert code == EXIT_OK
        assert "intersecting: no" in out

    def test_input_error(self):
        code, _, err = run("check", "1x/11")
        assert code == EXIT_INPUT
        assert "input error" in err
        code, _, _ = run("check", "no-such-file.txt")
        assert code == EXIT_INPUT

    def test_budget_refusal(self):
        code, _, err = run("reduce", SIX_BY_SIX)
        assert code == EXIT_BUDGET
        assert "canonical_n" in err

    def test_zero_workers_rejected(self):
        code, _, err = run("--workers", "0", "census", "2", "2")
        assert code == EXIT_INPUT
        assert "worker count" in err
        code, _, err = run("--max-orbit", "0", "census", "2", "2")
        assert code == EXIT_INPUT
        assert "psi_orbit_max" in err

    def test_parse_word(self):
        assert parse_word("121") == [1, 2, 1]
        assert parse_word("1,10") == [1, 10]
        with pytest.raises(TableauInputError):
            parse_word("1a")

    def test_run_config_validation(self):
        with pytest.raises(TableauInputError):
            RunConfig("census", workers=0)
        with pytest.raises(TableauInputError):
            RunConfig("census", budgets={"canonical_n": 0})


class TestController:
    def test_check_condition_one(self):
        results = CantorController().check(Tableau.from_rows([[1, 1, 1], [1, 2, 1], [1, 1, 2]]), witness=True)
        assert not results["cantorian"]
        assert results["condition_one"]["count"] == 7
        assert results["witness"]["kind"] == "row"

    def test_classify_polynomial(self):
        results = CantorController().classify(Tableau.from_rows([[1, 1], [2, 2]], 3))
        assert results["cardinality"] == "36"
        assert results["polynomial"]["denominator"] == 4

    def test_published_class_counts(self):
        assert published_bclass_count(2, 7) == 3
        assert published_bclass_count(3, 3) == 32
        assert published_bclass_count(4, 2) is None

    @pytest.mark.slow
    def test_verify_quick(self):
        results = CantorController().verify("quick")
        statuses = {criterion["name"]: criterion["status"] for criterion in results["criteria"]}
        assert results["passed"], results["failing"]
        assert statuses["closed_forms"] == "pass"


class TestAcceptance:
    def test_sampled_row_flags_the_published_value(self, monkeypatch):
        monkeypatch.setitem(AcceptanceVerifier.SAMPLED_ROWS, (3, 3), 2000)
        verifier = AcceptanceVerifier.AcceptanceVerifier(CantorController(), seed=7)
        criterion = AcceptanceVerifier.Criterion("class_counts")
        verifier._record_sampled_row(criterion, "(3,3)", 5076, (3, 3, 5, 9, 1000))
        assert criterion.status == AcceptanceVerifier.PUBLISHED_INCONSISTENT
        assert criterion.lines[0].endswith("≠")
        verifier._record_sampled_row(criterion, "(3,3)", 5076, (3, 3, 5, 9, 5076))
        assert criterion.status == AcceptanceVerifier.PUBLISHED_INCONSISTENT
        assert criterion.lines[1].endswith("✓")

    def test_sampled_row_rejects_a_wrong_census(self, monkeypatch):
        monkeypatch.setitem(AcceptanceVerifier.SAMPLED_ROWS, (3, 3), 2000)
        verifier = AcceptanceVerifier.AcceptanceVerifier(CantorController(), seed=7)
        criterion = AcceptanceVerifier.Criterion("class_counts")
        verifier._record_sampled_row(criterion, "(3,3)", 1000, (3, 3, 5, 9, 5076))
        assert criterion.status == AcceptanceVerifier.FAIL


def run_tests():
    """Run the command line tests and log a summary."""
    result = pytest.main([__file__, "-q"])
    if result == 0:
        logger.info("Command line tests PASSED")
    else:
        logger.error("Command line tests FAILED")
    return result == 0


if __name__ == "__main__":
    run_tests()
