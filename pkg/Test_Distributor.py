import json
import logging
import os
import tempfile

import pytest

from CensusEngine import DEFAULT_BUDGETS
from Distributor import BUDGET_RECORD, CONFIG_ENV_VAR, Distributor
from TableauModel import TableauInputError

logging.basicConfig(
    level=logging.DEBUG,
    format='%(asctime)s - %(levelname)s - %(threadName)s - %(message)s'
)
logger = logging.getLogger(__name__)

HEADER = "service_type,service_name,version,settings\n"


def write_settings(directory: str, settings: dict) -> str:
    path = os.path.join(directory, "configs.csv")
    with open(path, 'w') as f:
        f.write(HEADER)
        f.write("budgets,cantorian,1.0,\"" + json.dumps(settings).replace('"', '""') + "\"\n")
    return path


class TestDistributor:
    def test_defaults_without_file(self):
        previous = os.environ.pop(CONFIG_ENV_VAR, None)
        try:
            assert Distributor().budgets() == DEFAULT_BUDGETS
        finally:
            if previous is not None:
                os.environ[CONFIG_ENV_VAR] = previous

    def test_file_overrides(self):
        with tempfile.TemporaryDirectory() as directory:
            path = write_settings(directory, {"canonical_n": 4, "time_budget": 30})
            budgets = Distributor().budgets(path)
            assert budgets["canonical_n"] == 4
            assert budgets["time_budget"] == 30
            assert budgets["brute_force_n"] == DEFAULT_BUDGETS["brute_force_n"]

    def test_environment_variable(self):
        previous = os.environ.get(CONFIG_ENV_VAR)
        with tempfile.TemporaryDirectory() as directory:
            os.environ[CONFIG_ENV_VAR] = write_settings(directory, {"hypergraph_n": 5})
            try:
                assert Distributor().budgets()["hypergraph_n"] == 5
            finally:
                if previous is None:
                    del os.environ[CONFIG_ENV_VAR]
                else:
                    os.environ[CONFIG_ENV_VAR] = previous

    def test_unknown_budget(self):
        with tempfile.TemporaryDirectory() as directory:
            path = write_settings(directory, {"orbit_size": 5})
            with pytest.raises(TableauInputError):
                Distributor().budgets(path)

    def test_unreadable_file(self):
        with pytest.raises(TableauInputError):
            Distributor().budgets("/nonexistent/configs.csv")

    def test_missing_columns(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "bad.csv")
            with open(path, 'w') as f:
                f.write("service_type,settings\nbudgets,{}\n")
            assert not Distributor().getConfigsFromDelimitedFile(path)

    def test_sqlite_mirror(self):
        with tempfile.TemporaryDirectory() as directory:
            db_path = os.path.join(directory, "configs.db")
            first = Distributor(db_path)
            assert first.addConfiguration({"service_type": BUDGET_RECORD[0], "service_name": BUDGET_RECORD[1],
                                           "version": BUDGET_RECORD[2], "settings": {"canonical_n": 3}})
            first.close()
            second = Distributor(db_path)
            stored = json.loads(second.getConfiguration(*BUDGET_RECORD))
            assert stored["settings"] == {"canonical_n": 3}
            assert second.budgets()["canonical_n"] == 3
            assert second.getConfiguration("budgets", "other", "1.0") is None
            second.close()

    def test_incomplete_record(self):
        assert not Distributor().addConfiguration({"service_type": "budgets"})


def run_tests():
    """Run the settings tests and log a summary."""
    result = pytest.main([__file__, "-q"])
    if result == 0:
        logger.info("Settings tests PASSED")
    else:
        logger.error("Settings tests FAILED")
    return result == 0


if __name__ == "__main__":
    run_tests()
