import sqlite3
import csv
import json
import logging
import os
from datetime import datetime, timezone
from typing import Any, Dict, Optional

from CensusEngine import DEFAULT_BUDGETS
from TableauModel import TableauInputError

# Configure logging for Distributor
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(threadName)s - %(message)s'
)
logger = logging.getLogger(__name__)

CONFIG_ENV_VAR = "CANTORIAN_CONFIG"
BUDGET_RECORD = ("budgets", "cantorian", "1.0")


class Distributor:
    """Settings records loaded from a delimited file, mirrored into SQLite.

    Records are keyed by (service_type, service_name, version); ``settings`` is
    a JSON object. The budget record ``("budgets", "cantorian", "1.0")`` feeds
    ``budgets()``.

    Args:
        db_path: SQLite database path; ``":memory:"`` keeps the mirror in process.
    """

    def __init__(self, db_path: str = ":memory:"):
        self.db_path = db_path
        self._configs: Dict[tuple, Dict[str, Any]] = {}
        self._conn = sqlite3.connect(db_path, check_same_thread=False)
        self._init_db()
        logger.debug("Initialized Distributor with db_path=%s", db_path)

    def _init_db(self):
        """Set up the configurations table."""
        try:
            self._conn.execute("""
                CREATE TABLE IF NOT EXISTS configurations (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    service_type TEXT NOT NULL,
                    service_name TEXT NOT NULL,
                    version TEXT NOT NULL,
                    settings TEXT NOT NULL,
                    created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP,
                    UNIQUE(service_type, service_name, version)
                )
            """)
            self._conn.commit()
        except sqlite3.Error as e:
            logger.error("Failed to initialize database: %s", e)
            raise

    def close(self):
        self._conn.close()

    def getConfigsFromDelimitedFile(self, file_path: str) -> bool:
        """Load settings records from a CSV file."""
        try:
            with open(file_path, 'r', newline='') as file:
                reader = csv.DictReader(file)
                expected_columns = {'service_type', 'service_name', 'version', 'settings'}
                if not reader.fieldnames or not expected_columns.issubset(reader.fieldnames):
                    logger.error("CSV missing required columns: %s", reader.fieldnames)
                    return False
                for row in reader:
                    config = {
                        'service_type': row['service_type'],
                        'service_name': row['service_name'],
                        'version': row['version'],
                        'settings': json.loads(row['settings'])
                    }
                    key = (row['service_type'], row['service_name'], row['version'])
                    self._configs[key] = config
                    logger.debug("Loaded config: %s", config)
                return True
        except (OSError, json.JSONDecodeError, csv.Error) as e:
            logger.error("Error reading CSV file %s: %s", file_path, e)
            return False

    def _upsert(self, config: Dict[str, Any]) -> None:
        self._conn.execute("""
            INSERT OR REPLACE INTO configurations
            (service_type, service_name, version, settings, created_at)
            VALUES (?, ?, ?, ?, ?)
        """, (config['service_type'], config['service_name'], config['version'],
              json.dumps(config['settings']), datetime.now(timezone.utc).isoformat()))

    def storeConfigsInSQLite(self) -> bool:
        """Store in-memory records in SQLite."""
        try:
            for config in self._configs.values():
                self._upsert(config)
            self._conn.commit()
            logger.debug("Stored %d configs in SQLite", len(self._configs))
            return True
        except (sqlite3.Error, TypeError) as e:
            logger.error("Error storing configs in SQLite: %s", e)
            return False

    def getConfiguration(self, service: str, name: str, version: str) -> Optional[str]:
        """Retrieve a record as a JSON string, from memory first, then from SQLite."""
        key = (service, name, version)
        config = self._configs.get(key)
        if config:
            return json.dumps(config)
        try:
            result = self._conn.execute("""
                SELECT service_type, service_name, version, settings
                FROM configurations
                WHERE service_type = ? AND service_name = ? AND version = ?
            """, (service, name, version)).fetchone()
        except sqlite3.Error as e:
            logger.error("Error retrieving config: %s", e)
            return None
        if result:
            config = {
                'service_type': result[0],
                'service_name': result[1],
                'version': result[2],
                'settings': json.loads(result[3])
            }
            self._configs[key] = config
            return json.dumps(config)
        logger.debug("Config not found: %s, %s, %s", service, name, version)
        return None

    def addConfiguration(self, config: Dict[str, Any]) -> bool:
        """Add a record to memory and database."""
        required_keys = {'service_type', 'service_name', 'version', 'settings'}
        if not all(k in config for k in required_keys):
            logger.error("Config missing required fields: %s", config)
            return False
        try:
            key = (config['service_type'], config['service_name'], config['version'])
            self._configs[key] = config
            self._upsert(config)
            self._conn.commit()
            logger.debug("Added config: %s", config)
            return True
        except (sqlite3.Error, TypeError) as e:
            logger.error("Error adding config: %s", e)
            return False

    def budgets(self, config_file: Optional[str] = None) -> Dict[str, Any]:
        """Budget settings: defaults, overridden by the budget record of ``config_file``
        or of the file named by ``CANTORIAN_CONFIG``.

        Raises:
            TableauInputError: If the settings file is unreadable or names unknown budgets.
        """
        budgets = dict(DEFAULT_BUDGETS)
        path = config_file or os.environ.get(CONFIG_ENV_VAR)
        if path:
            if not self.getConfigsFromDelimitedFile(path) or not self.storeConfigsInSQLite():
                raise TableauInputError(f"cannot load settings from {path}")
        record = self.getConfiguration(*BUDGET_RECORD)
        if record:
            overrides = json.loads(record)['settings']
            unknown = set(overrides) - set(DEFAULT_BUDGETS)
            if unknown:
                logger.error("Unknown budget settings: %s", sorted(unknown))
                raise TableauInputError(f"unknown budget settings: {', '.join(sorted(unknown))}")
            budgets.update(overrides)
        return budgets
