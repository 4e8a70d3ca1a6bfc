# bp_engine/src/database/db_manager.py
# Purpose: Manages the sqlite connection behind the result cache
import os
import sqlite3
from typing import Optional

from src.database.migrations import DatabaseMigrations
from src.utils.logging_factory import LoggingFactory


class DatabaseManager:
    """Manages database connections and operations.

    Provides context manager interface for safe connection handling and
    delegates schema creation to DatabaseMigrations.
    """

    DEFAULT_PATH = os.path.join(".bp_cache", "results.sqlite")

    def __init__(self, config):
        """Initialize DatabaseManager.

        Args:
            config: Configuration dictionary with a ``cache`` section, or a
                direct path string (":memory:" allowed)
        """
        if isinstance(config, str):
            self.db_path = config
            self.config = {}
        elif isinstance(config, dict) and isinstance(config.get("cache"), dict):
            cache = config["cache"]
            self.db_path = os.path.join(
                cache.get("directory", ".bp_cache"), cache.get("filename", "results.sqlite")
            )
            self.config = config
        else:
            self.db_path = self.DEFAULT_PATH
            self.config = config or {}

        self.conn: Optional[sqlite3.Connection] = None
        self.logger = LoggingFactory.get_logger(__name__)

    def __enter__(self):
        """Context manager entry point."""
        self.connect()
        self.create_tables()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        """Context manager exit point."""
        self.close()

    def connect(self):
        """Establish database connection and ensure the cache directory exists."""
        try:
            if self.conn is not None:
                self.logger.debug("Database already connected, reusing connection")
                return

            if self.db_path != ":memory:":
                dir_path = os.path.dirname(self.db_path)
                if dir_path:
                    os.makedirs(dir_path, exist_ok=True)

            self.conn = sqlite3.connect(self.db_path)
            self.conn.row_factory = sqlite3.Row
            self.logger.debug("Database connection established: %s", self.db_path)
        except sqlite3.Error as e:
            self.logger.error("Failed to connect to database: %s", e)
            raise

    def close(self):
        """Close database connection."""
        if self.conn:
            self.conn.close()
            self.conn = None
            self.logger.debug("Database connection closed")

    def execute_query(self, query, params=None):
        """Execute a SQL statement in its own transaction.

        Args:
            query: SQL query string
            params: Optional parameters for parameterized query

        Returns:
            Cursor object with query results
        """
        try:
            cursor = self.conn.cursor()
            if params:
                cursor.execute(query, params)
            else:
                cursor.execute(query)
            self.conn.commit()
            return cursor
        except sqlite3.Error as e:
            self.conn.rollback()
            self.logger.error("Query execution failed: %s, Error: %s", query, e)
            raise

    def fetch_one(self, query, params=None) -> Optional[sqlite3.Row]:
        cursor = self.conn.cursor()
        cursor.execute(query, params or ())
        return cursor.fetchone()

    def create_tables(self):
        """Create the cache tables and bring the schema up to date."""
        migrations = DatabaseMigrations(self.conn)
        return migrations.create_tables() and migrations.migrate()
