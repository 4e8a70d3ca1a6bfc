"""Database schema for the result cache.

One table of content-addressed payloads plus a schema_version table so a
future layout change can be detected and the cache rebuilt.
"""

import sqlite3

from src.utils.logging_factory import LoggingFactory

CACHE_SCHEMA_VERSION = 1


class DatabaseMigrations:
    """Manages database schema creation and migrations."""

    def __init__(self, db_connection):
        """Initialize DatabaseMigrations.

        Args:
            db_connection: SQLite connection object
        """
        self.conn = db_connection
        self.logger = LoggingFactory.get_logger(__name__)

    def create_tables(self) -> bool:
        """Create the cache tables.

        Returns:
            True if successful, False otherwise
        """
        try:
            cursor = self.conn.cursor()
            cursor.execute(
                """
                CREATE TABLE IF NOT EXISTS cache_entries (
                    key TEXT PRIMARY KEY,
                    schema_version INTEGER NOT NULL,
                    command TEXT NOT NULL,
                    scheme TEXT NOT NULL,
                    payload TEXT NOT NULL,
                    created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP
                )
            """
            )
            cursor.execute(
                "CREATE INDEX IF NOT EXISTS idx_cache_entries_command ON cache_entries(command)"
            )
            cursor.execute("CREATE TABLE IF NOT EXISTS schema_version (version INTEGER)")
            self.conn.commit()
            return True
        except sqlite3.Error as e:
            self.logger.error("Failed to create cache tables: %s", e)
            return False

    def current_version(self) -> int:
        cursor = self.conn.cursor()
        try:
            cursor.execute("SELECT version FROM schema_version")
            row = cursor.fetchone()
            return row[0] if row else 0
        except sqlite3.OperationalError:
            return 0

    def migrate(self) -> bool:
        """Bring the schema to CACHE_SCHEMA_VERSION.

        Entries written under an older layout cannot be trusted, so they are
        dropped rather than converted.

        Returns:
            True if successful, False otherwise
        """
        try:
            version = self.current_version()
            if version == CACHE_SCHEMA_VERSION:
                return True
            cursor = self.conn.cursor()
            if version:
                self.logger.info("Cache schema %d is outdated; clearing entries", version)
                cursor.execute("DELETE FROM cache_entries")
            cursor.execute("DELETE FROM schema_version")
            cursor.execute("INSERT INTO schema_version VALUES (?)", (CACHE_SCHEMA_VERSION,))
            self.conn.commit()
            self.logger.debug("Cache schema at version %d", CACHE_SCHEMA_VERSION)
            return True
        except sqlite3.Error as e:
            self.logger.error("Cache schema migration failed: %s", e)
            self.conn.rollback()
            return False
