"""Result cache - content-addressed reuse of computed documents.

Keys hash the schema version, the command, its inputs and the generator
scheme, so changing any input (D included) misses. Payloads are stored as
sorted-key JSON text. Cache problems never change a result: sqlite and file
system errors are RECOVERABLE and fall back to recomputation.
"""

import hashlib
import json
import os
import sqlite3
from typing import Callable, Dict, Optional

from src.database.db_manager import DatabaseManager
from src.database.migrations import CACHE_SCHEMA_VERSION
from src.utils.error_handler import CacheAuditError, ErrorHandler
from src.utils.logging_factory import LoggingFactory

ENV_CACHE_DIR = "BP_ENGINE_CACHE_DIR"
DEFAULT_FILENAME = "results.sqlite"


def canonical_json(document: Dict) -> str:
    """The byte-stable text form used for storage and audits."""
    return json.dumps(document, sort_keys=True, separators=(",", ":"))


def normalize(document: Dict) -> Dict:
    """Tuples become lists exactly as they would after a cache round trip."""
    return json.loads(canonical_json(document))


def cache_key(command: str, inputs: Dict, scheme: str) -> str:
    material = canonical_json(
        {
            "schema": CACHE_SCHEMA_VERSION,
            "command": command,
            "inputs": inputs,
            "scheme": scheme,
        }
    )
    return hashlib.sha256(material.encode("utf-8")).hexdigest()


def resolve_cache_dir(configured: Optional[str], override: Optional[str] = None) -> str:
    """--cache-dir wins over BP_ENGINE_CACHE_DIR, which wins over the config."""
    return override or os.environ.get(ENV_CACHE_DIR) or configured or ".bp_cache"


class ResultCache:
    """sqlite-backed store of rendered-ready documents.

    Usage:
        cache = ResultCache(".bp_cache")
        document = cache.fetch_or_compute("homology", {"p": 3, "n": 1}, "hazewinkel", compute)
    """

    def __init__(
        self,
        directory: str,
        filename: str = DEFAULT_FILENAME,
        enabled: bool = True,
        audit: bool = False,
    ):
        self.path = os.path.join(directory, filename)
        self.enabled = enabled
        self.audit = audit
        self.last_hit = False
        self.logger = LoggingFactory.get_logger(__name__)

    def get(self, key: str) -> Optional[str]:
        """Stored payload text for key, or None on a miss.

        Corrupt payloads are deleted and reported as a miss.
        """
        with DatabaseManager(self.path) as db:
            row = db.fetch_one("SELECT payload FROM cache_entries WHERE key = ?", (key,))
            if row is None:
                return None
            text = row["payload"]
            try:
                json.loads(text)
            except json.JSONDecodeError as e:
                ErrorHandler.handle_error(e, context=f"cache entry {key[:12]}")
                db.execute_query("DELETE FROM cache_entries WHERE key = ?", (key,))
                return None
            return text

    def put(self, key: str, command: str, scheme: str, text: str) -> bool:
        with DatabaseManager(self.path) as db:
            db.execute_query(
                "INSERT OR REPLACE INTO cache_entries "
                "(key, schema_version, command, scheme, payload) VALUES (?, ?, ?, ?, ?)",
                (key, CACHE_SCHEMA_VERSION, command, scheme, text),
            )
        self.logger.debug("Cached %s result under %s", command, key[:12])
        return True

    def fetch_or_compute(
        self, command: str, inputs: Dict, scheme: str, compute: Callable[[], Dict]
    ) -> Dict:
        """Cached document for these inputs, computing and storing it on a miss.

        Raises:
            CacheAuditError: in audit mode, when a recomputation differs from
                the cached bytes
        """
        self.last_hit = False
        if not self.enabled:
            return normalize(compute())

        key = cache_key(command, inputs, scheme)
        try:
            cached = self.get(key)
        except (sqlite3.Error, OSError) as e:
            return normalize(
                ErrorHandler.handle_error(e, context="cache_get", retry_func=compute)
            )

        if cached is not None:
            self.last_hit = True
            self.logger.debug("Cache hit for %s (%s)", command, key[:12])
            if self.audit:
                fresh = canonical_json(compute())
                if fresh != cached:
                    raise CacheAuditError(
                        f"recomputed {command} result differs from cache entry {key[:12]}"
                    )
                self.logger.info("Cache audit: %s entry %s reproduced exactly", command, key[:12])
            return json.loads(cached)

        self.logger.debug("Cache miss for %s (%s)", command, key[:12])
        document = compute()
        text = canonical_json(document)
        try:
            self.put(key, command, scheme, text)
        except (sqlite3.Error, OSError) as e:
            ErrorHandler.handle_error(e, context="cache_put")
        return json.loads(text)
