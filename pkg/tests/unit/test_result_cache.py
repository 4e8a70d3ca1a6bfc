"""Unit tests for the content-addressed result cache."""

import sqlite3

import pytest

from src.utils.error_handler import CacheAuditError
from src.utils.result_cache import (
    ENV_CACHE_DIR,
    ResultCache,
    cache_key,
    canonical_json,
    resolve_cache_dir,
)


class Counter:
    """Compute function that records how often it ran."""

    def __init__(self, document):
        self.document = document
        self.calls = 0

    def __call__(self):
        self.calls += 1
        return self.document


class TestCacheKeys:
    """Test key derivation and canonical payloads."""

    def test_key_depends_on_every_input(self):
        """Test D, the command and the scheme all change the key."""
        base = cache_key("homology", {"p": 3, "max_degree": 20}, "hazewinkel")
        assert base == cache_key("homology", {"max_degree": 20, "p": 3}, "hazewinkel")
        assert base != cache_key("homology", {"p": 3, "max_degree": 21}, "hazewinkel")
        assert base != cache_key("pseries", {"p": 3, "max_degree": 20}, "hazewinkel")
        assert base != cache_key("homology", {"p": 3, "max_degree": 20}, "singular")

    def test_canonical_json_sorted(self):
        """Test canonical text is key-sorted and compact."""
        assert canonical_json({"b": 1, "a": (1, 2)}) == '{"a":[1,2],"b":1}'

    def test_cache_dir_precedence(self, monkeypatch):
        """Test flag beats environment beats config."""
        monkeypatch.setenv(ENV_CACHE_DIR, "/env")
        assert resolve_cache_dir("/config", "/flag") == "/flag"
        assert resolve_cache_dir("/config") == "/env"
        monkeypatch.delenv(ENV_CACHE_DIR)
        assert resolve_cache_dir("/config") == "/config"
        assert resolve_cache_dir(None) == ".bp_cache"


class TestResultCache:
    """Test fetch_or_compute behaviour."""

    @pytest.fixture
    def cache(self, tmp_path):
        """Cache in a temporary directory."""
        return ResultCache(str(tmp_path / "cache"))

    def test_miss_then_hit(self, cache):
        """Test the second call is served without recomputation."""
        compute = Counter({"verdict": "PASS", "rows": [(1, 2)]})
        first = cache.fetch_or_compute("homology", {"p": 3}, "hazewinkel", compute)
        assert not cache.last_hit
        second = cache.fetch_or_compute("homology", {"p": 3}, "hazewinkel", compute)
        assert cache.last_hit
        assert compute.calls == 1
        assert first == second == {"verdict": "PASS", "rows": [[1, 2]]}

    def test_changed_input_misses(self, cache):
        """Test a different degree bound recomputes."""
        compute = Counter({"verdict": "PASS"})
        cache.fetch_or_compute("homology", {"max_degree": 20}, "hazewinkel", compute)
        cache.fetch_or_compute("homology", {"max_degree": 21}, "hazewinkel", compute)
        assert compute.calls == 2

    def test_disabled_cache_always_computes(self, tmp_path):
        """Test --no-cache neither reads nor writes."""
        cache = ResultCache(str(tmp_path / "cache"), enabled=False)
        compute = Counter({"verdict": "PASS"})
        cache.fetch_or_compute("pseries", {}, "hazewinkel", compute)
        cache.fetch_or_compute("pseries", {}, "hazewinkel", compute)
        assert compute.calls == 2
        assert not (tmp_path / "cache").exists()

    def test_corrupt_payload_is_recomputed(self, cache):
        """Test an unparsable entry is dropped and treated as a miss."""
        compute = Counter({"verdict": "PASS"})
        cache.fetch_or_compute("pseries", {"p": 3}, "hazewinkel", compute)
        key = cache_key("pseries", {"p": 3}, "hazewinkel")
        with sqlite3.connect(cache.path) as conn:
            conn.execute("UPDATE cache_entries SET payload = ? WHERE key = ?", ("{not json", key))
        assert cache.get(key) is None
        result = cache.fetch_or_compute("pseries", {"p": 3}, "hazewinkel", compute)
        assert result == {"verdict": "PASS"}
        assert compute.calls == 2

    def test_unusable_directory_falls_back(self, tmp_path):
        """Test a cache path blocked by a file still yields the result."""
        blocker = tmp_path / "blocked"
        blocker.write_text("not a directory", encoding="utf-8")
        cache = ResultCache(str(blocker / "inner"))
        compute = Counter({"verdict": "FAIL"})
        assert cache.fetch_or_compute("verify-main", {}, "hazewinkel", compute) == {
            "verdict": "FAIL"
        }
        assert compute.calls == 1

    def test_audit_passes_on_identical_recompute(self, tmp_path):
        """Test audit mode accepts byte-identical recomputation."""
        directory = str(tmp_path / "cache")
        compute = Counter({"verdict": "PASS"})
        ResultCache(directory).fetch_or_compute("pseries", {}, "hazewinkel", compute)
        auditing = ResultCache(directory, audit=True)
        assert auditing.fetch_or_compute("pseries", {}, "hazewinkel", compute) == {"verdict": "PASS"}
        assert auditing.last_hit
        assert compute.calls == 2

    def test_audit_detects_mismatch(self, tmp_path):
        """Test audit mode raises when the recomputation differs."""
        directory = str(tmp_path / "cache")
        ResultCache(directory).fetch_or_compute(
            "pseries", {}, "hazewinkel", lambda: {"verdict": "PASS"}
        )
        auditing = ResultCache(directory, audit=True)
        with pytest.raises(CacheAuditError):
            auditing.fetch_or_compute("pseries", {}, "hazewinkel", lambda: {"verdict": "FAIL"})
