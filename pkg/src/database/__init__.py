# bp_engine/src/database/__init__.py
# Purpose: Package marker for database directory
