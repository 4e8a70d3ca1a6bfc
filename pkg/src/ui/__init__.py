# bp_engine/src/ui/__init__.py
# Purpose: Package marker for ui directory
