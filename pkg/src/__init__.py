# bp_engine/src/__init__.py
# Purpose: Package marker for src directory
