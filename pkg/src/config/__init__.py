# bp_engine/src/config/__init__.py
# Purpose: Package marker for config directory