# bp_engine/src/utils/__init__.py
# Purpose: Package marker for utils directory
