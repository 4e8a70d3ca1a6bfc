﻿# tests/__init__.py
# Makes tests a package
