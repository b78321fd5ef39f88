"""Finite proarrow equipments: categories, profunctors, double categories."""

from __future__ import annotations

__version__ = "0.1.0"
