"""Exact tools for monoids of semistable type."""
