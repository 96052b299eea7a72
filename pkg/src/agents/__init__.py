"""Agents - value-based learners trained against the bundled environments."""
