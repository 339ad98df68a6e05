"""Utility modules: errors, text parsing/formatting and JSON document storage."""
