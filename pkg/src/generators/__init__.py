"""Output generators for CSV tables and JSON reports."""
