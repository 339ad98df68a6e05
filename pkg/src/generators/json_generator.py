#!/usr/bin/env python3
"""
JSON generator for criterion reports, scan summaries and validation reports.
"""
import json
import logging
import os
import sys

import numpy as np

from ..config import JSON_INDENT


def _default(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, tuple):
        return list(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


class JSONGenerator:
    """Writes one JSON document to a file path, or to stdout."""

    def __init__(self, output_path=None):
        self.output_path = output_path

    def render(self, payload):
        return json.dumps(payload, indent=JSON_INDENT, default=_default, allow_nan=True) + "\n"

    def write(self, payload):
        """
        Args:
            payload (dict): Document, typically a report's to_dict()

        Returns:
            str: The rendered text
        """
        text = self.render(payload)
        if self.output_path is None:
            sys.stdout.write(text)
        else:
            directory = os.path.dirname(self.output_path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(self.output_path, "w", encoding="utf-8") as f:
                f.write(text)
            logging.info(f"JSON written to {self.output_path}")
        return text
