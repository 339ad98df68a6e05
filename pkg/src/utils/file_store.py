#!/usr/bin/env python3
"""
JSON document storage for basis files, state files, reports and config files.
Saved documents carry a 'last_updated' UTC timestamp next to the payload fields.
"""
import os
import json
import logging
from datetime import datetime, timezone

from ..config import JSON_INDENT
from .errors import InputError


class DocumentStore:
    """Reads and writes JSON documents."""

    def load(self, path):
        """
        Load a JSON object from disk.

        Args:
            path (str): File path

        Returns:
            dict: Parsed document
        """
        try:
            with open(path, "r", encoding="utf-8") as f:
                document = json.load(f)
        except FileNotFoundError:
            raise InputError(f"file not found: {path}")
        except (OSError, json.JSONDecodeError) as e:
            logging.error(f"Error reading {path}: {e}")
            raise InputError(f"cannot read {path}: {e}")

        if not isinstance(document, dict):
            raise InputError(f"{path} must contain a JSON object")

        last_updated = document.get("last_updated", "unknown")
        logging.debug(f"Loaded {path} (last updated: {last_updated})")
        return document

    def save(self, path, document):
        """
        Save a JSON object, stamping it with 'last_updated'.

        Args:
            path (str): File path
            document (dict): Payload fields

        Returns:
            str: Path written
        """
        payload = {"last_updated": datetime.now(timezone.utc).isoformat()}
        payload.update(document)

        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)

        with open(path, "w", encoding="utf-8") as f:
            json.dump(payload, f, ensure_ascii=False, indent=JSON_INDENT)

        logging.info(f"Saved {path}")
        return path


def load_document(path):
    """Load a JSON document relative to the working directory."""
    return DocumentStore().load(path)
