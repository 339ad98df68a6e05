#!/usr/bin/env python3
"""
CSV generator for scan tables, correlation tensors and reproduction summaries.

Numbers use format_number so repeated runs produce identical bytes.
"""
import csv
import io
import os
import logging
import sys

from ..utils.text_utils import format_number


class CSVGenerator:
    """Writes rows to a file path, or to stdout when no path is given."""

    def __init__(self, output_path=None):
        """
        Args:
            output_path (str): Destination file; None writes to stdout
        """
        self.output_path = output_path

    def render(self, header, rows):
        """Render rows to a CSV string with '\\n' line endings."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_number(v) if isinstance(v, float) else v for v in row])
        return buffer.getvalue()

    def write(self, header, rows):
        text = self.render(header, rows)
        if self.output_path is None:
            sys.stdout.write(text)
        else:
            directory = os.path.dirname(self.output_path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(self.output_path, "w", encoding="utf-8", newline="") as f:
                f.write(text)
            logging.info(f"CSV written to {self.output_path}")
        return text

    def scan_table(self, scan):
        """Header and rows for a ScanResult: x, statistic, bound, margin, competitors..."""
        names = list(scan.competitors)
        header = [scan.parameter, "statistic", "bound", "margin"] + names
        rows = []
        for i, x in enumerate(scan.grid):
            row = [float(x), float(scan.statistics[i]), float(scan.bounds[i]), float(scan.margins[i])]
            row += [float(scan.competitors[name][i]) for name in names]
            rows.append(row)
        return header, rows

    def write_scan(self, scan):
        return self.write(*self.scan_table(scan))

    def write_tensor(self, tensor, rows):
        """One row per multi-index: a1, ..., an, mu."""
        header = [f"alpha{k}" for k in range(1, tensor.n_parties + 1)] + ["mu"]
        return self.write(header, ([*r[:-1], float(r[-1])] for r in rows))

    def write_reproduction(self, rows):
        header = ["example", "row", "criterion", "reference_threshold", "computed_threshold",
                  "difference", "status", "note"]
        body = []
        for r in rows:
            diff = None if r["computed_threshold"] is None else abs(r["computed_threshold"] - r["reference_threshold"])
            body.append([
                r["example"], r["row"], r["criterion"], float(r["reference_threshold"]),
                "absent" if r["computed_threshold"] is None else float(r["computed_threshold"]),
                "" if diff is None else float(diff), r["status"], r.get("note", ""),
            ])
        return self.write(header, body)
