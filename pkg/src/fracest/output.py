#!/usr/bin/env python3
"""
Writers for CSV tables and whitespace-separated plot data.

CSV files are UTF-8 with LF line ends. The first line is a schema comment
``# schema: fracest-<kind>/<version>``, the second the header row. Numbers
are written with 17 significant digits using Python's locale-independent
formatting, so identical values always give identical bytes.
"""

import csv
import io
import math
import sys
from contextlib import contextmanager
from typing import IO, Iterable, Iterator, List, Optional, Sequence

from fracest_stats.models import SeriesSummary, TrialRecord

TRIALS_SCHEMA = "fracest-trials/1"
SUMMARY_SCHEMA = "fracest-summary/1"
TRIAL_COLUMNS = ['k', 'delta', 'eps_max', 'energy_error', 'flux_error', 'majorant', 'minorant', 'I1', 'I2']
SUMMARY_COLUMNS = ['name', 'n', 'm', 'M', 'N', 'alpha', 'I1', 'I2', 'delta_max', 'eps_max', 'excluded']


def format_number(value) -> str:
    """17 significant digits; integers stay integers; nan/inf spelled out."""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    value = float(value)
    if math.isnan(value):
        return 'nan'
    if math.isinf(value):
        return 'inf' if value > 0 else '-inf'
    return format(value, '.17g')


@contextmanager
def open_output(path: Optional[str]) -> Iterator[IO[str]]:
    """Open ``path`` for writing, or yield stdout for None or '-'."""
    if path is None or path == '-':
        yield sys.stdout
        return
    with open(path, 'w', encoding='utf-8', newline='') as handle:
        yield handle


def _writer(handle: IO[str]):
    return csv.writer(handle, lineterminator='\n')


def write_trials_csv(handle: IO[str], records: Iterable[TrialRecord]) -> None:
    handle.write(f"# schema: {TRIALS_SCHEMA}\n")
    writer = _writer(handle)
    writer.writerow(TRIAL_COLUMNS)
    for r in records:
        writer.writerow([format_number(v) for v in (
            r.k, r.delta, r.eps_max, r.energy_error, r.flux_error, r.majorant, r.minorant, r.I1, r.I2,
        )])


def write_summary_csv(handle: IO[str], summaries: Iterable[SeriesSummary]) -> None:
    handle.write(f"# schema: {SUMMARY_SCHEMA}\n")
    writer = _writer(handle)
    writer.writerow(SUMMARY_COLUMNS)
    for s in summaries:
        writer.writerow([s.name or ''] + [format_number(v) for v in (
            s.n, s.m, s.M, s.N, s.alpha, s.mean_I1, s.mean_I2, s.delta_max, s.eps_max, s.n_excluded,
        )])


def write_plot_data(handle: IO[str], columns: Sequence[str], rows: Iterable[Sequence[float]]) -> None:
    """Whitespace-separated columns under a '# ' header line."""
    handle.write("# " + " ".join(columns) + "\n")
    for row in rows:
        handle.write(" ".join(format_number(v) for v in row) + "\n")


def trials_csv_text(records: Iterable[TrialRecord]) -> str:
    buffer = io.StringIO()
    write_trials_csv(buffer, records)
    return buffer.getvalue()


def read_csv_rows(handle: IO[str]) -> List[dict]:
    """Rows of a fracest CSV as dicts of strings, skipping '#' comment lines."""
    lines = [line for line in handle if not line.startswith('#')]
    return list(csv.DictReader(lines))
