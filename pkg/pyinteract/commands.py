import csv
import io
import json

import pyinteract.utils


def _csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


summary = pyinteract.utils.InteractDispatcher(
    'summary', parsers=[((), json.loads)])
verify = pyinteract.utils.InteractDispatcher(
    'verify', parsers=[((), json.loads)])
solve = pyinteract.utils.InteractDispatcher(
    'solve', parsers=[(('--format', 'csv'), _csv_rows), ((), json.loads)])
sweep = pyinteract.utils.InteractDispatcher(
    'sweep', parsers=[((), _csv_rows)])

__all__ = [
    "summary",
    "verify",
    "solve",
    "sweep",
]
