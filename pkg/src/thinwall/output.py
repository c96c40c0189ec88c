"""Serialisation of record streams, summaries and profile dumps."""

import csv
import json

from .evolution import RECORD_FIELDS, Regime, transition_times

__all__ = ["CSV_HEADER", "format_number", "write_csv", "write_records", "summary", "write_profile"]

CSV_HEADER = ",".join(RECORD_FIELDS)


def format_number(v, precision):
    # + 0.0 folds -0.0 into 0.0
    return f"{v + 0.0:.{precision}g}"


def _cell(value, precision):
    if isinstance(value, Regime):
        return value.label
    if isinstance(value, bool):
        return "true" if value else "false"
    return format_number(value, precision)


def _row(rec, precision):
    return [_cell(getattr(rec, name), precision) for name in RECORD_FIELDS]


def write_csv(records, fh, precision=12):
    """Write the header line then one row per record; returns the row count."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(RECORD_FIELDS)
    n = 0
    for rec in records:
        w.writerow(_row(rec, precision))
        n += 1
    return n


def write_records(records, fh, precision=12):
    """One JSON object per line with the same fields as the CSV output."""
    n = 0
    for rec in records:
        obj = {}
        for name in RECORD_FIELDS:
            v = getattr(rec, name)
            if isinstance(v, Regime):
                obj[name] = v.label
            elif isinstance(v, bool):
                obj[name] = v
            else:
                obj[name] = float(format_number(v, precision))
        fh.write(json.dumps(obj) + "\n")
        n += 1
    return n


def summary(records, precision=12):
    """Regime entry times (``"never"`` when not reached) and the final record."""
    times = transition_times(records)
    last = records[-1]
    final = {}
    for name in RECORD_FIELDS:
        v = getattr(last, name)
        final[name] = v.label if isinstance(v, Regime) else v if isinstance(v, bool) else float(
            format_number(v, precision))
    return {
        "n_records": len(records),
        "transitions": {
            r.label: ("never" if t is None else float(format_number(t, precision)))
            for r, t in times.items()
        },
        "final": final,
    }


def write_profile(x, phi, dphi, fh, precision=12):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["x", "phi", "dphi_dx"])
    for row in zip(x, phi, dphi):
        w.writerow([format_number(float(v), precision) for v in row])
