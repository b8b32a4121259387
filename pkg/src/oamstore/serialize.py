"""File formats: matrix JSON, count-table CSV, trace CSV.

Matrices go to JSON as {"rows": n, "cols": m, "re": [...], "im": [...]}
with row-major entry order. Count tables go to CSV with columns
setting_i, setting_j, counts, exposure; single-system tables use -1 for
setting_j. All floats round-trip exactly (repr serialization).
"""
import csv
import json

import numpy as np

from .validation import ContractError


def matrix_to_obj(M):
    A = np.asarray(M, dtype=complex)
    if A.ndim == 1:
        A = A.reshape(-1, 1)
    return {
        "rows": A.shape[0],
        "cols": A.shape[1],
        "re": A.real.ravel().tolist(),
        "im": A.imag.ravel().tolist(),
    }


def matrix_from_obj(obj):
    rows, cols = int(obj["rows"]), int(obj["cols"])
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj["im"], dtype=float)
    if re.size != rows * cols or im.size != rows * cols:
        raise ContractError("matrix JSON entry count does not match rows*cols")
    return (re + 1j * im).reshape(rows, cols)


def save_matrix(path, M, meta=None):
    obj = matrix_to_obj(M)
    if meta:
        obj["meta"] = meta
    with open(path, "w") as f:
        json.dump(obj, f)
        f.write("\n")


def load_matrix(path):
    with open(path) as f:
        return matrix_from_obj(json.load(f))


def save_counts(path, settings, counts, exposure):
    """Count table CSV. settings: list of (i, j) pairs or bare ints."""
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["setting_i", "setting_j", "counts", "exposure"])
        for s, n, t in zip(settings, counts, exposure):
            if np.isscalar(s) or isinstance(s, (int, np.integer)):
                i, j = int(s), -1
            else:
                i, j = int(s[0]), int(s[1])
            w.writerow([i, j, int(n), repr(float(t))])


def load_counts(path):
    settings, counts, exposure = [], [], []
    with open(path, newline="") as f:
        r = csv.reader(f)
        header = next(r)
        if header[:4] != ["setting_i", "setting_j", "counts", "exposure"]:
            raise ContractError(f"unexpected count CSV header: {header}")
        for row in r:
            i, j = int(row[0]), int(row[1])
            settings.append(i if j < 0 else (i, j))
            counts.append(int(row[2]))
            exposure.append(float(row[3]))
    return settings, np.asarray(counts), np.asarray(exposure)


def save_trace_csv(path, t, envelope):
    """Echo time trace as (time_s, re, im, abs2) rows."""
    a = np.asarray(envelope, dtype=complex)
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["time_s", "re", "im", "abs2"])
        for ti, ai in zip(t, a):
            w.writerow([repr(float(ti)), repr(float(ai.real)),
                        repr(float(ai.imag)), repr(float(abs(ai) ** 2))])


def load_trace_csv(path):
    t, a = [], []
    with open(path, newline="") as f:
        r = csv.reader(f)
        next(r)
        for row in r:
            t.append(float(row[0]))
            a.append(float(row[1]) + 1j * float(row[2]))
    return np.asarray(t), np.asarray(a)


def save_table_csv(path, columns, rows):
    """Flat numeric table; floats via repr so reloads are bit-exact."""
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(columns)
        for row in rows:
            w.writerow([x if isinstance(x, (int, str)) else repr(float(x))
                        for x in row])


def _cell(x):
    try:
        return float(x)
    except ValueError:
        return x


def load_table_csv(path):
    with open(path, newline="") as f:
        r = csv.reader(f)
        columns = next(r)
        rows = [[_cell(x) for x in row] for row in r]
    return columns, rows


def bell_result_to_obj(result):
    """JSON form of a Bell evaluation; settings stored as four matrices."""
    obj = {
        "S": float(result.S),
        "stderr": None if result.stderr is None else float(result.stderr),
        "settings": {
            name: matrix_to_obj(U)
            for name, U in zip(("A1", "A2", "B1", "B2"), result.settings.bases())
        },
        "restarts": result.restarts,
        "family": result.settings.family,
    }
    return obj


def save_json(path, obj):
    with open(path, "w") as f:
        json.dump(obj, f, indent=2, sort_keys=False)
        f.write("\n")


def load_json(path):
    with open(path) as f:
        return json.load(f)
