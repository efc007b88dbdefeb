"""Matrix and instance file I/O.

Two dense-matrix formats, chosen by file suffix:

* ``.csv`` — first line ``<rows>,<cols>``, then one comma-separated line per
  row. Values are written with 17 significant digits, so write-then-read is
  bit-identical for float64.
* ``.mtx`` — Matrix Market array format (via scipy.io), same precision.

A problem instance is a directory holding ``x``, ``x0``, ``c0`` matrix files
plus ``meta.json`` with the seed, generator parameters, labels, and outlier
support; the row-space basis is recomputed from ``x0`` on load.
"""

import json
import numpy as np
import scipy.io
from dataclasses import asdict
from pathlib import Path

from .synth import GenSpec, ProblemInstance, _row_space_basis


class MatrixParseError(ValueError):
    """Malformed matrix file; the message names the offending line."""


def save_matrix(path, m):
    path = Path(path)
    m = np.asarray(m, dtype=float)
    if m.ndim != 2:
        raise ValueError("only 2-d matrices are supported")
    if path.suffix == ".csv":
        with open(path, "w") as fh:
            fh.write("%d,%d\n" % m.shape)
            for row in m:
                fh.write(",".join("%.17g" % v for v in row) + "\n")
    elif path.suffix == ".mtx":
        scipy.io.mmwrite(str(path), m, precision=17)
    else:
        raise ValueError("unsupported matrix format %r (use .csv or .mtx)"
                         % path.suffix)


def load_matrix(path):
    path = Path(path)
    if path.suffix == ".csv":
        return _load_csv(path)
    if path.suffix == ".mtx":
        try:
            return np.asarray(scipy.io.mmread(str(path)), dtype=float)
        except Exception as exc:
            raise MatrixParseError("%s: %s" % (path, exc)) from exc
    raise ValueError("unsupported matrix format %r (use .csv or .mtx)"
                     % path.suffix)


def _load_csv(path):
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise MatrixParseError("%s:1: empty file, expected a rows,cols header"
                               % path)
    head = lines[0].split(",")
    try:
        rows, cols = (int(v) for v in head)
        if rows < 0 or cols < 0:
            raise ValueError
    except ValueError:
        raise MatrixParseError("%s:1: malformed header %r, expected "
                               "rows,cols" % (path, lines[0])) from None
    out = np.empty((rows, cols))
    for i in range(rows):
        lineno = i + 2
        if i + 1 >= len(lines):
            raise MatrixParseError("%s:%d: expected %d data rows, file ends "
                                   "after %d" % (path, lineno, rows, i))
        fields = lines[i + 1].split(",")
        if len(fields) != cols:
            raise MatrixParseError("%s:%d: expected %d values, got %d"
                                   % (path, lineno, cols, len(fields)))
        try:
            out[i] = [float(v) for v in fields]
        except ValueError:
            raise MatrixParseError("%s:%d: non-numeric value in row"
                                   % (path, lineno)) from None
    for extra, line in enumerate(lines[rows + 1:], start=rows + 2):
        if line.strip():
            raise MatrixParseError("%s:%d: trailing content after %d data "
                                   "rows" % (path, extra, rows))
    return out


def save_json(path, payload):
    """Write a report dict as stable, diffable JSON."""
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def save_roc_csv(path, curve):
    """Write ROC points as a two-column plotting CSV."""
    with open(path, "w") as fh:
        fh.write("fpr,tpr\n")
        for f, t in curve.points:
            fh.write("%.17g,%.17g\n" % (f, t))


def save_instance(dirpath, inst, spec=None, fmt="csv"):
    """Persist a ProblemInstance as a bundle directory.

    spec, when given, is echoed into meta.json so the bundle is regenerable.
    """
    d = Path(dirpath)
    d.mkdir(parents=True, exist_ok=True)
    for name, m in (("x", inst.x), ("x0", inst.x0), ("c0", inst.c0)):
        save_matrix(d / ("%s.%s" % (name, fmt)), m)
    meta = {
        "spec": asdict(spec) if spec is not None else None,
        "seed": spec.seed if spec is not None else None,
        "labels": [int(v) for v in inst.labels],
        "support0": [int(v) for v in inst.support0],
    }
    save_json(d / "meta.json", meta)


def load_instance(dirpath):
    """Load a bundle directory back into (ProblemInstance, meta dict)."""
    d = Path(dirpath)
    if not d.is_dir():
        raise MatrixParseError("%s: not an instance directory" % d)
    mats = {}
    for name in ("x", "x0", "c0"):
        for fmt in ("csv", "mtx"):
            p = d / ("%s.%s" % (name, fmt))
            if p.exists():
                mats[name] = load_matrix(p)
                break
        else:
            raise MatrixParseError("%s: missing %s.csv/.mtx" % (d, name))
    meta_path = d / "meta.json"
    if not meta_path.exists():
        raise MatrixParseError("%s: missing meta.json" % d)
    with open(meta_path) as fh:
        meta = json.load(fh)
    n = mats["x"].shape[1]
    support0 = np.asarray(sorted(int(v) for v in meta["support0"]), dtype=int)
    labels = np.asarray([int(v) for v in meta["labels"]], dtype=int)
    if labels.size != n:
        raise MatrixParseError("%s: meta.json labels length %d does not "
                               "match %d columns" % (d, labels.size, n))
    inst = ProblemInstance(x=mats["x"], x0=mats["x0"], c0=mats["c0"],
                           support0=support0, labels=labels,
                           v0=_row_space_basis(mats["x0"], support0))
    return inst, meta


def spec_from_meta(meta):
    """Rebuild a GenSpec from a bundle's meta.json echo, or None."""
    if not meta.get("spec"):
        return None
    return GenSpec(**meta["spec"])
