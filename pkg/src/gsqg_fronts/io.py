"""Snapshot and table emission (NDJSON / CSV) with lossless float text."""
import csv
import json
import math
from pathlib import Path

import numpy as np

from .grid import FrontState, SpectralGrid

try:
    from importlib.metadata import version as _pkg_version
    VERSION = _pkg_version("artifact")
except Exception:  # not installed
    VERSION = "0.1.0"


def fmt_float(x):
    """Shortest decimal text that parses back to the same double."""
    if x is None:
        return ""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def preamble(**meta):
    """One-line metadata record: ``# key=value ...`` with the package version first."""
    items = {"gsqg_fronts": VERSION, **meta}
    return "# " + " ".join(f"{k}={_meta_text(v)}" for k, v in items.items())


def _meta_text(v):
    return fmt_float(v) if isinstance(v, float) else str(v).replace(" ", "_")


def params_meta(params):
    return {"alpha": params.alpha, "theta_plus": params.theta_plus,
            "theta_minus": params.theta_minus, "h": params.h}


def write_csv(stream, header, rows, meta=None):
    if meta is not None:
        stream.write(preamble(**meta) + "\n")
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt_float(v) if isinstance(v, (float, np.floating)) or v is None else v
                    for v in row])


def read_csv(path):
    """Return (meta dict, header, rows of strings); the preamble is optional."""
    meta = {}
    with open(path, newline="") as fh:
        lines = fh.read().splitlines()
    if lines and lines[0].startswith("#"):
        for item in lines[0][1:].split():
            k, _, v = item.partition("=")
            meta[k] = v
        lines = lines[1:]
    reader = csv.reader(lines)
    header = next(reader)
    return meta, header, list(reader)


def snapshot_record(state):
    return {"t": state.time, "phi": state.phi.tolist(), "psi": state.psi.tolist()}


class SnapshotWriter:
    """Streams snapshots to ``snapshots.ndjson`` (first line is metadata) or
    one ``snapshot_XXXXX.csv`` file per snapshot."""

    def __init__(self, out_dir, fmt, params, grid):
        self.out_dir = Path(out_dir)
        self.fmt = fmt
        self.meta = {**params_meta(params), "n_points": grid.n_points, "length": grid.length}
        self.count = 0
        self._fh = None
        if fmt == "ndjson":
            self._fh = open(self.out_dir / "snapshots.ndjson", "w")
            self._fh.write(json.dumps({"meta": {"gsqg_fronts": VERSION, **self.meta}}) + "\n")

    def write(self, state):
        if self._fh is not None:
            self._fh.write(json.dumps(snapshot_record(state)) + "\n")
        else:
            with open(self.out_dir / f"snapshot_{self.count:05d}.csv", "w") as fh:
                write_csv(fh, ["x", "phi", "psi"],
                          zip(state.grid.x, state.phi, state.psi),
                          meta={**self.meta, "t": state.time})
        self.count += 1

    def close(self):
        if self._fh is not None:
            self._fh.close()
            self._fh = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def load_snapshots(path):
    """All FrontState records of an NDJSON snapshot file."""
    length = 2 * math.pi
    states = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            rec = json.loads(line)
            if "meta" in rec:
                length = float(rec["meta"].get("length", length))
                continue
            try:
                phi = np.array(rec["phi"], dtype=float)
                psi = np.array(rec["psi"], dtype=float)
                grid = SpectralGrid(len(phi), length)
                states.append(FrontState(grid, phi, psi, float(rec["t"])))
            except (KeyError, ValueError) as exc:
                raise ValueError(f"{path}:{lineno}: bad snapshot record ({exc})") from None
    return states


def load_state(path, index=-1):
    """One snapshot (default: the last) from an NDJSON or per-snapshot CSV file."""
    path = Path(path)
    if path.suffix == ".csv":
        meta, header, rows = read_csv(path)
        cols = {name: i for i, name in enumerate(header)}
        phi = np.array([float(r[cols["phi"]]) for r in rows])
        psi = np.array([float(r[cols["psi"]]) for r in rows])
        grid = SpectralGrid(len(phi), float(meta.get("length", 2 * math.pi)))
        return FrontState(grid, phi, psi, float(meta.get("t", 0.0)))
    states = load_snapshots(path)
    if not states:
        raise ValueError(f"{path}: no snapshots")
    return states[index]
