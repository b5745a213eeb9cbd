"""Response-table readers and writers: the package CSV schema and
two-port Touchstone v1.

Data files carry no timestamps so identical runs produce identical bytes;
run metadata belongs in a sidecar written by the command-line front end.
"""

from __future__ import annotations

import cmath
import math
from pathlib import Path

import numpy as np

from .analysis import ResponseTable
from .errors import InvalidParameterError

CSV_HEADER = "freq_hz,s11_re,s11_im,s21_re,s21_im,s11_db,s21_db"

_FREQ_SCALE = {"HZ": 1.0, "KHZ": 1e3, "MHZ": 1e6, "GHZ": 1e9}


def _fmt(x: float) -> str:
    """12 significant digits; infinities print as inf/-inf."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.11e}"


def _db(z: complex) -> float:
    mag = abs(z)
    return 20.0 * math.log10(mag) if mag > 0.0 else -math.inf


def write_response_csv(table: ResponseTable, path) -> None:
    lines = [CSV_HEADER]
    for f, s11, s21 in zip(table.frequency, table.s11, table.s21):
        lines.append(
            ",".join(
                [
                    _fmt(f),
                    _fmt(s11.real),
                    _fmt(s11.imag),
                    _fmt(s21.real),
                    _fmt(s21.imag),
                    _fmt(_db(s11)),
                    _fmt(_db(s21)),
                ]
            )
        )
    Path(path).write_text("\n".join(lines) + "\n")


def read_response_csv(path) -> ResponseTable:
    text = Path(path).read_text()
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != CSV_HEADER:
        raise InvalidParameterError(
            f"{path}: not a response CSV (expected header {CSV_HEADER!r})"
        )
    freqs, s11, s21 = [], [], []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 7:
            raise InvalidParameterError(f"{path}: malformed CSV row {ln!r}")
        vals = [float(p) for p in parts]
        freqs.append(vals[0])
        s11.append(complex(vals[1], vals[2]))
        s21.append(complex(vals[3], vals[4]))
    return ResponseTable(np.array(freqs), np.array(s11), np.array(s21))


def write_touchstone(
    freqs,
    s11,
    s21,
    s12,
    s22,
    path,
    port_z: float,
    comments=(),
) -> None:
    """Two-port Touchstone v1, Hz / real-imaginary, one row per frequency.

    The option-line reference resistance is the real port impedance of the
    run; extra context (angle, polarization) goes into comment lines.
    """
    lines = [f"! reference impedance {port_z:.6f} ohm"]
    lines.extend(f"! {c}" for c in comments)
    lines.append(f"# HZ S RI R {port_z:.6f}")
    for i, f in enumerate(freqs):
        row = [
            _fmt(float(f)),
            _fmt(s11[i].real),
            _fmt(s11[i].imag),
            _fmt(s21[i].real),
            _fmt(s21[i].imag),
            _fmt(s12[i].real),
            _fmt(s12[i].imag),
            _fmt(s22[i].real),
            _fmt(s22[i].imag),
        ]
        lines.append(" ".join(row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_touchstone(path) -> ResponseTable:
    """Parse a two-port Touchstone v1 file (RI, MA, or DB formats)."""
    fmt = "MA"
    scale = 1e9  # Touchstone v1 default unit is GHz
    rows = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("!", 1)[0].strip()
        if not line:
            continue
        if line.startswith("#"):
            tokens = line[1:].upper().split()
            i = 0
            while i < len(tokens):
                tok = tokens[i]
                if tok in _FREQ_SCALE:
                    scale = _FREQ_SCALE[tok]
                elif tok in ("RI", "MA", "DB"):
                    fmt = tok
                elif tok == "R" and i + 1 < len(tokens):
                    i += 1  # reference resistance: parsed, not needed here
                elif tok == "S":
                    pass
                else:
                    raise InvalidParameterError(
                        f"{path}: unsupported option-line token {tok!r}"
                    )
                i += 1
            continue
        parts = line.split()
        if len(parts) != 9:
            raise InvalidParameterError(
                f"{path}: expected 9-column two-port rows, got {len(parts)} columns"
            )
        rows.append([float(p) for p in parts])
    if not rows:
        raise InvalidParameterError(f"{path}: no data rows found")

    def to_complex(a: float, b: float) -> complex:
        if fmt == "RI":
            return complex(a, b)
        if fmt == "MA":
            return cmath.rect(a, math.radians(b))
        return cmath.rect(10.0 ** (a / 20.0), math.radians(b))

    rows.sort(key=lambda r: r[0])
    freqs = np.array([r[0] * scale for r in rows])
    s11 = np.array([to_complex(r[1], r[2]) for r in rows])
    s21 = np.array([to_complex(r[3], r[4]) for r in rows])
    return ResponseTable(freqs, s11, s21)


def load_response(path) -> ResponseTable:
    """Read either the package CSV schema or a Touchstone v1 file, sniffing
    by content."""
    first = ""
    for raw in Path(path).read_text().splitlines():
        if raw.strip():
            first = raw.strip()
            break
    if first == CSV_HEADER:
        return read_response_csv(path)
    return read_touchstone(path)
