"""Delimited outputs: key = value analysis reports and residual/wavefunction CSVs."""
from __future__ import annotations

import csv
from typing import Mapping, Sequence

import numpy as np


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_report(path, values: Mapping[str, object]) -> None:
    with open(path, "w") as fh:
        for key, value in values.items():
            fh.write(f"{key} = {_fmt(value)}\n")


def _parse(text: str):
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    return text


def read_report(path) -> dict:
    """Inverse of ``write_report``; numeric values come back as int or float."""
    out = {}
    with open(path) as fh:
        for line in fh:
            if "=" in line and not line.startswith("#"):
                key, value = line.split("=", 1)
                out[key.strip()] = _parse(value.strip())
    return out


def write_columns(path, columns: Mapping[str, Sequence[float]], digits: int = 12) -> None:
    """CSV with one named column per mapping entry."""
    names = list(columns)
    data = np.column_stack([np.asarray(columns[k], dtype=float) for k in names])
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for row in data:
            w.writerow([f"{x:.{digits}g}" for x in row])


def read_columns(path) -> dict[str, np.ndarray]:
    with open(path) as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    data = np.array(rows[1:], dtype=float)
    return {name: data[:, i] for i, name in enumerate(rows[0])}


def write_wavefunctions(path, q, psi: np.ndarray) -> None:
    psi = np.atleast_2d(psi)
    cols = {"q": q}
    cols.update({f"psi_{n}": psi[n] for n in range(psi.shape[0])})
    write_columns(path, cols)
