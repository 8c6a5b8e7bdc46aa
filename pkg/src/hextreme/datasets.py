"""Bundled example datasets.

Three classic positive-support samples: September minimum monthly flows of
the Piracicaba river (m^3/s, 1960-2014), tensile strength of 20 mm carbon
fibers (GPa), and failure times of machine parts (hours).
"""

from __future__ import annotations

from importlib import resources

import numpy as np

from .estimate import Dataset
from .specfun import DomainError

BUNDLED = ("piracicaba_x", "carbon_y", "failures_z")


def load_dataset(name: str) -> Dataset:
    """Load one of the bundled datasets by name."""
    if name not in BUNDLED:
        raise DomainError(f"unknown dataset {name!r}; available: {BUNDLED}")
    text = resources.files("hextreme").joinpath(f"data/{name}.txt").read_text()
    values = np.array([float(line) for line in text.split()], dtype=float)
    return Dataset(values=values, name=name)


def read_data_file(path: str) -> Dataset:
    """Read a one-column text file of positive decimals, optional header line."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    values = []
    for lineno, raw in enumerate(lines, start=1):
        s = raw.strip()
        if not s:
            continue
        try:
            v = float(s)
        except ValueError:
            if lineno == 1 and not values:
                continue  # header line
            raise DomainError(f"line {lineno}: not a number: {s!r}") from None
        if not v > 0:
            raise DomainError(f"line {lineno}: value must be positive, got {v}")
        values.append(v)
    if len(values) < 2:
        raise DomainError(f"{path}: need at least 2 positive values")
    import os

    return Dataset(values=np.array(values), name=os.path.basename(path))
