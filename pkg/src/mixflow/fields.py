"""Conservative field container and the binary snapshot format."""
from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .grid import Grid

SNAPSHOT_MAGIC = b"MIXFSNAP"
SNAPSHOT_VERSION = 1


@dataclass
class FieldSet:
    """Conservative unknowns packed as one array of shape (nvar, *N).

    Row order: rho, rho*u (dim rows), rho*E, rho_k (n rows).
    """

    q: np.ndarray
    dim: int
    n: int

    def __post_init__(self):
        self.q = np.asarray(self.q, dtype=float)
        if self.q.shape[0] != nvar(self.dim, self.n):
            raise ValueError("packed array has the wrong number of rows")

    @classmethod
    def from_parts(cls, rho, mom, rhoE, rhok) -> "FieldSet":
        rho = np.asarray(rho, dtype=float)
        mom = np.asarray(mom, dtype=float)
        rhok = np.asarray(rhok, dtype=float)
        q = np.concatenate([rho[None], mom, np.asarray(rhoE, dtype=float)[None], rhok])
        return cls(q, mom.shape[0], rhok.shape[0])

    @property
    def rho(self):
        return self.q[0]

    @property
    def mom(self):
        return self.q[1:1 + self.dim]

    @property
    def rhoE(self):
        return self.q[1 + self.dim]

    @property
    def rhok(self):
        return self.q[2 + self.dim:]

    def copy(self) -> "FieldSet":
        return FieldSet(self.q.copy(), self.dim, self.n)

    def check(self, rtol: float = 1e-10):
        if not np.all(np.isfinite(self.q)):
            raise ValueError("field set contains non-finite values")
        if np.any(self.rho <= 0):
            raise ValueError("density must be positive everywhere")
        dev = np.abs(self.rhok.sum(axis=0) - self.rho)
        if np.any(dev > rtol * self.rho):
            raise ValueError("species densities do not sum to the density")
        return self


def nvar(dim: int, n: int) -> int:
    return 2 + dim + n


def field_names(dim: int, n: int) -> list:
    return (["rho"] + [f"mom{i}" for i in range(dim)] + ["rhoE"]
            + [f"rho_{k}" for k in range(n)])


def write_snapshot(path, fs: FieldSet, grid: Grid, t: float, digest: str = "",
                   config_text: str | None = None) -> Path:
    path = Path(path)
    header = {
        "format_version": SNAPSHOT_VERSION,
        "dim": grid.dim,
        "N": list(grid.N),
        "L": list(grid.L),
        "n": fs.n,
        "t": float(t),
        "digest": digest,
        "fields": field_names(fs.dim, fs.n),
    }
    blob = json.dumps(header, sort_keys=True).encode()
    with open(path, "wb") as fh:
        fh.write(SNAPSHOT_MAGIC)
        fh.write(struct.pack("<I", len(blob)))
        fh.write(blob)
        fh.write(np.ascontiguousarray(fs.q, dtype="<f8").tobytes())
    if config_text is not None:
        path.with_suffix(path.suffix + ".cfg").write_text(config_text)
    return path


def read_snapshot(path):
    """Return (FieldSet, Grid, header dict)."""
    with open(path, "rb") as fh:
        if fh.read(len(SNAPSHOT_MAGIC)) != SNAPSHOT_MAGIC:
            raise ValueError(f"{path} is not a snapshot file")
        (size,) = struct.unpack("<I", fh.read(4))
        header = json.loads(fh.read(size))
        if header["format_version"] != SNAPSHOT_VERSION:
            raise ValueError(f"unsupported snapshot version {header['format_version']}")
        data = np.frombuffer(fh.read(), dtype="<f8")
    grid = Grid(header["dim"], tuple(header["N"]), tuple(header["L"]))
    shape = (nvar(grid.dim, header["n"]),) + grid.shape
    if data.size != int(np.prod(shape)):
        raise ValueError("snapshot payload size does not match its header")
    fs = FieldSet(data.reshape(shape).astype(float), grid.dim, header["n"])
    return fs, grid, header
