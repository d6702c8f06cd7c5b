"""Complex sensing matrices mapping Fourier coefficients to measurements.

A point sample at (x, y) contributes the phasor row
exp(j 2 pi (k x + l y)) over all (k, l) harmonics; a path that averages its
readings contributes the mean of its points' phasor rows. Location-unaware
variants replace the true sample positions with p equispaced points between
the declared endpoints, or with the hive center for bee-and-hive loops.
"""

import csv
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .field import harmonics
from .paths import (
    ConfigurationError,
    SamplePath,
    Scheme,
    SchemeConfig,
    POINT_SCHEMES,
    UNAWARE_SCHEMES,
)

__all__ = [
    "MatrixKind",
    "SensingMatrix",
    "point_row",
    "point_rows",
    "averaged_row",
    "unaware_locations",
    "build_matrix",
]


class MatrixKind(Enum):
    POINT_EXACT = "point_exact"
    PATH_AVERAGED = "path_averaged"
    POINT_UNAWARE = "point_unaware"
    AVERAGED_UNAWARE = "averaged_unaware"
    HIVE_UNAWARE = "hive_unaware"


@dataclass
class SensingMatrix:
    """m x n complex matrix of phasors (or phasor means) plus column layout."""

    entries: np.ndarray
    column_index: np.ndarray
    kind: MatrixKind
    b: int

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=complex)
        self.column_index = np.asarray(self.column_index, dtype=int)
        n = (2 * self.b + 1) ** 2
        if self.entries.ndim != 2 or self.entries.shape[1] != n:
            raise ValueError(f"expected {n} columns for b={self.b}, got shape {self.entries.shape}")
        if self.column_index.shape != (n, 2):
            raise ValueError("column_index must list one (k, l) pair per column")

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def to_csv(self, path) -> None:
        """Write entries as rows (row, col, re, im) for external cross-checks."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["row", "col", "re", "im"])
            for q in range(self.entries.shape[0]):
                for r in range(self.entries.shape[1]):
                    v = self.entries[q, r]
                    writer.writerow([q, r, repr(float(v.real)), repr(float(v.imag))])


def point_rows(points, b: int) -> np.ndarray:
    """Phasor rows exp(j 2 pi (k x + l y)) for points of shape (m, 2)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    kl = harmonics(b).astype(float)
    return np.exp(2j * np.pi * (pts @ kl.T))


def point_row(pt, b: int) -> np.ndarray:
    """Single phasor row for one sampling location."""
    return point_rows(np.asarray(pt, dtype=float)[None, :], b)[0]


def averaged_row(path: SamplePath, b: int) -> np.ndarray:
    """Mean phasor row over all points of a path (its accumulator reading)."""
    if len(path.points) == 0:
        raise ValueError("cannot average an empty path")
    return point_rows(path.points, b).mean(axis=0)


def unaware_locations(b1, b2, p: int) -> np.ndarray:
    """p equispaced locations from b1 to b2 inclusive, shape (p, 2).

    This is the location-unaware stand-in for p samples on a path with known
    endpoints: point t sits at b1 + t/(p-1) * (b2 - b1), t = 0..p-1.
    """
    if p < 2:
        raise ConfigurationError("p must be >= 2 for endpoint interpolation")
    return np.linspace(np.asarray(b1, dtype=float), np.asarray(b2, dtype=float), p)


def _declared_endpoints(path: SamplePath) -> tuple:
    if path.endpoints is None:
        raise ConfigurationError(
            "location-unaware mode needs declared path endpoints"
        )
    return path.endpoints


def _unaware_path_points(path: SamplePath) -> np.ndarray:
    b1, b2 = _declared_endpoints(path)
    p = len(path.points)
    if p == 1:
        # Equispacing needs two samples; a single reading is pinned to b1.
        return np.asarray(b1, dtype=float)[None, :]
    return unaware_locations(b1, b2, p)


def build_matrix(paths: list[SamplePath], config: SchemeConfig) -> SensingMatrix:
    """Assemble the sensing matrix for one cell's paths.

    Location-aware: one row per sample point for point schemes, one averaged
    row per path for the rest. Location-unaware: rows use the equispaced
    endpoint interpolation (line schemes) or the hive center (bee-and-hive);
    schemes without a defined unaware variant are rejected.
    """
    if not paths:
        raise ValueError("no paths to build a matrix from")
    b = config.b
    scheme = config.scheme
    cols = harmonics(b)

    if config.location_aware:
        if scheme in POINT_SCHEMES:
            entries = point_rows(np.vstack([sp.points for sp in paths]), b)
            kind = MatrixKind.POINT_EXACT
        else:
            entries = np.vstack([averaged_row(sp, b) for sp in paths])
            kind = MatrixKind.PATH_AVERAGED
        return SensingMatrix(entries=entries, column_index=cols, kind=kind, b=b)

    if scheme not in UNAWARE_SCHEMES:
        raise ConfigurationError(
            f"scheme {scheme} has no location-unaware variant; "
            f"supported: {sorted(s.value for s in UNAWARE_SCHEMES)}"
        )
    if scheme is Scheme.LINE_BOUNDARY_POINTS:
        entries = point_rows(
            np.vstack([_unaware_path_points(sp) for sp in paths]), b
        )
        kind = MatrixKind.POINT_UNAWARE
    elif scheme in (Scheme.LINE_BOUNDARY_AVG, Scheme.LINE_INNER_AVG):
        entries = np.vstack(
            [point_rows(_unaware_path_points(sp), b).mean(axis=0) for sp in paths]
        )
        kind = MatrixKind.AVERAGED_UNAWARE
    else:  # BEE_HIVE: the walk averages out around its center
        hives = []
        for sp in paths:
            if sp.hive is None:
                raise ConfigurationError("bee-and-hive paths must carry their hive center")
            hives.append(sp.hive)
        entries = point_rows(np.asarray(hives, dtype=float), b)
        kind = MatrixKind.HIVE_UNAWARE
    return SensingMatrix(entries=entries, column_index=cols, kind=kind, b=b)
