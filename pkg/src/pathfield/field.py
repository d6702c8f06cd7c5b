"""2D bandlimited field represented by a finite Fourier series.

The field is

    g(x, y) = sum_{k=-b..b} sum_{l=-b..b} a[k,l] exp(j 2 pi (k x + l y))

with conjugate-symmetric coefficients, a[-k,-l] = conj(a[k,l]), so the series
is real valued on the whole plane. A bandwidth-b field carries (2b+1)^2
independent real parameters. The series is 1-periodic in both coordinates, so
evaluation outside the unit square uses the periodic extension.
"""

import csv
from dataclasses import dataclass

import numpy as np

__all__ = ["BandlimitedField", "generate_random_field", "harmonics", "fourier_sum"]


def harmonics(b: int) -> np.ndarray:
    """All (k, l) harmonic pairs of a bandwidth-b field, shape ((2b+1)^2, 2).

    Row-major with k as the outer index, k and l each running -b..b. Sensing
    matrices use the same ordering for their columns, so coefficient vectors
    obtained from ``BandlimitedField.vector()`` line up with matrix columns.
    """
    if b < 0:
        raise ValueError("bandwidth b must be >= 0")
    k = np.arange(-b, b + 1)
    kk, ll = np.meshgrid(k, k, indexing="ij")
    return np.column_stack([kk.ravel(), ll.ravel()])


def fourier_sum(coeffs: np.ndarray, x, y):
    """Unreduced complex series value at (x, y) for a (2b+1)x(2b+1) grid.

    Broadcasts over array inputs; returns a complex scalar for scalar inputs.
    The grid is indexed as coeffs[k + b, l + b].
    """
    coeffs = np.asarray(coeffs)
    size = coeffs.shape[0]
    if coeffs.shape != (size, size) or size % 2 == 0:
        raise ValueError("coefficient grid must be square with odd side")
    b = (size - 1) // 2
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    shape = np.broadcast_shapes(x.shape, y.shape)
    xf = np.broadcast_to(x, shape).ravel()
    yf = np.broadcast_to(y, shape).ravel()
    k = np.arange(-b, b + 1)
    ex = np.exp(2j * np.pi * np.outer(xf, k))
    ey = np.exp(2j * np.pi * np.outer(yf, k))
    vals = np.einsum("pk,kl,pl->p", ex, coeffs, ey)
    if shape == ():
        return complex(vals[0])
    return vals.reshape(shape)


@dataclass(frozen=True)
class BandlimitedField:
    """Bandwidth parameter plus the complex coefficient grid a[k+b, l+b]."""

    b: int
    coeffs: np.ndarray

    def __post_init__(self):
        if self.b < 0:
            raise ValueError("bandwidth b must be >= 0")
        coeffs = np.array(self.coeffs, dtype=complex)
        size = 2 * self.b + 1
        if coeffs.shape != (size, size):
            raise ValueError(f"expected a {size}x{size} coefficient grid, got {coeffs.shape}")
        scale = max(1.0, float(np.abs(coeffs).max()))
        if not np.allclose(coeffs, coeffs[::-1, ::-1].conj(), rtol=0.0, atol=1e-12 * scale):
            raise ValueError("coefficient grid is not conjugate symmetric")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def n(self) -> int:
        """Coefficient count (2b+1)^2: the degree-of-freedom count of the field."""
        return (2 * self.b + 1) ** 2

    def vector(self) -> np.ndarray:
        """Coefficients flattened in the canonical ``harmonics`` ordering."""
        return self.coeffs.ravel()

    def evaluate(self, x, y):
        """Real field value g(x, y); scalars or broadcastable arrays."""
        out = fourier_sum(self.coeffs, x, y)
        if isinstance(out, complex):
            return out.real
        return out.real

    def evaluate_complex(self, x, y):
        """Full complex series sum, for checking the imaginary residual."""
        return fourier_sum(self.coeffs, x, y)

    def to_csv(self, path) -> None:
        """Write the grid as rows (k, l, re, im); floats round-trip exactly."""
        kl = harmonics(self.b)
        flat = self.coeffs.ravel()
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["k", "l", "re", "im"])
            for (k, l), a in zip(kl, flat):
                writer.writerow([int(k), int(l), repr(float(a.real)), repr(float(a.imag))])

    @classmethod
    def from_csv(cls, path) -> "BandlimitedField":
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != ["k", "l", "re", "im"]:
                raise ValueError(f"unexpected header {header!r}; want k,l,re,im")
            rows = [(int(k), int(l), float(re), float(im)) for k, l, re, im in reader]
        if not rows:
            raise ValueError("empty coefficient file")
        b = max(max(abs(k), abs(l)) for k, l, _, _ in rows)
        size = 2 * b + 1
        if len(rows) != size * size:
            raise ValueError(f"expected {size * size} rows for b={b}, got {len(rows)}")
        grid = np.full((size, size), np.nan, dtype=complex)
        for k, l, re, im in rows:
            grid[k + b, l + b] = re + 1j * im
        if np.isnan(grid).any():
            raise ValueError("coefficient file does not cover the full harmonic grid")
        return cls(b=b, coeffs=grid)


def generate_random_field(b: int, rng: np.random.Generator) -> BandlimitedField:
    """Random field with standard-normal real and imaginary coefficient parts.

    The half grid with (k, l) lexicographically above (0, 0) is drawn
    independently and mirrored by conjugation; a[0, 0] keeps only its real
    part. No magnitude decay is applied across harmonics: conditioning
    studies depend on sample locations only, and the flat profile keeps
    every harmonic equally weighted in recovery-error metrics.
    """
    if b < 0:
        raise ValueError("bandwidth b must be >= 0")
    size = 2 * b + 1
    draw = rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
    k = np.arange(-b, b + 1)
    kk, ll = np.meshgrid(k, k, indexing="ij")
    mirror = (kk < 0) | ((kk == 0) & (ll < 0))
    coeffs = draw.copy()
    coeffs[b, b] = draw[b, b].real
    coeffs[mirror] = coeffs[::-1, ::-1].conj()[mirror]
    return BandlimitedField(b=b, coeffs=coeffs)
