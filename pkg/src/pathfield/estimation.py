"""Least-squares field recovery and sensing-matrix conditioning.

The coefficient estimate is the least-squares solution of X a = g, i.e.
(X*X)^-1 X* g in exact arithmetic, computed here through an orthogonal
factorization for numerical stability. Conditioning is the singular-value
ratio sigma_max/sigma_min, evaluated from the eigenvalues of the n x n Gram
matrix X*X, which is cheaper than an SVD of the full m x n matrix.
"""

from dataclasses import dataclass

import numpy as np

from .field import BandlimitedField, fourier_sum
from .paths import SamplePath, SchemeConfig, POINT_SCHEMES
from .sensing import SensingMatrix

__all__ = [
    "Measurement",
    "EstimateReport",
    "SingularSystemError",
    "REPORT_HEADER",
    "measure",
    "estimate_coefficients",
    "condition_number",
    "reconstruct_and_score",
    "report_row",
]

# Gram eigenvalue ratio below this is reported as an infinite condition
# number; such draws are excluded from sweep averages.
SINGULAR_EIG_RATIO = 1e-14
# Relative singular-value cutoff for refusing a least-squares solve.
SINGULAR_SV_RATIO = 1e-10
# Side of the uniform grid used for field RMSE scoring.
SCORE_GRID = 64


class SingularSystemError(RuntimeError):
    """The sensing matrix is numerically rank deficient."""


@dataclass
class Measurement:
    """Real measurement vector: field samples or per-path averages."""

    values: np.ndarray
    noise_sigma: float = 0.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float).ravel()


@dataclass
class EstimateReport:
    """Recovered coefficient grid plus stability and error metrics."""

    coeff_estimate: np.ndarray
    condition_number: float
    coeff_rel_error: float
    field_rmse: float


def measure(field: BandlimitedField, paths: list[SamplePath],
            config: SchemeConfig, rng: np.random.Generator) -> Measurement:
    """Simulate sensor readings over the given paths.

    Point schemes yield one value per sample; averaging schemes add noise to
    every raw reading first and then average per path, which is what shrinks
    the noise variance by the per-path sample count.
    """
    sigma = config.noise_sigma
    if config.scheme in POINT_SCHEMES:
        pts = np.vstack([sp.points for sp in paths])
        values = field.evaluate(pts[:, 0], pts[:, 1])
        values = np.atleast_1d(np.asarray(values, dtype=float))
        if sigma > 0:
            values = values + rng.normal(0.0, sigma, size=values.shape)
        return Measurement(values=values, noise_sigma=sigma)

    values = np.empty(len(paths))
    for i, sp in enumerate(paths):
        readings = np.atleast_1d(field.evaluate(sp.points[:, 0], sp.points[:, 1]))
        if sigma > 0:
            readings = readings + rng.normal(0.0, sigma, size=readings.shape)
        values[i] = readings.mean()
    return Measurement(values=values, noise_sigma=sigma)


def _as_array(X) -> np.ndarray:
    if isinstance(X, SensingMatrix):
        return X.entries
    return np.asarray(X, dtype=complex)


def estimate_coefficients(X, g) -> np.ndarray:
    """Least-squares coefficient estimate for measurements g.

    Requires at least as many rows as columns and a numerically full-rank
    matrix; raises SingularSystemError when the smallest singular value
    drops below SINGULAR_SV_RATIO times the largest.
    """
    A = _as_array(X)
    values = g.values if isinstance(g, Measurement) else np.asarray(g)
    values = values.ravel()
    m, n = A.shape
    if m < n:
        raise ValueError(f"underdetermined system: {m} measurements for {n} coefficients")
    if len(values) != m:
        raise ValueError(f"got {len(values)} measurements for {m} matrix rows")
    solution, _, _, sv = np.linalg.lstsq(A, values.astype(complex), rcond=None)
    if sv[0] == 0.0 or sv[-1] < SINGULAR_SV_RATIO * sv[0]:
        raise SingularSystemError(
            f"sensing matrix is numerically singular (sv ratio {sv[-1] / sv[0]:.2e})"
            if sv[0] > 0 else "sensing matrix is zero"
        )
    return solution


def condition_number(X) -> float:
    """sigma_max/sigma_min of the matrix, from the Gram matrix eigenvalues.

    Returns inf when the smallest eigenvalue falls below SINGULAR_EIG_RATIO
    times the largest (numerically singular draw).
    """
    A = _as_array(X)
    if A.size == 0 or not np.any(A):
        raise ValueError("condition number of an empty or zero matrix")
    gram = A.conj().T @ A
    eigenvalues = np.linalg.eigvalsh(gram)
    lam_max = float(eigenvalues[-1])
    lam_min = float(eigenvalues[0])
    if lam_min <= 0.0 or lam_min < SINGULAR_EIG_RATIO * lam_max:
        return float("inf")
    return float(np.sqrt(lam_max / lam_min))


def reconstruct_and_score(field: BandlimitedField, X, g) -> EstimateReport:
    """Recover coefficients and score them against the true field."""
    estimate = estimate_coefficients(X, g)
    size = 2 * field.b + 1
    truth = field.vector()
    rel_error = float(np.linalg.norm(estimate - truth) / np.linalg.norm(truth))

    axis = np.arange(SCORE_GRID) / SCORE_GRID
    gx, gy = np.meshgrid(axis, axis, indexing="ij")
    true_values = field.evaluate(gx, gy)
    est_values = fourier_sum(estimate.reshape(size, size), gx, gy).real
    rmse = float(np.sqrt(np.mean((est_values - true_values) ** 2)))

    return EstimateReport(
        coeff_estimate=estimate.reshape(size, size),
        condition_number=condition_number(X),
        coeff_rel_error=rel_error,
        field_rmse=rmse,
    )


REPORT_HEADER = ["scheme", "b", "m", "gamma", "aware", "noise_sigma",
                 "cond", "rel_err", "rmse", "seed"]


def report_row(config: SchemeConfig, report: EstimateReport) -> list:
    """One CSV row pairing a reconstruction report with its trial parameters."""
    return [
        config.scheme.value, config.b, config.m, repr(float(config.gamma)),
        "true" if config.location_aware else "false",
        repr(float(config.noise_sigma)), repr(float(report.condition_number)),
        repr(float(report.coeff_rel_error)), repr(float(report.field_rmse)),
        config.seed,
    ]
