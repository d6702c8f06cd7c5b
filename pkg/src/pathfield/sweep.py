"""Seeded Monte Carlo sweeps over schemes, sample counts, and step sizes.

Each sweep cell (scheme, b, m, gamma, awareness) runs a number of independent
trials: fresh random field, fresh paths, sensing matrix, condition number,
and optionally a least-squares reconstruction. Per-trial seeds are derived by
hashing the cell key, so results are independent of execution order and of
the other cells in the sweep.
"""

import csv
import hashlib
import io
import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np
from scipy.optimize import minimize_scalar

from .estimation import SingularSystemError, condition_number, measure, reconstruct_and_score
from .field import generate_random_field
from .paths import ConfigurationError, Scheme, SchemeConfig, UNAWARE_SCHEMES, generate_paths
from .sensing import build_matrix

__all__ = [
    "SweepSpec",
    "CellResult",
    "SweepResult",
    "TrendGroup",
    "TrendReport",
    "run_sweep",
    "trial_seed",
    "check_bound_trend",
    "rank_schemes",
]

RESULT_HEADER = ["scheme", "b", "m", "gamma", "aware",
                 "mean_cond", "std_cond", "mean_rel_err", "excluded"]


@dataclass
class SweepSpec:
    """Grid of sweep cells plus the shared trial parameters.

    m values are specified as multiples of n = (2b+1)^2, the field's
    degree-of-freedom count, so one grid spans several bandwidths; every
    multiple must be >= 1 to keep the least-squares system overdetermined.
    """

    schemes: list = field(default_factory=lambda: list(Scheme))
    b_values: list = field(default_factory=lambda: [3])
    m_multiples: list = field(default_factory=lambda: [1.5, 2.0, 4.0, 8.0])
    gamma_values: list = field(default_factory=lambda: [0.05])
    iterations: int = 50
    base_seed: int = 0
    noise_sigma: float = 0.0
    aware: list = field(default_factory=lambda: [True])
    p: int = 25
    reconstruct: bool = True

    def __post_init__(self):
        self.schemes = [s if isinstance(s, Scheme) else Scheme(s) for s in self.schemes]
        if not self.schemes:
            raise ConfigurationError("at least one scheme is required")
        if not self.b_values or any(b < 0 for b in self.b_values):
            raise ConfigurationError("b values must be >= 0")
        if not self.m_multiples or any(mult < 1.0 for mult in self.m_multiples):
            raise ConfigurationError("m multiples must be >= 1 (m >= n keeps the system solvable)")
        if not self.gamma_values or any(g <= 0 for g in self.gamma_values):
            raise ConfigurationError("gamma values must be > 0")
        if self.iterations < 1:
            raise ConfigurationError("iterations must be >= 1")
        if not self.aware:
            raise ConfigurationError("at least one awareness flag is required")
        if False in self.aware:
            unsupported = [s.value for s in self.schemes if s not in UNAWARE_SCHEMES]
            if unsupported:
                raise ConfigurationError(
                    f"location-unaware mode is undefined for schemes {unsupported}; "
                    "run them in a separate location-aware sweep"
                )

    @classmethod
    def from_file(cls, path) -> "SweepSpec":
        """Parse a plain-text spec: one `key = value` per line, `#` comments,
        comma-separated lists. Keys mirror the dataclass fields, with
        schemes/b/m_multiples/gamma/iterations/seed/noise_sigma/aware/p/reconstruct
        accepted as spellings."""
        text = open(path).read()
        return cls.from_text(text, source=str(path))

    @classmethod
    def from_text(cls, text: str, source: str = "<config>") -> "SweepSpec":
        aliases = {
            "schemes": "schemes", "scheme": "schemes",
            "b": "b_values", "b_values": "b_values",
            "m": "m_multiples", "m_multiples": "m_multiples",
            "gamma": "gamma_values", "gamma_values": "gamma_values",
            "iterations": "iterations", "iters": "iterations",
            "seed": "base_seed", "base_seed": "base_seed",
            "noise_sigma": "noise_sigma",
            "aware": "aware",
            "p": "p",
            "reconstruct": "reconstruct",
        }
        kwargs = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigurationError(f"{source} line {lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            key = key.strip().lower()
            value = value.strip()
            if key not in aliases:
                raise ConfigurationError(f"{source} line {lineno}: unknown key {key!r}")
            kwargs[aliases[key]] = _parse_value(aliases[key], value, source, lineno)
        return cls(**kwargs)


def _parse_value(field_name: str, value: str, source: str, lineno: int):
    items = [v.strip() for v in value.split(",") if v.strip()]
    try:
        if field_name == "schemes":
            if len(items) == 1 and items[0].lower() == "all":
                return list(Scheme)
            return [Scheme(v) for v in items]
        if field_name == "b_values":
            return [int(v) for v in items]
        if field_name in ("m_multiples", "gamma_values"):
            return [float(v) for v in items]
        if field_name in ("iterations", "base_seed", "p"):
            return int(value)
        if field_name == "noise_sigma":
            return float(value)
        if field_name == "aware":
            return [_parse_bool(v) for v in items]
        if field_name == "reconstruct":
            return _parse_bool(value)
    except (ValueError, KeyError) as exc:
        raise ConfigurationError(f"{source} line {lineno}: {exc}") from None
    raise ConfigurationError(f"{source} line {lineno}: unknown field {field_name}")


def _parse_bool(value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise ValueError(f"expected a boolean, got {value!r}")


@dataclass
class CellResult:
    """Aggregates for one (scheme, b, m, gamma, aware) cell."""

    scheme: Scheme
    b: int
    m: int
    gamma: float
    aware: bool
    mean_cond: float
    std_cond: float
    mean_rel_err: float
    excluded: int


@dataclass
class SweepResult:
    cells: list

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(self.to_csv_text())

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(RESULT_HEADER)
        for c in self.cells:
            writer.writerow([
                c.scheme.value, c.b, c.m, repr(float(c.gamma)),
                "true" if c.aware else "false",
                repr(float(c.mean_cond)), repr(float(c.std_cond)),
                repr(float(c.mean_rel_err)), c.excluded,
            ])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, path) -> "SweepResult":
        with open(path, newline="") as fh:
            return cls.from_csv_text(fh.read(), source=str(path))

    @classmethod
    def from_csv_text(cls, text: str, source: str = "<csv>") -> "SweepResult":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or rows[0] != RESULT_HEADER:
            raise ValueError(f"{source} line 1: expected header {','.join(RESULT_HEADER)}")
        if len(rows) == 1:
            raise ValueError(f"{source}: no result rows")
        cells = []
        for lineno, row in enumerate(rows[1:], start=2):
            if len(row) != len(RESULT_HEADER):
                raise ValueError(f"{source} line {lineno}: expected {len(RESULT_HEADER)} fields")
            try:
                cells.append(CellResult(
                    scheme=Scheme(row[0]), b=int(row[1]), m=int(row[2]),
                    gamma=float(row[3]), aware=_parse_bool(row[4]),
                    mean_cond=float(row[5]), std_cond=float(row[6]),
                    mean_rel_err=float(row[7]), excluded=int(row[8]),
                ))
            except ValueError as exc:
                raise ValueError(f"{source} line {lineno}: {exc}") from None
        return cls(cells=cells)


def trial_seed(base_seed: int, scheme: Scheme, b: int, m: int, gamma: float,
               aware: bool, iteration: int) -> int:
    """Stable per-trial seed derived from the cell key and iteration index."""
    key = f"{base_seed}|{scheme.value}|{b}|{m}|{gamma!r}|{aware}|{iteration}"
    digest = hashlib.sha256(key.encode()).digest()
    return int.from_bytes(digest[:8], "big")


def run_trial(config: SchemeConfig, reconstruct: bool = True):
    """One independent trial: returns (condition number, rel error or nan)."""
    rng = np.random.default_rng(config.seed)
    fld = generate_random_field(config.b, rng)
    paths = generate_paths(config, rng)
    X = build_matrix(paths, config)
    cond = condition_number(X)
    if not math.isfinite(cond):
        return cond, float("nan")
    if not reconstruct:
        return cond, float("nan")
    meas = measure(fld, paths, config, rng)
    try:
        report = reconstruct_and_score(fld, X, meas)
    except SingularSystemError:
        return float("inf"), float("nan")
    return cond, report.coeff_rel_error


def run_sweep(spec: SweepSpec, progress=None) -> SweepResult:
    """Run every cell of the spec; deterministic given spec.base_seed.

    Numerically singular draws are excluded from the averages and counted in
    the cell's `excluded` field; a cell whose draws were all singular reports
    nan means. `progress`, if given, is called with each finished CellResult.
    """
    cells = []
    for scheme, b, mult, gamma, aware in product(
            spec.schemes, spec.b_values, spec.m_multiples, spec.gamma_values, spec.aware):
        n = (2 * b + 1) ** 2
        m = int(round(mult * n))
        conds = []
        errors = []
        excluded = 0
        for iteration in range(spec.iterations):
            seed = trial_seed(spec.base_seed, scheme, b, m, gamma, aware, iteration)
            config = SchemeConfig(
                scheme=scheme, m=m, b=b, gamma=gamma, p=spec.p,
                noise_sigma=spec.noise_sigma, location_aware=aware, seed=seed,
            )
            cond, rel_err = run_trial(config, reconstruct=spec.reconstruct)
            if not math.isfinite(cond):
                excluded += 1
                continue
            conds.append(cond)
            if math.isfinite(rel_err):
                errors.append(rel_err)
        cell = CellResult(
            scheme=scheme, b=b, m=m, gamma=gamma, aware=aware,
            mean_cond=float(np.mean(conds)) if conds else float("nan"),
            std_cond=float(np.std(conds)) if conds else float("nan"),
            mean_rel_err=float(np.mean(errors)) if errors else float("nan"),
            excluded=excluded,
        )
        cells.append(cell)
        if progress is not None:
            progress(cell)
    return SweepResult(cells=cells)


@dataclass
class TrendGroup:
    """Condition-number trend along m for one (scheme, b, gamma, aware) row."""

    scheme: Scheme
    b: int
    gamma: float
    aware: bool
    m_values: list
    mean_conds: list
    std_conds: list
    monotone_ok: bool
    violations: list
    all_ge_one: bool
    fitted_h: float
    bound_curve: list


@dataclass
class TrendReport:
    groups: list

    @property
    def all_ok(self) -> bool:
        return all(g.monotone_ok and g.all_ge_one for g in self.groups)


def _fit_bound_constant(m_values, n, conds) -> tuple[float, list]:
    """Least-squares fit of H in (sqrt(m) + H sqrt(n)) / (sqrt(m) - H sqrt(n)).

    The fit is for plotting only; H must keep every denominator positive, so
    it is bounded by the smallest sqrt(m/n) in the group.
    """
    roots = np.sqrt(np.asarray(m_values, dtype=float))
    root_n = math.sqrt(n)
    conds = np.asarray(conds, dtype=float)
    h_max = roots.min() / root_n * (1.0 - 1e-9)

    def loss(h):
        bound = (roots + h * root_n) / (roots - h * root_n)
        return float(np.sum((bound - conds) ** 2))

    res = minimize_scalar(loss, bounds=(0.0, h_max), method="bounded")
    h = float(res.x)
    curve = ((roots + h * root_n) / (roots - h * root_n)).tolist()
    return h, curve


def check_bound_trend(result: SweepResult) -> TrendReport:
    """Empirical check that mean condition numbers do not grow with m.

    A step up is tolerated when it stays within one standard deviation of
    the previous cell. Groups with fewer than three m values are skipped.
    """
    groups = {}
    for cell in result.cells:
        groups.setdefault((cell.scheme, cell.b, cell.gamma, cell.aware), []).append(cell)
    report = []
    for (scheme, b, gamma, aware), cells in groups.items():
        cells = sorted(cells, key=lambda c: c.m)
        if len(cells) < 3:
            continue
        means = [c.mean_cond for c in cells]
        stds = [c.std_cond for c in cells]
        violations = [
            i for i in range(len(cells) - 1)
            if math.isfinite(means[i]) and math.isfinite(means[i + 1])
            and means[i + 1] > means[i] + stds[i]
        ]
        finite = [v for v in means if math.isfinite(v)]
        n = (2 * b + 1) ** 2
        fitted_h, curve = _fit_bound_constant([c.m for c in cells], n, means) \
            if len(finite) == len(means) else (float("nan"), [float("nan")] * len(means))
        report.append(TrendGroup(
            scheme=scheme, b=b, gamma=gamma, aware=aware,
            m_values=[c.m for c in cells], mean_conds=means, std_conds=stds,
            monotone_ok=not violations, violations=violations,
            all_ge_one=all(v >= 1.0 for v in finite),
            fitted_h=fitted_h, bound_curve=curve,
        ))
    return TrendReport(groups=report)


def rank_schemes(result: SweepResult, m: int, gamma: float,
                 b: int | None = None, aware: bool = True) -> list:
    """Schemes sorted by mean condition number at one (m, gamma) cell.

    Requires all eight schemes to have that cell in the result; raises
    ValueError when one is missing or ambiguous.
    """
    ranking = []
    for scheme in Scheme:
        matches = [
            c for c in result.cells
            if c.scheme is scheme and c.m == m and c.gamma == gamma
            and c.aware == aware and (b is None or c.b == b)
        ]
        if not matches:
            raise ValueError(
                f"no cell for scheme={scheme.value}, m={m}, gamma={gamma}, aware={aware}"
            )
        if len(matches) > 1:
            raise ValueError(
                f"ambiguous cell for scheme={scheme.value}; pass b= to disambiguate"
            )
        ranking.append((scheme, matches[0].mean_cond))
    ranking.sort(key=lambda pair: pair[1])
    return ranking
