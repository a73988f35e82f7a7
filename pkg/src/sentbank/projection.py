"""Logarithmic trend fitting for repetition percentage vs corpus volume.

The model is y = a*ln(x) + b, fitted by ordinary least squares on
(ln x, y); this is exactly what spreadsheet "logarithmic trend line"
features compute, which keeps published fits reproducible. The inverse,
x = exp((y - b)/a), projects the text volume required to reach a target
repetition percentage; projected volumes overflow doubles long before
they stop being interesting, so they are reported as mantissa/exponent.

Extrapolation beyond the fitted x range is flagged: a logarithmic curve's
distant projections swing wildly with tiny coefficient changes.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DegenerateFitError, NonInvertibleTrendError, ValidationFailedError
from .metrics import compute_metrics
from .store.base import SentenceStore

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrendPoint:
    text_characters: float
    repetition_pct: float

    def __post_init__(self):
        if self.text_characters <= 0:
            raise ValidationFailedError(
                f"text_characters must be positive, got {self.text_characters}"
            )


@dataclass(frozen=True)
class LogTrend:
    a: float
    b: float
    r2: float
    point_count: int
    x_min: float
    x_max: float

    def contains(self, x: float) -> bool:
        return self.x_min <= x <= self.x_max


@dataclass(frozen=True)
class VolumeEstimate:
    """Required text volume as mantissa * 10^exponent characters."""

    mantissa: float
    exponent: int
    extrapolated: bool

    @property
    def value(self) -> float | None:
        """Float value when it fits a double, else None."""
        if self.exponent > 300:
            return None
        return self.mantissa * 10.0**self.exponent

    @property
    def decimal_string(self) -> str:
        return f"{self.mantissa:.2f}E+{self.exponent}"


def fit_log_trend(points: Sequence[TrendPoint]) -> LogTrend:
    """Least squares of y on ln(x): a, b minimize the squared residuals and
    r2 = 1 - SS_res/SS_tot."""
    if len(points) < 2:
        raise DegenerateFitError(f"need at least 2 points, got {len(points)}")
    u = [math.log(p.text_characters) for p in points]
    y = [p.repetition_pct for p in points]
    n = len(points)
    u_mean = sum(u) / n
    y_mean = sum(y) / n
    s_uu = sum((ui - u_mean) ** 2 for ui in u)
    if s_uu == 0.0:
        raise DegenerateFitError("all x values are equal; no trend can be fitted")
    s_uy = sum((ui - u_mean) * (yi - y_mean) for ui, yi in zip(u, y))
    a = s_uy / s_uu
    b = y_mean - a * u_mean
    ss_res = sum((yi - (a * ui + b)) ** 2 for ui, yi in zip(u, y))
    ss_tot = sum((yi - y_mean) ** 2 for yi in y)
    if ss_tot == 0.0:
        r2 = 1.0 if ss_res < 1e-12 else 0.0
    else:
        r2 = 1.0 - ss_res / ss_tot
    r2 = min(1.0, max(0.0, r2))
    return LogTrend(
        a=a,
        b=b,
        r2=r2,
        point_count=n,
        x_min=min(p.text_characters for p in points),
        x_max=max(p.text_characters for p in points),
    )


def predict(trend: LogTrend, text_characters: float) -> float:
    """Repetition percentage the trend expects at a given volume."""
    if text_characters <= 0:
        raise ValidationFailedError("text_characters must be positive")
    return trend.a * math.log(text_characters) + trend.b


def required_volume(trend: LogTrend, target_pct: float) -> VolumeEstimate:
    """Characters needed to reach *target_pct*, by inverting the trend."""
    if trend.a <= 0:
        raise NonInvertibleTrendError(
            f"trend slope {trend.a:.6g} is not positive; cannot invert"
        )
    ln_x = (target_pct - trend.b) / trend.a
    log10_x = ln_x / math.log(10)
    exponent = math.floor(log10_x)
    mantissa = 10.0 ** (log10_x - exponent)
    # Guard against mantissa rounding to 10.0 at the exponent boundary.
    if mantissa >= 10.0:
        mantissa /= 10.0
        exponent += 1
    x_float = math.exp(ln_x) if ln_x < 700 else float("inf")
    return VolumeEstimate(
        mantissa=mantissa,
        exponent=exponent,
        extrapolated=not (x_float != float("inf") and trend.contains(x_float)),
    )


def snapshot_series(
    store: SentenceStore,
    scope_plan: Sequence[Iterable[int]],
    valid_only: bool = False,
    rule_set=None,
) -> list[TrendPoint]:
    """One trend point per cumulative group of the plan.

    The plan lists ordered groups of document ids; group i contributes the
    metrics of groups 1..i combined (cumulative construction). Groups that
    add nothing, or whose metrics have no distinct sentences, are skipped
    with a warning.
    """
    points: list[TrendPoint] = []
    cumulative: set[int] = set()
    for index, group in enumerate(scope_plan):
        added = set(group) - cumulative
        if not added:
            logger.warning("snapshot group %d adds no documents; skipped", index)
            continue
        cumulative |= added
        metrics = compute_metrics(
            store, sorted(cumulative), valid_only=valid_only, rule_set=rule_set
        )
        if metrics.with_repetitions_pct is None:
            logger.warning(
                "snapshot group %d has no distinct sentences; skipped", index
            )
            continue
        points.append(
            TrendPoint(
                text_characters=float(metrics.text_characters),
                repetition_pct=metrics.with_repetitions_pct,
            )
        )
    return points


def read_points_file(path) -> list[TrendPoint]:
    """Trend points from a delimited text file: x<TAB>y per line (spaces
    also accepted), ``#`` comments."""
    points = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            parts = body.replace("\t", " ").split()
            if len(parts) != 2:
                raise ValidationFailedError(
                    f"{path}:{lineno}: expected 'x y', got {body!r}"
                )
            points.append(
                TrendPoint(
                    text_characters=float(parts[0].replace(",", "")),
                    repetition_pct=float(parts[1].rstrip("%")),
                )
            )
    return points


# -- comparative diagnostics ---------------------------------------------------

@dataclass(frozen=True)
class FitDiagnostic:
    family: str
    r2: float
    coefficients: tuple[float, ...]


def _r2(y: Sequence[float], predicted: Sequence[float]) -> float:
    y_mean = sum(y) / len(y)
    ss_tot = sum((yi - y_mean) ** 2 for yi in y)
    ss_res = sum((yi - pi) ** 2 for yi, pi in zip(y, predicted))
    if ss_tot == 0.0:
        return 1.0 if ss_res < 1e-12 else 0.0
    return 1.0 - ss_res / ss_tot


def _ols(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    n = len(x)
    x_mean = sum(x) / n
    y_mean = sum(y) / n
    s_xx = sum((xi - x_mean) ** 2 for xi in x)
    if s_xx == 0.0:
        raise DegenerateFitError("no spread in x")
    slope = sum((xi - x_mean) * (yi - y_mean) for xi, yi in zip(x, y)) / s_xx
    return slope, y_mean - slope * x_mean


def _quadratic(x: Sequence[float], y: Sequence[float]) -> tuple[float, float, float]:
    # Normal equations for y = c2 x^2 + c1 x + c0, solved by elimination.
    n = len(x)
    s = [sum(xi**k for xi in x) for k in range(5)]
    t = [sum(yi * xi**k for xi, yi in zip(x, y)) for k in range(3)]
    m = [
        [s[4], s[3], s[2], t[2]],
        [s[3], s[2], s[1], t[1]],
        [s[2], s[1], float(n), t[0]],
    ]
    for col in range(3):
        pivot = max(range(col, 3), key=lambda r: abs(m[r][col]))
        if abs(m[pivot][col]) < 1e-300:
            raise DegenerateFitError("singular quadratic system")
        m[col], m[pivot] = m[pivot], m[col]
        for row in range(3):
            if row != col:
                factor = m[row][col] / m[col][col]
                m[row] = [a - factor * b for a, b in zip(m[row], m[col])]
    return tuple(m[i][3] / m[i][i] for i in range(3))  # type: ignore[return-value]


def compare_fits(points: Sequence[TrendPoint]) -> list[FitDiagnostic]:
    """R-squared of alternative curve families on the same points, best
    first. Diagnostics only: the projection machinery always uses the
    logarithmic model."""
    if len(points) < 3:
        raise DegenerateFitError("need at least 3 points to compare families")
    x = [p.text_characters for p in points]
    y = [p.repetition_pct for p in points]
    results = []

    log_trend = fit_log_trend(points)
    results.append(
        FitDiagnostic("logarithmic", log_trend.r2, (log_trend.a, log_trend.b))
    )

    slope, intercept = _ols(x, y)
    results.append(
        FitDiagnostic(
            "linear", _r2(y, [slope * xi + intercept for xi in x]), (slope, intercept)
        )
    )

    if all(yi > 0 for yi in y):
        k, ln_a = _ols(x, [math.log(yi) for yi in y])
        predicted = [math.exp(ln_a) * math.exp(k * xi) for xi in x]
        results.append(
            FitDiagnostic("exponential", _r2(y, predicted), (math.exp(ln_a), k))
        )

    if len(points) >= 4:
        c2, c1, c0 = _quadratic(x, y)
        predicted = [c2 * xi**2 + c1 * xi + c0 for xi in x]
        results.append(FitDiagnostic("quadratic", _r2(y, predicted), (c2, c1, c0)))

    return sorted(results, key=lambda d: d.r2, reverse=True)


DEFAULT_PROJECTION_TARGETS = (5.0, 25.0, 50.0, 75.0, 100.0)


def projection_table(
    trend: LogTrend, targets: Sequence[float] = DEFAULT_PROJECTION_TARGETS
) -> list[tuple[float, VolumeEstimate]]:
    """Required volume per target percentage (the projection-table shape)."""
    return [(pct, required_volume(trend, pct)) for pct in targets]


def render_projection_table(rows: list[tuple[float, VolumeEstimate]]) -> str:
    header = "  ".join(f"{pct:>10.2f}%" for pct, _ in rows)
    values = "  ".join(f"{e.decimal_string:>11}" for _, e in rows)
    flags = "  ".join(
        f"{'extrapolated' if e.extrapolated else 'in range':>11}" for _, e in rows
    )
    return "\n".join(
        ["%d.sentences with repetitions  " + header.strip(),
         "#text characters               " + values.strip(),
         "                               " + flags.strip()]
    )


# -- presentation ----------------------------------------------------------------

def trend_to_dict(trend: LogTrend) -> dict:
    return {
        "a": trend.a,
        "b": trend.b,
        "r2": trend.r2,
        "pointCount": trend.point_count,
        "xMin": trend.x_min,
        "xMax": trend.x_max,
    }


def estimate_to_dict(estimate: VolumeEstimate) -> dict:
    return {
        "mantissa": estimate.mantissa,
        "exponent": estimate.exponent,
        "decimalString": estimate.decimal_string,
        "extrapolated": estimate.extrapolated,
    }
