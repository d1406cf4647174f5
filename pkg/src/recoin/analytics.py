"""Statistics over collected self-reports.

Implements the apparatus used to analyze the experiment: Spearman rank
correlation (mid-ranks for ties), Cronbach's alpha, Kruskal-Wallis with tie
correction, a one-way ANOVA F for the numerical relevance measure, and
per-condition median summaries. p-values come either from the usual
large-sample approximations or from seeded permutation tests.

Statistics are computed in-module; scipy is used only for distribution tail
probabilities.
"""

from __future__ import annotations

import csv
import io
import json
import math
import statistics
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import stats as _scipy_stats

from .errors import DegenerateDataError, ValidationError
from .recommender import GRADE_ORDER
from .session import CSV_COLUMNS, MEASURE_NAMES

METHOD_APPROX = "large-sample approximation"
METHOD_PERMUTATION = "permutation"

DEFAULT_PERMUTATIONS = 10_000
DEFAULT_SEED = 42

CONDITION_ORDER = ("BASELINE", "C1", "C2", "C3", "C4")


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float | None
    method: str | None


@dataclass
class RatingsMatrix:
    """Sessions x the four Likert measures, each row tagged by condition."""

    conditions: list[str]
    values: np.ndarray  # shape (n, 4), columns follow MEASURE_NAMES

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2 or self.values.shape[1] != len(MEASURE_NAMES):
            raise ValidationError(f"ratings matrix needs {len(MEASURE_NAMES)} columns")
        if len(self.conditions) != self.values.shape[0]:
            raise ValidationError("one condition tag per row required")
        if np.isnan(self.values).any():
            raise ValidationError("missing cells are not admitted")
        comp = self.values[:, 0]
        if ((comp < 1) | (comp > 5)).any():
            raise ValidationError("comprehension ratings must be in 1..5")
        rest = self.values[:, 1:]
        if ((rest < 1) | (rest > 7)).any():
            raise ValidationError("fairness/accuracy/trust ratings must be in 1..7")


def midranks(values: Sequence[float]) -> list[float]:
    """Ranks 1..n with ties assigned the mean of their positions."""
    n = len(values)
    order = sorted(range(n), key=lambda i: values[i])
    ranks = [0.0] * n
    i = 0
    while i < n:
        j = i
        while j + 1 < n and values[order[j + 1]] == values[order[i]]:
            j += 1
        average = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = average
        i = j + 1
    return ranks


def _pearson(x: Sequence[float], y: Sequence[float]) -> float:
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    cov = sum((a - mx) * (b - my) for a, b in zip(x, y))
    vx = sum((a - mx) ** 2 for a in x)
    vy = sum((b - my) ** 2 for b in y)
    if vx == 0 or vy == 0:
        raise DegenerateDataError("zero rank variance, correlation undefined")
    return cov / math.sqrt(vx * vy)


def spearman(x: Sequence[float], y: Sequence[float],
             p_method: str = METHOD_APPROX,
             permutations: int = DEFAULT_PERMUTATIONS,
             seed: int = DEFAULT_SEED) -> TestResult:
    """Spearman's rho as the Pearson correlation of mid-ranks."""
    if len(x) != len(y):
        raise ValidationError("x and y must have equal length")
    if len(x) < 3:
        raise ValidationError("need at least 3 paired observations")
    rx = midranks(x)
    ry = midranks(y)
    rho = _pearson(rx, ry)

    if p_method == METHOD_APPROX:
        n = len(x)
        if abs(rho) >= 1.0:
            p = 0.0
        else:
            t = rho * math.sqrt((n - 2) / (1 - rho * rho))
            p = 2 * float(_scipy_stats.t.sf(abs(t), n - 2))
        return TestResult(rho, min(p, 1.0), METHOD_APPROX)
    if p_method == METHOD_PERMUTATION:
        rng = np.random.default_rng(seed)
        ry_arr = np.asarray(ry)
        hits = 0
        for _ in range(permutations):
            perm = rng.permutation(ry_arr)
            if abs(_pearson(rx, perm.tolist())) >= abs(rho) - 1e-12:
                hits += 1
        return TestResult(rho, (hits + 1) / (permutations + 1), METHOD_PERMUTATION)
    raise ValidationError(f"unknown p_method {p_method!r}")


def cronbach_alpha(matrix: RatingsMatrix | Sequence[Sequence[float]]) -> float:
    """Internal-consistency alpha over columns-as-items, rows-as-respondents."""
    if isinstance(matrix, RatingsMatrix):
        arr = matrix.values
    else:
        arr = np.asarray(matrix, dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 2 or arr.shape[1] < 2:
        raise ValidationError("need at least 2 rows and 2 columns")
    k = arr.shape[1]
    item_variances = arr.var(axis=0, ddof=1)
    total_variance = arr.sum(axis=1).var(ddof=1)
    if total_variance == 0:
        raise DegenerateDataError("zero total-score variance, alpha undefined")
    return k / (k - 1) * (1 - item_variances.sum() / total_variance)


def kruskal_wallis(groups: Sequence[Sequence[float]],
                   p_method: str = METHOD_APPROX,
                   permutations: int = DEFAULT_PERMUTATIONS,
                   seed: int = DEFAULT_SEED) -> TestResult:
    """H over mid-ranked pooled values, divided by the tie correction."""
    if len(groups) < 2:
        raise ValidationError("need at least 2 groups")
    if any(len(g) == 0 for g in groups):
        raise ValidationError("groups must be non-empty")
    pooled = [v for g in groups for v in g]
    if all(v == pooled[0] for v in pooled):
        raise DegenerateDataError("all values identical, tie correction degenerate")

    sizes = [len(g) for g in groups]
    h = _kw_statistic(pooled, sizes)

    if p_method == METHOD_APPROX:
        p = float(_scipy_stats.chi2.sf(h, len(groups) - 1))
        return TestResult(h, p, METHOD_APPROX)
    if p_method == METHOD_PERMUTATION:
        rng = np.random.default_rng(seed)
        pooled_arr = np.asarray(pooled, dtype=float)
        hits = 0
        for _ in range(permutations):
            if _kw_statistic(rng.permutation(pooled_arr).tolist(), sizes) >= h - 1e-12:
                hits += 1
        return TestResult(h, (hits + 1) / (permutations + 1), METHOD_PERMUTATION)
    raise ValidationError(f"unknown p_method {p_method!r}")


def _kw_statistic(pooled: list[float], sizes: list[int]) -> float:
    n = len(pooled)
    ranks = midranks(pooled)
    h = 0.0
    start = 0
    for size in sizes:
        rank_sum = sum(ranks[start:start + size])
        h += rank_sum * rank_sum / size
        start += size
    h = 12 / (n * (n + 1)) * h - 3 * (n + 1)

    tie_sum = 0
    for count in _tie_counts(pooled):
        tie_sum += count ** 3 - count
    correction = 1 - tie_sum / (n ** 3 - n)
    return h / correction


def _tie_counts(values: list[float]) -> list[int]:
    counts: dict[float, int] = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    return [c for c in counts.values() if c > 1]


def anova_f(groups: Sequence[Sequence[float]],
            p_method: str | None = None,
            permutations: int = DEFAULT_PERMUTATIONS,
            seed: int = DEFAULT_SEED) -> TestResult:
    """One-way fixed-effects F; p optional (permutation only)."""
    if len(groups) < 2:
        raise ValidationError("need at least 2 groups")
    if any(len(g) == 0 for g in groups):
        raise ValidationError("groups must be non-empty")
    sizes = [len(g) for g in groups]
    pooled = [v for g in groups for v in g]
    if len(pooled) <= len(groups):
        raise ValidationError("need more observations than groups")
    f = _anova_statistic(pooled, sizes)
    if p_method is None:
        return TestResult(f, None, None)
    if p_method == METHOD_PERMUTATION:
        rng = np.random.default_rng(seed)
        pooled_arr = np.asarray(pooled, dtype=float)
        hits = 0
        for _ in range(permutations):
            if _anova_statistic(rng.permutation(pooled_arr).tolist(), sizes) >= f - 1e-12:
                hits += 1
        return TestResult(f, (hits + 1) / (permutations + 1), METHOD_PERMUTATION)
    raise ValidationError(f"unknown p_method {p_method!r}")


def _anova_statistic(pooled: list[float], sizes: list[int]) -> float:
    n = len(pooled)
    grand = sum(pooled) / n
    between = 0.0
    within = 0.0
    start = 0
    for size in sizes:
        group = pooled[start:start + size]
        mean = sum(group) / size
        between += size * (mean - grand) ** 2
        within += sum((v - mean) ** 2 for v in group)
        start += size
    df_between = len(sizes) - 1
    df_within = n - len(sizes)
    if within == 0:
        raise DegenerateDataError("zero within-group variance, F undefined")
    return (between / df_between) / (within / df_within)


# --- session-log summaries ------------------------------------------------

@dataclass(frozen=True)
class SessionRow:
    condition: str
    grade: str
    relevance: float
    usage: int
    comprehension: int
    fairness: int
    accuracy: int
    trust: int


def read_session_csv(source: str | io.TextIOBase) -> list[SessionRow]:
    """Parse the session CSV export into rows; validates the header."""
    if isinstance(source, str):
        fh: io.TextIOBase = io.StringIO(source)
    else:
        fh = source
    reader = csv.DictReader(fh)
    if reader.fieldnames is None or tuple(reader.fieldnames) != CSV_COLUMNS:
        raise ValidationError(
            f"expected columns {','.join(CSV_COLUMNS)}, got {reader.fieldnames}")
    rows = []
    for line_no, record in enumerate(reader, start=2):
        if record["grade"] not in GRADE_ORDER:
            raise ValidationError(
                f"line {line_no}: unknown grade {record['grade']!r}")
        try:
            rows.append(SessionRow(
                condition=record["condition"],
                grade=record["grade"],
                relevance=float(record["relevance"]),
                usage=int(record["usage"]),
                comprehension=int(record["comprehension"]),
                fairness=int(record["fairness"]),
                accuracy=int(record["accuracy"]),
                trust=int(record["trust"]),
            ))
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"line {line_no}: {exc}") from exc
    return rows


@dataclass(frozen=True)
class ConditionMedians:
    condition: str
    n: int
    grade: str
    relevance: float
    comprehension: int
    fairness: int
    accuracy: int
    trust: int


def condition_summary(rows: Sequence[SessionRow]) -> list[ConditionMedians]:
    """Per-condition medians; ordinal columns use the lower median.

    Grades are ordered by their band midpoints (F < D < C < B < A) before the
    median is taken. Conditions with no rows are omitted; known conditions
    come first in their canonical order.
    """
    if not rows:
        raise ValidationError("log is empty")
    by_condition: dict[str, list[SessionRow]] = {}
    for row in rows:
        by_condition.setdefault(row.condition, []).append(row)

    ordered = [c for c in CONDITION_ORDER if c in by_condition]
    ordered += sorted(c for c in by_condition if c not in CONDITION_ORDER)

    summaries = []
    for condition in ordered:
        group = by_condition[condition]
        grades = sorted((r.grade for r in group), key=lambda g: GRADE_ORDER[g])
        summaries.append(ConditionMedians(
            condition=condition,
            n=len(group),
            grade=grades[(len(grades) - 1) // 2],  # lower median in band order
            relevance=statistics.median(r.relevance for r in group),
            comprehension=statistics.median_low(sorted(r.comprehension for r in group)),
            fairness=statistics.median_low(sorted(r.fairness for r in group)),
            accuracy=statistics.median_low(sorted(r.accuracy for r in group)),
            trust=statistics.median_low(sorted(r.trust for r in group)),
        ))
    return summaries


# --- full report ------------------------------------------------------------

@dataclass
class AnalysisReport:
    medians: list[ConditionMedians]
    alpha_overall: float | None
    alpha_by_condition: dict[str, float | None]
    tests_by_measure: dict[str, TestResult | None]
    relevance_anova: TestResult | None
    correlations: dict[tuple[str, str], TestResult]
    seed: int = DEFAULT_SEED

    def to_dict(self) -> dict:
        return {
            "medians": [vars(m) for m in self.medians],
            "cronbach_alpha": {
                "overall": self.alpha_overall,
                "by_condition": self.alpha_by_condition,
            },
            "kruskal_wallis": {
                name: None if t is None else vars(t)
                for name, t in self.tests_by_measure.items()
            },
            "relevance_anova": None if self.relevance_anova is None
            else vars(self.relevance_anova),
            "spearman": {
                f"{a}/{b}": vars(t) for (a, b), t in self.correlations.items()
            },
            "seed": self.seed,
        }

    def render(self) -> str:
        out = io.StringIO()
        out.write("condition medians\n")
        header = f"{'condition':<10} {'n':>3} {'grade':>5} {'relevance':>9} " \
                 f"{'comp':>4} {'fair':>4} {'acc':>4} {'trust':>5}\n"
        out.write(header)
        for m in self.medians:
            out.write(f"{m.condition:<10} {m.n:>3} {m.grade:>5} {m.relevance:>9.2f} "
                      f"{m.comprehension:>4} {m.fairness:>4} {m.accuracy:>4} {m.trust:>5}\n")
        out.write("\ncronbach's alpha\n")
        out.write(f"  overall: {_fmt(self.alpha_overall)}\n")
        for condition, alpha in self.alpha_by_condition.items():
            out.write(f"  {condition}: {_fmt(alpha)}\n")
        out.write("\nkruskal-wallis across conditions\n")
        for name, test in self.tests_by_measure.items():
            if test is None:
                out.write(f"  {name}: n/a\n")
            else:
                out.write(f"  {name}: H={test.statistic:.4f} p={_fmt(test.p_value)}\n")
        out.write("\nrelevance anova\n")
        if self.relevance_anova is None:
            out.write("  n/a\n")
        else:
            t = self.relevance_anova
            out.write(f"  F={t.statistic:.4f} p={_fmt(t.p_value)}\n")
        out.write("\nspearman correlations (all rows)\n")
        for (a, b), test in self.correlations.items():
            out.write(f"  {a}/{b}: rho={test.statistic:.4f} p={_fmt(test.p_value)}\n")
        return out.getvalue()


def _fmt(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.4f}"


def analyze(rows: Sequence[SessionRow], seed: int = DEFAULT_SEED,
            p_method: str = METHOD_APPROX,
            permutations: int = DEFAULT_PERMUTATIONS) -> AnalysisReport:
    """Run the whole battery over session rows; degenerate cells become None."""
    medians = condition_summary(rows)

    def ratings(selected: Sequence[SessionRow]) -> list[list[int]]:
        return [[r.comprehension, r.fairness, r.accuracy, r.trust] for r in selected]

    def safe_alpha(selected: Sequence[SessionRow]) -> float | None:
        try:
            return cronbach_alpha(ratings(selected))
        except (ValidationError, DegenerateDataError):
            return None

    alpha_overall = safe_alpha(rows)
    alpha_by_condition = {
        m.condition: safe_alpha([r for r in rows if r.condition == m.condition])
        for m in medians
    }

    conditions = [m.condition for m in medians]
    tests_by_measure: dict[str, TestResult | None] = {}
    for name in MEASURE_NAMES:
        groups = [[getattr(r, name) for r in rows if r.condition == c]
                  for c in conditions]
        try:
            tests_by_measure[name] = kruskal_wallis(
                groups, p_method=p_method, permutations=permutations, seed=seed)
        except (ValidationError, DegenerateDataError):
            tests_by_measure[name] = None

    relevance_groups = [[r.relevance for r in rows if r.condition == c]
                        for c in conditions]
    try:
        relevance_anova = anova_f(
            relevance_groups,
            p_method=METHOD_PERMUTATION if p_method == METHOD_PERMUTATION else None,
            permutations=permutations, seed=seed)
    except (ValidationError, DegenerateDataError):
        relevance_anova = None

    correlations: dict[tuple[str, str], TestResult] = {}
    for i, a in enumerate(MEASURE_NAMES):
        for b in MEASURE_NAMES[i + 1:]:
            xs = [getattr(r, a) for r in rows]
            ys = [getattr(r, b) for r in rows]
            try:
                correlations[(a, b)] = spearman(
                    xs, ys, p_method=p_method, permutations=permutations, seed=seed)
            except (ValidationError, DegenerateDataError):
                continue

    return AnalysisReport(medians, alpha_overall, alpha_by_condition,
                          tests_by_measure, relevance_anova, correlations, seed)


def render_csv(report: AnalysisReport) -> str:
    """Medians table as CSV, mirroring the text report's first section."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["condition", "n", "grade", "relevance",
                     "comprehension", "fairness", "accuracy", "trust"])
    for m in report.medians:
        writer.writerow([m.condition, m.n, m.grade, m.relevance,
                         m.comprehension, m.fairness, m.accuracy, m.trust])
    return buf.getvalue()


def to_json(report: AnalysisReport) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True)
