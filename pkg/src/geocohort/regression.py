"""Interaction OLS of adjusted topic mentions on post-period, cohort and their
product, with classical standard errors and a Table-2 style report."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy.linalg import solve_triangular

from .corpus import Month
from .errors import EmptySeries, RankDeficient, TooFewRows
from .topics import TopicSeries

TERMS = ("post_covid", "red_state", "interaction", "constant")
TERM_LABELS = {
    "post_covid": "Post-covid",
    "red_state": "> 0.5 Trump",
    "interaction": "Post-covid & > 0.5 Trump",
    "constant": "Constant",
}
STAR_LEVELS = ((0.001, "***"), (0.01, "**"), (0.05, "*"))
N_PARAMS = 4
MIN_ROWS = 5


@dataclass(frozen=True)
class DesignRow:
    month: Month
    y: float
    post_covid: int
    red_state: int

    @property
    def interaction(self) -> int:
        return self.post_covid * self.red_state

    def x(self) -> list[float]:
        return [float(self.post_covid), float(self.red_state), float(self.interaction), 1.0]


def build_design(series_red: TopicSeries, series_blue: TopicSeries,
                 covid_cutoff: Month = Month(2020, 3)) -> list[DesignRow]:
    """One row per (month, cohort) observation, red rows first."""
    if not series_red.points or not series_blue.points:
        raise EmptySeries(f"empty series for topic {series_red.topic!r}")
    rows = []
    for red, series in ((1, series_red), (0, series_blue)):
        for m in sorted(series.points):
            rows.append(DesignRow(Month(*m), float(series.points[m]), int(Month(*m) >= covid_cutoff), red))
    return rows


# --- t distribution -----------------------------------------------------

def _betacf(a: float, b: float, x: float, tol: float = 1e-15, max_iter: int = 10000) -> float:
    """Continued fraction for the incomplete beta function (modified Lentz)."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    d = tiny if abs(d) < tiny else d
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = tiny if abs(d) < tiny else d
        c = 1.0 + aa / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = tiny if abs(d) < tiny else d
        c = 1.0 + aa / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < tol:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def betainc_regularized(a: float, b: float, x: float, y: float | None = None) -> float:
    """I_x(a, b). ``y`` may pass 1 - x computed without cancellation."""
    y = 1.0 - x if y is None else y
    if x <= 0.0:
        return 0.0
    if y <= 0.0:
        return 1.0
    log_front = (a * math.log(x) + b * math.log(y)
                 + math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b))
    if x < (a + 1.0) / (a + b + 2.0):
        # fold the fraction into the exponent so deep tails keep precision
        return math.exp(log_front + math.log(_betacf(a, b, x) / a))
    return 1.0 - math.exp(log_front) * _betacf(b, a, y) / b


def t_two_sided_p(t: float, df: float) -> float:
    """P(|T| >= |t|) for Student's t with ``df`` degrees of freedom."""
    if math.isnan(t):
        return math.nan
    if math.isinf(t):
        return 0.0
    t2 = t * t
    x = df / (df + t2)
    y = t2 / (df + t2)
    return min(1.0, betainc_regularized(df / 2.0, 0.5, x, y))


def stars(p: float) -> str:
    if p is None or math.isnan(p):
        return ""
    for level, mark in STAR_LEVELS:
        if p < level:
            return mark
    return ""


# --- estimation -----------------------------------------------------------

@dataclass(frozen=True)
class OlsResult:
    coefficients: tuple[float, ...]  # ordered as TERMS
    standard_errors: tuple[float, ...]
    t_stats: tuple[float, ...]
    p_values: tuple[float, ...]
    stars: tuple[str, ...]
    rss: float
    n: int
    df: int

    def term(self, name: str) -> dict:
        i = TERMS.index(name)
        return {"coef": self.coefficients[i], "se": self.standard_errors[i], "t": self.t_stats[i],
                "p": self.p_values[i], "stars": self.stars[i]}


def ols(X, y) -> OlsResult:
    """Classical OLS via Householder QR; columns are reported in ``TERMS`` order
    when X has four columns, otherwise positionally."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n, k = X.shape
    if n < max(MIN_ROWS, k + 1):
        raise TooFewRows(f"need at least {max(MIN_ROWS, k + 1)} rows, got {n}")
    if np.linalg.matrix_rank(X) < k:
        raise RankDeficient("design matrix does not have full column rank")
    Q, R = np.linalg.qr(X, mode="reduced")
    beta = solve_triangular(R, Q.T @ y)
    resid = y - X @ beta
    rss = float(resid @ resid)
    df = n - k
    sigma2 = rss / df
    r_inv = solve_triangular(R, np.eye(k))
    se = np.sqrt(np.einsum("ij,ij->i", r_inv, r_inv) * sigma2)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = beta / se
    p = tuple(t_two_sided_p(float(v), df) for v in t)
    return OlsResult(tuple(map(float, beta)), tuple(map(float, se)), tuple(map(float, t)), p,
                     tuple(stars(v) for v in p), rss, n, df)


def _finish(beta, var_diag, rss: float, n: int) -> OlsResult:
    df = n - N_PARAMS
    se = [math.sqrt(v * rss / df) for v in var_diag]
    t = []
    for b, s in zip(beta, se):
        if s > 0:
            t.append(b / s)
        else:
            t.append(math.copysign(math.inf, b) if b != 0 else math.nan)
    p = tuple(t_two_sided_p(v, df) for v in t)
    return OlsResult(tuple(beta), tuple(se), tuple(t), p, tuple(stars(v) for v in p), rss, n, df)


def ols_fit(rows: Sequence[DesignRow]) -> OlsResult:
    """OLS for the post x cohort interaction design.

    The design is saturated (four cells, four parameters), so the least-squares
    fit reproduces the cell means and the solution is available in closed
    form; this keeps exact fits exact. ``(X'X)^-1`` has diagonal
    ``1/n00, 1/n00 + 1/n10, 1/n00 + 1/n01`` and the sum of all four reciprocals.
    """
    if len(rows) < MIN_ROWS:
        raise TooFewRows(f"need at least {MIN_ROWS} rows, got {len(rows)}")
    cells: dict[tuple[int, int], list[float]] = {(0, 0): [], (1, 0): [], (0, 1): [], (1, 1): []}
    for r in rows:
        cells[(r.post_covid, r.red_state)].append(float(r.y))
    if any(not ys for ys in cells.values()):
        raise RankDeficient("every (post-period, cohort) cell needs at least one row")
    mean = {k: math.fsum(ys) / len(ys) for k, ys in cells.items()}
    inv = {k: 1.0 / len(ys) for k, ys in cells.items()}
    rss = math.fsum((y - mean[k]) ** 2 for k, ys in cells.items() for y in ys)
    m00, m10, m01, m11 = mean[(0, 0)], mean[(1, 0)], mean[(0, 1)], mean[(1, 1)]
    beta = (m10 - m00, m01 - m00, (m11 - m01) - (m10 - m00), m00)
    var = (inv[(0, 0)] + inv[(1, 0)], inv[(0, 0)] + inv[(0, 1)], sum(inv.values()), inv[(0, 0)])
    return _finish(beta, var, rss, len(rows))


# --- reporting --------------------------------------------------------------

def format_number(x: float) -> str:
    """Four significant digits with at least one decimal; three below magnitude one."""
    if x is None or not math.isfinite(x):
        return "."
    ax = abs(x)
    if ax == 0:
        return "0"
    if ax >= 1:
        digits = int(math.floor(math.log10(ax))) + 1
        decimals = max(1, 4 - digits)
    else:
        decimals = 2 - int(math.floor(math.log10(ax)))
    s = f"{x:.{decimals}f}"
    return "0" if float(s) == 0 else s


def report_rows(results: Mapping[str, OlsResult]) -> list[dict]:
    out = []
    for topic, res in results.items():
        for term in TERMS:
            out.append({"topic": topic, "term": term, **res.term(term)})
    return out


def report_table(results: Mapping[str, OlsResult], label_width: int = 26,
                 col_width: int | None = None) -> str:
    """Plain-text table: one column per topic, coefficient rows with standard
    errors in parentheses beneath. Columns widen to fit the longest topic name."""
    topics = list(results)
    if col_width is None:
        col_width = max([16] + [len(t) + 2 for t in topics])
    rule = "=" * (label_width + col_width * len(topics))
    lines = [rule,
             " " * label_width + "".join(f"({i + 1})".center(col_width) for i in range(len(topics))),
             " " * label_width + "".join(t.center(col_width) for t in topics),
             "-" * len(rule)]
    for term in TERMS:
        i = TERMS.index(term)
        coef = "".join((format_number(results[t].coefficients[i]) + results[t].stars[i]).center(col_width)
                       for t in topics)
        se = "".join(f"({format_number(results[t].standard_errors[i])})".center(col_width)
                     for t in topics)
        lines.append(TERM_LABELS[term].ljust(label_width) + coef)
        lines.append(" " * label_width + se)
        lines.append("")
    if not topics:
        lines = lines[:3]
    lines[-1:] = [rule]
    lines.append("Standard errors in parentheses")
    lines.append("* p<0.05, ** p<0.01, *** p<0.001")
    return "\n".join(line.rstrip() for line in lines) + "\n"
