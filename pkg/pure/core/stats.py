"""Correlation between uncertainty and accuracy, with significance tests."""
import math
from typing import Sequence
from pure.exceptions import ConstantSeries, ConvergenceError, LengthMismatch, TooFewSamples
from pure.models.statistics import CorrelationResult

_MAX_ITERATIONS = 10_000
_EPSILON = 1e-15
_TINY = 1e-300


def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    # Modified Lentz evaluation of the incomplete beta continued fraction
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITERATIONS + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c

        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPSILON:
            return h
    raise ConvergenceError(f"incomplete beta did not converge for a={a}, b={b}, x={x}")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and 0 <= x <= 1.

    The continued fraction converges fast for x < (a + 1) / (a + b + 2);
    above that point the symmetry I_x(a, b) = 1 - I_{1-x}(b, a) is used.
    """
    if a <= 0 or b <= 0:
        raise ValueError("incomplete beta needs a > 0 and b > 0")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return x

    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(log_front) * _beta_continued_fraction(a, b, x) / a
    return 1.0 - math.exp(log_front) * _beta_continued_fraction(b, a, 1.0 - x) / b


def student_t_two_sided(t_stat: float, df: float) -> float:
    """P(|T| >= |t_stat|) for Student's t with ``df`` degrees of freedom."""
    if math.isinf(t_stat):
        return 0.0
    p = regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t_stat * t_stat))
    return min(1.0, max(0.0, p))


def _check_pairs(xs: Sequence[float], ys: Sequence[float]) -> int:
    if len(xs) != len(ys):
        raise LengthMismatch(f"series lengths differ: {len(xs)} vs {len(ys)}")
    if len(xs) < 3:
        raise TooFewSamples(f"correlation needs at least 3 pairs, got {len(xs)}")
    return len(xs)


def pearson(xs: Sequence[float], ys: Sequence[float]) -> CorrelationResult:
    """Pearson r with a two-sided Student-t p-value on n - 2 degrees of freedom."""
    n = _check_pairs(xs, ys)
    # Checked on raw values: deviations around an inexact mean are never exactly zero
    if min(xs) == max(xs) or min(ys) == max(ys):
        raise ConstantSeries("correlation is undefined for a constant series")
    mean_x = math.fsum(xs) / n
    mean_y = math.fsum(ys) / n
    dx = [x - mean_x for x in xs]
    dy = [y - mean_y for y in ys]
    sxx = math.fsum(d * d for d in dx)
    syy = math.fsum(d * d for d in dy)
    if sxx == 0.0 or syy == 0.0:
        raise ConstantSeries("correlation is undefined for a constant series")
    sxy = math.fsum(a * b for a, b in zip(dx, dy))

    r = max(-1.0, min(1.0, sxy / math.sqrt(sxx * syy)))
    df = n - 2
    if abs(r) == 1.0:
        p_value = 0.0
    else:
        t_stat = r * math.sqrt(df / (1.0 - r * r))
        p_value = student_t_two_sided(t_stat, df)
    return CorrelationResult(r=r, p_value=p_value, n=n, method="pearson")


def fractional_ranks(values: Sequence[float]) -> list[float]:
    """1-based ranks; tied values share the mean of their positions."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    start = 0
    while start < len(order):
        end = start
        while end + 1 < len(order) and values[order[end + 1]] == values[order[start]]:
            end += 1
        rank = (start + end) / 2 + 1
        for k in range(start, end + 1):
            ranks[order[k]] = rank
        start = end + 1
    return ranks


def spearman(xs: Sequence[float], ys: Sequence[float]) -> CorrelationResult:
    _check_pairs(xs, ys)
    result = pearson(fractional_ranks(xs), fractional_ranks(ys))
    return result.model_copy(update={"method": "spearman"})


def correlate(xs: Sequence[float], ys: Sequence[float], method: str = "pearson") -> CorrelationResult:
    if method == "pearson":
        return pearson(xs, ys)
    if method == "spearman":
        return spearman(xs, ys)
    raise ValueError(f"unknown correlation method '{method}'")
