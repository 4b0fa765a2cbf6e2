"""Number-theory side: divisor tables, log-convolutions, truncated Dirichlet
series with tail bounds, the Euler-product arithmetic factor, and the
conjectured sigma -> 1/2 asymptotics of derivative moments.

Every truncated quantity is returned together with an explicit tail estimate;
the sigma -> 1/2 regime is exactly where truncation bites.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .specfun import hyp1f1, zeta_real

_INNER_SUM_EPS = 1e-16


@dataclass(frozen=True)
class DirichletTable:
    """Values f(1..n_max) of an arithmetic function (index 0 unused)."""

    n_max: int
    values: np.ndarray
    label: str

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.n_max + 1,):
            raise ValueError("values must have length n_max + 1 (index 0 unused)")
        object.__setattr__(self, "values", values)

    def __getitem__(self, n: int) -> float:
        if not 1 <= n <= self.n_max:
            raise IndexError(f"n = {n} outside 1..{self.n_max}")
        return float(self.values[n])

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["n", "value"])
            for n in range(1, self.n_max + 1):
                writer.writerow([n, repr(float(self.values[n]))])


def dirichlet_convolve(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """(f*g)(n) = sum over d | n of f(d) g(n/d), for all n <= n_max at once.

    Runs the divisor-pair sieve over a <= sqrt(n_max) with the symmetric
    split, so the Python-level loop is only O(sqrt(n_max)).
    """
    n_max = len(f) - 1
    if len(g) != len(f):
        raise ValueError("tables must have equal length")
    out = np.zeros(n_max + 1)
    for a in range(1, math.isqrt(n_max) + 1):
        out[a * a] += f[a] * g[a]
        start = a * (a + 1)
        if start > n_max:
            continue
        b_hi = n_max // a
        out[start :: a][: b_hi - a] += f[a] * g[a + 1 : b_hi + 1] + g[a] * f[a + 1 : b_hi + 1]
    return out


def divisor_table(s: int, n_max: int) -> DirichletTable:
    """The s-fold divisor function d_s(1..n_max) by repeated sieve convolution."""
    if s < 1 or n_max < 1:
        raise ValueError("requires s >= 1 and n_max >= 1")
    ones = np.ones(n_max + 1)
    ones[0] = 0.0
    values = ones.copy()
    for _ in range(s - 1):
        values = dirichlet_convolve(values, ones)
    return DirichletTable(n_max, values, label=f"d_{s}")


def log_convolution_table(s: int, n_max: int) -> DirichletTable:
    """The s-fold Dirichlet self-convolution of log(n)."""
    if s < 1 or n_max < 1:
        raise ValueError("requires s >= 1 and n_max >= 1")
    logs = np.zeros(n_max + 1)
    logs[1:] = np.log(np.arange(1, n_max + 1, dtype=float))
    values = logs.copy()
    for _ in range(s - 1):
        values = dirichlet_convolve(values, logs)
    return DirichletTable(n_max, values, label=f"log*^{s}")


@dataclass(frozen=True)
class SeriesResult:
    """A truncated series value with explicit information about the omitted tail.

    tail_bound is the conservative majorant (divisor-growth comparison);
    tail_estimate extrapolates the empirical term density near n_max and is
    much sharper close to sigma = 1/2, where the bound becomes uninformative.
    """

    value: float
    tail_bound: float
    n_max: int
    tail_estimate: float | None = None

    def within(self, other: float, extra: float = 0.0) -> bool:
        return abs(self.value - other) <= self.tail_bound + extra


def _upper_gamma_int(m: int, y: float) -> float:
    """Upper incomplete gamma at integer order: Gamma(m, y) for m >= 1."""
    total = 0.0
    term = 1.0
    for k in range(m):
        if k:
            term *= y / k
        total += term
    return math.factorial(m - 1) * math.exp(-y) * total


def _log_power_tail(a: int, beta: float, x: float) -> float:
    """Integral over (x, inf) of (log t)^a t^(-beta) dt, for beta > 1."""
    y = (beta - 1) * math.log(x)
    return _upper_gamma_int(a + 1, y) / (beta - 1) ** (a + 1)


def _divisor_growth_constant(table: DirichletTable, delta: float) -> float:
    """Empirical C with d_s(n) <= C n^delta on the computed range (x2 safety).

    This is an engineering estimate, not a theorem: the maximizers are sparse
    highly-composite integers, and doubling the observed constant covers the
    range just beyond n_max where the tail integral matters.
    """
    n = np.arange(1, table.n_max + 1, dtype=float)
    return 2.0 * float(np.max(table.values[1:] / n**delta))


def _log_power_antiderivative(k: int, t: float) -> float:
    """Integral of (log x)^k dx from 1 to t, by the parts recursion."""
    value = t
    for j in range(1, k + 1):
        value = t * math.log(t) ** j - j * value
    return value


def _density_tail_estimate(squares: np.ndarray, log_degree: int, sigma: float) -> float:
    """Extrapolated tail of sum f(n)^2 / n^(2 sigma) beyond the table.

    Fits the local density of f(n)^2 on the top half of the range against the
    (log x)^log_degree growth shape and integrates it past n_max.
    """
    n_max = len(squares)
    window = n_max // 2
    window_sum = float(np.sum(squares[window:]))
    denominator = _log_power_antiderivative(log_degree, n_max) - _log_power_antiderivative(
        log_degree, window + 1
    )
    density = window_sum / denominator
    return density * _log_power_tail(log_degree, 2 * sigma, n_max)


def deriv_moment_series(s: int, sigma: float, n_max: int) -> SeriesResult:
    """Truncated sum of ((log * ... * log)(n))^2 / n^(2 sigma), s-fold.

    The tail estimate uses (log*...*log)(n) <= d_s(n) (log n)^s and an
    empirical power bound on d_s (exact C = 1 when s = 1).
    """
    if sigma <= 0.5:
        raise ValueError("requires sigma > 1/2")
    table = log_convolution_table(s, n_max)
    squares = table.values[1:] ** 2
    n = np.arange(1, n_max + 1, dtype=float)
    value = float(np.sum(squares * n ** (-2 * sigma)))

    if s == 1:
        constant, delta = 1.0, 0.0
    else:
        delta = (2 * sigma - 1) / 4
        constant = _divisor_growth_constant(divisor_table(s, n_max), delta)
    beta = 2 * sigma - 2 * delta
    boundary = constant**2 * math.log(n_max) ** (2 * s) * n_max ** (-beta)
    tail = constant**2 * _log_power_tail(2 * s, beta, n_max) + boundary
    estimate = _density_tail_estimate(squares, s * s + 2 * s - 1, sigma)
    return SeriesResult(value, tail, n_max, tail_estimate=estimate)


def lindelof_series(s: int, sigma: float, n_max: int) -> SeriesResult:
    """Truncated sum of d_s(n)^2 / n^(2 sigma) with a tail estimate."""
    if sigma <= 0.5:
        raise ValueError("requires sigma > 1/2")
    table = divisor_table(s, n_max)
    squares = table.values[1:] ** 2
    n = np.arange(1, n_max + 1, dtype=float)
    value = float(np.sum(squares * n ** (-2 * sigma)))

    if s == 1:
        constant, delta = 1.0, 0.0
    else:
        delta = (2 * sigma - 1) / 4
        constant = _divisor_growth_constant(table, delta)
    beta = 2 * sigma - 2 * delta
    boundary = constant**2 * n_max ** (-beta)
    tail = constant**2 * _log_power_tail(0, beta, n_max) + boundary
    estimate = _density_tail_estimate(squares, s * s - 1, sigma)
    return SeriesResult(value, tail, n_max, tail_estimate=estimate)


# ---------------------------------------------------------------------------
# Arithmetic factor (Euler product) and the conjectured right-hand side
# ---------------------------------------------------------------------------


def primes_up_to(limit: int) -> np.ndarray:
    """Primes <= limit by a numpy sieve."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


_MOEBIUS = None


def _moebius(n: int) -> int:
    global _MOEBIUS
    if _MOEBIUS is None or len(_MOEBIUS) <= n:
        limit = max(n, 64)
        mu = np.ones(limit + 1, dtype=np.int64)
        primes = primes_up_to(limit)
        for p in primes:
            mu[p::p] *= -1
            mu[p * p :: p * p] = 0
        _MOEBIUS = mu
    return int(_MOEBIUS[n])


def prime_zeta(k: float) -> float:
    """P(k) = sum over primes of p^(-k), for k > 1, via Moebius inversion."""
    if k <= 1:
        raise ValueError("prime zeta needs k > 1")
    total = 0.0
    for j in range(1, 64):
        mu = _moebius(j)
        if mu == 0:
            continue
        term = mu / j * math.log(zeta_real(k * j))
        total += term
        if abs(term) < 1e-18 and j > 3:
            break
    return total


def _euler_factor_log(s: float, p: int) -> float:
    """log of the local Euler factor (1 - 1/p)^(s^2) sum_m d_s(p^m)^2 p^(-m)."""
    inv_p = 1.0 / p
    term = 1.0
    total = 1.0
    m = 0
    while True:
        m += 1
        # d_s(p^m) = d_s(p^(m-1)) (s + m - 1) / m
        term *= ((s + m - 1) / m) ** 2 * inv_p
        total += term
        if term < _INNER_SUM_EPS * total:
            break
        if m > 10_000:
            raise ArithmeticError(f"Euler factor sum did not converge at p = {p}")
    return s * s * math.log1p(-inv_p) + math.log(total)


def arithmetic_factor(s: float, p_max: int) -> SeriesResult:
    """The arithmetic factor a_s: Euler product over primes p <= p_max.

    A second-order tail correction exp(-s^2 (s-1)^2 / 4 * sum_{p > p_max} p^-2)
    is applied, with the prime sum computed exactly via the prime zeta
    function; the reported tail bound is the p^-3-order residual.
    """
    if s <= 0:
        raise ValueError("requires s > 0")
    if p_max < 100:
        raise ValueError("requires p_max >= 100")
    primes = primes_up_to(p_max)
    log_total = 0.0
    for p in primes:
        log_total += _euler_factor_log(s, int(p))

    kappa = s * s * (s - 1) ** 2 / 4
    p2_tail = prime_zeta(2.0) - float(np.sum(1.0 / primes.astype(float) ** 2))
    corrected = math.exp(log_total - kappa * p2_tail)

    # Residual: |log f_p + kappa p^-2| <= c3 p^-3 with c3 estimated on the
    # largest computed primes (x2 safety), integrated over p > p_max.
    probe = primes[-20:]
    c3 = 0.0
    for p in probe:
        residual = _euler_factor_log(s, int(p)) + kappa / float(p) ** 2
        c3 = max(c3, abs(residual) * float(p) ** 3)
    c3 *= 2.0
    p3_tail = prime_zeta(3.0) - float(np.sum(1.0 / primes.astype(float) ** 3))
    tail = corrected * (math.expm1(c3 * p3_tail) + kappa * p2_tail * 1e-12)
    return SeriesResult(corrected, tail, p_max)


def rmt_leading_coefficient(s: float) -> float:
    """h_s = e^(-s^2) Gamma(s+1) 1F1(s+1, 1; s^2): the unit-circle limit of
    (1-r^2)^(s^2+2s) times the global derivative moment."""
    if s <= 0:
        raise ValueError("requires s > 0")
    x = s * s
    return math.exp(-x) * math.gamma(s + 1) * hyp1f1(s + 1, 1.0, x)


def conjecture_rhs(s: float, sigma: float, p_max: int = 100_000) -> float:
    """Conjectured sigma -> 1/2 asymptotic a_s h_s / (2 sigma - 1)^(s^2 + 2s)."""
    if sigma <= 0.5:
        raise ValueError("requires sigma > 1/2")
    a_s = arithmetic_factor(s, p_max).value
    return a_s * rmt_leading_coefficient(s) / (2 * sigma - 1) ** (s * s + 2 * s)
