"""Special functions shared by the exact, asymptotic and zeta modules.

All routines are scalar and pure.  The Laguerre evaluators stay exact on
rational inputs; the rest work in double precision (the Bessel series uses
80-bit intermediates to absorb cancellation at larger arguments).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

_SERIES_LIMIT = 100_000


def log_gamma(x: float) -> float:
    """log Gamma(x) for x > 0."""
    if x <= 0:
        raise ValueError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def reciprocal_gamma(x: float) -> float:
    """1 / Gamma(x), returning 0 at the poles x = 0, -1, -2, ..."""
    if x <= 0 and float(x).is_integer():
        return 0.0
    return 1.0 / math.gamma(x)


def hyp1f1(a: float, b: float, x: float) -> float:
    """Kummer's confluent hypergeometric function 1F1(a, b; x).

    Direct series for x >= 0; for x < 0 the Kummer transform
    1F1(a,b;x) = e^x 1F1(b-a, b; -x) avoids an alternating sum.
    """
    if b <= 0 and float(b).is_integer():
        raise ValueError(f"1F1 undefined for non-positive integer b = {b}")
    if x < 0:
        return math.exp(x) * hyp1f1(b - a, b, -x)
    term = 1.0
    total = 1.0
    for k in range(_SERIES_LIMIT):
        term *= (a + k) * x / ((b + k) * (k + 1))
        total += term
        if abs(term) <= 1e-17 * abs(total):
            return total
    raise ArithmeticError(f"1F1 series did not converge for ({a}, {b}, {x})")


def laguerre(s: int, x):
    """Laguerre polynomial L_s(x); exact Fraction on rational x."""
    if s < 0:
        raise ValueError("laguerre order must be non-negative")
    exact = isinstance(x, Rational)
    xv = Fraction(x) if exact else float(x)
    total = Fraction(0) if exact else 0.0
    for k in range(s + 1):
        coeff = Fraction(math.comb(s, k) * (-1) ** k, math.factorial(k))
        total += (coeff if exact else float(coeff)) * xv**k
    return total


def generalized_laguerre(n: int, alpha, x):
    """Generalized Laguerre polynomial L_n^(alpha)(x) by the finite sum.

    L_n^(alpha)(x) = sum_k (-1)^k binomial(n+alpha, n-k) x^k / k!.
    Exact on rational (alpha, x), consistent with laguerre at alpha = 0.
    """
    if n < 0:
        raise ValueError("generalized_laguerre order must be non-negative")
    exact = isinstance(alpha, Rational) and isinstance(x, Rational)
    av = Fraction(alpha) if exact else float(alpha)
    xv = Fraction(x) if exact else float(x)
    total = Fraction(0) if exact else 0.0
    for k in range(n + 1):
        binom = Fraction(1) if exact else 1.0
        for i in range(n - k):
            binom = binom * (n + av - i)
        binom = binom / math.factorial(n - k)
        term = (-1) ** k * binom * xv**k / math.factorial(k)
        total = total + term
    return total


def bessel_j0_of_sqrt(x: float) -> float:
    """J0(2 sqrt(x)) = sum_j (-x)^j / (j!)^2 for x >= 0.

    The alternating sum is done in extended precision: at x = 50 the largest
    term is ~1e4 while the result is O(0.1).
    """
    if x < 0:
        raise ValueError("bessel_j0_of_sqrt requires x >= 0")
    xl = np.longdouble(x)
    term = np.longdouble(1.0)
    total = np.longdouble(1.0)
    for j in range(1, _SERIES_LIMIT):
        term *= -xl / (np.longdouble(j) * np.longdouble(j))
        total += term
        if abs(term) <= np.longdouble(1e-25) * max(abs(total), np.longdouble(1e-30)):
            return float(total)
    raise ArithmeticError(f"Bessel series did not converge for x = {x}")


def exp_moment(k: int, c: float) -> float:
    """The moment integral over [0, 1] of x^k e^(-c x).

    Series in c for c < 1 (for c <= 0 every term is positive).  For c >= 1
    the integration-by-parts recurrence is run downward, seeded with zero far
    enough above k that the start-up error is damped below 1e-18; the upward
    direction amplifies errors by k/c per step and is useless for k >> c.
    """
    if k < 0:
        raise ValueError("exp_moment requires k >= 0")
    c = float(c)
    if c == 0.0:
        return 1.0 / (k + 1)
    if c < 1.0:
        term = 1.0
        total = 1.0 / (k + 1)
        for j in range(1, _SERIES_LIMIT):
            term *= -c / j
            delta = term / (k + j + 1)
            total += delta
            if abs(delta) <= 1e-18 * abs(total):
                return total
        raise ArithmeticError(f"exp_moment series did not converge for ({k}, {c})")
    # pick the start index so prod_{j=k+1..K} (c/j) < 1e-20
    top = max(k, int(c)) + 8
    damping = sum(math.log(c / j) for j in range(k + 1, top + 1))
    while damping > -46.0:
        top += 8
        damping += sum(math.log(c / j) for j in range(top - 7, top + 1))
    e = math.exp(-c)
    m = 0.0
    for j in range(top, k, -1):
        m = (c * m + e) / j
    return m


@dataclass(frozen=True)
class ExpMomentTable:
    """Moments of x^k e^(-c x) on [0, 1] for k = 0 .. k_max."""

    c: float
    values: tuple[float, ...]

    @classmethod
    def build(cls, c: float, k_max: int) -> "ExpMomentTable":
        return cls(float(c), tuple(exp_moment(k, c) for k in range(k_max + 1)))

    def __getitem__(self, k: int) -> float:
        return self.values[k]


_BERNOULLI_2K = (
    Fraction(1, 6),
    Fraction(-1, 30),
    Fraction(1, 42),
    Fraction(-1, 30),
    Fraction(5, 66),
    Fraction(-691, 2730),
    Fraction(7, 6),
    Fraction(-3617, 510),
    Fraction(43867, 798),
    Fraction(-174611, 330),
)


def zeta_real(w: float, order: int = 0) -> float:
    """zeta(w), zeta'(w) or zeta''(w) for real w > 1 by Euler-Maclaurin.

    The asymptotic correction is differentiated termwise; finite differences
    would be hopeless for w barely above 1.
    """
    if w <= 1:
        raise ValueError(f"zeta_real requires w > 1, got {w}")
    if order not in (0, 1, 2):
        raise ValueError("order must be 0, 1 or 2")
    cutoff = 40
    logs = np.log(np.arange(1, cutoff, dtype=float))
    powers = np.exp(-w * logs)
    head = math.fsum(powers * logs**order) * (-1) ** order

    log_m = math.log(cutoff)
    m_pow = cutoff**-w
    # Endpoint term M^-w / 2.
    head += (-1) ** order * 0.5 * m_pow * log_m**order
    # Integral term M^(1-w) / (w - 1), differentiated in w.
    t = cutoff ** (1 - w) / (w - 1)
    if order == 0:
        head += t
    elif order == 1:
        head += t * (-log_m - 1 / (w - 1))
    else:
        head += t * ((log_m + 1 / (w - 1)) ** 2 + 1 / (w - 1) ** 2)

    # Bernoulli corrections B_2k/(2k)! (w)_(2k-1) M^(-w-2k+1).
    total = head
    prev_size = math.inf
    for idx, b2k in enumerate(_BERNOULLI_2K):
        k = idx + 1
        poch = 1.0
        dsum = 0.0
        d2sum = 0.0
        for j in range(2 * k - 1):
            poch *= w + j
            dsum += 1 / (w + j)
            d2sum += 1 / (w + j) ** 2
        base = float(b2k) / math.factorial(2 * k) * poch * cutoff ** (-w - 2 * k + 1)
        if order == 0:
            term = base
        elif order == 1:
            term = base * (dsum - log_m)
        else:
            term = base * ((dsum - log_m) ** 2 - d2sum)
        size = abs(term)
        if size > prev_size:
            break
        total += term
        prev_size = size
    return total
