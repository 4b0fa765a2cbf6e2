"""Large-N limits of the derivative moments in the three spectral regimes.

Global: |z| < 1 fixed.  Mesoscopic: |z|^2 = 1 - N^(-alpha).  Microscopic:
|z|^2 = 1 - c/N.  The microscopic coefficient has two independent forms, one
as a partition sum over exponential moments and one extracted from the Taylor
expansion of a finite-temperature Bessel-kernel determinant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .combinatorics import enumerate_partitions, partition_factorial, syt_count
from .linalg import det_float
from .specfun import ExpMomentTable, hyp1f1, laguerre


@dataclass(frozen=True)
class RegimePoint:
    """A point in one of the three spectral regimes.

    global: 0 <= r < 1.  mesoscopic: 0 < alpha < 1.  microscopic: any real c.
    N is optional; regime formulas return the N-free coefficient without it.
    """

    regime: str
    r: float | None = None
    alpha: float | None = None
    c: float | None = None
    N: int | None = None

    def __post_init__(self):
        if self.regime == "global":
            if self.r is None or not 0 <= self.r < 1:
                raise ValueError("global regime requires 0 <= r < 1")
        elif self.regime == "mesoscopic":
            if self.alpha is None or not 0 < self.alpha < 1:
                raise ValueError("mesoscopic regime requires 0 < alpha < 1")
        elif self.regime == "microscopic":
            if self.c is None:
                raise ValueError("microscopic regime requires c")
        else:
            raise ValueError(f"unknown regime {self.regime!r}")


def global_moment(s: float, r: float) -> float:
    """Limiting derivative moment for fixed |z| = r < 1.

    e^(-s^2 r^2) Gamma(s+1) 1F1(s+1, 1; s^2 r^2) / (1-r^2)^(s^2+2s); for
    integer s this equals s! L_s(-r^2 s^2) / (1-r^2)^(s^2+2s).
    """
    if not 0 <= r < 1:
        raise ValueError("global regime requires 0 <= r < 1")
    if s <= -1:
        raise ValueError("requires s > -1")
    x = s * s * r * r
    return (
        math.exp(-x)
        * math.gamma(s + 1)
        * hyp1f1(s + 1, 1.0, x)
        / (1 - r * r) ** (s * s + 2 * s)
    )


def joint_moment(s: float, h: float, z1: complex, z2: complex) -> float:
    """Limiting joint moment of |dLambda/Lambda(z2)|^(2h) |Lambda(z1)|^(2s)."""
    z1 = complex(z1)
    z2 = complex(z2)
    if abs(z1) >= 1 or abs(z2) >= 1:
        raise ValueError("requires |z1| < 1 and |z2| < 1")
    if h <= -1:
        raise ValueError("requires h > -1")
    rho = abs(z1) ** 2 * (1 - abs(z2) ** 2) ** 2 / abs(1 - z1 * z2.conjugate()) ** 2
    x = s * s * rho
    return (
        math.exp(-x)
        * math.gamma(h + 1)
        * hyp1f1(h + 1, 1.0, x)
        / ((1 - abs(z2) ** 2) ** (2 * h) * (1 - abs(z1) ** 2) ** (s * s))
    )


def expected_zero_count(r: float) -> float:
    """Limiting mean number of zeros of the derivative inside radius r."""
    if not 0 <= r < 1:
        raise ValueError("requires 0 <= r < 1")
    return 2 * r * r / (1 - r * r)


def expected_log_integral(r: float) -> float:
    """Limit of the radially integrated zero density: -log(1 - r^2)."""
    if not 0 <= r < 1:
        raise ValueError("requires 0 <= r < 1")
    return -math.log1p(-r * r)


def meso_moment(s: int, alpha: float, N: float) -> float:
    """Mesoscopic asymptotic N^(alpha(s^2+2s)) s! L_s(-s^2)."""
    if s < 1 or int(s) != s:
        raise ValueError("s must be a positive integer")
    if not 0 < alpha < 1:
        raise ValueError("requires 0 < alpha < 1")
    coefficient = math.factorial(s) * float(laguerre(s, -s * s))
    return coefficient * float(N) ** (alpha * (s * s + 2 * s))


def micro_b(s: int, c: float) -> float:
    """Microscopic coefficient: partition sum of exponential-moment determinants.

    The N^(s^2+2s) coefficient of the derivative moment at |z|^2 = 1 - c/N.
    """
    if s < 1 or int(s) != s:
        raise ValueError("s must be a positive integer")
    table = ExpMomentTable.build(c, 4 * s - 2)
    data = []
    for lam in enumerate_partitions(s):
        padded = lam.padded(s)
        exponents = tuple(padded[i] + s - (i + 1) for i in range(s))
        data.append((syt_count(lam), partition_factorial(lam, s), exponents))
    total = 0.0
    for f_lam, fact_lam, p in data:
        for f_mu, fact_mu, q in data:
            rows = [[table[p[i] + q[j]] for j in range(s)] for i in range(s)]
            total += f_lam * f_mu / (fact_lam * fact_mu) * det_float(rows)
    return total


def _bessel_entry_coeffs(i: int, j: int, table: ExpMomentTable, deg: int) -> np.ndarray:
    """Taylor coefficients in (v, w) of the (i, j) kernel-derivative entry.

    Entry is the mixed (i-1, j-1) derivative of the finite-temperature Bessel
    kernel integral; coefficient of v^p w^q is
    (-1)^(p+q+i+j) m_(p+q+i+j-2)(c) / ((p+i-1)! (q+j-1)! p! q!).
    """
    coeffs = np.zeros((deg + 1, deg + 1))
    for p in range(deg + 1):
        for q in range(deg + 1):
            a = p + i - 1
            b = q + j - 1
            coeffs[p, q] = (
                (-1) ** (a + b)
                * table[a + b]
                / (math.factorial(a) * math.factorial(b) * math.factorial(p) * math.factorial(q))
            )
    return coeffs


def _truncated_product(x: np.ndarray, y: np.ndarray, deg: int) -> np.ndarray:
    out = np.zeros((deg + 1, deg + 1))
    for p in range(deg + 1):
        for q in range(deg + 1):
            if x[p, q] == 0.0:
                continue
            out[p : deg + 1, q : deg + 1] += x[p, q] * y[: deg + 1 - p, : deg + 1 - q]
    return out


def micro_b_bessel(s: int, c: float) -> float:
    """Microscopic coefficient extracted from the Bessel-kernel determinant.

    Expands every entry of the s x s kernel-derivative matrix as a bivariate
    Taylor series to degree s, pushes the truncated series through the Leibniz
    determinant, and reads off the (v^s w^s) coefficient.
    """
    if s < 1 or int(s) != s:
        raise ValueError("s must be a positive integer")
    table = ExpMomentTable.build(c, 4 * s - 2)
    entries = {
        (i, j): _bessel_entry_coeffs(i, j, table, s)
        for i in range(1, s + 1)
        for j in range(1, s + 1)
    }
    from itertools import permutations

    det_coeffs = np.zeros((s + 1, s + 1))
    for perm in permutations(range(1, s + 1)):
        sign = _permutation_sign(perm)
        prod = entries[(1, perm[0])]
        for i in range(2, s + 1):
            prod = _truncated_product(prod, entries[(i, perm[i - 1])], s)
        det_coeffs += sign * prod
    return float(det_coeffs[s, s]) * math.factorial(s) ** 2


def _permutation_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = perm[i] - 1
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def cue_limit(s: float, point: RegimePoint) -> float:
    """Limits of E|Lambda_N|^(2s) itself in the three regimes.

    global: (1-r^2)^(-s^2).  mesoscopic: N^(s^2 alpha).  microscopic:
    N^(s^2) s! det{m_(i+j-2)(c)} / prod_j Gamma(j)Gamma(j+1) (integer s);
    without N the N-free coefficient is returned.
    """
    if point.regime == "global":
        return (1 - point.r**2) ** (-(s * s))
    if point.regime == "mesoscopic":
        if point.N is None:
            raise ValueError("mesoscopic CUE limit needs N")
        return float(point.N) ** (s * s * point.alpha)
    # microscopic: Andreief reduction of the multi-integral needs integer s
    if int(s) != s or s < 1:
        raise ValueError("microscopic CUE limit implemented for positive integer s")
    s = int(s)
    table = ExpMomentTable.build(point.c, 2 * s - 2)
    rows = [[table[i + j] for j in range(s)] for i in range(s)]
    coefficient = math.factorial(s) * det_float(rows)
    for j in range(1, s + 1):
        coefficient /= math.gamma(j) * math.gamma(j + 1)
    if point.N is None:
        return coefficient
    return coefficient * float(point.N) ** (s * s)
