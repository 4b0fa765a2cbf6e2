import math
from fractions import Fraction

import pytest

from cuederiv.errors import CapabilityError
from cuederiv.exact_moments import (
    UPolynomial,
    appendix_d00,
    cue_moment_integer,
    cue_moment_ks,
    cue_moment_radial,
    derivative_entry,
    k_polynomial,
    moment_exact,
    moment_structure,
    structure_a,
    structure_b,
    structure_b_expansion,
    structure_c,
    structure_c_upoly,
)
from cuederiv.linalg import det_exact, det_float
from cuederiv.specfun import hyp1f1


def closed_sum_s1(N, u):
    """Independent s = 1 oracle: sum of j^2 u^(j-1)."""
    return sum(j * j * u ** (j - 1) for j in range(1, N + 1))


class TestDeterminants:
    def test_exact_matches_float(self):
        rows = [[Fraction(1, 3), Fraction(2)], [Fraction(-5, 7), Fraction(1, 2)]]
        exact = det_exact(rows)
        approx = det_float([[float(x) for x in row] for row in rows])
        assert exact == Fraction(1, 6) + Fraction(10, 7)
        assert abs(float(exact) - approx) < 1e-14

    def test_singular(self):
        assert det_exact([[1, 2], [2, 4]]) == 0
        assert det_float([[0.0, 0.0], [1.0, 2.0]]) == 0.0

    def test_pivoting(self):
        rows = [[0, 1, 2], [1, 0, 1], [2, 3, 0]]
        assert det_exact(rows) == 0 * (0 - 3) - 1 * (0 - 2) + 2 * (3 - 0)


class TestKPolynomial:
    def test_small(self):
        assert k_polynomial(1, 1).coefficients == [1, 1]
        assert k_polynomial(2, 1).coefficients == [1, 1, 1]

    def test_degree(self):
        assert k_polynomial(5, 3).degree == 7

    def test_polynomial_evaluation_and_derivative(self):
        p = k_polynomial(3, 1)
        assert p(Fraction(1, 2)) == Fraction(15, 8)
        # derivative of 1+u+u^2+u^3 is 1+2u+3u^2 = 1+4+12 at u=2
        assert p.derivative()(2) == 17


class TestDerivativeEntry:
    def test_no_derivatives_is_k_itself(self):
        for N in (1, 2, 5):
            u = Fraction(1, 3)
            assert derivative_entry(0, 0, N, 1, u) == k_polynomial(N, 1)(u)

    def test_uk_prime_example(self):
        # u K'(u) at N=2, s=1, u=1/2: (1/2)(1+2u) = 1
        assert derivative_entry(1, 0, 2, 1, Fraction(1, 2)) == 1

    def test_q_derivative_matches_symbolic_polynomial(self):
        for N in range(1, 7):
            s = 2
            poly = k_polynomial(N, s)
            u = Fraction(2, 5)
            assert derivative_entry(0, 1, N, s, u) == poly.derivative()(u)
            assert derivative_entry(0, 2, N, s, u) == poly.derivative().derivative()(u)

    def test_leibniz_against_symbolic(self):
        # (u^2 K''(u))' via symbolic polynomial calculus
        N, s = 4, 2
        u = Fraction(3, 7)
        k2 = k_polynomial(N, s).derivative().derivative()
        product = UPolynomial([0, 0, 1] if False else [0] * 2 + [1])
        # d/du [u^2 K''(u)] = 2u K'' + u^2 K'''
        k3 = k2.derivative()
        expected = 2 * u * k2(u) + u**2 * k3(u)
        assert derivative_entry(2, 1, N, s, u) == expected

    def test_rejects_negative_orders(self):
        with pytest.raises(ValueError):
            derivative_entry(-1, 0, 2, 1, Fraction(1))


class TestMomentExact:
    @pytest.mark.parametrize("N", range(1, 7))
    def test_s1_closed_sum(self, N):
        for u in (Fraction(0), Fraction(1, 4), Fraction(1), Fraction(4)):
            assert moment_exact(N, 1, u) == closed_sum_s1(N, u)

    def test_unit_circle_s1(self):
        for N in (1, 2, 5, 9):
            assert moment_exact(N, 1, Fraction(1)) == Fraction(
                N * (N + 1) * (2 * N + 1), 6
            )

    def test_float_mode_tracks_exact(self):
        for N, s in [(3, 1), (4, 2), (2, 3)]:
            u = Fraction(1, 2)
            exact = moment_exact(N, s, u)
            approx = moment_exact(N, s, float(u))
            assert abs(approx - float(exact)) <= 1e-12 * float(exact)

    def test_nonnegative(self):
        for N in (1, 3, 5):
            for s in (1, 2, 3):
                for u in (Fraction(0), Fraction(1, 3), Fraction(1), Fraction(2)):
                    assert moment_exact(N, s, u) >= 0

    def test_polynomial_degree_in_u(self):
        # the moment is a polynomial in u of degree s(N-1): the (d+1)-th
        # finite difference over integer nodes vanishes
        for N, s in [(2, 1), (4, 1), (3, 2), (5, 2)]:
            degree = s * (N - 1)
            nodes = [moment_exact(N, s, Fraction(t)) for t in range(degree + 2)]
            for _ in range(degree + 1):
                nodes = [b - a for a, b in zip(nodes, nodes[1:])]
            assert nodes == [0]

    def test_exact_capability_limit(self):
        with pytest.raises(CapabilityError):
            moment_exact(2, 9, Fraction(1, 2))
        with pytest.raises(CapabilityError):
            moment_exact(2, 13, 0.5)

    def test_rejects_negative_u(self):
        with pytest.raises(ValueError):
            moment_exact(2, 1, Fraction(-1, 2))


class TestStructureA:
    def test_vanishes_past_s(self):
        assert structure_a(2, 0, 3, 0.5) == 0.0
        assert structure_a(1, 0, 2, 0.25) == 0.0

    def test_s1_base(self):
        for r in (0.0, 0.3, 0.9):
            assert abs(structure_a(1, 0, 0, r) - (1 + r * r)) < 1e-12

    def test_full_gamma_form_at_origin(self):
        # h1 = h2 = 0 at r = 0: Gamma(s+1)
        for s in (1, 2, 3):
            assert abs(structure_a(s, 0, 0, 0.0) - math.gamma(s + 1)) < 1e-12

    def test_requires_ordered_pair(self):
        with pytest.raises(ValueError):
            structure_a(2, 2, 1, 0.5)

    def test_real_s(self):
        # analytic in s: spot-check a non-integer s against the direct formula
        s, h1, h2, r = 1.5, 0, 1, 0.6
        x = s * s * r * r
        direct = (
            math.gamma(s + 1) ** 2
            / (math.gamma(s - h2 + 1) * math.factorial(h2) * math.gamma(h2 - h1 + 1))
            * math.exp(-x)
            * hyp1f1(s + 1 - h1, h2 - h1 + 1, x)
        )
        assert abs(structure_a(s, h1, h2, r) - direct) < 1e-12 * abs(direct)


class TestStructureB:
    def test_b00_is_scaled_polynomial_moment_s1(self):
        N, r = 5, Fraction(1, 3)
        assert structure_b(N, 1, 0, 0, r) == 1 - r ** (2 * N + 2)

    def test_b00_equals_radial_cue_moment(self):
        for N, s in [(3, 1), (4, 2)]:
            r = Fraction(1, 2)
            lhs = structure_b(N, s, 0, 0, r)
            rhs = (1 - r * r) ** (s * s) * cue_moment_radial(N, s, r)
            assert lhs == rhs

    def test_symmetry_all_pairs(self):
        N, s, r = 4, 2, Fraction(1, 2)
        for h1 in range(s + 1):
            for h2 in range(s + 1):
                assert structure_b(N, s, h1, h2, r) == structure_b(N, s, h2, h1, r)

    def test_b00_tends_to_one_inside_disc(self):
        s, u = 2, 0.25
        r = math.sqrt(u)
        values = [
            (1 - u) ** (s * s) * cue_moment_radial(N, s, r) for N in (50, 100)
        ]
        assert abs(values[0] - values[1]) < 1e-6
        assert abs(values[1] - 1) < 1e-6

    def test_expansion_matches_numeric_evaluation(self):
        N, s = 5, 2
        r = Fraction(1, 3)
        for h1, h2 in [(0, 0), (0, 1), (1, 1), (1, 2), (2, 2)]:
            poly = structure_b_expansion(N, s, h1, h2)
            value = sum(c * r**e for e, c in poly.items())
            assert value == structure_b(N, s, h1, h2, r)

    def test_float_mode(self):
        N, s, r = 6, 2, 0.37
        exact = structure_b(N, s, 1, 2, Fraction(37, 100))
        assert abs(structure_b(N, s, 1, 2, r) - float(exact)) < 1e-12 * abs(float(exact))


class TestStructureC:
    def test_empty_above_2s(self):
        assert structure_c(3, 1, 3, Fraction(1, 2)) == 0
        assert structure_c(3, 2, 5, 0.5) == 0.0

    def test_polynomial_degree_in_u(self):
        for N, s in [(2, 1), (4, 1), (3, 2)]:
            for h in range(2 * s + 1):
                poly = structure_c_upoly(N, s, h)
                assert poly.degree == N * s + s * s + s - h, (N, s, h)

    def test_c0_limit_is_hypergeometric_coefficient(self):
        s, r = 2, 0.5
        limit = (
            math.gamma(s + 1)
            * math.exp(-(s * r) ** 2)
            * hyp1f1(s + 1, 1, (s * r) ** 2)
        )
        value = structure_c(200, s, 0, r)
        assert abs(value - limit) < 1e-4 * abs(limit)

    def test_higher_c_vanish_in_the_limit(self):
        s, r = 2, 0.5
        for h in (1, 2, 3, 4):
            assert abs(structure_c(200, s, h, r)) < 1e-4


GRID_POINTS = [Fraction(0), Fraction(1, 16), Fraction(1, 4), Fraction(9, 16), Fraction(4)]


class TestMomentStructure:
    @pytest.mark.parametrize("N", range(1, 7))
    @pytest.mark.parametrize("s", (1, 2))
    def test_equals_determinant_route(self, N, s):
        for u in GRID_POINTS:
            assert moment_structure(N, s, u) == moment_exact(N, s, u)

    def test_spec_point(self):
        assert moment_structure(2, 1, Fraction(1, 4)) == 2

    def test_u_zero_collapse(self):
        # at z = 0 the derivative is -conj(trace), whose 2s-th absolute moment
        # is s! once N >= s
        for N, s in [(2, 1), (3, 2), (4, 3)]:
            assert moment_structure(N, s, Fraction(0)) == moment_exact(N, s, Fraction(0))
            assert moment_exact(N, s, Fraction(0)) == math.factorial(s)

    def test_float_route(self):
        for N, s, u in [(4, 1, 0.3), (5, 2, 0.49)]:
            exact = float(moment_exact(N, s, Fraction(u).limit_denominator(10**6)))
            assert abs(moment_structure(N, s, u) - exact) < 1e-9 * exact

    def test_rejects_unit_circle(self):
        with pytest.raises(ValueError):
            moment_structure(3, 1, Fraction(1))


class TestAppendixCoefficients:
    def test_s1_geometric(self):
        # b00 for s = 1 is 1 - u^(N+1): coefficient +1 at exponent 0 (l=0,m=0)
        # and -1 at exponent 2N+2 (l=1,m=1)
        N = 7
        assert appendix_d00(0, 0, 1, N) == 1
        assert appendix_d00(1, 1, 1, N) == -1

    def test_support_bounds(self):
        for s in (1, 2, 3):
            lo, hi = s * (s - 1) // 2, (3 * s - 1) * s // 2
            for l in range(s + 1):
                for m in range(0, hi + 3):
                    if not lo <= m <= hi:
                        assert appendix_d00(m, l, s, 6) == 0

    @pytest.mark.parametrize("s", (1, 2))
    @pytest.mark.parametrize("N", (5, 8))
    def test_expansion_matches_structure_b(self, s, N):
        expansion = structure_b_expansion(N, s, 0, 0)
        rebuilt: dict[int, Fraction] = {}
        hi = (3 * s - 1) * s // 2
        for l in range(s + 1):
            for m in range(hi + 1):
                coeff = appendix_d00(m, l, s, N)
                if coeff:
                    e = 2 * N * l - s * s + s + 2 * m
                    rebuilt[e] = rebuilt.get(e, Fraction(0)) + coeff
        rebuilt = {e: c for e, c in rebuilt.items() if c}
        assert rebuilt == expansion

    def test_capability_guard(self):
        with pytest.raises(CapabilityError):
            appendix_d00(0, 0, 4, 10)


class TestCueMoments:
    def test_s_zero(self):
        assert cue_moment_integer(3, 0) == 1
        assert cue_moment_ks(3, 0.0) == 1.0

    def test_hand_product(self):
        assert cue_moment_integer(2, 1) == 3
        assert abs(cue_moment_ks(2, 1.0) - 3.0) < 1e-12

    def test_routes_agree(self):
        for s in range(5):
            for N in (1, 2, 7, 20):
                exact = float(cue_moment_integer(N, s))
                assert abs(cue_moment_ks(N, s) - exact) <= 1e-10 * exact

    def test_radial_symmetry(self):
        # E|Lambda|^2s at r and 1/r differ by r^(2sN)
        for N, s in [(3, 1), (4, 2), (6, 2)]:
            r = Fraction(1, 2)
            assert cue_moment_radial(N, s, r) == r ** (2 * s * N) * cue_moment_radial(
                N, s, 1 / r
            )

    def test_real_s_path(self):
        assert cue_moment_ks(5, 0.5) > 0
        with pytest.raises(ValueError):
            cue_moment_ks(5, -0.6)
