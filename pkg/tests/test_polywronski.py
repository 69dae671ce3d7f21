from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from wronski.errors import (
    DegeneratePointError,
    InvalidArgumentError,
    InvalidConfigurationError,
    NotASolutionError,
    PreconditionError,
)
from wronski.polywronski import (
    ExactPolynomial as EP,
    FuchsianEquation,
    NumericPolynomial as NP,
    PolyPlane,
    all_solutions_polynomial_check,
    coprimality_margin,
    divide_exactly,
    fuchsian_from_plane,
    local_wronskian_identity_check,
    min_root_separation,
    monic_distance,
    plane_type,
    poly_gcd,
    wronskian,
    wronskian_of_configuration,
)

X = EP.x()


def ep(*c):
    return EP(list(c))


class TestArithmetic:
    def test_zero_polynomial(self):
        z = EP([0, 0])
        assert z.is_zero() and z.degree == -1

    def test_trims_leading_zeros(self):
        assert EP([1, 2, 0, 0]).degree == 1

    def test_ring_operations(self):
        a, b = ep(1, 1), ep(-1, 1)
        assert a * b == ep(-1, 0, 1)
        assert a - b == ep(2)
        assert a**3 == ep(1, 3, 3, 1)
        assert 2 * a == ep(2, 2)

    def test_division(self):
        q, r = divmod(ep(-1, 0, 0, 1), ep(-1, 1))
        assert q == ep(1, 1, 1) and r.is_zero()
        q, r = divmod(ep(1, 0, 1), ep(1, 1))
        assert q * ep(1, 1) + r == ep(1, 0, 1)

    def test_calculus(self):
        p = ep(1, 2, 3)
        assert p.deriv() == ep(2, 6)
        assert p.deriv(3).is_zero()
        assert p.integ().deriv() == p
        assert p.integ()(0) == 0

    def test_evaluation_is_exact(self):
        assert ep(0, 1, 1)(Fraction(1, 3)) == Fraction(4, 9)

    def test_numeric_relative_trim(self):
        p = NP([1.0, 2.0, 1e-15])
        assert p.degree == 1
        assert NP([1e-20, 1e-35]).degree == 0

    def test_json_roundtrip(self):
        p = NP([1 + 2j, -0.5, 3j])
        assert NP.from_json(p.to_json()) == p
        q = ep(Fraction(1, 3), -2)
        assert EP.from_json(q.to_json()) == q
        assert q.to_json() == {"coeffs": ["1/3", "-2/1"]}

    def test_backends_do_not_mix(self):
        with pytest.raises(TypeError):
            wronskian(ep(1, 1), NP([1, 1]))

    def test_gcd(self):
        a = EP.from_roots([1, 2, 2])
        b = EP.from_roots([2, 3])
        assert poly_gcd(a, b) == EP.from_roots([2])

    def test_divide_exactly(self):
        assert divide_exactly(EP.from_roots([1, 2]), ep(-1, 1)) == ep(-2, 1)
        with pytest.raises(NotASolutionError):
            divide_exactly(ep(1, 0, 1), ep(-1, 1))
        num = NP.from_roots([0.3, 1.1, -2])
        assert monic_distance(divide_exactly(num, NP([-0.3, 1])), NP.from_roots([1.1, -2])) < 1e-14


class TestWronskian:
    @pytest.mark.parametrize(
        "g, f, want",
        [(X**2, ep(1), ep(0, 2)), (X**3, X, ep(0, 0, 0, 2)), (ep(1, 2, 3), ep(1, 2, 3), EP())],
    )
    def test_examples(self, g, f, want):
        assert wronskian(g, f) == want

    def test_antisymmetry_and_linearity(self):
        polys = [ep(1, 2, 0, 1), ep(-3, 0, 2), ep(Fraction(1, 2), 1), ep(5, -1, 1, 1, 1)]
        for g, f in product(polys, repeat=2):
            assert wronskian(g, f) == -wronskian(f, g)
            for a, b in [(2, 3), (Fraction(-1, 3), 7)]:
                assert wronskian(a * g + b * f, f) == a * wronskian(g, f)

    def test_basis_change(self):
        g, f = ep(1, 0, -2, 0, 1), ep(3, 1, 1)
        for a, b, c, d in [(1, 2, 3, 4), (2, 0, 1, 1), (Fraction(1, 2), -3, 5, 7)]:
            assert wronskian(a * g + b * f, c * g + d * f) == (a * d - b * c) * wronskian(g, f)

    def test_degree_bound(self):
        rng = np.random.default_rng(3)
        for dg, df in [(3, 1), (5, 2), (4, 0)]:
            g = NP(rng.normal(size=dg + 1) + 1j * rng.normal(size=dg + 1))
            f = NP(rng.normal(size=df + 1) + 1j * rng.normal(size=df + 1))
            assert wronskian(g, f).degree == dg + df - 1
        assert wronskian(X**3, X**3 + 1).degree <= 5

    @pytest.mark.parametrize(
        "z, m, want",
        [((0, 1), (1, 1), [0, -1, 1]), ((0,), (3,), [0, 0, 0, 1]), ((1, -1), (2, 1), [1, -1, -1, 1])],
    )
    def test_configuration_polynomial(self, z, m, want):
        assert wronskian_of_configuration(z, m, exact=True) == EP(want)
        assert monic_distance(wronskian_of_configuration(z, m), NP(want)) < 1e-15

    def test_configuration_rejects_repeats(self):
        with pytest.raises(InvalidConfigurationError):
            wronskian_of_configuration((1, 2, 1), (1, 1, 1))


class TestPlane:
    def test_basis_convention(self):
        with pytest.raises(InvalidArgumentError):
            PolyPlane(ep(1, 1), ep(1, 2))
        with pytest.raises(InvalidArgumentError):
            PolyPlane(ep(1, 1), EP())

    def test_plane_types(self):
        assert plane_type(PolyPlane(X**2, ep(1))) == (2, 0, 1)
        p = PolyPlane(X**3, X)
        assert plane_type(p) == (3, 1, 3)
        assert not p.is_generic()

    def test_generic_degree_plus_order(self):
        # degree + order = deg W + 1 for a coprime plane
        p = PolyPlane(ep(1, 0, 0, 1), ep(-2, 0, 1))
        assert p.is_generic()
        deg, order, wdeg = plane_type(p)
        assert deg + order == wdeg + 1

    def test_local_identity_exact(self):
        assert local_wronskian_identity_check(PolyPlane(X**2 + X, ep(1)), 0)

    def test_local_identity_degenerate(self):
        with pytest.raises(DegeneratePointError):
            local_wronskian_identity_check(PolyPlane(X**2, ep(1)), 0)

    def test_local_identity_numeric_regular_point(self):
        plane = PolyPlane(NP([0, 0, 0, 1]), NP([1, 1]))
        assert local_wronskian_identity_check(plane, 0.37 + 0.2j)

    def test_local_identity_scale_free(self):
        plane = PolyPlane(NP([0, 0, 0, 1e6]), NP([1e-3, 1e-3]))
        assert local_wronskian_identity_check(plane, 1.7 - 0.4j)


def _d2_class():
    # z = (0, 1), m = (1, 1): f = x - 1/2 and g = x^2 - x/2 + 1/4
    return PolyPlane(ep(Fraction(1, 4), Fraction(-1, 2), 1), ep(Fraction(-1, 2), 1))


class TestFuchsian:
    def test_d2_partial_fractions(self):
        # W / f^2 = 1 - (1/4) / (x - 1/2)^2, so the double-pole coefficient is -1/4
        plane = _d2_class()
        W = wronskian_of_configuration((0, 1), (1, 1), exact=True)
        f = plane.f
        q, r = divmod(W, f * f)
        assert q == ep(1)
        assert r == ep(Fraction(-1, 4))
        assert wronskian(plane.g, plane.f) == W

    def test_d2_equation(self):
        eq = fuchsian_from_plane(_d2_class(), (0, 1), (1, 1))
        assert eq.F == ep(0, -1, 1)
        assert eq.G == ep(1, -2)
        assert eq.H == ep(2)
        assert eq.apply(_d2_class().g).is_zero()

    def test_boundary_class_has_zero_h(self):
        z, m = (0, 2, -1), (1, 2, 1)
        W = wronskian_of_configuration(z, m, exact=True)
        plane = PolyPlane(W.integ(), ep(1))
        eq = fuchsian_from_plane(plane, z, m)
        assert eq.H.is_zero()
        assert all_solutions_polynomial_check(eq, plane)

    def test_degree_of_h_bounded(self):
        z, m = (0, 1, 3), (1, 1, 1)
        W = wronskian_of_configuration(z, m, exact=True)
        # k = 1: f = x - t with W'(t) = 0 and W(t) != 0 is not rational here,
        # so use the numeric route
        Wn = wronskian_of_configuration(z, m)
        t = [r for r in Wn.deriv().roots()][0]
        f = NP([-t, 1])
        b = Wn(t) / f.deriv()(t) ** 2
        p, _ = divmod(Wn, f * f)
        g = p.integ() * f - NP([b])
        eq = fuchsian_from_plane(PolyPlane(g, f), z, m)
        assert eq.H.degree <= len(m) - 2
        assert W.degree == 3

    def test_rejects_plane_with_common_root(self):
        with pytest.raises(NotASolutionError):
            fuchsian_from_plane(PolyPlane(X**3, X), (0, 1), (1, 1))

    def test_perturbed_equation_fails(self):
        plane = PolyPlane(*(p.to_numeric() for p in (_d2_class().g, _d2_class().f)))
        eq = fuchsian_from_plane(plane, (0, 1), (1, 1))
        assert all_solutions_polynomial_check(eq, plane)
        assert not all_solutions_polynomial_check(eq.perturbed(1e-3), plane)
        # residual grows linearly with the perturbation
        r1 = eq.perturbed(1e-3).residual(plane.f)
        r2 = eq.perturbed(1e-5).residual(plane.f)
        assert 50 < r1 / r2 < 200

    def test_multiple_root_precondition(self):
        eq = FuchsianEquation(ep(0, 1), ep(1), EP())
        with pytest.raises(PreconditionError):
            all_solutions_polynomial_check(eq, PolyPlane(X**3, ep(1, 2, 1)))
        with pytest.raises(PreconditionError):
            all_solutions_polynomial_check(
                FuchsianEquation(NP([0, 1]), NP([1]), NP([])), PolyPlane(NP([0, 0, 0, 1]), NP([1, 2, 1]))
            )


class TestMargins:
    def test_coprimality_margin(self):
        assert coprimality_margin(NP([0, 0, 1]), NP([1])) == 1.0
        assert coprimality_margin(NP([0, 0, 0, 1]), NP([0, 1])) == 0.0
        assert coprimality_margin(NP([1, 0, 0, 1]), NP([0, 1])) > 0.1

    def test_margin_translation_invariant(self):
        g, f = NP.from_roots([0.3, -0.2, 1j]), NP.from_roots([0.5, -0.5j])
        shift = 40 + 25j
        g2 = NP.from_roots([r + shift for r in (0.3, -0.2, 1j)])
        f2 = NP.from_roots([0.5 + shift, -0.5j + shift])
        assert abs(coprimality_margin(g, f) - coprimality_margin(g2, f2)) < 1e-6

    def test_root_separation(self):
        assert min_root_separation(NP.from_roots([0, 1, 3])) == pytest.approx(1.0)
        assert min_root_separation(NP([1, 1])) == float("inf")
