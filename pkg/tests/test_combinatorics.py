from itertools import combinations_with_replacement, permutations, product
from fractions import Fraction
from math import comb, prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import wronski.combinatorics as cb
from wronski.combinatorics import (
    ProblemSpec,
    binomial,
    catalan,
    count_classes,
    dim_sing_formula,
    genfun_coefficients,
    sharp_formula,
)
from wronski.errors import InternalConsistencyError, InvalidArgumentError, UnsupportedCaseError
from wronski.schubert import product_of_specials
from wronski.sl2rep import dim_sing_oracle, tensor_decompose


def grid(max_d, max_n, max_m, min_n=2):
    for d in range(1, max_d + 1):
        for n in range(min_n, max_n + 1):
            for m in product(range(1, max_m + 1), repeat=n):
                yield ProblemSpec(d, m)


class TestProblemSpec:
    def test_derived_quantities(self):
        s = ProblemSpec(4, (2, 2, 1))
        assert (s.n, s.M, s.k, s.m_inf) == (3, 5, 2, 1)
        assert s.admissible and not s.boundary

    def test_boundary_flag(self):
        s = ProblemSpec(4, (1, 1, 1))
        assert s.admissible and s.boundary and s.k == 0

    @pytest.mark.parametrize(
        "d, m, fragment",
        [(5, (5, 1), "exceeds d-1"), (3, (2, 2, 1), "exceeds 2d-2"), (4, (1, 1), "below d-1")],
    )
    def test_vanishing_reason(self, d, m, fragment):
        assert fragment in ProblemSpec(d, m).vanishing_reason()

    def test_admissible_has_no_reason(self):
        assert ProblemSpec(3, (1, 1, 1, 1)).vanishing_reason() is None

    @pytest.mark.parametrize("d, m", [(0, (1,)), (3, ()), (3, (0, 1)), (3, (-1, 2))])
    def test_rejects_bad_fields(self, d, m):
        with pytest.raises(InvalidArgumentError):
            ProblemSpec(d, m)

    def test_z_length_must_match(self):
        with pytest.raises(InvalidArgumentError):
            ProblemSpec(3, (1, 1), z=(0j,))


class TestBinomial:
    @pytest.mark.parametrize("a, b, want", [(4, 2, 6), (-1, 0, 0), (2, 2, 1), (1, 3, 0), (-5, 2, 0), (0, 0, 1)])
    def test_values(self, a, b, want):
        assert binomial(a, b) == want

    def test_negative_lower_index(self):
        with pytest.raises(InvalidArgumentError):
            binomial(3, -1)

    def test_big(self):
        assert binomial(200, 100) == comb(200, 100)


class TestSharpFormula:
    def test_catalan_instance(self):
        assert sharp_formula(ProblemSpec(3, (1, 1, 1, 1))) == 2

    def test_matches_clebsch_gordan(self):
        # L2 x L2 x L1 = L5 + 2 L3 + 2 L1; the count is the multiplicity of L_{M-2k} = L1
        assert tensor_decompose([2, 2, 1])[1] == 2
        assert sharp_formula(ProblemSpec(4, (2, 2, 1))) == 2

    def test_multiplicity_too_large(self):
        assert sharp_formula(ProblemSpec(5, (5, 1))) == 0

    def test_single_point_unsupported(self):
        with pytest.raises(UnsupportedCaseError):
            sharp_formula(ProblemSpec(3, (2,)))

    @pytest.mark.parametrize("d, m, want", [(3, (2,), 1), (3, (1,), 0), (1, (1,), 0), (6, (5,), 1)])
    def test_count_classes_single_point(self, d, m, want):
        assert count_classes(ProblemSpec(d, m)) == want

    def test_outside_range_the_signed_sum_is_not_used(self):
        # the raw alternating sum is -1 here
        raw = sum(
            (-1) ** (2 - q) * binomial(s + q - 3, 0)
            for q, s, _ in cb._subset_sums((2, 2))
            if q
        )
        assert raw == -1
        assert sharp_formula(ProblemSpec(2, (2, 2))) == 0

    def test_vanishing_grid(self):
        for s in grid(6, 5, 6):
            if s.vanishing_reason() is not None:
                assert sharp_formula(s) == 0, s

    def test_vanishing_has_geometric_cause(self):
        # the zero is not just the guard: sigma_{m_1}...sigma_{m_n} is already
        # zero when M exceeds the dimension 2(d-1) of the Grassmannian
        for s in grid(6, 4, 5):
            if s.M > 2 * s.d - 2 and max(s.m) <= s.d - 1:
                assert product_of_specials(s.m, s.d).is_zero(), s

    def test_boundary_grid(self):
        seen = 0
        for s in grid(6, 5, 6):
            if s.boundary:
                assert sharp_formula(s) == 1, s
                seen += 1
        assert seen > 0

    @pytest.mark.parametrize("d", range(2, 9))
    def test_catalan_specialization(self, d):
        assert sharp_formula(ProblemSpec(d, (1,) * (2 * d - 2))) == catalan(d)

    def test_permutation_symmetry_exhaustive(self):
        for d in range(2, 7):
            for m in combinations_with_replacement(range(1, 5), 4):
                vals = {sharp_formula(ProblemSpec(d, p)) for p in set(permutations(m))}
                assert len(vals) == 1, (d, m)

    @settings(max_examples=200, deadline=None)
    @given(
        d=st.integers(2, 12),
        m=st.lists(st.integers(1, 11), min_size=2, max_size=7),
        data=st.data(),
    )
    def test_permutation_symmetry_random(self, d, m, data):
        perm = data.draw(st.permutations(m))
        assert sharp_formula(ProblemSpec(d, m)) == sharp_formula(ProblemSpec(d, perm))

    def test_equals_singular_dimension(self):
        for s in grid(7, 5, 4):
            if s.admissible:
                assert sharp_formula(s) == dim_sing_formula(s.m, s.k), s

    def test_negative_total_is_an_internal_error(self, monkeypatch):
        monkeypatch.setattr(cb, "binomial", lambda a, b: -1 if a >= 0 else 0)
        with pytest.raises(InternalConsistencyError):
            sharp_formula(ProblemSpec(3, (1, 1, 1, 1)))


class TestSubsetGrouping:
    @pytest.mark.parametrize("m", [(1, 1, 2), (3, 1, 3, 2, 3), (1,) * 8, (2, 5, 2, 5, 2)])
    def test_grouped_matches_enumerated(self, m, monkeypatch):
        direct = {}
        for q, s, w in cb._subset_sums(m):
            direct[q, s] = direct.get((q, s), 0) + w
        monkeypatch.setattr(cb, "SUBSET_ENUMERATION_LIMIT", 0)
        grouped = {}
        for q, s, w in cb._subset_sums(m):
            grouped[q, s] = grouped.get((q, s), 0) + w
        assert grouped == direct

    def test_large_n_catalan(self):
        # n = 22 > limit goes through the grouped path
        assert sharp_formula(ProblemSpec(12, (1,) * 22)) == catalan(12)


class TestDimSing:
    @pytest.mark.parametrize("m, k, want", [((1, 1, 1, 1), 2, 2), ((1, 1), 1, 1), ((2, 3), 6, 0)])
    def test_values(self, m, k, want):
        assert dim_sing_formula(m, k) == want

    def test_four_halves_against_weights(self):
        # mult(0) - mult(2) for four copies of {1, -1}
        assert dim_sing_oracle((1, 1, 1, 1), 2) == 6 - 4

    @pytest.mark.parametrize("k", [-3, -1, 3, 10])
    def test_out_of_range_k(self, k):
        assert dim_sing_formula((2, 3), k) == 0

    def test_single_factor_unsupported(self):
        with pytest.raises(UnsupportedCaseError):
            dim_sing_formula((3,), 1)

    def test_dimension_bookkeeping(self):
        # permutation invariance lets multisets stand in for ordered tuples
        for n in range(2, 7):
            for m in combinations_with_replacement(range(1, 6), n):
                M = sum(m)
                total = sum(dim_sing_formula(m, k) * (M - 2 * k + 1) for k in range(M // 2 + 1))
                assert total == prod(x + 1 for x in m), m

    def test_matches_weight_oracle(self):
        for n in range(2, 6):
            for m in combinations_with_replacement(range(1, 5), n):
                for k in range(sum(m) // 2 + 1):
                    assert dim_sing_formula(m, k) == dim_sing_oracle(m, k), (m, k)


class TestCatalan:
    @pytest.mark.parametrize("d, want", [(1, 1), (2, 1), (3, 2), (4, 5), (5, 14), (8, 429)])
    def test_values(self, d, want):
        assert catalan(d) == want

    def test_recurrence(self):
        # C_{n+1} = sum_i C_i C_{n-i} in the shifted indexing C_d = Cat_{d-1}
        for n in range(1, 30):
            assert catalan(n + 1) == sum(catalan(i + 1) * catalan(n - i) for i in range(n))

    def test_rejects_zero(self):
        with pytest.raises(InvalidArgumentError):
            catalan(0)


class TestGenfun:
    @pytest.mark.parametrize("order, want", [(1, [0]), (2, [0, 1]), (4, [0, 1, 0, 2]), (6, [0, 1, 0, 2, 0, 5])])
    def test_values(self, order, want):
        assert genfun_coefficients(order) == want

    def test_even_terms_are_singular_dimensions(self):
        vals = genfun_coefficients(16)
        for j in range(1, 9):
            assert vals[2 * j - 1] == dim_sing_formula((1,) * (2 * j), j)

    def test_closed_form_expansion(self):
        # expand (1 - 2u - sqrt(1 - 4u)) / (2u) in u = t^2 with exact
        # generalized binomials; odd powers of t never appear
        def half_binom(j):
            out = Fraction(1)
            for i in range(j):
                out *= (Fraction(1, 2) - i) / (i + 1)
            return out

        sqrt_coeffs = [half_binom(j) * (-4) ** j for j in range(13)]
        numerator = [1 - sqrt_coeffs[0], -2 - sqrt_coeffs[1]] + [-c for c in sqrt_coeffs[2:]]
        assert numerator[0] == 0
        series = [numerator[j + 1] / 2 for j in range(12)]
        assert series[0] == 0
        vals = genfun_coefficients(22)
        for j in range(1, 12):
            assert vals[2 * j - 1] == series[j]
            assert vals[2 * j - 2] == 0

    def test_rejects_zero(self):
        with pytest.raises(InvalidArgumentError):
            genfun_coefficients(0)
