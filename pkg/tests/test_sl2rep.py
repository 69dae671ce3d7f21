from itertools import combinations_with_replacement
from math import prod

import pytest

from wronski.errors import InternalConsistencyError, InvalidArgumentError
from wronski.sl2rep import WeightMultiplicity, dim_sing_oracle, tensor_decompose, weight_multiplicities


def test_four_standard_modules():
    wm = weight_multiplicities([1, 1, 1, 1])
    assert wm.weights == {-4: 1, -2: 4, 0: 6, 2: 4, 4: 1}
    wm.check()


def test_two_two_one():
    wm = weight_multiplicities([2, 2, 1])
    assert wm[1] == 5
    assert wm[5] == 1
    assert wm.dimension() == 18


def test_empty_product_is_trivial():
    wm = weight_multiplicities([])
    assert wm.weights == {0: 1}
    assert tensor_decompose([]) == {0: 1}
    assert dim_sing_oracle([], 0) == 1


def test_negative_weight_rejected():
    with pytest.raises(InvalidArgumentError):
        weight_multiplicities([1, -1])
    with pytest.raises(InvalidArgumentError):
        tensor_decompose([-2])


def test_check_catches_asymmetry():
    with pytest.raises(InternalConsistencyError):
        WeightMultiplicity((1,), {1: 1, -1: 2}).check()


def test_check_catches_dimension():
    with pytest.raises(InternalConsistencyError):
        WeightMultiplicity((2,), {2: 1, -2: 1}).check()


def test_clebsch_gordan_known():
    assert tensor_decompose([2, 2, 1]) == {5: 1, 3: 2, 1: 2}
    assert tensor_decompose([1, 1]) == {2: 1, 0: 1}
    assert list(tensor_decompose([3, 1, 2])) == sorted(tensor_decompose([3, 1, 2]), reverse=True)


@pytest.mark.parametrize("m, k, want", [((1, 1, 1, 1), 2, 2), ((1, 1), 1, 1), ((2, 2, 1), 2, 2), ((2, 3), 6, 0), ((2, 3), -1, 0)])
def test_dim_sing_oracle_values(m, k, want):
    assert dim_sing_oracle(m, k) == want


def test_decomposition_agrees_with_weight_differences():
    for n in range(1, 6):
        for m in combinations_with_replacement(range(0, 5), n):
            dec = tensor_decompose(m)
            M = sum(m)
            for k in range(M // 2 + 1):
                assert dec.get(M - 2 * k, 0) == dim_sing_oracle(m, k), (m, k)
            assert sum(c * (w + 1) for w, c in dec.items()) == prod(x + 1 for x in m)


def test_weights_satisfy_invariants_on_grid():
    for n in range(1, 5):
        for m in combinations_with_replacement(range(0, 6), n):
            weight_multiplicities(m).check()


def test_trivial_multiplicity_in_standard_powers():
    # L0 in L1^(2j) is the Catalan number C_{j+1}
    want = [1, 1, 2, 5, 14, 42, 132]
    for j, c in enumerate(want):
        assert tensor_decompose([1] * (2 * j)).get(0, 0) == c
        assert tensor_decompose([1] * (2 * j + 1)).get(0, 0) == 0
