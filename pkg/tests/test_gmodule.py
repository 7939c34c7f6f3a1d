import numpy as np
import pytest

from twistlab import f2
from twistlab.errors import InvalidAction, NotOddPrime
from twistlab.gmodule import (
    GModule,
    StabilityVerdict,
    direct_sum,
    group_algebra,
    rank_stability,
    regular_module,
    simple_module,
    split_module,
    trivial_module,
)
from twistlab.validate import random_gmodule


@pytest.mark.parametrize("p,dims", [(3, [2]), (5, [4]), (7, [3, 3]), (17, [8, 8]), (31, [5] * 6)])
def test_simple_dims(p, dims):
    assert group_algebra(p).simple_dims == dims


def test_group_algebra_names():
    assert group_algebra(7).to_json()["factors"] == ["x^3+x+1", "x^3+x^2+1"]
    with pytest.raises(NotOddPrime):
        group_algebra(2)
    with pytest.raises(NotOddPrime):
        group_algebra(15)


@pytest.mark.parametrize("p", [3, 5, 7, 17])
def test_regular_module(p):
    split = split_module(regular_module(p))
    assert split.fixed_dim == 1
    assert split.new_dim == p - 1
    assert set(split.multiplicities.values()) == {1}
    assert rank_stability(split.multiplicities) is StabilityVerdict.INCONCLUSIVE


def test_trivial_module():
    split = split_module(trivial_module(5, 3))
    assert split.fixed_dim == 3 and split.new_dim == 0
    assert split.multiplicities == {"x^4+x^3+x^2+x+1": 0}
    assert rank_stability(split.multiplicities) is StabilityVerdict.RANK_STABLE


def test_simple_modules():
    for factor in group_algebra(7).factors:
        S = simple_module(7, factor)
        assert np.array_equal(f2.matpow(S.action, 7), np.eye(3, dtype=np.uint8))
    first, second = group_algebra(7).factors
    split = split_module(direct_sum(simple_module(7, first), simple_module(7, first)))
    assert split.fixed_dim == 0
    assert split.multiplicities == {"x^3+x+1": 2, "x^3+x^2+1": 0}
    assert rank_stability(split.multiplicities) is StabilityVerdict.RANK_STABLE


def test_invalid_actions():
    with pytest.raises(InvalidAction):
        split_module(GModule.from_rows(3, ["01", "10"]))
    with pytest.raises(InvalidAction):
        GModule.from_rows(3, ["01", "1"])
    with pytest.raises(InvalidAction):
        direct_sum(trivial_module(3, 1), trivial_module(5, 1))


def test_rows():
    M = GModule.from_rows(3, ["010", "001", "100"])
    assert M.to_rows() == ["010", "001", "100"]
    split = split_module(M)
    assert split.fixed_dim == 1
    assert split.multiplicities == {"x^2+x+1": 1}


def test_empty_map_is_stable():
    assert rank_stability({}) is StabilityVerdict.RANK_STABLE


@pytest.mark.parametrize("p", [3, 7])
def test_random_modules_dimension_count(rng, p):
    algebra = group_algebra(p)
    for _ in range(10):
        B = random_gmodule(rng, p)
        split = split_module(B)
        counted = split.fixed_dim + sum(
            split.multiplicities[name] * dim
            for name, dim in zip(algebra.to_json()["factors"], algebra.simple_dims)
        )
        assert counted == B.dim


def test_multiplicities_add(rng):
    B, C = random_gmodule(rng, 7), random_gmodule(rng, 7)
    joined = split_module(direct_sum(B, C))
    b, c = split_module(B), split_module(C)
    assert joined.fixed_dim == b.fixed_dim + c.fixed_dim
    for name in joined.multiplicities:
        assert joined.multiplicities[name] == b.multiplicities[name] + c.multiplicities[name]
