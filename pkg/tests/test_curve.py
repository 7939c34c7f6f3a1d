from fractions import Fraction

import pytest
from sympy import primerange

from twistlab.arith import REAL, squarefree_part
from twistlab.curve import (
    Curve,
    GaloisType,
    ReductionType,
    bad_primes,
    curve_from_roots,
    frobenius_order,
    local_data,
    local_two_torsion_dim,
    make_curve,
    minimal_model,
    qp_root_count,
    reduction_type,
    twist,
    two_division,
)
from twistlab.errors import BadReductionPrime, NotSquarefree, SingularModel

TEST_CURVES = [
    [0, -1, 1, 0, 0],
    [0, 0, 0, -1, 0],
    [1, 0, 1, -4, -6],
    [0, 0, 1, -1, 0],
    [0, 0, 0, -3, 1],
    [1, -1, 1, -29, 53],
    [0, -4, 0, 0, 16],
]


def test_make_curve_invariants(e0):
    assert e0.disc == -11
    assert e0.c4 == 16
    assert e0.c6 == -152
    assert e0.j == Fraction(-4096, 11)
    assert make_curve([0, 0, 0, -1, 0]).disc == 64


def test_singular_model():
    with pytest.raises(SingularModel):
        make_curve([0, 0, 0, 0, 0])


@pytest.mark.parametrize("a", TEST_CURVES)
def test_c4_c6_relation(a):
    E = make_curve(a)
    assert E.c4**3 - E.c6**2 == 1728 * E.disc


def test_json_round_trip(e0):
    assert Curve.from_json(e0.to_json()) == e0


def test_minimal_model_examples(e0):
    assert minimal_model(e0) == e0
    scaled = make_curve([0, 0, 0, -64 * 16, 0])  # y^2 = x^3 - 4x scaled by u = 4
    M = minimal_model(scaled)
    assert M.ainvs == (0, 0, 0, -4, 0)
    assert M.disc == 4096
    assert minimal_model(M) == M


@pytest.mark.parametrize("a", TEST_CURVES)
def test_minimal_model_idempotent(a):
    M = minimal_model(make_curve(a))
    assert minimal_model(M) == M


def test_minimal_model_undoes_scaling(e0):
    # substitute x -> 36x, y -> 216y on the short model of E0
    big = make_curve([0, 0, 0, -27 * e0.c4 * 6**4, -54 * e0.c6 * 6**6])
    M = minimal_model(big)
    assert M.disc == e0.disc
    assert (M.c4, M.c6) == (e0.c4, e0.c6)


def test_reduction_types(e0, congruent):
    r = reduction_type(e0, 11)
    assert r.type is ReductionType.MULT_SPLIT
    assert r.ord_delta_min == 1
    assert reduction_type(e0, 3).type is ReductionType.GOOD
    assert reduction_type(congruent, 2).type is ReductionType.ADDITIVE
    real = reduction_type(e0, REAL)
    assert real.type is ReductionType.REAL_PLACE
    assert real.real_sign_delta == -1


def test_nonsplit_multiplicative():
    # y^2 + y = x^3 - x, conductor 37: -c6 = -216 is a nonsquare mod 37
    E = make_curve([0, 0, 1, -1, 0])
    assert E.disc == 37
    assert reduction_type(E, 37).type is ReductionType.MULT_NONSPLIT


def test_local_data(e0):
    places = local_data(e0)
    assert [p.place for p in places] == [REAL, 11]
    assert bad_primes(e0) == [11]


def test_two_division(e0, congruent):
    tdd = two_division(e0)
    assert tdd.cubic == (4, -4, 0, 1)
    assert tdd.galois_type is GaloisType.S3
    assert tdd.torsion_dim_q == 0
    tdd = two_division(congruent)
    assert tdd.galois_type is GaloisType.V
    assert tdd.torsion_dim_q == 2
    assert two_division(make_curve([0, 0, 0, -3, 1])).galois_type is GaloisType.C3
    assert two_division(make_curve([0, -4, 0, 0, 16])).galois_type is GaloisType.S3
    assert two_division(make_curve([0, 0, 0, 1, 0])).galois_type is GaloisType.C2


def test_frobenius_order(e0):
    assert frobenius_order(e0, 3) == 3
    assert frobenius_order(e0, 7) == 2
    with pytest.raises(BadReductionPrime):
        frobenius_order(e0, 11)
    with pytest.raises(BadReductionPrime):
        frobenius_order(e0, 2)


def test_local_two_torsion_dim(e0, congruent):
    assert local_two_torsion_dim(e0, 3) == 0
    assert local_two_torsion_dim(e0, 7) == 1
    assert local_two_torsion_dim(e0, REAL) == 1
    for v in (REAL, 2, 3, 5, 17):
        assert local_two_torsion_dim(congruent, v) == 2


def test_local_torsion_matches_frobenius(e0):
    for p in primerange(3, 400):
        if p == 11:
            continue
        assert (local_two_torsion_dim(e0, p) == 0) == (frobenius_order(e0, p) == 3)
        assert local_two_torsion_dim(e0, p) == {1: 2, 2: 1, 3: 0}[frobenius_order(e0, p)]


def test_qp_root_count_bad_primes():
    # x(x - 1)(x + 1) * 4 has three roots in every Q_p
    assert qp_root_count((4, 0, -4, 0), 2) == 3
    # x^2 - 2 has no roots in Q_3, so x(x^2 - 2) has one; 2 is a square mod 7
    assert qp_root_count((1, 0, -2, 0), 3) == 1
    assert qp_root_count((1, 0, -2, 0), 7) == 3


def test_twist_examples(e0, congruent):
    assert minimal_model(twist(e0, 1)) == minimal_model(e0)
    assert twist(congruent, -1) == minimal_model(congruent)
    E5 = twist(e0, 5)
    assert squarefree_part(E5.disc) == squarefree_part(-55)
    assert E5.j == e0.j
    with pytest.raises(NotSquarefree):
        twist(e0, 12)


@pytest.mark.parametrize("d", [-7, -3, 2, 5, 6, -15, 17])
def test_twist_involution(e0, d):
    back = twist(twist(e0, d), d)
    assert minimal_model(back).c4 == e0.c4
    assert minimal_model(back).c6 == e0.c6


def test_curve_from_roots():
    E = curve_from_roots(0, 1, -1)
    assert E.ainvs == (0, 0, 0, -1, 0)


@pytest.mark.parametrize("d", [1201, 1601, -2003, -30031, 9699690])
def test_twist_large_d(e0, d):
    E = twist(e0, d)
    assert abs(E.disc) > 2**40
    assert E.j == e0.j
    back = twist(E, d)
    assert back.c4 == e0.c4 and back.c6 == e0.c6


@pytest.mark.parametrize("d", [-199, 197, 1601])
def test_twist_involution_large_conductor(d):
    E = make_curve([1, -1, 1, -29, 53])
    back = twist(twist(E, d), d)
    assert back.c4 == minimal_model(E).c4 and back.c6 == minimal_model(E).c6


def test_twist_bad_primes_large_d(e0):
    E = twist(e0, 1601)
    assert bad_primes(E) == [11, 1601]
    assert reduction_type(E, 1601).type is ReductionType.ADDITIVE
    assert reduction_type(E, 11).type.multiplicative


def test_curve_from_roots_large_discriminant():
    E = curve_from_roots(623009, -828702, -641119)
    assert abs(E.disc) > 2**96
    primes = bad_primes(E)
    assert primes and set(primes) <= set(E.support)
    assert all(minimal_model(E).disc % p == 0 for p in primes)
    back = twist(twist(E, -1), -1)
    assert back.c4 == minimal_model(E).c4 and back.c6 == minimal_model(E).c6


def test_frobenius_distribution_s3(e0):
    counts = {1: 0, 2: 0, 3: 0}
    for p in primerange(3, 10**5):
        if p != 11:
            counts[frobenius_order(e0, p)] += 1
    total = sum(counts.values())
    assert abs(counts[3] / total - 1 / 3) <= 0.02
    assert abs(counts[2] / total - 1 / 2) <= 0.02
    assert abs(counts[1] / total - 1 / 6) <= 0.02
