import pytest
from sympy import primerange

from twistlab.arith import REAL, is_squarefree
from twistlab.curve import GaloisType, ReductionType, local_two_torsion_dim, make_curve, two_division
from twistlab.errors import InvalidDescriptor, NotSquarefree, UnsupportedPlace
from twistlab.localdata import (
    UNSUPPORTED,
    Admissible,
    ParityFlag,
    PlaceDescriptor,
    PlaceKind,
    Splitting,
    TwistDisc,
    Violation,
    admissible,
    conductor,
    d_parity,
    delta_hilbert_agreement,
    delta_rule,
    delta_v,
    descriptors_for,
    h1f_dim,
    norm_index_report,
    place_behavior,
)

S3_CURVES = [
    [0, -1, 1, 0, 0],
    [0, 0, 1, -1, 0],
    [0, -4, 0, 0, 16],
    [0, -1, 1, 0, 8],
    [0, -1, 1, 0, 1],
]


def s3_family(count: int) -> list:
    """First curves y^2 + y = x^3 - x^2 + g, g >= 0, with S3 2-division field."""
    out = []
    g = 0
    while len(out) < count:
        E = make_curve([0, -1, 1, 0, g])
        if two_division(E).galois_type is GaloisType.S3:
            out.append(E)
        g += 1
    return out


def test_twist_disc_validation():
    assert TwistDisc(1).trivial
    with pytest.raises(NotSquarefree):
        TwistDisc(8)
    with pytest.raises(NotSquarefree):
        TwistDisc(0)


def test_place_behavior():
    assert place_behavior(-7, 2).splitting is Splitting.SPLIT
    assert place_behavior(5, 2).splitting is Splitting.INERT
    assert place_behavior(3, 2).splitting is Splitting.RAMIFIED
    assert place_behavior(6, 2).splitting is Splitting.RAMIFIED
    assert place_behavior(5, 11).splitting is Splitting.SPLIT
    assert place_behavior(-3, 11).splitting is Splitting.INERT
    assert place_behavior(7, 7).splitting is Splitting.RAMIFIED
    assert place_behavior(-1, REAL).splitting is Splitting.RAMIFIED
    assert place_behavior(1, REAL).splitting is Splitting.SPLIT


def test_conductor():
    assert conductor(1) == 1
    assert conductor(5) == 5
    assert conductor(-7) == 7
    assert conductor(3) == 12
    assert conductor(2) == 8
    assert conductor(-1) == 4


def test_h1f_dim(e0, congruent):
    assert h1f_dim(e0, 3) == 0
    assert h1f_dim(e0, REAL) == 0
    assert h1f_dim(e0, 7) == 1
    assert h1f_dim(congruent, 17) == 2
    assert h1f_dim(congruent, 2) == 3
    assert h1f_dim(congruent, REAL) == 1


def test_delta_examples(e0, congruent):
    assert delta_v(e0, 3, 3) == 0
    assert delta_v(e0, 7, 7) == 1
    assert delta_v(congruent, 17, 17) == 2
    for v in (REAL, 2, 3, 5, 7, 11):
        assert delta_v(e0, 1, v) == 0
        assert delta_v(congruent, 1, v) == 0


def test_delta_rules(e0, congruent):
    assert delta_rule(e0, 5, 2) == (0, "good_unramified")
    assert delta_rule(e0, -3, 11) == (0, "mult_inert_odd")
    assert delta_rule(e0, -7, REAL) == (0, "real_connected")
    assert delta_rule(congruent, -7, REAL) == (1, "real_hilbert")
    assert delta_rule(e0, 11, 11) == (1, "mult_split_ramified")
    assert delta_v(e0, 3, 2) == UNSUPPORTED
    assert delta_v(congruent, 5, 2) == UNSUPPORTED


def test_norm_index_report(e0):
    report = norm_index_report(e0, -7)
    assert [v for v, _, _ in report.entries] == [REAL, 2, 7, 11]
    assert report.delta(7) == 1
    assert report.total_parity == 1
    assert norm_index_report(e0, 3).total_parity is None
    assert norm_index_report(e0, 3).unsupported_places() == [2]


def test_admissible_examples(e0, congruent):
    assert isinstance(admissible(e0, 17), Admissible)
    assert isinstance(admissible(e0, 89), Admissible)
    violation = admissible(e0, 3)
    assert isinstance(violation, Violation)
    assert "2 does not split" in violation.reason
    assert admissible(congruent, 17) == Admissible((17,))
    assert isinstance(admissible(congruent, -7), Violation)
    assert admissible(e0, 1) == Admissible(())
    # 11 is multiplicative with odd ord and must stay unramified
    assert isinstance(admissible(e0, 33), Violation)


def test_admissible_local_indices(e0, congruent):
    for E in (e0, congruent, make_curve(S3_CURVES[1])):
        for d in range(-400, 400):
            if d in (0, 1) or not is_squarefree(d):
                continue
            adm = admissible(E, d)
            if not isinstance(adm, Admissible):
                continue
            report = norm_index_report(E, d)
            for v, delta, _ in report.entries:
                if v in adm.T:
                    assert delta == local_two_torsion_dim(E, v)
                else:
                    assert delta == 0, (E.ainvs, d, v)


@pytest.mark.parametrize("a", S3_CURVES)
def test_delta_hilbert_agreement(a):
    E = make_curve(a)
    checked = 0
    for p in primerange(3, 300):
        if E.disc % p == 0:
            continue
        d = p if p % 4 == 1 else -p
        try:
            assert delta_hilbert_agreement(E, d, p)
            checked += 1
        except UnsupportedPlace:
            assert local_two_torsion_dim(E, p) == 2
    assert checked > 20


def test_delta_hilbert_agreement_family():
    curves = s3_family(20)
    assert len({E.ainvs for E in curves}) == 20
    for E in curves:
        checked = 0
        for p in primerange(3, 1000):
            if E.disc % p == 0:
                continue
            d = p if p % 4 == 1 else -p
            try:
                assert delta_hilbert_agreement(E, d, p), (E.ainvs, p)
                checked += 1
            except UnsupportedPlace:
                assert local_two_torsion_dim(E, p) == 2
        assert checked > 100


def test_descriptors_and_d_parity(e0):
    descs = descriptors_for(e0)
    assert [d.kind for d in descs] == [PlaceKind.REAL, PlaceKind.FINITE]
    assert descs[1].p == 11 and descs[1].reduction is ReductionType.MULT_SPLIT
    assert d_parity(descs[0]) is ParityFlag.NO
    assert d_parity(descs[1]) is ParityFlag.NO
    good = PlaceDescriptor(PlaceKind.FINITE, p=7, reduction=ReductionType.GOOD)
    assert d_parity(good) is ParityFlag.YES
    assert d_parity(PlaceDescriptor(PlaceKind.FINITE, p=2, reduction=ReductionType.GOOD)) is ParityFlag.UNKNOWN
    assert d_parity(PlaceDescriptor(PlaceKind.FINITE, p=5, reduction=ReductionType.ADDITIVE, ord_delta=2)) is ParityFlag.UNKNOWN
    assert d_parity(PlaceDescriptor(PlaceKind.COMPLEX)) is ParityFlag.YES


def test_descriptor_json_and_consistency():
    desc = PlaceDescriptor.from_json({"kind": "finite", "p": 7, "ramified": False, "reduction": "good", "ordDelta": 0})
    assert desc.reduction is ReductionType.GOOD
    assert PlaceDescriptor.from_json(desc.to_json()) == desc
    with pytest.raises(InvalidDescriptor):
        PlaceDescriptor(PlaceKind.REAL, flag=ParityFlag.YES)
    with pytest.raises(InvalidDescriptor):
        PlaceDescriptor.from_json({"kind": "finite", "p": 7})
    resolved = PlaceDescriptor(PlaceKind.FINITE, p=3, reduction=ReductionType.ADDITIVE, ord_delta=3, flag=ParityFlag.YES)
    assert d_parity(resolved) is ParityFlag.YES
