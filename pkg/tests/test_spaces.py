from fractions import Fraction as F

import pytest

from bvdomains.core import Seq, identity, transform_seq
from bvdomains.builders import cesaro, phi
from bvdomains.spaces import (
    SpaceId,
    bvA_norm_prefix,
    bv_norm_prefix,
    classical_dual,
    classify_trend,
    domain_membership,
    membership,
)

E = Seq.constant(1, "e")
ALTERNATING = Seq(lambda k: F((-1) ** k), label="(-1)^k")
HARMONIC = Seq(lambda k: F(1, k + 1), label="harmonic")


def test_bv_norm_prefix_constant_and_unit():
    for n in (1, 5, 40):
        assert bv_norm_prefix(E, n) == 1
    assert bv_norm_prefix(Seq.unit(0), 1) == 2
    assert bv_norm_prefix(Seq.unit(0), 9) == 2


def test_bv_norm_prefix_harmonic_telescopes():
    # telescoping oracle: |1| + sum (1/k - 1/(k+1)) = 2 - 1/(N+1)
    for n in (1, 3, 10):
        assert bv_norm_prefix(HARMONIC, n) == 2 - F(1, n + 1)


def test_bv_norm_monotone():
    values = [bv_norm_prefix(ALTERNATING, n) for n in range(1, 12)]
    assert values == sorted(values)


def test_bvA_norm_prefix():
    assert bvA_norm_prefix(identity(), ALTERNATING, 7) == bv_norm_prefix(ALTERNATING, 7)
    assert bvA_norm_prefix(cesaro(), E, 9) == 1
    # direct evaluation oracle: C e(0) = (1, 1/2, 1/3, ...)
    expected = 1 + sum(F(1, k) - F(1, k + 1) for k in range(1, 4))
    assert expected == F(7, 4)
    assert bvA_norm_prefix(cesaro(), Seq.unit(0), 3) == F(7, 4)


def test_membership_requires_valid_truncation():
    with pytest.raises(ValueError):
        membership(E, SpaceId.L1, 10)
    with pytest.raises(ValueError):
        membership(E, SpaceId.L1, 4)


def test_membership_geometric_l1():
    geo = Seq(lambda k: F(1, 2**k))
    report = membership(geo, SpaceId.L1, 16)
    assert report.verdict == "likely_in"
    # geometric-sum oracle: sum_{k<16} 2^-k = 2 - 2^-15
    assert report.checkpoints[-1][1] == 2 - F(1, 2**15)


def test_membership_alternating_bv():
    report = membership(ALTERNATING, SpaceId.BV, 16)
    assert report.verdict == "likely_out"
    assert report.checkpoints[-1][1] == 2 * 15


def test_membership_finite_support_certified():
    report = membership(Seq.unit(5), SpaceId.C0, 16)
    assert report.verdict == "certified_in"
    report = membership(Seq.unit(5), SpaceId.BV0, 16)
    assert report.verdict == "certified_in"


def test_membership_bv0_combines_statistics():
    report = membership(ALTERNATING, SpaceId.BV0, 16)
    assert report.aux_checkpoints is not None
    assert report.verdict == "likely_out"


def test_domain_membership_phi():
    report = domain_membership(E, phi(), SpaceId.L1, 16)
    assert report.verdict == "likely_in"
    assert all(v == 1 for _, v in report.checkpoints)
    col = transform_seq(phi(), E)
    assert [col(i) for i in range(3)] == [F(1), F(0), F(0)]


def test_domain_membership_growing():
    linear = Seq(lambda k: F(k + 1))
    report = domain_membership(linear, cesaro(), SpaceId.BV, 16)
    assert report.verdict == "likely_out"


def test_classify_trend_edge_cases():
    assert classify_trend(F(0), F(0), F(0)) == "likely_in"
    assert classify_trend(F(1), F(1), F(1)) == "likely_in"
    assert classify_trend(F(1), F(3, 2), F(2)) == "likely_out"


def test_classical_dual_table():
    assert classical_dual(SpaceId.BV, "beta") == SpaceId.CS
    assert classical_dual(SpaceId.L1, "alpha") == SpaceId.LINF
    assert classical_dual(SpaceId.C0, "gamma") == SpaceId.L1
    assert classical_dual(SpaceId.CS, "beta") == SpaceId.BV
    assert classical_dual(SpaceId.BS, "beta") == SpaceId.BV0
    assert classical_dual(SpaceId.BV0, "beta") == SpaceId.BS
    assert classical_dual(SpaceId.BV, "gamma") == SpaceId.BS
    with pytest.raises(ValueError):
        classical_dual(SpaceId.BV, "delta")


def test_report_serialization_shape():
    d = membership(E, SpaceId.LINF, 16).to_dict()
    assert d["space"] == "linf"
    assert [c["index"] for c in d["checkpoints"]] == [4, 8, 16]
    assert "policy" in d and "note" in d["policy"]
