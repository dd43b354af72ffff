import pytest

from spinindex.casestudies import davis_isometry, davis_simplex_data
from spinindex.hypgeom import (AngleMatchFailure, NotElliptic, NotFiniteOrder, NotSpacelike,
                               ProjectivePoint, causal_type, coherent_angles, elliptic_data,
                               elliptic_fixed_point, lorentz_product, reflection_from_normal,
                               rotation_sine_sign)
from spinindex.matrices import identity, is_identity, mat_mul, mat_pow
from spinindex.numfield import QQ, RationalAngle
from spinindex.spinrep import is_lorentz_matrix


def ang(*pairs):
    return tuple(RationalAngle(p, q) for p, q in pairs)


def test_lorentz_product_and_types():
    assert lorentz_product((1, 2, 3), (1, 1, 1)) == 0
    assert causal_type((0, 0, 1)) == "timelike"
    assert causal_type((1, 0, 0)) == "spacelike"
    assert causal_type((1, 0, 1)) == "lightlike"


def test_projective_point_key_is_scale_free():
    a = ProjectivePoint((QQ(1), QQ(0), QQ(3)))
    b = ProjectivePoint((QQ(2), QQ(0), QQ(6)))
    assert a == b and a.key() == b.key()
    with pytest.raises(ValueError):
        ProjectivePoint((QQ(2), QQ(0), QQ(1)))


def test_reflection():
    R = reflection_from_normal((1, 0, 0))
    assert is_identity(mat_mul(R, R))
    with pytest.raises(NotSpacelike):
        reflection_from_normal((0, 0, 1))


def test_simplex_incidences():
    d = davis_simplex_data()
    v, s = d["v"], d["s"]
    assert v[4] == tuple(d["spec"](x) for x in (0, 0, 0, 0, 1))
    for i in range(5):
        for j in range(5):
            if i != j:
                assert lorentz_product(v[i], s[j]).is_zero(), (i, j)
    assert not lorentz_product(v[1], s[1]).is_zero()


def test_order15_angles_at_center():
    f, _ = davis_isometry()
    assert is_lorentz_matrix(f)
    x = elliptic_fixed_point(f)
    assert x.key() == ProjectivePoint((0, 0, 0, 0, 1)).key()
    assert coherent_angles(f, x, 15) == ang((-4, 15), (1, 15))
    assert coherent_angles(mat_pow(f, 3), x, 5) == ang((1, 5), (1, 5))
    assert coherent_angles(mat_pow(f, 5), x, 3) == ang((-1, 3), (1, 3))


def test_pfaffian_magnitude_identity():
    f, _ = davis_isometry()
    x = (0, 0, 0, 0, 1)
    s, pf, gram = rotation_sine_sign(f, x)
    assert s in (1, -1) and not pf.is_zero() and not gram.is_zero()


def test_wrong_order_rejected():
    f, _ = davis_isometry()
    with pytest.raises(NotFiniteOrder):
        coherent_angles(f, (0, 0, 0, 0, 1), 7)


def test_identity_has_no_isolated_fixed_point():
    with pytest.raises(NotElliptic):
        elliptic_fixed_point(identity(3))


def test_elliptic_data_checks_point():
    f, _ = davis_isometry()
    with pytest.raises(NotElliptic):
        elliptic_data(f, 15, ProjectivePoint(davis_simplex_data()["v"][0]))
