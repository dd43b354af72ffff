import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinindex.casestudies import evaluate_word
from spinindex.hypgeom import ProjectivePoint
from spinindex.indexengine import (AngleOutOfRange, CharacterPoly, NonIntegralCoefficient,
                                   NonTermination, NotUnitSign, character_poly, dim_lower_bound,
                                   epsilon, fixed_points, local_trace, locate, nu)
from spinindex.matrices import identity, mat_mul, mat_pow, mat_vec
from spinindex.numfield import (QQ, ComplexValue, RationalAngle, certify_sign, golden_tower,
                                rational, root_of_unity, sqrt_or_extend, trig_value)

G = golden_tower()
S5 = G.gen(0)
TAU = (S5 + 1) / 2
DAVIS_P = (0, -2, 2, 1, -2, 0, -1, 2, 2, -1, 0, -2, 1, 2, -2)


def A(p, q):
    return RationalAngle(p, q)


# --- locate ---------------------------------------------------------------

def test_locate_center_and_neighbor(davis):
    P = davis.polytope
    e = P.center
    assert locate(e, P) == ((), e)
    word, y = locate(ProjectivePoint(mat_vec(P.pairing(1), e.coords)), P)
    assert word == (P.opp(1),) and y == e


def test_locate_far_point(davis):
    P = davis.polytope
    x = P.cells[3][5]
    w = (3, 77, 15, 101)
    y = mat_vec(evaluate_word(w, P.pairings()), x.coords)
    word, y2 = locate(y, P)
    assert ProjectivePoint(mat_vec(evaluate_word(word, P.pairings()), y), check=False) == y2
    assert P.locate_cell(3, y2) is not None
    with pytest.raises(NonTermination):
        locate(y, P, budget=1)


# --- local quantities -------------------------------------------------------

def test_local_trace_examples(davis, decagon):
    D = davis.f_hat
    assert local_trace(D) == -1 - TAU
    assert local_trace(decagon.f_hat) == -(1 + S5) / 2


def test_nu_examples():
    assert nu(-1 - TAU, (A(-4, 15), A(1, 15)), 2) == ComplexValue(-TAU)
    assert nu(2 - TAU, (A(-2, 5), A(2, 5)), 2) == ComplexValue(rational(3, 5) - TAU / 5)
    v = nu(-(1 + S5) / 2, (A(1, 5),), 1)
    target = sqrt_or_extend(v.spec((5 + v.spec(S5)) / 10))
    assert v == ComplexValue(0, -target)


def test_nu_rejects_half_turn():
    with pytest.raises(AngleOutOfRange):
        nu(QQ(1), (A(1, 2),), 1)
    with pytest.raises(AngleOutOfRange):
        nu(QQ(1), (A(0, 1), A(1, 3)), 2)


def test_epsilon_examples():
    th = A(1, 3)
    assert epsilon(trig_value(th, "cos_half") * 2, (th,)) == 1
    with pytest.raises(NotUnitSign):
        epsilon(QQ(3), (th,))
    assert epsilon(-1 - TAU, (A(-4, 15), A(1, 15))) in (1, -1)


# --- fixed points -----------------------------------------------------------

def test_fixed_point_counts(davis_report):
    counts = {k: len(davis_report.records[k]) for k in (1, 3, 5)}
    assert counts == {1: 2, 3: 26, 5: 2}
    labels = sorted(r.label for r in davis_report.records[1])
    assert labels == ["A", "C"]
    assert sorted(r.label for r in davis_report.records[3]).count("B") == 24


def test_order15_records(davis_report):
    recs = {r.label: r for r in davis_report.records[1]}
    assert recs["C"].angles == (A(-4, 15), A(1, 15))
    assert recs["A"].angles == (A(-7, 15), A(2, 15))
    assert recs["C"].trace == -1 - TAU and recs["A"].trace == -2 + TAU
    assert recs["C"].nu == ComplexValue(-TAU) and recs["A"].nu == ComplexValue(1 - TAU)


def test_order5_records(davis_report):
    for r in davis_report.records[3]:
        if r.label == "B":
            assert r.trace == -1
            assert r.nu == ComplexValue(rational(1, 5) - 2 * TAU / 5)
        elif r.label == "A":
            assert r.nu == ComplexValue(rational(3, 5) - TAU / 5)
            assert r.angles == (A(-2, 5), A(2, 5))
        else:
            assert r.nu == ComplexValue(rational(-2, 5) - TAU / 5)


def test_stabilizing_words_fix_points(davis, davis_report):
    P = davis.polytope
    for k in (1, 3, 5):
        fk = mat_pow(davis.f, k)
        for r in davis_report.records[k]:
            g = evaluate_word(r.gamma_word, P.pairings(), identity(5, fk[0][0].spec))
            assert ProjectivePoint(mat_vec(mat_mul(g, fk), r.point.coords), check=False) == r.point


def test_trace_invariant_under_relator_insertion(davis, davis_report):
    P = davis.polytope
    rel = davis.presentation.relators[100]
    for r in davis_report.records[3][:4]:
        w = r.gamma_word
        w2 = w[:1] + rel + w[1:]
        g1 = evaluate_word(w, davis.lifts.lifts, type(davis.f_hat).identity()) if w else type(davis.f_hat).identity()
        g2 = evaluate_word(w2, davis.lifts.lifts)
        fk = davis.f_hat ** 3
        assert local_trace(g1 * fk) == local_trace(g2 * fk) == r.trace


def test_trace_identity_on_all_records(davis_report, decagon_report):
    for rep in (davis_report, decagon_report):
        for recs in rep.records.values():
            for r in recs:
                prod = None
                for a in r.angles:
                    c = trig_value(a, "cos_half") * 2
                    prod = c if prod is None else prod * c
                assert abs(r.trace) == abs(prod)
                assert epsilon(r.trace, r.angles) in (1, -1)


def test_nu_double_flip_invariance(davis_report):
    for recs in davis_report.records.values():
        for r in recs:
            flipped = tuple(-a for a in r.angles)
            assert nu(r.trace, flipped, 2) == r.nu


def test_identity_power_rejected_in_fixed_points(davis):
    with pytest.raises(ValueError):
        fixed_points(davis.f, davis.f_hat, 15, davis.polytope, order=15)


# --- spin values and characters ---------------------------------------------

def test_davis_spin_values(davis_report):
    v = davis_report.spin_values
    assert v[1] == ComplexValue(1 - 2 * TAU) == ComplexValue(-S5)
    assert v[3] == ComplexValue(5 - 10 * TAU)
    assert v[5] == ComplexValue(0) and v[15] == ComplexValue(0)
    allowed = [ComplexValue(x) for x in (0, S5, -S5, 5 * S5, -5 * S5)]
    assert all(any(val == a for a in allowed) for val in v.values())


def test_conjugate_power_symmetry(davis_report, decagon_report):
    for rep in (davis_report, decagon_report):
        N = rep.order
        for k in range(1, N):
            assert rep.spin_values[k] == rep.spin_values[N - k].conj()


def test_davis_character_polynomial(davis_report):
    p = davis_report.character
    assert p.coefficients == DAVIS_P
    assert p.value_at_one() == 0
    assert dim_lower_bound(p) == {"per_chirality": 10, "total": 20}


def test_decagon_values(decagon_report):
    recs = {r.label: r for r in decagon_report.records[1]}
    assert set(recs) == {"A", "B", "C"}
    assert recs["A"].trace == -(1 - S5) / 2
    s = decagon_report.spin_values[1]
    assert s == root_of_unity(A(-1, 5)) - root_of_unity(A(1, 5))
    target = sqrt_or_extend(s.spec((5 + s.spec(S5)) / 2))
    assert s == ComplexValue(0, -target)
    vA = recs["A"].nu
    assert vA == recs["B"].nu
    assert vA.im * vA.im == (5 - S5) / 10 and certify_sign(vA.im) < 0


def test_character_poly_trivial():
    zero = {k: ComplexValue(0) for k in range(1, 16)}
    p = character_poly(zero, 15)
    assert p.coefficients == (0,) * 15 and dim_lower_bound(p) == {"per_chirality": 0, "total": 0}
    assert dim_lower_bound(CharacterPoly(3, (0, 1, -1))) == {"per_chirality": 1, "total": 2}


def test_character_poly_rejects_non_integral():
    vals = {k: ComplexValue(0) for k in range(1, 6)}
    vals[1] = ComplexValue(1)
    with pytest.raises(NonIntegralCoefficient):
        character_poly(vals, 5)


def test_character_poly_needs_all_values():
    with pytest.raises(ValueError):
        character_poly({1: ComplexValue(0)}, 5)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([3, 5, 15]).flatmap(
    lambda N: st.lists(st.integers(-3, 3), min_size=N, max_size=N)))
def test_character_round_trip(coeffs):
    N = len(coeffs)
    p = CharacterPoly(N, tuple(coeffs))
    values = {k: p(root_of_unity(A(k, N))) for k in range(1, N + 1)}
    assert character_poly(values, N).coefficients == tuple(coeffs)


def test_character_poly_string():
    assert str(CharacterPoly(5, (0, -1, 0, 0, 1))) == "-x + x^4"
