import pytest

from spinindex.casestudies import (ClosureBudgetExceeded, canonical_relator, davis_isometry,
                                   davis_pairing, davis_simplex_data, evaluate_word, inverse_word,
                                   normalizer_check, point_orbit, sign_flip_breaks,
                                   sym_group_closure, verify_presentation)
from spinindex.hypgeom import ProjectivePoint, reflection_from_normal
from spinindex.matrices import identity, is_identity, mat_mul, transpose
from spinindex.numfield import QQ
from spinindex.spinrep import SpinElement4, eta2, eta4, is_lorentz_matrix, su11_membership


def _tau_kappa():
    d = davis_simplex_data()
    return d["tau"], d["kappa"], d["spec"]


def test_simplex_constants():
    t, k, D = _tau_kappa()
    d = davis_simplex_data()
    assert d["s"][4] == (1 + t, D(0), D(0), D(0), k)
    assert d["v"][1] == ((1 + t) * k, k, D(0), D(0), 2 + 3 * t)


def test_words():
    opp = lambda i: 11 - i
    assert inverse_word((1, 2, 3), opp) == (8, 9, 10)
    assert canonical_relator((3, 1, 2), opp) == (1, 2, 3)
    mats = [((QQ(2),),), ((QQ(3),),)]
    assert evaluate_word((1, 2, 2), mats) == ((QQ(18),),)
    with pytest.raises(ValueError):
        evaluate_word((), mats)


def test_closure_small_cases():
    assert len(sym_group_closure([identity(5)])) == 1
    d = davis_simplex_data()
    rho = [reflection_from_normal(s) for s in d["s"][:4]]
    with pytest.raises(ClosureBudgetExceeded):
        sym_group_closure(rho, budget=100)


def test_even_closure_has_index_two(davis):
    d = davis_simplex_data()
    rho = [reflection_from_normal(s) for s in d["s"][:4]]
    even = [mat_mul(rho[0], rho[1]), mat_mul(rho[1], rho[2]), mat_mul(rho[2], rho[3])]
    probe = davis.polytope.cells[3]
    assert len(sym_group_closure(even, probe=probe)) == 7200


def test_davis_polytope(davis):
    P = davis.polytope
    t, k, D = _tau_kappa()
    assert len(P.sides) == 120
    assert all(s.center[4] == 3 + 6 * t for s in P.sides)
    assert P.sides[0].center[:4] == ((2 + 2 * t) * k, D(0), D(0), D(0))
    for i in range(1, 121):
        a, b = P.sides[i - 1].center, P.sides[P.opp(i) - 1].center
        assert tuple(-x for x in a[:4]) == b[:4]
        assert is_identity(mat_mul(P.pairing(i), P.pairing(P.opp(i))))
    assert {d: len(P.cells[d]) for d in range(4)} == {0: 600, 1: 1200, 2: 720, 3: 120}
    sizes = {d: sorted({len(c) for c in P.cycles[d]}) for d in P.cycles}
    counts = {d: len(P.cycles[d]) for d in P.cycles}
    assert sizes == {0: [600], 1: [20], 2: [5], 3: [2], 4: [1]}
    assert counts == {0: 1, 1: 60, 2: 144, 3: 60, 4: 1}


def test_pairings_symmetric_lorentz(davis):
    for s in davis.polytope.sides:
        assert transpose(s.pairing) == s.pairing
        assert is_lorentz_matrix(s.pairing)


def test_davis_g1_is_eta_of_printed_lift(davis):
    t, k, _ = _tau_kappa()
    g1h = SpinElement4([[-1 - t, k], [k, -1 - t]])
    assert davis.lifts[1] == g1h
    assert eta4(g1h) == davis.polytope.pairing(1)


def test_davis_pairing_formula():
    t, k, D = _tau_kappa()
    a = ((2 + 2 * t) * k, D(0), D(0), D(0), 3 + 6 * t)
    assert is_lorentz_matrix(davis_pairing(a))


def test_davis_presentation(davis):
    pres = davis.presentation
    assert pres.generator_count == 60
    lengths = [len(w) for w in pres.relators]
    assert lengths.count(2) == 60 and lengths.count(5) == 144 and len(lengths) == 204
    signed = pres.signed_relators()
    assert all(abs(x) <= 60 for w in signed for x in w)


def test_ridge_relators_are_identities(davis):
    rep = verify_presentation(davis.polytope.pairings(), davis.presentation.relators[60:])
    assert rep["lorentz_pass"] == 144


def test_lifts_and_spin_relators(davis):
    P = davis.polytope
    for s, l in zip(P.sides, davis.lifts.lifts):
        assert su11_membership(l)
        assert eta4(l) == s.pairing
    rep = verify_presentation(None, davis.presentation.relators, davis.lifts.lifts)
    assert rep["spin_pass"] == 204
    assert rep["ok"]


def test_negating_g1_breaks_a_relator(davis):
    P = davis.polytope
    lifts = list(davis.lifts.lifts)
    lifts[0] = -lifts[0]
    lifts[P.opp(1) - 1] = -lifts[P.opp(1) - 1]
    rep = verify_presentation(None, davis.presentation.relators, lifts)
    assert -1 in rep["signs"] and not rep["ok"]
    breaks = sign_flip_breaks(davis.presentation, (1,) * 204)
    assert all(breaks[g] for g in breaks)


def test_empty_relator_list_passes():
    rep = verify_presentation([], [], [])
    assert rep["ok"] and rep["relators"] == 0


def test_davis_normalizer(davis):
    perm, signs = normalizer_check(davis.f, davis.f_hat, davis.polytope)
    assert sorted(perm.values()) == list(range(1, 121))
    assert set(signs.values()) == {1}


def test_identity_normalizes(davis):
    f = identity(5, davis.f[0][0].spec)
    perm, signs = normalizer_check(f, SpinElement4.identity(), davis.polytope)
    assert all(perm[i] == i for i in perm) and set(signs.values()) == {1}


def test_f_hat_covers_f():
    f, fh = davis_isometry()
    assert eta4(fh) == f
    assert is_identity(mat_mul(f, f)) is False


# --- decagon --------------------------------------------------------------

def test_decagon_relators(decagon):
    P = decagon.polytope
    gens = P.pairings()
    printed = decagon.extras["printed_vertex_relators"]
    rep = verify_presentation(gens, printed, decagon.lifts.lifts)
    assert rep["lorentz_pass"] == 2 and rep["spin_pass"] == 2
    derived = {canonical_relator(w, P.opp) for w in decagon.presentation.relators[5:]}
    assert derived == {canonical_relator(w, P.opp) for w in printed}
    pairs = decagon.presentation.relators[:5]
    assert pairs == ((1, 6), (2, 7), (3, 8), (4, 9), (5, 10))
    full = verify_presentation(gens, decagon.presentation.relators, decagon.lifts.lifts)
    assert full["ok"]


def test_decagon_lift_and_eta(decagon):
    P = decagon.polytope
    g1 = P.pairing(1)
    s5 = g1[1][1].spec.gen(0)
    assert g1[1][1] == 6 + 3 * s5 and g1[2][2] == 6 + 3 * s5
    assert g1[1][2] * g1[1][2] == 4 * (20 + 9 * s5)
    assert all(eta2(l) == s.pairing for l, s in zip(decagon.lifts.lifts, P.sides))
    assert eta2(decagon.f_hat) == decagon.f


def test_decagon_vertex_and_cycles(decagon):
    P = decagon.polytope
    v0 = P.cells[0][0].coords
    assert (v0[0] * v0[0]) == 4 * (2 + v0[0].spec.gen(0))
    assert [len(c) for c in P.cycles[0]] == [5, 5]


def test_decagon_normalizer(decagon):
    _, signs = normalizer_check(decagon.f, decagon.f_hat, decagon.polytope)
    assert set(signs.values()) == {1}


def test_point_orbit_of_center(davis):
    d = davis_simplex_data()
    rho = [reflection_from_normal(s) for s in d["s"][:4]]
    assert len(point_orbit(ProjectivePoint(d["v"][4]), rho)) == 1
