"""Fixed points of finite-order isometries, their local spin indices and the
character polynomial of the induced action on harmonic spinors.

Each isometry phi of M = Gamma\\H^n is given by a matrix f normalizing Gamma
and a lift f^ into the spin group.  A point of M fixed by phi^k comes from a
cell center x of the fundamental polytope with gamma f^k x = x for some
gamma in Gamma; the local data are the rotation angles of gamma f^k at x and
the trace of gamma^ f^k in the complex spin representation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .casestudies import CaseStudy, FundamentalPolytope, evaluate_word, inverse_word
from .hypgeom import NotIsolated, ProjectivePoint, coherent_angles, lorentz_product
from .matrices import identity, is_identity, mat_mul, mat_pow, mat_vec
from .numfield import (QQ, ComplexValue, RationalAngle, TowerElement, certify_sign,
                       root_of_unity, trig_value)
from .spinrep import complex_trace

__all__ = [
    "NonTermination", "NonIsolatedFixedPoint", "NonRealTrace", "AngleOutOfRange",
    "NotUnitSign", "NonIntegralCoefficient", "FixedPointRecord", "CharacterPoly",
    "IndexReport", "locate", "fixed_points", "local_trace", "nu", "epsilon",
    "spin_index", "spin_values", "character_poly", "dim_lower_bound", "index_report",
]


class NonTermination(RuntimeError):
    pass


class NonIsolatedFixedPoint(ValueError):
    pass


class NonRealTrace(ArithmeticError):
    pass


class AngleOutOfRange(ValueError):
    pass


class NotUnitSign(ArithmeticError):
    pass


class NonIntegralCoefficient(ArithmeticError):
    pass


@dataclass(frozen=True)
class FixedPointRecord:
    point: ProjectivePoint
    dim: int
    cycle: int
    gamma_word: tuple
    angles: tuple
    trace: TowerElement
    nu: ComplexValue
    label: str = ""


@dataclass(frozen=True)
class CharacterPoly:
    modulus: int
    coefficients: tuple

    def __call__(self, x):
        acc = None
        for j, c in enumerate(self.coefficients):
            if c:
                t = x ** j * c
                acc = t if acc is None else acc + t
        return acc if acc is not None else x * 0

    def value_at_one(self) -> int:
        return sum(self.coefficients)

    def __str__(self) -> str:
        terms = []
        for j, c in enumerate(self.coefficients):
            if not c:
                continue
            mono = "" if j == 0 else ("x" if j == 1 else f"x^{j}")
            mag = abs(c)
            body = (str(mag) if (mag != 1 or not mono) else "") + mono
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for s, b in terms[1:]:
            out += f" {s} {b}"
        return out


@dataclass
class IndexReport:
    case: str
    order: int
    spin_values: dict
    records: dict
    character: CharacterPoly | None = None
    bounds: dict | None = None
    extras: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Point location


def locate(y, P: FundamentalPolytope, budget: int = 10000) -> tuple[tuple, ProjectivePoint]:
    """Dirichlet reduction of y into P.

    Returns (word, y') with y' = evaluate(word) y.  Each step moves y out of
    the neighbor cell g_i P it lies nearest to, by applying g_i^-1; ties go
    to the lowest side index.
    """
    if isinstance(y, ProjectivePoint):
        coords = y.coords
    else:
        coords = tuple(y)
    e = P.center.coords
    centers = [s.center for s in P.sides]
    fcent = [tuple(float(x) for x in a) for a in centers]
    word: tuple = ()
    for _ in range(budget):
        fy = tuple(float(x) for x in coords)
        norm = max(abs(v) for v in fy) or 1.0
        fe = _fdot(fy, tuple(float(x) for x in e))
        ye = lorentz_product(coords, e)
        best = None
        best_gap = None
        for i, fa in enumerate(fcent):
            gap = _fdot(fy, fa) - fe
            if gap < -1e-9 * norm * (abs(fa[-1]) + 1):
                continue
            d = lorentz_product(coords, centers[i]) - ye
            if certify_sign(d) <= 0:
                continue
            if best is None or gap > best_gap + 1e-12 * norm:
                best, best_gap = i + 1, gap
            elif abs(gap - best_gap) <= 1e-12 * norm:
                # too close to call in floats: settle exactly
                prev = lorentz_product(coords, centers[best - 1]) - ye
                if certify_sign(d - prev) > 0:
                    best, best_gap = i + 1, gap
        if best is None:
            return word, ProjectivePoint(coords, check=False)
        h = P.opp(best)
        coords = mat_vec(P.pairing(h), coords)
        word = (h,) + word
    raise NonTermination(f"no reduction into P within {budget} steps")


def _fdot(x, y) -> float:
    return sum(a * b for a, b in zip(x[:-1], y[:-1])) - x[-1] * y[-1]


# ---------------------------------------------------------------------------
# Local data


def local_trace(g) -> TowerElement:
    """Real trace of a spin element in the complex spin representation."""
    t = complex_trace(g)
    if not t.im.is_zero():
        raise NonRealTrace(f"trace {t.canonical()} is not real")
    return t.re.minimal()


def nu(trace, angles: Sequence[RationalAngle], m: int) -> ComplexValue:
    """i^m 2^-m tr prod csc(theta_k)."""
    if len(angles) != m:
        raise ValueError(f"expected {m} angles, got {len(angles)}")
    if not isinstance(trace, TowerElement):
        trace = QQ(trace)
    acc = trace / (2 ** m)
    for a in angles:
        if a.p == 0 or 2 * a.p == a.q:
            raise AngleOutOfRange(f"angle {a.pi_string()} is outside 0 < |theta| < pi")
        acc = acc * trig_value(a, "csc")
    acc = acc.minimal()
    z = acc.spec.zero()
    # i^m
    r = m % 4
    if r == 0:
        return ComplexValue(acc, z)
    if r == 1:
        return ComplexValue(z, acc)
    if r == 2:
        return ComplexValue(-acc, z)
    return ComplexValue(z, -acc)


def epsilon(trace, angles: Sequence[RationalAngle]) -> int:
    """tr / prod 2 cos(theta_k / 2), which must be exactly +1 or -1."""
    if not isinstance(trace, TowerElement):
        trace = QQ(trace)
    den = None
    for a in angles:
        c = trig_value(a, "cos_half") * 2
        den = c if den is None else den * c
    if den is None or den.is_zero():
        raise NotUnitSign("a half-angle cosine vanishes")
    q = trace / den
    if q == 1:
        return 1
    if q == -1:
        return -1
    raise NotUnitSign(f"trace / prod 2cos(theta/2) = {q.canonical()}")


# ---------------------------------------------------------------------------
# Fixed points


def _power_order(N: int, k: int) -> int:
    return N // math.gcd(N, k)


def fixed_points(f, f_hat, k: int, P: FundamentalPolytope, lifts=None, order: int | None = None,
                 labels: Mapping | None = None) -> list[FixedPointRecord]:
    """Fixed points of the isometry induced by f^k, one record per point of M.

    Every cycle of cell centers is tested: a representative c is mapped by
    f^k, located in P and compared with the members of its cycle.  Candidate
    points outside the cell centers are not searched.
    """
    lifts = lifts if lifts is not None else [s.lift for s in P.sides]
    n = P.n
    m = n // 2
    fk = mat_pow(f, k)
    if is_identity(fk):
        raise ValueError("f^k is the identity; its fixed set is all of M")
    fk_hat = f_hat ** k
    N = _power_order(order, k) if order else None
    one = identity(n + 1, fk[0][0].spec)
    records = []
    for d in sorted(P.cycles):
        for ci, cyc in enumerate(P.cycles[d]):
            rep = cyc.representative
            c = P.cells[d][rep]
            y = mat_vec(fk, c.coords)
            w, y2 = locate(y, P)
            j = P.locate_cell(d, y2)
            if j is None:
                raise ValueError(f"image of a {d}-cell center is not a {d}-cell center")
            if j not in cyc.transport:
                continue
            gword = inverse_word(cyc.transport[j], P.opp) + w
            gamma = evaluate_word(gword, P.pairings(), one)
            A = mat_mul(gamma, fk)
            if not ProjectivePoint(mat_vec(A, c.coords), check=False) == c:
                raise RuntimeError("stabilizing word does not fix the cell center")
            if N is None:
                raise ValueError("the order of f is needed for the angles")
            try:
                angles = coherent_angles(A, c, N)
            except NotIsolated as exc:
                raise NonIsolatedFixedPoint(str(exc)) from None
            ghat = evaluate_word(gword, lifts, type(f_hat).identity()) if gword else type(f_hat).identity()
            tr = local_trace(ghat * fk_hat)
            value = nu(tr, angles, m)
            label = (labels or {}).get((d, ci), "")
            records.append(FixedPointRecord(c, d, ci, gword, angles, tr, value, label))
    return records


def default_labels(case: CaseStudy) -> dict:
    """Names for the fixed-point cycles: C for the center, A (and B) for vertex cycles."""
    P = case.polytope
    out = {(P.n, 0): "C"}
    if case.name == "decagon":
        for i, _ in enumerate(P.cycles[0]):
            out[(0, i)] = "AB"[i] if i < 2 else f"V{i}"
    else:
        out[(0, 0)] = "A"
        for i, _ in enumerate(P.cycles.get(2, ())):
            out[(2, i)] = "B"
    return out


def spin_index(case: CaseStudy, k: int, records: list | None = None) -> ComplexValue:
    """Spin(phi^k, M): the sum of nu over the fixed points, 0 for the identity power."""
    if k % case.order == 0:
        return ComplexValue(QQ.zero(), QQ.zero())
    if records is None:
        records = fixed_points(case.f, case.f_hat, k, case.polytope, case.lifts.lifts, case.order)
    acc = ComplexValue(QQ.zero(), QQ.zero())
    for r in records:
        acc = acc + r.nu
    return ComplexValue(acc.re.minimal(), acc.im.minimal()) if acc.re.spec is acc.im.spec else acc


def spin_values(case: CaseStudy, powers: Sequence[int] | None = None) -> tuple[dict, dict]:
    """Spin values and fixed-point records for the requested powers (default all)."""
    powers = list(powers) if powers is not None else list(range(1, case.order + 1))
    labels = default_labels(case)
    vals, recs = {}, {}
    for k in powers:
        if k % case.order == 0:
            vals[k] = spin_index(case, k)
            recs[k] = []
            continue
        r = fixed_points(case.f, case.f_hat, k, case.polytope, case.lifts.lifts, case.order, labels)
        recs[k] = r
        vals[k] = spin_index(case, k, r)
    return vals, recs


# ---------------------------------------------------------------------------
# Characters


def character_poly(values: Mapping[int, ComplexValue], N: int) -> CharacterPoly:
    """Integer p with p(exp(2 pi i k/N)) = values[k], by exact Fourier inversion."""
    missing = [k for k in range(1, N + 1) if k not in values]
    if missing:
        raise ValueError(f"values missing for k = {missing}")
    coeffs = []
    for j in range(N):
        acc = ComplexValue(QQ.zero(), QQ.zero())
        for k in range(1, N + 1):
            v = values[k]
            if not isinstance(v, ComplexValue):
                v = ComplexValue._lift(v)
            if v.is_zero():
                continue
            acc = acc + v * root_of_unity(RationalAngle(-j * k, N))
        re, im = (acc.re / N).minimal(), (acc.im / N).minimal()
        if not im.is_zero() or not re.is_rational():
            raise NonIntegralCoefficient(f"c_{j} = {re.canonical()} + i·{im.canonical()} is not rational")
        q = re.rational_value()
        if q.denominator != 1:
            raise NonIntegralCoefficient(f"c_{j} = {q} is not an integer")
        coeffs.append(int(q))
    return CharacterPoly(N, tuple(coeffs))


def dim_lower_bound(p: CharacterPoly) -> dict:
    """Each positive coefficient c_j forces c_j copies of the j-th character in H+."""
    per = sum(max(c, 0) for c in p.coefficients)
    return {"per_chirality": per, "total": 2 * per}


def index_report(case: CaseStudy, powers: Sequence[int] | None = None) -> IndexReport:
    vals, recs = spin_values(case, powers)
    report = IndexReport(case.name, case.order, vals, recs)
    if set(range(1, case.order + 1)) <= set(vals):
        report.character = character_poly(vals, case.order)
        report.bounds = dim_lower_bound(report.character)
    return report
