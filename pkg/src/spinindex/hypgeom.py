"""Hyperboloid-model geometry: Lorentz form, reflections, projective points
and the rotation angles of elliptic isometries.

Points of H^n are kept unnormalized: a timelike vector with positive last
coordinate stands for its ray.  Nothing downstream needs x o x = -1, and
normalizing would leave the tower.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .matrices import det, identity, mat_mul, mat_sub, mat_vec, nullspace, pfaffian, trace
from .numfield import (QQ, RationalAngle, TowerElement, certify_sign, common, merge_specs,
                       trig_value)

__all__ = [
    "DimensionMismatch", "NotSpacelike", "NotElliptic", "NotIsolated",
    "NotFiniteOrder", "AngleMatchFailure", "lorentz_product", "causal_type",
    "ProjectivePoint", "reflection_from_normal", "elliptic_fixed_point",
    "coherent_angles", "EllipticData", "elliptic_data", "tangent_frame",
    "rotation_sine_sign",
]


class DimensionMismatch(ValueError):
    pass


class NotSpacelike(ValueError):
    pass


class NotElliptic(ValueError):
    pass


class NotIsolated(NotElliptic):
    pass


class NotFiniteOrder(ValueError):
    pass


class AngleMatchFailure(ValueError):
    pass


def _spec(xs):
    spec = QQ
    for x in xs:
        if isinstance(x, TowerElement) and x.spec is not spec:
            spec = merge_specs(spec, x.spec)
    return spec


def lorentz_product(x: Sequence, y: Sequence) -> TowerElement:
    """x o y = x_1 y_1 + ... + x_n y_n - x_{n+1} y_{n+1}."""
    if len(x) != len(y):
        raise DimensionMismatch(f"{len(x)} vs {len(y)}")
    acc = None
    last = len(x) - 1
    for i, (a, b) in enumerate(zip(x, y)):
        if isinstance(a, TowerElement) and a.is_zero():
            continue
        if isinstance(b, TowerElement) and b.is_zero():
            continue
        t = a * b
        if i == last:
            t = -t
        acc = t if acc is None else acc + t
    if acc is None:
        return _spec(list(x) + list(y)).zero()
    if not isinstance(acc, TowerElement):
        acc = QQ(acc)
    return acc


def causal_type(x: Sequence) -> str:
    s = certify_sign(lorentz_product(x, x))
    return {1: "spacelike", -1: "timelike", 0: "lightlike"}[s]


class ProjectivePoint:
    """A point of H^n given by a timelike vector with positive last coordinate."""

    __slots__ = ("coords", "_key")

    def __init__(self, coords: Sequence, check: bool = True):
        spec = _spec(coords)
        c = tuple(spec(x) for x in coords)
        if check:
            if certify_sign(lorentz_product(c, c)) >= 0:
                raise ValueError("point is not timelike")
            if certify_sign(c[-1]) <= 0:
                raise ValueError("point must have positive last coordinate")
        self.coords = c
        self._key = None

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    def key(self) -> tuple:
        """Exact canonical key: coordinates divided by the last one."""
        if self._key is None:
            inv = self.coords[-1].inverse()
            self._key = tuple((x * inv).minimal().coeffs for x in self.coords[:-1])
        return self._key

    def klein(self) -> tuple:
        inv = self.coords[-1].inverse()
        return tuple(x * inv for x in self.coords[:-1])

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        a, b = self.coords, other.coords
        if len(a) != len(b):
            return False
        return all(x * b[-1] == y * a[-1] for x, y in zip(a, b))

    def __hash__(self):
        return hash(self.key())

    def apply(self, A) -> "ProjectivePoint":
        return ProjectivePoint(mat_vec(A, self.coords), check=False)

    def approx(self) -> tuple:
        return tuple(float(x) for x in self.coords)

    def __repr__(self) -> str:
        return "ProjectivePoint(" + ", ".join(x.canonical(paren=False) for x in self.coords) + ")"


def reflection_from_normal(s: Sequence) -> tuple:
    """Matrix of x -> x - 2 (x o s)/(s o s) s."""
    ss = lorentz_product(s, s)
    if certify_sign(ss) <= 0:
        raise NotSpacelike("reflection normal must be spacelike")
    spec = merge_specs(ss.spec, _spec(s))
    s = tuple(spec(x) for x in s)
    n = len(s)
    f = ss.inverse() * 2
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            # (x o s) = sum_j x_j s_j eps_j, eps = +1 except the last coordinate
            sj = s[j] if j < n - 1 else -s[j]
            v = -(f * s[i] * sj)
            if i == j:
                v = v + 1
            row.append(v)
        rows.append(tuple(row))
    return tuple(rows)


def elliptic_fixed_point(A) -> ProjectivePoint:
    """The unique point of H^n fixed by A."""
    n = len(A)
    spec = _spec([x for r in A for x in r])
    K = nullspace(mat_sub(A, identity(n, spec)))
    if not K:
        raise NotElliptic("no fixed vector")
    if len(K) > 1:
        raise NotIsolated("fixed space has dimension > 1")
    v = K[0]
    if certify_sign(lorentz_product(v, v)) >= 0:
        raise NotElliptic("fixed vector is not timelike")
    if certify_sign(v[-1]) < 0:
        v = tuple(-x for x in v)
    return ProjectivePoint(v)


def tangent_frame(x: Sequence) -> list[tuple]:
    """A tower-rational basis of x^perp: standard vectors projected along x.

    The coordinate with the largest |x_i| is dropped, the remaining ones
    give a basis of the orthogonal complement.
    """
    n1 = len(x)
    xx = lorentz_product(x, x)
    inv = xx.inverse()
    mags = [abs(float(c)) for c in x]
    drop = max(range(n1), key=lambda i: (mags[i], i))
    spec = merge_specs(_spec(x), xx.spec)
    x = tuple(spec(c) for c in x)
    frame = []
    for i in range(n1):
        if i == drop:
            continue
        e = [spec.zero()] * n1
        e[i] = spec.one()
        coef = lorentz_product(e, x) * inv
        frame.append(tuple(ei - coef * xi for ei, xi in zip(e, x)))
    gram = tuple(tuple(lorentz_product(u, v) for v in frame) for u in frame)
    if det(gram).is_zero():
        raise RuntimeError("degenerate tangent frame")
    return frame


def rotation_sine_sign(A, x: Sequence) -> tuple[int, TowerElement, TowerElement]:
    """Sign of prod sin(theta_k) for A fixing x, read in a frame oriented with x.

    Returns (sign, pf, gram_det) where pf is the Pfaffian of the rotation
    form w(u, v) = ((Au) o v - u o (Av))/2 on the tangent frame and gram_det
    the Gram determinant of that frame; pf**2 = gram_det * prod sin**2.
    """
    if isinstance(x, ProjectivePoint):
        x = x.coords
    spec = _spec(list(x) + [c for r in A for c in r])
    x = tuple(spec(c) for c in x)
    frame = tangent_frame(x)
    orient = certify_sign(det(tuple(zip(*(frame + [tuple(x)])))))
    images = [mat_vec(A, u) for u in frame]
    m = len(frame)
    w = [[None] * m for _ in range(m)]
    for a in range(m):
        for b in range(m):
            w[a][b] = (lorentz_product(images[a], frame[b]) - lorentz_product(frame[a], images[b])) / 2
    pf = pfaffian(w)
    gram = tuple(tuple(lorentz_product(u, v) for v in frame) for u in frame)
    s = certify_sign(pf) * orient
    if s == 0:
        raise NotIsolated("rotation has a vanishing angle or an angle pi")
    return s, pf, det(gram)


def _char_data(A):
    """(trace, second elementary symmetric function) of A."""
    t = trace(A)
    t2 = trace(mat_mul(A, A))
    return t, (t * t - t2) / 2


def coherent_angles(A, x, order: int) -> tuple[RationalAngle, ...]:
    """Coherent rotation angles of the elliptic isometry A at its fixed point x.

    Cosines come exactly from the characteristic polynomial and are matched
    against cos(2 pi p/N); the sign of prod sin(theta_k) comes from the
    orientation-corrected Pfaffian.  Angles are returned in decreasing order
    of size, with the largest carrying the sign when a flip is needed.
    """
    if isinstance(x, ProjectivePoint):
        x = x.coords
    n1 = len(A)
    n = n1 - 1
    if n not in (2, 4):
        raise DimensionMismatch("angles are implemented for H^2 and H^4")
    m = n // 2
    N = order
    if N <= 1:
        raise NotFiniteOrder("order must be at least 2")
    from .matrices import is_identity, mat_pow
    if not is_identity(mat_pow(A, N)):
        raise NotFiniteOrder(f"A**{N} is not the identity")
    tr, e2 = _char_data(A)
    # tangent spectrum: drop the eigenvalue 1 at x
    tt = tr - 1
    et = e2 - tt
    if m == 1:
        targets = [tt / 2]
    else:
        ssum = tt / 2
        prod = (et - 2) / 4
        fs, fp = float(ssum), float(prod)
        disc = max(fs * fs - 4 * fp, 0.0)
        r = disc ** 0.5
        targets = [(fs + r) / 2, (fs - r) / 2]
    cand = []
    import math
    for tv in (targets if m == 2 else [float(targets[0])]):
        best = min(range(0, N // 2 + 1), key=lambda p: abs(math.cos(2 * math.pi * p / N) - float(tv)))
        if abs(math.cos(2 * math.pi * best / N) - float(tv)) > 1e-6:
            raise AngleMatchFailure(f"cosine {float(tv)} matches no multiple of 2pi/{N}")
        cand.append(RationalAngle(best, N))
    cos_vals = [trig_value(a, "cos") for a in cand]
    if m == 1:
        if cos_vals[0] != targets[0]:
            raise AngleMatchFailure("exact cosine check failed")
    else:
        if cos_vals[0] + cos_vals[1] != ssum or cos_vals[0] * cos_vals[1] != prod:
            raise AngleMatchFailure("exact cosine check failed")
    if any(a.p == 0 for a in cand):
        raise NotIsolated("tangent rotation fixes a nonzero vector")
    sign, pf, gram = rotation_sine_sign(A, x)
    sines = [trig_value(a, "sin") for a in cand]
    s2 = sines[0] * sines[0] if m == 1 else sines[0] * sines[0] * sines[1] * sines[1]
    if pf * pf != gram * s2:
        raise AngleMatchFailure("Pfaffian magnitude disagrees with the matched angles")
    cand.sort(key=lambda a: (-abs(a.fraction()), a.fraction()))
    if sign < 0:
        cand[0] = -cand[0]
    return tuple(cand)


@dataclass(frozen=True)
class EllipticData:
    isometry: tuple
    fixed_point: ProjectivePoint
    angles: tuple


def elliptic_data(A, order: int, point: ProjectivePoint | None = None) -> EllipticData:
    x = point if point is not None else elliptic_fixed_point(A)
    if point is not None and not x.apply(A) == x:
        raise NotElliptic("the given point is not fixed")
    return EllipticData(A, x, coherent_angles(A, x, order))
