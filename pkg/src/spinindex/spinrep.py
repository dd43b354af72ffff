"""Matrix models of Spin+(2,1) and Spin+(4,1) and their covering maps.

Spin+(2,1) is modelled by SU(1,1;C), 2x2 complex matrices, and Spin+(4,1)
by SU(1,1;H), 2x2 quaternionic matrices.  The Clifford generators map to the
fixed matrices E_1, ..., E_{n+1} below, and the covering map eta sends A to
the matrix of B -> A B A^-1 on the real span W of the E_i.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .clifford import Multivector, Signature, UnsupportedDimension
from .numfield import QQ, ComplexValue, TowerElement, TowerSpec, merge_specs

__all__ = [
    "Quaternion", "SpinElement2", "SpinElement4", "WeylSplit",
    "NotInGroup", "OddElement", "BasisExpansionFailure",
    "delta2", "delta4", "psi2_expand", "complex_trace", "eta2", "eta4",
    "su11_membership", "weyl_projector", "E2", "E4", "is_lorentz_matrix",
]


class NotInGroup(ValueError):
    pass


class OddElement(ValueError):
    pass


class BasisExpansionFailure(RuntimeError):
    pass


def _spec_of(*xs) -> TowerSpec:
    spec = QQ
    for x in xs:
        if isinstance(x, TowerElement):
            if x.spec is not spec:
                spec = merge_specs(spec, x.spec)
        elif isinstance(x, ComplexValue):
            if x.spec is not spec:
                spec = merge_specs(spec, x.spec)
        elif isinstance(x, Quaternion):
            if x.spec is not spec:
                spec = merge_specs(spec, x.spec)
    return spec


class Quaternion:
    """a + b i + c j + d k over a real tower."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a=0, b=0, c=0, d=0):
        spec = _spec_of(a, b, c, d)
        self.a, self.b, self.c, self.d = spec(a), spec(b), spec(c), spec(d)

    @property
    def spec(self) -> TowerSpec:
        return self.a.spec

    def parts(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def __add__(self, o):
        o = _quat(o)
        return Quaternion(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __sub__(self, o):
        o = _quat(o)
        return Quaternion(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __neg__(self):
        return Quaternion(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, o):
        if not isinstance(o, Quaternion):
            return Quaternion(self.a * o, self.b * o, self.c * o, self.d * o)
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = o.a, o.b, o.c, o.d
        return Quaternion(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def __rmul__(self, o):
        return Quaternion(o * self.a, o * self.b, o * self.c, o * self.d)

    def conj(self) -> "Quaternion":
        return Quaternion(self.a, -self.b, -self.c, -self.d)

    def norm2(self) -> TowerElement:
        return self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d

    def inverse(self) -> "Quaternion":
        n = self.norm2()
        if n.is_zero():
            raise ZeroDivisionError("inverse of zero quaternion")
        return self.conj() * n.inverse()

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.parts())

    def is_real(self) -> bool:
        return self.b.is_zero() and self.c.is_zero() and self.d.is_zero()

    def __eq__(self, o):
        o = _quat(o)
        return all(x == y for x, y in zip(self.parts(), o.parts()))

    def __hash__(self):
        return hash(self.parts())

    def __repr__(self) -> str:
        names = ("", "i", "j", "k")
        terms = [f"{x.canonical()}{n}" for x, n in zip(self.parts(), names) if not x.is_zero()]
        return "Quaternion(" + (" + ".join(terms) or "0") + ")"


def _quat(x) -> Quaternion:
    return x if isinstance(x, Quaternion) else Quaternion(x)


def _cplx(x) -> ComplexValue:
    return x if isinstance(x, ComplexValue) else ComplexValue._lift(x)


class _Mat2:
    """Shared 2x2 matrix behaviour."""

    __slots__ = ("m",)
    n: int = 0

    def __init__(self, rows):
        self.m = (tuple(self._coerce(x) for x in rows[0]), tuple(self._coerce(x) for x in rows[1]))

    @staticmethod
    def _coerce(x):
        raise NotImplementedError

    def __getitem__(self, ij):
        i, j = ij
        return self.m[i][j]

    def __mul__(self, o):
        if not isinstance(o, type(self)):
            return type(self)([[x * o for x in r] for r in self.m])
        (a, b), (c, d) = self.m
        (e, f), (g, h) = o.m
        return type(self)([[a * e + b * g, a * f + b * h], [c * e + d * g, c * f + d * h]])

    def __neg__(self):
        return type(self)([[-x for x in r] for r in self.m])

    def __add__(self, o):
        return type(self)([[x + y for x, y in zip(r, s)] for r, s in zip(self.m, o.m)])

    def __sub__(self, o):
        return type(self)([[x - y for x, y in zip(r, s)] for r, s in zip(self.m, o.m)])

    def __eq__(self, o):
        if not isinstance(o, type(self)):
            return NotImplemented
        return all(x == y for r, s in zip(self.m, o.m) for x, y in zip(r, s))

    def __hash__(self):
        return hash(self.m)

    def star(self):
        """Conjugate transpose."""
        (a, b), (c, d) = self.m
        return type(self)([[a.conj(), c.conj()], [b.conj(), d.conj()]])

    def group_inverse(self):
        """J A* J, the inverse of a group element."""
        (a, b), (c, d) = self.star().m
        return type(self)([[a, -b], [-c, d]])

    def is_identity(self) -> bool:
        (a, b), (c, d) = self.m
        return a == 1 and d == 1 and b.is_zero() and c.is_zero()

    def is_minus_identity(self) -> bool:
        (a, b), (c, d) = self.m
        return a == -1 and d == -1 and b.is_zero() and c.is_zero()

    @classmethod
    def identity(cls):
        return cls([[1, 0], [0, 1]])

    def __pow__(self, k: int):
        if k < 0:
            return self.group_inverse() ** (-k)
        result = type(self).identity()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.m!r})"


class SpinElement2(_Mat2):
    """2x2 complex matrix; group members have rows (a, b), (conj b, conj a)."""

    __slots__ = ()
    n = 2

    @staticmethod
    def _coerce(x):
        return _cplx(x)


class SpinElement4(_Mat2):
    """2x2 quaternionic matrix; group members satisfy A* J A = J."""

    __slots__ = ()
    n = 4

    @staticmethod
    def _coerce(x):
        return _quat(x)


# ---------------------------------------------------------------------------
# The E matrices

_I = ComplexValue(QQ.zero(), QQ.one())

E2 = (
    SpinElement2([[0, 1], [-1, 0]]),
    SpinElement2([[0, _I], [_I, 0]]),
    SpinElement2([[1, 0], [0, -1]]),
)

_qi, _qj, _qk = Quaternion(0, 1), Quaternion(0, 0, 1), Quaternion(0, 0, 0, 1)
E4 = (
    SpinElement4([[0, 1], [-1, 0]]),
    SpinElement4([[0, _qi], [_qi, 0]]),
    SpinElement4([[0, _qj], [_qj, 0]]),
    SpinElement4([[0, _qk], [_qk, 0]]),
    SpinElement4([[1, 0], [0, -1]]),
)


def _delta(x: Multivector, n: int, es, cls):
    if not x.sig.lorentz or x.sig.n != n:
        raise UnsupportedDimension(f"expected Cl({n},1), got {x.sig}")
    if not x.is_even():
        raise OddElement("the spin representation is applied to even elements")
    acc = cls([[0, 0], [0, 0]])
    for blade, c in enumerate(x.coeffs):
        if c.is_zero():
            continue
        term = cls.identity()
        for i in range(n + 1):
            if blade >> i & 1:
                term = term * es[i]
        acc = acc + term * c
    return acc


def delta2(x: Multivector) -> SpinElement2:
    """Complex spin representation of an even element of Cl(2,1)."""
    return _delta(x, 2, E2, SpinElement2)


def delta4(x: Multivector) -> SpinElement4:
    """Quaternionic spin representation of an even element of Cl(4,1)."""
    return _delta(x, 4, E4, SpinElement4)


def psi1(q: Quaternion) -> tuple:
    """Psi_1(z + w j) = ((z, w), (-conj w, conj z)) with z = a + b i, w = c + d i."""
    z = ComplexValue(q.a, q.b)
    w = ComplexValue(q.c, q.d)
    return ((z, w), (-w.conj(), z.conj()))


def psi2_expand(A: SpinElement4) -> tuple:
    """4x4 complex matrix obtained by expanding each quaternion entry with Psi_1."""
    blocks = [[psi1(A[i, j]) for j in range(2)] for i in range(2)]
    rows = []
    for bi in range(2):
        for r in range(2):
            rows.append(tuple(blocks[bi][bj][r][c] for bj in range(2) for c in range(2)))
    return tuple(rows)


def complex_trace(A) -> ComplexValue:
    """Trace in the complex spin representation."""
    if isinstance(A, SpinElement2):
        return A[0, 0] + A[1, 1]
    if isinstance(A, SpinElement4):
        s = (A[0, 0].a + A[1, 1].a) * 2
        return ComplexValue(s, s.spec.zero())
    raise TypeError("expected a spin element")


def su11_membership(A) -> bool:
    """Exact test of A* J A = J (and det A = 1 for the complex model)."""
    if isinstance(A, SpinElement2):
        J = E2[2]
        if not (A.star() * J * A) == J:
            return False
        (a, b), (c, d) = A.m
        return (a * d - b * c) == 1
    if isinstance(A, SpinElement4):
        J = E4[4]
        return (A.star() * J * A) == J
    raise TypeError("expected a spin element")


def eta2(A: SpinElement2) -> tuple:
    """Image of A in SO+(2,1) (closed form in the entries a = a1 + a2 i, b = b1 + b2 i)."""
    if not su11_membership(A):
        raise NotInGroup("matrix is not in SU(1,1;C)")
    a, b = A[0, 0], A[0, 1]
    a1, a2, b1, b2 = a.re, a.im, b.re, b.im
    one = a1.spec.one()
    return (
        (one - a2 * a2 * 2 + b1 * b1 * 2, (b1 * b2 - a1 * a2) * 2, (a2 * b2 - a1 * b1) * 2),
        ((a1 * a2 + b1 * b2) * 2, one - a2 * a2 * 2 + b2 * b2 * 2, (-a1 * b2 - a2 * b1) * 2),
        ((-a1 * b1 - a2 * b2) * 2, (a2 * b1 - a1 * b2) * 2, one + b1 * b1 * 2 + b2 * b2 * 2),
    )


def _w2_coords(B: SpinElement2) -> tuple:
    (r, z), (mz, mr) = B.m
    if not (r.is_real() and mr == -r and mz == -z.conj()):
        raise BasisExpansionFailure("conjugate does not lie in W")
    return (z.re, z.im, r.re)


def eta2_by_conjugation(A: SpinElement2) -> tuple:
    """eta2 computed from A E_i A^-1; agrees with `eta2`."""
    if not su11_membership(A):
        raise NotInGroup("matrix is not in SU(1,1;C)")
    Ainv = A.group_inverse()
    cols = [_w2_coords(A * E * Ainv) for E in E2]
    return tuple(tuple(cols[j][i] for j in range(3)) for i in range(3))


def _w4_coords(B: SpinElement4) -> tuple:
    (r, q), (mq, mr) = B.m
    if not (r.is_real() and mr == -r and mq == -q.conj()):
        raise BasisExpansionFailure("conjugate does not lie in W")
    return (q.a, q.b, q.c, q.d, r.a)


def eta4(A: SpinElement4) -> tuple:
    """Image of A in SO+(4,1): column i holds the coordinates of A E_i A^-1."""
    if not su11_membership(A):
        raise NotInGroup("matrix is not in SU(1,1;H)")
    Ainv = A.group_inverse()
    cols = [_w4_coords(A * E * Ainv) for E in E4]
    return tuple(tuple(cols[j][i] for j in range(5)) for i in range(5))


def w_element4(v: Sequence) -> SpinElement4:
    """The element v_1 E_1 + ... + v_5 E_5 = (r, q; -conj q, -r) of W."""
    q = Quaternion(v[0], v[1], v[2], v[3])
    r = Quaternion(v[4])
    return SpinElement4([[r, q], [-q.conj(), -r]])


def w_element2(v: Sequence) -> SpinElement2:
    z = ComplexValue(v[0], v[1])
    r = ComplexValue(v[2])
    return SpinElement2([[r, z], [-z.conj(), -r]])


def is_lorentz_matrix(A: Sequence[Sequence]) -> bool:
    """A^T J A = J, det A = 1 and A preserves the upper sheet."""
    from .matrices import det, mat_mul, transpose
    from .numfield import certify_sign
    n = len(A)
    spec = _spec_of(*[x for r in A for x in r])
    J = tuple(tuple(spec(0 if i != j else (1 if i < n - 1 else -1)) for j in range(n)) for i in range(n))
    A = tuple(tuple(spec(x) for x in r) for r in A)
    lhs = mat_mul(mat_mul(transpose(A), J), A)
    if not all(x == y for r, s in zip(lhs, J) for x, y in zip(r, s)):
        return False
    if certify_sign(A[n - 1][n - 1] - 1) < 0:
        return False
    return det(A) == 1


@dataclass(frozen=True)
class WeylSplit:
    C: tuple
    plus: tuple
    minus: tuple


def weyl_projector(n: int) -> WeylSplit:
    """C = i**m Delta(e_1 ... e_n) with m = n/2, and its +1/-1 eigenspaces."""
    if n == 2:
        w = delta2(Multivector.blade(Signature(2), [1, 2]))
        C = w * _I
        mat = C.m
    elif n == 4:
        w = delta4(Multivector.blade(Signature(4), [1, 2, 3, 4]))
        mat = tuple(tuple(x * _I * _I for x in r) for r in psi2_expand(w))
    else:
        raise UnsupportedDimension("Weyl splitting is implemented for n = 2 and n = 4")
    dim = len(mat)
    for i in range(dim):
        for j in range(dim):
            if i != j and not mat[i][j].is_zero():
                raise RuntimeError("C is expected to be diagonal in this model")
    plus, minus = [], []
    for i in range(dim):
        basis = tuple(ComplexValue(1 if k == i else 0) for k in range(dim))
        if mat[i][i] == 1:
            plus.append(basis)
        elif mat[i][i] == -1:
            minus.append(basis)
        else:
            raise RuntimeError("C has an eigenvalue other than +1 or -1")
    return WeylSplit(mat, tuple(plus), tuple(minus))
