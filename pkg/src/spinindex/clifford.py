"""Real Clifford algebras Cl(n) and Cl(n,1).

Basis blades are bitmasks over the generators e_1, ..., e_{n+1} (bit i-1 for
e_i).  For i <= n we have e_i**2 = -1; the Lorentz generator e_{n+1}, present
when `Signature.lorentz` is set, squares to +1.  Coefficients are tower
elements, stored densely.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .numfield import QQ, TowerElement, TowerSpec, merge_specs

__all__ = [
    "Signature", "Multivector", "SignatureMismatch", "UnsupportedDimension",
    "NotInvertible", "cl_mul", "involution", "spin_plus_membership",
    "ad_action", "norm_is_unit",
]


class SignatureMismatch(ValueError):
    pass


class UnsupportedDimension(ValueError):
    pass


class NotInvertible(ArithmeticError):
    pass


@dataclass(frozen=True)
class Signature:
    n: int
    lorentz: bool = True

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")

    @property
    def generators(self) -> int:
        return self.n + 1 if self.lorentz else self.n

    @property
    def dim(self) -> int:
        return 1 << self.generators

    def square(self, i: int) -> int:
        """e_{i+1}**2 for 0-based generator index i."""
        return 1 if (self.lorentz and i == self.n) else -1


def _popcount(x: int) -> int:
    return bin(x).count("1")


@lru_cache(maxsize=None)
def _blade_table(sig: Signature):
    """sign[a][b] with e_a e_b = sign * e_(a^b)."""
    dim = sig.dim
    table = []
    for a in range(dim):
        row = []
        for b in range(dim):
            # reorder: count pairs (i in a, j in b) with i > j
            swaps = 0
            bb = b
            while bb:
                j = (bb & -bb).bit_length() - 1
                swaps += _popcount(a >> (j + 1))
                bb &= bb - 1
            s = -1 if swaps & 1 else 1
            common = a & b
            i = 0
            while common:
                if common & 1:
                    s *= sig.square(i)
                common >>= 1
                i += 1
            row.append(s)
        table.append(tuple(row))
    return tuple(table)


class Multivector:
    """Element of a Clifford algebra with tower-element coefficients."""

    __slots__ = ("sig", "coeffs")

    def __init__(self, sig: Signature, coeffs: Sequence[TowerElement]):
        if len(coeffs) != sig.dim:
            raise ValueError("wrong number of coefficients")
        spec = QQ
        for c in coeffs:
            if isinstance(c, TowerElement) and c.spec is not spec:
                spec = merge_specs(spec, c.spec)
        self.sig = sig
        self.coeffs = tuple(spec(c) for c in coeffs)

    @property
    def spec(self) -> TowerSpec:
        return self.coeffs[0].spec

    # constructors

    @classmethod
    def scalar(cls, sig: Signature, value=1) -> "Multivector":
        spec = value.spec if isinstance(value, TowerElement) else QQ
        c = [spec.zero()] * sig.dim
        c[0] = spec(value)
        return cls(sig, c)

    @classmethod
    def blade(cls, sig: Signature, indices: Iterable[int], coeff=1) -> "Multivector":
        """Coefficient times e_{i1} e_{i2} ... for 1-based indices, in the order given."""
        x = cls.scalar(sig, coeff)
        for i in indices:
            if not 1 <= i <= sig.generators:
                raise IndexError(i)
            x = x * cls._gen(sig, i)
        return x

    @classmethod
    def _gen(cls, sig: Signature, i: int) -> "Multivector":
        c = [QQ.zero()] * sig.dim
        c[1 << (i - 1)] = QQ.one()
        return cls(sig, c)

    @classmethod
    def vector(cls, sig: Signature, coords: Sequence) -> "Multivector":
        if len(coords) != sig.generators:
            raise ValueError("wrong number of vector coordinates")
        spec = QQ
        for x in coords:
            if isinstance(x, TowerElement):
                spec = merge_specs(spec, x.spec)
        c = [spec.zero()] * sig.dim
        for i, x in enumerate(coords):
            c[1 << i] = spec(x)
        return cls(sig, c)

    # structure

    def grades(self) -> set[int]:
        return {_popcount(b) for b, c in enumerate(self.coeffs) if not c.is_zero()}

    def is_even(self) -> bool:
        return all(g % 2 == 0 for g in self.grades())

    def is_odd(self) -> bool:
        return all(g % 2 == 1 for g in self.grades())

    def is_scalar(self) -> bool:
        return self.grades() <= {0}

    def is_vector(self) -> bool:
        return self.grades() <= {1}

    def scalar_part(self) -> TowerElement:
        return self.coeffs[0]

    def vector_part(self) -> tuple:
        return tuple(self.coeffs[1 << i] for i in range(self.sig.generators))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    # algebra

    def _check(self, other: "Multivector"):
        if self.sig != other.sig:
            raise SignatureMismatch(f"{self.sig} vs {other.sig}")

    def __add__(self, other):
        if not isinstance(other, Multivector):
            other = Multivector.scalar(self.sig, other)
        self._check(other)
        return Multivector(self.sig, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Multivector):
            other = Multivector.scalar(self.sig, other)
        self._check(other)
        return Multivector(self.sig, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return Multivector(self.sig, [-a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return cl_mul(self, other)
        return Multivector(self.sig, [a * other for a in self.coeffs])

    def __rmul__(self, other):
        return Multivector(self.sig, [other * a for a in self.coeffs])

    def __truediv__(self, other):
        return Multivector(self.sig, [a / other for a in self.coeffs])

    def __eq__(self, other):
        if isinstance(other, Multivector):
            return self.sig == other.sig and all(a == b for a, b in zip(self.coeffs, other.coeffs))
        return self == Multivector.scalar(self.sig, other)

    def __hash__(self):
        return hash((self.sig, self.coeffs))

    def alpha(self) -> "Multivector":
        return involution(self, "alpha")

    def transpose(self) -> "Multivector":
        return involution(self, "transpose")

    def norm(self) -> "Multivector":
        return involution(self, "norm")

    def __str__(self) -> str:
        terms = []
        for b, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            blade = "".join(f"e{i + 1}" for i in range(self.sig.generators) if b >> i & 1)
            cs = c.canonical(paren=False)
            if not blade:
                terms.append(cs)
            elif c == 1:
                terms.append(blade)
            elif c == -1:
                terms.append("-" + blade)
            else:
                terms.append(f"({cs})·{blade}" if (" " in cs) else f"{cs}·{blade}")
        if not terms:
            return "0"
        out = terms[0]
        for t in terms[1:]:
            out += (" - " + t[1:]) if t.startswith("-") else (" + " + t)
        return out

    def __repr__(self) -> str:
        return f"Multivector({self})"


def cl_mul(a: Multivector, b: Multivector) -> Multivector:
    """Clifford product."""
    if a.sig != b.sig:
        raise SignatureMismatch(f"{a.sig} vs {b.sig}")
    table = _blade_table(a.sig)
    spec = merge_specs(a.spec, b.spec)
    out = [spec.zero()] * a.sig.dim
    bnz = [(j, y) for j, y in enumerate(b.coeffs) if not y.is_zero()]
    for i, x in enumerate(a.coeffs):
        if x.is_zero():
            continue
        row = table[i]
        for j, y in bnz:
            p = x * y
            k = i ^ j
            out[k] = out[k] + p if row[j] > 0 else out[k] - p
    return Multivector(a.sig, out)


def involution(x: Multivector, kind: str) -> Multivector:
    """alpha (grade parity), transpose (reversion) or norm N(x) = x alpha(x^t)."""
    if kind == "alpha":
        return Multivector(x.sig, [-c if _popcount(b) & 1 else c for b, c in enumerate(x.coeffs)])
    if kind == "transpose":
        out = []
        for b, c in enumerate(x.coeffs):
            k = _popcount(b)
            out.append(-c if (k * (k - 1) // 2) & 1 else c)
        return Multivector(x.sig, out)
    if kind == "norm":
        return cl_mul(x, involution(involution(x, "transpose"), "alpha"))
    raise ValueError(f"unknown involution {kind!r}")


def lorentz_form(v: Multivector) -> TowerElement:
    """q(v) = v_1**2 + ... + v_n**2 - v_{n+1}**2 for a vector v."""
    coords = v.vector_part()
    acc = v.spec.zero()
    for i, c in enumerate(coords):
        acc = acc - c * c if v.sig.square(i) > 0 else acc + c * c
    return acc


def norm_is_unit(x: Multivector) -> bool:
    """Diagnostic: N(x) is the scalar +1 or -1."""
    n = involution(x, "norm")
    return n.is_scalar() and (n.scalar_part() == 1 or n.scalar_part() == -1)


def spin_plus_membership(x: Multivector) -> bool:
    """x lies in Spin+(n,1): x is even and x^t x = 1 (valid for n = 2, 3, 4)."""
    if not x.sig.lorentz or x.sig.n not in (2, 3, 4):
        raise UnsupportedDimension(f"membership test needs Cl(n,1) with n in 2..4, got {x.sig}")
    if not x.is_even():
        return False
    return cl_mul(involution(x, "transpose"), x) == 1


def inverse(x: Multivector) -> Multivector:
    """Inverse of an invertible vector or of an element with scalar nonzero norm."""
    if x.is_vector():
        q = lorentz_form(x)
        if q.is_zero():
            raise NotInvertible("null vector")
        return x * (-q.inverse())
    n = involution(x, "norm")
    if n.is_scalar() and not n.scalar_part().is_zero():
        return involution(involution(x, "transpose"), "alpha") * n.scalar_part().inverse()
    raise NotInvertible("element is not a vector and its norm is not an invertible scalar")


def ad_action(x: Multivector, v: Multivector) -> Multivector:
    """Ad(x)(v) = x v x^-1."""
    if x.sig.lorentz and x.sig.n in (2, 3, 4) and x.is_even() and spin_plus_membership(x):
        xinv = involution(x, "transpose")
    else:
        xinv = inverse(x)
    return cl_mul(cl_mul(x, v), xinv)


def ad_matrix(x: Multivector) -> tuple:
    """Matrix of v -> x v x^-1 on the standard vector basis (columns = images)."""
    sig = x.sig
    cols = []
    for i in range(sig.generators):
        e = Multivector.blade(sig, [i + 1])
        w = ad_action(x, e)
        if not w.is_vector():
            raise ValueError("adjoint image is not a vector")
        cols.append(w.vector_part())
    return tuple(tuple(cols[j][i] for j in range(sig.generators)) for i in range(sig.generators))
