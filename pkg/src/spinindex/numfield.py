"""Exact arithmetic in towers of real quadratic extensions of Q.

A tower is a chain Q = K_0 < K_1 < ... < K_d with K_t = K_{t-1}(g_t) and
g_t the positive square root of a radicand r_t in K_{t-1}.  An element of
K_d is stored as 2**d rationals over the multilinear basis prod g_t**e_t,
indexed by the bitmask of exponents (generator t is bit t).

Towers are interned by content.  Elements over a prefix tower embed into
any extension by zero padding; elements over unrelated towers are combined
in a merged tower built on demand with `merge_specs`.

Signs are certified with interval arithmetic (mpmath.iv) at increasing
precision.  Zero is always decided structurally, which is sound because
every level is a genuine quadratic extension (checked when extending).
"""
from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Iterable, Sequence

import gmpy2
import mpmath
from gmpy2 import mpq

__all__ = [
    "NumFieldError", "NegativeRadicand", "AlreadySquare", "SpecMismatch",
    "UnsupportedDenominator", "PoleAtZero", "PrecisionExhausted",
    "TowerSpec", "TowerElement", "ComplexValue", "RationalAngle",
    "QQ", "rational", "tower_extend", "sqrt_or_extend", "exact_sqrt",
    "merge_specs", "certify_sign", "trig_value", "root_of_unity",
    "golden_tower", "davis_tower", "cyclotomic_tower",
]


class NumFieldError(ArithmeticError):
    pass


class NegativeRadicand(NumFieldError):
    pass


class AlreadySquare(NumFieldError):
    pass


class SpecMismatch(NumFieldError):
    pass


class UnsupportedDenominator(NumFieldError):
    pass


class PoleAtZero(NumFieldError, ZeroDivisionError):
    pass


class PrecisionExhausted(NumFieldError):
    pass


_ZERO = mpq(0)
_ONE = mpq(1)
_LOCK = threading.RLock()

START_PREC = 64
MAX_PREC = 4096


class _iv_prec:
    """Run interval evaluation at a given working precision (serialized)."""

    def __init__(self, prec: int):
        self.prec = prec

    def __enter__(self):
        _LOCK.acquire()
        self.saved = mpmath.iv.prec
        mpmath.iv.prec = self.prec
        return self

    def __exit__(self, *exc):
        mpmath.iv.prec = self.saved
        _LOCK.release()
        return False


def _to_mpq(x) -> mpq:
    if isinstance(x, type(_ZERO)):
        return x
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, (int, str)) or type(x).__name__ == "mpz":
        return mpq(x)
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def rational(num, den=1) -> mpq:
    """Reduced rational num/den (arbitrary precision, positive denominator)."""
    return mpq(num, den)


# ---------------------------------------------------------------------------
# Tower specifications


class TowerSpec:
    """An interned tower of real quadratic extensions.

    Build towers with `QQ`, `tower_extend` or `sqrt_or_extend`; the
    constructor is internal.
    """

    __slots__ = ("parent", "radicand", "depth", "size", "key", "_table",
                 "_chain", "_float_gens", "_iv_gens", "_one", "_zero",
                 "_labels", "__weakref__")

    _registry: dict = {}

    def __init__(self, parent: "TowerSpec | None", radicand: "TowerElement | None"):
        self.parent = parent
        self.radicand = radicand
        if parent is None:
            self.depth = 0
            self.key = ()
            self._chain = (self,)
        else:
            self.depth = parent.depth + 1
            self.key = parent.key + (radicand.coeffs,)
            self._chain = parent._chain + (self,)
        self.size = 1 << self.depth
        self._table = None
        self._float_gens = None
        self._iv_gens = {}
        self._labels = None
        self._zero = None
        self._one = None

    @classmethod
    def _intern(cls, parent, radicand) -> "TowerSpec":
        key = (parent.key + (radicand.coeffs,)) if parent is not None else ()
        with _LOCK:
            spec = cls._registry.get(key)
            if spec is None:
                spec = cls(parent, radicand)
                cls._registry[key] = spec
            return spec

    # structure

    def is_prefix_of(self, other: "TowerSpec") -> bool:
        return self.depth <= other.depth and other._chain[self.depth] is self

    def level(self, t: int) -> "TowerSpec":
        """The prefix tower with t generators."""
        return self._chain[t]

    @property
    def radicands(self) -> tuple:
        return tuple(s.radicand for s in self._chain[1:])

    def gen(self, t: int) -> "TowerElement":
        """Generator t (0-based) as an element of this tower."""
        if not 0 <= t < self.depth:
            raise IndexError(t)
        c = [_ZERO] * self.size
        c[1 << t] = _ONE
        return TowerElement(self, c)

    def zero(self) -> "TowerElement":
        if self._zero is None:
            self._zero = TowerElement(self, [_ZERO] * self.size)
        return self._zero

    def one(self) -> "TowerElement":
        if self._one is None:
            c = [_ZERO] * self.size
            c[0] = _ONE
            self._one = TowerElement(self, c)
        return self._one

    def __call__(self, x) -> "TowerElement":
        """Coerce a rational or an element of a prefix tower into this tower."""
        if isinstance(x, TowerElement):
            if x.spec is self:
                return x
            if x.spec.is_prefix_of(self):
                return TowerElement(self, x.coeffs + (_ZERO,) * (self.size - x.spec.size))
            return embed(x, self)
        c = [_ZERO] * self.size
        c[0] = _to_mpq(x)
        return TowerElement(self, c)

    def labels(self) -> list[str]:
        if self._labels is None:
            out = []
            for r in self.radicands:
                if r.is_rational():
                    s = _fmt_q(r.coeffs[0])
                    out.append(f"√{s}" if "/" not in s else f"√({s})")
                else:
                    out.append(f"√({r.canonical(paren=False)})")
            self._labels = out
        return self._labels

    def mul_table(self):
        if self._table is None:
            with _LOCK:
                if self._table is None:
                    self._table = _build_table(self)
        return self._table

    def float_gens(self) -> list[float]:
        if self._float_gens is None:
            gens = []
            for t in range(self.depth):
                r = self._chain[t + 1].radicand
                gens.append(math.sqrt(_float_eval(r.coeffs, gens)))
            self._float_gens = gens
        return self._float_gens

    def iv_gens(self, prec: int):
        g = self._iv_gens.get(prec)
        if g is None:
            with _iv_prec(prec):
                gens = []
                for t in range(self.depth):
                    r = self._chain[t + 1].radicand
                    v = _iv_eval(r.coeffs, gens)
                    # radicands are certified positive
                    lo, hi = _endpoints(v)
                    if lo <= 0:
                        v = mpmath.iv.mpf([mpmath.mpf(0), hi])
                    gens.append(mpmath.iv.sqrt(v))
            g = gens
            self._iv_gens[prec] = g
        return g

    def __repr__(self) -> str:
        return "TowerSpec[" + ", ".join(self.labels()) + "]"

    def __reduce__(self):
        return (_rebuild_spec, (_spec_to_plain(self),))


def _spec_to_plain(spec: TowerSpec):
    return [tuple((int(c.numerator), int(c.denominator)) for c in r.coeffs) for r in spec.radicands]


def _rebuild_spec(plain) -> TowerSpec:
    spec = QQ
    for coeffs in plain:
        r = TowerElement(spec, [mpq(n, d) for n, d in coeffs])
        spec = TowerSpec._intern(spec, r)
    return spec


def _build_table(spec: TowerSpec):
    """table[i][j] = sparse product e_i * e_j as a tuple of (k, c)."""
    n = spec.size
    if spec.depth == 0:
        return ((((0, _ONE),),),)
    half = n >> 1
    sub = spec.parent.mul_table()
    r = spec.radicand.coeffs
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            hi = (i & half) and (j & half)
            il, jl = i & (half - 1), j & (half - 1)
            base = sub[il][jl]
            acc: dict = {}
            if hi:
                # g_top**2 = r, so the product lands in the lower half
                for k, c in base:
                    for kk, cc in _sparse_mul_basis(sub, k, r):
                        acc[kk] = acc.get(kk, _ZERO) + c * cc
            else:
                off = half if ((i ^ j) & half) else 0
                for k, c in base:
                    acc[k + off] = acc.get(k + off, _ZERO) + c
            row.append(tuple((k, c) for k, c in sorted(acc.items()) if c != 0))
        rows.append(tuple(row))
    return tuple(rows)


def _sparse_mul_basis(sub, k, r):
    """Sparse product e_k * r in the parent tower."""
    acc: dict = {}
    row = sub[k]
    for j, rj in enumerate(r):
        if rj:
            for kk, cc in row[j]:
                acc[kk] = acc.get(kk, _ZERO) + rj * cc
    return [(kk, c) for kk, c in acc.items() if c != 0]


def _endpoints(v):
    """Raw (lo, hi) mpf endpoints of an interval."""
    lo, hi = v._mpi_
    return mpmath.mp.make_mpf(lo), mpmath.mp.make_mpf(hi)


def _float_eval(coeffs, gens) -> float:
    tot = 0.0
    for i, c in enumerate(coeffs):
        if c:
            v = float(c)
            t = 0
            m = i
            while m:
                if m & 1:
                    v *= gens[t]
                m >>= 1
                t += 1
            tot += v
    return tot


def _iv_eval(coeffs, gens):
    iv = mpmath.iv
    tot = iv.mpf(0)
    for i, c in enumerate(coeffs):
        if c:
            v = iv.mpf(int(c.numerator)) / iv.mpf(int(c.denominator))
            t = 0
            m = i
            while m:
                if m & 1:
                    v = v * gens[t]
                m >>= 1
                t += 1
            tot = tot + v
    return tot


QQ = TowerSpec(None, None)
TowerSpec._registry[()] = QQ


# ---------------------------------------------------------------------------
# Elements


class TowerElement:
    """Immutable element of a tower field."""

    __slots__ = ("spec", "coeffs", "_hash")

    def __init__(self, spec: TowerSpec, coeffs: Sequence):
        if len(coeffs) != spec.size:
            raise ValueError("coefficient count does not match tower size")
        self.spec = spec
        self.coeffs = tuple(coeffs) if isinstance(coeffs, list) else tuple(coeffs)
        self._hash = None

    # construction helpers

    @classmethod
    def from_rational(cls, x, spec: TowerSpec = QQ) -> "TowerElement":
        return spec(x)

    # predicates

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def rational_value(self) -> mpq:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coeffs[0]

    # coercion

    def _coerce(self, other):
        if isinstance(other, TowerElement):
            if other.spec is self.spec:
                return self, other
            a, b = unify(self, other)
            return a, b
        if isinstance(other, ComplexValue):
            return NotImplemented
        try:
            q = _to_mpq(other)
        except TypeError:
            return NotImplemented
        return self, self.spec(q)

    # ring operations

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        return TowerElement(a.spec, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        return TowerElement(a.spec, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        return TowerElement(a.spec, [y - x for x, y in zip(a.coeffs, b.coeffs)])

    def __neg__(self):
        return TowerElement(self.spec, [-x for x in self.coeffs])

    def __pos__(self):
        return self

    def __mul__(self, other):
        if not isinstance(other, TowerElement):
            if isinstance(other, ComplexValue):
                return NotImplemented
            try:
                q = _to_mpq(other)
            except TypeError:
                return NotImplemented
            return TowerElement(self.spec, [x * q for x in self.coeffs])
        if other.spec is not self.spec:
            a, b = unify(self, other)
        else:
            a, b = self, other
        return TowerElement(a.spec, _mul_coeffs(a.spec, a.coeffs, b.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, TowerElement):
            if isinstance(other, ComplexValue):
                return NotImplemented
            q = _to_mpq(other)
            if q == 0:
                raise ZeroDivisionError("division by zero")
            return TowerElement(self.spec, [x / q for x in self.coeffs])
        return self * other.inverse()

    def __rtruediv__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        return b * a.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = self.spec.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "TowerElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return TowerElement(self.spec, _inv_coeffs(self.spec, self.coeffs))

    def split(self) -> tuple["TowerElement", "TowerElement"]:
        """(x0, x1) over the parent tower with self = x0 + x1*g_top."""
        if self.spec.depth == 0:
            raise ValueError("rational elements do not split")
        half = self.spec.size >> 1
        p = self.spec.parent
        return TowerElement(p, self.coeffs[:half]), TowerElement(p, self.coeffs[half:])

    def conjugate_top(self) -> "TowerElement":
        """Galois conjugate negating the top generator."""
        half = self.spec.size >> 1
        return TowerElement(self.spec, self.coeffs[:half] + tuple(-c for c in self.coeffs[half:]))

    def minimal(self) -> "TowerElement":
        """The same value over the shortest prefix tower containing it."""
        spec = self.spec
        c = self.coeffs
        while spec.depth and not any(c[spec.size >> 1:]):
            c = c[: spec.size >> 1]
            spec = spec.parent
        return TowerElement(spec, c) if spec is not self.spec else self

    # comparison

    def __eq__(self, other):
        if isinstance(other, TowerElement):
            if other.spec is self.spec:
                return self.coeffs == other.coeffs
            a, b = unify(self, other)
            return a.coeffs == b.coeffs
        if isinstance(other, ComplexValue):
            return other == self
        try:
            q = _to_mpq(other)
        except TypeError:
            return NotImplemented
        return self.coeffs[0] == q and not any(self.coeffs[1:])

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if self._hash is None:
            c = list(self.coeffs)
            while len(c) > 1 and not c[-1]:
                c.pop()
            if len(c) == 1:
                self._hash = hash(c[0])
            else:
                self._hash = hash(tuple(c))
        return self._hash

    def sign(self) -> int:
        return certify_sign(self)

    def __lt__(self, other):
        return certify_sign(self - other) < 0

    def __le__(self, other):
        return certify_sign(self - other) <= 0

    def __gt__(self, other):
        return certify_sign(self - other) > 0

    def __ge__(self, other):
        return certify_sign(self - other) >= 0

    def __abs__(self):
        return -self if certify_sign(self) < 0 else self

    # approximations and printing

    def __float__(self) -> float:
        return _float_eval(self.coeffs, self.spec.float_gens())

    def interval(self, prec: int = START_PREC):
        with _iv_prec(prec):
            return _iv_eval(self.coeffs, self.spec.iv_gens(prec))

    def decimal(self, digits: int = 50) -> str:
        """Decimal rendering with `digits` significant digits (display only)."""
        if self.is_zero():
            return "0"
        prec = int(digits * 3.33) + 40
        while True:
            lo, hi = _endpoints(self.interval(prec))
            with mpmath.workprec(prec):
                a = mpmath.nstr(lo, digits, strip_zeros=False, min_fixed=-50, max_fixed=60)
                b = mpmath.nstr(hi, digits, strip_zeros=False, min_fixed=-50, max_fixed=60)
            if a == b:
                return a
            prec *= 2
            if prec > 8 * MAX_PREC:
                return a

    def canonical(self, paren: bool = True) -> str:
        """Canonical string "(a + b·√d1 + ...)" over the defining tower."""
        labels = self.spec.labels()
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mon = "".join(labels[t] for t in range(self.spec.depth) if i >> t & 1)
            terms.append((c, mon))
        if not terms:
            body = "0"
        else:
            parts = []
            for idx, (c, mon) in enumerate(terms):
                neg = c < 0
                a = -c if neg else c
                if mon:
                    s = mon if a == 1 else f"{_fmt_q(a)}·{mon}"
                else:
                    s = _fmt_q(a)
                if idx == 0:
                    parts.append(("-" if neg else "") + s)
                else:
                    parts.append((" - " if neg else " + ") + s)
            body = "".join(parts)
        return f"({body})" if paren else body

    def __str__(self) -> str:
        return self.canonical(paren=False)

    def __repr__(self) -> str:
        return f"TowerElement({self.canonical(paren=False)})"


def _fmt_q(q) -> str:
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _mul_coeffs(spec: TowerSpec, a: tuple, b: tuple) -> list:
    n = spec.size
    if n == 1:
        return [a[0] * b[0]]
    nza = [(i, x) for i, x in enumerate(a) if x]
    if not nza:
        return [_ZERO] * n
    nzb = [(j, y) for j, y in enumerate(b) if y]
    if not nzb:
        return [_ZERO] * n
    out = [_ZERO] * n
    table = spec.mul_table()
    for i, x in nza:
        row = table[i]
        for j, y in nzb:
            p = x * y
            for k, c in row[j]:
                if c == 1:
                    out[k] += p
                else:
                    out[k] += p * c
    return out


def _inv_coeffs(spec: TowerSpec, a: tuple) -> list:
    if spec.depth == 0:
        return [1 / a[0]]
    half = spec.size >> 1
    p = spec.parent
    a0, a1 = a[:half], a[half:]
    if not any(a1):
        inv0 = _inv_coeffs(p, a0)
        return list(inv0) + [_ZERO] * half
    r = spec.radicand.coeffs
    # (a0 + a1 g)^-1 = (a0 - a1 g) / (a0^2 - r a1^2)
    n0 = _mul_coeffs(p, a0, a0)
    n1 = _mul_coeffs(p, _mul_coeffs(p, a1, a1), r)
    norm = tuple(x - y for x, y in zip(n0, n1))
    ninv = tuple(_inv_coeffs(p, norm))
    c0 = _mul_coeffs(p, a0, ninv)
    c1 = _mul_coeffs(p, a1, ninv)
    return list(c0) + [-x for x in c1]


# ---------------------------------------------------------------------------
# Certified signs


def certify_sign(a: TowerElement) -> int:
    """Sign of `a` under the real embedding with all generators positive."""
    if not isinstance(a, TowerElement):
        q = _to_mpq(a)
        return (q > 0) - (q < 0)
    if a.is_zero():
        return 0
    if a.is_rational():
        q = a.coeffs[0]
        return 1 if q > 0 else -1
    prec = START_PREC
    while prec <= MAX_PREC:
        lo, hi = _endpoints(a.interval(prec))
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        prec *= 2
    raise PrecisionExhausted(f"sign of {a!r} undecided at {MAX_PREC} bits")


# ---------------------------------------------------------------------------
# Square roots and tower construction


def _sqrt_rational(q: mpq):
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    if gmpy2.is_square(n) and gmpy2.is_square(d):
        return mpq(gmpy2.isqrt(n), gmpy2.isqrt(d))
    return None


def _sqrt_in(x: TowerElement) -> "TowerElement | None":
    """Some square root of x in its own tower, or None when x is not a square."""
    spec = x.spec
    if spec.depth == 0:
        r = _sqrt_rational(x.coeffs[0])
        return None if r is None else TowerElement(spec, [r])
    if x.is_zero():
        return x
    x0, x1 = x.split()
    p = spec.parent
    r = spec.radicand
    if x1.is_zero():
        y = _sqrt_in(x0)
        if y is not None:
            return spec(y)
        z = _sqrt_in(x0 * r.inverse())
        if z is not None:
            return TowerElement(spec, (_ZERO,) * (spec.size >> 1) + z.coeffs)
        return None
    norm = x0 * x0 - r * x1 * x1
    s = _sqrt_in(norm)
    if s is None:
        return None
    for cand in ((x0 + s) / 2, (x0 - s) / 2):
        if cand.is_zero():
            continue
        a = _sqrt_in(cand)
        if a is not None and not a.is_zero():
            b = x1 / (a * 2)
            return TowerElement(spec, a.coeffs + b.coeffs)
    return None


def exact_sqrt(x: TowerElement) -> "TowerElement | None":
    """The nonnegative square root of x in its tower, or None if none exists."""
    if x.is_zero():
        return x
    if certify_sign(x) < 0:
        return None
    y = _sqrt_in(x)
    if y is None:
        return None
    if y * y != x:
        raise NumFieldError("internal error: square root check failed")
    return -y if certify_sign(y) < 0 else y


def tower_extend(spec: TowerSpec, radicand) -> TowerSpec:
    """Adjoin the positive square root of a positive non-square radicand."""
    r = spec(radicand) if not isinstance(radicand, TowerElement) else radicand
    if r.spec is not spec:
        if r.spec.is_prefix_of(spec):
            r = spec(r)
        else:
            raise SpecMismatch("radicand does not belong to the tower being extended")
    if certify_sign(r) <= 0:
        raise NegativeRadicand(f"radicand {r} is not positive")
    if _sqrt_in(r) is not None:
        raise AlreadySquare(f"radicand {r} is already a square")
    return TowerSpec._intern(spec, r)


def sqrt_or_extend(x: TowerElement) -> TowerElement:
    """Positive square root of x, extending its tower when x is not a square."""
    y = exact_sqrt(x)
    if y is not None:
        return y
    if certify_sign(x) < 0:
        raise NegativeRadicand(f"{x} is negative")
    spec = tower_extend(x.spec, x)
    return spec.gen(spec.depth - 1)


# ---------------------------------------------------------------------------
# Embeddings and merged towers

_EMBED_CACHE: dict = {}
_MERGE_CACHE: dict = {}


def _generator_images(src: TowerSpec, dst: TowerSpec) -> tuple:
    """Images in dst of the generators of src (positive roots)."""
    key = (src.key, dst.key)
    imgs = _EMBED_CACHE.get(key)
    if imgs is not None:
        return imgs
    imgs = []
    for t in range(src.depth):
        r = _embed_with(src.level(t + 1).radicand, dst, imgs)
        y = exact_sqrt(r)
        if y is None:
            raise SpecMismatch(f"{src} does not embed into {dst}")
        imgs.append(y)
    imgs = tuple(imgs)
    _EMBED_CACHE[key] = imgs
    return imgs


def _embed_with(x: TowerElement, dst: TowerSpec, imgs: Sequence[TowerElement]) -> TowerElement:
    if x.spec.is_prefix_of(dst):
        return dst(x)
    out = dst.zero()
    for i, c in enumerate(x.coeffs):
        if not c:
            continue
        term = dst(c)
        t = 0
        m = i
        while m:
            if m & 1:
                term = term * imgs[t]
            m >>= 1
            t += 1
        out = out + term
    return out


def embed(x: TowerElement, dst: TowerSpec) -> TowerElement:
    """Image of x in dst, which must contain (positive) roots of all radicands."""
    if x.spec.is_prefix_of(dst):
        return dst(x)
    return _embed_with(x, dst, _generator_images(x.spec, dst))


def merge_specs(a: TowerSpec, b: TowerSpec) -> TowerSpec:
    """A tower containing both a and b (with compatible real embeddings)."""
    if a is b or b.is_prefix_of(a):
        return a
    if a.is_prefix_of(b):
        return b
    key = (a.key, b.key)
    with _LOCK:
        hit = _MERGE_CACHE.get(key)
        if hit is not None:
            return hit
    # deterministic, order independent
    first, second = (a, b) if (a.depth, repr(a.key)) >= (b.depth, repr(b.key)) else (b, a)
    cur = first
    imgs: list = []
    for t in range(second.depth):
        r = _embed_with(second.level(t + 1).radicand, cur, [cur(i) for i in imgs])
        root = sqrt_or_extend(r)
        if root.spec is not cur:
            cur = root.spec
        imgs.append(root)
    with _LOCK:
        _MERGE_CACHE[(a.key, b.key)] = cur
        _MERGE_CACHE[(b.key, a.key)] = cur
    return cur


def unify(a: TowerElement, b: TowerElement) -> tuple[TowerElement, TowerElement]:
    if a.spec is b.spec:
        return a, b
    if a.spec.is_prefix_of(b.spec):
        return b.spec(a), b
    if b.spec.is_prefix_of(a.spec):
        return a, a.spec(b)
    spec = merge_specs(a.spec, b.spec)
    return embed(a, spec), embed(b, spec)


def common(*xs) -> list[TowerElement]:
    """Coerce all arguments into one tower."""
    elems = [x for x in xs if isinstance(x, TowerElement)]
    spec = QQ
    for x in elems:
        spec = merge_specs(spec, x.spec)
    return [spec(x) if isinstance(x, TowerElement) else spec(x) for x in xs]


# ---------------------------------------------------------------------------
# Complex values


class ComplexValue:
    """re + i*im with re, im in a real tower."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        if not isinstance(re, TowerElement):
            re = QQ(re) if not isinstance(im, TowerElement) else im.spec(re)
        if not isinstance(im, TowerElement):
            im = re.spec(im)
        if re.spec is not im.spec:
            re, im = unify(re, im)
        self.re = re
        self.im = im

    @property
    def spec(self) -> TowerSpec:
        return self.re.spec

    @staticmethod
    def _lift(x):
        if isinstance(x, ComplexValue):
            return x
        if isinstance(x, TowerElement):
            return ComplexValue(x, x.spec.zero())
        if isinstance(x, complex):
            raise TypeError("floating complex numbers are not exact")
        return ComplexValue(QQ(_to_mpq(x)), QQ.zero())

    def __add__(self, other):
        o = self._lift(other)
        return ComplexValue(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return ComplexValue(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        return ComplexValue(-self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, (TowerElement, int, Fraction)) or type(other) is type(_ZERO):
            return ComplexValue(self.re * other, self.im * other)
        o = self._lift(other)
        return ComplexValue(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conj(self) -> "ComplexValue":
        return ComplexValue(self.re, -self.im)

    def abs2(self) -> TowerElement:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "ComplexValue":
        n = self.abs2()
        if n.is_zero():
            raise ZeroDivisionError("inverse of zero")
        ninv = n.inverse()
        return ComplexValue(self.re * ninv, -self.im * ninv)

    def __truediv__(self, other):
        o = self._lift(other)
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = ComplexValue(self.spec.one(), self.spec.zero())
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def is_real(self) -> bool:
        return self.im.is_zero()

    def __eq__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if self.im.is_zero():
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def canonical(self) -> str:
        if self.im.is_zero():
            return self.re.canonical()
        if self.re.is_zero():
            return f"i·{self.im.canonical()}"
        return f"{self.re.canonical()} + i·{self.im.canonical()}"

    def decimal(self, digits: int = 50) -> str:
        if self.im.is_zero():
            return self.re.decimal(digits)
        im = self.im.decimal(digits)
        if self.re.is_zero():
            return f"{im}i"
        sign = "-" if im.startswith("-") else "+"
        return f"{self.re.decimal(digits)} {sign} {im.lstrip('-')}i"

    def __repr__(self) -> str:
        return f"ComplexValue({self.canonical()})"


I_UNIT = ComplexValue(QQ.zero(), QQ.one())


# ---------------------------------------------------------------------------
# Rational angles and trigonometric values


class RationalAngle:
    """The angle 2*pi*p/q, reduced with -q/2 < p <= q/2."""

    __slots__ = ("p", "q")

    def __init__(self, p: int, q: int):
        if q <= 0:
            raise ValueError("denominator must be positive")
        p, q = int(p), int(q)
        g = math.gcd(p, q)
        p //= g
        q //= g
        p %= q
        if 2 * p > q:
            p -= q
        if p == 0:
            q = 1
        self.p = p
        self.q = q

    @classmethod
    def from_pi_fraction(cls, num: int, den: int) -> "RationalAngle":
        """The angle num*pi/den."""
        return cls(num, 2 * den)

    def fraction(self) -> Fraction:
        """theta / (2 pi) in (-1/2, 1/2]."""
        return Fraction(self.p, self.q)

    def half(self) -> "RationalAngle":
        """theta/2 for the reduced representative theta."""
        return RationalAngle(self.p, 2 * self.q)

    def __neg__(self):
        return RationalAngle(-self.p, self.q)

    def __add__(self, other: "RationalAngle"):
        f = self.fraction() + other.fraction()
        return RationalAngle(f.numerator, f.denominator)

    def __mul__(self, k: int):
        return RationalAngle(self.p * k, self.q)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, RationalAngle) and (self.p, self.q) == (other.p, other.q)

    def __hash__(self):
        return hash((self.p, self.q))

    def __lt__(self, other):
        return self.fraction() < other.fraction()

    def __float__(self) -> float:
        return 2 * math.pi * self.p / self.q

    def pi_string(self) -> str:
        """The angle as a multiple of pi, e.g. "-8π/15"."""
        f = Fraction(2 * self.p, self.q)
        if f == 0:
            return "0"
        num = f.numerator
        s = "-" if num < 0 else ""
        num = abs(num)
        head = "π" if num == 1 else f"{num}π"
        return s + (head if f.denominator == 1 else f"{head}/{f.denominator}")

    def __repr__(self) -> str:
        return f"RationalAngle({self.pi_string()})"


_CYCLO_LOCK = threading.Lock()
_CYCLO: dict = {}


def golden_tower() -> TowerSpec:
    """Q(sqrt 5)."""
    return TowerSpec._intern(QQ, QQ(5))


def davis_tower() -> TowerSpec:
    """Q(tau, kappa) with tau the golden ratio and kappa = sqrt(1 + 3 tau)."""
    g = golden_tower()
    tau = (g.gen(0) + 1) / 2
    return tower_extend(g, tau * 3 + 1)


def cyclotomic_tower() -> TowerSpec:
    """Q(sqrt 5, sqrt 3, sqrt(10 + 2 sqrt 5)): holds cos and sin of 2 pi k/60."""
    with _CYCLO_LOCK:
        spec = _CYCLO.get("spec")
        if spec is None:
            g = golden_tower()
            s3 = tower_extend(g, 3)
            spec = tower_extend(s3, s3.gen(0) * 2 + 10)
            _CYCLO["spec"] = spec
        return spec


def _unit_table():
    with _CYCLO_LOCK:
        tab = _CYCLO.get("units")
    if tab is not None:
        return tab
    spec = cyclotomic_tower()
    s5, s3, w = spec.gen(0), spec.gen(1), spec.gen(2)
    half = mpq(1, 2)
    z = spec.zero()
    one = spec.one()
    quarter = [(one, z), (z, one), (-one, z), (z, -one)]
    third = [(one, z), (spec(-half), s3 * half), (spec(-half), -s3 * half)]
    # sqrt(10 - 2 sqrt 5) = 4 sqrt 5 / sqrt(10 + 2 sqrt 5)
    w2 = s5 * 4 / w
    c1, s1 = (s5 - 1) / 4, w / 4
    c2, s2 = -(s5 + 1) / 4, w2 / 4
    fifth = [(one, z), (c1, s1), (c2, s2), (c2, -s2), (c1, -s1)]
    tab = (quarter, third, fifth)
    with _CYCLO_LOCK:
        _CYCLO["units"] = tab
    return tab


def _cos_sin(theta: RationalAngle) -> tuple[TowerElement, TowerElement]:
    if 60 % theta.q:
        raise UnsupportedDenominator(f"denominator {theta.q} does not divide 60")
    key = ("cs", theta.p, theta.q)
    hit = _CYCLO.get(key)
    if hit is not None:
        return hit
    n = (theta.p * (60 // theta.q)) % 60
    quarter, third, fifth = _unit_table()
    for a in range(4):
        for b in range(3):
            for c in range(5):
                if (15 * a + 20 * b + 12 * c) % 60 == n:
                    break
            else:
                continue
            break
        else:
            continue
        break
    ca, sa = quarter[a]
    cb, sb = third[b]
    cc, sc = fifth[c]
    cab, sab = ca * cb - sa * sb, sa * cb + ca * sb
    cos_v = cab * cc - sab * sc
    sin_v = sab * cc + cab * sc
    res = (cos_v.minimal(), sin_v.minimal())
    _CYCLO[key] = res
    return res


def trig_value(theta: RationalAngle, kind: str) -> TowerElement:
    """Exact cos, sin, csc, cos_half or csc_half of a rational angle.

    Supported angles 2 pi p/q have q dividing 60 (q dividing 30 for the
    half-angle kinds).
    """
    if kind in ("cos_half", "csc_half"):
        theta = theta.half()
        kind = kind[:3]
    if kind not in ("cos", "sin", "csc"):
        raise ValueError(f"unknown trig kind {kind!r}")
    c, s = _cos_sin(theta)
    if kind == "cos":
        return c
    if kind == "sin":
        return s
    if s.is_zero():
        raise PoleAtZero(f"csc is undefined at {theta.pi_string()}")
    return s.inverse()


def root_of_unity(theta: RationalAngle) -> ComplexValue:
    """exp(i theta) = cos theta + i sin theta."""
    c, s = _cos_sin(theta)
    return ComplexValue(c, s)
