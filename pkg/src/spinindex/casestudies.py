"""The two worked examples: the Davis 120-cell manifold and the genus-2
decagon surface.

Both are described by a `FundamentalPolytope`: a center, one record per
side (neighbor-cell center, side-pairing matrix, spin lift) and the cell
centers of every dimension partitioned into cycles under the side-pairing.

Conventions.  Side i is the perpendicular bisector of the center e and the
neighbor center a_i = g_i e, so g_i carries P onto the cell across side i
and maps side opp(i) onto side i.  Words are tuples of 1-based side indices
and evaluate left to right: (i, j, k) -> g_i g_j g_k.  The inverse of g_i is
g_opp(i).
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .hypgeom import ProjectivePoint, lorentz_product, reflection_from_normal
from .matrices import identity, is_identity, mat_key, mat_mul, mat_vec, transpose
from .numfield import (ComplexValue, RationalAngle, TowerElement, certify_sign, davis_tower,
                       exact_sqrt, merge_specs, rational, root_of_unity, trig_value)
from .spinrep import (Quaternion, SpinElement2, SpinElement4, eta2, eta4, su11_membership,
                      w_element4)

log = logging.getLogger(__name__)

__all__ = [
    "ConstructionError", "OrbitSizeMismatch", "NonClosingCycle", "LiftMismatch",
    "NotNormalizing", "ClosureBudgetExceeded", "Side", "CellCycle",
    "FundamentalPolytope", "Presentation", "SpinLiftSet", "CaseStudy",
    "davis_simplex_data", "sym_group_closure", "davis_sides", "ridge_relations",
    "davis_spin_lifts", "davis_case", "decagon_case", "verify_presentation",
    "normalizer_check", "sign_flip_breaks", "evaluate_word", "inverse_word", "canonical_relator",
]


class ConstructionError(RuntimeError):
    pass


class OrbitSizeMismatch(ConstructionError):
    pass


class NonClosingCycle(ConstructionError):
    pass


class LiftMismatch(ConstructionError):
    pass


class NotNormalizing(ConstructionError):
    pass


class ClosureBudgetExceeded(ConstructionError):
    pass


Word = tuple


# ---------------------------------------------------------------------------
# Data types


@dataclass(frozen=True)
class Side:
    index: int
    center: tuple
    pairing: tuple
    lift: object = None


@dataclass(frozen=True)
class CellCycle:
    dim: int
    members: tuple
    transport: dict = field(hash=False, compare=False)

    @property
    def representative(self) -> int:
        return self.members[0]

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class Presentation:
    generator_count: int
    relators: tuple
    opposite: Callable = field(compare=False, repr=False)

    def signed(self, word: Word) -> tuple:
        """Word over the generators x_1..x_m with inverses as negative indices."""
        out = []
        for i in word:
            j = self.opposite(i)
            out.append(i if i < j else -j)
        return tuple(out)

    def signed_relators(self) -> tuple:
        return tuple(self.signed(w) for w in self.relators)


@dataclass(frozen=True)
class SpinLiftSet:
    lifts: tuple

    def __getitem__(self, i: int):
        return self.lifts[i - 1]

    def __len__(self) -> int:
        return len(self.lifts)


@dataclass(frozen=True)
class FundamentalPolytope:
    n: int
    center: ProjectivePoint
    sides: tuple
    opposite: Callable = field(repr=False)
    cells: dict = field(repr=False)
    incidences: dict = field(repr=False)
    cycles: dict = field(repr=False)
    index: dict = field(repr=False)
    adjacency: dict = field(repr=False)

    def opp(self, i: int) -> int:
        return self.opposite(i)

    def pairing(self, i: int):
        return self.sides[i - 1].pairing

    def lift(self, i: int):
        return self.sides[i - 1].lift

    def pairings(self) -> tuple:
        return tuple(s.pairing for s in self.sides)

    def lifts(self) -> SpinLiftSet:
        return SpinLiftSet(tuple(s.lift for s in self.sides))

    def locate_cell(self, dim: int, point: ProjectivePoint) -> int | None:
        return self.index[dim].get(point.key())

    def cycle_of(self, dim: int, idx: int) -> CellCycle:
        for c in self.cycles[dim]:
            if idx in c.transport:
                return c
        raise KeyError((dim, idx))

    def with_lifts(self, lifts: Sequence) -> "FundamentalPolytope":
        sides = tuple(replace(s, lift=l) for s, l in zip(self.sides, lifts))
        return replace(self, sides=sides)


@dataclass
class CaseStudy:
    name: str
    polytope: FundamentalPolytope
    presentation: Presentation
    lifts: SpinLiftSet
    f: tuple
    f_hat: object
    order: int
    extras: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.polytope.n


# ---------------------------------------------------------------------------
# Words


def evaluate_word(word: Iterable[int], mats: Sequence, one=None):
    """Left-to-right product of mats[i-1] over the word."""
    acc = None
    for i in word:
        m = mats[i - 1]
        acc = m if acc is None else _mul(acc, m)
    if acc is None:
        if one is None:
            raise ValueError("empty word needs an identity")
        return one
    return acc


def _mul(a, b):
    if isinstance(a, tuple):
        return mat_mul(a, b)
    return a * b


def inverse_word(word: Iterable[int], opp: Callable[[int], int]) -> Word:
    return tuple(opp(i) for i in reversed(tuple(word)))


def canonical_relator(word: Word, opp: Callable[[int], int]) -> Word:
    """Lexicographically least rotation of the word or of its inverse."""
    w = tuple(word)
    inv = inverse_word(w, opp)
    cands = [w[i:] + w[:i] for i in range(len(w))] + [inv[i:] + inv[:i] for i in range(len(inv))]
    return min(cands)


# ---------------------------------------------------------------------------
# Generic polytope assembly


def _float_vec(v) -> tuple:
    return tuple(float(x) for x in v)


def _fdot(x, y) -> float:
    return sum(a * b for a, b in zip(x[:-1], y[:-1])) - x[-1] * y[-1]


def build_polytope(n: int, center: Sequence, neighbor_centers: Sequence, pairings: Sequence,
                   opposite: Callable[[int], int], cells: dict) -> FundamentalPolytope:
    """Incidences, identification graph and cycle partition of the cells.

    `cells` maps a dimension to a list of cell-center vectors; the top
    dimension must hold just the center.
    """
    e = tuple(center)
    fe = _float_vec(e)
    fa = [_float_vec(a) for a in neighbor_centers]
    index: dict = {}
    points: dict = {}
    for d, pts in cells.items():
        pp = tuple(p if isinstance(p, ProjectivePoint) else ProjectivePoint(p, check=False) for p in pts)
        points[d] = pp
        idx = {}
        for k, p in enumerate(pp):
            if p.key() in idx:
                raise ConstructionError(f"duplicate cell center in dimension {d}")
            idx[p.key()] = k
        index[d] = idx
    incid: dict = {}
    for d, pp in points.items():
        rows = []
        for p in pp:
            fp = _float_vec(p.coords)
            scale = abs(fp[-1]) * abs(fe[-1]) + 1.0
            hits = []
            for i, a in enumerate(fa):
                if abs(_fdot(fp, a) - _fdot(fp, fe)) < 1e-7 * scale * (abs(a[-1]) + 1):
                    diff = lorentz_product(p.coords, neighbor_centers[i]) - lorentz_product(p.coords, e)
                    if diff.is_zero():
                        hits.append(i + 1)
            rows.append(tuple(hits))
        incid[d] = tuple(rows)
    # identification graph: a cell on side i is glued by g_opp(i)
    adjacency: dict = {}
    cycles: dict = {}
    for d, pp in points.items():
        adj = {}
        for k, p in enumerate(pp):
            for i in incid[d][k]:
                h = opposite(i)
                img = ProjectivePoint(mat_vec(pairings[h - 1], p.coords), check=False)
                j = index[d].get(img.key())
                if j is None:
                    raise ConstructionError(f"image of cell {d}:{k} under g_{h} is not a cell of P")
                if h not in incid[d][j]:
                    raise ConstructionError(f"image of cell {d}:{k} does not lie on side {h}")
                adj[(k, i)] = (j, h)
        adjacency[d] = adj
        seen: dict = {}
        out = []
        for start in range(len(pp)):
            if start in seen:
                continue
            transport = {start: ()}
            queue = deque([start])
            order = [start]
            while queue:
                c = queue.popleft()
                for i in incid[d][c]:
                    j, h = adj[(c, i)]
                    if j not in transport:
                        transport[j] = (h,) + transport[c]
                        queue.append(j)
                        order.append(j)
            for c in order:
                seen[c] = True
            out.append(CellCycle(d, tuple(sorted(order)), transport))
        cycles[d] = tuple(out)
    sides = tuple(Side(i + 1, tuple(neighbor_centers[i]), pairings[i]) for i in range(len(pairings)))
    return FundamentalPolytope(n, ProjectivePoint(e), sides, opposite, points, incid, cycles,
                               index, adjacency)


def ridge_relations(P: FundamentalPolytope) -> Presentation:
    """Side-pairing relators plus one relator per ridge cycle (Poincare walk)."""
    opp = P.opp
    m = len(P.sides)
    rel = []
    for i in range(1, m + 1):
        if i < opp(i):
            rel.append((i, opp(i)))
    d = P.n - 2
    ridges = P.cells[d]
    adj = P.adjacency[d]
    found = set()
    ridge_rel = []
    for c0 in range(len(ridges)):
        sides0 = P.incidences[d][c0]
        if len(sides0) != 2:
            raise ConstructionError(f"ridge {c0} lies on {len(sides0)} sides")
        for s0 in sides0:
            word = []
            c, ex = c0, s0
            for _ in range(4 * len(ridges) + 4):
                j, h = adj[(c, ex)]
                word.insert(0, h)
                nxt = [s for s in P.incidences[d][j] if s != h]
                if len(nxt) != 1:
                    raise ConstructionError("ridge does not lie on exactly two sides")
                c, ex = j, nxt[0]
                if c == c0 and ex == s0:
                    break
            else:
                raise NonClosingCycle(f"walk around ridge {c0} did not close")
            key = canonical_relator(tuple(word), opp)
            if key not in found:
                found.add(key)
                ridge_rel.append(key)
    ridge_rel.sort()
    return Presentation(m // 2, tuple(rel) + tuple(ridge_rel), opp)


def verify_presentation(gens: Sequence, relators: Sequence, lifts: Sequence | None = None) -> dict:
    """Evaluate relators as Lorentz products and, when given, in the spin group.

    Returns a report with per-relator results and the sign vector
    (+1 for the identity, -1 for minus the identity, 0 otherwise).
    """
    results = []
    for w in relators:
        lor_ok = is_identity(evaluate_word(w, gens)) if gens is not None else None
        sign = None
        if lifts is not None:
            X = evaluate_word(w, lifts)
            sign = 1 if X.is_identity() else (-1 if X.is_minus_identity() else 0)
        results.append({"word": tuple(w), "lorentz": lor_ok, "sign": sign})
    lorentz_pass = sum(1 for r in results if r["lorentz"])
    spin_pass = sum(1 for r in results if r["sign"] == 1)
    return {
        "relators": len(results),
        "lorentz_pass": lorentz_pass,
        "spin_pass": spin_pass if lifts is not None else None,
        "signs": tuple(r["sign"] for r in results),
        "results": results,
        "ok": all(r["lorentz"] is not False for r in results)
        and (lifts is None or all(r["sign"] == 1 for r in results)),
    }


def sign_flip_breaks(presentation: Presentation, signs: Sequence[int]) -> dict:
    """Which generator flips break a relator, given the unflipped sign vector.

    Negating the lift of x_j (and hence of its inverse) multiplies each
    relator by (-1)**(occurrences of x_j and its inverse).
    """
    out = {}
    opp = presentation.opposite
    gens = sorted({min(i, opp(i)) for w in presentation.relators for i in w})
    for g in gens:
        broken = []
        for k, (w, s) in enumerate(zip(presentation.relators, signs)):
            cnt = sum(1 for i in w if i == g or i == opp(g))
            if (s * (-1) ** cnt) != 1:
                broken.append(k)
        out[g] = tuple(broken)
    return out


def normalizer_check(f, f_hat, P: FundamentalPolytope, lifts: Sequence | None = None):
    """Permutation pi with f g_i f^-1 = g_pi(i) and signs with f^ g^_i f^-1 = eps g^_pi(i)."""
    lifts = lifts if lifts is not None else [s.lift for s in P.sides]
    e = P.center
    lookup = {ProjectivePoint(s.center, check=False).key(): s.index for s in P.sides}
    if not ProjectivePoint(mat_vec(f, e.coords), check=False) == e:
        raise NotNormalizing("f does not fix the polytope center")
    finv_hat = f_hat.group_inverse()
    perm = {}
    signs = {}
    for s in P.sides:
        img = ProjectivePoint(mat_vec(f, s.center), check=False)
        j = lookup.get(img.key())
        if j is None:
            raise NotNormalizing(f"f maps neighbor center {s.index} off the neighbor set")
        # f g_i f^-1 maps e to f a_i = a_j; both are translations of the same kind
        lhs = mat_mul(mat_mul(f, s.pairing), _lorentz_inverse(f))
        if mat_key(lhs) != mat_key(P.pairing(j)) and not _mat_equal(lhs, P.pairing(j)):
            raise NotNormalizing(f"f g_{s.index} f^-1 is not a generator")
        perm[s.index] = j
        if lifts[0] is not None:
            X = f_hat * lifts[s.index - 1] * finv_hat
            if X == lifts[j - 1]:
                signs[s.index] = 1
            elif X == -lifts[j - 1]:
                signs[s.index] = -1
            else:
                raise NotNormalizing(f"lift of f g_{s.index} f^-1 is not plus or minus a lift")
    return perm, signs


def _mat_equal(a, b) -> bool:
    return all(x == y for r, s in zip(a, b) for x, y in zip(r, s))


def _lorentz_inverse(A):
    """J A^T J."""
    n = len(A)
    return tuple(tuple(A[j][i] * ((-1 if (i == n - 1) != (j == n - 1) else 1))
                       for j in range(n)) for i in range(n))


# ---------------------------------------------------------------------------
# Symmetry groups


def sym_group_closure(generators: Sequence, probe: Sequence[ProjectivePoint] | None = None,
                      budget: int = 50000) -> list:
    """All products of the generators, deduplicated exactly.

    With `probe`, a finite set of points permuted by the group and spanning
    the ambient space, elements are identified by their exact permutation
    of the probe keys (a faithful action) and each new matrix costs a
    single product; otherwise matrices are compared by exact key.
    """
    if not generators:
        return []
    spec = generators[0][0][0].spec
    n = len(generators[0])
    one = identity(n, spec)
    if probe is None:
        seen = {mat_key(one): one}
        queue = deque([one])
        while queue:
            M = queue.popleft()
            for g in generators:
                X = mat_mul(g, M)
                k = mat_key(X)
                if k not in seen:
                    seen[k] = X
                    if len(seen) > budget:
                        raise ClosureBudgetExceeded(f"more than {budget} elements")
                    queue.append(X)
        return list(seen.values())
    keys = [p.key() for p in probe]
    where = {k: i for i, k in enumerate(keys)}
    perms = []
    for g in generators:
        perm = []
        for p in probe:
            j = where.get(ProjectivePoint(mat_vec(g, p.coords), check=False).key())
            if j is None:
                raise ConstructionError("probe set is not invariant under a generator")
            perm.append(j)
        perms.append(tuple(perm))
    ident = tuple(range(len(probe)))
    seen = {ident: one}
    queue = deque([ident])
    while queue:
        q = queue.popleft()
        M = seen[q]
        for g, pg in zip(generators, perms):
            nq = tuple(pg[i] for i in q)
            if nq not in seen:
                seen[nq] = mat_mul(g, M)
                if len(seen) > budget:
                    raise ClosureBudgetExceeded(f"more than {budget} elements")
                queue.append(nq)
    mats = list(seen.values())
    if len({mat_key(m) for m in mats}) != len(mats):
        raise ConstructionError("distinct permutations produced equal matrices")
    return mats


def point_orbit(point: ProjectivePoint, generators: Sequence) -> list[ProjectivePoint]:
    """Orbit of a point under the group generated by the given matrices (BFS)."""
    seen = {point.key(): point}
    order = [point]
    queue = deque([point])
    while queue:
        p = queue.popleft()
        for g in generators:
            q = ProjectivePoint(mat_vec(g, p.coords), check=False)
            k = q.key()
            if k not in seen:
                seen[k] = q
                order.append(q)
                queue.append(q)
    return order


# ---------------------------------------------------------------------------
# Davis manifold


def _davis_constants():
    D = davis_tower()
    s5, kappa = D.gen(0), D.gen(1)
    tau = (s5 + 1) / 2
    return D, tau, kappa


def davis_simplex_data() -> dict:
    """Vertices v_1..v_5 and wall normals s_1..s_5 of the Coxeter simplex.

    v_i lies on every wall except the i-th.  The second vertex is
    (1+tau)kappa, kappa, 0, 0, 2+3 tau), the unique point with that property.
    """
    D, t, k = _davis_constants()
    z = D.zero()
    h = rational(1, 2)
    v = (
        (k * (2 + 3 * t), k * (1 + t), z, k, 5 + 8 * t),
        (k * (1 + t), k, z, z, 2 + 3 * t),
        (k * t, k * (2 * t - 1) / 5, k * (3 - t) / 5, z, 1 + 2 * t),
        (k, z, z, z, 1 + t),
        (z, z, z, z, D.one()),
    )
    s = (
        (z, z, z, D(-1), z),
        (z, (1 - t) * h, D(h), t * h, z),
        (z, z, D(-1), z, z),
        ((1 - t) * h, t * h, D(h), z, z),
        (1 + t, z, z, z, k),
    )
    v = tuple(tuple(D(x) for x in p) for p in v)
    s = tuple(tuple(D(x) for x in p) for p in s)
    return {"v": v, "s": s, "tau": t, "kappa": k, "spec": D}


def davis_pairing(a: Sequence) -> tuple:
    """Symmetric translation matrix carrying e_5 to the neighbor center a."""
    a5 = a[4]
    inv = (a5 + 1).inverse()
    rows = []
    for i in range(4):
        row = []
        for j in range(4):
            x = a[i] * a[j] * inv
            if i == j:
                x = x + 1
            row.append(x)
        row.append(a[i])
        rows.append(tuple(row))
    rows.append(tuple(a[:4]) + (a5,))
    return tuple(rows)


def _neighbor_center(e, c):
    """Reflection of e in the hyperplane through the normalized point c orthogonal to the e-c geodesic."""
    ec = lorentz_product(e, c)
    nrm = tuple(x + ec * y for x, y in zip(e, c))
    nn = lorentz_product(nrm, nrm)
    f = lorentz_product(e, nrm) * nn.inverse() * 2
    return tuple(x - f * y for x, y in zip(e, nrm))


def _positive_direction(a) -> bool:
    for x in a[:4]:
        s = certify_sign(x)
        if s:
            return s > 0
    raise ConstructionError("zero direction vector")


def davis_sides(symmetry: Sequence | None = None, pairing_data: Sequence | None = None,
                with_symmetry: bool = True):
    """Assemble the Davis fundamental polytope (without lifts).

    Returns (polytope, symmetry_group, reflections).  `symmetry` and
    `pairing_data` may be supplied from a cache; the latter is the list of
    neighbor centers in side order.
    """
    data = davis_simplex_data()
    D, t = data["spec"], data["tau"]
    rho = [reflection_from_normal(s) for s in data["s"][:4]]
    e5 = data["v"][4]
    cells_pts = {}
    expect = {0: 600, 1: 1200, 2: 720, 3: 120}
    for d in range(4):
        orb = point_orbit(ProjectivePoint(data["v"][d]), rho)
        if len(orb) != expect[d]:
            raise OrbitSizeMismatch(f"orbit of v{d + 1} has {len(orb)} points, expected {expect[d]}")
        cells_pts[d] = orb
    if with_symmetry and symmetry is None:
        symmetry = sym_group_closure(rho, probe=cells_pts[3])
    if symmetry is not None and len(symmetry) != 14400:
        raise OrbitSizeMismatch(f"symmetry group has {len(symmetry)} elements, expected 14400")
    a5 = 3 + 6 * t
    if pairing_data is None:
        neigh = [_neighbor_center(e5, p.coords) for p in cells_pts[3]]
        for a in neigh:
            if a[4] != a5:
                raise ConstructionError("neighbor center with last coordinate other than 3+6tau")
        pos = [a for a in neigh if _positive_direction(a)]
        if len(pos) != 60:
            raise ConstructionError("directions do not come in opposite pairs")
        pos.sort(key=lambda a: tuple(-float(x) for x in a[:4]))
        neg = [tuple(-x for x in a[:4]) + (a[4],) for a in reversed(pos)]
        ordered = pos + neg
        keys = {ProjectivePoint(a, check=False).key() for a in neigh}
        if any(ProjectivePoint(a, check=False).key() not in keys for a in neg):
            raise ConstructionError("negated direction is not a direction")
    else:
        ordered = [tuple(D(x) for x in a) for a in pairing_data]
    pairings = [davis_pairing(a) for a in ordered]
    m = len(ordered)

    def opp(i: int) -> int:
        return m + 1 - i

    cells = {d: cells_pts[d] for d in range(4)}
    cells[4] = [ProjectivePoint(e5)]
    P = build_polytope(4, e5, ordered, pairings, opp, cells)
    return P, symmetry, rho


def davis_spin_lifts(P: FundamentalPolytope, spin_data: dict | None = None) -> SpinLiftSet:
    """Lifts of the 120 side-pairings by transporting g^_1 with even reflection words."""
    data = davis_simplex_data()
    D, t, k = data["spec"], data["tau"], data["kappa"]
    R = [w_element4(s) for s in data["s"][:4]]
    rho = [reflection_from_normal(s) for s in data["s"][:4]]
    moves = []
    for i in range(4):
        for j in range(4):
            if i != j:
                Lh = R[i] * R[j]
                moves.append((mat_mul(rho[i], rho[j]), Lh, Lh.group_inverse()))
    g1h = SpinElement4([[-1 - t, k], [k, -1 - t]])
    if not su11_membership(g1h):
        raise LiftMismatch("g^_1 is not in SU(1,1;H)")
    lookup = {ProjectivePoint(s.center, check=False).key(): s.index for s in P.sides}
    lifts: dict = {1: g1h}
    queue = deque([1])
    edges = []
    while queue:
        i = queue.popleft()
        a = P.sides[i - 1].center
        for L, Lh, Lhinv in moves:
            j = lookup.get(ProjectivePoint(mat_vec(L, a), check=False).key())
            if j is None:
                raise LiftMismatch("even symmetry maps a neighbor center off the neighbor set")
            if j not in lifts:
                lifts[j] = Lh * lifts[i] * Lhinv
                queue.append(j)
            else:
                edges.append((i, j, Lh, Lhinv))
    if len(lifts) != len(P.sides):
        raise LiftMismatch("transport did not reach every side")
    for i, j, Lh, Lhinv in edges:
        if not (Lh * lifts[i] * Lhinv) == lifts[j]:
            raise LiftMismatch(f"two candidate lifts for side {j}")
    return SpinLiftSet(tuple(lifts[i] for i in range(1, len(P.sides) + 1)))


def davis_isometry():
    """The order-15 symmetry f and its lift f^ (diagonal quaternionic matrix)."""
    D, t, k = _davis_constants()
    h = rational(1, 2)
    f_hat = SpinElement4([[Quaternion(-t / 2, -h, h - t / 2, 0), 0],
                          [0, Quaternion(-h, t / 2, 0, h - t / 2)]])
    return eta4(f_hat), f_hat


@lru_cache(maxsize=4)
def davis_case(cache_path: str | None = None, with_symmetry: bool = True,
               check_lifts: bool = True) -> CaseStudy:
    """Full Davis construction: polytope, presentation, lifts and the order-15 lift."""
    from . import cache as cache_mod
    symmetry = pairing_data = None
    if cache_path:
        try:
            payload = cache_mod.load(cache_path)
            symmetry, pairing_data = payload["symmetry"], payload["neighbors"]
        except FileNotFoundError:
            pass
        except cache_mod.CorruptCache as exc:
            log.warning("ignoring cache %s: %s", cache_path, exc)
    P, sym, rho = davis_sides(symmetry, pairing_data, with_symmetry=with_symmetry)
    if cache_path and (symmetry is None or pairing_data is None) and sym is not None:
        try:
            cache_mod.save(cache_path, sym, [s.center for s in P.sides])
        except OSError as exc:
            log.warning("could not write cache %s: %s", cache_path, exc)
    pres = ridge_relations(P)
    lifts = davis_spin_lifts(P)
    if check_lifts:
        for s, l in zip(P.sides, lifts.lifts):
            if not _mat_equal(eta4(l), s.pairing):
                raise LiftMismatch(f"eta(g^_{s.index}) differs from g_{s.index}")
    P = P.with_lifts(lifts.lifts)
    f, f_hat = davis_isometry()
    return CaseStudy("davis", P, pres, lifts, f, f_hat, 15,
                     {"symmetry": sym, "reflections": rho, "simplex": davis_simplex_data()})


# ---------------------------------------------------------------------------
# Decagon surface


def _rotation3(theta: RationalAngle):
    c, s = trig_value(theta, "cos"), trig_value(theta, "sin")
    spec = merge_specs(c.spec, s.spec)
    c, s = spec(c), spec(s)
    z, o = spec.zero(), spec.one()
    return ((c, -s, z), (s, c, z), (z, z, o))


@lru_cache(maxsize=1)
def decagon_case() -> CaseStudy:
    """Genus-2 surface glued from a regular decagon by opposite-side translations."""
    D, t, k = _davis_constants()
    s5 = D.gen(0)
    rho = _rotation3(RationalAngle(1, 10))
    spec = merge_specs(rho[0][0].spec, D)
    rho = tuple(tuple(spec(x) for x in r) for r in rho)
    s5, k = spec(s5), spec(k)
    root = exact_sqrt(20 + 9 * s5)
    if root is None:
        raise ConstructionError("sqrt(20 + 9 sqrt 5) is missing from the tower")
    z, o = spec.zero(), spec.one()
    g1 = ((o, z, z), (z, 6 + 3 * s5, -2 * root), (z, -2 * root, 6 + 3 * s5))
    rho_inv = transpose(rho)
    gens = [g1]
    for _ in range(9):
        gens.append(mat_mul(mat_mul(rho, gens[-1]), rho_inv))
    e3 = (z, z, o)
    neigh = [mat_vec(g, e3) for g in gens]

    def opp(i: int) -> int:
        return (i + 4) % 10 + 1

    vroot = exact_sqrt(2 + s5)
    if vroot is None:
        raise ConstructionError("sqrt(2 + sqrt 5) is missing from the tower")
    v0 = (2 * vroot, z, 2 + s5)
    verts = [v0]
    for _ in range(9):
        verts.append(mat_vec(rho, verts[-1]))
    mids = [tuple(x + y for x, y in zip(e3, a)) for a in neigh]
    cells = {0: verts, 1: mids, 2: [e3]}
    P = build_polytope(2, e3, neigh, gens, opp, cells)
    pres = ridge_relations(P)
    # lifts
    w = root_of_unity(RationalAngle(1, 20))
    rho_hat = SpinElement2([[w, 0], [0, w.conj()]])
    rho_hat_inv = rho_hat.group_inverse()
    I = ComplexValue(spec.zero(), spec.one())
    a = ComplexValue(-(3 + s5) / 2)
    b = I * k
    g1_hat = SpinElement2([[a, -b], [b, a]])
    lifts = [g1_hat]
    for _ in range(9):
        lifts.append(rho_hat * lifts[-1] * rho_hat_inv)
    P = P.with_lifts(lifts)
    f = mat_mul(rho, rho)
    f_hat = -(rho_hat * rho_hat)
    printed = ((7, 3, 9, 5, 1), (5, 9, 3, 7, 1))
    return CaseStudy("decagon", P, pres, SpinLiftSet(tuple(lifts)), f, f_hat, 5,
                     {"rho": rho, "rho_hat": rho_hat, "printed_vertex_relators": printed})
