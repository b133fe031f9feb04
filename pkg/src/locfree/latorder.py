"""Z-orders and right ideals in rational quaternion algebras.

Orders are full rank-4 lattices in coordinates (1, i, j, k) that contain 1 and
are closed under multiplication; the reduced discriminant d satisfies
det(trd(e_i e_j)) = +-d^2 on any basis.  Maximal orders are built by saturating
an obvious starting order prime by prime: first the radical-idealizer step,
then, where that stalls at a split prime, an idempotent-splitting step.  Right
ideals, their left orders, isomorphism testing by short-vector search, and
breadth-first enumeration of the ideal class set all live here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import isqrt, lcm

from .linalg import Lattice, mat_det, mat_inv, mat_mul, solve_mod_lattice
from .numtheory import (
    factor, is_prime, kronecker, primes, sqrt_fraction, squarefree_part,
    valuation,
)
from .quatalg import Quaternion, QuaternionAlgebra

__all__ = [
    "GramMatrix", "QuatOrder", "RightIdeal", "IsoResult",
    "short_vectors", "maximal_order", "right_ideals_of_norm",
    "isomorphic_ideals", "reduce_ideal", "class_set",
    "eichler_class_number", "ideal_mul",
]


def _quat(alg: QuaternionAlgebra, v) -> Quaternion:
    return alg.quaternion(*v)


def _rmul_matrix(alg: QuaternionAlgebra, q: Quaternion):
    """Matrix M with vec(x*q) = vec(x) M for row vectors x."""
    return [list((e * q).coords) for e in alg.basis()]


def _lmul_matrix(alg: QuaternionAlgebra, q: Quaternion):
    """Matrix M with vec(q*x) = vec(x) M for row vectors x."""
    return [list((q * e).coords) for e in alg.basis()]


def _lattice_product(alg: QuaternionAlgebra, a: Lattice, b: Lattice) -> Lattice:
    rows = []
    for u in a.basis():
        qu = _quat(alg, u)
        for v in b.basis():
            rows.append((qu * _quat(alg, v)).coords)
    return Lattice(rows)


def _conj_lattice(alg: QuaternionAlgebra, a: Lattice) -> Lattice:
    return Lattice([_quat(alg, u).conj().coords for u in a.basis()])


def _constrained_lattice(bound: Lattice, conditions) -> Lattice:
    """{x in bound : x M lies in target, for every (M, target) condition}."""
    rows = [list(r) for r in bound.basis()]
    for m, target in conditions:
        d = mat_mul(mat_mul(rows, m), mat_inv(target.basis()))
        ell = lcm(*[x.denominator for row in d for x in row])
        a = [[int(x * ell) for x in row] for row in d]
        z = solve_mod_lattice(a, ell)
        rows = mat_mul([[Fraction(v) for v in row] for row in z], rows)
    return Lattice(rows)


@dataclass(frozen=True)
class GramMatrix:
    """Symmetric exact-rational Gram matrix of a quadratic form."""

    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        n = len(self.entries)
        assert all(len(r) == n for r in self.entries)
        assert all(self.entries[i][j] == self.entries[j][i]
                   for i in range(n) for j in range(n))

    @classmethod
    def from_nrd(cls, alg: QuaternionAlgebra, basis_rows) -> "GramMatrix":
        """Gram of the reduced norm form: v G v^T = nrd(sum v_i b_i)."""
        quats = [_quat(alg, r) for r in basis_rows]
        return cls(tuple(
            tuple((p * q.conj()).trd() / 2 for q in quats) for p in quats))

    @property
    def n(self) -> int:
        return len(self.entries)

    def value(self, v) -> Fraction:
        return sum(self.entries[i][j] * v[i] * v[j]
                   for i in range(self.n) for j in range(self.n))

    def is_positive_definite(self) -> bool:
        try:
            _ldl(self.entries)
        except ValueError:
            return False
        return True


def _ldl(g):
    """G = U^T diag(d) U with unit upper-triangular U; fails unless G is PD."""
    n = len(g)
    d = [Fraction(0)] * n
    u = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        dv = g[i][i] - sum(d[k] * u[k][i] * u[k][i] for k in range(i))
        if dv <= 0:
            raise ValueError("matrix is not positive definite")
        d[i] = dv
        u[i][i] = Fraction(1)
        for j in range(i + 1, n):
            u[i][j] = (g[i][j] - sum(d[k] * u[k][i] * u[k][j]
                                     for k in range(i))) / dv
    return d, u


def _floor_shifted_sqrt(f: Fraction, r: Fraction) -> int:
    """floor(f + sqrt(r)) for rational f and rational r >= 0, exactly."""
    s = isqrt(r.numerator * r.denominator) // r.denominator
    n = f.numerator // f.denominator + s + 1
    while True:
        diff = n - f
        if diff <= 0 or diff * diff <= r:
            return n
        n -= 1


def short_vectors(g: GramMatrix, bound) -> list[tuple[int, ...]]:
    """All nonzero integer v with v G v^T <= bound, in a fixed deterministic order.

    Exact Fincke-Pohst enumeration on the LDL decomposition; rejects
    indefinite (or semidefinite) input.
    """
    bound = Fraction(bound)
    d, u = _ldl(g.entries)
    n = g.n
    out = []
    coords = [0] * n

    def descend(level: int, remaining: Fraction):
        if level < 0:
            if any(coords):
                out.append(tuple(coords))
            return
        center = sum(u[level][j] * coords[j] for j in range(level + 1, n))
        radius2 = remaining / d[level]
        lo = -_floor_shifted_sqrt(center, radius2)
        hi = _floor_shifted_sqrt(-center, radius2)
        for x in range(lo, hi + 1):
            coords[level] = x
            t = x + center
            descend(level - 1, remaining - d[level] * t * t)
        coords[level] = 0

    descend(n - 1, bound)
    return out


class QuatOrder:
    """Order in a rational quaternion algebra: unital, multiplicatively closed."""

    def __init__(self, algebra: QuaternionAlgebra, lattice: Lattice):
        assert lattice.n == 4
        self.algebra = algebra
        self.lattice = lattice
        if not lattice.contains((1, 0, 0, 0)):
            raise ValueError("an order must contain 1")
        quats = [_quat(algebra, r) for r in lattice.basis()]
        for p in quats:
            for q in quats:
                if not lattice.contains((p * q).coords):
                    raise ValueError("lattice is not closed under multiplication")
        self._basis_quats = quats
        gram = [[(p * q).trd() for q in quats] for p in quats]
        det = mat_det(gram)
        assert det != 0 and det.denominator == 1
        self.disc_sign = 1 if det > 0 else -1
        root = sqrt_fraction(abs(det))
        assert root is not None and root.denominator == 1, \
            "trace pairing determinant must be a perfect square"
        self.reduced_disc = int(root)

    def basis_quaternions(self) -> list[Quaternion]:
        return self._basis_quats

    @property
    def is_maximal(self) -> bool:
        return self.reduced_disc == self.algebra.reduced_disc

    def contains(self, q: Quaternion) -> bool:
        return self.lattice.contains(q.coords)

    def nrd_gram(self) -> GramMatrix:
        return GramMatrix.from_nrd(self.algebra, self.lattice.basis())

    def unit_group_order(self) -> int:
        """Number of units; finite (hence meaningful) only for definite algebras."""
        if not self.algebra.is_definite:
            raise ValueError("unit group is infinite for indefinite algebras")
        return len(short_vectors(self.nrd_gram(), 1))

    def __eq__(self, other):
        return (isinstance(other, QuatOrder)
                and self.algebra == other.algebra
                and self.lattice == other.lattice)

    def __hash__(self):
        return hash((self.algebra, self.lattice))

    def __repr__(self):
        return f"QuatOrder(disc={self.reduced_disc})"

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra.to_json(),
            "basis": [[_q_str(x) for x in row] for row in self.lattice.basis()],
            "reduced_disc": str(self.reduced_disc),
            "maximal": self.is_maximal,
        }


def _q_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class RightIdeal:
    """Full lattice I with I * O inside I, for an order O; nrd(I)^2 = [O : I]."""

    def __init__(self, order: QuatOrder, lattice: Lattice):
        assert lattice.n == 4
        self.order = order
        self.lattice = lattice
        alg = order.algebra
        basis = [_quat(alg, r) for r in lattice.basis()]
        for v in basis:
            for e in order.basis_quaternions():
                if not lattice.contains((v * e).coords):
                    raise ValueError("lattice is not a right module over the order")
        ratio = lattice.covolume() / order.lattice.covolume()
        root = sqrt_fraction(ratio)
        assert root is not None, "lattice index must be a perfect square"
        self.nrd = root
        self._left_order = None

    @classmethod
    def unit_ideal(cls, order: QuatOrder) -> "RightIdeal":
        return cls(order, order.lattice)

    @classmethod
    def from_generators(cls, order: QuatOrder, gens) -> "RightIdeal":
        rows = []
        for g in gens:
            for e in order.basis_quaternions():
                rows.append((g * e).coords)
        return cls(order, Lattice(rows))

    @classmethod
    def principal(cls, order: QuatOrder, x: Quaternion) -> "RightIdeal":
        if x.is_zero():
            raise ValueError("principal ideal requires a nonzero generator")
        return cls.from_generators(order, [x])

    def basis_quaternions(self) -> list[Quaternion]:
        return [_quat(self.order.algebra, r) for r in self.lattice.basis()]

    def left_order(self) -> QuatOrder:
        """O_L(I) = (1/nrd I) I conj(I); valid since the right order is maximal."""
        if self._left_order is None:
            assert self.order.is_maximal
            alg = self.order.algebra
            prod = _lattice_product(alg, self.lattice,
                                    _conj_lattice(alg, self.lattice))
            self._left_order = QuatOrder(alg, prod.scale(1 / self.nrd))
            assert self._left_order.reduced_disc == self.order.reduced_disc
        return self._left_order

    def nrd_gram(self) -> GramMatrix:
        return GramMatrix.from_nrd(self.order.algebra, self.lattice.basis())

    def is_integral(self) -> bool:
        return self.order.lattice.contains_lattice(self.lattice)

    def __eq__(self, other):
        return (isinstance(other, RightIdeal)
                and self.order == other.order
                and self.lattice == other.lattice)

    def __hash__(self):
        return hash((self.order, self.lattice))

    def __repr__(self):
        return f"RightIdeal(nrd={self.nrd})"

    def to_json(self) -> dict:
        return {
            "basis": [[_q_str(x) for x in row] for row in self.lattice.basis()],
            "nrd": _q_str(self.nrd),
        }


def ideal_mul(i: RightIdeal, j: RightIdeal) -> RightIdeal:
    """Product lattice I*J; needs right order of I = left order of J."""
    if i.order.algebra != j.order.algebra:
        raise ValueError("ideals live in different algebras")
    if i.order.lattice != j.left_order().lattice:
        raise ValueError("right order of the first factor must equal "
                         "the left order of the second")
    out = RightIdeal(j.order, _lattice_product(i.order.algebra,
                                               i.lattice, j.lattice))
    assert out.nrd == i.nrd * j.nrd
    return out


# --- maximal orders by prime-wise saturation ---

_MAXIMAL_CACHE: dict[QuaternionAlgebra, QuatOrder] = {}


def _starting_order(b: QuaternionAlgebra) -> QuatOrder:
    rows = [[Fraction(0)] * 4 for _ in range(4)]
    rows[0][0] = Fraction(1)
    scales = []
    for q in (b.a, b.b):
        _, f = squarefree_part(q.numerator * q.denominator)
        scales.append(Fraction(q.denominator, f))
    rows[1][1] = scales[0]
    rows[2][2] = scales[1]
    rows[3][3] = scales[0] * scales[1]
    return QuatOrder(b, Lattice(rows))


def _structure_table(o: QuatOrder):
    """Integer coefficients of b_i b_j in the order basis."""
    binv = mat_inv(o.lattice.basis())
    quats = o.basis_quaternions()
    table = []
    for p in quats:
        row = []
        for q in quats:
            coeffs = mat_mul([list((p * q).coords)], binv)[0]
            assert all(c.denominator == 1 for c in coeffs)
            row.append([int(c) for c in coeffs])
        table.append(row)
    return table


def _fq_reduce(vectors, q: int):
    """Reduced echelon basis of the span of the given vectors over F_q."""
    basis = []
    for v in vectors:
        v = [x % q for x in v]
        for piv, b in basis:
            if v[piv]:
                c = v[piv]
                v = [(x - c * y) % q for x, y in zip(v, b)]
        if any(v):
            piv = next(i for i, x in enumerate(v) if x)
            inv = pow(v[piv], -1, q)
            v = [(x * inv) % q for x in v]
            for k, (p2, b2) in enumerate(basis):
                if b2[piv]:
                    c = b2[piv]
                    basis[k] = (p2, [(x - c * y) % q for x, y in zip(b2, v)])
            basis.append((piv, v))
    basis.sort()
    return basis


def _fq_in_span(v, basis, q: int) -> bool:
    v = [x % q for x in v]
    for piv, b in basis:
        if v[piv]:
            c = v[piv]
            v = [(x - c * y) % q for x, y in zip(v, b)]
    return not any(v)


def _subspaces(q: int, n: int, r: int):
    """All r-dimensional subspaces of F_q^n as reduced-echelon row lists."""
    for pivots in combinations(range(n), r):
        free = [(i, j) for i in range(r) for j in range(n)
                if j > pivots[i] and j not in pivots]
        for vals in product(range(q), repeat=len(free)):
            rows = [[0] * n for _ in range(r)]
            for i, p in enumerate(pivots):
                rows[i][p] = 1
            for (i, j), v in zip(free, vals):
                rows[i][j] = v
            yield rows


def _radical_coords(o: QuatOrder, q: int):
    """Basis (mod-q coordinate vectors) of the radical of O/qO."""
    table = _structure_table(o)

    def mult(u, v):
        w = [0, 0, 0, 0]
        for i in range(4):
            if not u[i]:
                continue
            for j in range(4):
                if not v[j]:
                    continue
                c = u[i] * v[j]
                for k in range(4):
                    w[k] += c * table[i][j][k]
        return [x % q for x in w]

    if q >= 5:
        # char > dim: radical = kernel of the regular trace form (Dickson)
        reg_tr = [sum(table[s][t][t] for t in range(4)) % q for s in range(4)]
        t_form = [[sum(table[i][j][s] * reg_tr[s] for s in range(4)) % q
                   for j in range(4)] for i in range(4)]
        kernel = []
        for rows in _subspaces(q, 4, 1):
            v = rows[0]
            if all(sum(v[i] * t_form[i][j] for i in range(4)) % q == 0
                   for j in range(4)):
                kernel.append(v)
        return [b for _, b in _fq_reduce(kernel, q)]

    # small characteristic: the radical is the largest nilpotent two-sided
    # ideal; search subspaces by descending dimension (q^4 <= 81 elements)
    units = [[1 if t == s else 0 for t in range(4)] for s in range(4)]
    for r in (3, 2, 1):
        for rows in _subspaces(q, 4, r):
            span = _fq_reduce(rows, q)
            ok = True
            for u in rows:
                for e in units:
                    if not (_fq_in_span(mult(u, e), span, q)
                            and _fq_in_span(mult(e, u), span, q)):
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                continue
            power = rows
            nilpotent = False
            for _ in range(5):
                nxt = [mult(u, v) for u in power for v in rows]
                reduced = _fq_reduce(nxt, q)
                if not reduced:
                    nilpotent = True
                    break
                power = [b for _, b in reduced]
            if nilpotent:
                return rows
    return []


def _lift_span(o: QuatOrder, coord_vectors, q: int) -> Lattice:
    """Lattice spanned by q*O and lifts of mod-q coordinate vectors."""
    base = o.lattice.basis()
    rows = [[Fraction(q) * x for x in r] for r in base]
    for v in coord_vectors:
        rows.append([sum(Fraction(v[s]) * base[s][t] for s in range(4))
                     for t in range(4)])
    return Lattice(rows)


def _idealizer_orders(o: QuatOrder, ideal: Lattice, q: int):
    """Left then right idealizer of a lattice squeezed between qO and O."""
    alg = o.algebra
    bound = ideal.scale(Fraction(1, q))
    gens = [_quat(alg, v) for v in ideal.basis()]
    left = _constrained_lattice(
        bound, [(_rmul_matrix(alg, g), ideal) for g in gens])
    right = _constrained_lattice(
        bound, [(_lmul_matrix(alg, g), ideal) for g in gens])
    return [QuatOrder(alg, lat) for lat in (left, right)]


def _saturate_step(o: QuatOrder, q: int) -> QuatOrder | None:
    cur = valuation(o.reduced_disc, q)
    rad = _radical_coords(o, q)
    if rad:
        ideal = _lift_span(o, rad, q)
        for cand in _idealizer_orders(o, ideal, q):
            # the radical is two-sided, so its idealizers contain O
            assert cand.lattice.contains_lattice(o.lattice)
            if valuation(cand.reduced_disc, q) < cur:
                return cand
    # Radical idealizers stall exactly on hereditary orders.  At a split q
    # the order is then Eichler of level q, and some zero divisor x gives a
    # lattice xO + qO with a strictly larger idealizer.  The lattice only
    # depends on the line through x mod q, so scan projective
    # representatives and try every distinct lattice.
    basis = o.basis_quaternions()
    qrows = [[Fraction(q) * v for v in r] for r in o.lattice.basis()]
    seen = set()
    for c in product(range(q), repeat=4):
        if not any(c) or next(v for v in c if v) != 1:
            continue
        x = sum((b.scale(ci) for ci, b in zip(c, basis)), o.algebra.zero())
        if int(x.nrd()) % q:
            continue
        ideal = Lattice([(x * b).coords for b in basis] + qrows)
        if ideal in seen:
            continue
        seen.add(ideal)
        for cand in _idealizer_orders(o, ideal, q):
            if valuation(cand.reduced_disc, q) < cur:
                return cand
    return None


def maximal_order(b: QuaternionAlgebra) -> QuatOrder:
    """A maximal order of a rational quaternion algebra, by saturation.

    The result is verified: its reduced discriminant equals the product of
    the finite ramified primes of the algebra.
    """
    cached = _MAXIMAL_CACHE.get(b)
    if cached is not None:
        return cached
    o = _starting_order(b)
    target = b.reduced_disc
    for p, _ in factor(o.reduced_disc).factors:
        goal = valuation(target, p)
        while valuation(o.reduced_disc, p) > goal:
            nxt = _saturate_step(o, p)
            assert nxt is not None, f"saturation stalled at {p}"
            o = nxt
    assert o.reduced_disc == target, "maximal order verification failed"
    _MAXIMAL_CACHE[b] = o
    return o


def right_ideals_of_norm(o: QuatOrder, q: int) -> list[RightIdeal]:
    """The q+1 integral right ideals of reduced norm q in a maximal order.

    Requires q prime and unramified (q does not divide the reduced
    discriminant); the ideals correspond to the projective line over F_q.
    """
    if not is_prime(q):
        raise ValueError("norm must be prime")
    if o.reduced_disc % q == 0:
        raise ValueError("prime divides the reduced discriminant (ramified)")
    if not o.is_maximal:
        raise ValueError("order must be maximal")
    basis = o.basis_quaternions()
    qrows = [[Fraction(q) * x for x in r] for r in o.lattice.basis()]
    target_covol = o.lattice.covolume() * q * q
    seen = {}
    for c in product(range(q), repeat=4):
        if not any(c):
            continue
        x = sum((b.scale(ci) for ci, b in zip(c, basis)), o.algebra.zero())
        if int(x.nrd()) % q:
            continue
        lat = Lattice([(x * b).coords for b in basis] + qrows)
        if lat.covolume() != target_covol:
            continue
        if lat not in seen:
            seen[lat] = RightIdeal(o, lat)
    out = sorted(seen.values(), key=lambda i: i.lattice.key())
    assert len(out) == q + 1, f"expected {q + 1} ideals, found {len(out)}"
    return out


@dataclass(frozen=True)
class IsoResult:
    """Outcome of an ideal isomorphism test, with the witness when it exists."""

    isomorphic: bool
    witness: Quaternion | None

    def __bool__(self):
        return self.isomorphic


def isomorphic_ideals(i: RightIdeal, j: RightIdeal) -> IsoResult:
    """Decide J = xI for some invertible x; definite maximal orders only.

    Searches y in J conj(I) with nrd(y) = nrd(I) nrd(J); then x = y/nrd(I),
    and x I = J is re-checked by lattice equality.
    """
    if i.order != j.order:
        raise ValueError("ideals must share an order")
    if not i.order.algebra.is_definite:
        raise ValueError("isomorphism search requires a definite algebra")
    if not i.order.is_maximal:
        raise ValueError("order must be maximal")
    alg = i.order.algebra
    target = i.nrd * j.nrd
    c = _lattice_product(alg, j.lattice, _conj_lattice(alg, i.lattice))
    basis = c.basis()
    gram = GramMatrix.from_nrd(alg, basis)
    for v in short_vectors(gram, target):
        if gram.value(v) != target:
            continue
        y = _quat(alg, [sum(Fraction(v[s]) * basis[s][t] for s in range(4))
                        for t in range(4)])
        x = y.scale(1 / i.nrd)
        moved = Lattice([(x * b).coords for b in i.basis_quaternions()])
        if moved == j.lattice:
            return IsoResult(True, x)
    return IsoResult(False, None)


def reduce_ideal(i: RightIdeal) -> RightIdeal:
    """Isomorphic ideal of small norm: apply conj(y)/nrd(I) for a shortest y."""
    gram = i.nrd_gram()
    bound = i.nrd
    vectors = []
    while not vectors:
        vectors = short_vectors(gram, bound)
        bound *= 2
    basis = i.basis_quaternions()
    best = min(vectors, key=lambda v: (gram.value(v), v))
    y = sum((b.scale(c) for c, b in zip(best, basis)),
            i.order.algebra.zero())
    x = y.conj().scale(1 / i.nrd)
    return RightIdeal(i.order, Lattice([(x * b).coords for b in basis]))


def class_set(o: QuatOrder, neighbor_primes=None) -> list[RightIdeal]:
    """Right ideal classes of a definite maximal order, one reduced ideal each.

    Breadth-first closure under norm-q neighbors (q prime to the
    discriminant), stopping when a full layer brings nothing new.
    """
    if not o.algebra.is_definite:
        raise ValueError("class set enumeration requires a definite algebra")
    if not o.is_maximal:
        raise ValueError("order must be maximal")
    if neighbor_primes is None:
        neighbor_primes = (next(q for q in primes() if o.reduced_disc % q),)
    for q in neighbor_primes:
        if o.reduced_disc % q == 0:
            raise ValueError("neighbor primes must not divide the discriminant")
    reps = [RightIdeal.unit_ideal(o)]
    frontier = list(reps)
    while frontier:
        new = []
        for i in frontier:
            left = i.left_order()
            for q in neighbor_primes:
                for k in right_ideals_of_norm(left, q):
                    cand = reduce_ideal(ideal_mul(k, i))
                    if not any(isomorphic_ideals(cand, r) for r in reps):
                        reps.append(cand)
                        new.append(cand)
        frontier = new
    return reps


def eichler_class_number(p: int) -> int:
    """Class number of a maximal order in the algebra ramified at {p, inf}."""
    if not is_prime(p):
        raise ValueError("argument must be prime")
    h = (Fraction(p - 1, 12)
         + Fraction(1, 3) * (1 - kronecker(-3, p))
         + Fraction(1, 4) * (1 - kronecker(-4, p)))
    assert h.denominator == 1, "class number formula must be integral"
    return int(h)
