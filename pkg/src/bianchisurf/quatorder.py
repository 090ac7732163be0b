"""Quaternion orders attached to circle stabilizers.

From a reduced circle (a, b, c0) over Q(sqrt(-d)) we build the rank-4 order
in the algebra (-d, D/Q) whose unit group realizes the stabilizer, then
extract its local data two independent ways: closed-form symbol/index
formulas, and brute-force enumerations of the discriminant form modulo p.
The two routes deliberately share nothing beyond the order itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

import numpy as np

from .hermitian import HermitianCircle, Mat2, QuadExt
from .ntkernel import is_prime, kronecker_at_two, legendre


@dataclass(frozen=True)
class QuaternionAlgebra:
    """The rational quaternion algebra with i^2 = a_alg, j^2 = b_alg,
    ij = -ji; here always (a_alg, b_alg) = (-d, D) with D > 0."""

    a_alg: int
    b_alg: int

    @property
    def d(self) -> int:
        return -self.a_alg

    @property
    def D(self) -> int:
        return self.b_alg


@dataclass(frozen=True)
class QuatElement:
    """t + x i + y j + z ij with rational coordinates."""

    alg: QuaternionAlgebra
    t: Fraction
    x: Fraction
    y: Fraction
    z: Fraction

    @staticmethod
    def of(alg: QuaternionAlgebra, t, x=0, y=0, z=0) -> "QuatElement":
        return QuatElement(alg, Fraction(t), Fraction(x), Fraction(y), Fraction(z))

    def coords(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.t, self.x, self.y, self.z)

    def __add__(self, o: "QuatElement") -> "QuatElement":
        return QuatElement(self.alg, self.t + o.t, self.x + o.x, self.y + o.y, self.z + o.z)

    def __sub__(self, o: "QuatElement") -> "QuatElement":
        return QuatElement(self.alg, self.t - o.t, self.x - o.x, self.y - o.y, self.z - o.z)

    def __neg__(self) -> "QuatElement":
        return QuatElement(self.alg, -self.t, -self.x, -self.y, -self.z)

    def scale(self, k) -> "QuatElement":
        k = Fraction(k)
        return QuatElement(self.alg, self.t * k, self.x * k, self.y * k, self.z * k)

    def __mul__(self, o: "QuatElement") -> "QuatElement":
        if self.alg != o.alg:
            raise ValueError("elements of different algebras")
        al, be = self.alg.a_alg, self.alg.b_alg
        t1, x1, y1, z1 = self.coords()
        t2, x2, y2, z2 = o.coords()
        return QuatElement(
            self.alg,
            t1 * t2 + al * x1 * x2 + be * y1 * y2 - al * be * z1 * z2,
            t1 * x2 + x1 * t2 - be * (y1 * z2 - z1 * y2),
            t1 * y2 + y1 * t2 + al * (x1 * z2 - z1 * x2),
            t1 * z2 + z1 * t2 + (x1 * y2 - y1 * x2),
        )

    def conjugate(self) -> "QuatElement":
        return QuatElement(self.alg, self.t, -self.x, -self.y, -self.z)

    def trd(self) -> Fraction:
        return 2 * self.t

    def nrd(self) -> Fraction:
        al, be = self.alg.a_alg, self.alg.b_alg
        return self.t**2 - al * self.x**2 - be * self.y**2 + al * be * self.z**2

    def delta(self) -> Fraction:
        """Discriminant form trd^2 - 4 nrd."""
        return self.trd() ** 2 - 4 * self.nrd()


@dataclass(frozen=True)
class OrderParams:
    alpha1: int
    alpha2: int
    beta: int
    d0: int
    b: int
    a: int
    c0: int


@dataclass(frozen=True)
class QuaternionOrder:
    algebra: QuaternionAlgebra
    basis: tuple[QuatElement, QuatElement, QuatElement, QuatElement]
    params: OrderParams

    @property
    def d(self) -> int:
        return self.algebra.d

    @property
    def D(self) -> int:
        return self.algebra.D


def lattice_params(a: int, b: int, c0: int, d: int, d0: int) -> tuple[int, int, int]:
    """Upper-triangular basis [[alpha1, beta], [0, alpha2]] of the lattice
    {(m, l): a | b*d*m + c0*l}, with 0 <= beta < alpha1.

    alpha1*alpha2 = a/d0 is the lattice index in Z^2.
    """
    g1 = gcd(a, b * d)
    alpha1 = a // g1
    alpha2 = g1 // d0
    rhs = -c0 * alpha2
    if rhs % g1:
        raise ValueError("lattice congruence unsolvable; gcd preconditions broken")
    if alpha1 == 1:
        beta = 0
    else:
        beta = (pow((b * d) // g1, -1, alpha1) * (rhs // g1)) % alpha1
    assert (b * d * beta + c0 * alpha2) % a == 0
    return alpha1, alpha2, beta


def build_order(circle: HermitianCircle) -> QuaternionOrder:
    """The order Z[1, alpha1(1+i)/2, beta(1+i)/2 + alpha2(bi+j)/a,
    (-bd - bi - j + ij)/(2 d0)] inside (-d, D/Q)."""
    d, a, b, c0 = circle.d, circle.a, circle.b, circle.c0
    D = b * b * d - a * c0
    if D <= 0:
        raise ValueError(f"definite algebra: b^2 d - a c0 = {D} <= 0")
    if a % 2 == 0:
        raise ValueError(f"parity violated: leading coefficient {a} is even")
    if gcd(gcd(a, b), c0) != 1:
        raise ValueError("circle coefficients are not coprime")
    d0 = gcd(gcd(a, d), c0)
    alpha1, alpha2, beta = lattice_params(a, b, c0, d, d0)
    alg = QuaternionAlgebra(-d, D)
    half = Fraction(1, 2)
    e0 = QuatElement.of(alg, 1)
    e1 = QuatElement(alg, alpha1 * half, alpha1 * half, Fraction(0), Fraction(0))
    e2 = QuatElement(
        alg,
        beta * half,
        beta * half + Fraction(alpha2 * b, a),
        Fraction(alpha2, a),
        Fraction(0),
    )
    e3 = QuatElement(
        alg,
        Fraction(-b * d, 2 * d0),
        Fraction(-b, 2 * d0),
        Fraction(-1, 2 * d0),
        Fraction(1, 2 * d0),
    )
    return QuaternionOrder(alg, (e0, e1, e2, e3), OrderParams(alpha1, alpha2, beta, d0, b, a, c0))


def _as_int(q: Fraction, what: str) -> int:
    if q.denominator != 1:
        raise ValueError(f"internal consistency: {what} = {q} is not an integer")
    return q.numerator


def trace_gram(order: QuaternionOrder) -> list[list[int]]:
    """The 4x4 integer matrix trd(e_i conj(e_j)) over the basis."""
    basis = order.basis
    out = []
    for ei in basis:
        row = []
        for ej in basis:
            row.append(_as_int((ei * ej.conjugate()).trd(), "trace pairing"))
        out.append(row)
    return out


def _det4(m: list[list[int]]) -> int:
    # cofactor expansion; 4x4 integer input is tiny
    def det3(a):
        return (
            a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
        )

    total = 0
    for j in range(4):
        minor = [[m[i][k] for k in range(4) if k != j] for i in range(1, 4)]
        term = m[0][j] * det3(minor)
        total += term if j % 2 == 0 else -term
    return total


def reduced_discriminant(order: QuaternionOrder) -> int:
    """Square root of |det trd(e_i conj(e_j))|; errors if not a square."""
    det = _det4(trace_gram(order))
    adet = abs(det)
    root = isqrt(adet)
    if root * root != adet:
        raise ValueError(f"internal consistency: trace-form determinant {det} is not a square")
    return root


def closure_defect(order: QuaternionOrder) -> list[tuple[int, int]]:
    """Pairs (i, j) whose basis product fails to have integer coordinates;
    empty for a genuine order."""
    cols = [e.coords() for e in order.basis]
    mat = [[cols[j][i] for j in range(4)] for i in range(4)]
    inv = _invert4(mat)
    bad = []
    for i, ei in enumerate(order.basis):
        for j, ej in enumerate(order.basis):
            prod = ei * ej
            coords = _apply4(inv, prod.coords())
            if any(c.denominator != 1 for c in coords):
                bad.append((i, j))
    return bad


def _invert4(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = 4
    aug = [[Fraction(m[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _apply4(m: list[list[Fraction]], v) -> tuple[Fraction, ...]:
    return tuple(sum(m[i][j] * v[j] for j in range(4)) for i in range(4))


def order_coordinates(order: QuaternionOrder, elem: QuatElement) -> tuple[Fraction, ...]:
    """Coordinates of elem in the order basis (rational in general)."""
    cols = [e.coords() for e in order.basis]
    mat = [[cols[j][i] for j in range(4)] for i in range(4)]
    return _apply4(_invert4(mat), elem.coords())


# --- closed-form local data ---------------------------------------------


def _check_local_prime(d: int, D: int, d0: int, p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    drd = d * D // (d0 * d0)
    if drd % p:
        raise ValueError(f"p = {p} does not divide the reduced discriminant {drd}")


def eichler_symbol_closed(d: int, D: int, d0: int, p: int) -> int:
    """Local symbol from the two residue formulas: legendre(-d,p) +
    legendre(D,p) for odd p, the mod-8 character value at p = 2."""
    _check_local_prime(d, D, d0, p)
    if p == 2:
        return kronecker_at_two(-d)
    val = legendre(-d, p) + legendre(D, p)
    if val not in (-1, 0, 1):
        raise ValueError(f"symbol sum {val} out of range; p cannot divide dD/d0^2")
    return val


def nrd_index(d: int, D: int, d0: int, p: int) -> int:
    """Index of local reduced norms among units: 2 iff p is odd and divides
    gcd(d/d0, D/d0), else 1."""
    _check_local_prime(d, D, d0, p)
    if p == 2:
        return 1
    return 2 if gcd(d // d0, D // d0) % p == 0 else 1


# --- brute-force local data ---------------------------------------------


def integral_form_coefficients(order: QuaternionOrder) -> tuple[list[int], list[int], dict[tuple[int, int], int]]:
    """(trace vector, norm diagonal, off-diagonal trace pairings), all
    integers, describing T(k) = sum k_i trd(e_i) and the norm form
    Q(k) = sum nrd(e_i) k_i^2 + sum_{i<j} trd(e_i conj(e_j)) k_i k_j."""
    basis = order.basis
    tvec = [_as_int(e.trd(), "basis trace") for e in basis]
    ndiag = [_as_int(e.nrd(), "basis norm") for e in basis]
    cross = {}
    for i in range(4):
        for j in range(i + 1, 4):
            cross[(i, j)] = _as_int((basis[i] * basis[j].conjugate()).trd(), "trace pairing")
    return tvec, ndiag, cross


def _form_values_mod(tvec, ndiag, cross, kgrid: tuple[np.ndarray, ...], mod: int) -> tuple[np.ndarray, np.ndarray]:
    """(T mod, Q mod) evaluated on broadcast coordinate arrays."""
    k0, k1, k2, k3 = kgrid
    ks = (k0, k1, k2, k3)
    T = sum((tvec[i] % mod) * ks[i] for i in range(4)) % mod
    Q = sum((ndiag[i] % mod) * ks[i] * ks[i] for i in range(4))
    for (i, j), v in cross.items():
        Q = Q + (v % mod) * ks[i] * ks[j]
    return T, Q % mod


def _projective_grids(p: int):
    """Coordinate arrays covering one representative of every line in
    F_p^4: (1,a,b,c), (0,1,b,c), (0,0,1,c), (0,0,0,1)."""
    ar = np.arange(p, dtype=np.int64)
    a, b, c = np.meshgrid(ar, ar, ar, indexing="ij", sparse=True)
    one = np.int64(1)
    zero = np.int64(0)
    yield (one, a, b, c)
    b2, c2 = np.meshgrid(ar, ar, indexing="ij", sparse=True)
    yield (zero, one, b2, c2)
    yield (zero, zero, one, ar)
    yield (zero, zero, zero, np.array([1], dtype=np.int64))


def _qr_table(p: int) -> np.ndarray:
    tab = np.full(p, -1, dtype=np.int64)
    tab[0] = 0
    tab[(np.arange(1, p, dtype=np.int64) ** 2) % p] = 1
    return tab


def _collect_symbols(sym: np.ndarray, into: set[int]) -> None:
    if np.any(sym == 0):
        into.add(0)
    if np.any(sym == 1):
        into.add(1)
    if np.any(sym == -1):
        into.add(-1)


@lru_cache(maxsize=4096)
def _local_value_sets(order: QuaternionOrder, p: int) -> tuple[frozenset, frozenset]:
    """Symbol value sets of (Delta, nrd) over the order reduced mod p, one
    shared enumeration pass.

    Odd p: one representative per line of F_p^4 suffices, since both forms
    are quadratic and scaling by lambda^2 preserves the symbol; the zero
    element contributes 0 to each set.  p = 2: full grid of coefficients
    mod 8 with the Kronecker-at-2 symbol; the nrd set is not collected
    there (unused).
    """
    tvec, ndiag, cross = integral_form_coefficients(order)
    if p == 2:
        ar = np.arange(8, dtype=np.int64)
        grids = [np.meshgrid(ar, ar, ar, ar, indexing="ij", sparse=True)]
        mod = 8
        d_seen: set[int] = set()
        n_seen: set[int] = set()
    else:
        grids = list(_projective_grids(p))
        mod = p
        d_seen = {0}
        n_seen = {0}
    tab = None if p == 2 else _qr_table(p)
    for kgrid in grids:
        T, Q = _form_values_mod(tvec, ndiag, cross, kgrid, mod)
        delta = (T * T - 4 * Q) % mod
        if p == 2:
            odd = delta[delta % 2 == 1] % 8
            if odd.size < delta.size:
                d_seen.add(0)
            if np.any((odd == 1) | (odd == 7)):
                d_seen.add(1)
            if np.any((odd == 3) | (odd == 5)):
                d_seen.add(-1)
        else:
            _collect_symbols(tab[delta], d_seen)
            _collect_symbols(tab[Q], n_seen)
        if len(d_seen) == 3 and (p == 2 or len(n_seen) == 3):
            break
    return frozenset(d_seen), frozenset(n_seen)


def eichler_symbol_bruteforce(order: QuaternionOrder, p: int) -> int:
    """Symbol from the value set of (Delta(alpha)/p) over the local order:
    {0} -> 0, {0, e} -> e; a full value set means the order is not
    residually determined at p and is reported as an error."""
    drd = reduced_discriminant(order)
    if drd % p:
        raise ValueError(f"p = {p} does not divide the reduced discriminant {drd}")
    seen = set(_local_value_sets(order, p)[0])
    if seen == {0}:
        return 0
    if seen == {0, 1}:
        return 1
    if seen == {0, -1}:
        return -1
    raise ValueError(f"not residually determined at p = {p}: value set {sorted(seen)}")


def nrd_index_bruteforce(order: QuaternionOrder, p: int) -> int:
    """Index of the nonzero local norm residues among units mod an odd p:
    squares only -> 2, all units -> 1."""
    if p == 2:
        raise ValueError("norm-index brute force is defined for odd p only")
    drd = reduced_discriminant(order)
    if drd % p:
        raise ValueError(f"p = {p} does not divide the reduced discriminant {drd}")
    nonzero = set(_local_value_sets(order, p)[1]) - {0}
    if nonzero == {1}:
        return 2
    if nonzero == {1, -1}:
        return 1
    raise ValueError(f"unexpected norm residue classes at p = {p}: {sorted(nonzero | {0})}")


# --- matrix representations ---------------------------------------------


def matrix_rep(elem: QuatElement) -> Mat2:
    """The splitting rho: 1 -> I, i -> diag(w, -w), j -> [[0, D],[1, 0]]
    with w = sqrt(-d); every image has the shape [[X, D Y],[conj(Y), conj(X)]]."""
    d, D = elem.alg.d, elem.alg.D
    X = QuadExt(d, elem.t, elem.x)
    Y = QuadExt(d, elem.y, elem.z)
    return Mat2(X, Y.scale(D), Y.conjugate(), X.conjugate())


def rho_prime(order: QuaternionOrder, elem: QuatElement) -> Mat2:
    """rho conjugated by T = [[a, b w],[0, 1]]; sends the order into
    matrices over O_d and its unit group into the circle stabilizer."""
    d, D = order.d, order.D
    a, b, c0 = order.params.a, order.params.b, order.params.c0
    t, x, y, z = elem.coords()
    e00 = QuadExt(d, t - b * d * z, x - b * y)
    e01 = QuadExt(d, Fraction(-2 * b * d * x + (d * b * b + D) * y, a), -c0 * z)
    e10 = QuadExt(d, a * y, -a * z)
    e11 = QuadExt(d, t + b * d * z, -x + b * y)
    return Mat2(e00, e01, e10, e11)


def norm_one_elements(order: QuaternionOrder, bound: int = 10, limit: int = 20) -> list[QuatElement]:
    """Order elements of reduced norm 1 with basis coordinates in
    [-bound, bound], excluding +-1, in deterministic scan order."""
    tvec, ndiag, cross = integral_form_coefficients(order)
    rng = np.arange(-bound, bound + 1, dtype=np.int64)
    k0, k1, k2, k3 = np.meshgrid(rng, rng, rng, rng, indexing="ij", sparse=True)
    ks = (k0, k1, k2, k3)
    Q = sum(ndiag[i] * ks[i] * ks[i] for i in range(4))
    for (i, j), v in cross.items():
        Q = Q + v * ks[i] * ks[j]
    hits = np.argwhere(Q == 1)
    out = []
    for idx in hits:
        coeffs = [int(c) - bound for c in idx]
        if coeffs[1] == coeffs[2] == coeffs[3] == 0:
            continue  # +-1 and 0-padded scalars are not useful witnesses
        elem = order.basis[0].scale(coeffs[0])
        for c, e in zip(coeffs[1:], order.basis[1:]):
            if c:
                elem = elem + e.scale(c)
        out.append(elem)
        if len(out) >= limit:
            break
    return out
