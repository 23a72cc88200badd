"""Coefficient algebra for systems of two coupled cubic Schrodinger equations.

A system is fixed by twelve real coupling constants c1..c12:

    i u1_t + u1_xx / 2 = c1 |u1|^2 u1 + c2 |u1|^2 u2 + c3 u1^2 conj(u2)
                       + c4 u1 |u2|^2 + c5 conj(u1) u2^2 + c6 |u2|^2 u2
    i u2_t + u2_xx / 2 = c7 |u1|^2 u1 + c8 |u1|^2 u2 + c9 u1^2 conj(u2)
                       + c10 u1 |u2|^2 + c11 conj(u1) u2^2 + c12 |u2|^2 u2

Every such system is equivalently a pair (C, (p, q, r)): a 3x3 matrix that
controls the conserved quadratic quantities, and a 3-vector that enters the
equations only through the real potential p|u1|^2 + 2q Re(conj(u1)u2) + r|u2|^2,
which a time-dependent gauge removes.  to_rep / from_rep implement the
bijection between the two descriptions.

An invertible real 2x2 change of unknowns v = M u acts on representations
through an induced 3x3 matrix D(M) of determinant 1:

    C'        = (1/det M) D(M) C D(M)^-1
    (p,q,r)'  = (1/det M) D(M) (p,q,r)

which on the symmetric form S = [[p, q], [q, r]] is exactly the congruence
S' = transpose(M^-1) S M^-1.

All container types are immutable.  Arithmetic stays exact (Fraction) whenever
every input entry is rational, and falls back to float64 otherwise; each
operation preserves exactness unless its docstring says it returns floats.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from math import gcd
from numbers import Rational

import numpy as np

from .errors import RankMismatch, SingularTransform

RANK_TOL = 1e-9  # relative singular-value cutoff in float mode
SIGN_TOL = 1e-12  # below this, a float entry counts as zero for sign choices


# ---------------------------------------------------------------------------
# small dense helpers, generic over Fraction / float entries


def mat3(rows):
    (a, b, c), (d, e, f), (g, h, i) = rows
    return ((a, b, c), (d, e, f), (g, h, i))


def mat3_mul(A, B):
    return tuple(
        tuple(sum(A[i][k] * B[k][j] for k in range(3)) for j in range(3))
        for i in range(3)
    )


def mat3_vec(A, v):
    return tuple(sum(A[i][k] * v[k] for k in range(3)) for i in range(3))


def mat3_scale(s, A):
    return tuple(tuple(s * x for x in row) for row in A)


def mat3_tr(A):
    return A[0][0] + A[1][1] + A[2][2]


def mat3_det(A):
    (a, b, c), (d, e, f), (g, h, i) = A
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def mat3_maxabs(A):
    return max(abs(x) for row in A for x in row)


def mat3_zero_like(exact):
    z = Fraction(0) if exact else 0.0
    return ((z, z, z), (z, z, z), (z, z, z))


def mat3_eye(exact=True):
    one = Fraction(1) if exact else 1.0
    zero = Fraction(0) if exact else 0.0
    return ((one, zero, zero), (zero, one, zero), (zero, zero, one))


def _rank_exact(A):
    # fraction-pivot row echelon; no tolerance needed
    rows = [list(r) for r in A]
    rank = 0
    for col in range(3):
        piv = next((i for i in range(rank, 3) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        lead = rows[rank]
        for i in range(rank + 1, 3):
            f = rows[i][col] / lead[col]
            for j in range(col, 3):
                rows[i][j] -= f * lead[j]
        rank += 1
    return rank


def mat3_rank(A, exact, tol=RANK_TOL):
    if exact:
        return _rank_exact(A)
    s = np.linalg.svd(np.array(A, dtype=float), compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


def kernel_basis_exact(A):
    """Basis of the null space of a rational 3x3 matrix.

    Vectors come back in smallest integer form, first nonzero entry positive.
    """
    rows = [[Fraction(x) for x in r] for r in A]
    pivots = []  # (row, col)
    rank = 0
    for col in range(3):
        piv = next((i for i in range(rank, 3) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        lead = rows[rank]
        inv = 1 / lead[col]
        rows[rank] = [x * inv for x in lead]
        for i in range(3):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        pivots.append((rank, col))
        rank += 1
    pivot_cols = [c for _, c in pivots]
    basis = []
    for free in range(3):
        if free in pivot_cols:
            continue
        v = [Fraction(0)] * 3
        v[free] = Fraction(1)
        for row, col in pivots:
            v[col] = -rows[row][free]
        basis.append(integerize(tuple(v)))
    return basis


def integerize(v):
    """Scale a rational vector to coprime integers, first nonzero positive."""
    denom = 1
    for x in v:
        denom = denom * Fraction(x).denominator // gcd(denom, Fraction(x).denominator)
    ints = [int(Fraction(x) * denom) for x in v]
    g = 0
    for n in ints:
        g = gcd(g, abs(n))
    if g > 1:
        ints = [n // g for n in ints]
    lead = next((n for n in ints if n != 0), 0)
    if lead < 0:
        ints = [-n for n in ints]
    return tuple(Fraction(n) for n in ints)


def _is_rational(x):
    return isinstance(x, Rational)


def _as_fraction(v):
    if isinstance(v, str):
        return Fraction(v)
    if _is_rational(v):
        return Fraction(v)
    # decimal-literal semantics for floats: 0.1 means 1/10
    return Fraction(Decimal(repr(float(v))))


# ---------------------------------------------------------------------------
# types


@dataclass(frozen=True)
class CubicSystem:
    """The twelve coupling constants, exact (Fraction) or float."""

    c: tuple
    exact: bool

    @classmethod
    def of(cls, values):
        values = tuple(values)
        if len(values) != 12:
            raise ValueError("a cubic system needs 12 coefficients, got %d" % len(values))
        exact = all(_is_rational(v) for v in values)
        if exact:
            return cls(tuple(Fraction(v) for v in values), True)
        return cls(tuple(float(v) for v in values), False)

    def as_float(self):
        if not self.exact:
            return self
        return CubicSystem(tuple(float(v) for v in self.c), False)


@dataclass(frozen=True)
class CnsaSystem:
    """Eight-parameter subclass whose cubic terms pair as 2|u|^2 v + u^2 conj(v)."""

    lam: tuple

    @classmethod
    def of(cls, values):
        values = tuple(values)
        if len(values) != 8:
            raise ValueError("need 8 parameters, got %d" % len(values))
        if all(_is_rational(v) for v in values):
            return cls(tuple(Fraction(v) for v in values))
        return cls(tuple(float(v) for v in values))


@dataclass(frozen=True)
class MatrixKernelRep:
    """Pair (C, (p,q,r)) identifying a cubic system."""

    c_matrix: tuple
    p: object
    q: object
    r: object
    exact: bool

    @classmethod
    def of(cls, c_matrix, p, q, r):
        entries = [x for row in c_matrix for x in row] + [p, q, r]
        exact = all(_is_rational(v) for v in entries)
        if exact:
            return cls(
                mat3([[Fraction(x) for x in row] for row in c_matrix]),
                Fraction(p), Fraction(q), Fraction(r), True)
        return cls(
            mat3([[float(x) for x in row] for row in c_matrix]),
            float(p), float(q), float(r), False)

    @property
    def pqr(self):
        return (self.p, self.q, self.r)

    def as_float(self):
        if not self.exact:
            return self
        return MatrixKernelRep(
            mat3([[float(x) for x in row] for row in self.c_matrix]),
            float(self.p), float(self.q), float(self.r), False)


@dataclass(frozen=True)
class UnknownChange:
    """Invertible real 2x2 change of unknowns v = M u."""

    a: object
    b: object
    c: object
    d: object
    exact: bool

    @classmethod
    def of(cls, rows):
        (a, b), (c, d) = rows
        exact = all(_is_rational(v) for v in (a, b, c, d))
        if exact:
            a, b, c, d = (Fraction(v) for v in (a, b, c, d))
        else:
            a, b, c, d = (float(v) for v in (a, b, c, d))
        m = cls(a, b, c, d, exact)
        if m.det == 0 or (not exact and abs(m.det) < SIGN_TOL * max(1.0, m.scale() ** 2)):
            raise SingularTransform("det M = %r" % (m.det,))
        return m

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    def scale(self):
        return max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))

    @property
    def rows(self):
        return ((self.a, self.b), (self.c, self.d))

    def compose(self, other):
        """Matrix product self @ other (apply other first)."""
        (a, b), (c, d) = self.rows
        (e, f), (g, h) = other.rows
        return UnknownChange.of(((a * e + b * g, a * f + b * h),
                                 (c * e + d * g, c * f + d * h)))

    def inverse(self):
        det = self.det
        return UnknownChange.of(((self.d / det, -self.b / det),
                                 (-self.c / det, self.a / det)))


IDENTITY_CHANGE = UnknownChange.of(((1, 0), (0, 1)))


# ---------------------------------------------------------------------------
# representation maps


def to_rep(sigma: CubicSystem) -> MatrixKernelRep:
    """Matrix-kernel representation of a coefficient vector."""
    c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12 = sigma.c
    C = ((c2 - c3, -c1 + c8 - c9, -c7),
         (c5, -c3 + c11, -c9),
         (c6, -c4 + c5 + c12, -c10 + c11))
    p = c8 - 2 * c9
    q = (-c2 + 2 * c3 - c10 + 2 * c11) / 2
    r = c4 - 2 * c5
    return MatrixKernelRep(C, p, q, r, sigma.exact)


def from_rep(rep: MatrixKernelRep) -> CubicSystem:
    """Inverse of to_rep; exact round trip in rational mode."""
    (a11, a12, a13), (a21, a22, a23), (a31, a32, a33) = rep.c_matrix
    p, q, r = rep.p, rep.q, rep.r
    c5 = a21
    c6 = a31
    c7 = -a13
    c9 = -a23
    c1 = p - a12 - a23
    c8 = p - 2 * a23
    c2 = q + (3 * a11 - a22 - a33) / 2
    c3 = q + (a11 - a22 - a33) / 2
    c10 = q + (a11 + a22 - 3 * a33) / 2
    c11 = q + (a11 + a22 - a33) / 2
    c4 = r + 2 * a21
    c12 = r + a21 + a32
    return CubicSystem((c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12),
                       rep.exact)


def embed_cnsa(sa: CnsaSystem) -> CubicSystem:
    l1, l2, l3, l4, l5, l6, l7, l8 = sa.lam
    return CubicSystem.of((3 * l1, 2 * l2, l2, 2 * l3, l3, 3 * l4,
                           3 * l5, 2 * l6, l6, 2 * l7, l7, 3 * l8))


def cnsa_matrix(sa: CnsaSystem):
    """3x3 matrix identifying a paired-coupling system; trace is always 0."""
    l1, l2, l3, l4, l5, l6, l7, l8 = sa.lam
    return ((l2, -3 * l1 + l6, -3 * l5),
            (l3, -l2 + l7, -l6),
            (3 * l4, 3 * l8 - l3, -l7))


def is_cnsa(rep: MatrixKernelRep, tol=SIGN_TOL) -> bool:
    """True iff the system has paired couplings: tr C = 0 and p = q = r = 0."""
    if rep.exact:
        return mat3_tr(rep.c_matrix) == 0 and rep.p == 0 and rep.q == 0 and rep.r == 0
    scale = max(mat3_maxabs(rep.c_matrix), abs(rep.p), abs(rep.q), abs(rep.r), 1.0)
    return (abs(mat3_tr(rep.c_matrix)) <= tol * scale
            and all(abs(x) <= tol * scale for x in rep.pqr))


# ---------------------------------------------------------------------------
# induced group action


def induced_matrix(m: UnknownChange):
    """The 3x3 action D(M) of a 2x2 change of unknowns, and its inverse.

    det D(M) = 1 for every invertible M, and D(-M) = D(M).
    """
    a, b, c, d = m.a, m.b, m.c, m.d
    det = m.det
    if det == 0:
        raise SingularTransform("det M = 0")
    D = mat3_scale(1 / det, ((d * d, -2 * d * c, c * c),
                             (-b * d, a * d + b * c, -a * c),
                             (b * b, -2 * a * b, a * a)))
    Dinv = mat3_scale(1 / det, ((a * a, 2 * a * c, c * c),
                                (a * b, a * d + b * c, c * d),
                                (b * b, 2 * b * d, d * d)))
    return D, Dinv


def transform(rep: MatrixKernelRep, m: UnknownChange) -> MatrixKernelRep:
    """Representation of the system satisfied by v = M u.

    Preserves rank C, sign(q^2 - p r), and scales tr C by 1/det M.
    Composition contract: transform(transform(rep, M1), M2)
    equals transform(rep, M2.compose(M1)).
    """
    D, Dinv = induced_matrix(m)
    inv_det = 1 / m.det
    Cp = mat3_scale(inv_det, mat3_mul(mat3_mul(D, rep.c_matrix), Dinv))
    pp, qp, rp = (inv_det * x for x in mat3_vec(D, rep.pqr))
    exact = rep.exact and m.exact
    if exact:
        return MatrixKernelRep(Cp, pp, qp, rp, True)
    return MatrixKernelRep.of(Cp, pp, qp, rp)


def transform_system(sigma: CubicSystem, m: UnknownChange) -> CubicSystem:
    """Coefficients of the system satisfied by v = M u when u solves sigma."""
    return from_rep(transform(to_rep(sigma), m))


# ---------------------------------------------------------------------------
# derived algebra


def b_matrix(sigma: CubicSystem):
    """Symmetric matrix B with d/dt Im(conj(u1) u2) = B[x]/4 along solutions,
    where x = (|u1|^2, 2 Re(conj(u1) u2), |u2|^2)."""
    c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12 = sigma.c
    b12 = c1 - c8 - c9
    b13 = 2 * (c2 - c3 - c10 + c11)
    b23 = c4 + c5 - c12
    return ((-4 * c7, b12, b13),
            (b12, 2 * (c3 - c11), b23),
            (b13, b23, 4 * c6))


def rank_c(rep: MatrixKernelRep, tol=RANK_TOL) -> int:
    return mat3_rank(rep.c_matrix, rep.exact, tol)


def discriminant_sign(rep: MatrixKernelRep, tol=SIGN_TOL) -> int:
    """Sign of q^2 - p r; exact in rational mode, action-invariant."""
    disc = rep.q * rep.q - rep.p * rep.r
    if rep.exact:
        return (disc > 0) - (disc < 0)
    scale = max(abs(rep.p), abs(rep.q), abs(rep.r), 1.0) ** 2
    if abs(disc) <= tol * scale:
        return 0
    return 1 if disc > 0 else -1


def nu_vector(C, tol=RANK_TOL):
    """Unit row direction of a rank-1 matrix, first nonzero entry positive.

    Returns floats (normalization is irrational in general).
    """
    nu, _ = _rank1_factors(C, tol)
    return nu


def d_vector(C, tol=RANK_TOL):
    """Column factor d with C = outer(d, nu); returns floats."""
    _, d = _rank1_factors(C, tol)
    return d


def _rank1_factors(C, tol):
    A = np.array(C, dtype=float)
    s = np.linalg.svd(A, compute_uv=False)
    if s[0] == 0.0 or np.sum(s > tol * s[0]) != 1:
        raise RankMismatch("rank-1 factorization needs rank 1")
    rows = [A[i] for i in range(3)]
    lead = max(range(3), key=lambda i: np.max(np.abs(rows[i])))
    nu = rows[lead] / np.linalg.norm(rows[lead])
    first = next(i for i in range(3) if abs(nu[i]) > 1e-9)
    if nu[first] < 0:
        nu = -nu
    d = A @ nu  # row_i = d_i nu^T and |nu| = 1
    return tuple(float(x) for x in nu), tuple(float(x) for x in d)


def rank1_reconstruction_error(C, nu, d):
    A = np.array(C, dtype=float)
    R = np.outer(np.array(d), np.array(nu))
    return float(np.max(np.abs(A - R)))


# ---------------------------------------------------------------------------
# JSON system files


def parse_system(obj) -> CubicSystem:
    """Parse {"coefficients": [...12]} or {"cnsa": [...8]} into a system.

    With "exact": true, entries may be "n/d" strings and all arithmetic stays
    rational; plain JSON numbers are read with decimal-literal semantics.
    """
    if not isinstance(obj, dict):
        raise ValueError("system file must be a JSON object")
    exact = bool(obj.get("exact", False))

    def num(v):
        f = _as_fraction(v)
        return f if exact else float(f)

    if "coefficients" in obj:
        vals = obj["coefficients"]
        if len(vals) != 12:
            raise ValueError("'coefficients' needs 12 entries")
        return CubicSystem.of(tuple(num(v) for v in vals))
    if "cnsa" in obj:
        vals = obj["cnsa"]
        if len(vals) != 8:
            raise ValueError("'cnsa' needs 8 entries")
        return embed_cnsa(CnsaSystem.of(tuple(num(v) for v in vals)))
    raise ValueError("system file needs 'coefficients' or 'cnsa'")


def load_system(path) -> CubicSystem:
    with open(path) as fh:
        return parse_system(json.load(fh))
