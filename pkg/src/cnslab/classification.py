"""Canonical forms of rank-0 and rank-1 systems under changes of unknowns.

The matrix part and the kernel part transform separately, so the reduction
runs in stages:

  1. rank 0: the kernel part is a symmetric 2x2 form [[p,q],[q,r]] acted on
     by congruence; Sylvester inertia picks one of 8 representatives.
  2. rank 1: the row direction nu(C) on the unit sphere falls into one of
     three strata cut out by the discriminant b^2 - 4ac.  The first
     reduction moves nu onto a per-stratum anchor vector, the second
     normalizes the column factor d onto one of the nine template families
     Z1..Z9, and the kernel part is then reduced modulo the stabilizer G_j
     of the template into the canonical set K_j.

Every step returns the explicit change of unknowns realizing it; the
composite witness satisfies transform(rep, witness) = representative.

The printed K4/K6/K7/K8 membership predicates miss a few orbits (for
example nothing in K8 has q < 0, yet the stabilizer of Z8 cannot change q).
reduce_kernel always produces a deterministic canonical kernel part and
reports literal membership in the in_kj flag, logging the misses instead of
silently widening the sets.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import atan2, copysign, cos, hypot, pi, sin, sqrt

import numpy as np

from .errors import NoIntersection, NotInY, NotRepresentative, RankMismatch
from .system_algebra import (
    IDENTITY_CHANGE,
    CubicSystem,
    MatrixKernelRep,
    UnknownChange,
    b_matrix,
    discriminant_sign,
    mat3_maxabs,
    mat3_tr,
    nu_vector,
    rank_c,
    to_rep,
    transform,
)

log = logging.getLogger(__name__)

EPS_CURVE = 1e-9  # boundary snapping for the stratum decision
EPS_STRUCT = 1e-7  # structural zero / equality snapping on reduced parts

ANCHOR_PLUS = (0.0, 1.0, 0.0)
ANCHOR_ZERO = (0.0, 0.0, 1.0)
ANCHOR_MINUS = (1 / sqrt(2), 0.0, 1 / sqrt(2))


# ---------------------------------------------------------------------------
# strata


@dataclass(frozen=True)
class Stratum:
    rank: int
    case: str | None = None  # "plus" | "zero" | "minus" for rank 1

    @property
    def tag(self):
        if self.rank == 1:
            return "rank1:%s" % self.case
        return "rank%d" % self.rank


def locate_nu(nu, eps=EPS_CURVE) -> str:
    """Region of a unit vector: S1, Gamma2_pos/neg (boundary), S2_pos/neg."""
    a, b, c = (float(x) for x in nu)
    disc = b * b - 4 * a * c
    if abs(disc) <= eps:
        return "Gamma2_pos" if a + c > 0 else "Gamma2_neg"
    if disc > 0:
        return "S1"
    return "S2_pos" if a > 0 else "S2_neg"


_REGION_CASE = {"S1": "plus", "Gamma2_pos": "zero", "Gamma2_neg": "zero",
                "S2_pos": "minus", "S2_neg": "minus"}


# ---------------------------------------------------------------------------
# class descriptions


@dataclass(frozen=True)
class RankOneClass:
    """One of the template families Z1..Z9, with its parameters."""

    j: int
    family: str  # distinguishes members inside Z1 and Z4
    matrix: tuple
    k: float | None = None
    sigma: int | None = None
    theta: float | None = None

    @property
    def label(self):
        bits = ["Z%d" % self.j]
        if self.k is not None:
            bits.append("k=%.12g" % self.k)
        if self.sigma is not None:
            bits.append("sigma=%+d" % self.sigma)
        if self.theta is not None:
            bits.append("theta=%.12g" % self.theta)
        if self.family not in ("scale", "main"):
            bits.append(self.family)
        return " ".join(bits)


@dataclass(frozen=True)
class CanonicalForm:
    representative: MatrixKernelRep
    stratum: Stratum
    class_id: object  # RankOneClass, rank-0 tuple label, or None for rank 2/3
    witness: UnknownChange
    witness_steps: tuple
    in_kj: object  # bool for rank 1, None otherwise
    label: str
    invariants: dict

    def to_json_dict(self):
        rep = self.representative
        return {
            "stratum": self.stratum.tag,
            "label": self.label,
            "matrix": [[float(x) for x in row] for row in rep.c_matrix],
            "kernel_part": [float(x) for x in rep.pqr],
            "witness": [[float(self.witness.a), float(self.witness.b)],
                        [float(self.witness.c), float(self.witness.d)]],
            "in_kj": self.in_kj,
            "invariants": self.invariants,
        }


# ---------------------------------------------------------------------------
# rank 0


def inertia_pattern(p, q, r, eps=EPS_STRUCT):
    """One of 9 sign/degeneracy patterns of the form [[p,q],[q,r]]."""
    scale = max(abs(p), abs(q), abs(r))
    if scale == 0:
        return "zero"
    det = p * r - q * q
    tr = p + r
    det_z = abs(det) <= eps * scale * scale
    if not det_z:
        if det > 0:
            return "posdef" if tr > 0 else "negdef"
        if abs(p) <= eps * scale and abs(r) <= eps * scale:
            return "indef_antidiag"  # p = r = 0, q != 0
        return "indef"
    # rank one (up to snapping)
    if tr > 0:
        return "rank1_pos_p" if abs(p) > eps * scale else "rank1_pos_0"
    return "rank1_neg_p" if abs(p) > eps * scale else "rank1_neg_0"


RANK0_TARGET = {
    "posdef": (1, 0, 1),
    "negdef": (-1, 0, -1),
    "indef": (1, 0, -1),
    "indef_antidiag": (1, 0, -1),
    "rank1_pos_p": (1, 0, 0),
    "rank1_pos_0": (0, 0, 1),
    "rank1_neg_p": (-1, 0, 0),
    "rank1_neg_0": (0, 0, -1),
    "zero": (0, 0, 0),
}


def canonicalize_rank0(pqr, eps=EPS_STRUCT):
    """Representative among the 8 listed kernel parts, with witness.

    The list is redundant under the action ((1,0,0) ~ (0,0,1) by swapping
    the unknowns); the rank-one tie-break keeps the axis a nonzero p sits
    on: p != 0 picks (+-1,0,0), p = 0 picks (0,0,+-1).
    """
    p, q, r = (float(x) for x in pqr)
    pattern = inertia_pattern(p, q, r, eps)
    target = RANK0_TARGET[pattern]
    if pattern == "zero":
        return target, IDENTITY_CHANGE, pattern
    S = np.array([[p, q], [q, r]])
    mu, vecs = np.linalg.eigh(S)  # ascending eigenvalues
    order = np.argsort(-mu)  # descending
    mu = mu[order]
    vecs = vecs[:, order]
    cols = []
    for i in range(2):
        v = vecs[:, i]
        m = mu[i]
        keep = {
            "posdef": True, "negdef": True, "indef": True,
            "indef_antidiag": True,
            "rank1_pos_p": abs(m) > EPS_STRUCT * np.max(np.abs(mu)),
            "rank1_pos_0": abs(m) > EPS_STRUCT * np.max(np.abs(mu)),
            "rank1_neg_p": abs(m) > EPS_STRUCT * np.max(np.abs(mu)),
            "rank1_neg_0": abs(m) > EPS_STRUCT * np.max(np.abs(mu)),
        }[pattern]
        cols.append(v / sqrt(abs(m)) if keep else v)
    # transpose(T) S T = diag(sign mu_1, sign mu_2); order the columns so
    # the diagonal matches the target tuple
    T = np.column_stack(cols)
    diag = T.T @ S @ T
    got = (_snap_unit(diag[0, 0]), _snap_unit(diag[1, 1]))
    if got != (target[0], target[2]):
        T = T[:, ::-1]
    m_inv = UnknownChange.of(((T[0, 0], T[0, 1]), (T[1, 0], T[1, 1])))
    witness = m_inv.inverse()
    return target, witness, pattern


def _snap_unit(x):
    if abs(x) < 0.5:
        return 0
    return 1 if x > 0 else -1


# ---------------------------------------------------------------------------
# rank 1, first reduction


def first_reduction(C, eps=EPS_CURVE):
    """Move nu(C) onto the anchor of its stratum; returns (M, transformed C).

    The input keeps its kernel part out of scope: this operates on the
    matrix part alone (kernel rides along in the full pipeline).
    """
    nu = nu_vector(C)
    region = locate_nu(nu, eps)
    case = _REGION_CASE[region]
    anchor = {"plus": ANCHOR_PLUS, "zero": ANCHOR_ZERO, "minus": ANCHOR_MINUS}[case]
    if max(abs(nu[i] - anchor[i]) for i in range(3)) <= 1e-12:
        return IDENTITY_CHANGE, C
    a, b, c = nu
    if case == "plus":
        # intersect the plane a x1 + b x2 + c x3 = 0 with the curve
        # (1 + sin t, cos t, 1 - sin t): (a - c) sin t + b cos t = -(a + c)
        amp = hypot(a - c, b)
        rhs = -(a + c)
        if amp <= eps or abs(rhs) > amp:
            raise NoIntersection("no angle solutions for nu=%r" % (nu,))
        phi = atan2(b, a - c)
        psi = np.arcsin(np.clip(rhs / amp, -1.0, 1.0))
        t1 = (psi - phi) % (2 * pi)
        t2 = (pi - psi - phi) % (2 * pi)
        if abs(t1 - t2) <= 1e-12 or abs(abs(t1 - t2) - 2 * pi) <= 1e-12:
            raise NoIntersection("coincident angle roots for nu=%r" % (nu,))
        th1, th2 = sorted((t1, t2))
        e1 = -th1 / 2 + pi / 4
        e2 = -th2 / 2 + pi / 4
        m = UnknownChange.of(((cos(e1), sin(e1)), (cos(e2), sin(e2))))
    elif case == "zero":
        # nu = c' (1 - sin t, -2 cos t, 1 + sin t) with c' = (a + c)/2
        cp = (a + c) / 2
        if abs(cp) <= eps:
            raise NoIntersection("degenerate boundary direction nu=%r" % (nu,))
        st = (c - a) / (2 * cp)
        ct = -b / (2 * cp)
        th = atan2(st, ct)
        eta = -th / 2 + pi / 4
        m = UnknownChange.of(((cos(eta), sin(eta)), (-sin(eta), cos(eta))))
    else:
        # b^2 < 4ac; the shear-scale [[2c, -b], [0, sqrt(4ac - b^2)]]
        disc = 4 * a * c - b * b
        if disc <= 0:
            raise NoIntersection("nonpositive discriminant for nu=%r" % (nu,))
        m = UnknownChange.of(((2 * c, -b), (0.0, sqrt(disc))))
    rep = transform(MatrixKernelRep.of(C, 0, 0, 0), m)
    return m, rep.c_matrix


# ---------------------------------------------------------------------------
# rank 1, second reduction: templates


def _z_matrix_mid(d1, d2, d3):
    # column factor against row direction (0,1,0)
    z = Fraction(0)
    return ((z, d1, z), (z, d2, z), (z, d3, z))


def _z_matrix_last(d1, d2, d3):
    z = Fraction(0)
    return ((z, z, d1), (z, z, d2), (z, z, d3))


def _z_matrix_trig(theta):
    s, c = sin(theta), cos(theta)
    return ((s, 0.0, s), (c, 0.0, c), (s, 0.0, s))


def z_template(j, family="main", k=None, sigma=None, theta=None):
    """The representative matrix for a class tag."""
    if j == 1 and family == "scale":
        return _z_matrix_mid(Fraction(1), k, Fraction(1))
    if j == 1 and family == "upper":
        return _z_matrix_mid(Fraction(1), Fraction(1), Fraction(0))
    if j == 1 and family == "lower":
        return _z_matrix_mid(Fraction(0), Fraction(1), Fraction(1))
    if j == 1 and family == "axis":
        return _z_matrix_last(Fraction(sigma), Fraction(0), Fraction(1))
    if j == 1 and family == "trig":
        return _z_matrix_trig(theta)
    if j == 2:
        return _z_matrix_mid(Fraction(sigma), k, Fraction(-sigma))
    if j == 3:
        return _z_matrix_mid(Fraction(sigma), Fraction(0), Fraction(-sigma))
    if j == 4 and family == "mid_row":
        return _z_matrix_last(Fraction(0), Fraction(sigma), Fraction(0))
    if j == 4 and family == "last_row":
        return _z_matrix_mid(Fraction(0), Fraction(0), Fraction(sigma))
    if j == 5:
        return _z_matrix_mid(Fraction(1), Fraction(0), Fraction(1))
    if j == 6:
        return _z_matrix_mid(Fraction(0), Fraction(1), Fraction(0))
    if j == 7:
        return _z_matrix_last(Fraction(1), Fraction(0), Fraction(0))
    if j == 8:
        return _z_matrix_last(Fraction(0), Fraction(0), Fraction(1))
    if j == 9:
        one, z = Fraction(1), Fraction(0)
        return ((one, z, one), (z, z, z), (one, z, one))
    raise NotRepresentative("unknown class tag j=%r family=%r" % (j, family))


def _cls(j, family="main", k=None, sigma=None, theta=None):
    return RankOneClass(j, family, z_template(j, family, k, sigma, theta),
                        k, sigma, theta)


def second_reduction(C, eps=EPS_STRUCT):
    """Normalize a matrix already at a stratum anchor onto its template.

    Returns (M, RankOneClass).  The branch formulas follow the column
    factor's sign pattern; every output matrix is one of the Z1..Z9 shapes.
    Square-root-free branches keep rational arithmetic when C is rational.
    """
    fC = tuple(tuple(float(x) for x in row) for row in C)
    nu = nu_vector(fC)
    if _close(nu, ANCHOR_PLUS):
        return _second_plus(C, fC, eps)
    if _close(nu, ANCHOR_ZERO):
        return _second_zero(C, fC, eps)
    if _close(nu, ANCHOR_MINUS):
        return _second_minus(fC, eps)
    raise NotInY("nu(C)=%r is not an anchor direction" % (nu,))


def _close(u, v, tol=1e-6):
    return max(abs(float(a) - float(b)) for a, b in zip(u, v)) <= tol


def _snap3(k, eps):
    scale = max(abs(x) for x in k)
    return tuple(0.0 if abs(x) <= eps * scale else float(x) for x in k)


def _second_plus(C, fC, eps):
    k1, k2, k3 = _snap3((fC[0][1], fC[1][1], fC[2][1]), eps)
    k2n = C[1][1] if k2 != 0 else 0
    swap = UnknownChange.of(((0, 1), (1, 0)))

    def diag(p, s):
        return UnknownChange.of(((p, 0), (0, s)))

    if k1 > 0 and k3 > 0:
        s = sqrt(k3) if k2 >= 0 else -sqrt(k3)
        m = diag(sqrt(k1), s)
        kn = abs(k2) / sqrt(k1 * k3)
        cls = _cls(5) if kn == 0 else _cls(1, "scale", k=kn)
        return m, cls
    if k1 < 0 and k3 < 0:
        s = -sqrt(-k3) if k2 >= 0 else sqrt(-k3)
        m = swap.compose(diag(sqrt(-k1), s))
        kn = abs(k2) / sqrt(k1 * k3)
        cls = _cls(5) if kn == 0 else _cls(1, "scale", k=kn)
        return m, cls
    if k1 > 0 > k3:
        s = -sqrt(-k3) if k2 < 0 else sqrt(-k3)
        m = diag(sqrt(k1), s)
        kn = abs(k2) / sqrt(-k1 * k3)
        cls = _cls(3, sigma=1) if kn == 0 else _cls(2, k=kn, sigma=1)
        return m, cls
    if k3 > 0 > k1:
        s = -sqrt(k3) if k2 < 0 else sqrt(k3)
        m = diag(sqrt(-k1), s)
        kn = abs(k2) / sqrt(-k1 * k3)
        cls = _cls(3, sigma=-1) if kn == 0 else _cls(2, k=kn, sigma=-1)
        return m, cls
    if k1 > 0 and k3 == 0:
        if k2 != 0:
            p = sqrt(k1)
            return diag(p, k2 / p), _cls(1, "upper")
        return swap.compose(diag(sqrt(k1), 1)), _cls(4, "last_row", sigma=-1)
    if k1 < 0 and k3 == 0:
        p = sqrt(-k1)
        if k2 != 0:
            return swap.compose(diag(p, -k2 / p)), _cls(1, "lower")
        return swap.compose(diag(p, 1)), _cls(4, "last_row", sigma=1)
    if k1 == 0 and k3 > 0:
        s = sqrt(k3)
        if k2 != 0:
            return diag(k2 / s, s), _cls(1, "lower")
        return diag(1, s), _cls(4, "last_row", sigma=1)
    if k1 == 0 and k3 < 0:
        s = sqrt(-k3)
        if k2 != 0:
            return swap.compose(diag(-k2 / s, s)), _cls(1, "upper")
        return diag(1, s), _cls(4, "last_row", sigma=-1)
    if k2 != 0:  # k1 = k3 = 0
        return diag(1, k2n), _cls(6)
    raise RankMismatch("zero column factor in the middle-column normal form")


def _second_zero(C, fC, eps):
    k1, k2, k3 = _snap3((fC[0][2], fC[1][2], fC[2][2]), eps)
    k1n = C[0][2] if k1 != 0 else 0
    k2n = C[1][2] if k2 != 0 else 0
    k3n = C[2][2] if k3 != 0 else 0
    if k3 != 0:
        jinv = k1 - k2 * k2 / k3
        if abs(jinv) <= eps * max(abs(k1), abs(k2 * k2 / k3)):
            jinv = 0.0
        if jinv != 0:
            s = abs(k3 ** 3 / jinv) ** 0.25
            sgn = 1 if jinv * k3 > 0 else -1
            m = UnknownChange.of(((k3 / s, 0), (s * k2 / k3, s)))
            return m, _cls(1, "axis", sigma=sgn)
        m = UnknownChange.of(((k3n, 0), (k2n / k3n, 1)))
        return m, _cls(8)
    if k2 != 0:
        p = 1 if abs(k2) == 1 else sqrt(abs(k2))
        m = UnknownChange.of(((p, 0), (k1n / (2 * k2n), 1)))
        return m, _cls(4, "mid_row", sigma=int(copysign(1, k2)))
    if k1 != 0:
        m = UnknownChange.of(((1, 0), (0, 1 / k1n)))
        return m, _cls(7)
    raise RankMismatch("zero column factor in the last-column normal form")


def _second_minus(fC, eps):
    k = _snap3(((fC[0][0] + fC[0][2]) / 2,
                (fC[1][0] + fC[1][2]) / 2,
                (fC[2][0] + fC[2][2]) / 2), eps)
    k1, k2, k3 = k
    total = k1 + k3
    ell = 0 if total >= 0 else 1
    L = hypot(k1 - k3, 2 * k2)
    # the rotation aligns the spin-2 pair (k1 - k3, 2 k2) with its second
    # axis; the flip then corrects the sign of the invariant k1 + k3
    eta = atan2(k1 - k3, 2 * k2) / 2 if L > 0 else 0.0
    two_r2 = sqrt(total * total + L * L)
    R = sqrt(two_r2 / 2)
    rot = UnknownChange.of(((cos(eta), -sin(eta)), (sin(eta), cos(eta))))
    flip = UnknownChange.of(((1, 0), (0, -1))) if ell else IDENTITY_CHANGE
    scale = UnknownChange.of(((R, 0), (0, R)))
    m = scale.compose(flip.compose(rot))
    y1 = abs(total) / two_r2
    y2 = L / two_r2
    theta = atan2(y1, y2)
    if abs(theta - pi / 2) <= 1e-9:
        return m, _cls(9)
    return m, _cls(1, "trig", theta=theta)


# ---------------------------------------------------------------------------
# kernel part reduction modulo the stabilizer


def in_kj(j, family, pqr, eps=EPS_STRUCT) -> bool:
    """Literal membership in the canonical kernel set of a class."""
    p, q, r = (float(x) for x in pqr)
    scale = max(abs(p), abs(q), abs(r), 1.0)

    def eq(x, y):
        return abs(x - y) <= eps * scale

    def ge(x, y):
        return x > y or eq(x, y)

    if j == 1:
        return True
    if j == 2:
        return p > r or (eq(p, r) and ge(q, 0))
    if j == 3:
        return ge(p, r) and ge(q, 0)
    if j == 4:
        return ((eq(r, 1) and ge(q, 0))
                or (eq(r, 0) and (eq(q, 0) or eq(q, 1))))
    if j == 5:
        return ge(q, 0)
    if j == 6:
        return ((eq(abs(p), abs(r)) and ge(q, 0))
                or (eq(r, 0) and eq(abs(p), 1) and ge(q, 0)))
    if j == 7:
        return ((eq(abs(p), abs(r)) and abs(p) > eps * scale)
                or (eq(r, 0) and eq(abs(p), abs(q)) and abs(p) > eps * scale)
                or (eq(p, 0) and eq(abs(q), abs(r)) and abs(q) > eps * scale)
                or (eq(p, 1) and eq(q, 0) and eq(r, 0))
                or (eq(p, 0) and eq(q, 1) and eq(r, 0))
                or (eq(p, 0) and eq(q, 0) and eq(r, 1))
                or (eq(p, 0) and eq(q, 0) and eq(r, 0)))
    if j == 8:
        return ge(q, 0) and (eq(abs(p), abs(r))
                             or (eq(r, 0) and eq(abs(p), 1))
                             or (eq(p, 0) and eq(abs(r), 1)))
    if j == 9:
        return ge(p, r) and eq(q, 0)
    raise NotRepresentative("unknown class index %r" % (j,))


def _sgn(x):
    return 1 if x > 0 else (-1 if x < 0 else 0)


def reduce_kernel(cls: RankOneClass, pqr, eps=EPS_STRUCT):
    """Normalize the kernel part by a stabilizer element of the class matrix.

    Returns (M in G_j, reduced kernel part, literal membership flag).
    The reduced part is a deterministic orbit invariant even where the
    printed K_j set misses the orbit; those cases are logged.
    """
    p, q, r = _snap3_rel(pqr, eps)
    j, family = cls.j, cls.family

    def diag(a, d):
        return UnknownChange.of(((a, 0), (0, d)))

    if j == 1:
        m, out = IDENTITY_CHANGE, (p, q, r)
    elif j == 2:
        rot = UnknownChange.of(((0, 1), (-1, 0)))  # kernel action (r, -q, p)
        if p > r or (p == r and q >= 0):
            m, out = IDENTITY_CHANGE, (p, q, r)
        else:
            m, out = rot, (r, -q, p)
    elif j == 3:
        pp, qq, rr = p, q, r
        m = IDENTITY_CHANGE
        if pp < rr:
            m, (pp, rr) = UnknownChange.of(((0, 1), (1, 0))), (rr, pp)
        if qq < 0:
            m = diag(1, -1).compose(m)
            qq = -qq
        out = (pp, qq, rr)
    elif j == 4 and family == "mid_row":
        # stabilizer [[tau, 0], [0, s]]: (p, q/(tau s), r/s^2)
        if r != 0:
            s = sqrt(abs(r))
            m = diag(_sgn(q) or 1, s)
            out = (p, abs(q) / s, _sgn(r))
        elif q != 0:
            m = diag(_sgn(q), abs(q))
            out = (p, 1.0, 0.0)
        else:
            m, out = IDENTITY_CHANGE, (p, 0.0, 0.0)
    elif j == 4 and family == "last_row":
        # stabilizer [[t, 0], [0, tau]]: (p/t^2, q/(t tau), r)
        if p != 0:
            t = sqrt(abs(p))
            tau = _sgn(q) if q != 0 else 1
            m = diag(t, tau)
            out = (_sgn(p), abs(q) / t, r)
        elif q != 0:
            m = diag(abs(q), _sgn(q))
            out = (0.0, 1.0, r)
        else:
            m, out = IDENTITY_CHANGE, (0.0, 0.0, r)
    elif j == 5:
        m = IDENTITY_CHANGE if q >= 0 else diag(1, -1)
        out = (p, abs(q), r)
    elif j == 6:
        m, out = _reduce_k6(p, q, r, diag)
    elif j == 7:
        m, out = _reduce_k7(p, q, r, diag)
    elif j == 8:
        if p != 0 and r != 0:
            t = sqrt(sqrt(abs(p / r)))  # diag(t, 1/t) scales (p/t^2, q, r t^2)
            m = diag(t, 1 / t)
            s = sqrt(abs(p * r))
            out = (_sgn(p) * s, q, _sgn(r) * s)
        elif p != 0:
            t = sqrt(abs(p))
            m = diag(t, 1 / t)
            out = (_sgn(p), q, 0.0)
        elif r != 0:
            t = 1 / sqrt(abs(r))
            m = diag(t, 1 / t)
            out = (0.0, q, _sgn(r))
        else:
            m, out = IDENTITY_CHANGE, (0.0, q, 0.0)
        if q < 0:
            log.warning("kernel part %r of class Z8 has q < 0: no stabilizer "
                        "changes q, outside the printed K8", (p, q, r))
    elif j == 9:
        m, out = _reduce_k9(p, q, r)
    else:
        raise NotRepresentative("unknown class index %r" % (j,))
    member = in_kj(j, family, out, eps)
    if not member and j != 8:
        log.warning("reduced kernel part %r of class Z%d%s is outside the "
                    "printed K%d", out, j,
                    "" if family == "main" else " (%s)" % family, j)
    return m, out, member


def _snap3_rel(v, eps):
    scale = max(abs(float(x)) for x in v)
    return tuple(0.0 if abs(float(x)) <= eps * scale else float(x) for x in v)


def _reduce_k6(p, q, r, diag):
    # diag(tau, 1/tau) acts by (p/tau^2, q, r tau^2); the antidiagonal
    # member [[0, tau], [-1/tau, 0]] acts by (r/tau^2, -q, p tau^2)
    antidiag = UnknownChange.of(((0, 1), (-1, 0)))
    if p != 0 and r != 0:
        s = sqrt(abs(p * r))
        x = (_sgn(p) * s, q, _sgn(r) * s)
        y = (_sgn(r) * s, -q, _sgn(p) * s)
        if (q < 0) or (q == 0 and y[0] > x[0]):
            tau = sqrt(abs(r) / s)
            return diag(tau, 1 / tau).compose(antidiag), y
        tau = sqrt(abs(p) / s)
        return diag(tau, 1 / tau), x
    if p != 0 or r != 0:
        if p != 0:
            qa = q
            a_m = diag(sqrt(abs(p)), 1 / sqrt(abs(p)))
            b_m = diag(1 / sqrt(abs(p)), sqrt(abs(p))).compose(antidiag)
            sg = _sgn(p)
        else:
            qa = -q
            a_m = diag(sqrt(abs(r)), 1 / sqrt(abs(r))).compose(antidiag)
            b_m = diag(1 / sqrt(abs(r)), sqrt(abs(r)))
            sg = _sgn(r)
        if qa >= 0:
            return a_m, (sg, qa, 0.0)
        return b_m, (0.0, -qa, sg)
    if q < 0:
        return antidiag, (0.0, -q, 0.0)
    return IDENTITY_CHANGE, (0.0, q, 0.0)


def _reduce_k7(p, q, r, diag):
    # The full stabilizer of the Z7 matrix is {[[a, 0], [c, a^3]]}, one
    # dimension more than its printed diagonal part; the shear member
    # [[1, 0], [u, 1]] moves the kernel part by
    # (p, q, r) -> (p - 2uq + u^2 r, q - ur, r), so q^2 - pr and r are the
    # working invariants.  Reduction modulo the whole group keeps
    # canonicalize orbit-invariant; the printed K7 set is redundant for it.
    def scale_m(t):
        tau = sqrt(t)  # diag(tau, tau^3) acts by (p/t, q/t^2, r/t^3)
        return diag(tau, tau ** 3)

    def shear_m(u):
        return UnknownChange.of(((1, 0), (u, 1)))

    scale = max(abs(p), abs(q), abs(r))
    disc = q * q - p * r
    if scale and abs(disc) <= EPS_STRUCT * scale * scale:
        disc = 0.0
    if r != 0:
        u = q / r
        p_eff = -disc / r
        if p_eff != 0:
            t = sqrt(abs(r / p_eff))
            return scale_m(t).compose(shear_m(u)), (p_eff / t, 0.0, r / t ** 3)
        t = abs(r) ** (1 / 3)
        return scale_m(t).compose(shear_m(u)), (0.0, 0.0, _sgn(r))
    if q != 0:
        u = p / (2 * q)
        t = sqrt(abs(q))
        return scale_m(t).compose(shear_m(u)), (0.0, _sgn(q), 0.0)
    if p != 0:
        return scale_m(abs(p)), (_sgn(p), 0.0, 0.0)
    return IDENTITY_CHANGE, (0.0, 0.0, 0.0)


def _reduce_k9(p, q, r):
    S = np.array([[p, q], [q, r]], dtype=float)
    mu, vecs = np.linalg.eigh(S)
    hi, lo = float(mu[1]), float(mu[0])
    v = vecs[:, 1]
    m = UnknownChange.of(((v[0], v[1]), (-v[1], v[0])))  # rotation rows
    return m, (hi, 0.0, lo)


# ---------------------------------------------------------------------------
# full pipeline


def canonicalize(sigma: CubicSystem, tol=1e-9) -> CanonicalForm:
    """Reduce a system to its canonical representative with a witness.

    Rank 0 and rank 1 get genuine representatives; rank 2 and 3 carry
    invariants only (no canonical list exists for them).
    """
    rep = to_rep(sigma)
    rank = rank_c(rep, tol)
    scale = max(abs(float(x)) for x in sigma.c)
    base_inv = {
        "rank": rank,
        "trace_zero": abs(float(mat3_tr(rep.c_matrix))) <= tol * max(scale, 1.0),
        "discriminant_sign": discriminant_sign(rep),
        "b_zero": float(mat3_maxabs(b_matrix(sigma))) <= tol * max(scale, 1.0),
    }
    if rank == 0:
        target, witness, pattern = canonicalize_rank0(rep.pqr)
        zero = ((0, 0, 0), (0, 0, 0), (0, 0, 0))
        out = MatrixKernelRep.of(zero, *target)
        label = "rank0: (%d,%d,%d)" % target
        return CanonicalForm(out, Stratum(0), target, witness, (witness,),
                             None, label, base_inv)
    if rank == 1:
        return _canonicalize_rank1(sigma, rep, base_inv)
    label = "rank %d: no canonical representative" % rank
    return CanonicalForm(rep, Stratum(rank), None, IDENTITY_CHANGE,
                         (), None, label, base_inv)


def _canonicalize_rank1(sigma, rep, base_inv):
    frep = rep.as_float()
    nu = nu_vector(frep.c_matrix)
    region = locate_nu(nu)
    case = _REGION_CASE[region]
    m1, _ = first_reduction(frep.c_matrix)
    rep_mid = transform(rep if m1.exact else frep, m1)
    m2, cls = second_reduction(rep_mid.c_matrix)
    rep_z = transform(rep_mid, m2)
    m3, pqr_out, member = reduce_kernel(cls, rep_z.pqr)
    witness = m3.compose(m2).compose(m1)
    pqr_canon = tuple(int(v) if float(v).is_integer() else float(v)
                      for v in pqr_out)
    out = MatrixKernelRep.of(cls.matrix, *pqr_canon)
    label = "%s x K%d, kernel (%s)" % (
        cls.label, cls.j, ", ".join("%.10g" % x for x in pqr_out))
    return CanonicalForm(out, Stratum(1, case), cls, witness,
                         (m1, m2, m3), member, label, base_inv)
