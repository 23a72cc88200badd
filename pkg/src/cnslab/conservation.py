"""Conserved quadratic quantities and global-existence certificates.

A vector (a, b, c) in the kernel of the representation matrix C makes

    a |u1|^2 + 2 b Re(conj(u1) u2) + c |u2|^2        (pointwise, ODE)
    a ||u1||^2 + 2 b Re(u1, u2) + c ||u2||^2         (integrated, PDE)

constant along solutions; the number of independent such quantities is
3 - rank C.  When the quadratic form of a kernel vector is positive definite
(b^2 < a c), the conserved quantity controls the H^1 norm and solutions are
global.  A second, cubic-in-time invariant 2 Im(conj(u1) u2) appears exactly
when the symmetric matrix B of system_algebra.b_matrix vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .system_algebra import (
    CubicSystem,
    MatrixKernelRep,
    b_matrix,
    integerize,
    kernel_basis_exact,
    mat3_maxabs,
    mat3_tr,
    mat3_vec,
    to_rep,
)

KERNEL_TOL = 1e-9
STRICT_MARGIN = 1e-12  # margin for the strict inequality b^2 < a c


@dataclass(frozen=True)
class ConservedQuadratic:
    a: object
    b: object
    c: object

    @property
    def abc(self):
        return (self.a, self.b, self.c)

    def evaluate(self, u1, u2):
        """Value of the quadratic on a pointwise pair of complex amplitudes."""
        cross = (u1.conjugate() * u2).real
        return (self.a * abs(u1) ** 2 + 2 * self.b * cross + self.c * abs(u2) ** 2)


@dataclass(frozen=True)
class EnergyCertificate:
    abc: tuple
    second_condition_matrix: tuple
    quartic_coeffs: tuple
    valid: bool


def mass_like_kernel(rep: MatrixKernelRep, tol=KERNEL_TOL):
    """Basis of ker C as ConservedQuadratic, 3 - rank C vectors.

    Exact (smallest integer form) in rational mode; unit vectors with first
    nonzero entry positive in float mode.
    """
    if rep.exact:
        return [ConservedQuadratic(*v) for v in kernel_basis_exact(rep.c_matrix)]
    A = np.array(rep.c_matrix, dtype=float)
    u, s, vt = np.linalg.svd(A)
    cutoff = tol * s[0] if s[0] > 0 else tol
    basis = []
    for i in range(3):
        if i >= len(s) or s[i] <= cutoff:
            v = vt[i]
            lead = next(j for j in range(3) if abs(v[j]) > 1e-12)
            if v[lead] < 0:
                v = -v
            basis.append(ConservedQuadratic(*(float(x) for x in v)))
    return basis


def imaginary_invariant(sigma: CubicSystem, tol=1e-12) -> bool:
    """True iff 2 Im(conj(u1) u2) is conserved, i.e. B = O."""
    B = b_matrix(sigma)
    if sigma.exact:
        return all(x == 0 for row in B for x in row)
    scale = max(mat3_maxabs(B), 1.0)
    return mat3_maxabs(B) <= tol * scale or mat3_maxabs(B) <= tol


def _form_value(v):
    # f(v) = a*c - b^2 for v = (a, b, c)
    return v[0] * v[2] - v[1] * v[1]


def _form_pairing(u, v):
    # polarization of f: f(u + v) = f(u) + 2 B(u, v) + f(v)
    return (u[0] * v[2] + u[2] * v[0]) / 2 - u[1] * v[1]


@dataclass(frozen=True)
class GlobalExistence:
    holds: object  # True / False / None (None: boundary, indeterminate)
    witness: tuple | None


def global_existence_criterion(rep: MatrixKernelRep) -> GlobalExistence:
    """Search ker C for a definite quadratic: (a,b,c) with b^2 < a c.

    Success gives a coercive conserved mass combination, hence global
    solutions.  The search maximizes a c - b^2 over the kernel; closed
    form for every kernel dimension.
    """
    basis = [q.abc for q in mass_like_kernel(rep)]
    if not basis:
        return GlobalExistence(False, None)
    if len(basis) == 3:
        return GlobalExistence(True, (1, 0, 1))
    if len(basis) == 1:
        k = basis[0]
        val = _form_value(k)
        return _verdict(val, k, rep.exact)
    # dim 2: f restricted to span{k1, k2} is the 2x2 form [[f1, g], [g, f2]]
    k1, k2 = basis
    f1, f2 = _form_value(k1), _form_value(k2)
    g = _form_pairing(k1, k2)
    det = f1 * f2 - g * g
    if f1 > 0:
        return _verdict(f1, k1, rep.exact)
    if f2 > 0:
        return _verdict(f2, k2, rep.exact)
    if det < 0:
        # f1, f2 <= 0 but the restricted form is indefinite; take the vertex
        if f1 != 0:
            x = -g / f1
            w = tuple(x * a + b for a, b in zip(k1, k2))
            val = _form_value(w)
        else:
            # f(x k1 + k2) = 2 g x + f2 is linear with g != 0
            x = (1 + abs(f2)) / (2 * g)
            w = tuple(x * a + b for a, b in zip(k1, k2))
            val = _form_value(w)
        return _verdict(val, w, rep.exact)
    if det == 0:
        # negative semidefinite restriction: supremum 0, never strict
        return GlobalExistence(None, None)
    return GlobalExistence(False, None)  # negative definite restriction


def _verdict(val, witness, exact):
    if exact:
        witness = integerize(tuple(Fraction(x) for x in witness))
        if val > 0:
            return GlobalExistence(True, witness)
        if val == 0:
            return GlobalExistence(None, witness)
        return GlobalExistence(False, None)
    scale = max(abs(x) for x in witness) ** 2
    if abs(val) <= STRICT_MARGIN * max(scale, 1.0):
        return GlobalExistence(None, tuple(float(x) for x in witness))
    if val > 0:
        return GlobalExistence(True, tuple(float(x) for x in witness))
    return GlobalExistence(False, None)


def second_condition_matrix(rep: MatrixKernelRep):
    """Matrix of the extra linear condition an energy functional must satisfy."""
    t = mat3_tr(rep.c_matrix)
    p, q, r = rep.pqr
    return ((t - 2 * q, 2 * p, 0 * p),
            (-r, t, p),
            (0 * p, -2 * r, t + 2 * q))


def energy_certificate(rep: MatrixKernelRep, abc) -> EnergyCertificate:
    """Certificate that a |u1|^2 + 2b Re(conj(u1)u2) + c |u2|^2 admits a
    conserved energy: requires abc in ker C and in the kernel of the second
    condition matrix."""
    e = second_condition_matrix(rep)
    first = mat3_vec(rep.c_matrix, abc)
    second = mat3_vec(e, abc)
    if rep.exact:
        valid = all(x == 0 for x in first) and all(x == 0 for x in second)
    else:
        scale = max(mat3_maxabs(rep.c_matrix), mat3_maxabs(e), 1.0)
        scale *= max(max(abs(x) for x in abc), 1.0)
        valid = (max(abs(x) for x in first) <= 1e-10 * scale
                 and max(abs(x) for x in second) <= 1e-10 * scale)
    quartic = energy_quartic_from_rep(rep, abc)
    return EnergyCertificate(tuple(abc), e, quartic, valid)


def energy_quartic(sigma: CubicSystem, abc):
    """The six quartic coefficients of the candidate energy integrand."""
    a, b, c = abc
    c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12 = sigma.c
    return ((a * c1 + b * c7),
            4 * (a * c3 + b * c9),
            2 * (a * c4 + b * c10),
            2 * (a * c5 + b * c11),
            4 * (b * c5 + c * c11),
            (b * c6 + c * c12))


def energy_quartic_from_rep(rep: MatrixKernelRep, abc):
    from .system_algebra import from_rep

    return energy_quartic(from_rep(rep), abc)


def conservation_report(sigma: CubicSystem) -> dict:
    """JSON-ready summary: kernel basis, invariant flags, existence verdict."""
    rep = to_rep(sigma)
    kernel = mass_like_kernel(rep)
    ge = global_existence_criterion(rep)
    holds = ge.holds if ge.holds is not None else "indeterminate"
    return {
        "kernel_dimension": len(kernel),
        "kernel_basis": [[_plain(x) for x in q.abc] for q in kernel],
        "imaginary_invariant": imaginary_invariant(sigma),
        "global_existence": holds,
        "global_existence_witness":
            None if ge.witness is None else [_plain(x) for x in ge.witness],
    }


def _plain(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    return float(x)
