"""Named example systems used by tests, experiments, and the CLI docs.

Each constructor documents the behavior that makes the system interesting;
coefficient vectors follow the c1..c12 layout of system_algebra.
"""

from .system_algebra import CnsaSystem, CubicSystem, embed_cnsa


def zero_system() -> CubicSystem:
    return CubicSystem.of((0,) * 12)


def one_way_coupled(l1, l6) -> CubicSystem:
    """Component 1 self-interacting, component 2 linearly driven by it.

        i u1_t + u1_xx/2 = 3 l1 |u1|^2 u1
        i u2_t + u2_xx/2 = l6 (2 |u1|^2 u2 + u1^2 conj(u2))

    For (l6 - l1)(l6 - 3 l1) > 0 the second component splits into two modes
    rotating at +- sqrt(3 (l6 - l1)(l6 - 3 l1)) |W1|^2 per unit log t; at
    l6 = 3 l1 and l6 = l1 the split degenerates into logarithmic amplitude
    growth.  |u1|^2 integrates to a conserved mass; the cross mass
    2 Re(u1, u2) joins it when l6 = 3 l1.
    """
    return embed_cnsa(CnsaSystem.of((l1, 0, 0, 0, 0, l6, 0, 0)))


def free_forced(strength=1) -> CubicSystem:
    """Component 1 free (linear Schrodinger), component 2 forced by its cube.

        i u1_t + u1_xx/2 = 0
        i u2_t + u2_xx/2 = 3 k |u1|^2 u1

    The profile of u1 is frozen; the profile of u2 grows linearly in log t
    with an explicitly computable slope.
    """
    return embed_cnsa(CnsaSystem.of((0, 0, 0, 0, strength, 0, 0, 0)))


def dissipative_example() -> CubicSystem:
    """Rank-2 system with a ray of dissipative solutions.

    Data pairs (f, e^{-i pi/4} f) stay on the ray and obey the single
    dissipative equation i v_t + v_xx/2 = -i |v|^2 v (mass strictly
    decreasing, like |v|^2 ~ 1/log t); the conjugate ray (f, e^{+i pi/4} f)
    obeys the amplifying sign and blows up in finite time at ODE level.
    The kernel of its matrix is spanned by (1, 0, -1): the mass difference
    ||u1||^2 - ||u2||^2 is conserved even while the total mass moves.
    """
    return CubicSystem.of((-2, 0, 0, 2, 1, 0, 0, -2, -1, 0, 0, 2))


def decoupling_example() -> CubicSystem:
    """Rank-3 system decoupled by a complex change of unknowns.

    v1 = u1 - i u2 and v2 = -u1 - i u2 satisfy the independent equations
    i v_t + v_xx/2 = +- i |v|^2 v (one dissipative, one amplifying).
    The complex change is outside the real 2x2 action, so the system is a
    genuine rank-3 example with no canonical representative; its kernel is
    trivial and no quadratic mass combination is conserved.
    """
    return CubicSystem.of((0, 2, -1, 0, 0, 1, -1, 0, 0, -2, 1, 0))
