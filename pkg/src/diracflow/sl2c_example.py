"""Hand-written closed forms for the SL(2,C) = SU(2) x B instance.

Everything here is written directly in the factor coordinates
(alpha, beta, a, z = b + ic, eta) as explicit polynomials and small matrix
products, independently of the generic double-group machinery, and serves
as the oracle the engine is tested against.  Every coefficient is validated
against the engine and the Legendre structure in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dirac import PhasePoint, TangentVector
from .doublegroup import (
    AlgebraVector,
    DualVector,
    adjoint,
    coadjoint,
    inf_coadjoint,
)
from .linalg import nullspace, solve_linear
from .sl2c import killing

__all__ = [
    "SingularConfiguration",
    "Sl2Coordinates",
    "constraint_Omega",
    "coordinates",
    "example_hamiltonian",
    "example_hamilton_eqs",
    "explicit_character_brackets",
    "explicit_dressing_generators",
    "explicit_fundamental_brackets",
    "explicit_projected_generators",
    "invert_velocity",
    "lagrangian_eval",
    "metric_K",
    "phi_explicit",
    "vector_A",
    "velocity_map",
]

BETA_TOL = 1e-10


class SingularConfiguration(Exception):
    """beta vanished: the metric's 1/|beta|^2 prefactor is undefined."""


@dataclass(frozen=True)
class Sl2Coordinates:
    """Factor coordinates of a phase point."""

    alpha: complex
    beta: complex
    a: float
    z: complex
    eta_plus: np.ndarray   # (xi_1, xi_2, xi_3)
    eta_minus: np.ndarray  # (xi^1, xi^2, xi^3)

    @property
    def b(self) -> float:
        return self.z.real

    @property
    def c(self) -> float:
        return self.z.imag


def coordinates(p: PhasePoint) -> Sl2Coordinates:
    return Sl2Coordinates(
        alpha=complex(p.gp.matrix[0, 0]),
        beta=complex(p.gp.matrix[0, 1]),
        a=float(np.real(p.gm.matrix[0, 0])),
        z=complex(p.gm.matrix[0, 1]),
        eta_plus=p.eta.coords[:3].copy(),
        eta_minus=p.eta.coords[3:].copy(),
    )


def explicit_projected_generators(desc, a: float, b: float, c: float) -> tuple:
    """The three conjugated-plus projections of the su(2) basis.

    With f = 1 - (b^2 + c^2)/a^2 - 1/a^4:

        G_1 = T_1 - f T^2 - 2(c/a) T^3
        G_2 = T_2 + f T^1 - 2(b/a) T^3
        G_3 = T_3 + 2(c/a) T^1 + 2(b/a) T^2
    """
    if a <= 0:
        raise ValueError("a must be positive")
    f = 1.0 - (b * b + c * c) / a**2 - 1.0 / a**4
    g1 = np.array([1.0, 0, 0, 0, -f, -2 * c / a])
    g2 = np.array([0, 1.0, 0, f, 0, -2 * b / a])
    g3 = np.array([0, 0, 1.0, 2 * c / a, 2 * b / a, 0])
    return tuple(AlgebraVector(desc, g) for g in (g1, g2, g3))


def explicit_fundamental_brackets(p: PhasePoint) -> dict:
    """Coordinate Dirac brackets on an N fiber from the closed forms.

    Same table layout as dirac.fundamental_brackets_N: 'xi_t'[a,i,j] is
    {xi_a, g_ij} = -(g G_a)_ij, and 'xi_xi'[a,b] = {xi_a, xi_b} with
    coefficients polynomial in (a, b, c).
    """
    co = coordinates(p)
    a, b, c = co.a, co.b, co.c
    x1, x2, x3 = co.eta_plus
    u1, u2, u3 = co.eta_minus
    gens = explicit_projected_generators(p.desc, a, b, c)
    xi_t = np.stack([-(p.g.matrix @ g.matrix) for g in gens])

    q = (b * b + c * c) / a**2 + 1.0 / a**4
    br12 = (
        -2 * (b / a) * x1
        + 2 * (c / a) * x2
        + 2 * q * x3
        + 2 * (c / a) * (1 + q) * u1
        + 2 * (b / a) * (1 + q) * u2
    )
    br13 = (
        -2 * x2
        - 2 * (c / a) * x3
        + 2 * (b * b / a**2 - c * c / a**2 + 1.0 / a**4 - 1.0) * u1
        - 4 * (b * c / a**2) * u2
        + 4 * (b / a) * u3
    )
    br23 = (
        2 * x1
        - 2 * (b / a) * x3
        - 4 * (b * c / a**2) * u1
        - 2 * (1.0 + b * b / a**2 - c * c / a**2 - 1.0 / a**4) * u2
        - 4 * (c / a) * u3
    )
    xi_xi = np.array([[0.0, br12, br13], [-br12, 0.0, br23], [-br13, -br23, 0.0]])
    return {"xi_t": xi_t, "xi_xi": xi_xi}


def explicit_character_brackets(p: PhasePoint) -> dict:
    """The eta- = 0 reductions of the momentum brackets.

        {xi_1, xi_2} = -2(b/a) xi_1 + 2(c/a) xi_2 + 2 q xi_3
        {xi_3, xi_1} =  2 xi_2 + 2(c/a) xi_3
        {xi_2, xi_3} =  2 xi_1 - 2(b/a) xi_3
    """
    co = coordinates(p)
    a, b, c = co.a, co.b, co.c
    x1, x2, x3 = co.eta_plus
    q = (b * b + c * c) / a**2 + 1.0 / a**4
    return {
        "12": -2 * (b / a) * x1 + 2 * (c / a) * x2 + 2 * q * x3,
        "31": 2 * x2 + 2 * (c / a) * x3,
        "23": 2 * x1 - 2 * (b / a) * x3,
    }


def explicit_dressing_generators(desc, alpha: complex, beta: complex) -> tuple:
    """Left-trivialized dressing generators at g+ for the minus basis.

    Returns the expansions of g+^-1 g+^{T^1}, g+^-1 g+^{T^2}, g+^-1 g+^{T^3}
    in the su(2) basis.
    """
    al, be = complex(alpha), complex(beta)
    alc, bec = al.conjugate(), be.conjugate()
    d1 = np.array(
        [
            (0.5j * (be * be - bec * bec)).real,
            (-0.5 * (be * be + bec * bec)).real,
            (0.5j * (al * be - alc * bec)).real,
        ]
    )
    d2 = np.array(
        [
            (-0.5 * (be * be + bec * bec)).real,
            (-0.5j * (be * be - bec * bec)).real,
            (-0.5 * (alc * bec + al * be)).real,
        ]
    )
    d3 = np.array(
        [
            (0.5j * (al * bec - alc * be)).real,
            (0.5 * (al * bec + alc * be)).real,
            0.0,
        ]
    )
    pad = np.zeros(3)
    return tuple(
        AlgebraVector(desc, np.concatenate([dk, pad])) for dk in (d1, d2, d3)
    )


def phi_explicit(p: PhasePoint) -> np.ndarray:
    """The three dressing momentum functions as polynomials in the coordinates."""
    co = coordinates(p)
    al, be, a, z = co.alpha, co.beta, co.a, co.z
    alc, bec, zc = al.conjugate(), be.conjugate(), z.conjugate()
    e1, e2, e3 = co.eta_plus
    phi1 = (
        0.5j * a * a * (be * be - bec * bec) * e1
        - 0.5 * a * a * (be * be + bec * bec) * e2
        + 0.5j * (al * be - alc * bec - a * zc * be * be + a * z * bec * bec) * e3
    )
    phi2 = (
        -0.5 * a * a * (be * be + bec * bec) * e1
        - 0.5j * a * a * (be * be - bec * bec) * e2
        + 0.5 * (a * zc * be * be + a * z * bec * bec - alc * bec - al * be) * e3
    )
    phi3 = (
        -0.5j * a * a * (alc * be - al * bec) * e1
        + 0.5 * a * a * (al * bec + alc * be) * e2
        + 0.5j * a * (zc * alc * be - z * al * bec) * e3
    )
    return np.array([phi1.real, phi2.real, phi3.real])


def example_hamiltonian(p: PhasePoint) -> float:
    """Collective Hamiltonian of the dressing momenta: half their square sum."""
    ph = phi_explicit(p)
    return 0.5 * float(ph @ ph)


def example_hamilton_eqs(p: PhasePoint) -> TangentVector:
    """Hamilton equations of the dressing-momentum Hamiltonian at eta- = 0.

    Written with the -1/8 normalization of the momentum identification
    (kappa-hat sends T_i to -8 t_i, so the identified fiber gradient is
    ell = -8 sum_a phi^a T^a):

        g+^-1 dg+       = -(1/8) Pi_plus Ad_{g+^-1} ell
        coAd_{g-} deta+ =  (1/8) Pi_plus-dual coad(Pi_minus Ad_{g+^-1} ell,
                                                   coAd_{g-} eta+)
    """
    co = coordinates(p)
    if float(np.max(np.abs(co.eta_minus))) > 1e-10:
        raise ValueError("the worked Hamilton equations assume eta- = 0")
    desc = p.desc
    ph = phi_explicit(p)
    ell_coords = np.concatenate([np.zeros(3), -8.0 * ph])
    ell = AlgebraVector(desc, ell_coords)
    moved = adjoint(p.gp.inverse(), ell)
    plus_vel = (-1.0 / 8.0) * moved.plus_part()
    body = adjoint(p.gm.inverse(), plus_vel)

    lam = coadjoint(p.gm, p.eta.plus_part())
    # ad* here is the pullback convention, the negative of inf_coadjoint.
    shifted = (-1.0 / 8.0) * inf_coadjoint(moved.minus_part(), lam).plus_part()
    eta_dot = coadjoint(p.gm.inverse(), shifted).plus_part()
    return TangentVector(body, eta_dot)


def velocity_map(p: PhasePoint) -> np.ndarray:
    """Matrix of the linear map eta+ -> g+^-1 dg+ along the Hamilton flow.

    Columns combine the explicit momentum coefficients with the explicit
    dressing generators; the matrix has rank 2 (the dressing orbits are
    two-dimensional), with kernel the Lagrange-multiplier direction.
    """
    gens = explicit_dressing_generators(p.desc, *_alpha_beta(p))
    d_mat = np.column_stack([g.coords[:3] for g in gens])
    j_mat = np.column_stack(
        [
            phi_explicit(PhasePoint(p.g, DualVector(p.desc, e)))
            for e in np.eye(6)[:3]
        ]
    )
    return d_mat @ j_mat


def invert_velocity(p: PhasePoint, v_coords: np.ndarray) -> np.ndarray:
    """eta+ with the prescribed velocity, kernel component zeroed.

    The rank-deficient 3x3 system is closed by appending the kernel row and
    solving the normal equations.
    """
    m = velocity_map(p)
    kernel = nullspace(m, tol=1e-9)
    aug = np.vstack([m] + [w[None, :] for w in kernel])
    rhs = np.concatenate([np.asarray(v_coords, dtype=float), np.zeros(len(kernel))])
    return solve_linear(aug.T @ aug, aug.T @ rhs)


def _alpha_beta(p: PhasePoint) -> tuple:
    return complex(p.gp.matrix[0, 0]), complex(p.gp.matrix[0, 1])


def metric_K(p: PhasePoint) -> np.ndarray:
    """The kinetic metric of the compact Lagrangian form.

    K = (1/2|beta|^2) [[1, 0, m], [0, 1, n], [m, n, 1]] with

        m = ((a^2-1)(beta conj(alpha) + alpha conj(beta))
             + a (z + conj(z)) |beta|^2) / (2 a^2 |beta|^2)
        n = i ((1-a^2)(alpha conj(beta) - beta conj(alpha))
             + a (z - conj(z)) |beta|^2) / (2 a^2 |beta|^2)

    Both m and n are real; they vanish at g- = e, where K is diagonal.
    """
    co = coordinates(p)
    al, be, a, z = co.alpha, co.beta, co.a, co.z
    bb = abs(be) ** 2
    if abs(be) < BETA_TOL:
        raise SingularConfiguration("beta is numerically zero")
    m = (
        ((a * a - 1) * (be * al.conjugate() + al * be.conjugate())
         + a * (z.conjugate() + z) * bb)
        / (2 * a * a * bb)
    )
    n = (
        1j
        * ((1 - a * a) * (al * be.conjugate() - be * al.conjugate())
           + a * (z - z.conjugate()) * bb)
        / (2 * a * a * bb)
    )
    m, n = m.real, n.real
    return np.array([[1.0, 0.0, m], [0.0, 1.0, n], [m, n, 1.0]]) / (2 * bb)


def vector_A(p: PhasePoint) -> AlgebraVector:
    """Constraint direction of the velocity distribution.

    The velocities reachable by the Hamilton flow span the kappa-orthogonal
    complement of A = (a^2/4)(Re(alpha conj(beta)) T_1
    + Im(alpha conj(beta)) T_2 - |beta|^2 T_3); the T_3 coefficient carries
    the normalization of the multiplier term.
    """
    co = coordinates(p)
    if abs(co.beta) < BETA_TOL:
        raise SingularConfiguration("beta is numerically zero")
    w = co.alpha * co.beta.conjugate()
    coeff = 0.25 * co.a * co.a
    coords = np.array(
        [coeff * w.real, coeff * w.imag, -coeff * abs(co.beta) ** 2, 0.0, 0.0, 0.0]
    )
    return AlgebraVector(p.desc, coords)


def constraint_Omega(p: PhasePoint, v: AlgebraVector) -> float:
    """Velocity constraint kappa(A, v); zero along the Hamilton flow."""
    return float(np.real(killing(vector_A(p).matrix, v.matrix)))


def lagrangian_eval(p: PhasePoint, v: AlgebraVector, lam: float) -> float:
    """Compact Lagrangian value -(1/8) kappa(v, K v + lam A)."""
    k = metric_K(p)
    kv = k @ v.coords[:3]
    kv_vec = AlgebraVector(p.desc, np.concatenate([kv, np.zeros(3)]))
    target = kv_vec + lam * vector_A(p)
    return -0.125 * float(np.real(killing(v.matrix, target.matrix)))
