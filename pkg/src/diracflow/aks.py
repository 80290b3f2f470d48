"""Collective dynamics and the solve-by-factorization construction.

A collective Hamiltonian is a function of the momentum alone, carried with
its Legendre map L: g* -> g defined by <xi, L(eta)> = d/dt h(eta + t xi)|_0.
For Ad-invariant h composed with the left momentum map, the Dirac flow on an
N fiber is integrated exactly by factorizing the one-parameter exponential
curve k(t) = k0 exp(t L(xi0)); a Runge-Kutta integrator on the trivialized
equations provides the independent cross-check.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .dirac import (
    DiffPair,
    PhasePoint,
    ScalarField,
    TangentVector,
    conj_plus,
    momentum_map_left,
)
from .doublegroup import (
    AlgebraVector,
    DualVector,
    GroupDescriptor,
    GroupElement,
    Tag,
    adjoint,
    coadjoint,
    factorize,
    flat_inv,
    flat_map,
    inf_coadjoint,
    is_character,
    lie_bracket,
    pairing,
    unchecked_element,
)
from .linalg import inv2, mat_exp, nullspace

__all__ = [
    "CollectiveHamiltonian",
    "NotCharacter",
    "NotOnLevelSet",
    "Trajectory",
    "aks_momentum_J",
    "aks_vf_on_N",
    "canonical_two_form",
    "collective_field",
    "collective_vf",
    "companion_invariant",
    "integrate_rk4",
    "involutivity_check",
    "lambda_tangent_basis",
    "orbit_map_L",
    "orbit_two_form",
    "orbit_vf",
    "quadratic_hamiltonian",
    "quartic_invariant",
    "reduced_hamiltonian",
    "solve_by_factorization",
]


class NotCharacter(Exception):
    """The minus momentum level was not a character."""


class NotOnLevelSet(Exception):
    """The point missed the requested momentum level."""


@dataclass(frozen=True)
class CollectiveHamiltonian:
    """Function on g* with its Legendre map and an Ad-invariance flag."""

    h: Callable[[DualVector], float]
    legendre: Callable[[DualVector], AlgebraVector]
    ad_invariant: bool = False


def quadratic_hamiltonian(desc: GroupDescriptor) -> CollectiveHamiltonian:
    """h(xi) = 1/2 <xi, xi_flat>; the Legendre map is the flat map itself."""
    return CollectiveHamiltonian(
        h=lambda eta: 0.5 * pairing(eta, flat_map(eta)),
        legendre=flat_map,
        ad_invariant=True,
    )


def companion_invariant(desc: GroupDescriptor) -> CollectiveHamiltonian:
    """The conjugate quadratic invariant -1/2 Re tr(flat(eta)^2).

    Together with the quadratic Hamiltonian it generates the conjugation
    invariants of the complex algebra; its Legendre map i*flat(eta) is not
    parallel to flat(eta) over the reals, so the pair exercises involutivity
    non-trivially.
    """

    def h(eta):
        m = flat_map(eta).matrix
        return -0.5 * float(np.real(np.trace(m @ m)))

    def legendre(eta):
        return AlgebraVector.from_matrix(eta.desc, 1j * flat_map(eta).matrix)

    return CollectiveHamiltonian(h, legendre, ad_invariant=True)


def quartic_invariant(desc: GroupDescriptor) -> CollectiveHamiltonian:
    """The square of the quadratic invariant."""
    quad = quadratic_hamiltonian(desc)

    def h(eta):
        return quad.h(eta) ** 2

    def legendre(eta):
        return (2.0 * quad.h(eta)) * flat_map(eta)

    return CollectiveHamiltonian(h, legendre, ad_invariant=True)


def collective_field(ham: CollectiveHamiltonian) -> ScalarField:
    """The collective Hamiltonian composed with the left momentum map.

    The differential pair is exact for any h: with mu = coAd_g eta the fiber
    differential is Ad_{g^-1} L(mu) and the group differential is
    -coad(delta, eta); for Ad-invariant h the latter vanishes and the former
    collapses to L(eta).
    """

    def ev(p: PhasePoint) -> float:
        return ham.h(momentum_map_left(p))

    def df(p: PhasePoint) -> DiffPair:
        delta = adjoint(p.g.inverse(), ham.legendre(momentum_map_left(p)))
        return DiffPair(-inf_coadjoint(delta, p.eta), delta)

    return ScalarField(ev, df)


def collective_vf(ham: CollectiveHamiltonian, p: PhasePoint) -> TangentVector:
    """Dirac-bracket Hamiltonian field of an Ad-invariant collective h on N.

    Closed form: body velocity is the conjugated-plus projection of L(eta);
    the momentum force is the conjugated-minus projection of [eta, v].
    Coincides with ham_vf_N applied to collective_field(ham).  Runs at the
    matrix level: this is the integrators' hot path.
    """
    desc = p.desc
    n = desc.dim_half
    gm = p.gm.matrix
    gmi = np.array([[gm[1, 1], -gm[0, 1]], [-gm[1, 0], gm[0, 0]]], dtype=complex)
    ell = ham.legendre(p.eta).matrix
    w_coords = desc.expand(gm @ ell @ gmi)
    w_coords[n:] = 0.0
    a = gmi @ desc.reconstruct(w_coords) @ gm
    e = flat_map(p.eta).matrix
    c = e @ a - a @ e
    f_coords = desc.expand(gm @ c @ gmi)
    f_coords[:n] = 0.0
    f = desc.expand(gmi @ desc.reconstruct(f_coords) @ gm)
    v = AlgebraVector(desc, desc.expand(a), a)
    return TangentVector(v, DualVector(desc, np.concatenate([f[n:], f[:n]])))


# ---------------------------------------------------------------------------
# integrators


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    points: list


def _dexpinv_left(a: np.ndarray, v: np.ndarray) -> np.ndarray:
    # Truncated inverse right-translated differential of exp for the
    # left-trivialized equation dg = g v; degree 2 suffices for order 4.
    c1 = a @ v - v @ a
    c2 = a @ c1 - c1 @ a
    return v + 0.5 * c1 + c2 / 12.0


def _renormalize(m: np.ndarray) -> np.ndarray:
    det = complex(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    return m / cmath.sqrt(det)


def integrate_rk4(vf, p0: PhasePoint, total_time: float, steps: int) -> Trajectory:
    """Classical RK4 on the trivialized equations dg = g v(p), deta = w(p).

    Group updates run in the exponential chart with the commutator-corrected
    slopes, so the classical order survives the non-commutativity; each step
    ends with g mat_exp(combined slope) and a det-root rescale.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    desc = p0.desc
    h = total_time / steps
    times = [0.0]
    points = [p0]
    p = p0
    for k in range(steps):
        g0 = p.g.matrix
        eta0 = p.eta.coords

        def stage(a_mat, eta_c):
            q = PhasePoint(
                unchecked_element(desc, _renormalize(g0 @ mat_exp(a_mat)), Tag.FULL),
                DualVector(desc, eta_c),
            )
            t = vf(q)
            return t.body_velocity.matrix, t.eta_dot.coords

        zero = np.zeros((2, 2), dtype=complex)
        v1, w1 = stage(zero, eta0)
        k1 = _dexpinv_left(zero, v1)
        a2 = 0.5 * h * k1
        v2, w2 = stage(a2, eta0 + 0.5 * h * w1)
        k2 = _dexpinv_left(a2, v2)
        a3 = 0.5 * h * k2
        v3, w3 = stage(a3, eta0 + 0.5 * h * w2)
        k3 = _dexpinv_left(a3, v3)
        a4 = h * k3
        v4, w4 = stage(a4, eta0 + h * w3)
        k4 = _dexpinv_left(a4, v4)

        a_step = (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        g_next = _renormalize(g0 @ mat_exp(a_step))
        eta_next = eta0 + (h / 6.0) * (w1 + 2.0 * w2 + 2.0 * w3 + w4)
        p = PhasePoint(
            unchecked_element(desc, g_next, Tag.FULL), DualVector(desc, eta_next)
        )
        times.append((k + 1) * h)
        points.append(p)
    return Trajectory(np.array(times), points)


def solve_by_factorization(
    ham: CollectiveHamiltonian, p0: PhasePoint, total_time: float, samples: int
) -> Trajectory:
    """Exact integration of the collective flow by factorizing an exponential.

    With lambda = coAd_{g-} eta and xi constant, the curve
    k(t) = g+(0) mat_exp(t L(xi0)) factorizes as g+(t) h-(t); the solution is
    g(t) = g+(t) g- with eta+ transported by coAd along g-^-1 h-(t) and the
    level (g-, eta-) frozen by construction.
    """
    if not ham.ad_invariant:
        raise ValueError("factorization solution needs an Ad-invariant Hamiltonian")
    eta_minus = p0.eta.minus_part()
    if not is_character(eta_minus, tol=1e-10):
        raise NotCharacter("eta- is not a character of the minus subalgebra")
    desc = p0.desc
    xi0 = coadjoint(p0.gm, p0.eta)
    ell = ham.legendre(xi0).matrix
    gm_inv = inv2(p0.gm.matrix)
    times = np.linspace(0.0, total_time, samples + 1) if total_time else np.array([0.0])
    points = []
    for t in times:
        k_t = GroupElement(desc, p0.gp.matrix @ mat_exp(t * ell))
        kp, km = factorize(k_t)
        shift = GroupElement(desc, gm_inv @ km.matrix)
        eta_t = coadjoint(shift, xi0).plus_part() + eta_minus
        points.append(PhasePoint.from_factors(kp, p0.gm, eta_t))
    return Trajectory(np.asarray(times, dtype=float), points)


# ---------------------------------------------------------------------------
# involutivity


def involutivity_check(
    f: CollectiveHamiltonian, g: CollectiveHamiltonian, p: PhasePoint
) -> float:
    """Dirac bracket on N of two momentum-space functions at p.

    Zero (to roundoff) whenever both functions are Ad-invariant and eta- is
    a character; evaluated unconditionally so the hypotheses can be dropped
    for negative controls.
    """
    zero = DualVector(p.desc, np.zeros(2 * p.desc.dim_half))
    df = DiffPair(zero, f.legendre(p.eta))
    dg = DiffPair(zero, g.legendre(p.eta))
    pf = conj_plus(p, df.delta)
    pg = conj_plus(p, dg.delta)
    return -pairing(p.eta, lie_bracket(pf, pg))


# ---------------------------------------------------------------------------
# orbit-space machinery


def aks_momentum_J(p: PhasePoint) -> tuple:
    """Momentum of the two-sided translation action: plus block of coAd_g eta
    paired with the minus block of eta."""
    mu = coadjoint(p.g, p.eta)
    return mu.plus_part(), p.eta.minus_part()


def orbit_map_L(p: PhasePoint, eta_plus: DualVector, eta_minus: DualVector, tol: float = 1e-8):
    """Both blocks of coAd_{g-} eta, for p on the (eta+, eta-) level set."""
    j1, j2 = aks_momentum_J(p)
    if (j1 - eta_plus).norm() > tol or (j2 - eta_minus).norm() > tol:
        raise NotOnLevelSet("point is not on the requested momentum level")
    moved = coadjoint(p.gm, p.eta)
    return moved.plus_part(), moved.minus_part()


def reduced_hamiltonian(sigma_plus: DualVector, sigma_minus: DualVector) -> float:
    """Quadratic collective Hamiltonian descended to the orbit product."""
    fp = flat_map(sigma_plus)
    fm = flat_map(sigma_minus)
    return (
        0.5 * pairing(sigma_plus, fp)
        + 0.5 * pairing(sigma_minus, fm)
        + pairing(sigma_plus, fm)
    )


def orbit_vf(sigma_plus: DualVector, sigma_minus: DualVector) -> tuple:
    """Hamiltonian field of the reduced Hamiltonian on the orbit product.

    Normalized as the pushforward of the ambient flow (flat(xi), 0) through
    the orbit map: both blocks of coad(flat(sigma+), sigma+ + sigma-).
    """
    x = flat_map(sigma_plus)
    mu = inf_coadjoint(x, sigma_plus + sigma_minus)
    return mu.plus_part(), mu.minus_part()


def canonical_two_form(p: PhasePoint, t1: tuple, t2: tuple) -> float:
    """Canonical symplectic form on body-coordinate tangents (X, lam)."""
    x, lam = t1
    y, mu = t2
    return pairing(lam, y) - pairing(mu, x) - pairing(p.eta, lie_bracket(x, y))


def orbit_two_form(
    p: PhasePoint, sigma_plus: DualVector, sigma_minus: DualVector, t1: tuple, t2: tuple
) -> float:
    """Difference of the orbit symplectic forms evaluated on pushforwards.

    Tangents are given upstairs as (X, lam); their pushforward generators on
    the orbits are the plus/minus blocks of Ad_{g-} X.
    """
    x_pm = adjoint(p.gm, t1[0])
    y_pm = adjoint(p.gm, t2[0])
    return pairing(
        sigma_plus, lie_bracket(x_pm.plus_part(), y_pm.plus_part())
    ) - pairing(sigma_minus, lie_bracket(x_pm.minus_part(), y_pm.minus_part()))


def lambda_tangent_basis(p: PhasePoint) -> list:
    """Basis of tangents (X, lam) to the momentum level set through p.

    lam is constrained to the plus dual block and the plus block of
    coAd_g(coad(X, eta) + lam) must vanish; the kernel is extracted from the
    assembled linear conditions.
    """
    desc = p.desc
    n = desc.dim_half
    n2 = 2 * n
    cols = n2 + n  # X coordinates then the plus-block lam coordinates
    rows = np.zeros((n, cols))
    for k in range(n2):
        x = AlgebraVector.basis_element(desc, k)
        moved = coadjoint(p.g, inf_coadjoint(x, p.eta))
        rows[:, k] = moved.coords[:n]
    for a in range(n):
        lam = DualVector.basis_element(desc, a)
        rows[:, n2 + a] = coadjoint(p.g, lam).coords[:n]
    kernel = nullspace(rows, tol=1e-10)
    basis = []
    for vec in kernel:
        x = AlgebraVector(desc, vec[:n2])
        lam = DualVector(desc, np.concatenate([vec[n2:], np.zeros(n)]))
        basis.append((x, lam))
    return basis


def aks_vf_on_N(p: PhasePoint) -> TangentVector:
    """The reduced-space field lifted back to the N fiber.

    Built from the plus momentum block alone; equals collective_vf of the
    quadratic Hamiltonian on the zero minus-momentum fibers, where both
    vanish identically for this instance.
    """
    if not is_character(p.eta.minus_part(), tol=1e-10):
        raise NotCharacter("eta- is not a character of the minus subalgebra")
    w = adjoint(p.gm, flat_map(p.eta.plus_part()))
    v = adjoint(p.gm.inverse(), w.plus_part())
    eta_dot = flat_inv(
        adjoint(p.gm.inverse(), lie_bracket(w.minus_part(), w).minus_part())
    )
    return TangentVector(v, eta_dot)
