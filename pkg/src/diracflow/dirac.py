"""The bracket engine on the left-trivialized cotangent bundle G x g*.

A scalar field carries its differential pair (gdF, dF) with gdF in g* (the
left-trivialized group-direction differential) and dF in g (the fiber
differential).  The canonical bracket is

    {F,G} = <gdF, dG> - <gdG, dF> - <eta, [dF, dG]>

and the Hamiltonian field of F satisfies <dG, V_F> = {G, F}, which in body
coordinates reads V_F = (dF, -gdF - coad(dF, eta)).

The two constraint fibrations project onto the minus data (side N: level
(g-, eta-)) or the plus data (side M: level (g+, eta+)).  Constraint
one-forms are represented by their differential pairs, which is all the
Dirac correction consumes.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, NamedTuple

import numpy as np

from .doublegroup import (
    AlgebraVector,
    DualVector,
    GroupDescriptor,
    GroupElement,
    adjoint,
    coadjoint,
    factorize,
    flat_inv,
    flat_map,
    inf_coadjoint,
    lie_bracket,
    minus_dressing_generator,
    pairing,
)
from .linalg import SingularMatrix, inv2, mat_exp, numerical_rank, solve_linear

__all__ = [
    "DiffPair",
    "NotSecondClass",
    "PhasePoint",
    "ScalarField",
    "Side",
    "TangentVector",
    "canonical_bracket",
    "constraint_forms",
    "constraint_value",
    "coordinate_fields",
    "dirac_bracket_M",
    "dirac_bracket_N",
    "dirac_bracket_general",
    "dirac_matrix",
    "entry_field",
    "fd_diff",
    "field_product",
    "fundamental_brackets_N",
    "g_action_M",
    "g_action_N",
    "ham_vf_M",
    "ham_vf_N",
    "momentum_fn",
    "momentum_map_left",
    "second_class_check",
    "xi_field",
]

FD_STEP = 1e-5


class NotSecondClass(Exception):
    """Dirac matrix was not invertible at the evaluation point."""


class Side(Enum):
    N = "N"  # fibers of the minus-data projection
    M = "M"  # fibers of the plus-data projection


class DiffPair(NamedTuple):
    bold_d: DualVector
    delta: AlgebraVector


@dataclass(frozen=True)
class PhasePoint:
    """Point (g, eta) of G x g* with the factorization cached."""

    g: GroupElement
    eta: DualVector

    def __post_init__(self):
        gp, gm = factorize(self.g)
        object.__setattr__(self, "gp", gp)
        object.__setattr__(self, "gm", gm)

    @classmethod
    def from_factors(cls, gp: GroupElement, gm: GroupElement, eta: DualVector) -> "PhasePoint":
        """Assemble a point from known factors without re-factorizing."""
        p = object.__new__(cls)
        g = GroupElement(gp.desc, gp.matrix @ gm.matrix)
        object.__setattr__(p, "g", g)
        object.__setattr__(p, "eta", eta)
        object.__setattr__(p, "gp", gp)
        object.__setattr__(p, "gm", gm)
        return p

    @property
    def desc(self) -> GroupDescriptor:
        return self.g.desc

    def translated(self, x_matrix: np.ndarray, t: float) -> "PhasePoint":
        """Point with g replaced by g exp(t x); used for finite differences."""
        return PhasePoint(
            GroupElement(self.desc, self.g.matrix @ mat_exp(t * x_matrix)), self.eta
        )

    def shifted(self, xi_coords: np.ndarray, t: float) -> "PhasePoint":
        return PhasePoint(self.g, DualVector(self.desc, self.eta.coords + t * xi_coords))


@dataclass(frozen=True)
class TangentVector:
    body_velocity: AlgebraVector  # g^-1 dg
    eta_dot: DualVector


@dataclass(frozen=True)
class ScalarField:
    """Function on G x g* together with its differential pair."""

    eval_fn: Callable[[PhasePoint], float]
    diff_fn: Callable[[PhasePoint], DiffPair]
    analytic: bool = True

    def __call__(self, p: PhasePoint) -> float:
        return self.eval_fn(p)

    def diff(self, p: PhasePoint) -> DiffPair:
        return self.diff_fn(p)

    @classmethod
    def from_eval(cls, eval_fn, step: float = FD_STEP) -> "ScalarField":
        """Field whose differential comes from central finite differences."""
        return cls(eval_fn, lambda p: fd_diff(eval_fn, p, step), analytic=False)


def fd_diff(eval_fn, p: PhasePoint, step: float = FD_STEP) -> DiffPair:
    """Central-difference differential pair of a scalar function.

    Group directions are probed along g exp(t T_k); in the dual-basis
    coordinates the sampled values <gdF, T_k> are the coordinates of gdF.
    """
    desc = p.desc
    n2 = 2 * desc.dim_half
    bold = np.empty(n2)
    delta = np.empty(n2)
    for k in range(n2):
        bk = desc.basis_stack[k]
        bold[k] = (
            eval_fn(p.translated(bk, step)) - eval_fn(p.translated(bk, -step))
        ) / (2 * step)
        e = np.zeros(n2)
        e[k] = 1.0
        delta[k] = (eval_fn(p.shifted(e, step)) - eval_fn(p.shifted(e, -step))) / (
            2 * step
        )
    return DiffPair(DualVector(desc, bold), AlgebraVector(desc, delta))


def field_product(f: ScalarField, g: ScalarField) -> ScalarField:
    def ev(p):
        return f(p) * g(p)

    def df(p):
        fv, gv = f(p), g(p)
        fd, gd = f.diff(p), g.diff(p)
        return DiffPair(fv * gd.bold_d + gv * fd.bold_d, fv * gd.delta + gv * fd.delta)

    return ScalarField(ev, df, analytic=f.analytic and g.analytic)


# ---------------------------------------------------------------------------
# coordinate fields


def entry_field(desc: GroupDescriptor, i: int, j: int, part: str) -> ScalarField:
    """Real or imaginary part of the matrix entry function g -> g_ij."""
    take = np.real if part == "re" else np.imag

    def ev(p):
        return float(take(p.g.matrix[i, j]))

    def df(p):
        vals = np.array(
            [float(take((p.g.matrix @ bk)[i, j])) for bk in desc.basis_stack]
        )
        zero = AlgebraVector(desc, np.zeros(2 * desc.dim_half))
        return DiffPair(DualVector(desc, vals), zero)

    return ScalarField(ev, df)


def xi_field(desc: GroupDescriptor, k: int) -> ScalarField:
    """Momentum coordinate eta -> <eta, basis_k>."""
    basis_vec = AlgebraVector.basis_element(desc, k)
    zero_dual = DualVector(desc, np.zeros(2 * desc.dim_half))

    def ev(p):
        return float(p.eta.coords[k])

    def df(p):
        return DiffPair(zero_dual, basis_vec)

    return ScalarField(ev, df)


def coordinate_fields(desc: GroupDescriptor) -> list:
    """The standard coordinate fields: 8 entry parts and 2n momenta."""
    fields = []
    for i in range(2):
        for j in range(2):
            fields.append(entry_field(desc, i, j, "re"))
            fields.append(entry_field(desc, i, j, "im"))
    fields.extend(xi_field(desc, k) for k in range(2 * desc.dim_half))
    return fields


# ---------------------------------------------------------------------------
# brackets


def canonical_bracket(f, g, p: PhasePoint) -> float:
    """Canonical Poisson bracket of two fields (or raw differential pairs)."""
    df = f.diff(p) if isinstance(f, ScalarField) else f
    dg = g.diff(p) if isinstance(g, ScalarField) else g
    return (
        pairing(df.bold_d, dg.delta)
        - pairing(dg.bold_d, df.delta)
        - pairing(p.eta, lie_bracket(df.delta, dg.delta))
    )


def constraint_value(p: PhasePoint, side: Side) -> tuple:
    """Level data of the point: (g-, eta-) for side N, (g+, eta+) for side M."""
    if side is Side.N:
        return p.gm, p.eta.minus_part()
    return p.gp, p.eta.plus_part()


def constraint_forms(p: PhasePoint, side: Side) -> list:
    """Differential pairs of the 2n constraint one-forms at p.

    Group-level forms enter with the sign that makes the assembled matrix
    take the [[0,-I],[I,Omega]] block shape on side N; the Dirac bracket is
    invariant under this sign choice.
    """
    desc = p.desc
    n = desc.dim_half
    zero_alg = AlgebraVector(desc, np.zeros(2 * n))
    zero_dual = DualVector(desc, np.zeros(2 * n))
    forms = []
    if side is Side.N:
        for a in range(n):
            t_a = AlgebraVector.basis_element(desc, a)
            drag = minus_dressing_generator(p.gm, t_a)
            forms.append(DiffPair(flat_inv(drag - t_a), zero_alg))
        for a in range(n, 2 * n):
            forms.append(DiffPair(zero_dual, AlgebraVector.basis_element(desc, a)))
    else:
        gm_inv = p.gm.inverse()
        for a in range(n, 2 * n):
            moved = adjoint(gm_inv, AlgebraVector.basis_element(desc, a))
            forms.append(DiffPair(flat_inv(moved), zero_alg))
        for a in range(n):
            forms.append(DiffPair(zero_dual, AlgebraVector.basis_element(desc, a)))
    return forms


def dirac_matrix(p: PhasePoint, side: Side, mode: str = "closed") -> np.ndarray:
    """The 2n x 2n matrix of constraint-form brackets.

    mode="closed" assembles the block closed form; mode="bracket" computes
    every entry from the canonical bracket of the constraint forms.  The two
    agree; the second exists for cross-validation.
    """
    desc = p.desc
    n = desc.dim_half
    if mode == "bracket":
        forms = constraint_forms(p, side)
        return np.array(
            [[canonical_bracket(fj, fk, p) for fk in forms] for fj in forms]
        )
    if mode != "closed":
        raise ValueError(f"unknown mode {mode!r}")
    c = np.zeros((2 * n, 2 * n))
    if side is Side.N:
        # [[0, -I], [I, Omega]] with Omega_ab = -<eta, [T^a, T^b]>.
        c[:n, n:] = -np.eye(n)
        c[n:, :n] = np.eye(n)
        for a in range(n):
            for b in range(n):
                c[n + a, n + b] = -float(p.eta.coords @ desc.structure[n + a, n + b])
    else:
        # [[0, F], [-F^T, Theta]] with F[a][b] = form(Ad_{g-^-1} T^a, T_b).
        gm_inv_m = inv2(p.gm.matrix)
        for a in range(n):
            moved = gm_inv_m @ desc.basis_stack[n + a] @ p.gm.matrix
            for b in range(n):
                c[a, n + b] = desc.form(moved, desc.basis_stack[b])
        c[n:, :n] = -c[:n, n:].T
        for a in range(n):
            for b in range(n):
                c[n + a, n + b] = -float(p.eta.coords @ desc.structure[a, b])
    return c


def dirac_bracket_general(f, g, p: PhasePoint, side: Side) -> float:
    """Dirac bracket via the generic correction with the inverted matrix."""
    forms = constraint_forms(p, side)
    c = dirac_matrix(p, side)
    row = np.array([canonical_bracket(f, fl, p) for fl in forms])
    col = np.array([canonical_bracket(fk, g, p) for fk in forms])
    try:
        y = solve_linear(c, col)
    except SingularMatrix as exc:
        raise NotSecondClass(str(exc)) from exc
    return canonical_bracket(f, g, p) - float(row @ y)


def conj_plus(p: PhasePoint, x: AlgebraVector) -> AlgebraVector:
    """Ad_{g-^-1} Pi_plus Ad_{g-} applied to x."""
    moved = adjoint(p.gm, x).plus_part()
    return adjoint(p.gm.inverse(), moved)


def conj_minus(p: PhasePoint, x: AlgebraVector) -> AlgebraVector:
    moved = adjoint(p.gm, x).minus_part()
    return adjoint(p.gm.inverse(), moved)


def dirac_bracket_N(f, g, p: PhasePoint) -> float:
    """Closed-form Dirac bracket on the N fibers.

    At the (e, 0) fiber the conjugated projector collapses to the plain plus
    projector and the formula is the canonical structure of T*G+.
    """
    df = f.diff(p) if isinstance(f, ScalarField) else f
    dg = g.diff(p) if isinstance(g, ScalarField) else g
    pf = conj_plus(p, df.delta)
    pg = conj_plus(p, dg.delta)
    return (
        pairing(df.bold_d, pg)
        - pairing(dg.bold_d, pf)
        - pairing(p.eta, lie_bracket(pf, pg))
    )


def dirac_bracket_M(f, g, p: PhasePoint) -> float:
    """Closed-form Dirac bracket on the M fibers: canonical T*G- structure."""
    df = f.diff(p) if isinstance(f, ScalarField) else f
    dg = g.diff(p) if isinstance(g, ScalarField) else g
    pf = df.delta.minus_part()
    pg = dg.delta.minus_part()
    return (
        pairing(df.bold_d, pg)
        - pairing(dg.bold_d, pf)
        - pairing(p.eta, lie_bracket(pf, pg))
    )


def second_class_check(p: PhasePoint, side: Side, tol: float = 1e-10) -> bool:
    """Whether the constraint is second class at p (full-rank Dirac matrix)."""
    c = dirac_matrix(p, side)
    return numerical_rank(c, tol) == c.shape[0]


# ---------------------------------------------------------------------------
# fundamental coordinate brackets on N


def fundamental_brackets_N(p: PhasePoint) -> dict:
    """Dirac brackets of the coordinate functions on an N fiber.

    Keys: 'xi_t'[a,i,j] = {xi_a, g_ij}, 'xi_xi'[a,b] = {xi_a, xi_b}, and the
    coefficient tables 'f', 'm', 'n' of the expansion
    {xi_a, xi_b} = (-f_ab^c + m_ab^c) xi_c + n_ab^c xi^c.  Entry-entry
    brackets and every bracket against a minus-block momentum vanish
    identically and are not tabulated.
    """
    desc = p.desc
    n = desc.dim_half
    drag = [
        minus_dressing_generator(p.gm, AlgebraVector.basis_element(desc, a))
        for a in range(n)
    ]

    xi_t = np.empty((n, 2, 2), dtype=complex)
    for a in range(n):
        dressed = adjoint(p.gm, AlgebraVector.basis_element(desc, a)).minus_part()
        xi_t[a] = (
            p.gp.matrix @ dressed.matrix @ p.gm.matrix
            - p.g.matrix @ desc.basis_stack[a]
        )

    xi_xi = np.empty((n, n))
    for a in range(n):
        xa = AlgebraVector.basis_element(desc, a) - drag[a]
        for b in range(n):
            xb = AlgebraVector.basis_element(desc, b) - drag[b]
            xi_xi[a, b] = -pairing(p.eta, lie_bracket(xa, xb))

    f_tab = desc.structure[:n, :n, :n].copy()
    m_tab = np.empty((n, n, n))
    n_tab = np.empty((n, n, n))
    for a in range(n):
        for b in range(n):
            for c in range(n):
                tc_up = desc.basis_stack[n + c]
                tc_dn = desc.basis_stack[c]
                m_tab[a, b, c] = desc.form(
                    _comm(drag[b].matrix, tc_up), desc.basis_stack[a]
                ) - desc.form(_comm(drag[a].matrix, tc_up), desc.basis_stack[b])
                n_tab[a, b, c] = (
                    desc.form(_comm(desc.basis_stack[b], tc_dn), drag[a].matrix)
                    - desc.form(_comm(desc.basis_stack[a], tc_dn), drag[b].matrix)
                    - desc.form(tc_dn, _comm(drag[a].matrix, drag[b].matrix))
                )
    return {"xi_t": xi_t, "xi_xi": xi_xi, "f": f_tab, "m": m_tab, "n": n_tab}


def _comm(x, y):
    return x @ y - y @ x


# ---------------------------------------------------------------------------
# momentum maps and Hamiltonian fields


def momentum_map_left(p: PhasePoint) -> DualVector:
    """Momentum map of the lifted left translations: coAd_g eta."""
    return coadjoint(p.g, p.eta)


def momentum_fn(x: AlgebraVector) -> ScalarField:
    """Hamiltonian of the left-translation generator along x."""

    def ev(p):
        return pairing(p.eta, adjoint(p.g.inverse(), x))

    def df(p):
        moved = adjoint(p.g.inverse(), x)
        return DiffPair(-inf_coadjoint(moved, p.eta), moved)

    return ScalarField(ev, df)


def _project_dual_N(p: PhasePoint, mu: DualVector) -> DualVector:
    # Pairing-adjoint of the conjugated plus projector: realized as the
    # complementary conjugated minus projector on the flat matrix.
    moved = adjoint(p.gm, flat_map(mu)).minus_part()
    return flat_inv(adjoint(p.gm.inverse(), moved))


def ham_vf_N(f, p: PhasePoint) -> TangentVector:
    """Hamiltonian vector field of f on the N fiber through p.

    Defining property: <dG, V> = {G, f}^N for every test field G.  The flow
    leaves the fiber level (g-, eta-) fixed.
    """
    dpair = f.diff(p) if isinstance(f, ScalarField) else f
    v = conj_plus(p, dpair.delta)
    force = -dpair.bold_d - inf_coadjoint(v, p.eta)
    return TangentVector(v, _project_dual_N(p, force))


def ham_vf_M(f, p: PhasePoint) -> TangentVector:
    """Hamiltonian vector field of f on the M fiber through p."""
    dpair = f.diff(p) if isinstance(f, ScalarField) else f
    v = dpair.delta.minus_part()
    force = -dpair.bold_d - inf_coadjoint(v, p.eta)
    return TangentVector(v, force.minus_part())


# ---------------------------------------------------------------------------
# induced group actions on the fibers


def g_action_N(h: GroupElement, p: PhasePoint) -> PhasePoint:
    """Induced action of G on the N fiber through p.

    Ambient left translation composed with the transport back to the fiber:
    the plus factor of hg replaces g+, and eta+ rides the leftover minus
    displacement by the coadjoint action.  This is an exact group action for
    any eta-; its generator equals the projected Hamiltonian field of the
    momentum functions on the zero minus-momentum fibers.
    """
    hg = GroupElement(p.desc, h.matrix @ p.g.matrix)
    hg_p, hg_m = factorize(hg)
    shift = GroupElement(p.desc, inv2(p.gm.matrix) @ hg_m.matrix)
    new_eta = coadjoint(shift, p.eta.plus_part()).plus_part() + p.eta.minus_part()
    return PhasePoint.from_factors(hg_p, p.gm, new_eta)


def g_action_M(h: GroupElement, p: PhasePoint) -> PhasePoint:
    """Induced action of G on the M fiber through p.

    Flow composition of the projected generators: an exact action on
    character fibers (eta+ = 0 for this instance), with generator equal to
    the M-side Hamiltonian field of the momentum functions everywhere.
    """
    u = GroupElement(p.desc, inv2(p.g.matrix) @ inv2(h.matrix) @ p.g.matrix)
    u_p, u_m = factorize(u)
    new_g = GroupElement(p.desc, p.g.matrix @ inv2(u_m.matrix))
    w = GroupElement(p.desc, inv2(u_p.matrix))
    new_eta = p.eta.plus_part() + coadjoint(w, p.eta).minus_part()
    return PhasePoint(new_g, new_eta)
