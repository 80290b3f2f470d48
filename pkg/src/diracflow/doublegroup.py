"""Calculus on a factorizable matrix Lie group G = G+ . G-.

The descriptor carries a basis {T_a} of the plus subalgebra and {T^a} of the
minus subalgebra, the nondegenerate invariant bilinear form making both
subalgebras isotropic, the structure constants, and the instance's global
factorization hook.  Dual vectors live in the basis {t_a, t^a} dual to
{T_a, T^a}; with the delta-pattern pairing the musical identification
flat: g* -> g is the coordinate block swap t_a -> T^a, t^a -> T_a.

Coordinate layout everywhere: index 0..n-1 is the plus block, n..2n-1 the
minus block.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from .linalg import inv2, inverse, mat_exp, mat_inf_norm

__all__ = [
    "AlgebraVector",
    "BasisExpansionFailure",
    "DualVector",
    "GroupDescriptor",
    "GroupElement",
    "NotFactorizable",
    "Tag",
    "adjoint",
    "coadjoint",
    "dressing",
    "dressing_generator",
    "factorize",
    "flat_inv",
    "flat_map",
    "inf_coadjoint",
    "is_character",
    "lie_bracket",
    "minus_dressing_generator",
    "pairing",
    "random_algebra",
    "random_dual",
    "random_group",
    "tangent_split",
]

EXPAND_RTOL = 1e-9
MEMBER_TOL = 1e-6


class Tag(Enum):
    FULL = "full"
    PLUS = "plus"
    MINUS = "minus"


class NotFactorizable(Exception):
    """The instance factorizer reported failure."""


class BasisExpansionFailure(Exception):
    """A matrix did not lie in the span of the descriptor basis."""


def _entries_real(m: np.ndarray) -> np.ndarray:
    # (re, im) interleaved row-major entry vector of a 2x2 complex matrix.
    return np.ascontiguousarray(m, dtype=complex).view(np.float64).ravel()


def _real_to_matrix(ent: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(ent, dtype=np.float64).view(complex).reshape(2, 2)


@dataclass(frozen=True)
class GroupDescriptor:
    """Immutable data defining one double-group instance."""

    dim_half: int
    basis: tuple  # 2n matrices, plus block first
    form: Callable[[np.ndarray, np.ndarray], float]
    factorizer: Callable[[np.ndarray], tuple]
    is_plus_matrix: Callable[[np.ndarray], bool]
    is_minus_matrix: Callable[[np.ndarray], bool]
    form_values_fn: Callable = None
    pairing: np.ndarray = field(default=None, repr=False)
    pairing_inv: np.ndarray = field(default=None, repr=False)
    structure: np.ndarray = field(default=None, repr=False)
    basis_stack: np.ndarray = field(default=None, repr=False)
    entry_map: np.ndarray = field(default=None, repr=False)
    expand_map: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        n2 = 2 * self.dim_half
        if len(self.basis) != n2:
            raise ValueError("basis must have 2n elements")
        stack = np.stack([np.asarray(b, dtype=complex) for b in self.basis])
        object.__setattr__(self, "basis_stack", stack)
        pair = np.array(
            [[self.form(bi, bj) for bj in self.basis] for bi in self.basis]
        )
        object.__setattr__(self, "pairing", pair)
        object.__setattr__(self, "pairing_inv", inverse(pair))
        # Expansion is a fixed linear map on the (real, imag) matrix entries;
        # precompute it together with its right inverse for the residual check.
        entry = np.column_stack([_entries_real(b) for b in stack])
        form_rows = np.column_stack(
            [self.form_values(_real_to_matrix(e)) for e in np.eye(8)]
        )
        object.__setattr__(self, "entry_map", entry)
        object.__setattr__(self, "expand_map", self.pairing_inv @ form_rows)
        table = np.zeros((n2, n2, n2))
        for i in range(n2):
            for j in range(n2):
                comm = stack[i] @ stack[j] - stack[j] @ stack[i]
                table[i, j] = self.expand(comm)
        object.__setattr__(self, "structure", table)
        self._validate()

    def _validate(self):
        n = self.dim_half
        if mat_inf_norm(self.pairing - self.pairing.T) > 1e-12:
            raise ValueError("pairing must be symmetric")
        if mat_inf_norm(self.pairing[:n, :n]) > 1e-12 or mat_inf_norm(
            self.pairing[n:, n:]
        ) > 1e-12:
            raise ValueError("subalgebras must be isotropic for the form")
        # Each subalgebra must close under the bracket.
        if mat_inf_norm(self.structure[:n, :n, n:]) > 1e-10:
            raise ValueError("plus basis does not close under the bracket")
        if mat_inf_norm(self.structure[n:, n:, :n]) > 1e-10:
            raise ValueError("minus basis does not close under the bracket")

    # -- basis expansion ----------------------------------------------------

    def form_values(self, m: np.ndarray) -> np.ndarray:
        """Vector of form(m, T_k) over the basis."""
        if self.form_values_fn is not None:
            return self.form_values_fn(m, self.basis_stack)
        return np.array([self.form(m, b) for b in self.basis])

    def expand(self, m: np.ndarray, check: bool = True) -> np.ndarray:
        """Real coordinates of m in the basis, via the pairing system."""
        ent = _entries_real(m)
        coords = self.expand_map @ ent
        if check:
            err = float(np.abs(self.entry_map @ coords - ent).max())
            if err > EXPAND_RTOL * (1.0 + float(np.abs(ent).max())):
                raise BasisExpansionFailure(f"residual {err:.3e} off the basis span")
        return coords

    def reconstruct(self, coords: np.ndarray) -> np.ndarray:
        return _real_to_matrix(self.entry_map @ np.asarray(coords, dtype=float))


# ---------------------------------------------------------------------------
# value types


@dataclass(frozen=True)
class GroupElement:
    desc: GroupDescriptor
    matrix: np.ndarray
    tag: Tag = Tag.FULL

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if abs(det - 1.0) > MEMBER_TOL:
            raise ValueError(f"determinant {det} is not 1")
        if self.tag is Tag.PLUS and not self.desc.is_plus_matrix(m):
            raise ValueError("matrix is not in the plus factor")
        if self.tag is Tag.MINUS and not self.desc.is_minus_matrix(m):
            raise ValueError("matrix is not in the minus factor")

    def inverse(self) -> "GroupElement":
        m = self.matrix
        inv = np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]], dtype=complex)
        return GroupElement(self.desc, inv, self.tag)

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        tag = self.tag if self.tag is other.tag else Tag.FULL
        return GroupElement(self.desc, self.matrix @ other.matrix, tag)

    @classmethod
    def identity(cls, desc: GroupDescriptor, tag: Tag = Tag.FULL) -> "GroupElement":
        return cls(desc, np.eye(2, dtype=complex), tag)


def unchecked_element(desc: GroupDescriptor, matrix: np.ndarray, tag: Tag) -> GroupElement:
    """GroupElement without validation, for matrices correct by construction."""
    el = object.__new__(GroupElement)
    object.__setattr__(el, "desc", desc)
    object.__setattr__(el, "matrix", matrix)
    object.__setattr__(el, "tag", tag)
    return el


@dataclass(frozen=True)
class AlgebraVector:
    """Lie algebra element held as coordinates with a cached matrix.

    Coordinates are authoritative; the matrix is rebuilt whenever a vector is
    constructed from coordinates.
    """

    desc: GroupDescriptor
    coords: np.ndarray
    matrix: np.ndarray = None

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=float)
        object.__setattr__(self, "coords", c)
        if self.matrix is None:
            object.__setattr__(self, "matrix", self.desc.reconstruct(c))

    @classmethod
    def from_matrix(cls, desc: GroupDescriptor, m: np.ndarray) -> "AlgebraVector":
        return cls(desc, desc.expand(m), np.asarray(m, dtype=complex))

    @classmethod
    def basis_element(cls, desc: GroupDescriptor, k: int) -> "AlgebraVector":
        coords = np.zeros(2 * desc.dim_half)
        coords[k] = 1.0
        return cls(desc, coords, desc.basis_stack[k])

    def plus_part(self) -> "AlgebraVector":
        n = self.desc.dim_half
        masked = self.coords.copy()
        masked[n:] = 0.0
        return AlgebraVector(self.desc, masked)

    def minus_part(self) -> "AlgebraVector":
        n = self.desc.dim_half
        masked = self.coords.copy()
        masked[:n] = 0.0
        return AlgebraVector(self.desc, masked)

    def __add__(self, other):
        return AlgebraVector(self.desc, self.coords + other.coords)

    def __sub__(self, other):
        return AlgebraVector(self.desc, self.coords - other.coords)

    def __mul__(self, s: float):
        return AlgebraVector(self.desc, s * self.coords)

    __rmul__ = __mul__

    def __neg__(self):
        return AlgebraVector(self.desc, -self.coords)

    def norm(self) -> float:
        return float(np.max(np.abs(self.coords))) if self.coords.size else 0.0


@dataclass(frozen=True)
class DualVector:
    """Element of g* in the dual basis {t_a, t^a}."""

    desc: GroupDescriptor
    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", np.asarray(self.coords, dtype=float))

    @classmethod
    def basis_element(cls, desc: GroupDescriptor, k: int) -> "DualVector":
        coords = np.zeros(2 * desc.dim_half)
        coords[k] = 1.0
        return cls(desc, coords)

    def plus_part(self) -> "DualVector":
        n = self.desc.dim_half
        masked = self.coords.copy()
        masked[n:] = 0.0
        return DualVector(self.desc, masked)

    def minus_part(self) -> "DualVector":
        n = self.desc.dim_half
        masked = self.coords.copy()
        masked[:n] = 0.0
        return DualVector(self.desc, masked)

    def __add__(self, other):
        return DualVector(self.desc, self.coords + other.coords)

    def __sub__(self, other):
        return DualVector(self.desc, self.coords - other.coords)

    def __mul__(self, s: float):
        return DualVector(self.desc, s * self.coords)

    __rmul__ = __mul__

    def __neg__(self):
        return DualVector(self.desc, -self.coords)

    def norm(self) -> float:
        return float(np.max(np.abs(self.coords))) if self.coords.size else 0.0


# ---------------------------------------------------------------------------
# operations


def pairing(eta: DualVector, x: AlgebraVector) -> float:
    """Natural pairing <eta, X>; a plain dot product in dual coordinates."""
    return float(eta.coords @ x.coords)


def factorize(g: GroupElement) -> tuple:
    """Global factorization g = g+ g-.

    The factors come straight from the instance factorizer, which guarantees
    the membership invariants; they are wrapped without re-validation.  A
    factorizer failure surfaces as NotFactorizable.
    """
    try:
        plus_m, minus_m = g.desc.factorizer(g.matrix)
    except Exception as exc:
        raise NotFactorizable(str(exc)) from exc
    return (
        unchecked_element(g.desc, plus_m, Tag.PLUS),
        unchecked_element(g.desc, minus_m, Tag.MINUS),
    )


def lie_bracket(x: AlgebraVector, y: AlgebraVector) -> AlgebraVector:
    m = x.matrix @ y.matrix - y.matrix @ x.matrix
    return AlgebraVector.from_matrix(x.desc, m)


def adjoint(g: GroupElement, x: AlgebraVector) -> AlgebraVector:
    """Ad_g X = g X g^-1 expanded back in the basis."""
    ginv = inv2(g.matrix)
    return AlgebraVector.from_matrix(x.desc, g.matrix @ x.matrix @ ginv)


def flat_map(eta: DualVector) -> AlgebraVector:
    """Musical identification of g* with g: the coordinate block swap."""
    n = eta.desc.dim_half
    swapped = np.concatenate([eta.coords[n:], eta.coords[:n]])
    return AlgebraVector(eta.desc, swapped)


def flat_inv(x: AlgebraVector) -> DualVector:
    n = x.desc.dim_half
    swapped = np.concatenate([x.coords[n:], x.coords[:n]])
    return DualVector(x.desc, swapped)


def coadjoint(g: GroupElement, eta: DualVector) -> DualVector:
    """Left coadjoint action: <coAd_g eta, X> = <eta, Ad_{g^-1} X>.

    Realized through the flat identification, under which it is conjugation
    of the flat matrix (the form is Ad-invariant).
    """
    ginv = inv2(g.matrix)
    m = g.matrix @ flat_map(eta).matrix @ ginv
    return flat_inv(AlgebraVector.from_matrix(eta.desc, m))


def inf_coadjoint(x: AlgebraVector, eta: DualVector) -> DualVector:
    """Infinitesimal coadjoint action: <coad(X,eta), Y> = -<eta, [X,Y]>.

    Equals d/dt coAd(exp(tX), eta) at t = 0.
    """
    fm = flat_map(eta).matrix
    m = x.matrix @ fm - fm @ x.matrix
    return flat_inv(AlgebraVector.from_matrix(eta.desc, m))


def dressing(h_minus: GroupElement, g_plus: GroupElement) -> GroupElement:
    """Dressing action of the minus factor: the plus factor of h- g+."""
    product = GroupElement(h_minus.desc, h_minus.matrix @ g_plus.matrix)
    return factorize(product)[0]


def dressing_generator(g_plus: GroupElement, x_minus: AlgebraVector) -> AlgebraVector:
    """Left-trivialized generator of the dressing action at g+.

    Returns Pi_plus Ad_{g+^-1} X-; the complementary minus block of
    Ad_{g+^-1} X- is the coadjoint remainder.
    """
    return adjoint(g_plus.inverse(), x_minus).plus_part()


def minus_dressing_generator(g_minus: GroupElement, x_plus: AlgebraVector) -> AlgebraVector:
    """Left-trivialized velocity of the minus factor dragged by a plus direction.

    Equals Ad_{g-^-1} Pi_minus Ad_{g-} X+, the drag term in the tangent
    splitting of the factorization.
    """
    dragged = adjoint(g_minus, x_plus).minus_part()
    return adjoint(g_minus.inverse(), dragged)


def tangent_split(g: GroupElement, v_body: AlgebraVector) -> tuple:
    """Split a body velocity at g = g+ g- into factor velocities.

    Returns (X+, X-, plus_velocity, minus_velocity) where X+- are the plain
    projector blocks of the body velocity, plus_velocity = g+^-1 dg+ and
    minus_velocity = g-^-1 dg-.  Reconstruction identity:
    g v_body = (g+ . plus_velocity) g-  +  g (minus_velocity).
    """
    _, gm = factorize(g)
    x_plus = v_body.plus_part()
    x_minus = v_body.minus_part()
    conjugated = adjoint(gm, v_body)
    plus_vel = conjugated.plus_part()
    minus_vel = adjoint(gm.inverse(), conjugated.minus_part())
    return x_plus, x_minus, plus_vel, minus_vel


def is_character(eta_minus: DualVector, tol: float = 1e-12) -> bool:
    """Whether eta- kills every bracket of the minus subalgebra."""
    desc = eta_minus.desc
    n = desc.dim_half
    for a in range(n, 2 * n):
        for b in range(n, 2 * n):
            bracket_coords = desc.structure[a, b]
            if abs(eta_minus.coords @ bracket_coords) > tol:
                return False
    return True


# ---------------------------------------------------------------------------
# seeded sampling, shared by tests and the CLI


def random_algebra(rng: np.random.Generator, desc: GroupDescriptor) -> AlgebraVector:
    return AlgebraVector(desc, rng.uniform(-1.0, 1.0, 2 * desc.dim_half))


def random_dual(rng: np.random.Generator, desc: GroupDescriptor) -> DualVector:
    return DualVector(desc, rng.uniform(-1.0, 1.0, 2 * desc.dim_half))


def random_group(rng: np.random.Generator, desc: GroupDescriptor, tag: Tag = Tag.FULL) -> GroupElement:
    x = random_algebra(rng, desc)
    if tag is Tag.PLUS:
        x = x.plus_part()
    elif tag is Tag.MINUS:
        x = x.minus_part()
    return GroupElement(desc, mat_exp(x.matrix), tag)
