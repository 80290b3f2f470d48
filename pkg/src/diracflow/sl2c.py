"""The SL(2,C) = SU(2) x B instance.

B is the group of complex upper-triangular 2x2 matrices with positive real
diagonal and unit determinant.  The invariant form is -1/4 Im kappa with
kappa(X,Y) = 4 tr(XY): it makes su(2) and b isotropic and pairs the two
bases in the delta pattern.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .doublegroup import (
    AlgebraVector,
    DualVector,
    GroupDescriptor,
    GroupElement,
    Tag,
)
from .linalg import mat_inf_norm

__all__ = [
    "DegenerateInput",
    "IwasawaFactors",
    "SU2_BASIS",
    "B_BASIS",
    "bilinear_form",
    "build_descriptor",
    "is_b_matrix",
    "is_su2_matrix",
    "iwasawa",
    "killing",
    "psi",
    "psi_inv",
]


class DegenerateInput(Exception):
    """First column of the input had no usable norm (impossible for det 1)."""


# su(2) basis T_1, T_2, T_3 and b basis T^1, T^2, T^3.
SU2_BASIS = (
    np.array([[0, 1j], [1j, 0]]),
    np.array([[0, 1], [-1, 0]], dtype=complex),
    np.array([[1j, 0], [0, -1j]]),
)
B_BASIS = (
    np.array([[0, -1], [0, 0]], dtype=complex),
    np.array([[0, 1j], [0, 0]]),
    np.array([[-0.5, 0], [0, 0.5]], dtype=complex),
)


def killing(x: np.ndarray, y: np.ndarray) -> complex:
    """Killing form of sl(2,C): kappa(X,Y) = 4 tr(XY)."""
    return 4.0 * complex(np.trace(np.asarray(x) @ np.asarray(y)))


def bilinear_form(x: np.ndarray, y: np.ndarray) -> float:
    """The real invariant pairing -1/4 Im kappa = -Im tr(XY)."""
    return -float(np.imag(np.trace(np.asarray(x) @ np.asarray(y))))


def is_su2_matrix(m: np.ndarray, tol: float = 1e-8) -> bool:
    m = np.asarray(m, dtype=complex)
    return mat_inf_norm(m @ m.conj().T - np.eye(2)) <= tol


def is_b_matrix(m: np.ndarray, tol: float = 1e-8) -> bool:
    m = np.asarray(m, dtype=complex)
    if abs(m[1, 0]) > tol:
        return False
    return (
        abs(np.imag(m[0, 0])) <= tol
        and abs(np.imag(m[1, 1])) <= tol
        and np.real(m[0, 0]) > 0.0
        and np.real(m[1, 1]) > 0.0
    )


@dataclass(frozen=True)
class IwasawaFactors:
    """The unitary and triangular factors of a unimodular matrix."""

    su2_part: GroupElement
    b_part: GroupElement

    @property
    def alpha(self) -> complex:
        return complex(self.su2_part.matrix[0, 0])

    @property
    def beta(self) -> complex:
        return complex(self.su2_part.matrix[0, 1])

    @property
    def a(self) -> float:
        return float(np.real(self.b_part.matrix[0, 0]))

    @property
    def z(self) -> complex:
        return complex(self.b_part.matrix[0, 1])


def iwasawa_matrices(g: np.ndarray) -> tuple:
    """Gram-Schmidt factorization g = k b with k in SU(2), b in B.

    The first column of g fixes the unitary factor up to the positive-real
    normalization that B's diagonal convention demands; b is then rebuilt
    exactly upper triangular from k^dagger g.
    """
    g = np.asarray(g, dtype=complex)
    g00, g01 = complex(g[0, 0]), complex(g[0, 1])
    g10, g11 = complex(g[1, 0]), complex(g[1, 1])
    r = math.sqrt(abs(g00) ** 2 + abs(g10) ** 2)
    if r < 1e-12:
        raise DegenerateInput("first column is numerically zero")
    alpha = g00 / r
    beta = -g10.conjugate() / r
    k = np.array([[alpha, beta], [-beta.conjugate(), alpha.conjugate()]])
    # b = k^dagger g, rebuilt exactly upper triangular with positive diagonal.
    a = (alpha.conjugate() * g00 - beta * g10).real
    z = alpha.conjugate() * g01 - beta * g11
    b = np.array([[a, z], [0.0, 1.0 / a]], dtype=complex)
    return k, b


def iwasawa(g: np.ndarray, desc: "GroupDescriptor" = None) -> IwasawaFactors:
    """Iwasawa decomposition of a unimodular 2x2 complex matrix."""
    g = np.asarray(g, dtype=complex)
    det = g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]
    if abs(det - 1.0) > 1e-10:
        raise ValueError(f"determinant {det} is not 1 within tolerance")
    k, b = iwasawa_matrices(g)
    d = desc if desc is not None else descriptor()
    return IwasawaFactors(
        GroupElement(d, k, Tag.PLUS), GroupElement(d, b, Tag.MINUS)
    )


def _form_values(m: np.ndarray, stack: np.ndarray) -> np.ndarray:
    # Vectorized -Im tr(m T_k) over the stacked basis.
    return -np.imag(np.einsum("ab,kba->k", m, stack))


def build_descriptor() -> GroupDescriptor:
    """Descriptor for SL(2,C) = SU(2) x B with the standard bases."""
    return GroupDescriptor(
        dim_half=3,
        basis=SU2_BASIS + B_BASIS,
        form=bilinear_form,
        factorizer=iwasawa_matrices,
        is_plus_matrix=is_su2_matrix,
        is_minus_matrix=is_b_matrix,
        form_values_fn=_form_values,
    )


_DESCRIPTOR = None


def descriptor() -> GroupDescriptor:
    """Shared immutable instance; built once."""
    global _DESCRIPTOR
    if _DESCRIPTOR is None:
        _DESCRIPTOR = build_descriptor()
    return _DESCRIPTOR


def psi(x: AlgebraVector) -> DualVector:
    """Identification of su(2) with b*: x_a on T_a maps to x_a on t^a."""
    n = x.desc.dim_half
    if float(np.max(np.abs(x.coords[n:]))) > 1e-12:
        raise ValueError("psi expects a vector with zero minus block")
    coords = np.concatenate([np.zeros(n), x.coords[:n]])
    return DualVector(x.desc, coords)


def psi_inv(eta: DualVector) -> AlgebraVector:
    n = eta.desc.dim_half
    if float(np.max(np.abs(eta.coords[:n]))) > 1e-12:
        raise ValueError("psi_inv expects a vector with zero plus block")
    coords = np.concatenate([eta.coords[n:], np.zeros(n)])
    return AlgebraVector(eta.desc, coords)
