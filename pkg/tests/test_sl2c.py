import numpy as np
import pytest

from diracflow import doublegroup as dg, sl2c
from diracflow.linalg import mat_inf_norm


def test_pairing_table_exact(desc):
    expected = np.zeros((6, 6))
    expected[:3, 3:] = np.eye(3)
    expected[3:, :3] = np.eye(3)
    assert mat_inf_norm(desc.pairing - expected) <= 1e-14


def test_pairing_values():
    t = sl2c.SU2_BASIS
    u = sl2c.B_BASIS
    assert abs(sl2c.bilinear_form(t[0], u[0]) - 1.0) < 1e-15
    assert abs(sl2c.bilinear_form(t[1], u[0])) < 1e-15
    assert abs(sl2c.bilinear_form(t[2], u[2]) - 1.0) < 1e-15


def test_su2_isotropy():
    for a in sl2c.SU2_BASIS:
        for b in sl2c.SU2_BASIS:
            assert abs(sl2c.bilinear_form(a, b)) < 1e-15
    for a in sl2c.B_BASIS:
        for b in sl2c.B_BASIS:
            assert abs(sl2c.bilinear_form(a, b)) < 1e-15


def test_killing_value():
    t3 = sl2c.SU2_BASIS[2]
    assert abs(sl2c.killing(t3, t3) + 8.0) < 1e-14


def test_b_structure_constants(desc, basis):
    # Asserted against direct matrix commutators.
    assert np.max(np.abs(dg.lie_bracket(basis[3], basis[4]).coords)) < 1e-14
    assert np.max(np.abs(dg.lie_bracket(basis[5], basis[3]).coords + basis[3].coords)) < 1e-14
    assert np.max(np.abs(dg.lie_bracket(basis[5], basis[4]).coords + basis[4].coords)) < 1e-14


def test_iwasawa_identity(desc):
    fac = sl2c.iwasawa(np.eye(2), desc)
    assert mat_inf_norm(fac.su2_part.matrix - np.eye(2)) < 1e-14
    assert mat_inf_norm(fac.b_part.matrix - np.eye(2)) < 1e-14


def test_iwasawa_triangular_input(desc):
    g = np.array([[2.0, 1.0 + 1.0j], [0.0, 0.5]])
    fac = sl2c.iwasawa(g, desc)
    assert mat_inf_norm(fac.su2_part.matrix - np.eye(2)) < 1e-12
    assert mat_inf_norm(fac.b_part.matrix - g) < 1e-12
    assert abs(fac.a - 2.0) < 1e-12
    assert abs(fac.z - (1.0 + 1.0j)) < 1e-12


def test_iwasawa_reconstruction(desc, rng):
    for _ in range(1000):
        gp = dg.random_group(rng, desc, dg.Tag.PLUS)
        gm = dg.random_group(rng, desc, dg.Tag.MINUS)
        g = gp.matrix @ gm.matrix
        fac = sl2c.iwasawa(g, desc)
        assert mat_inf_norm(fac.su2_part.matrix @ fac.b_part.matrix - g) < 1e-11
        assert mat_inf_norm(fac.su2_part.matrix - gp.matrix) < 1e-10
        assert mat_inf_norm(fac.b_part.matrix - gm.matrix) < 1e-10


def test_iwasawa_membership(desc, rng):
    for _ in range(200):
        g = dg.random_group(rng, desc)
        fac = sl2c.iwasawa(g.matrix, desc)
        k, b = fac.su2_part.matrix, fac.b_part.matrix
        assert mat_inf_norm(k @ k.conj().T - np.eye(2)) < 1e-10
        assert abs(b[1, 0]) == 0.0
        assert np.real(b[0, 0]) > 0
        assert abs(np.imag(b[0, 0])) == 0.0


def test_iwasawa_rejects_nonunimodular(desc):
    with pytest.raises(ValueError):
        sl2c.iwasawa(2.0 * np.eye(2), desc)


def test_descriptor_invariants(desc):
    # Isotropy and closure are enforced at construction; spot-check closure.
    assert np.max(np.abs(desc.structure[:3, :3, 3:])) < 1e-12
    assert np.max(np.abs(desc.structure[3:, 3:, :3])) < 1e-12


def test_psi_identification(desc, rng):
    t1 = dg.AlgebraVector.basis_element(desc, 0)
    out = sl2c.psi(t1)
    assert np.array_equal(out.coords, np.eye(6)[3])
    zero = sl2c.psi(dg.AlgebraVector(desc, np.zeros(6)))
    assert zero.norm() == 0.0
    for _ in range(100):
        x = dg.random_algebra(rng, desc).plus_part()
        y = dg.random_algebra(rng, desc).minus_part()
        assert abs(dg.pairing(sl2c.psi(x), y) - desc.form(x.matrix, y.matrix)) < 1e-12
    with pytest.raises(ValueError):
        sl2c.psi(dg.random_algebra(rng, desc))


def test_psi_inverse_roundtrip(desc, rng):
    x = dg.random_algebra(rng, desc).plus_part()
    assert np.max(np.abs(sl2c.psi_inv(sl2c.psi(x)).coords - x.coords)) == 0.0


def test_psi_consistent_with_flat(desc, rng):
    # psi is the flat map restricted to the plus subalgebra.
    x = dg.random_algebra(rng, desc).plus_part()
    assert np.array_equal(sl2c.psi(x).coords, dg.flat_inv(x).coords)
