import numpy as np
import pytest

from diracflow import aks, dirac as dr, doublegroup as dg, sl2c, sl2c_example as ex
from diracflow.linalg import mat_inf_norm

from conftest import make_point


def char_point(rng, desc):
    return make_point(rng, desc, eta_minus=[0.0, 0.0, 0.0])


def beta_bounded_point(rng, desc, minimum=0.2):
    while True:
        gp = dg.random_group(rng, desc, dg.Tag.PLUS)
        if abs(gp.matrix[0, 1]) >= minimum:
            break
    eta = dg.random_dual(rng, desc).plus_part()
    return dr.PhasePoint(dg.GroupElement(desc, gp.matrix), eta)


# ---------------------------------------------------------------------------
# projected generators


def test_generators_at_identity(desc):
    gens = ex.explicit_projected_generators(desc, 1.0, 0.0, 0.0)
    for k, g in enumerate(gens):
        assert np.array_equal(g.coords, np.eye(6)[k])


def test_generators_match_engine_at_reference_point(desc):
    gens = ex.explicit_projected_generators(desc, 2.0, 1.0, -1.0)
    gm = dg.GroupElement(
        desc, np.array([[2.0, 1.0 - 1.0j], [0.0, 0.5]]), dg.Tag.MINUS
    )
    for i in range(3):
        basis = dg.AlgebraVector.basis_element(desc, i)
        engine = dg.adjoint(gm.inverse(), dg.adjoint(gm, basis).plus_part())
        assert np.max(np.abs(gens[i].coords - engine.coords)) < 1e-10


def test_generators_match_engine_random(desc, rng):
    for _ in range(100):
        p = make_point(rng, desc)
        co = ex.coordinates(p)
        gens = ex.explicit_projected_generators(desc, co.a, co.b, co.c)
        for i in range(3):
            basis = dg.AlgebraVector.basis_element(desc, i)
            engine = dg.adjoint(p.gm.inverse(), dg.adjoint(p.gm, basis).plus_part())
            assert np.max(np.abs(gens[i].coords - engine.coords)) < 1e-10


def test_third_generator_plus_part_is_exact(desc, rng):
    for _ in range(20):
        a = float(rng.uniform(0.3, 2.5))
        b, c = rng.uniform(-1, 1, 2)
        g3 = ex.explicit_projected_generators(desc, a, b, c)[2]
        assert np.array_equal(g3.plus_part().coords, np.eye(6)[2])


# ---------------------------------------------------------------------------
# fundamental brackets


def test_table_matches_engine(desc, rng):
    for _ in range(100):
        p = make_point(rng, desc)
        explicit = ex.explicit_fundamental_brackets(p)
        engine = dr.fundamental_brackets_N(p)
        assert np.max(np.abs(explicit["xi_t"] - engine["xi_t"])) < 1e-9
        assert np.max(np.abs(explicit["xi_xi"] - engine["xi_xi"])) < 1e-9


def test_character_reductions_match_engine(desc, rng):
    for _ in range(100):
        p = char_point(rng, desc)
        explicit = ex.explicit_character_brackets(p)
        engine = dr.fundamental_brackets_N(p)
        assert abs(explicit["12"] - engine["xi_xi"][0, 1]) < 1e-9
        assert abs(explicit["31"] - engine["xi_xi"][2, 0]) < 1e-9
        assert abs(explicit["23"] - engine["xi_xi"][1, 2]) < 1e-9


def test_character_bracket_displayed_values(desc, rng):
    # The two spot values with their printed coefficient structure.
    p = char_point(rng, desc)
    co = ex.coordinates(p)
    x1, x2, x3 = co.eta_plus
    engine = dr.fundamental_brackets_N(p)
    assert abs(engine["xi_xi"][2, 0] - (2 * x2 + 2 * (co.c / co.a) * x3)) < 1e-10
    assert abs(engine["xi_xi"][1, 2] - (2 * x1 - 2 * (co.b / co.a) * x3)) < 1e-10


# ---------------------------------------------------------------------------
# momentum functions


def test_phi_at_identity(desc, rng):
    eta = dg.random_dual(rng, desc).plus_part()
    p = dr.PhasePoint(dg.GroupElement.identity(desc), eta)
    assert np.max(np.abs(ex.phi_explicit(p))) < 1e-14


def test_phi_matches_momentum_oracle(desc, rng, basis):
    for _ in range(100):
        p = char_point(rng, desc)
        mu = dr.momentum_map_left(p)
        oracle = np.array([dg.pairing(mu, basis[3 + k]) for k in range(3)])
        assert np.max(np.abs(ex.phi_explicit(p) - oracle)) < 1e-10


def test_phi_diagonal_unitary(desc, rng):
    theta = 0.7
    gp = np.diag([np.exp(1j * theta), np.exp(-1j * theta)])
    p = dr.PhasePoint(dg.GroupElement(desc, gp), dg.random_dual(rng, desc).plus_part())
    phi = ex.phi_explicit(p)
    assert abs(phi[0]) < 1e-13
    assert abs(phi[1]) < 1e-13


def test_dressing_generator_displays(desc, rng):
    for _ in range(50):
        gp = dg.random_group(rng, desc, dg.Tag.PLUS)
        alpha, beta = complex(gp.matrix[0, 0]), complex(gp.matrix[0, 1])
        explicit = ex.explicit_dressing_generators(desc, alpha, beta)
        for k in range(3):
            engine = dg.dressing_generator(gp, dg.AlgebraVector.basis_element(desc, 3 + k))
            assert np.max(np.abs(explicit[k].coords - engine.coords)) < 1e-12


# ---------------------------------------------------------------------------
# Hamiltonian and its field


def test_hamiltonian_zero_momentum(desc, rng):
    p = dr.PhasePoint(dg.random_group(rng, desc), dg.DualVector(desc, np.zeros(6)))
    assert ex.example_hamiltonian(p) == 0.0
    v = ex.example_hamilton_eqs(p)
    assert v.body_velocity.norm() < 1e-14
    assert v.eta_dot.norm() < 1e-14


def test_hamiltonian_matches_killing_form(desc, rng):
    for _ in range(100):
        p = char_point(rng, desc)
        projected = dg.flat_map(dr.momentum_map_left(p)).plus_part()
        value = -1.0 / 16.0 * np.real(sl2c.killing(projected.matrix, projected.matrix))
        assert abs(ex.example_hamiltonian(p) - value) < 1e-9


def _engine_field(desc):
    basis = [dg.AlgebraVector.basis_element(desc, 3 + k) for k in range(3)]
    phis = [dr.momentum_fn(x) for x in basis]

    def ev(p):
        return 0.5 * sum(f(p) ** 2 for f in phis)

    def df(p):
        bold = dg.DualVector(desc, np.zeros(6))
        delta = dg.AlgebraVector(desc, np.zeros(6))
        for f in phis:
            val = f(p)
            pair = f.diff(p)
            bold = bold + val * pair.bold_d
            delta = delta + val * pair.delta
        return dr.DiffPair(bold, delta)

    return dr.ScalarField(ev, df)


def test_hamilton_eqs_match_engine(desc, rng):
    field = _engine_field(desc)
    for _ in range(50):
        p = char_point(rng, desc)
        explicit = ex.example_hamilton_eqs(p)
        engine = dr.ham_vf_N(field, p)
        assert np.max(
            np.abs(explicit.body_velocity.coords - engine.body_velocity.coords)
        ) < 1e-8
        assert np.max(np.abs(explicit.eta_dot.coords - engine.eta_dot.coords)) < 1e-8


def test_hamilton_flow_conserves_energy(desc, rng):
    p0 = char_point(rng, desc)
    h0 = ex.example_hamiltonian(p0)
    tr = aks.integrate_rk4(ex.example_hamilton_eqs, p0, 5.0, 1000)
    drift = max(abs(ex.example_hamiltonian(q) - h0) for q in tr.points)
    assert drift < 1e-8


def test_phi_bracket_algebra_at_characters(desc, rng, basis):
    # {phi^3, phi^1} = -phi^1 and {phi^3, phi^2} = -phi^2 and
    # {phi^1, phi^2} = 0 at eta- = 0, mirroring the minus-algebra brackets.
    phis = [dr.momentum_fn(basis[3 + k]) for k in range(3)]
    for _ in range(20):
        p = char_point(rng, desc)
        vals = ex.phi_explicit(p)
        assert abs(dr.dirac_bracket_N(phis[2], phis[0], p) + vals[0]) < 1e-9
        assert abs(dr.dirac_bracket_N(phis[2], phis[1], p) + vals[1]) < 1e-9
        assert abs(dr.dirac_bracket_N(phis[0], phis[1], p)) < 1e-9


# ---------------------------------------------------------------------------
# metric, constraint, Lagrangian


def test_metric_diagonal_at_identity_minus(desc, rng):
    p = beta_bounded_point(rng, desc)
    k = ex.metric_K(p)
    beta = abs(complex(p.gp.matrix[0, 1]))
    assert mat_inf_norm(k - np.eye(3) / (2 * beta**2)) < 1e-12


def test_metric_entries_real_and_symmetric(desc, rng):
    for _ in range(50):
        p = make_point(rng, desc)
        if abs(complex(p.gp.matrix[0, 1])) < 0.1:
            continue
        k = ex.metric_K(p)
        assert np.isrealobj(k)
        assert mat_inf_norm(k - k.T) == 0.0


def test_metric_singular_configuration(desc, rng):
    g = np.diag([np.exp(0.3j), np.exp(-0.3j)])
    p = dr.PhasePoint(dg.GroupElement(desc, g), dg.random_dual(rng, desc))
    with pytest.raises(ex.SingularConfiguration):
        ex.metric_K(p)
    with pytest.raises(ex.SingularConfiguration):
        ex.vector_A(p)


def test_constraint_vanishes_on_motions(desc, rng):
    for _ in range(50):
        p = make_point(rng, desc)
        if abs(complex(p.gp.matrix[0, 1])) < 0.2:
            continue
        m = ex.velocity_map(p)
        v = dg.AlgebraVector(desc, np.concatenate([m @ p.eta.coords[:3], np.zeros(3)]))
        assert abs(ex.constraint_Omega(p, v)) < 1e-10


def test_constraint_orthogonality(desc, rng):
    p = beta_bounded_point(rng, desc)
    a_vec = ex.vector_A(p)
    v = dg.random_algebra(rng, desc).plus_part()
    # project v kappa-orthogonally to A and check Omega vanishes
    kav = np.real(sl2c.killing(a_vec.matrix, v.matrix))
    kaa = np.real(sl2c.killing(a_vec.matrix, a_vec.matrix))
    proj = v - (kav / kaa) * a_vec
    assert abs(ex.constraint_Omega(p, proj)) < 1e-10


def test_velocity_map_rank_two(desc, rng):
    from diracflow.linalg import numerical_rank

    for _ in range(20):
        p = beta_bounded_point(rng, desc)
        assert numerical_rank(ex.velocity_map(p), 1e-9) == 2


def test_lagrangian_zero_velocity(desc, rng):
    p = beta_bounded_point(rng, desc)
    zero = dg.AlgebraVector(desc, np.zeros(6))
    assert ex.lagrangian_eval(p, zero, 1.3) == 0.0


def test_lagrangian_multiplier_linearity(desc, rng):
    p = beta_bounded_point(rng, desc)
    v = dg.random_algebra(rng, desc).plus_part()
    l1, l2 = 0.7, -1.9
    lhs = ex.lagrangian_eval(p, v, l1 + l2) - ex.lagrangian_eval(p, v, l1)
    rhs = -(l2 / 8.0) * np.real(sl2c.killing(ex.vector_A(p).matrix, v.matrix))
    assert abs(lhs - rhs) < 1e-12


def test_legendre_consistency_at_base(desc, rng):
    for _ in range(100):
        p = beta_bounded_point(rng, desc)
        m = ex.velocity_map(p)
        v_coords = m @ p.eta.coords[:3]
        v = dg.AlgebraVector(desc, np.concatenate([v_coords, np.zeros(3)]))
        lag = ex.lagrangian_eval(p, v, 0.0)
        assert abs(lag + ex.example_hamiltonian(p) - dg.pairing(p.eta, v)) < 1e-7


def test_legendre_round_trip(desc, rng):
    for _ in range(100):
        p = beta_bounded_point(rng, desc)
        m = ex.velocity_map(p)
        v_coords = m @ p.eta.coords[:3]
        back = ex.invert_velocity(p, v_coords)
        assert np.max(np.abs(m @ back - v_coords)) < 1e-7
