import numpy as np
import pytest

from casimir_lab import kernels
from casimir_lab import rattleback as rb
from casimir_lab.errors import BlowUpError, DomainError, InvalidParameterError


def test_bianchi_vi_structure_constants():
    alg = rb.bianchi_vi_quiet(-2.0)
    # coefficient of P in [S, P] and its antisymmetric partner
    assert alg.c[0, 2, 0] == -2.0
    assert alg.c[0, 0, 2] == 2.0
    # [S, R] = R
    assert alg.c[1, 2, 1] == 1.0
    # [P, R] = 0
    assert np.all(alg.c[:, 0, 1] == 0.0)


def test_bianchi_vi_h_zero_center():
    with pytest.warns(UserWarning):
        alg = rb.bianchi_vi(0.0)
    assert np.all(alg.c[0, 2, :] == 0.0)  # [S, P] = 0
    assert alg.antisymmetry_residual() == 0.0


@pytest.mark.parametrize("h", [-2.0, -1.5, 0.0, 3.7])
def test_jacobi_identity_any_h(h):
    assert rb.bianchi_vi_quiet(h).jacobi_residual() <= 1e-14


def test_bianchi_vi_rejects_nonfinite():
    with pytest.raises(InvalidParameterError):
        rb.bianchi_vi(float("nan"))


def test_warns_outside_chiral_regime():
    with pytest.warns(UserWarning, match="chiral"):
        rb.bianchi_vi(-0.5)


def test_poisson_matrix_hand_value():
    alg = rb.bianchi_vi_quiet(-2.0)
    j = rb.poisson_matrix(alg, rb.RattlebackState(1.0, 1.0, 1.0))
    expected = np.array([[0.0, 0.0, 2.0], [0.0, 0.0, -1.0], [-2.0, 1.0, 0.0]])
    np.testing.assert_array_equal(j, expected)


def test_poisson_matrix_zero_point_and_singular_line():
    alg = rb.bianchi_vi_quiet(-2.0)
    assert np.all(rb.poisson_matrix(alg, rb.RattlebackState(0, 0, 0)) == 0.0)
    for s in (1.0, -7.3, 1e6):
        assert np.all(rb.poisson_matrix(alg, rb.RattlebackState(0, 0, s)) == 0.0)
    # rank 2 off the singular set
    j = rb.poisson_matrix(alg, rb.RattlebackState(0.5, 0.2, 0.0))
    assert np.linalg.matrix_rank(j) == 2


@pytest.mark.parametrize("state,h,expected", [
    ((1, 1, 1), -2.0, (2.0, -1.0, -1.0)),
    ((0, 1, 1), -2.0, (0.0, -1.0, 1.0)),
    ((0, 0, 5), -2.0, (0.0, 0.0, 0.0)),
])
def test_rhs_hand_values(state, h, expected):
    out = rb.rattleback_rhs(rb.RattlebackState(*state), h)
    assert (out.p, out.r, out.s) == expected


def test_rhs_equals_bracket_flow(rng):
    alg = rb.bianchi_vi_quiet(-2.0)
    for _ in range(50):
        xi = rb.RattlebackState(*rng.uniform(-3, 3, 3))
        rhs = rb.rattleback_rhs(xi, -2.0).as_array()
        jgh = rb.poisson_matrix(alg, xi) @ xi.as_array()
        np.testing.assert_allclose(rhs, jgh, rtol=0, atol=1e-13 * max(1, np.abs(jgh).max()))


def test_hamiltonian_values():
    assert rb.hamiltonian(rb.RattlebackState(1, 1, 1)) == 1.5
    assert rb.hamiltonian(rb.RattlebackState(0, 0, 0)) == 0.0
    assert rb.hamiltonian(rb.RattlebackState(3, 0, 4)) == 12.5


def test_casimir_values():
    assert rb.casimir(rb.RattlebackState(2, 4, 9.9), -2.0) == 32.0
    assert rb.casimir(rb.RattlebackState(0, 3.3, 1.0), -2.0) == 0.0
    for h in (-2.0, -1.5, 4.0):
        assert rb.casimir(rb.RattlebackState(1, 1, 0.3), h) == 1.0


def test_casimir_domain_error():
    with pytest.raises(DomainError):
        rb.casimir(rb.RattlebackState(1.0, 0.0, 1.0), -2.0)
    with pytest.raises(DomainError):
        rb.casimir(rb.RattlebackState(1.0, -2.0, 1.0), -1.5)


@pytest.mark.parametrize("state,h", [
    ((2, 4, 1), -2.0),
    ((1, 1, 1), -3.0),
    ((0.1, 2, -5), -2.0),
])
def test_casimir_gradient_kernel(state, h):
    xi = rb.RattlebackState(*state)
    scale = max(1.0, np.abs(rb.casimir_gradient(xi, h)).max())
    assert rb.casimir_gradient_check(xi, h) <= 1e-14 * scale


class TestIntegrate:
    def test_singular_line_constant(self):
        tr = rb.integrate(rb.RattlebackState(0, 0, 5.0), -2.0, dt=1e-3, t_final=1.0)
        assert np.all(tr.states[:, 2] == 5.0)
        assert np.all(tr.states[:, :2] == 0.0)

    def test_rk4_conservation(self):
        tr = rb.integrate(rb.RattlebackState(0.1, 0.2, 1.0), -2.0, dt=1e-3, t_final=20.0)
        h0, c0 = tr.hamiltonians[0], tr.casimirs[0]
        assert np.abs(tr.hamiltonians - h0).max() / h0 <= 1e-8
        assert np.abs(tr.casimirs - c0).max() / abs(c0) <= 1e-8

    def test_rk45_conservation(self):
        tr = rb.integrate(rb.RattlebackState(0.1, 0.2, 1.0), -2.0, dt=1e-3,
                          t_final=20.0, method="rk45", rtol=1e-10, atol=1e-12)
        h0 = tr.hamiltonians[0]
        assert np.abs(tr.hamiltonians - h0).max() / h0 <= 1e-8
        assert np.all(np.diff(tr.times) > 0)

    def test_rk4_matches_rk45_endpoint(self):
        t1 = rb.integrate(rb.RattlebackState(0.1, 0.2, 1.0), -2.0, dt=1e-4, t_final=2.0)
        t2 = rb.integrate(rb.RattlebackState(0.1, 0.2, 1.0), -2.0, dt=1.0, t_final=2.0,
                          method="rk45", rtol=1e-12, atol=1e-14)
        np.testing.assert_allclose(t1.states[-1], t2.states[-1], atol=1e-9)

    def test_parity_symmetry_bit_exact(self):
        t1 = rb.integrate(rb.RattlebackState(0.1, 0.2, 1.0), -2.0, dt=1e-3, t_final=3.0)
        t2 = rb.integrate(rb.RattlebackState(-0.1, 0.2, 1.0), -2.0, dt=1e-3, t_final=3.0)
        assert np.array_equal(t2.states, t1.states * np.array([-1.0, 1.0, 1.0]))

    def test_invalid_parameters(self):
        xi = rb.RattlebackState(0.1, 0.2, 1.0)
        with pytest.raises(InvalidParameterError):
            rb.integrate(xi, -2.0, dt=-1e-3, t_final=1.0)
        with pytest.raises(InvalidParameterError):
            rb.integrate(xi, -2.0, dt=1e-3, t_final=0.0)
        with pytest.raises(InvalidParameterError):
            rb.integrate(xi, -2.0, dt=1e-3, t_final=1.0, method="euler")

    def test_blowup_reports_time(self):
        # h > 0 with large state doubles s self-amplification until overflow
        with pytest.raises(BlowUpError) as err:
            rb.integrate(rb.RattlebackState(1e150, 1e150, 1e150), 2.0,
                         dt=1e-3, t_final=10.0)
        assert err.value.time > 0

    def test_stride_sampling(self):
        tr = rb.integrate(rb.RattlebackState(0.1, 0.2, 1.0), -2.0, dt=1e-3,
                          t_final=1.0, stride=10)
        assert len(tr.times) == 101
        assert tr.times[1] == pytest.approx(1e-2)


def test_restricted_casimir_report():
    for s0, h in ((1.0, -2.0), (0.0, -2.0), (-7.3, -1.5)):
        rep = rb.restricted_casimir_report(s0, h)
        assert rep["pass"]
        for sub in rep["checks"].values():
            assert sub["residual"] == 0.0


def test_chirality_reversal_snapshot():
    # frozen regression: spin flips to ~ -s0 and swings back near +s0
    tr = rb.integrate(rb.RattlebackState(0.01, 0.02, 1.0), -2.0, dt=1e-3, t_final=40.0)
    s = tr.states[:, 2]
    i_min = int(np.argmin(s))
    assert s.min() == pytest.approx(-1.000011889760899, abs=1e-9)
    assert s[i_min:].max() == pytest.approx(1.0000118897643504, abs=1e-9)
    assert np.any(np.diff(s) > 0) and np.any(np.diff(s) < 0)


def test_kernel_paths_agree_bitwise():
    n_steps = 5000
    out_a = np.empty((n_steps + 1, 3))
    out_b = np.empty((n_steps + 1, 3))
    out_a[0] = out_b[0] = (0.1, 0.2, 1.0)
    fa, sa = kernels.rk4_loop(0.1, 0.2, 1.0, -2.0, 1e-3, n_steps, 1, out_a)
    fb, sb = kernels.rk4_loop_py(0.1, 0.2, 1.0, -2.0, 1e-3, n_steps, 1, out_b)
    assert (fa, sa) == (fb, sb)
    assert np.array_equal(out_a, out_b)


def test_trajectory_invariants():
    with pytest.raises(InvalidParameterError):
        rb.Trajectory(times=np.array([0.0, 0.0]), states=np.zeros((2, 3)),
                      hamiltonians=np.zeros(2), casimirs=np.zeros(2),
                      h=-2.0, method="rk4")
    with pytest.raises(InvalidParameterError):
        rb.Trajectory(times=np.array([0.0]), states=np.zeros((2, 3)),
                      hamiltonians=np.zeros(2), casimirs=np.zeros(2),
                      h=-2.0, method="rk4")


def test_state_rejects_nonfinite():
    with pytest.raises(InvalidParameterError):
        rb.RattlebackState(float("inf"), 0.0, 0.0)
