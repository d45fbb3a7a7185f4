import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nuspectra import oracle, radial
from nuspectra.radial import InadmissibleStateError, PotentialParams
from nuspectra.specfun import DomainError, PoleError

P0 = PotentialParams(10.0, 3.0, 0.5)


def test_params_validation():
    with pytest.raises(ValueError):
        PotentialParams(1, 1, 0.0)
    with pytest.raises(ValueError):
        PotentialParams(1, 1, 1.0, mu=-1)
    assert PotentialParams(1, 1, 2.0, mu=2, hbar=3).energy_scale == pytest.approx(9 * 4 / 4)


def test_pekeris_rhs_small_argument():
    for x in (1e-2, 1e-3):
        assert radial.pekeris_rhs(x) * x * x == pytest.approx(1.0, rel=1e-5)


@given(st.floats(-5, 50), st.floats(-1, 50), st.floats(0.05, 3), st.integers(2, 7), st.integers(0, 4), st.floats(-20, 20))
def test_reduce_roundtrip(A, B, lam, D, l, E):
    p = PotentialParams(A, B, lam)
    red = radial.reduce(p, D, l, E)
    A2, B2, E2 = radial.unreduce(red, p)
    assert (A2, B2, E2) == pytest.approx((A, B, E), rel=1e-12, abs=1e-9)


def test_printed_spectrum_examples():
    assert radial.energy_reduced(0, 0.0, 0.0, form="printed") == pytest.approx(-1.375)
    p = PotentialParams(0.0, 0.0, 1.0)
    assert radial.energy_physical(0, 0, 3, p, form="printed") == pytest.approx(-2.75)
    assert radial.energy_printed_literal(0, 0, 3, p) == pytest.approx(-2.75)
    # printed form decreases with n at A~ = 1, B~ = 6
    e = [radial.energy_reduced(n, 1.0, 6.0, form="printed") for n in range(4)]
    assert all(b < a for a, b in zip(e, e[1:]))


@settings(max_examples=40)
@given(st.floats(0, 40), st.floats(0, 40), st.floats(0.1, 2), st.integers(3, 6), st.integers(0, 3), st.integers(0, 3))
def test_printed_literal_matches_reduced_route(A, B, lam, D, l, n):
    p = PotentialParams(A, B, lam)
    try:
        ref = radial.energy_printed_literal(n, l, D, p)
    except DomainError:
        with pytest.raises(DomainError):
            radial.energy_physical(n, l, D, p, "printed")
        return
    assert radial.energy_physical(n, l, D, p, "printed") == pytest.approx(ref, rel=1e-10, abs=1e-10)


def test_poschl_teller_closed_form():
    # with A = a(a-1) s, B = b(b-1) s the ground state of the tanh/coth well sits at
    # E = s [A/s - (a - b - 1)^2] with s = hbar^2 lam^2 / 2 mu (l = 0, D = 3)
    lam = 0.7
    s = lam**2 / 2
    a, b = 6.0, 2.0
    # V = A tanh^2 + B coth^2 = (A + B) - A sech^2 + B csch^2
    A, B = a * (a - 1) * s, b * (b - 1) * s
    p = PotentialParams(A, B, lam)
    for n in range(2):
        expect = A + B - s * (a - b - 2 * n - 1) ** 2
        assert radial.energy_physical(n, 0, 3, p) == pytest.approx(expect, rel=1e-12)


@pytest.mark.parametrize("A,B,lam", [(10, 3, 0.5), (25, 0.5, 0.3), (6, 1.2, 1.0)])
def test_corrected_spectrum_against_oracle(A, B, lam):
    p = PotentialParams(A, B, lam)
    nmax = radial.max_radial_n(p, 3, 1)
    assert nmax >= 0
    grid = oracle.Grid(0, 20 / lam, 4000)
    num = oracle.radial_solve(radial.approximated_potential(p, 3, 1), grid, nmax + 1).eigenvalues
    for n in range(nmax + 1):
        assert radial.energy_physical(n, 1, 3, p) == pytest.approx(num[n], rel=1e-4)


def test_interdimensional_degeneracy():
    for D, l in [(3, 2), (4, 1), (5, 3)]:
        assert radial.energy_physical(0, l, D, P0) == pytest.approx(radial.energy_physical(0, l - 1, D + 2, P0))


def test_k_roots_and_selection():
    kp, km = radial.nu_k_roots(1, 2.0)
    q, S = 3, math.sqrt(33)
    assert kp == pytest.approx((-q * q + q * S) / 4)
    assert km == pytest.approx((-q * q - q * S) / 4)
    k, note = radial.select_k(1, 2.0)
    assert k == kp and "(+)" in note
    kpr, note = radial.select_k(1, 2.0, 1.0, form="printed")
    assert kpr <= 0 and note


@pytest.mark.parametrize("form", radial.FORMS)
def test_nu_constraint(form):
    red = radial.reduce(P0, 3, 0)
    for n in range(2):
        assert abs(radial.nu_constraint_residual(n, red.A_t, red.B_t, form)) < 1e-8


def test_nu_constants_consistency():
    red0 = radial.reduce(P0, 3, 0)
    E_t = radial.energy_reduced(0, red0.A_t, red0.B_t)
    red = radial.ReducedRadialParams(red0.A_t, red0.B_t, E_t, red0.gamma_D)
    c = radial.nu_constants(0, red)
    assert c.c1**2 == pytest.approx(c.c2 * c.c3, rel=1e-10)
    assert c.jacobi_b == pytest.approx(math.sqrt(1 + 16 * red.B_t) / 2)
    with pytest.raises(radial.ConstraintError):
        radial.nu_constants(0, radial.ReducedRadialParams(red.A_t, red.B_t, E_t + 0.1, red.gamma_D))


def test_acceptance_point_states():
    s0 = radial.radial_eigenstate(0, 0, 3, P0)
    s1 = radial.radial_eigenstate(1, 0, 3, P0)
    assert s0.energy == pytest.approx(11.849501481826902, rel=1e-12)
    assert s1.energy == pytest.approx(12.866405248170105, rel=1e-12)
    assert radial.max_radial_n(P0, 3, 0) == 1
    with pytest.raises(InadmissibleStateError, match="sech exponent"):
        radial.radial_eigenstate(2, 0, 3, P0)


def test_printed_form_never_admissible():
    with pytest.raises(InadmissibleStateError, match="-c6-c7 > -1"):
        radial.radial_eigenstate(0, 0, 3, P0, form="printed")


def test_wavefunction_shape():
    s0 = radial.radial_eigenstate(0, 0, 3, P0)
    r = np.linspace(0, 40, 4001)
    g = radial.radial_wavefunction(s0, r)
    assert g[0] == 0.0
    assert np.all(g[1:] > 0)
    assert radial.radial_wavefunction(s0, 1.0) == pytest.approx(g[100])
    s1 = radial.radial_eigenstate(1, 0, 3, P0)
    g1 = radial.radial_wavefunction(s1, r)
    assert np.count_nonzero(np.diff(np.sign(g1[1:]))) == 1


def test_wavefunction_matches_oracle_vector():
    grid = oracle.Grid(0, 40, 4000)
    num = oracle.radial_solve(radial.exact_potential(P0, 3, 0), grid, 2)
    for n in range(2):
        g = radial.radial_wavefunction(radial.radial_eigenstate(n, 0, 3, P0), grid.interior)
        v = num.eigenvectors[n] * np.sign(np.dot(g, num.eigenvectors[n]))
        assert np.max(np.abs(g - v)) < 1e-3 * np.max(np.abs(g))


PARAM_SETS = [PotentialParams(10, 3, 0.5), PotentialParams(10, 0.3, 0.2), PotentialParams(40, 2, 0.4, mu=2, hbar=0.7)]


@pytest.mark.parametrize("p", PARAM_SETS)
def test_normalisation_and_orthogonality(p):
    states = [radial.radial_eigenstate(n, 0, 3, p) for n in range(radial.max_radial_n(p, 3, 0) + 1)]
    for st_ in states:
        rmax = radial.default_rmax(p.lam, st_.sech_power)
        q = oracle.quadrature(lambda r: radial.radial_wavefunction(st_, r) ** 2, 0, rmax, rtol=1e-13).value
        assert q == pytest.approx(1.0, abs=1e-6)
        qn = radial.quadrature_norm(st_.n, st_.jacobi_a, st_.jacobi_b, p.lam)
        assert radial.closed_form_norm(st_.n, st_.jacobi_a, st_.jacobi_b, p.lam) == pytest.approx(qn, rel=1e-10)
        if st_.n <= 6:
            assert radial.normalization_sum(st_.n, st_.jacobi_a, st_.jacobi_b, p.lam) == pytest.approx(qn, rel=1e-6)
    if len(states) > 1:
        rmax = max(radial.default_rmax(p.lam, s.sech_power) for s in states)
        f = lambda r: radial.radial_wavefunction(states[0], r) * radial.radial_wavefunction(states[-1], r)
        assert abs(oracle.quadrature(f, 0, rmax).value) < 1e-8


def test_normalisation_options_agree():
    for n in range(2):
        vals = [radial.radial_eigenstate(n, 0, 3, P0, normalization=k).omega for k in ("closed", "sum", "quadrature")]
        assert vals == pytest.approx([vals[0]] * 3, rel=1e-9)
    with pytest.raises(ValueError):
        radial.radial_eigenstate(0, 0, 3, P0, normalization="bogus")


def test_sum_cancellation_is_visible_at_high_n():
    # large indices: the alternating sum drifts while the closed form holds
    p = PotentialParams(40, 2, 0.4, mu=2, hbar=0.7)
    st_ = radial.radial_eigenstate(15, 0, 3, p)
    qn = radial.quadrature_norm(15, st_.jacobi_a, st_.jacobi_b, p.lam)
    assert radial.closed_form_norm(15, st_.jacobi_a, st_.jacobi_b, p.lam) == pytest.approx(qn, rel=1e-10)
    assert abs(radial.normalization_sum(15, st_.jacobi_a, st_.jacobi_b, p.lam) / qn - 1) > 1e-6


def test_published_normalisation_pole():
    # Gamma(2a + m - n) with 2a = 1, n = 1, m = 0 sits on a pole
    with pytest.raises(PoleError):
        radial.normalization_sum(1, 0.5, 1.0, 1.0, form="printed")


def test_gram_schmidt():
    r = np.linspace(0, 10, 2001)
    w = oracle.trapezoid_weights(r)
    F = np.array([np.exp(-r), r * np.exp(-r), r * r * np.exp(-r)])
    Q = radial.gram_schmidt(F, w)
    assert np.max(np.abs(radial.gram_matrix(Q, w) - np.eye(3))) < 1e-12
    # triangular: the first output is the first input rescaled
    assert np.allclose(Q[0] * F[0, 1], F[0] * Q[0, 1])
    with pytest.raises(ValueError):
        radial.gram_schmidt(np.array([F[0], 2 * F[0]]), w)


def test_bound_state_window():
    bw = radial.bound_state_window(P0, 3, 0)
    assert bw.has_bound_state and bw.n_max == 1 and bw.failed() == []
    weak = radial.bound_state_window(PotentialParams(-1.0, 3.0, 0.5), 3, 2)
    assert "A-condition" in weak.failed()
    low_b = radial.bound_state_window(PotentialParams(10.0, 0.0, 0.5), 3, 0)
    assert "Btilde>35/16" in low_b.failed()
    assert low_b.inconsistent and low_b.diagnostics


def test_limiting_case_map():
    A, B, shift = radial.limiting_case_map(1.0, 2.0, 0.1)
    assert A == pytest.approx(1 / (2 * 0.01) - 2 * 0.01 / 30)
    assert B == pytest.approx(0.01)
    assert shift == pytest.approx(2 * B / 3)
    with pytest.raises(ValueError):
        radial.limiting_case_map(1.0, 2.0, 0.0)


def test_oscillator_energy_against_oracle():
    grid = oracle.Grid(0, 12, 8000)
    num = oracle.radial_solve(radial.oscillator_potential(1.0, 2.0), grid, 2).eigenvalues
    assert np.allclose(num, [radial.oscillator_energy(n, 1.0, 2.0) for n in range(2)], atol=2e-4)
    assert radial.oscillator_energy(0, 1.0, 2.0) == pytest.approx(2.5)
