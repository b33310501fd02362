import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from qbitcommit.errors import CapExceededError
from qbitcommit.qmath import (DensityMatrix, StateVector, UnitaryOp, apply_local,
                              apply_on, fidelity, partial_trace, permute, purify,
                              random_density, random_state, random_unitary,
                              reduced_state, relating_unitary, schmidt_decompose,
                              tensor)

S = 1 / np.sqrt(2)
KET0 = StateVector([1, 0], (2,))
KET1 = StateVector([0, 1], (2,))
BELL = StateVector([S, 0, 0, S], (2, 2))


def test_state_invariants_rejected():
    with pytest.raises(ValueError):
        StateVector([1, 1], (2,))
    with pytest.raises(ValueError):
        StateVector([1, 0, 0], (2,))
    with pytest.raises(CapExceededError):
        DensityMatrix(np.eye(5000) / 5000)


def test_density_invariants_rejected():
    with pytest.raises(ValueError, match="Hermitian"):
        DensityMatrix([[0.5, 0.1], [0.3, 0.5]])
    with pytest.raises(ValueError, match="trace"):
        DensityMatrix(np.eye(2))
    with pytest.raises(ValueError, match="negative"):
        DensityMatrix([[1.5, 0], [0, -0.5]])


def test_values_are_immutable():
    with pytest.raises(ValueError):
        KET0.amplitudes[0] = 0


class TestTensor:
    def test_basis_product(self):
        out = tensor(KET0, KET1)
        assert out.dims == (2, 2)
        np.testing.assert_allclose(out.amplitudes, [0, 1, 0, 0])

    def test_scalar_factor(self, rng):
        psi = random_state((3,), rng)
        out = tensor(psi, StateVector([1], (1,)))
        np.testing.assert_allclose(out.amplitudes, psi.amplitudes)

    def test_superposition(self):
        plus = StateVector([S, S], (2,))
        np.testing.assert_allclose(tensor(plus, KET0).amplitudes, [S, 0, S, 0])


class TestPartialTrace:
    def test_product_state(self):
        rho = tensor(KET0, KET0).density()
        out = partial_trace(rho, (2, 2), [0])
        np.testing.assert_allclose(out.entries, [[1, 0], [0, 0]])

    def test_bell_is_maximally_mixed(self):
        out = partial_trace(BELL.density(), (2, 2), [0])
        np.testing.assert_allclose(out.entries, np.eye(2) / 2, atol=1e-15)

    def test_matches_index_summation(self, rng):
        psi = random_state((3, 4), rng)
        rho = psi.density()
        np.testing.assert_allclose(partial_trace(rho, (3, 4), [0]).entries,
                                   oracles.naive_partial_trace_b(rho.entries, 3, 4), atol=1e-12)
        np.testing.assert_allclose(partial_trace(rho, (3, 4), [1]).entries,
                                   oracles.naive_partial_trace_a(rho.entries, 3, 4), atol=1e-12)

    def test_three_factors_and_pure_shortcut(self, rng):
        psi = random_state((2, 3, 2), rng)
        for keep in ([0], [1], [2], [0, 2], [1, 2]):
            np.testing.assert_allclose(partial_trace(psi.density(), psi.dims, keep).entries,
                                       reduced_state(psi, keep).entries, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            partial_trace(BELL.density(), (2, 3), [0])
        with pytest.raises(ValueError):
            partial_trace(BELL.density(), (2, 2), [])


class TestSchmidt:
    def test_bell(self):
        sf = schmidt_decompose(BELL, 1)
        np.testing.assert_allclose(sf.coeffs, [S, S])

    def test_product_rank_one(self):
        sf = schmidt_decompose(tensor(KET0, KET1), 1)
        assert sf.rank == 1
        np.testing.assert_allclose(sf.coeffs, [1.0])

    def test_matches_eigen_construction(self, rng):
        psi = random_state((3, 4), rng)
        sf = schmidt_decompose(psi, 1)
        lam, a_vecs, b_vecs = oracles.schmidt_by_eigen(psi.amplitudes, 3, 4)
        np.testing.assert_allclose(sf.weights, lam, atol=1e-10)
        # paired vectors agree up to a common phase per term
        for i in range(sf.rank):
            phase = np.vdot(a_vecs[:, i], sf.basis_a[:, i])
            assert abs(abs(phase) - 1) < 1e-9
            np.testing.assert_allclose(sf.basis_b[:, i] * phase, b_vecs[:, i], atol=1e-9)

    def test_degenerate_subspaces(self, rng):
        # coefficients (1/2, 1/2, 1/2, 1/2) in random local bases
        ua, ub = random_unitary(4, rng), random_unitary(4, rng)
        psi = StateVector((ua.entries @ np.eye(4) / 2 @ ub.entries.T).reshape(-1), (4, 4))
        sf = schmidt_decompose(psi, 1)
        np.testing.assert_allclose(sf.coeffs, [0.5] * 4, atol=1e-12)
        proj = sf.basis_a @ sf.basis_a.conj().T
        np.testing.assert_allclose(proj, np.eye(4), atol=1e-10)
        assert sf.reconstruct().same_ray(psi, 1e-10)

    @settings(max_examples=40, deadline=None)
    @given(p=st.integers(1, 16), q=st.integers(1, 16), seed=st.integers(0, 2 ** 32 - 1))
    def test_reconstruction_and_spectra(self, p, q, seed):
        rng = np.random.default_rng(seed)
        psi = random_state((p, q), rng) if p * q > 1 else StateVector([1], (1, 1))
        sf = schmidt_decompose(psi, 1)
        assert sf.rank <= min(p, q)
        assert abs(sf.weights.sum() - 1) < 1e-9
        np.testing.assert_allclose(sf.basis_a.conj().T @ sf.basis_a, np.eye(sf.rank), atol=1e-9)
        np.testing.assert_allclose(sf.basis_b.conj().T @ sf.basis_b, np.eye(sf.rank), atol=1e-9)
        assert abs(abs(sf.reconstruct().overlap(psi)) - 1) < 1e-10
        for side, dim in ((0, p), (1, q)):
            spec = reduced_state(psi, [side]).eigenvalues()
            padded = np.zeros(dim)
            padded[:sf.rank] = sf.weights
            np.testing.assert_allclose(padded, spec, atol=1e-10)

    def test_bad_cut(self):
        with pytest.raises(ValueError):
            schmidt_decompose(BELL, 0)
        with pytest.raises(ValueError):
            schmidt_decompose(BELL, 2)


class TestFidelity:
    def test_identical(self, rng):
        rho = random_density(3, rng)
        assert fidelity(rho, rho) == pytest.approx(1.0, abs=1e-10)

    def test_orthogonal(self):
        assert fidelity(KET0.density(), KET1.density()) == pytest.approx(0.0, abs=1e-12)

    def test_pure_vs_mixed(self, rng):
        closed = fidelity(KET0.density(), DensityMatrix.maximally_mixed(2))
        searched = oracles.fidelity_by_search(KET0.density().entries, np.eye(2) / 2, rng)
        # frozen from the search oracle
        assert searched == pytest.approx(0.70711, abs=1e-5)
        assert closed == pytest.approx(0.70711, abs=1e-5)

    def test_symmetry_and_unitary_invariance(self, rng):
        for d in (2, 3, 5):
            a, b = random_density(d, rng), random_density(d, rng, rank=1)
            f = fidelity(a, b)
            assert 0 <= f <= 1
            assert fidelity(b, a) == pytest.approx(f, abs=1e-10)
            u = random_unitary(d, rng).entries
            ua = DensityMatrix(u @ a.entries @ u.conj().T)
            ub = DensityMatrix(u @ b.entries @ u.conj().T)
            assert fidelity(ua, ub) == pytest.approx(f, abs=1e-10)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            fidelity(DensityMatrix.maximally_mixed(2), DensityMatrix.maximally_mixed(3))


class TestPurify:
    def test_pure_input_gives_product(self):
        psi = purify(KET0.density())
        assert schmidt_decompose(psi, 1).rank == 1

    def test_maximally_mixed(self):
        sf = schmidt_decompose(purify(DensityMatrix.maximally_mixed(2)), 1)
        np.testing.assert_allclose(sf.coeffs, [S, S], atol=1e-12)

    def test_round_trip(self, rng):
        rho = random_density(3, rng)
        psi = purify(rho)
        assert psi.dims == (3, 3)
        np.testing.assert_allclose(reduced_state(psi, [0]).entries, rho.entries, atol=1e-12)


class TestRelatingUnitary:
    def test_identity(self, rng):
        psi = random_state((3, 3), rng)
        u = relating_unitary(psi, psi, 1)
        assert apply_local(u, psi, 1).same_ray(psi, 1e-8)
        # full Schmidt rank pins U down completely
        np.testing.assert_allclose(u.entries, np.eye(3), atol=1e-8)

    def test_recovers_random_local_unitary(self, rng):
        psi = random_state((3, 2), rng)          # rank 2 inside a 3-dim A factor
        v = random_unitary(3, rng)
        target = apply_local(v, psi, 1)
        u = relating_unitary(psi, target, 1)
        assert abs(target.overlap(apply_local(u, psi, 1)) - 1) < 1e-8
        support = schmidt_decompose(psi, 1).basis_a
        np.testing.assert_allclose(u.entries @ support, v.entries @ support, atol=1e-8)

    def test_bell_phase_flip(self):
        minus = StateVector([S, 0, 0, -S], (2, 2))
        u = relating_unitary(BELL, minus, 1)
        assert apply_local(u, BELL, 1).same_ray(minus, 1e-8)
        np.testing.assert_allclose(u.entries, np.diag([1, -1]), atol=1e-8)

    def test_rejects_different_reductions(self):
        with pytest.raises(ValueError):
            relating_unitary(BELL, tensor(KET0, KET0), 1)


class TestApplyLocal:
    def test_identity(self, rng):
        psi = random_state((2, 3), rng)
        out = apply_local(UnitaryOp.identity(2), psi, 1)
        np.testing.assert_allclose(out.amplitudes, psi.amplitudes)

    def test_x_on_first_qubit(self):
        x = UnitaryOp([[0, 1], [1, 0]])
        out = apply_local(x, tensor(KET0, KET0), 1, "A")
        np.testing.assert_allclose(out.amplitudes, [0, 0, 1, 0])

    def test_other_side_unchanged(self, rng):
        psi = random_state((3, 4), rng)
        out = apply_local(random_unitary(3, rng), psi, 1, "A")
        np.testing.assert_allclose(reduced_state(out, [1]).entries,
                                   reduced_state(psi, [1]).entries, atol=1e-12)
        out = apply_local(random_unitary(4, rng), psi, 1, "B")
        np.testing.assert_allclose(reduced_state(out, [0]).entries,
                                   reduced_state(psi, [0]).entries, atol=1e-12)

    def test_dimension_mismatch(self, rng):
        with pytest.raises(ValueError):
            apply_local(UnitaryOp.identity(3), BELL, 1)


def test_apply_on_matches_kron(rng):
    psi = random_state((2, 3, 2), rng)
    u = random_unitary(6, rng)
    direct = np.kron(u.entries, np.eye(2)) @ psi.amplitudes
    np.testing.assert_allclose(apply_on(u, psi, (0, 1)).amplitudes, direct, atol=1e-12)
    # targets in non-adjacent, reversed order
    u2 = random_unitary(4, rng)
    swapped = permute(psi, (2, 1, 0))
    via_perm = permute(apply_on(u2, swapped, (0, 2)), (2, 1, 0))
    np.testing.assert_allclose(apply_on(u2, psi, (2, 0)).amplitudes, via_perm.amplitudes, atol=1e-12)
