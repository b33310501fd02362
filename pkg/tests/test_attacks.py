import numpy as np
import pytest

from qbitcommit import attacks
from qbitcommit.codes import bits, hamming_7_4
from qbitcommit.errors import AttackPreconditionError, CapExceededError
from qbitcommit.protocols import bcjl, script
from qbitcommit.qmath import (StateVector, apply_local, fidelity,
                              random_state, reduced_state)

S = 1 / np.sqrt(2)


def test_report_record_round_trip():
    rep = attacks.AttackReport.from_overlap(0.8, 0.8, 4, n=6.0)
    assert rep.acceptance_probability == pytest.approx(0.64)
    assert rep.detection_probability == pytest.approx(0.36)
    back = attacks.AttackReport.from_record(rep.to_record())
    assert back == rep


def test_optimal_overlap_equals_fidelity(rng):
    for dims in ((2, 2), (3, 2), (2, 5), (4, 4)):
        psi0, psi1 = random_state(dims, rng), random_state(dims, rng)
        u, rep = attacks.optimal_cheat_unitary(psi0, psi1, 1)
        f = fidelity(reduced_state(psi0, [1]), reduced_state(psi1, [1]))
        assert rep.fidelity == pytest.approx(f, abs=1e-12)
        assert rep.achieved_overlap == pytest.approx(f, abs=1e-10)
        assert rep.acceptance_probability == pytest.approx(f ** 2, abs=1e-10)


def test_no_local_unitary_beats_fidelity(rng):
    from qbitcommit.qmath import random_unitary
    psi0, psi1 = random_state((3, 3), rng), random_state((3, 3), rng)
    _, rep = attacks.optimal_cheat_unitary(psi0, psi1, 1)
    for _ in range(200):
        u = random_unitary(3, rng)
        assert abs(psi1.overlap(apply_local(u, psi0, 1))) <= rep.achieved_overlap + 1e-12


def test_ideal_unitary_on_bell_pair():
    plus = StateVector([S, 0, 0, S], (2, 2))
    minus = StateVector([S, 0, 0, -S], (2, 2))
    u = attacks.ideal_cheat_unitary(plus, minus, 1)
    assert apply_local(u, plus, 1).same_ray(minus, 1e-10)


def test_ideal_unitary_with_degenerate_coefficients(rng):
    # rank-4 maximally entangled pair related by a random A-side unitary
    from qbitcommit.qmath import random_unitary
    psi0 = StateVector(np.eye(4).reshape(-1) / 2, (4, 4))
    psi1 = apply_local(random_unitary(4, rng), psi0, 1)
    u = attacks.ideal_cheat_unitary(psi0, psi1, 1)
    assert abs(psi1.overlap(apply_local(u, psi0, 1))) == pytest.approx(1.0, abs=1e-10)


def test_ideal_unitary_precondition():
    a = StateVector.basis(0, (2, 2))
    b = StateVector.basis(1, (2, 2))
    with pytest.raises(AttackPreconditionError):
        attacks.ideal_cheat_unitary(a, b, 1)


def test_revealing_script_cannot_be_cheated():
    rep = attacks.run_commitment_attack(script.revealing_script())
    assert rep.fidelity == pytest.approx(0.0, abs=1e-12)
    assert rep.acceptance_probability == pytest.approx(0.0, abs=1e-12)
    assert rep.detection_probability == pytest.approx(1.0)


def test_silent_script_is_fully_cheatable(rng):
    rep = attacks.run_commitment_attack(script.silent_script(rng))
    assert rep.acceptance_probability == pytest.approx(1.0, abs=1e-10)


def test_single_photon_commitment():
    rep = attacks.run_commitment_attack(script.bb84_commitment_script())
    assert rep.fidelity == pytest.approx(S, abs=1e-12)
    assert rep.acceptance_probability == pytest.approx(0.5, abs=1e-10)


def test_sweep_detection_is_monotone():
    det = [attacks.run_commitment_attack(script.interpolating_script(s)).detection_probability
           for s in np.linspace(0, 1, 11)]
    assert all(a >= b - 1e-12 for a, b in zip(det, det[1:]))
    assert det[0] == pytest.approx(1.0) and det[-1] == pytest.approx(0.0, abs=1e-12)


def test_bcjl_attack_hamming():
    code, r = hamming_7_4(), bits("1000000")
    res = attacks.bcjl_epr_attack_states(bcjl.BCJLParams(7, 4), code=code, r=r)
    f = bcjl.concealment_fidelity(code, r)
    assert res.report.fidelity == pytest.approx(f, abs=1e-10)
    assert res.report.achieved_overlap == pytest.approx(f, abs=1e-8)
    # the honest bit-0 state opens correctly with certainty
    assert res.report.extra["open0_three_test_acceptance"] == pytest.approx(1.0, abs=1e-12)
    # the three-test verifier is weaker than the projector
    assert res.report.extra["open1_three_test_acceptance"] >= f ** 2 - 1e-9
    # Bob's side is untouched by Alice's rotation
    assert reduced_state(res.cheated, [2]).allclose(reduced_state(res.final0, [2]), 1e-10)


def test_bcjl_sampled_acceptance_agrees(rng):
    res = attacks.bcjl_epr_attack_states(bcjl.BCJLParams(4, 2), rng)
    exact = res.report.extra["open1_three_test_acceptance"]
    approx = attacks.bcjl_opening_acceptance(res.cheated, res.code, res.r, 1,
                                             rng=rng, samples=400)
    assert abs(approx - exact) < 0.1


def test_bcjl_attack_preconditions(rng):
    with pytest.raises(ValueError, match="noiseless"):
        attacks.bcjl_epr_attack(bcjl.BCJLParams(4, 2, 0.05), rng)
    with pytest.raises(CapExceededError):
        attacks.bcjl_epr_attack(bcjl.BCJLParams(8, 6), rng)
    with pytest.raises(ValueError):
        attacks.bcjl_epr_attack(bcjl.BCJLParams(7, 4), code=hamming_7_4(), r="0000000")


def test_two_party_recovers_row():
    f = np.array([[0, 1, 1], [1, 0, 2]])
    assert attacks.two_party_attack(f, 1, y_start=2) == [(0, 1), (1, 0), (2, 2)]


def test_two_party_queries_leave_state_alone():
    recs = attacks.two_party_attack_trace(np.eye(4, dtype=int), 2)
    assert all(r.disturbance < 1e-12 for r in recs)


def test_two_party_precondition(monkeypatch):
    # a protocol that leaks y to Alice is outside the attack's scope
    def leaky(f, x, y):
        return StateVector.basis((y, y, int(f[x, y])), (2, 2, 2))
    monkeypatch.setattr(attacks, "two_party_protocol", leaky)
    with pytest.raises(AttackPreconditionError):
        attacks.two_party_attack_trace(np.eye(2, dtype=int), 0)
