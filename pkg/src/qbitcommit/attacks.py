"""Cheating strategies built from purifications and local unitaries.

Alice's commitment attack: run the commit phase for bit 0, and if she wants
to open 1, rotate her own registers so the joint state is as close as
possible to the honest bit-1 state. The best overlap any A-local rotation
can reach equals the fidelity of Bob's two reduced matrices, so the more a
scheme conceals, the better she cheats.

Acceptance probabilities are quoted against the strongest verifier, the
projector onto the honest state. Any verifier that always accepts honest
openings accepts at least this often.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from . import codes
from .codes import LinearCode, bits
from .encode import Basis
from .errors import AttackPreconditionError
from .protocols import bcjl as _bcjl
from .protocols.bcjl import BCJLParams
from .protocols.script import UnitaryScript, script_execute, script_verify
from .protocols.twoparty import alice_view, check_table, two_party_protocol
from .qmath import (DensityMatrix, StateVector, UnitaryOp, alignment_unitary,
                    apply_local, apply_on, bipartition, complete_isometry,
                    fidelity, nearest_isometry, permute, relating_unitary,
                    schmidt_decompose)


@dataclass
class AttackReport:
    fidelity: float
    delta: float
    achieved_overlap: float
    acceptance_probability: float
    detection_probability: float
    u_dim: int
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_overlap(cls, fid: float, overlap: float, u_dim: int, **extra) -> "AttackReport":
        acc = min(1.0, overlap ** 2)
        return cls(fidelity=fid, delta=1.0 - fid, achieved_overlap=overlap,
                   acceptance_probability=acc, detection_probability=1.0 - acc,
                   u_dim=u_dim, extra=dict(extra))

    def to_record(self) -> str:
        """Flat ``key=value`` record on one line (floats in repr form)."""
        d = asdict(self)
        d.update(d.pop("extra"))
        return " ".join(f"{k}={v!r}" for k, v in d.items())

    @classmethod
    def from_record(cls, line: str) -> "AttackReport":
        vals = dict(item.split("=", 1) for item in line.split())
        core = {k: float(vals.pop(k)) for k in
                ("fidelity", "delta", "achieved_overlap",
                 "acceptance_probability", "detection_probability")}
        u_dim = int(vals.pop("u_dim"))
        return cls(**core, u_dim=u_dim, extra={k: float(v) for k, v in vals.items()})


def b_side_matrix(state: StateVector, cut: int) -> DensityMatrix:
    """Reduced matrix of the factor after ``cut`` (Bob's side)."""
    m = state.matrix(cut)
    return DensityMatrix(m.T @ m.conj())


def ideal_cheat_unitary(final0: StateVector, final1: StateVector, cut: int,
                        atol: float = 1e-8) -> UnitaryOp:
    """U^A sending |0_final> to |1_final> when Bob's reduced states coincide.

    Writes |0_final> = sum_i sqrt(a_i) |e_i>|phi_i> and expands |1_final>
    over the same |phi_i>; equal reduced states force the A-side partners
    |e'_i> to be orthonormal, and U^A maps each |e_i> to |e'_i>. Degenerate
    coefficients need no special care because the |phi_i> are fixed first.
    """
    if final0.dims != final1.dims:
        raise ValueError(f"dims differ: {final0.dims} vs {final1.dims}")
    m1 = final1.matrix(cut)
    gap = np.max(np.abs(b_side_matrix(final0, cut).entries - b_side_matrix(final1, cut).entries))
    if gap > atol:
        raise AttackPreconditionError(
            f"Bob's reduced matrices differ by {gap:.3g}; use optimal_cheat_unitary")
    sf = schmidt_decompose(final0, cut)
    partners = (m1 @ sf.basis_b.conj()) / sf.coeffs
    return UnitaryOp(complete_isometry(sf.basis_a, nearest_isometry(partners)))


def optimal_cheat_unitary(final0: StateVector, final1: StateVector,
                          cut: int) -> tuple[UnitaryOp, AttackReport]:
    """U^A maximizing |<1_final|(U^A x I)|0_final>|, with its report.

    The rotated state (U^A x I)|0_final> is the purification of Bob's
    bit-0 matrix most parallel to |1_final>.
    """
    if final0.dims != final1.dims:
        raise ValueError(f"dims differ: {final0.dims} vs {final1.dims}")
    u = UnitaryOp(alignment_unitary(final0.matrix(cut), final1.matrix(cut)))
    cheated = apply_local(u, final0, cut, "A")
    overlap = abs(final1.overlap(cheated))
    fid = fidelity(b_side_matrix(final0, cut), b_side_matrix(final1, cut))
    return u, AttackReport.from_overlap(fid, overlap, u.dim)


def run_commitment_attack(script: UnitaryScript, method: str = "optimal") -> AttackReport:
    """Commit to 0 honestly, then open as 1 after an A-local rotation.

    ``method="ideal"`` uses the Schmidt-basis construction, which needs Bob's
    two reduced matrices to agree; ``"optimal"`` works for any script.
    """
    if method not in ("optimal", "ideal"):
        raise ValueError(f"method must be 'optimal' or 'ideal', got {method!r}")
    alice = script.alice_registers
    bob = [i for i in range(len(script.dims)) if i not in alice]
    final0 = script_execute(script, 0)
    final1 = script_execute(script, 1)
    split0 = bipartition(final0, alice)
    split1 = bipartition(final1, alice)
    if method == "ideal":
        u = ideal_cheat_unitary(split0, split1, 1)
        overlap = abs(split1.overlap(apply_local(u, split0, 1, "A")))
        fid = fidelity(b_side_matrix(split0, 1), b_side_matrix(split1, 1))
        report = AttackReport.from_overlap(fid, overlap, u.dim)
    else:
        u, report = optimal_cheat_unitary(split0, split1, 1)
    cheated = apply_local(u, split0, 1, "A")
    # back to register order for Bob's check
    grouped = cheated.reshape_dims(tuple(script.dims[i] for i in alice + bob))
    restored = permute(grouped, np.argsort(alice + bob))
    report.acceptance_probability = script_verify(restored, script, 1)
    report.detection_probability = 1.0 - report.acceptance_probability
    return report


# ---------------------------------------------------------------------------
# BCJL with delayed measurement

@dataclass
class BCJLAttackResult:
    code: LinearCode
    r: np.ndarray
    final0: StateVector
    final1: StateVector
    cheated: StateVector
    unitary: UnitaryOp
    report: AttackReport


def bcjl_epr_attack_states(params: BCJLParams, rng: np.random.Generator | None = None,
                           code: LinearCode | None = None, r=None) -> BCJLAttackResult:
    """Delayed-measurement attack on BCJL, returning every intermediate state.

    Alice never measures: she keeps her codeword index and basis string in
    superposition, entangled with the photons. That is exactly the honest
    bit-0 state with her randomness purified, and the bit-1 opening is
    reached by one unitary on her two registers.
    """
    if params.epsilon != 0.0:
        raise ValueError("the joint-state attack models a noiseless channel (epsilon=0)")
    _bcjl._check_joint_caps(params.n, params.k, need_alice_operator=True)
    if code is None:
        if rng is None:
            raise ValueError("need rng or an explicit code")
        code = codes.generate_code(params.n, params.k, params.min_d, rng)
    if r is None:
        if rng is None:
            raise ValueError("need rng or an explicit r")
        r = _bcjl.choose_r(code, rng)
    r = bits(r)
    if r.size != code.n or not r.any():
        raise ValueError("r must be a nonzero n-bit string")
    parity = codes.parity_classes(code, r)
    if not parity.any():
        raise ValueError("r is orthogonal to the code; bit 1 cannot be committed")

    photons = _bcjl.photon_amplitudes(code)
    final0 = _bcjl.commit_state(code, r, 0, photons)
    final1 = _bcjl.commit_state(code, r, 1, photons)
    u, report = optimal_cheat_unitary(final0, final1, 2)
    cheated = apply_local(u, final0, 2, "A")
    report.extra["n"] = float(code.n)
    report.extra["k"] = float(code.k)
    report.extra["d"] = float(code.min_distance)
    report.extra["open0_three_test_acceptance"] = bcjl_opening_acceptance(
        final0, code, r, 0, params.threshold)
    report.extra["open1_three_test_acceptance"] = bcjl_opening_acceptance(
        cheated, code, r, 1, params.threshold)
    return BCJLAttackResult(code, r, final0, final1, cheated, u, report)


def bcjl_epr_attack(params: BCJLParams, rng: np.random.Generator | None = None,
                    code: LinearCode | None = None, r=None) -> AttackReport:
    return bcjl_epr_attack_states(params, rng, code, r).report


def _bit_table(count: int, width: int) -> np.ndarray:
    idx = np.arange(count)
    return ((idx[:, None] >> np.arange(width - 1, -1, -1)) & 1).astype(np.uint8)


def bcjl_opening_acceptance(state: StateVector, code: LinearCode, r, claimed_bit: int,
                            threshold: float = 0.0, rng: np.random.Generator | None = None,
                            samples: int = 0) -> float:
    """Chance that Bob's three opening tests pass on a joint commit-phase state.

    Alice measures her (message, basis) registers and announces the result;
    Bob measures photon i in basis b'_i. The codeword test always passes
    since Alice's register only indexes codewords. Bob's basis string is
    averaged exactly, or over ``samples`` random draws when ``rng`` is given.
    """
    n, k = code.n, code.k
    if state.dims != (1 << k, 1 << n, 1 << n):
        raise ValueError(f"state dims {state.dims} do not match a ({n}, {k}) BCJL state")
    amps = state.amplitudes.reshape(1 << k, 1 << n, 1 << n)
    words = code.codewords                       # (2^k, n)
    bases = _bit_table(1 << n, n)                # (2^n, n)
    outs = _bit_table(1 << n, n)                 # (2^n, n)
    parity_ok = codes.parity_classes(code, r) == claimed_bit
    # mismatch[m, o, i]: outcome bit o_i differs from code bit c_i
    mismatch = words[:, None, :] != outs[None, :, :]

    if rng is None:
        choices = range(1 << n)
    else:
        choices = rng.integers(0, 1 << n, size=samples)
    total = 0.0
    count = 0
    for bp in choices:
        bp_bits = bases[bp]
        meas = np.ones((1, 1), dtype=complex)
        for bit in bp_bits:
            meas = np.kron(meas, Basis(int(bit)).vectors())
        probs = np.abs(amps @ meas.conj()) ** 2          # (m, b, o)
        matched = bases == bp_bits[None, :]              # (b, n)
        n_matched = matched.sum(axis=1)                  # (b,)
        errors = np.einsum("moi,bi->mbo", mismatch.astype(np.int64), matched.astype(np.int64))
        ok = (n_matched[None, :, None] == 0) | (errors <= threshold * n_matched[None, :, None])
        ok &= parity_ok[:, None, None]
        total += float(probs[ok].sum())
        count += 1
    return total / count


# ---------------------------------------------------------------------------
# one-sided two-party computation

@dataclass(frozen=True)
class QueryRecord:
    y: int
    value: int
    disturbance: float


def _measure_output(state: StateVector) -> tuple[int, StateVector, float]:
    """Measure Bob's output register; return outcome, post-state, disturbance."""
    t = state.amplitudes.reshape(state.dims)
    probs = (np.abs(t) ** 2).sum(axis=(0, 1))
    outcome = int(np.argmax(probs))
    if probs[outcome] < 1 - 1e-10:
        raise AttackPreconditionError(
            f"output register is not in an eigenstate (max probability {probs[outcome]:.6g})")
    post = np.zeros_like(t)
    post[..., outcome] = t[..., outcome]
    after = StateVector.from_unnormalized(post.reshape(-1), state.dims)
    disturbance = 1.0 - abs(state.overlap(after))
    return outcome, after, disturbance


def two_party_attack_trace(f_table, x: int, y_start: int = 0,
                           atol: float = 1e-8) -> list[QueryRecord]:
    """Bob evaluates f(x, y) for every y from a single protocol run.

    He runs honestly with y_start, reads f by measuring his output register,
    then rotates his own registers from the y_j end state to the y_{j+1} end
    state and measures again, cycling through his whole input domain.
    """
    f = check_table(f_table)
    ny = f.shape[1]
    views = [alice_view(two_party_protocol(f, x, y)) for y in range(ny)]
    gap = max(np.max(np.abs(v.entries - views[0].entries)) for v in views)
    if gap > atol:
        raise AttackPreconditionError(
            f"Alice's end state depends on y (gap {gap:.3g}); the attack does not apply")

    bob_first = [1, 2, 0]
    order = [(y_start + j) % ny for j in range(ny)]
    state = two_party_protocol(f, x, order[0])
    records = []
    for j, y in enumerate(order):
        value, state, disturbance = _measure_output(state)
        records.append(QueryRecord(y, value, disturbance))
        if j + 1 == len(order):
            break
        here = permute(two_party_protocol(f, x, y), bob_first)
        there = permute(two_party_protocol(f, x, order[j + 1]), bob_first)
        u_bob = relating_unitary(here, there, cut=2, atol=atol)
        state = apply_on(u_bob, state, (1, 2))
    return records


def two_party_attack(f_table, x: int, y_start: int = 0) -> list[tuple[int, int]]:
    """(y, f(x, y)) for every y, sorted by y."""
    recs = two_party_attack_trace(f_table, x, y_start)
    return sorted((r.y, r.value) for r in recs)


__all__ = [
    "AttackReport", "BCJLAttackResult", "QueryRecord",
    "bcjl_epr_attack", "bcjl_epr_attack_states", "bcjl_opening_acceptance",
    "ideal_cheat_unitary", "optimal_cheat_unitary", "run_commitment_attack",
    "two_party_attack", "two_party_attack_trace",
]
