"""General two-party commitment as a script of local unitaries.

Registers are numbered with Alice's initial registers first (the ones
carrying ``|b>_A``), followed by the registers of ``|v>``. Each step lets one
party act on registers it currently owns and then hand some of them over.
Classical messages and measurements are assumed to be purified into
registers already, so a script is fully described by its unitaries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from ..errors import ProtocolError
from ..qmath import (MAX_OPERATOR_DIM, StateVector, UnitaryOp, apply_on,
                     random_unitary, tensor)
from .transcript import ProtocolTranscript

ALICE, BOB = "alice", "bob"


@dataclass(frozen=True)
class Step:
    party: str
    targets: tuple[int, ...]
    unitary: UnitaryOp
    transfer: tuple[int, ...] = ()


@dataclass(frozen=True)
class UnitaryScript:
    """Commit phase of a generic scheme.

    Attributes:
        initial_a: Alice's starting states for bit 0 and bit 1.
        initial_b: the fixed state |v> of the remaining registers.
        steps: the fixed, finite sequence of local operations.
        v_owners: who holds each register of |v> at the start (default Bob).
    """

    initial_a: tuple[StateVector, StateVector]
    initial_b: StateVector
    steps: tuple[Step, ...] = ()
    v_owners: tuple[str, ...] | None = None
    _owner_history: tuple[tuple[str, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        a0, a1 = self.initial_a
        if a0.dims != a1.dims:
            raise ProtocolError(f"Alice's initial states differ in dims: {a0.dims} vs {a1.dims}")
        object.__setattr__(self, "steps", tuple(self.steps))
        v_owners = self.v_owners or (BOB,) * len(self.initial_b.dims)
        if len(v_owners) != len(self.initial_b.dims):
            raise ProtocolError("v_owners must name one owner per register of |v>")
        object.__setattr__(self, "v_owners", tuple(v_owners))
        owners = [ALICE] * len(a0.dims) + list(v_owners)
        if set(owners) - {ALICE, BOB}:
            raise ProtocolError(f"owners must be {ALICE!r} or {BOB!r}")
        history = [tuple(owners)]
        dims = self.dims
        for i, step in enumerate(self.steps):
            if step.party not in (ALICE, BOB):
                raise ProtocolError(f"step {i}: unknown party {step.party!r}")
            for reg in step.targets + step.transfer:
                if not 0 <= reg < len(dims):
                    raise ProtocolError(f"step {i}: register {reg} does not exist")
                if owners[reg] != step.party:
                    raise ProtocolError(
                        f"step {i}: {step.party} acts on or sends register {reg}, "
                        f"which is held by {owners[reg]}")
            want = int(np.prod([dims[t] for t in step.targets]))
            if step.unitary.dim != want:
                raise ProtocolError(
                    f"step {i}: unitary dim {step.unitary.dim} != target dim {want}")
            other = BOB if step.party == ALICE else ALICE
            for reg in step.transfer:
                owners[reg] = other
            history.append(tuple(owners))
        object.__setattr__(self, "_owner_history", tuple(history))

    @property
    def dims(self) -> tuple[int, ...]:
        return self.initial_a[0].dims + self.initial_b.dims

    @property
    def final_owners(self) -> tuple[str, ...]:
        return self._owner_history[-1]

    def owners_after(self, n_steps: int) -> tuple[str, ...]:
        return self._owner_history[n_steps]

    @property
    def alice_registers(self) -> list[int]:
        """Registers Alice holds at the end of the commit phase."""
        return [i for i, o in enumerate(self.final_owners) if o == ALICE]

    def initial_state(self, bit: int) -> StateVector:
        if bit not in (0, 1):
            raise ValueError(f"bit must be 0 or 1, got {bit!r}")
        return tensor(self.initial_a[bit], self.initial_b)


def script_states(script: UnitaryScript, bit: int) -> Iterator[tuple[int, StateVector]]:
    """Yield (steps applied, joint state), starting with the initial state."""
    state = script.initial_state(bit)
    yield 0, state
    for i, step in enumerate(script.steps, start=1):
        state = apply_on(step.unitary, state, step.targets)
        yield i, state


def script_execute(script: UnitaryScript, committed_bit: int) -> StateVector:
    """Joint state at the end of the commit phase, in register order."""
    for _, state in script_states(script, committed_bit):
        pass
    return state


def embed(u: UnitaryOp, dims: Sequence[int], targets: Sequence[int]) -> np.ndarray:
    """Full-space matrix of ``u`` acting on ``targets``."""
    dims = tuple(dims)
    total = int(np.prod(dims))
    n = len(dims)
    targets = list(targets)
    order = targets + [i for i in range(n) if i not in targets]
    dt = int(np.prod([dims[t] for t in targets]))
    t = np.eye(total, dtype=complex).reshape(dims + (total,))
    t = t.transpose(order + [n]).reshape(dt, -1)
    t = (u.entries @ t).reshape([dims[i] for i in order] + [total])
    return t.transpose(list(np.argsort(order)) + [n]).reshape(total, total)


def compile_unitary(script: UnitaryScript) -> UnitaryOp:
    """The single unitary U on the whole space equivalent to all steps."""
    total = int(np.prod(script.dims))
    if total > MAX_OPERATOR_DIM:
        raise ValueError(f"total dimension {total} too large to compile")
    u = np.eye(total, dtype=complex)
    for step in script.steps:
        u = embed(step.unitary, script.dims, step.targets) @ u
    return UnitaryOp(u)


def script_verify(final: StateVector, script: UnitaryScript, claimed_bit: int) -> float:
    """Probability that Bob's projective check on the honest state accepts.

    Bob holds every register once Alice opens, and knows U, so the strongest
    check is the projector onto ``U(|claimed>_A (x) |v>)``.
    """
    honest = script_execute(script, claimed_bit)
    if final.dims != honest.dims:
        raise ValueError(f"state dims {final.dims} do not match script dims {honest.dims}")
    return float(min(1.0, abs(honest.overlap(final)) ** 2))


def script_transcript(script: UnitaryScript, committed_bit: int) -> ProtocolTranscript:
    """Transcript of an honest commit phase; transfers logged as register masks."""
    t = ProtocolTranscript("unitary-script")
    for i, step in enumerate(script.steps):
        if step.transfer:
            mask = np.zeros(len(script.dims), dtype=np.uint8)
            mask[list(step.transfer)] = 1
            t.send(step.party, f"transfer{i}", mask)
    t.set_registers(script_execute(script, committed_bit), script.final_owners)
    return t


# ---------------------------------------------------------------------------
# script families used by the tests, demos and the experiment harness

def _ket(vec) -> StateVector:
    return StateVector.from_unnormalized(np.asarray(vec, dtype=complex), (len(vec),))


def random_three_qubit_script(rng: np.random.Generator) -> UnitaryScript:
    """Alice's bit qubit, a channel qubit, and Bob's qubit; three random rounds.

    Alice scrambles (bit, channel) and sends the channel qubit, Bob scrambles
    (channel, his qubit) and returns it, Alice scrambles again and sends it
    for good. Bob's final view generally depends on the bit.
    """
    zero = _ket([1, 0])
    a = (zero, _ket([0, 1]))
    v = StateVector.basis(0, (2, 2))       # registers 1 (channel), 2 (Bob)
    steps = (
        Step(ALICE, (0, 1), random_unitary(4, rng), transfer=(1,)),
        Step(BOB, (1, 2), random_unitary(4, rng), transfer=(1,)),
        Step(ALICE, (0, 1), random_unitary(4, rng), transfer=(1,)),
    )
    return UnitaryScript(a, v, steps, v_owners=(ALICE, BOB))


def random_concealing_script(rng: np.random.Generator, ancilla_dim: int = 2,
                             channel_dim: int = 2) -> UnitaryScript:
    """Random script whose commit phase hides the bit perfectly.

    Alice entangles a private ancilla with the channel through a state that
    does not depend on the bit, mixes bit and ancilla privately, and sends the
    channel; Bob then scrambles channel plus his own qubit.
    Registers: 0 bit, 1 ancilla, 2 channel, 3 Bob.
    """
    bit0 = tensor(_ket([1, 0]), StateVector.basis(0, (ancilla_dim,)))
    bit1 = tensor(_ket([0, 1]), StateVector.basis(0, (ancilla_dim,)))
    v = StateVector.basis(0, (channel_dim, 2))
    prep = random_unitary(ancilla_dim * channel_dim, rng)
    steps = (
        Step(ALICE, (1, 2), prep, transfer=(2,)),
        Step(ALICE, (0, 1), random_unitary(2 * ancilla_dim, rng)),
        Step(BOB, (2, 3), random_unitary(2 * channel_dim, rng)),
    )
    return UnitaryScript((bit0, bit1), v, steps, v_owners=(ALICE, BOB))


def _controlled(u: np.ndarray) -> UnitaryOp:
    d = u.shape[0]
    out = np.eye(2 * d, dtype=complex)
    out[d:, d:] = u
    return UnitaryOp(out)


def bb84_commitment_script() -> UnitaryScript:
    """Single-photon commitment in a coherently chosen basis.

    Alice's basis register starts in |+>; bit b and basis choice are written
    into the channel qubit as the polarization state, then the qubit is sent.
    Registers: 0 bit, 1 basis, 2 channel.
    """
    plus = _ket([1, 1])
    a = (tensor(_ket([1, 0]), plus), tensor(_ket([0, 1]), plus))
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    h = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    steps = (
        Step(ALICE, (0, 2), _controlled(x)),
        Step(ALICE, (1, 2), _controlled(h), transfer=(2,)),
    )
    return UnitaryScript(a, StateVector.basis(0, (2,)), steps, v_owners=(ALICE,))


def interpolating_script(s: float) -> UnitaryScript:
    """Family from fully revealing (s = 0) to perfectly concealing (s = 1).

    Bit 0 sends |0>; bit 1 sends cos(t)|0> + sin(t)|1> with t = (1 - s) pi/2.
    Registers: 0 bit, 1 channel.
    """
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"s must lie in [0, 1], got {s}")
    t = (1.0 - s) * np.pi / 2
    ry = np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]], dtype=complex)
    a = (_ket([1, 0]), _ket([0, 1]))
    steps = (Step(ALICE, (0, 1), _controlled(ry), transfer=(1,)),)
    return UnitaryScript(a, StateVector.basis(0, (2,)), steps, v_owners=(ALICE,))


def revealing_script() -> UnitaryScript:
    """Alice copies her bit onto the channel qubit and sends it."""
    return interpolating_script(0.0)


def silent_script(rng: np.random.Generator | None = None) -> UnitaryScript:
    """Alice keeps everything; Bob's qubit never interacts with hers."""
    steps = ()
    if rng is not None:
        steps = (Step(ALICE, (0,), random_unitary(2, rng)),
                 Step(BOB, (1,), random_unitary(2, rng)))
    return UnitaryScript((_ket([1, 0]), _ket([0, 1])), StateVector.basis(0, (2,)), steps)
