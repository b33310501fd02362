"""Protocol transcripts: phase state machine plus an ordered message log."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from ..codes import bits
from ..errors import ProtocolError
from ..qmath import StateVector


class Phase(enum.Enum):
    COMMIT = "commit"
    OPENED = "opened"
    VERIFIED = "verified"
    REJECTED = "rejected"


_NEXT = {
    Phase.COMMIT: {Phase.OPENED},
    Phase.OPENED: {Phase.VERIFIED, Phase.REJECTED},
    Phase.VERIFIED: set(),
    Phase.REJECTED: set(),
}

PARTIES = ("alice", "bob", "channel")


def to_hex(payload) -> str:
    """``<nbits>:<hex>`` with the bits read as a big-endian integer."""
    b = bits(payload)
    value = int("".join(map(str, b)), 2) if b.size else 0
    width = max(1, (b.size + 3) // 4)
    return f"{b.size}:{value:0{width}x}"


def from_hex(text: str) -> np.ndarray:
    nbits, hexpart = text.split(":")
    nbits = int(nbits)
    if nbits == 0:
        return np.zeros(0, dtype=np.uint8)
    value = int(hexpart, 16)
    return bits(format(value, f"0{nbits}b"))


@dataclass(frozen=True)
class Message:
    phase: Phase
    party: str
    label: str
    payload: tuple[int, ...]

    def line(self) -> str:
        return f"{self.phase.value}\t{self.party}\t{self.label}\t{to_hex(self.payload)}"


@dataclass
class ProtocolTranscript:
    """Record of one commitment run.

    ``quantum_registers`` optionally holds the joint pure state, and
    ``ledger`` assigns each of its subsystems to a party.
    """

    protocol: str
    phase: Phase = Phase.COMMIT
    messages: list[Message] = field(default_factory=list)
    quantum_registers: StateVector | None = None
    ledger: tuple[str, ...] = ()

    def __post_init__(self):
        if self.quantum_registers is not None:
            self.set_registers(self.quantum_registers, self.ledger)

    def set_registers(self, state: StateVector, ledger) -> None:
        ledger = tuple(ledger)
        if len(ledger) != len(state.dims):
            raise ProtocolError(
                f"ledger names {len(ledger)} owners for {len(state.dims)} subsystems")
        unknown = set(ledger) - set(PARTIES)
        if unknown:
            raise ProtocolError(f"unknown owners in ledger: {sorted(unknown)}")
        self.quantum_registers = state
        self.ledger = ledger

    def send(self, party: str, label: str, payload) -> None:
        if party not in PARTIES:
            raise ProtocolError(f"unknown party {party!r}")
        if self.phase in (Phase.VERIFIED, Phase.REJECTED):
            raise ProtocolError(f"transcript already {self.phase.value}")
        self.messages.append(Message(self.phase, party, label, tuple(int(x) for x in bits(payload))))

    def advance(self, phase: Phase) -> None:
        if phase not in _NEXT[self.phase]:
            raise ProtocolError(f"illegal transition {self.phase.value} -> {phase.value}")
        self.phase = phase

    def get(self, label: str, phase: Phase | None = None) -> np.ndarray:
        """Payload of the most recent message with this label."""
        for msg in reversed(self.messages):
            if msg.label == label and (phase is None or msg.phase is phase):
                return np.array(msg.payload, dtype=np.uint8)
        raise KeyError(label)

    def to_log(self) -> str:
        return "".join(msg.line() + "\n" for msg in self.messages)

    @staticmethod
    def parse_log(text: str) -> list[Message]:
        out = []
        for line in text.splitlines():
            if not line.strip():
                continue
            phase, party, label, payload = line.split("\t")
            out.append(Message(Phase(phase), party, label,
                               tuple(int(x) for x in from_hex(payload))))
        return out
