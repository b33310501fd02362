"""Classical commitment from a one-way function, and its exhaustive-search break.

The mixing function here is a bijection on 16-bit words built from
multiply/xor-shift/rotate rounds. It looks scrambled but its whole domain is
65536 values, so Bob can invert any commitment by brute force.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from ..errors import ProtocolError
from .transcript import Phase, ProtocolTranscript

WORD_BITS = 16
MASK = (1 << WORD_BITS) - 1
_ROUND_KEYS = (0xA5C3, 0x3C96, 0x7E11)


def toy_one_way(x):
    """Public 16-bit mixing function; works on ints and integer numpy arrays."""
    x = np.asarray(x, dtype=np.uint32) & MASK
    for key in _ROUND_KEYS:
        x = (x * 0x6B43) & MASK          # odd multiplier: invertible mod 2**16
        x = x ^ (x >> 7)
        x = ((x << 5) | (x >> 11)) & MASK
        x = x ^ key
    return int(x) if x.ndim == 0 else x


def _word_bits(v: int) -> list[int]:
    return [int(ch) for ch in format(int(v), f"0{WORD_BITS}b")]


def classical_commit(bit: int, rng: np.random.Generator,
                     f: Callable = toy_one_way) -> tuple[ProtocolTranscript, int]:
    """Commit phase: Alice picks x with parity ``bit`` and sends y = f(x)."""
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit!r}")
    x = int(rng.integers(0, 1 << (WORD_BITS - 1))) * 2 + bit
    t = ProtocolTranscript("classical")
    t.send("alice", "y", _word_bits(f(x)))
    return t, x


def classical_open(transcript: ProtocolTranscript, x: int) -> None:
    transcript.advance(Phase.OPENED)
    transcript.send("alice", "x", _word_bits(x))


def classical_verify(transcript: ProtocolTranscript, x: int | None = None,
                     f: Callable = toy_one_way) -> tuple[Phase, int]:
    """Bob checks f(x) == y and reads the bit off the parity of x.

    ``x`` defaults to the value Alice revealed in the transcript.
    """
    if transcript.phase is not Phase.OPENED:
        raise ProtocolError(f"cannot verify a transcript in phase {transcript.phase.value}")
    if x is None:
        x = int("".join(map(str, transcript.get("x"))), 2)
    y = int("".join(map(str, transcript.get("y", Phase.COMMIT))), 2)
    ok = f(x) == y
    verdict = Phase.VERIFIED if ok else Phase.REJECTED
    transcript.advance(verdict)
    return verdict, x & 1


def invert_by_search(y: int, f: Callable = toy_one_way) -> np.ndarray:
    """All x in the 16-bit domain with f(x) == y."""
    domain = np.arange(1 << WORD_BITS, dtype=np.uint32)
    return np.nonzero(f(domain) == y)[0]


def break_commitment(transcript: ProtocolTranscript, f: Callable = toy_one_way) -> int:
    """Recover the committed bit from the commit-phase message alone."""
    y = int("".join(map(str, transcript.get("y", Phase.COMMIT))), 2)
    pre = invert_by_search(y, f)
    parities = set(int(p) & 1 for p in pre)
    if len(parities) != 1:
        raise ValueError(f"preimages of y={y} do not share a parity")
    return parities.pop()
