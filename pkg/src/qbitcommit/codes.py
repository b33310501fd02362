"""Binary linear codes over GF(2) at enumeration scale.

Bit strings are numpy ``uint8`` arrays of 0/1. :func:`bits` converts the
string form ``"1010"`` used in configs and logs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import CapExceededError, CodeSearchError

#: Exhaustive minimum-distance computation enumerates 2**k codewords.
MAX_K = 16
MAX_N = 32


def bits(s) -> np.ndarray:
    """Coerce ``"0110"``, a list of ints, or an array to a uint8 bit array."""
    if isinstance(s, str):
        arr = np.array([int(ch) for ch in s.strip()], dtype=np.uint8)
    else:
        arr = np.asarray(s).astype(np.uint8).reshape(-1)
    if np.any(arr > 1):
        raise ValueError("bit strings may only contain 0 and 1")
    return arr


def bitstring(arr) -> str:
    return "".join(str(int(x)) for x in np.asarray(arr).reshape(-1))


def gf2_rank(mat) -> int:
    """Rank over GF(2) by Gaussian elimination."""
    m = np.array(mat, dtype=np.uint8) % 2
    rows, cols = m.shape
    rank = 0
    for col in range(cols):
        pivots = np.nonzero(m[rank:, col])[0]
        if pivots.size == 0:
            continue
        piv = rank + pivots[0]
        m[[rank, piv]] = m[[piv, rank]]
        others = np.nonzero(m[:, col])[0]
        others = others[others != rank]
        m[others] ^= m[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def dot_parity(c, r) -> int:
    """Parity of the bitwise AND of two equal-length bit strings."""
    c, r = bits(c), bits(r)
    if c.size != r.size:
        raise ValueError(f"length mismatch: {c.size} vs {r.size}")
    return int(np.bitwise_and(c, r).sum() % 2)


@dataclass(frozen=True, eq=False)
class LinearCode:
    """Binary linear [n, k] code with a full-rank k x n generator matrix."""

    generator: np.ndarray

    def __post_init__(self):
        g = np.array(self.generator, dtype=np.uint8)
        if g.ndim != 2 or g.shape[0] < 1 or np.any(g > 1):
            raise ValueError("generator must be a nonempty 2-D 0/1 matrix")
        k, n = g.shape
        if k > n:
            raise ValueError(f"k={k} exceeds n={n}")
        if gf2_rank(g) != k:
            raise ValueError(f"generator does not have full rank {k} over GF(2)")
        g.setflags(write=False)
        object.__setattr__(self, "generator", g)

    @property
    def n(self) -> int:
        return self.generator.shape[1]

    @property
    def k(self) -> int:
        return self.generator.shape[0]

    @property
    def rate(self) -> float:
        return self.k / self.n

    @cached_property
    def codewords(self) -> np.ndarray:
        """All 2**k codewords; row m is the encoding of message m (MSB first)."""
        if self.k > MAX_K:
            raise CapExceededError(f"k={self.k} exceeds enumeration cap MAX_K={MAX_K}")
        idx = np.arange(1 << self.k)
        msgs = ((idx[:, None] >> np.arange(self.k - 1, -1, -1)) & 1).astype(np.uint8)
        return (msgs.astype(np.int64) @ self.generator.astype(np.int64) % 2).astype(np.uint8)

    @cached_property
    def min_distance(self) -> int:
        return int(self.codewords[1:].sum(axis=1).min())

    def to_text(self) -> str:
        rows = "\n".join(bitstring(row) for row in self.generator)
        return f"{self.n} {self.k}\n{rows}\n"

    @classmethod
    def from_text(cls, text: str) -> "LinearCode":
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        n, k = (int(t) for t in lines[0].split())
        rows = [bits(ln) for ln in lines[1:]]
        if len(rows) != k or any(row.size != n for row in rows):
            raise ValueError(f"expected {k} rows of length {n}")
        return cls(np.array(rows))


def hamming_7_4() -> LinearCode:
    return LinearCode(np.array([
        [1, 0, 0, 0, 0, 1, 1],
        [0, 1, 0, 0, 1, 0, 1],
        [0, 0, 1, 0, 1, 1, 0],
        [0, 0, 0, 1, 1, 1, 1],
    ]))


def generate_code(n: int, k: int, min_d: int, rng: np.random.Generator,
                  max_attempts: int = 2000) -> LinearCode:
    """Draw random generator matrices until one has rank k and distance >= min_d."""
    if not (1 <= k <= n):
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    if n > MAX_N or k > MAX_K:
        raise CapExceededError(
            f"(n={n}, k={k}) outside enumeration caps n <= {MAX_N}, k <= {MAX_K}")
    if min_d < 1:
        raise ValueError(f"min_d must be >= 1, got {min_d}")
    # skip the search when the Singleton bound already rules it out
    if min_d <= n - k + 1:
        for _ in range(max_attempts):
            g = rng.integers(0, 2, size=(k, n), dtype=np.uint8)
            if gf2_rank(g) != k:
                continue
            code = LinearCode(g)
            if code.min_distance >= min_d:
                return code
    raise CodeSearchError(
        f"no ({n}, {k}, d>={min_d}) code found in {max_attempts} random draws")


def encode_message(code: LinearCode, m) -> np.ndarray:
    """Codeword m . G over GF(2)."""
    m = bits(m)
    if m.size != code.k:
        raise ValueError(f"message length {m.size} != k={code.k}")
    return (m.astype(np.int64) @ code.generator.astype(np.int64) % 2).astype(np.uint8)


def is_codeword(code: LinearCode, c) -> bool:
    c = bits(c)
    if c.size != code.n:
        raise ValueError(f"word length {c.size} != n={code.n}")
    return gf2_rank(np.vstack([code.generator, c])) == code.k


def parity_classes(code: LinearCode, r) -> np.ndarray:
    """Parity <c, r> for every codeword, indexed by message."""
    r = bits(r)
    if r.size != code.n:
        raise ValueError(f"r has length {r.size}, expected {code.n}")
    return (code.codewords.astype(np.int64) @ r.astype(np.int64) % 2).astype(np.uint8)


def sample_codeword_with_parity(code: LinearCode, r, target: int,
                                rng: np.random.Generator) -> np.ndarray:
    """Uniformly random codeword c with <c, r> = target."""
    admissible = np.nonzero(parity_classes(code, r) == target)[0]
    if admissible.size == 0:
        raise ValueError(
            f"no codeword has parity {target} against r={bitstring(r)} "
            "(r is orthogonal to the code)")
    return code.codewords[rng.choice(admissible)].copy()
