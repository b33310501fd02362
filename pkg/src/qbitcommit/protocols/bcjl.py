"""The BCJL commitment: a linear code plus polarization-encoded codeword bits.

Honest runs are simulated photon by photon (honest states are products).
The joint-state helpers at the bottom build Bob's reduced matrices and the
entangled commit states used by the delayed-measurement attack; those are
exponential in n and capped accordingly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import codes
from ..codes import LinearCode, bits, dot_parity
from ..encode import Basis, NoiseModel, apply_noise, encode_bit, measure
from ..errors import CapExceededError
from ..qmath import MAX_OPERATOR_DIM, DensityMatrix, StateVector, fidelity
from .transcript import Phase, ProtocolTranscript

CODE_RATE = 0.52
THRESHOLD_FACTOR = 1.4

#: joint-state simulation caps (state dimension 2**(2n + k))
MAX_JOINT_N = 10
MAX_JOINT_K = 6


@dataclass(frozen=True)
class BCJLParams:
    """Code size, channel noise and the matched-basis error allowance.

    ``min_d`` is the distance Bob insists on when drawing the code. The
    asymptotic requirement d/n > 10 epsilon cannot be met by codes this
    small, so it defaults to 1 and the realized distance is logged.
    """

    n: int
    k: int
    epsilon: float = 0.0
    threshold_factor: float = THRESHOLD_FACTOR
    min_d: int = 1

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise ValueError(f"need 1 <= k <= n, got n={self.n}, k={self.k}")
        NoiseModel(self.epsilon)

    @classmethod
    def at_standard_rate(cls, n: int, epsilon: float = 0.0, **kw) -> "BCJLParams":
        """k chosen as the integer nearest to 0.52 n."""
        return cls(n=n, k=max(1, int(round(CODE_RATE * n))), epsilon=epsilon, **kw)

    @property
    def rate(self) -> float:
        return self.k / self.n

    @property
    def threshold(self) -> float:
        return self.threshold_factor * self.epsilon

    @property
    def noise(self) -> NoiseModel:
        return NoiseModel(self.epsilon)


@dataclass(frozen=True)
class BCJLVerdict:
    accepted: bool
    codeword_ok: bool
    error_ok: bool
    parity_ok: bool
    matched: int
    errors: int
    claimed_bit: int
    code_distance: int

    @property
    def error_rate(self) -> float:
        return self.errors / self.matched if self.matched else 0.0


def error_test(matched: int, errors: int, threshold: float) -> bool:
    """Matched-basis disagreement rate within the allowance.

    The comparison is inclusive so that a noiseless channel (threshold 0)
    accepts error-free runs; with no matched positions the test is vacuous.
    """
    return matched == 0 or errors <= threshold * matched


def choose_r(code: LinearCode, rng: np.random.Generator, max_attempts: int = 10000) -> np.ndarray:
    """Random nonzero r that splits the code into two parity classes.

    An r orthogonal to the whole code would make bit 1 uncommittable, and
    choosing it would tell Bob the bit, so Alice redraws.
    """
    for _ in range(max_attempts):
        r = rng.integers(0, 2, size=code.n, dtype=np.uint8)
        if r.any() and codes.parity_classes(code, r).any():
            return r
    raise RuntimeError("could not draw an r outside the dual code")


def bcjl_run(params: BCJLParams, committed_bit: int, rng: np.random.Generator,
             alice_honest: bool = True, code: LinearCode | None = None,
             r=None) -> tuple[ProtocolTranscript, BCJLVerdict]:
    """One full commit/open/verify run.

    A dishonest Alice here is the classical kind: she follows the commit
    phase for ``committed_bit`` and then claims the other bit at opening.
    """
    if committed_bit not in (0, 1):
        raise ValueError(f"committed_bit must be 0 or 1, got {committed_bit!r}")
    n = params.n
    t = ProtocolTranscript("bcjl")

    # Bob announces G, Alice announces r
    if code is None:
        code = codes.generate_code(n, params.k, params.min_d, rng)
    elif (code.n, code.k) != (n, params.k):
        raise ValueError(f"code is ({code.n}, {code.k}), params ask for ({n}, {params.k})")
    t.send("bob", "G", code.generator.reshape(-1))
    r = choose_r(code, rng) if r is None else bits(r)
    if not r.any():
        raise ValueError("r must be nonzero")
    t.send("alice", "r", r)

    # Alice encodes a codeword of the right parity into photons
    c = codes.sample_codeword_with_parity(code, r, committed_bit, rng)
    b = rng.integers(0, 2, size=n, dtype=np.uint8)
    photons = [apply_noise(encode_bit(int(ci), int(bi)).density(), params.noise, rng)
               for ci, bi in zip(c, b)]

    # Bob measures every photon in a random basis right away
    b_prime = rng.integers(0, 2, size=n, dtype=np.uint8)
    outcomes = np.array([measure(ph, Basis(int(bp)), rng)[0]
                         for ph, bp in zip(photons, b_prime)], dtype=np.uint8)

    t.advance(Phase.OPENED)
    claimed = committed_bit if alice_honest else 1 - committed_bit
    t.send("alice", "c", c)
    t.send("alice", "b", b)
    t.send("alice", "bit", [claimed])

    matched = b == b_prime
    n_matched = int(matched.sum())
    n_errors = int((outcomes[matched] != c[matched]).sum())
    verdict = BCJLVerdict(
        accepted=False,
        codeword_ok=codes.is_codeword(code, c),
        error_ok=error_test(n_matched, n_errors, params.threshold),
        parity_ok=dot_parity(c, r) == claimed,
        matched=n_matched,
        errors=n_errors,
        claimed_bit=claimed,
        code_distance=code.min_distance,
    )
    accepted = verdict.codeword_ok and verdict.error_ok and verdict.parity_ok
    verdict = BCJLVerdict(**{**verdict.__dict__, "accepted": accepted})
    t.advance(Phase.VERIFIED if accepted else Phase.REJECTED)
    return t, verdict


# ---------------------------------------------------------------------------
# joint-state views (small n only)

def _check_joint_caps(n: int, k: int, need_alice_operator: bool = False):
    if n > MAX_JOINT_N or k > MAX_JOINT_K:
        raise CapExceededError(
            f"joint-state simulation capped at n <= {MAX_JOINT_N}, k <= {MAX_JOINT_K}; "
            f"got n={n}, k={k}")
    if need_alice_operator and (1 << (n + k)) > MAX_OPERATOR_DIM:
        raise CapExceededError(
            f"Alice's register has dimension 2**(n+k) = {1 << (n + k)} > "
            f"MAX_OPERATOR_DIM={MAX_OPERATOR_DIM} (need n + k <= 12)")


def photon_qubit_matrix(c: int, epsilon: float = 0.0) -> np.ndarray:
    """Bob's single-photon state for code bit c, averaged over Alice's basis."""
    rho = sum(np.outer(v, v.conj()) for v in
              (encode_bit(c, 0).amplitudes, encode_bit(c, 1).amplitudes)) / 2
    p = NoiseModel(epsilon).depolarizing_strength
    return (1 - p) * rho + p * np.eye(2) / 2


def bob_reduced_matrices(code: LinearCode, r, epsilon: float = 0.0) -> tuple[DensityMatrix, DensityMatrix]:
    """Bob's photon density matrices before opening, for committed bit 0 and 1.

    Alice's codeword (within its parity class) and her basis string are
    uniformly random and unknown to Bob.
    """
    _check_joint_caps(code.n, code.k)
    sigma = [photon_qubit_matrix(0, epsilon), photon_qubit_matrix(1, epsilon)]
    parity = codes.parity_classes(code, r)
    if parity.all() or not parity.any():
        raise ValueError("r must split the code into two nonempty parity classes")
    out = []
    for p in (0, 1):
        acc = np.zeros((1 << code.n, 1 << code.n), dtype=complex)
        words = code.codewords[parity == p]
        for word in words:
            term = np.ones((1, 1), dtype=complex)
            for ci in word:
                term = np.kron(term, sigma[ci])
            acc += term
        out.append(DensityMatrix(acc / len(words)))
    return out[0], out[1]


def concealment_fidelity(code: LinearCode, r, epsilon: float = 0.0) -> float:
    """F(rho0, rho1) of Bob's pre-opening states; 1 means perfectly concealing."""
    rho0, rho1 = bob_reduced_matrices(code, r, epsilon)
    return fidelity(rho0, rho1)


def photon_amplitudes(code: LinearCode) -> np.ndarray:
    """Row (m, b) holds the n-photon product state for codeword m in bases b.

    Shape ``(2**k * 2**n, 2**n)``; row index is ``m * 2**n + b`` with both
    m and b read MSB-first.
    """
    n, k = code.n, code.k
    idx_b = np.arange(1 << n)
    bases = ((idx_b[:, None] >> np.arange(n - 1, -1, -1)) & 1).astype(np.uint8)
    words = np.repeat(code.codewords, 1 << n, axis=0)
    bases = np.tile(bases, (1 << k, 1))
    table = np.stack([Basis.RECTILINEAR.vectors().T, Basis.DIAGONAL.vectors().T])
    amps = np.ones((words.shape[0], 1), dtype=complex)
    for i in range(n):
        v = table[bases[:, i], words[:, i]]          # (rows, 2)
        amps = (amps[:, :, None] * v[:, None, :]).reshape(words.shape[0], -1)
    return amps


def commit_state(code: LinearCode, r, parity: int,
                 photons: np.ndarray | None = None) -> StateVector:
    """Entangled honest commit state with Alice keeping (m, b) coherently.

    Subsystems: Alice's message register (2**k), Alice's basis register
    (2**n), Bob's photons (2**n).
    """
    _check_joint_caps(code.n, code.k)
    n, k = code.n, code.k
    photons = photon_amplitudes(code) if photons is None else photons
    mask = np.repeat(codes.parity_classes(code, r) == parity, 1 << n)
    if not mask.any():
        raise ValueError(f"no codeword has parity {parity} against r")
    amps = np.where(mask[:, None], photons, 0.0)
    return StateVector.from_unnormalized(amps.reshape(-1), (1 << k, 1 << n, 1 << n))
