"""Toy one-sided two-party computation of f(x, y).

Registers: Alice's input X, Bob's input Y, Bob's output O. The computation
itself is a single oracle gate |x, y, o> -> |x, y, o + f(x, y)>, standing
in for whatever interaction a real protocol would use. What matters for the
attack is the end state: Bob's output register holds f(x, y) exactly, and
Alice's reduced state does not depend on y.
"""

from __future__ import annotations

import numpy as np

from ..qmath import StateVector, UnitaryOp, apply_on, reduced_state

MAX_DOMAIN = 8
LEDGER = ("alice", "bob", "bob")


def check_table(f_table) -> np.ndarray:
    f = np.asarray(f_table)
    if f.ndim != 2 or not np.issubdtype(f.dtype, np.integer):
        raise ValueError("f_table must be a 2-D integer array indexed [x, y]")
    if f.shape[0] > MAX_DOMAIN or f.shape[1] > MAX_DOMAIN:
        raise ValueError(f"domains are capped at {MAX_DOMAIN}, got {f.shape}")
    if f.min() < 0:
        raise ValueError("f values must be non-negative")
    return f


def output_dim(f_table) -> int:
    return max(2, int(np.max(f_table)) + 1)


def oracle_gate(f_table) -> UnitaryOp:
    """Permutation |x, y, o> -> |x, y, (o + f(x, y)) mod d_out>."""
    f = check_table(f_table)
    nx, ny = f.shape
    do = output_dim(f)
    total = nx * ny * do
    u = np.zeros((total, total), dtype=complex)
    for x in range(nx):
        for y in range(ny):
            for o in range(do):
                src = (x * ny + y) * do + o
                dst = (x * ny + y) * do + (o + f[x, y]) % do
                u[dst, src] = 1.0
    return UnitaryOp(u)


def two_party_protocol(f_table, x: int, y: int) -> StateVector:
    """Final joint state over (X, Y, O); see ``LEDGER`` for ownership."""
    f = check_table(f_table)
    nx, ny = f.shape
    if not (0 <= x < nx and 0 <= y < ny):
        raise ValueError(f"inputs out of range: x={x}, y={y} for table {f.shape}")
    dims = (nx, ny, output_dim(f))
    start = StateVector.basis((x, y, 0), dims)
    return apply_on(oracle_gate(f), start, (0, 1, 2))


def alice_view(state: StateVector):
    return reduced_state(state, [0])
