"""Seeded, splittable random streams.

Every stochastic routine takes an explicit ``numpy.random.Generator``. Trials
get independent child streams spawned from one master seed, so results do
not depend on how trials are scheduled.
"""

import numpy as np


def master(seed: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(int(seed) & 0xFFFFFFFFFFFFFFFF)


def trial_streams(seed: int, count: int) -> list[np.random.Generator]:
    return [np.random.Generator(np.random.PCG64(s)) for s in master(seed).spawn(count)]


def stream(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(master(seed)))
