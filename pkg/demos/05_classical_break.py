# %% [markdown]
# # A classical commitment with a small one-way function
#
# Alice commits to a bit by publishing f(x) for a random x whose low bit is
# the committed bit. Security rests entirely on f being hard to invert. With
# a 16-bit domain Bob simply tries every input.

# %%
import time

import numpy as np

from qbitcommit.protocols import classical

rng = np.random.default_rng(9)
t, x = classical.classical_commit(1, rng)
print(t.to_log())

start = time.perf_counter()
bit = classical.break_commitment(t)
print(f"recovered bit {bit} in {time.perf_counter() - start:.4f} s, before opening")

# %%
classical.classical_open(t, x)
print(classical.classical_verify(t))
