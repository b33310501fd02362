# %% [markdown]
# # Honest runs of the coded BB84 commitment
#
# Bob picks a random linear code, Alice picks a parity string r and commits
# to bit x by sending a random codeword c with <c, r> = x, one photon per
# code bit in a random basis. Bob measures each photon right away in his own
# random basis. At opening Alice reveals c and her bases, and Bob checks the
# codeword, the error rate on matching bases, and the parity.

# %%
import numpy as np

from qbitcommit.protocols import bcjl
from qbitcommit.streams import trial_streams

params = bcjl.BCJLParams.at_standard_rate(20, epsilon=0.0)
print(params)
t, v = bcjl.bcjl_run(params, 1, np.random.default_rng(3))
print(v)
print(t.to_log())

# %% [markdown]
# On a noiseless channel every honest opening is accepted. With noise the
# error allowance is 1.4 epsilon, which at n = 20 is tight: with about ten
# matched positions the allowance is below one error, so a single flip fails.

# %%
for eps in (0.0, 0.02, 0.05):
    p = bcjl.BCJLParams.at_standard_rate(20, eps)
    acc = [bcjl.bcjl_run(p, int(r.integers(2)), r)[1].accepted
           for r in trial_streams(11, 300)]
    print(f"eps={eps:.2f}  acceptance={np.mean(acc):.3f}")

# %% [markdown]
# Claiming the other bit at opening without any quantum trickery fails the
# parity test every time.

# %%
_, v = bcjl.bcjl_run(params, 0, np.random.default_rng(4), alice_honest=False)
print("accepted:", v.accepted, " parity_ok:", v.parity_ok)
