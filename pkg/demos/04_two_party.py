# %% [markdown]
# # Evaluating f(x, y) on every y
#
# In a one-sided computation Bob ends up with f(x, y) and Alice learns
# nothing about y. That second property means Bob can turn the end state for
# input y into the end state for any other y' using only his own registers.
# He can then read f(x, y') for every y' from one run.

# %%
import numpy as np

from qbitcommit import attacks
from qbitcommit.protocols import twoparty

f = np.eye(8, dtype=int)      # equality test
x = 5
for rec in attacks.two_party_attack_trace(f, x, y_start=0):
    print(f"y={rec.y}  f(x, y)={rec.value}  disturbance={rec.disturbance:.1e}")

# %% [markdown]
# Alice's reduced state is the same for every y, which is what made the
# rotation possible.

# %%
views = [twoparty.alice_view(twoparty.two_party_protocol(f, x, y)) for y in range(8)]
print(all(v.allclose(views[0], 1e-12) for v in views))
