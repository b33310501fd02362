# %% [markdown]
# # Changing a commitment after the fact
#
# If Alice keeps all her random choices as quantum registers instead of
# measuring them, the commit phase leaves a pure joint state. To switch from
# bit 0 to bit 1 she only has to turn her half of that state, and the best
# she can do is governed by the fidelity of Bob's two possible views.

# %%
import numpy as np

from qbitcommit import attacks
from qbitcommit.protocols import bcjl, script

rep = attacks.run_commitment_attack(script.bb84_commitment_script())
print(rep.to_record())

# %% [markdown]
# Sweep from a scheme that reveals the bit outright to one that hides it
# perfectly. Detection probability falls to zero as concealment improves.

# %%
for s in np.linspace(0, 1, 6):
    r = attacks.run_commitment_attack(script.interpolating_script(s))
    print(f"s={s:.1f}  F={r.fidelity:.4f}  accepted={r.acceptance_probability:.4f}"
          f"  detected={r.detection_probability:.4f}")

# %% [markdown]
# A perfectly concealing script gives Alice a unitary that rewrites the
# commitment exactly.

# %%
rng = np.random.default_rng(5)
r = attacks.run_commitment_attack(script.random_concealing_script(rng), method="ideal")
print("acceptance:", r.acceptance_probability)

# %% [markdown]
# ## The coded BB84 scheme
#
# Keeping the codeword index and basis string in superposition turns the
# honest commitment into such a pure state. Bob's views for the two bits are
# close but not equal, so the switch succeeds with probability F squared.

# %%
res = attacks.bcjl_epr_attack_states(bcjl.BCJLParams(6, 3), np.random.default_rng(2))
print("code distance:", res.code.min_distance, " r:", res.r)
print("F =", round(res.report.fidelity, 4),
      " projector acceptance =", round(res.report.acceptance_probability, 4))
print("acceptance under Bob's three opening tests:",
      round(res.report.extra["open1_three_test_acceptance"], 4))
