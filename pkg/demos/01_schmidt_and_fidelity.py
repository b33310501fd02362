# %% [markdown]
# # Schmidt forms and fidelity
#
# A pure state on two subsystems is just a matrix of amplitudes. Its singular
# value decomposition gives the Schmidt form, and the squared singular values
# are the spectrum of either reduced density matrix.

# %%
import numpy as np

from qbitcommit.qmath import (DensityMatrix, StateVector, fidelity, purify,
                              random_density, random_state, reduced_state,
                              schmidt_decompose)

rng = np.random.default_rng(0)
psi = random_state((3, 4), rng)
sf = schmidt_decompose(psi, cut=1)
print("Schmidt coefficients:", np.round(sf.coeffs, 4))
print("rank:", sf.rank)

# %% [markdown]
# Both reduced matrices share the nonzero part of their spectrum.

# %%
print("spec rho_A:", np.round(reduced_state(psi, [0]).eigenvalues(), 4))
print("spec rho_B:", np.round(reduced_state(psi, [1]).eigenvalues(), 4))
print("coeffs**2: ", np.round(sf.weights, 4))

# %% [markdown]
# ## Fidelity
#
# Fidelity here is the unsquared one: the best overlap two purifications can
# have. A pure qubit against the maximally mixed qubit gives 1/sqrt(2).

# %%
ket0 = StateVector([1, 0], (2,))
print(fidelity(ket0.density(), DensityMatrix.maximally_mixed(2)))

# %% [markdown]
# Purifying a mixed state and tracing the ancilla back out is a round trip.

# %%
rho = random_density(3, rng)
back = reduced_state(purify(rho), [0])
print("round trip ok:", back.allclose(rho, 1e-12))
