"""
Paulis, transfer matrices and the error-matrix bounds
=====================================================

A tour of the single-qubit layer: Pauli products with exact phases, channel
representations, and how the off-diagonal entries of a channel's error
matrix compare with its infidelity.
"""
import numpy as np

from logicalnoise import channels as C
from logicalnoise.experiments import fuzz_lemma1
from logicalnoise.pauli import PauliOperator, commutes, multiply

# Paulis carry their phase exactly: XZ = -iY.
x, z = PauliOperator.from_string("X"), PauliOperator.from_string("Z")
print("X * Z =", multiply(x, z))
print("XX and ZZ commute:", commutes(PauliOperator.from_string("XX"), PauliOperator.from_string("ZZ")))

# A coherent rotation and a depolarizing channel with the same infidelity.
theta = 0.2
rot = C.rotation("Z", theta)
r = C.infidelity(rot)
dep = C.depolarizing(2 * r)
print(f"\nZ rotation by {theta}: infidelity {r:.5f}")
print(np.round(rot, 4))
print(f"depolarizing with the same infidelity {C.infidelity(dep):.5f}")
print(np.round(dep, 4))

# The rotation's error matrix has an off-diagonal entry of size sin(theta),
# far larger than r; the bound is sqrt(6 r) rather than r.
e = C.error_matrix(rot)
print(f"\noff-diagonal |E[X,Y]| = {abs(e[1, 2]):.4f}, sqrt(6r) = {np.sqrt(6 * r):.4f}, 3r = {3 * r:.4f}")
print("bounds hold:", C.check_lemma1(rot).passed)

# Twirling removes the coherent part and keeps the infidelity.
print("twirled:", np.round(np.diag(C.pauli_twirl(rot)), 4), "infidelity", round(C.infidelity(C.pauli_twirl(rot)), 5))

# Diamond-distance window implied by the infidelity alone.
lo, hi = C.diamond_bounds(r, 2)
print(f"diamond distance lies in [{lo:.4f}, {hi:.4f}]")

# Fuzz the four bounds over random channels.
rep = fuzz_lemma1(20_000, seed=1)
print("\nfuzz over 20000 channels:", rep.violations, "min slack", {k: f"{v:.1e}" for k, v in rep.min_slack.items()})
