"""Encode feature vectors as quantum states and check them against the dense oracle.

A feature map is defined by a Pauli menu, a repetition count and a rotation
factor alpha. Single-letter menu entries rotate each qubit; two-letter
entries act on every qubit pair. Run: python3 demos/01_statevector_feature_maps.py
"""
import numpy as np

from qsvm_boost import (
    FeatureMapSpec,
    apply_hadamard_all,
    apply_pauli_rotation,
    dense_unitary_oracle,
    feature_map_state,
    zero_state,
)

np.set_printoptions(precision=4, suppress=True)

# build up a circuit by hand: |00> -> H layer -> exp(i * theta * ZZ)
state = zero_state(2)
print("initial |00>        :", state.amplitudes)
state = apply_hadamard_all(state)
print("after H on all      :", state.amplitudes)
state = apply_pauli_rotation(state, "ZZ", 0.7)
print("after exp(i 0.7 ZZ) :", state.amplitudes)
print()

# the same thing through a FeatureMapSpec
spec = FeatureMapSpec(n_qubits=2, labels=("Z", "ZZ"), reps=2, alpha=1.0)
print("spec:", spec.canonical())
print("expanded Pauli strings:", [str(p) for p in spec.paulis])

x = np.array([0.5, 1.2])
encoded = feature_map_state(spec, x)
print(f"state for x={x}:", encoded.amplitudes)
print("norm:", np.linalg.norm(encoded.amplitudes))

# the dense oracle multiplies explicit layer matrices; its first column is
# the image of |00>, so it must reproduce the simulated state
oracle = dense_unitary_oracle(spec, x)
print("max |simulator - oracle column|:", np.abs(encoded.amplitudes - oracle[:, 0]).max())
print("oracle unitarity error:", np.abs(oracle @ oracle.conj().T - np.eye(4)).max())

# alpha scales every rotation angle; alpha=0 collapses the circuit to
# Hadamard layers only, so the encoded state no longer depends on x
flat = FeatureMapSpec(2, ("Z", "ZZ"), reps=2, alpha=0.0)
print()
print("alpha=0 state (any x):", feature_map_state(flat, x).amplitudes)
