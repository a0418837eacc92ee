"""Teleporting a qubit through a noiseless GHZ channel of any size.

With no decoherence the circuit moves the unknown input state onto the
receiver's qubit exactly, whatever the channel size, so every fidelity below
prints as 1 to machine precision.
"""

import numpy as np

from ghz_teleport import (
    BlochAngles,
    fidelity,
    ghz_density,
    teleport_circuit,
    teleport_output,
)

rng = np.random.default_rng(1)

print("channel  qubits  circuit dim   min fidelity over 25 random inputs")
for n_channel in (2, 3, 4, 5, 6):
    channel = ghz_density(n_channel)
    dim = teleport_circuit(n_channel).shape[0]
    worst = min(
        fidelity(
            teleport_output(channel, angles := BlochAngles(rng.uniform(0, np.pi),
                                                           rng.uniform(0, 2 * np.pi))),
            angles,
        )
        for _ in range(25)
    )
    label = "EPR " if n_channel == 2 else f"{n_channel}GHZ"
    print(f"{label:>7} {n_channel + 1:>7} {dim:>8}x{dim:<6} {worst:.15f}")

print()
print("The circuit applies CNOTs from the input qubit onto the sender's")
print("channel qubits, a Hadamard on the input qubit, and controlled X/Z")
print("corrections onto the receiver, then discards the sender's register.")
