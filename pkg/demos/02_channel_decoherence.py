"""Watching a 4-qubit GHZ channel decohere, two ways.

The channel density matrix is evolved once with the generic RK4 integrator
and once from the exact closed-form solution; the two stay within 1e-10 of
each other.  The closed form keeps only a few independent matrix entries
(corner populations, corner coherences, and a couple of interior classes),
and their decay rates differ sharply between noise families.
"""

import numpy as np

from ghz_teleport import (
    ClosedFormCase,
    ansatz_ode_coefficients,
    evolve_closed_form,
    evolve_numeric,
    ghz_density,
)

for family in ("pauli_x", "pauli_z", "isotropic", "mixed_xyzx"):
    case = ClosedFormCase(4, family)
    print(f"--- 4-qubit channel, {family} noise ---")
    print("   kt   corner pop   corner coh   |closed - RK4|")
    rho = ghz_density(4)
    prev = 0.0
    for kt in (0.1, 0.3, 0.6, 1.0):
        rho = evolve_numeric(rho, case.noise_spec(), kt - prev)
        prev = kt
        closed = evolve_closed_form(case, kt)
        gap = np.abs(closed - rho).max()
        print(f" {kt:4.1f}   {closed[0, 0].real:10.6f}   {closed[0, 15].real:10.6f}   {gap:.3e}")
    symbols = ansatz_ode_coefficients(case, 0.5)
    pretty = ", ".join(f"{s}={v:.4f}" for s, v in symbols.items())
    print(f" independent coefficients at kt=0.5: {pretty}")
    print()

print("Under pure z noise the populations never move; only the corner")
print("coherence decays.  Isotropic noise is the harshest: its coherence")
print("rate doubles the z rate at equal per-axis strength.")
