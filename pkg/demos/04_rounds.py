"""
Accumulating logical noise over many rounds
===========================================

Repeats the syndrome-averaged logical channel h times and asks when the
coherent second-order term catches up with the first-order term.
"""
import numpy as np

from logicalnoise import channels as C
from logicalnoise import codes as K
from logicalnoise.experiments import rounds_table
from logicalnoise.logical import NoiseModel

code = K.repetition(3)
for r in (1e-2, 1e-3):
    theta = np.arccos(1 - 3 * r)  # X rotation of infidelity r
    noise = NoiseModel.iid(C.rotation("X", theta), 3)
    rows, summary = rounds_table(code, noise, [1, 10, 100, 1000])
    print(f"r={r:g}: h_P={summary['h_pauli']:.3g}  h_c={summary['h_coherent']:.3g}  "
          f"h_crit={summary['h_crit']:g}  (h_crit * r = {summary['h_crit_times_r']:.3f})")
    for row in rows:
        if row["logical"] == "Z":
            print(f"   h={row['h']:>5}  first order {row['first_order']:.3e}  "
                  f"coherent (exact) {row['exact_coherent']:+.3e}")

# Pauli noise never builds up a coherent term.
rows, summary = rounds_table(code, NoiseModel.iid(C.bit_flip(0.01), 3), [1, 100])
print("bit flip: h_crit =", summary["h_crit"], " coherent column:", {row["coherent_coherent"] for row in rows})
