"""
The benchmark suite and external shift vectors
==============================================
"""

import os
import tempfile

import numpy as np

from unionde import load_shift_file, make_function, suite

for f in suite(10):
    at_opt = f(f.optimizer) if f.optimizer is not None else float("nan")
    print(f"{f.name:<18} {f.group:<10} box [{f.bounds.lower[0]:g}, {f.bounds.upper[0]:g}]  f(x*) = {at_opt:.2e}")

print("\nrastrigin(1, 1) =", make_function("rastrigin", 2)(np.ones(2)))

# shift vectors can come from a whitespace-separated text file
with tempfile.NamedTemporaryFile("w", suffix=".txt", delete=False) as fh:
    fh.write(" ".join(str(v) for v in np.linspace(-3, 3, 40)))
shift = load_shift_file(fh.name, 10)
os.unlink(fh.name)

f = make_function("shifted_rastrigin", 10, shift=shift)
print("shifted_rastrigin at its shift:", f(shift))
