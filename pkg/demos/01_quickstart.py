"""
Minimising a benchmark function
===============================

One seeded run of UDE with jDE on the 10-dimensional sphere.
"""

import numpy as np

from unionde import RunConfig, run

# a small budget keeps the demo to a second or two
config = RunConfig(NP=30, D=10, max_evals=30_000, seed=7, strategy="ude", objective_name="sphere")
result = run(config)

print("best error     ", result.best_error)
print("evaluations    ", result.evals_used)
print("best position  ", np.round(result.best_position[:4], 6), "...")

# the trajectory stores (evaluations so far, best fitness) once per generation
traj = result.trajectory
for evals, best in traj[:: len(traj) // 8]:
    print(f"{int(evals):>7d}  {best:.3e}")

# same seed, same answer
again = run(RunConfig(NP=30, D=10, max_evals=30_000, seed=7, strategy="ude", objective_name="sphere"))
print("reproducible:", again.best_error == result.best_error)

# any callable with bounds works as an objective
from unionde import Bounds


class Booth:
    dimension = 2
    bounds = Bounds.uniform(-10, 10, 2)

    def __call__(self, x):
        return (x[0] + 2 * x[1] - 7) ** 2 + (2 * x[0] + x[1] - 5) ** 2


res = run(RunConfig(NP=20, D=2, max_evals=4000, seed=1), objective=Booth())
print("Booth minimiser", np.round(res.best_position, 6), "value", res.best_fitness)
