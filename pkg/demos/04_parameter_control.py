"""
Self-adaptive F and CR
======================

jDE regenerates each member's F with probability 0.1 (uniform on [0.1, 1.0])
and CR with probability 0.1 (uniform on [0, 1]); new values survive only
when the trial wins.
"""

import numpy as np

from unionde import JdeConfig, RunConfig, make_rng, run
from unionde.params import propose_batch

rng = make_rng(0)
F = np.full(100_000, 0.5)
CR = np.full(100_000, 0.9)
F_new, CR_new = propose_batch(F, CR, JdeConfig(), rng)
print("F regenerated :", np.mean(F_new != F))
print("CR regenerated:", np.mean(CR_new != CR))
print("fresh F range :", F_new[F_new != F].min(), F_new[F_new != F].max())

# where do the parameters drift during a run?
res = run(RunConfig(NP=40, D=10, max_evals=40_000, seed=2, objective_name="rastrigin"))
pop = res.population
print("\nafter the run: F  mean %.3f  sd %.3f" % (pop.scale_factor.mean(), pop.scale_factor.std()))
print("               CR mean %.3f  sd %.3f" % (pop.crossover_rate.mean(), pop.crossover_rate.std()))

# the fixed policy keeps F and CR constant
fixed = run(RunConfig(NP=40, D=10, max_evals=40_000, seed=2, objective_name="rastrigin", param_policy="fixed:F=0.5,CR=0.9"))
print("\nrastrigin error, jDE  :", res.best_error)
print("rastrigin error, fixed:", fixed.best_error)
