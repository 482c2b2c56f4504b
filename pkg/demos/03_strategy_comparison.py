"""
UDE against the classic strategies
==================================

A few seeded runs per strategy on a multimodal and a unimodal function,
followed by the Wilcoxon comparison used in the campaign tables.
"""

import numpy as np

from unionde import PairedSample, RunConfig, run, wilcoxon_signed_rank

strategies = ["rand1", "rand2", "best1", "derl2", "proximity2", "ranking2", "ude"]
functions = ["rosenbrock", "schwefel_1_2", "ackley", "griewank"]
runs = 3

means = {}
for s in strategies:
    for f in functions:
        errs = [
            run(RunConfig(NP=40, D=10, max_evals=20_000, seed=100 + r, strategy=s, objective_name=f)).best_error
            for r in range(runs)
        ]
        means[s, f] = np.mean(errs)

print(f"{'':<12}" + "".join(f"{f:>14}" for f in functions))
for s in strategies:
    print(f"{s:<12}" + "".join(f"{means[s, f]:14.3e}" for f in functions))

# positive ranks mean the second algorithm reached the lower error
a = [means["rand2", f] for f in functions]
b = [means["ude", f] for f in functions]
res = wilcoxon_signed_rank(PairedSample(a, b))
print("\nrand2 vs ude:", res.row(), "(underpowered)" if res.underpowered else "")
