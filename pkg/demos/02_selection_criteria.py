"""
How UDE picks its parents
=========================

Fitness rank decides the two leading vectors, proximity in decision space
decides the third. Here both criteria are shown on a toy population.
"""

import numpy as np

from unionde import build_distance_matrix, build_rank_weights, make_rng, probability_row, roulette_select

rng = make_rng(3)
X = rng.uniform(-5, 5, size=(8, 2))
fitness = np.sum(X**2, axis=1)

rw = build_rank_weights(fitness)
print("member  fitness   rank weight")
for i in range(8):
    print(f"{i:>6d}  {fitness[i]:7.3f}   {rw.member_weights[i]:.3f}")
print("total mass", rw.total(), "= (NP - 1) / 2")

# the worst member has weight 0 and is never drawn by rank
draws = np.array([roulette_select(rw.member_weights, 1, rng=rng)[0] for _ in range(20_000)])
print("empirical frequencies", np.round(np.bincount(draws, minlength=8) / draws.size, 3))
print("expected             ", np.round(rw.member_weights / rw.total(), 3))

# design space: nearer members get more weight in row i
dm = build_distance_matrix(X)
i = 0
w = probability_row(dm, i)
order = np.argsort(dm[i])
print(f"\nneighbours of member {i}, nearest first")
for j in order[1:]:
    print(f"  member {j}: distance {dm[i, j]:.3f}  weight {w[j]:.3f}")
