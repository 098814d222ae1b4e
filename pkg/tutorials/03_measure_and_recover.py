"""
Probing around the hub and recovering sparse delays
===================================================

Every probe measures the total delay of a connected set of links.  Adding
the hub to a random subset S makes any S connected; measuring the hub alone
and subtracting leaves a random 0/1 row over the remaining links.
"""

import numpy as np

from hubtomo import generate_ba, line_graph
from hubtomo.hub import matching_hub
from hubtomo.measurements import build_plan, effective_system, gen_signal, h1_violations, measure
from hubtomo.recovery import ISTA_L1, judge, recover

g = generate_ba(100, 10, seed=2)
lg = line_graph(g)
hub = matching_hub(g)

# Half a measurement per link overall.  One probe measures the hub sum and
# each hub link is read directly, so the rest are random probes.
N = int(np.floor(0.5 * g.m + 0.5))
n_random = N - len(hub) - 1
plan = build_plan(g, lg, hub, n_random, seed=11)
print(f"m={g.m} hub={len(hub)} random probes={plan.n_random} total={plan.total_measurements}")
print("disconnected probes:", h1_violations(plan, lg))

# %%
# A 5%-sparse delay vector: a few links are congested (values near 5), the
# rest carry tiny background delay.
x = gen_signal(g.m, 0.05, seed=3)
print("congested links:", x.support.tolist())

y = measure(plan, x)
A, rhs = effective_system(plan, y)
print("effective system:", A.shape, "row density", A.mean().round(3))

# %%
# Orthogonal matching pursuit is the default solver.
x_hat, info = recover(plan, y, k=x.sparsity_k)
verdict = judge(x_hat, x, iterations=info.iterations)
print(f"OMP: success={verdict.success} rel_error={verdict.rel_error:.2e} atoms={info.iterations}")

# Nonnegative l1 via iterative soft-thresholding, for comparison.
x_hat, info = recover(plan, y, k=x.sparsity_k, solver=ISTA_L1)
verdict = judge(x_hat, x, solver=ISTA_L1, iterations=info.iterations)
print(f"l1:  success={verdict.success} rel_error={verdict.rel_error:.2e} iterations={info.iterations}")
