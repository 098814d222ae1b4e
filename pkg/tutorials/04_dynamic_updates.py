"""
Keeping the hub valid as links come and go
==========================================

One link change moves the maximum matching size by at most one, so a single
augmenting-path search restores it.  We compare that with recomputing
everything after each deletion.
"""

import statistics
import time

import numpy as np

from hubtomo import generate_ba
from hubtomo.dynamic import apply_delete, apply_insert, check_state, initial_state, random_deletion, rerun_baseline

state = initial_state(generate_ba(500, 10, seed=0))
rng = np.random.default_rng(1)

dyn, full, branches = [], [], []
for _ in range(30):
    i, j = random_deletion(state, rng)
    t0 = time.perf_counter()
    nxt = apply_delete(state, i, j)
    dyn.append(time.perf_counter() - t0)
    t0 = time.perf_counter()
    rerun_baseline(nxt)
    full.append(time.perf_counter() - t0)
    branches.append(nxt.branch)
    state = nxt

print("branches seen:", sorted(set(branches)))
print(f"median update {statistics.median(dyn) * 1e3:.2f} ms, "
      f"median recompute {statistics.median(full) * 1e3:.2f} ms")
print("invariant problems:", check_state(state))

# Insertions work the same way.  An insert between two matched vertices
# leaves the hub untouched because the new link already touches it.
for _ in range(5):
    u, v = (int(t) for t in rng.choice(state.g.n, 2, replace=False))
    if not state.g.has_edge(u, v):
        state = apply_insert(state, u, v)
        print(state.epoch, state.branch, state.m.cardinality)
