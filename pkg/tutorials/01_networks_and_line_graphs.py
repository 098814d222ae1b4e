"""
Networks, line graphs and eccentricity
======================================

Link delays live on edges, so most of the work happens on the line graph,
whose vertices are the links of the original network.
"""

import numpy as np

from hubtomo import generate_ba, line_graph
from hubtomo.graph import bfs_tree, eccentricities, eccentricity_center

# A preferential-attachment network on 200 vertices with average degree 10.
# It starts from a 6-clique and every later vertex brings 5 new links.
g = generate_ba(200, 10, seed=0)
print(g.n, "vertices,", g.m, "links, average degree", round(g.average_degree(), 2))

# The degree distribution is heavy tailed: a handful of vertices carry
# far more links than the mean.
deg = g.degrees()
print("max degree", deg.max(), "median", int(np.median(deg)))

# Line graph: two links are adjacent when they share an endpoint.  Its edge
# count follows directly from the degree sequence.
lg = line_graph(g)
print(len(lg.edges), "==", (int((deg ** 2).sum()) - 2 * g.m) // 2)

# Eccentricities come from an all-pairs unweighted shortest-path run.  The
# centre is the first line-graph vertex with the smallest eccentricity.
ecc = eccentricities(lg)
center = eccentricity_center(lg)
print("radius", ecc.min(), "diameter", ecc.max(), "centre link", center, g.edges[center])

# A breadth-first tree from the centre.  Its non-leaf vertices are what the
# baseline hub selector uses.
tree = bfs_tree(lg, center)
print("tree height", tree.height, "non-leaves", len(tree.non_leaves()))
