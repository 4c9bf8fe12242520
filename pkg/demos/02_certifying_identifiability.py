#!/usr/bin/env python3
"""Certifying which network weights are identifiable from a choice of
excited (input) and measured (output) nodes.

The certificate seeds the colour-change rule with the nodes that are both
excited and measured; everything the rule reaches is identifiable. The
condition is sufficient only, so reports never say "not identifiable".
"""

from netident import Graph, NodeSet, certify, minimum_zero_forcing_set

path3 = Graph(3, [(1, 2), (2, 3)])

# Excite and measure the same endpoint: {1} forces the whole path, so the
# entire weight matrix is certified.
report = certify(path3, NodeSet([1]), NodeSet([1]))
print("P3, inputs = outputs = {1}:", report.verdict)

# Excite only the middle node while measuring everywhere. The seed is the
# intersection {2}, which is stuck, so only node 2 is certified. Yet this
# instance happens to be identifiable anyway. The report carries that caveat.
report = certify(path3, NodeSet([2]), path3.nodes)
print("\nP3, inputs = {2}, outputs = V:")
print(report)

# Design use: to certify a whole network with as few sensors/actuators as
# possible, excite and measure a minimum zero forcing set.
tree = Graph(
    9,
    [(1, 2), (2, 3), (2, 4), (4, 5), (4, 6), (6, 7), (1, 8), (8, 9)],
)
seeds = minimum_zero_forcing_set(tree)
report = certify(tree, seeds, seeds)
print(f"\n9-node tree: exciting+measuring the minimum seed set {list(seeds)}",
      "->", report.verdict)
print("that is", f"{len(seeds)}/{tree.n}", "nodes touched")
