#!/usr/bin/env python3
"""Why symmetry and positive weights matter: with either dropped, any
node that is neither excited nor measured makes the weights
unidentifiable, and the rescaling witness is explicit."""

import numpy as np

from netident import (
    DirectedWeightMatrix,
    Graph,
    WeightMatrix,
    markov_sequence,
    necessity_check_directed,
    scaling_counterexample,
    transfer_eval,
)

# Directed chain 1 -> 2 -> 3, exciting and measuring node 1 only.
chain = DirectedWeightMatrix(
    np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
)
g3 = Graph(3, [(1, 2), (2, 3)])
print("directed chain, inputs = outputs = {1}")
print("  every node excited or measured?",
      necessity_check_directed(g3, [1], [1]))

rescaled = scaling_counterexample(chain, [1], [1], epsilon=2.0)
print("  original:\n", chain.entries)
print("  rescaled:\n", rescaled.entries)
same = all(
    np.allclose(a, b, atol=1e-12)
    for a, b in zip(
        markov_sequence(chain, [1], [1], 10).data,
        markov_sequence(rescaled, [1], [1], 10).data,
    )
)
print("  identical Markov parameters to order 10:", same)

# The undirected sign-free class fails the same way with epsilon = -1:
# flipping the sign of every edge into the hidden block changes nothing
# an input/output experiment can see.
p2 = Graph(2, [(1, 2)])
x = WeightMatrix(p2, np.array([[1.0, 2.0], [2.0, 3.0]]))
flipped = scaling_counterexample(x, [1], [1])
print("\nsymmetric sign-free flip on P2 (node 2 hidden):")
print("  original:\n", x.entries)
print("  flipped:\n", flipped.entries)
s = 4.0 + 1.5j
print("  transfer at s =", s, ":",
      complex(transfer_eval(x, [1], [1], s)[0, 0]),
      "vs", complex(transfer_eval(flipped, [1], [1], s)[0, 0]))
