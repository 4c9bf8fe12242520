"""Constructive weight recovery along a forcing chronicle.

Measured Markov parameters give the entries ``(X^k)_{ij}`` for the nodes
that are both excited and measured. Each force ``u -> v`` then extends
that table to ``v`` using three closed-form identities obeyed by any
symmetric, positively-patterned state matrix:

* the squared edge weight ``X_uv^2`` equals ``(X^2)_uu`` minus the known
  products over the other closed-neighbourhood members of ``u``, and the
  positive branch of the square root is forced by the sign constraint;
* given ``X_uv``, the cross entries ``(X^k)_{vw}`` follow from
  ``(X^{k+1})_{uw}`` by subtracting the known neighbourhood terms and
  dividing once by ``X_uv``;
* the diagonal ``(X^k)_{vv}`` follows from ``(X^{k+2})_{uu}`` the same
  way, dividing by ``X_uv^2``.

One force therefore consumes two orders of the table, so a chronicle of
L forces needs measured orders up to ``2L + 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import (
    DegenerateWeightError,
    InconsistentDataError,
    InputError,
    InsufficientOrderError,
    UncertifiedTargetError,
)
from .graph_core import Graph, NodeSet
from .netsim import MarkovSequence
from .zero_forcing import ForcingChronicle, derived_set

__all__ = [
    "ExtendedMarkovTable",
    "ReconstructionResult",
    "ForceStepRecord",
    "required_order",
    "force_step",
    "identify",
]

DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class ExtendedMarkovTable:
    """Power-table over a growing virtual input/output node set.

    ``values[(k, i, j)]`` holds ``(X^k)_{ij}`` for i, j in ``level_set``
    and ``1 <= k <= max_order``; entries are stored symmetrically. Forcing
    steps enlarge the level set and shrink the usable order by two.
    """

    level_set: NodeSet
    max_order: int
    values: dict[tuple[int, int, int], float]

    def get(self, k: int, i: int, j: int) -> float:
        try:
            return self.values[(k, i, j)]
        except KeyError:
            raise InputError(
                f"table entry (X^{k})_{{{i},{j}}} unavailable "
                f"(level set {list(self.level_set)}, max order {self.max_order})"
            ) from None

    @classmethod
    def from_markov(cls, markov: MarkovSequence) -> "ExtendedMarkovTable":
        """Seed the table with the overlap block of a measured sequence.

        Only nodes that are both inputs and outputs contribute; their
        (i, j) and (j, i) samples are averaged, which is the identity for
        data from any symmetric generator.
        """
        w = markov.v_in.intersection(markov.v_out)
        out_pos = {node: markov.v_out.index(node) for node in w}
        in_pos = {node: markov.v_in.index(node) for node in w}
        values: dict[tuple[int, int, int], float] = {}
        for k in range(1, markov.order + 1):
            block = markov.data[k]
            for i in w:
                for j in w:
                    val = 0.5 * (
                        block[out_pos[i], in_pos[j]] + block[out_pos[j], in_pos[i]]
                    )
                    values[(k, i, j)] = val
        return cls(level_set=w, max_order=markov.order, values=values)


def required_order(chronicle: ForcingChronicle) -> int:
    """Markov order sufficient to replay a chronicle: 2L + 2 for L forces.

    Each force consumes two orders of the table and the final level still
    needs its first two powers; the bound is sufficient, not minimal.
    """
    return 2 * len(chronicle.forces) + 2


def force_step(
    table: ExtendedMarkovTable,
    g: Graph,
    u: int,
    v: int,
    tol: float = DEGENERACY_TOL,
) -> ExtendedMarkovTable:
    """Extend the table across one force ``u -> v``.

    Preconditions: ``u`` is in the level set, ``v`` is a neighbour of
    ``u`` outside it, every other closed-neighbourhood member of ``u`` is
    inside it (the colour-change precondition), and at least three orders
    are usable.

    The returned table covers ``level_set + {v}`` with ``max_order``
    reduced by two. The recovered edge weight is strictly positive;
    measured data for which it vanishes or comes out negative cannot
    stem from a positively-weighted symmetric matrix on this graph.
    """
    level = table.level_set
    u, v = int(u), int(v)
    if u not in level:
        raise InputError(f"forcing node {u} is not in the level set {list(level)}")
    if v in level:
        raise InputError(f"forced node {v} is already in the level set")
    if not g.has_edge(u, v):
        raise InputError(f"({u},{v}) is not an edge; only neighbours can be forced")
    closed = g.closed_neighbourhood(u)
    rest = closed.difference((v,))
    outside = rest.difference(level)
    if outside.members:
        raise InputError(
            f"force ({u},{v}) violates the colour-change precondition: "
            f"neighbourhood nodes {list(outside)} are outside the level set"
        )
    k_max = table.max_order
    if k_max < 3:
        raise InsufficientOrderError(
            f"table order {k_max} exhausted: a force needs orders k+1 and k+2; "
            "supply a sequence of order >= 2L+2 for an L-force chronicle",
            required=None,
        )

    # Squared edge weight from the second power at u.
    power2 = table.get(2, u, u)
    known = [table.get(1, u, z) for z in rest]
    squared = power2 - sum(x * x for x in known)
    scale = max(1.0, abs(power2), max((x * x for x in known), default=0.0))
    if abs(squared) <= tol * scale:
        raise DegenerateWeightError(
            f"forced edge ({u},{v}) has vanishing recovered weight: measured "
            "data is inconsistent with a positively-weighted matrix on this graph"
        )
    if squared < 0.0:
        raise InconsistentDataError(
            f"recovered squared weight of edge ({u},{v}) is negative "
            f"({squared:.3e}): data does not come from a symmetric "
            "positively-patterned matrix on this graph"
        )
    weight = math.sqrt(squared)

    values = dict(table.values)
    x_u = {z: table.get(1, u, z) for z in rest}

    # Cross entries (X^k)_{vw} for w in the old level set, k <= k_max - 1.
    for k in range(1, k_max):
        for w in level:
            acc = table.get(k + 1, u, w)
            for z in rest:
                acc -= x_u[z] * table.get(k, z, w)
            val = acc / weight
            values[(k, v, w)] = val
            values[(k, w, v)] = val

    # Diagonal entries (X^k)_{vv}, k <= k_max - 2.
    weight_sq = weight * weight
    for k in range(1, k_max - 1):
        acc = table.get(k + 2, u, u)
        for i in closed:
            xi = weight if i == v else x_u[i]
            for j in closed:
                if i == v and j == v:
                    continue
                xj = weight if j == v else x_u[j]
                if i == v:
                    mid = values[(k, v, j)]
                elif j == v:
                    mid = values[(k, i, v)]
                else:
                    mid = table.get(k, i, j)
                acc -= xi * mid * xj
        values[(k, v, v)] = acc / weight_sq

    return ExtendedMarkovTable(
        level_set=level.union((v,)),
        max_order=k_max - 2,
        values=values,
    )


@dataclass(frozen=True)
class ForceStepRecord:
    """Conditioning log entry for one replayed force."""

    step: int
    forcing_node: int
    forced_node: int
    weight: float
    amplification: float  # cumulative worst-case division factor

    def to_json(self) -> dict:
        return {
            "step": self.step,
            "force": [self.forcing_node, self.forced_node],
            "weight": self.weight,
            "amplification": self.amplification,
        }


@dataclass(frozen=True)
class ReconstructionResult:
    """Recovered principal submatrix plus per-force diagnostics."""

    nodes: NodeSet
    recovered: np.ndarray
    residual_order: int
    diagnostics: tuple[ForceStepRecord, ...]
    notes: tuple[str, ...] = field(default_factory=tuple)

    def to_json(self) -> dict:
        return {
            "nodes": self.nodes.to_json(),
            "recovered": self.recovered.tolist(),
            "residual_order": self.residual_order,
            "diagnostics": [d.to_json() for d in self.diagnostics],
            "notes": list(self.notes),
        }


def identify(
    markov: MarkovSequence,
    g: Graph,
    target: Iterable[int],
    chronicle: ForcingChronicle | None = None,
    tol: float = DEGENERACY_TOL,
) -> ReconstructionResult:
    """Recover the weight submatrix over ``target`` from measured data.

    Seeds the power table with the input/output overlap block, replays
    the forcing chronicle (the deterministic one by default, or a
    caller-supplied one, which is validated first) until the target nodes
    are covered, and reads the weights off the first power. Non-edges
    inside the target are never written, so they are exactly zero in the
    result; edge entries are checked to be strictly positive.
    """
    target = g.check_nodes(target)
    w = markov.v_in.intersection(markov.v_out)
    g.check_nodes(markov.v_in)
    g.check_nodes(markov.v_out)

    if chronicle is None:
        _, chronicle = derived_set(g, w)
    else:
        if chronicle.initial != w:
            raise InputError(
                f"chronicle initial set {list(chronicle.initial)} does not match "
                f"the input/output overlap {list(w)}"
            )
        chronicle.replay(g)

    reachable = chronicle.derived
    if not target.issubset(reachable):
        missing = target.difference(reachable)
        raise UncertifiedTargetError(
            f"target nodes {list(missing)} are outside the derived set "
            f"{list(reachable)} of the input/output overlap; certification is "
            "sufficient only, so the instance may still be identifiable; "
            "see identifiability.certify"
        )

    # Only the chronicle prefix that reaches the target matters.
    covered = set(w)
    prefix: list[tuple[int, int]] = []
    for u, v in chronicle.forces:
        if target.issubset(covered):
            break
        prefix.append((u, v))
        covered.add(v)

    needed = 2 * len(prefix) + 2
    if markov.order < needed:
        raise InsufficientOrderError(
            f"markov order {markov.order} is insufficient: replaying "
            f"{len(prefix)} force(s) needs order {needed}",
            required=needed,
        )

    table = ExtendedMarkovTable.from_markov(markov)
    records: list[ForceStepRecord] = []
    amplification = 1.0
    for step, (u, v) in enumerate(prefix, start=1):
        table = force_step(table, g, u, v, tol=tol)
        weight = table.values[(1, u, v)]
        amplification *= max(1.0, 1.0 / weight, 1.0 / (weight * weight))
        records.append(
            ForceStepRecord(
                step=step,
                forcing_node=u,
                forced_node=v,
                weight=weight,
                amplification=amplification,
            )
        )

    members = target.members
    size = len(members)
    recovered = np.zeros((size, size))
    notes: list[str] = []
    table_scale = max(
        [abs(table.values[(1, i, i)]) for i in members] + [1.0]
    )
    for a, i in enumerate(members):
        recovered[a, a] = table.get(1, i, i)
        for b in range(a + 1, size):
            j = members[b]
            if g.has_edge(i, j):
                val = table.get(1, i, j)
                if val <= 0.0:
                    raise InconsistentDataError(
                        f"recovered weight of edge ({i},{j}) is {val:.3e}; "
                        "members of the positive class carry strictly "
                        "positive edge weights"
                    )
                recovered[a, b] = recovered[b, a] = val
            else:
                # Never written: report if the table disagrees noticeably.
                leak = abs(table.values.get((1, i, j), 0.0))
                if leak > 1e-6 * table_scale:
                    notes.append(
                        f"non-edge ({i},{j}) carries weight {leak:.3e} in the "
                        "measured data; entry omitted from the result"
                    )

    return ReconstructionResult(
        nodes=target,
        recovered=recovered,
        residual_order=table.max_order,
        diagnostics=tuple(records),
        notes=tuple(notes),
    )
