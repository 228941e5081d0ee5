"""Shared test utilities: an independent inference oracle and a seeded
random-network generator.

The oracle deliberately reimplements joint evaluation and posterior
computation from the file-format definition alone (its own row addressing,
pure-python sums) so the library's engines are checked against something
that shares no code with them.
"""

from __future__ import annotations

import itertools

import numpy as np

from chiron.network import Cpt, NetworkSpec, NodeSpec


def oracle_joint(spec: NetworkSpec, full: dict[str, int]) -> float:
    p = 1.0
    for node in spec.nodes:
        row = 0
        for parent in node.parents:
            row = row * len(spec.node(parent).states) + full[parent]
        p *= float(node.cpt.rows[row][full[node.name]])
    return p


def oracle_posterior(
    spec: NetworkSpec, evidence: dict[str, int], query: str
) -> list[float]:
    names = [n.name for n in spec.nodes]
    cards = [n.card for n in spec.nodes]
    weights = [0.0] * spec.node(query).card
    for combo in itertools.product(*(range(c) for c in cards)):
        full = dict(zip(names, combo))
        if any(full[k] != v for k, v in evidence.items()):
            continue
        weights[full[query]] += oracle_joint(spec, full)
    z = sum(weights)
    if z == 0.0:
        raise ZeroDivisionError("evidence has zero probability")
    return [w / z for w in weights]


def random_network(
    rng: np.random.Generator,
    max_nodes: int = 10,
    max_states: int = 4,
    max_cells: int = 8192,
) -> NetworkSpec:
    """A random DAG with strictly positive CPTs (no impossible evidence).

    The joint table is capped at ``max_cells`` so enumeration stays cheap.
    """
    n = int(rng.integers(2, max_nodes + 1))
    cards = [int(rng.integers(2, max_states + 1)) for _ in range(n)]
    while int(np.prod(cards)) > max_cells:
        cards[int(rng.integers(0, n))] = 2

    nodes = []
    for i in range(n):
        parents = [
            f"v{j}" for j in range(i) if rng.random() < 0.4
        ][:3]
        row_count = 1
        for p in parents:
            row_count *= cards[int(p[1:])]
        raw = rng.random((row_count, cards[i])) + 0.05
        rows = raw / raw.sum(axis=1, keepdims=True)
        nodes.append(
            NodeSpec(
                name=f"v{i}",
                states=tuple(f"s{k}" for k in range(cards[i])),
                parents=tuple(parents),
                cpt=Cpt(rows),
            )
        )
    return NetworkSpec(name="random", version="0", nodes=tuple(nodes))


def random_evidence(rng: np.random.Generator, spec: NetworkSpec) -> dict[str, int]:
    evidence = {}
    for node in spec.nodes:
        if rng.random() < 0.3:
            evidence[node.name] = int(rng.integers(0, node.card))
    return evidence
