"""Seeded random instance builders for the randomized property checks."""

from __future__ import annotations

import random
from typing import Iterable

from .construct import Distribution, standard_bipartition
from .instance import Graph, Instance, validate
from .oracle import RGStatus, rg_status


def random_instance(
    rng: random.Random,
    max_vertices: int = 10,
    max_block_size: int = 3,
) -> Instance:
    """A valid instance with random edges and a random ordered partition."""
    n = rng.randint(1, max_vertices)
    ids = list(range(n))
    rng.shuffle(ids)
    blocks: list[list[int]] = []
    at = 0
    while at < n:
        size = rng.randint(1, min(max_block_size, n - at))
        blocks.append(sorted(ids[at : at + size]))
        at += size
    p = rng.uniform(0.15, 0.75)
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p
    ]
    return Instance.make(Graph.from_edges(n, edges), blocks)


def random_disconnected_instance(
    rng: random.Random,
    max_vertices: int = 10,
    max_tries: int = 10_000,
) -> Instance:
    """Rejection-sample an instance whose reconfiguration graph is disconnected."""
    for _ in range(max_tries):
        candidate = random_instance(rng, max_vertices)
        if rg_status(candidate) is RGStatus.DISCONNECTED:
            return candidate
    raise RuntimeError("failed to sample a disconnected instance")


def random_bipartite_pair_instance(rng: random.Random, max_side: int = 3) -> Instance:
    """A complete bipartite graph with its two sides as the two blocks."""
    return standard_bipartition(rng.randint(1, max_side), rng.randint(1, max_side))


def random_distribution(
    rng: random.Random, donor_vertices: Iterable[int], recipient_blocks: int
) -> Distribution:
    return Distribution.from_mapping(
        {v: rng.randrange(recipient_blocks) for v in donor_vertices}
    )


def random_bounded_degree_instance(
    rng: random.Random,
    delta: int,
    max_blocks: int = 4,
    extra_block_room: int = 1,
) -> Instance:
    """Random instance with maximum degree at most delta and blocks of size at least 2*delta."""
    m = rng.randint(1, max_blocks)
    sizes = [2 * delta + rng.randint(0, extra_block_room) for _ in range(m)]
    n = sum(sizes)
    blocks = []
    at = 0
    for size in sizes:
        blocks.append(list(range(at, at + size)))
        at += size
    degree = [0] * n
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    rng.shuffle(pairs)
    target = int(len(pairs) * rng.uniform(0.3, 1.0))
    edges = []
    for u, v in pairs[:target]:
        if degree[u] < delta and degree[v] < delta:
            edges.append((u, v))
            degree[u] += 1
            degree[v] += 1
    return Instance.make(Graph.from_edges(n, edges), blocks)


def perturb_instance(rng: random.Random, instance: Instance) -> Instance | None:
    """One random single edit: flip an edge or move a vertex between blocks.

    Returns None when the drawn edit cannot produce a valid instance (for
    example moving out of a singleton block).
    """
    n = instance.n
    if rng.random() < 0.5 and n >= 2:
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v:
            return None
        pair = (min(u, v), max(u, v))
        edges = set(instance.graph.edges)
        if pair in edges:
            edges.discard(pair)
        else:
            edges.add(pair)
        return Instance.make(Graph.from_edges(n, sorted(edges)), instance.blocks)
    if instance.m < 2:
        return None
    source = rng.randrange(instance.m)
    if len(instance.blocks[source]) < 2:
        return None
    dest = rng.randrange(instance.m)
    if dest == source:
        return None
    v = rng.choice(instance.blocks[source])
    blocks = [list(b) for b in instance.blocks]
    blocks[source].remove(v)
    blocks[dest].append(v)
    moved = Instance.make(instance.graph, blocks)
    return moved if not validate(moved) else None
