"""Builders for instances with disconnected reconfiguration graphs.

The pieces: elementary instances (disjoint complete bipartite components,
each block owning one full side of its own component), the gluing step that
absorbs one donor block into a fresh vertex-partitioned graph, the chained
generator that produces the extremal family, and the peel-based search for a
transversal outside the designated-side component of the solution space.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .instance import (
    Graph,
    Instance,
    complete_bipartite_parts,
    components,
    delete_blocks,
)
from .oracle import (
    DEFAULT_ENUMERATION_CAP,
    RGStatus,
    Transversal,
    is_independent,
    is_minimally_nit,
    is_minimally_rgd,
    rg_status,
)


class ConstructionError(ValueError):
    """Malformed build inputs: bad sizes, targets, splits or associations."""


class VerificationError(RuntimeError):
    """An oracle-checked construction guarantee failed to hold."""


def standard_bipartition(a_size: int, b_size: int) -> Instance:
    """Complete bipartite graph whose two sides are the two blocks."""
    if a_size < 1 or b_size < 1:
        raise ConstructionError("both sides must be nonempty")
    n = a_size + b_size
    edges = [(u, v) for u in range(a_size) for v in range(a_size, n)]
    blocks = [tuple(range(a_size)), tuple(range(a_size, n))]
    return Instance.make(Graph.from_edges(n, edges), blocks)


@dataclass(frozen=True)
class ElementarySpec:
    """Recipe for an elementary instance.

    Part i becomes a complete bipartite component; its designated side (of
    size ``parts[i][0]``) goes wholly into block i, and each vertex of the
    other side is routed to the block named in ``targets[i]``.
    """

    parts: tuple[tuple[int, int], ...]
    targets: tuple[tuple[int, ...], ...]

    @property
    def m(self) -> int:
        return len(self.parts)

    def check(self) -> None:
        if len(self.targets) != len(self.parts):
            raise ConstructionError("one target tuple required per part")
        for i, (a, b) in enumerate(self.parts):
            if a < 1 or b < 1:
                raise ConstructionError(f"part {i} must have positive side sizes")
            if len(self.targets[i]) != b:
                raise ConstructionError(
                    f"part {i} needs {b} targets, got {len(self.targets[i])}"
                )
            for t in self.targets[i]:
                if not 0 <= t < self.m:
                    raise ConstructionError(f"part {i} routes a vertex to bad block {t}")


def single_block_spec(delta: int) -> ElementarySpec:
    """The smallest base: one component with both sides in the single block."""
    if delta < 1:
        raise ConstructionError("delta must be positive")
    return ElementarySpec(((delta, delta),), ((0,) * delta,))


def _elementary_layout(
    spec: ElementarySpec,
) -> tuple[int, list[tuple[int, int]], list[list[int]], dict[int, frozenset[int]]]:
    spec.check()
    edges: list[tuple[int, int]] = []
    blocks: list[list[int]] = [[] for _ in range(spec.m)]
    association: dict[int, frozenset[int]] = {}
    offset = 0
    for i, (a, b) in enumerate(spec.parts):
        a_ids = list(range(offset, offset + a))
        b_ids = list(range(offset + a, offset + a + b))
        offset += a + b
        edges.extend((u, v) for u in a_ids for v in b_ids)
        blocks[i].extend(a_ids)
        association[i] = frozenset(a_ids)
        for vid, target in zip(b_ids, spec.targets[i]):
            blocks[target].append(vid)
    return offset, edges, blocks, association


def build_elementary(
    spec: ElementarySpec,
    verify: bool = False,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> Instance:
    """Materialize the spec; with verify, oracle-check the deletion clause.

    The deletion clause requires that removing any single block leaves a
    connected reconfiguration graph. There is no known closed-form test, so
    verification is brute force.
    """
    n, edges, blocks, _ = _elementary_layout(spec)
    instance = Instance.make(Graph.from_edges(n, edges), blocks)
    if verify:
        for i in range(instance.m):
            sub = delete_blocks(instance, [i]).instance
            if rg_status(sub, cap) is not RGStatus.CONNECTED:
                raise VerificationError(
                    f"deleting block {i} does not leave a connected reconfiguration graph"
                )
    return instance


def elementary_association(spec: ElementarySpec) -> dict[int, frozenset[int]]:
    """Designated side per block, in the ids of ``build_elementary``'s output."""
    _, _, _, association = _elementary_layout(spec)
    return association


@dataclass(frozen=True)
class Distribution:
    """Where each donor-block vertex goes among the recipient's blocks."""

    targets: tuple[tuple[int, int], ...]

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, int]) -> "Distribution":
        return cls(tuple(sorted((int(v), int(t)) for v, t in mapping.items())))

    def as_dict(self) -> dict[int, int]:
        return dict(self.targets)


def combine(
    g: Instance,
    donor_block: int,
    h: Instance,
    dist: Distribution,
    verify: bool = False,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> Instance:
    """Glue h onto g, dissolving g's donor block into h's blocks.

    The result lives on the disjoint union (h's ids offset by g's vertex
    count); its blocks are g's blocks minus the donor, followed by h's blocks
    each augmented with the donor vertices routed to it. With verify on, the
    preconditions (g's space disconnected, h minimally without transversals)
    and the conclusion (the result's space disconnected) are oracle-checked.
    """
    if not 0 <= donor_block < g.m:
        raise ConstructionError(f"donor block {donor_block} out of range")
    dmap = dist.as_dict()
    if set(dmap) != set(g.blocks[donor_block]):
        raise ConstructionError("distribution must cover exactly the donor block")
    for target in dmap.values():
        if not 0 <= target < h.m:
            raise ConstructionError(f"distribution target {target} out of range")
    if verify:
        if rg_status(g, cap) is not RGStatus.DISCONNECTED:
            raise VerificationError(
                "left instance must have a disconnected reconfiguration graph"
            )
        if not is_minimally_nit(h, cap):
            raise VerificationError(
                "right instance must be minimally without independent transversals"
            )
    offset = g.n
    edges = list(g.graph.edges) + [(u + offset, v + offset) for u, v in h.graph.edges]
    blocks = [g.blocks[i] for i in range(g.m) if i != donor_block]
    for j in range(h.m):
        merged = [v + offset for v in h.blocks[j]]
        merged.extend(v for v, target in dmap.items() if target == j)
        blocks.append(tuple(sorted(merged)))
    result = Instance.make(Graph.from_edges(g.n + h.n, edges), blocks)
    if verify and rg_status(result, cap) is not RGStatus.DISCONNECTED:
        raise VerificationError(
            "combined instance unexpectedly has a connected reconfiguration graph"
        )
    return result


@dataclass(frozen=True)
class IterationChoice:
    """One generator step: which block to dissolve and which half feeds side A."""

    donor_block: int
    to_a: tuple[int, ...]


def generate_bad_instance(
    delta: int,
    spec: ElementarySpec | None = None,
    iterations: int = 0,
    choices: Iterable[IterationChoice] = (),
    verify: bool = False,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> Instance:
    """Chain the gluing step over an elementary base of balanced components.

    Every component (base parts and appended ones) is complete bipartite with
    both sides of size delta, every block has size 2*delta, and every step
    splits its donor block half and half between the fresh sides. With
    verify on, the result is oracle-checked to be minimally disconnected.
    """
    if delta < 1:
        raise ConstructionError("delta must be positive")
    spec = spec if spec is not None else single_block_spec(delta)
    if any(part != (delta, delta) for part in spec.parts):
        raise ConstructionError("base parts must all have both sides of size delta")
    instance = build_elementary(spec, verify=verify, cap=cap)
    if any(len(b) != 2 * delta for b in instance.blocks):
        raise ConstructionError("base blocks must all have size 2*delta")
    steps = list(choices)
    if len(steps) != iterations:
        raise ConstructionError(f"expected {iterations} choices, got {len(steps)}")
    for step in steps:
        if not 0 <= step.donor_block < instance.m:
            raise ConstructionError(f"donor block {step.donor_block} out of range")
        donor_vertices = set(instance.blocks[step.donor_block])
        to_a = set(step.to_a)
        if len(step.to_a) != len(to_a) or not to_a <= donor_vertices or len(to_a) != delta:
            raise ConstructionError(
                "split must send exactly delta distinct donor vertices to side A"
            )
        fresh = standard_bipartition(delta, delta)
        dist = Distribution.from_mapping(
            {v: (0 if v in to_a else 1) for v in donor_vertices}
        )
        instance = combine(instance, step.donor_block, fresh, dist, verify=verify, cap=cap)
    if verify:
        comps = components(instance.graph)
        if len(comps) != instance.m:
            raise VerificationError("component count does not match block count")
        for comp in comps:
            parts = complete_bipartite_parts(instance.graph, comp)
            if parts is None or len(parts[0]) != delta or len(parts[1]) != delta:
                raise VerificationError("a component is not balanced complete bipartite")
        if not is_minimally_rgd(instance, cap):
            raise VerificationError("result is not minimally disconnected")
    return instance


def _checked_association(
    instance: Instance, association: Mapping[int, Iterable[int]]
) -> tuple[dict[int, frozenset[int]], dict[int, frozenset[int]]]:
    """Validate a block-to-side association; return sides and their components."""
    if set(association) != set(range(instance.m)):
        raise ConstructionError("association must cover every block exactly once")
    comps = components(instance.graph)
    comp_of_vertex: dict[int, int] = {}
    for ci, comp in enumerate(comps):
        for v in comp:
            comp_of_vertex[v] = ci
    sides: dict[int, frozenset[int]] = {}
    comp_vertices: dict[int, frozenset[int]] = {}
    used: set[int] = set()
    for i in range(instance.m):
        side = frozenset(association[i])
        if not side or not side <= instance.block_set(i):
            raise ConstructionError(
                f"designated side of block {i} must be a nonempty subset of the block"
            )
        ci = comp_of_vertex[min(side)]
        parts = complete_bipartite_parts(instance.graph, comps[ci])
        if parts is None or (side != frozenset(parts[0]) and side != frozenset(parts[1])):
            raise ConstructionError(
                f"designated set of block {i} is not a full side of its component"
            )
        if ci in used:
            raise ConstructionError(f"component {ci} is associated with two blocks")
        used.add(ci)
        sides[i] = side
        comp_vertices[i] = frozenset(comps[ci])
    return sides, comp_vertices


def all_side_transversal(
    instance: Instance, association: Mapping[int, Iterable[int]]
) -> Transversal:
    """The canonical transversal picking the smallest vertex of each designated side."""
    sides, _ = _checked_association(instance, association)
    return Transversal(tuple(min(sides[i]) for i in range(instance.m)))


def second_component_it(
    instance: Instance, association: Mapping[int, Iterable[int]]
) -> Transversal:
    """A transversal that escapes the designated sides.

    Peels blocks that have shrunk to exactly their designated side: pick their
    smallest vertex, drop their whole component, shrink the remaining blocks,
    and repeat. Blocks that survive the loop still hold an off-side vertex;
    picking the smallest off-side vertex there completes an independent
    transversal that no all-designated-side transversal can reach by single
    swaps.
    """
    sides, comp_vertices = _checked_association(instance, association)
    active = set(range(instance.m))
    remaining = {i: set(instance.blocks[i]) for i in range(instance.m)}
    pick: dict[int, int] = {}
    while True:
        ready = {i for i in active if remaining[i] == set(sides[i])}
        if not ready:
            break
        removed: set[int] = set()
        for i in sorted(ready):
            pick[i] = min(remaining[i])
            removed |= comp_vertices[i]
        active -= ready
        for i in active:
            remaining[i] -= removed
            if not remaining[i]:
                raise ConstructionError(
                    f"block {i} emptied while peeling; instance is not elementary"
                )
    if not active:
        raise ConstructionError(
            "every block reduced to its designated side; instance is not elementary"
        )
    for i in sorted(active):
        off_side = remaining[i] - sides[i]
        pick[i] = min(off_side)
    result = Transversal(tuple(pick[i] for i in range(instance.m)))
    if not is_independent(instance, result):
        raise VerificationError("peel loop produced a dependent transversal")
    return result
